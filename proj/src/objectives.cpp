#include <accdngd/error.hpp>
#include <accdngd/objectives.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace accdngd {

std::string_view to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::LeastSquares: return "case1";
    case CaseKind::Logistic: return "case2";
    case CaseKind::PiecewisePower: return "case3";
  }
  return "unknown";
}

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double ipow(double y, int m) {
  double r = 1.0;
  for (int k = 0; k < m; ++k) r *= y;
  return r;
}

// h(y) = y^m / m inside the unit interval, |y| - (m-1)/m outside.
double piecewise_h(double y, int m) {
  if (std::abs(y) <= 1.0) return ipow(y, m) / m;
  return std::abs(y) - static_cast<double>(m - 1) / m;
}

double piecewise_dh(double y, int m) {
  if (std::abs(y) <= 1.0) return ipow(y, m - 1);
  return y > 0.0 ? 1.0 : -1.0;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, what);
}

void check_finite(const RowVector& v, const char* what) {
  if (!v.allFinite()) throw Error(ErrorKind::NonFinite, what);
}

void check_agent(const ObjectiveSuite& s, int i) {
  require(i >= 0 && i < s.n, ErrorKind::InvalidParam, "agent index out of range");
}

Matrix gaussian_matrix(int rows, int cols, double sd, Rng& rng) {
  std::normal_distribution<double> g(0.0, sd);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = g(rng);
  return m;
}

Matrix features_with_intercept(int rows, int dim, double sd, Rng& rng) {
  Matrix u(rows, dim);
  std::normal_distribution<double> g(0.0, sd);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < dim; ++c) u(r, c) = g(rng);
    u(r, dim - 1) = 1.0;
  }
  return u;
}

void check_blocks(const std::vector<Matrix>& features, const std::vector<Vector>& targets) {
  require(!features.empty(), ErrorKind::InvalidParam, "suite needs at least one agent");
  require(features.size() == targets.size(), ErrorKind::InvalidParam, "features/targets agent count mismatch");
  const auto dim = features.front().cols();
  require(dim >= 1, ErrorKind::InvalidParam, "dimension must be positive");
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& u = features[i];
    require(u.rows() >= 1 && u.cols() == dim, ErrorKind::InvalidParam, "ragged feature block");
    require(targets[i].size() == u.rows(), ErrorKind::InvalidParam, "target length mismatch");
    require(u.allFinite() && targets[i].allFinite(), ErrorKind::InvalidParam, "non-finite data");
    require((u.col(dim - 1).array() == 1.0).all(), ErrorKind::InvalidParam, "last feature must be the intercept 1");
  }
}

double max_eig(const Matrix& h) { return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff(); }
double min_eig(const Matrix& h) { return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff(); }

Matrix scaled_gram(const Matrix& u, double scale) {
  Matrix g = Matrix::Zero(u.cols(), u.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(u.transpose(), scale);
  return g.selfadjointView<Eigen::Lower>();
}

Matrix logistic_hessian(const ObjectiveSuite& s, const RowVector& x) {
  Matrix h = Matrix::Zero(s.dim, s.dim);
  for (int i = 0; i < s.n; ++i) {
    const Matrix& u = s.features[i];
    const Vector z = u * x.transpose();
    Vector w(z.size());
    for (Eigen::Index m = 0; m < z.size(); ++m) {
      const double p = sigmoid(z(m));
      w(m) = p * (1.0 - p);
    }
    h.noalias() += u.transpose() * w.asDiagonal() * u / static_cast<double>(u.rows());
  }
  return h / static_cast<double>(s.n);
}

// Centralized accelerated descent with gradient-based restart. Returns the
// iterate with the smallest gradient norm seen.
Reference nesterov_oracle(const ObjectiveSuite& s, double lipschitz, double tol, long max_iter) {
  const double step = 1.0 / lipschitz;
  RowVector x = RowVector::Zero(s.dim);
  RowVector y = x;
  RowVector best = x;
  RowVector gy = global_grad(s, y);
  double best_norm = gy.norm();
  long k = 0;
  for (long it = 0; it < max_iter && best_norm > tol; ++it) {
    RowVector x1 = y - step * gy;
    if (gy.dot(x1 - x) > 0.0) k = 0;
    const double beta = static_cast<double>(k) / static_cast<double>(k + 3);
    y = x1 + beta * (x1 - x);
    x = std::move(x1);
    ++k;
    if (!x.allFinite() || !y.allFinite()) break;
    const RowVector gx = global_grad(s, x);
    const double nx = gx.norm();
    if (nx < best_norm) {
      best_norm = nx;
      best = x;
    }
    gy = global_grad(s, y);
  }
  if (!(best_norm <= tol)) {
    std::ostringstream msg;
    msg << "reference solver stopped at gradient norm " << best_norm << " (target " << tol << ")";
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  return {best, global_value(s, best)};
}

void finalize_reference(ObjectiveSuite& s, double tol) {
  const Reference ref = solve_reference(s, tol);
  s.xstar = ref.xstar;
  s.fstar = ref.fstar;
}

}  // namespace

ObjectiveSuite make_least_squares(std::vector<Matrix> features, std::vector<Vector> targets) {
  check_blocks(features, targets);
  ObjectiveSuite s;
  s.kind = CaseKind::LeastSquares;
  s.n = static_cast<int>(features.size());
  s.dim = static_cast<int>(features.front().cols());
  s.features = std::move(features);
  s.targets = std::move(targets);
  s.gram = Matrix::Zero(s.dim, s.dim);
  s.L = 0.0;
  s.mu = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.n; ++i) {
    const double m = static_cast<double>(s.features[i].rows());
    const Matrix g = scaled_gram(s.features[i], 1.0 / m);
    s.gram += g;
    const Eigen::SelfAdjointEigenSolver<Matrix> es(2.0 * g, Eigen::EigenvaluesOnly);
    s.L = std::max(s.L, es.eigenvalues().maxCoeff());
    s.mu = std::min(s.mu, std::max(0.0, es.eigenvalues().minCoeff()));
  }
  s.gram /= static_cast<double>(s.n);
  // per-agent rank deficiency (M_i < N) leaves mu at round-off level
  if (s.mu <= 1e-12 * s.L) s.mu = 0.0;
  finalize_reference(s, 1e-12);
  return s;
}

ObjectiveSuite make_logistic(std::vector<Matrix> features, std::vector<Vector> labels) {
  check_blocks(features, labels);
  for (const auto& v : labels)
    require(((v.array() == 0.0) || (v.array() == 1.0)).all(), ErrorKind::InvalidParam, "labels must be 0 or 1");
  ObjectiveSuite s;
  s.kind = CaseKind::Logistic;
  s.n = static_cast<int>(features.size());
  s.dim = static_cast<int>(features.front().cols());
  s.features = std::move(features);
  s.targets = std::move(labels);
  for (int i = 0; i < s.n; ++i) {
    const double m = static_cast<double>(s.features[i].rows());
    s.L = std::max(s.L, max_eig(scaled_gram(s.features[i], 1.0 / (4.0 * m))));
  }
  try {
    finalize_reference(s, 1e-12);
  } catch (const Error& e) {
    const bool degenerate = std::any_of(s.targets.begin(), s.targets.end(), [](const Vector& v) {
      return (v.array() == v(0)).all();
    });
    if (degenerate) throw Error(ErrorKind::DegenerateLabels, std::string("an agent has identical labels; ") + e.what());
    throw;
  }
  s.mu = std::max(0.0, min_eig(logistic_hessian(s, s.xstar)));
  return s;
}

ObjectiveSuite make_piecewise_power(Matrix a, Matrix b, int power) {
  require(a.rows() >= 1 && a.cols() >= 1, ErrorKind::InvalidParam, "empty a");
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::InvalidParam, "a/b shape mismatch");
  require(a.allFinite() && b.allFinite(), ErrorKind::InvalidParam, "non-finite data");
  require(power >= 2 && power % 2 == 0, ErrorKind::InvalidParam, "power must be even and >= 2");
  ObjectiveSuite s;
  s.kind = CaseKind::PiecewisePower;
  s.n = static_cast<int>(a.rows());
  s.dim = static_cast<int>(a.cols());
  s.a = std::move(a);
  s.b = std::move(b);
  s.power = power;
  s.b_mean = RowVector::Zero(s.dim);
  for (int i = 0; i < s.n; ++i) s.b_mean += s.b.row(i);
  s.b_mean /= static_cast<double>(s.n);
  s.L = static_cast<double>(power - 1) * s.a.rowwise().squaredNorm().maxCoeff();
  s.mu = 0.0;
  finalize_reference(s, 1e-12);
  return s;
}

ObjectiveSuite gen_case1(int n, int samples_per_agent, int dim, Rng& rng) {
  require(n >= 1 && samples_per_agent >= 1 && dim >= 1, ErrorKind::InvalidParam, "case1 sizes must be positive");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RowVector truth(dim);
  for (int c = 0; c < dim; ++c) truth(c) = unif(rng);
  std::normal_distribution<double> noise(0.0, 10.0);
  std::vector<Matrix> features;
  std::vector<Vector> targets;
  for (int i = 0; i < n; ++i) {
    Matrix u = features_with_intercept(samples_per_agent, dim, 20.0, rng);
    Vector v = u * truth.transpose();
    for (int m = 0; m < samples_per_agent; ++m) v(m) += noise(rng);
    features.push_back(std::move(u));
    targets.push_back(std::move(v));
  }
  return make_least_squares(std::move(features), std::move(targets));
}

ObjectiveSuite gen_case2(int n, int samples_per_agent, int dim, Rng& rng) {
  require(n >= 1 && samples_per_agent >= 1 && dim >= 1, ErrorKind::InvalidParam, "case2 sizes must be positive");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RowVector truth(dim);
  for (int c = 0; c < dim; ++c) truth(c) = unif(rng);
  std::vector<Matrix> features;
  std::vector<Vector> labels;
  for (int i = 0; i < n; ++i) {
    Matrix u = features_with_intercept(samples_per_agent, dim, 10.0, rng);
    Vector v(samples_per_agent);
    for (int m = 0; m < samples_per_agent; ++m) {
      const double p = sigmoid(u.row(m).dot(truth));
      v(m) = unif(rng) < p ? 1.0 : 0.0;
    }
    features.push_back(std::move(u));
    labels.push_back(std::move(v));
  }
  return make_logistic(std::move(features), std::move(labels));
}

ObjectiveSuite gen_case3(int n, int dim, Rng& rng) {
  require(n >= 1 && dim >= 1, ErrorKind::InvalidParam, "case3 sizes must be positive");
  Matrix a = gaussian_matrix(n, dim, 1.0, rng);
  Matrix b = gaussian_matrix(n, dim, 1.0, rng);
  RowVector partial = RowVector::Zero(dim);
  for (int i = 0; i + 1 < n; ++i) partial += b.row(i);
  b.row(n - 1) = -partial;
  return make_piecewise_power(std::move(a), std::move(b), 12);
}

double local_value(const ObjectiveSuite& s, int i, const RowVector& x) {
  check_agent(s, i);
  double out = 0.0;
  switch (s.kind) {
    case CaseKind::LeastSquares: {
      const Vector r = s.features[i] * x.transpose() - s.targets[i];
      out = r.squaredNorm() / static_cast<double>(r.size());
      break;
    }
    case CaseKind::Logistic: {
      const Vector z = s.features[i] * x.transpose();
      double acc = 0.0;
      for (Eigen::Index m = 0; m < z.size(); ++m) acc += softplus(z(m)) - s.targets[i](m) * z(m);
      out = acc / static_cast<double>(z.size());
      break;
    }
    case CaseKind::PiecewisePower:
      out = piecewise_h(s.a.row(i).dot(x), s.power) + s.b.row(i).dot(x);
      break;
  }
  check_finite(out, "local value overflow");
  return out;
}

RowVector local_grad(const ObjectiveSuite& s, int i, const RowVector& x) {
  check_agent(s, i);
  RowVector g;
  switch (s.kind) {
    case CaseKind::LeastSquares: {
      const Matrix& u = s.features[i];
      const Vector r = u * x.transpose() - s.targets[i];
      g = (2.0 / static_cast<double>(u.rows())) * (r.transpose() * u);
      break;
    }
    case CaseKind::Logistic: {
      const Matrix& u = s.features[i];
      const Vector z = u * x.transpose();
      Vector r(z.size());
      for (Eigen::Index m = 0; m < z.size(); ++m) r(m) = sigmoid(z(m)) - s.targets[i](m);
      g = (r.transpose() * u) / static_cast<double>(u.rows());
      break;
    }
    case CaseKind::PiecewisePower:
      g = piecewise_dh(s.a.row(i).dot(x), s.power) * s.a.row(i) + s.b.row(i);
      break;
  }
  check_finite(g, "local gradient overflow");
  return g;
}

double global_value(const ObjectiveSuite& s, const RowVector& x) {
  double acc = 0.0;
  for (int i = 0; i < s.n; ++i) acc += local_value(s, i, x);
  return acc / static_cast<double>(s.n);
}

RowVector global_grad(const ObjectiveSuite& s, const RowVector& x) {
  RowVector acc = RowVector::Zero(s.dim);
  for (int i = 0; i < s.n; ++i) acc += local_grad(s, i, x);
  return acc / static_cast<double>(s.n);
}

Matrix stacked_local_grads(const ObjectiveSuite& s, const Matrix& points) {
  require(points.rows() == s.n && points.cols() == s.dim, ErrorKind::InvalidParam, "stacked point shape mismatch");
  Matrix out(s.n, s.dim);
  for (int i = 0; i < s.n; ++i) out.row(i) = local_grad(s, i, points.row(i));
  return out;
}

double excess(const ObjectiveSuite& s, const RowVector& x, double fstar) {
  switch (s.kind) {
    case CaseKind::LeastSquares: {
      if (fstar == s.fstar && s.xstar.size() == s.dim) {
        const RowVector d = x - s.xstar;
        const double q = d * s.gram * d.transpose();
        check_finite(q, "excess overflow");
        return q;
      }
      return global_value(s, x) - fstar;
    }
    case CaseKind::Logistic:
      return global_value(s, x) - fstar;
    case CaseKind::PiecewisePower: {
      double acc = 0.0;
      for (int i = 0; i < s.n; ++i) acc += piecewise_h(s.a.row(i).dot(x), s.power);
      const double v = acc / static_cast<double>(s.n) + s.b_mean.dot(x) - fstar;
      check_finite(v, "excess overflow");
      return v;
    }
  }
  return 0.0;
}

Reference solve_reference(const ObjectiveSuite& s, double tol) {
  require(tol >= 1e-12, ErrorKind::InvalidParam, "reference tolerance below 1e-12");
  switch (s.kind) {
    case CaseKind::LeastSquares: {
      Vector rhs = Vector::Zero(s.dim);
      for (int i = 0; i < s.n; ++i)
        rhs += s.features[i].transpose() * s.targets[i] / static_cast<double>(s.features[i].rows());
      rhs /= static_cast<double>(s.n);
      const Eigen::SelfAdjointEigenSolver<Matrix> es(s.gram, Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues().minCoeff();
      const double hi = es.eigenvalues().maxCoeff();
      if (!(lo > 1e-13 * hi)) throw Error(ErrorKind::SingularSystem, "aggregate normal equations are singular");
      const Eigen::LDLT<Matrix> ldlt(s.gram);
      Vector x = ldlt.solve(rhs);
      for (int k = 0; k < 3; ++k) x += ldlt.solve(rhs - s.gram * x);
      RowVector xr = x.transpose();
      return {xr, global_value(s, xr)};
    }
    case CaseKind::Logistic: {
      Matrix agg = Matrix::Zero(s.dim, s.dim);
      for (int i = 0; i < s.n; ++i)
        agg += scaled_gram(s.features[i], 1.0 / (4.0 * static_cast<double>(s.features[i].rows())));
      agg /= static_cast<double>(s.n);
      return nesterov_oracle(s, max_eig(agg), tol, 1'000'000);
    }
    case CaseKind::PiecewisePower:
      return nesterov_oracle(s, s.L, tol, 1'000'000);
  }
  return {};
}

namespace {

void put_row(std::ostream& os, const auto& row) {
  for (Eigen::Index c = 0; c < row.size(); ++c) os << (c ? " " : "") << row(c);
  os << '\n';
}

[[noreturn]] void bad_suite(const std::string& what) { throw Error(ErrorKind::ParseError, "suite file: " + what); }

template <class T>
T expect(std::istream& is, const char* key) {
  std::string tag;
  T value{};
  if (!(is >> tag) || tag != key) bad_suite(std::string("expected `") + key + "`");
  if (!(is >> value)) bad_suite(std::string("bad value for `") + key + "`");
  return value;
}

RowVector read_row(std::istream& is, int dim) {
  RowVector r(dim);
  for (int c = 0; c < dim; ++c)
    if (!(is >> r(c))) bad_suite("truncated numeric row");
  return r;
}

}  // namespace

void write_suite(std::ostream& os, const ObjectiveSuite& s) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "accdngd-suite 1\n";
  os << "kind " << static_cast<int>(s.kind) << '\n';
  os << "n " << s.n << '\n';
  os << "dim " << s.dim << '\n';
  os << "power " << s.power << '\n';
  os << "L " << s.L << '\n';
  os << "mu " << s.mu << '\n';
  os << "fstar " << s.fstar << '\n';
  os << "xstar ";
  put_row(os, s.xstar);
  if (s.kind == CaseKind::PiecewisePower) {
    for (int i = 0; i < s.n; ++i) {
      os << "a ";
      put_row(os, s.a.row(i));
      os << "b ";
      put_row(os, s.b.row(i));
    }
  } else {
    for (int i = 0; i < s.n; ++i) {
      const Matrix& u = s.features[i];
      os << "agent " << i << ' ' << u.rows() << '\n';
      for (Eigen::Index m = 0; m < u.rows(); ++m) {
        for (Eigen::Index c = 0; c < u.cols(); ++c) os << u(m, c) << ' ';
        os << s.targets[i](m) << '\n';
      }
    }
  }
  os.precision(old);
}

ObjectiveSuite read_suite(std::istream& is) {
  if (expect<int>(is, "accdngd-suite") != 1) bad_suite("unsupported version");
  const int kind = expect<int>(is, "kind");
  if (kind < 1 || kind > 3) bad_suite("unknown kind");
  ObjectiveSuite s;
  s.kind = static_cast<CaseKind>(kind);
  s.n = expect<int>(is, "n");
  s.dim = expect<int>(is, "dim");
  if (s.n < 1 || s.dim < 1) bad_suite("sizes must be positive");
  s.power = expect<int>(is, "power");
  s.L = expect<double>(is, "L");
  s.mu = expect<double>(is, "mu");
  s.fstar = expect<double>(is, "fstar");
  std::string tag;
  if (!(is >> tag) || tag != "xstar") bad_suite("expected `xstar`");
  s.xstar = read_row(is, s.dim);
  if (s.kind == CaseKind::PiecewisePower) {
    s.a.resize(s.n, s.dim);
    s.b.resize(s.n, s.dim);
    for (int i = 0; i < s.n; ++i) {
      if (!(is >> tag) || tag != "a") bad_suite("expected `a`");
      s.a.row(i) = read_row(is, s.dim);
      if (!(is >> tag) || tag != "b") bad_suite("expected `b`");
      s.b.row(i) = read_row(is, s.dim);
    }
    s.b_mean = RowVector::Zero(s.dim);
    for (int i = 0; i < s.n; ++i) s.b_mean += s.b.row(i);
    s.b_mean /= static_cast<double>(s.n);
  } else {
    s.gram = Matrix::Zero(s.dim, s.dim);
    for (int i = 0; i < s.n; ++i) {
      int idx = 0, rows = 0;
      if (!(is >> tag) || tag != "agent" || !(is >> idx >> rows) || idx != i || rows < 1)
        bad_suite("bad agent header");
      Matrix u(rows, s.dim);
      Vector v(rows);
      for (int m = 0; m < rows; ++m) {
        u.row(m) = read_row(is, s.dim);
        if (!(is >> v(m))) bad_suite("truncated target");
      }
      s.gram += scaled_gram(u, 1.0 / static_cast<double>(rows));
      s.features.push_back(std::move(u));
      s.targets.push_back(std::move(v));
    }
    s.gram /= static_cast<double>(s.n);
  }
  return s;
}

}  // namespace accdngd
