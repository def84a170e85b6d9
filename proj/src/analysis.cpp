#include <accdngd/analysis.hpp>
#include <accdngd/error.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

namespace accdngd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool has_alpha(AlgoKind k) {
  return k == AlgoKind::AccDngdSC || k == AlgoKind::AccDngdNSC || k == AlgoKind::CNGDSC || k == AlgoKind::CNGDNSC;
}

}  // namespace

TraceRecord record(const AlgoState& st, const ObjectiveSuite& suite, double fstar) {
  TraceRecord r;
  r.t = st.t;
  const auto n = st.x.rows();
  double sum = 0.0, worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    sum += excess(suite, st.x.row(i), fstar);
    worst = std::max(worst, excess(suite, st.y.row(i), fstar));
  }
  r.avg_obj_err = sum / static_cast<double>(n);
  r.max_individual_err = worst;
  r.consensus_y = n == 1 ? 0.0 : consensus_distance(st.y);
  const RowVector g = row_mean(st.grad);
  if (is_tracking(st.kind))
    r.consensus_s = n == 1 ? 0.0 : (st.s.rowwise() - g).norm();
  else
    r.consensus_s = kNaN;
  r.grad_norm = g.norm();
  r.eta_t = st.eta;
  r.alpha_t = has_alpha(st.kind) ? st.alpha : kNaN;
  r.comm_count = st.comm_count;
  return r;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), ErrorKind::InvalidParam, "fit_line: length mismatch");
  require(x.size() >= 2, ErrorKind::InvalidParam, "fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mx, dy = y[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  require(sxx > 0.0, ErrorKind::InvalidParam, "fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.points = static_cast<int>(x.size());
  return f;
}

namespace {

void window(const std::vector<double>& t, const std::vector<double>& err, double t_min, double t_max, bool log_t,
            std::vector<double>& xs, std::vector<double>& ys) {
  require(t.size() == err.size(), ErrorKind::InvalidParam, "trace length mismatch");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_min || t[k] > t_max) continue;
    if (!(err[k] > 0.0))
      throw Error(ErrorKind::NonPositiveError, "non-positive error at t = " + std::to_string(t[k]));
    xs.push_back(log_t ? std::log(t[k]) : t[k]);
    ys.push_back(std::log(err[k]));
  }
}

void split(const std::vector<TraceRecord>& trace, std::vector<double>& t, std::vector<double>& e) {
  t.reserve(trace.size());
  e.reserve(trace.size());
  for (const auto& r : trace) {
    t.push_back(static_cast<double>(r.t));
    e.push_back(r.avg_obj_err);
  }
}

}  // namespace

double loglog_slope(const std::vector<double>& t, const std::vector<double>& err, double t_min, double t_max) {
  require(t_min >= 1.0 && t_max > t_min, ErrorKind::InvalidParam, "loglog window needs t_max > t_min >= 1");
  std::vector<double> xs, ys;
  window(t, err, t_min, t_max, true, xs, ys);
  return fit_line(xs, ys).slope;
}

double loglog_slope(const std::vector<TraceRecord>& trace, long t_min, long t_max) {
  std::vector<double> t, e;
  split(trace, t, e);
  return loglog_slope(t, e, static_cast<double>(t_min), static_cast<double>(t_max));
}

RateFit linear_rate(const std::vector<double>& t, const std::vector<double>& err, double t_min, double t_max) {
  require(t_max > t_min, ErrorKind::InvalidParam, "rate window needs t_max > t_min");
  std::vector<double> xs, ys;
  window(t, err, t_min, t_max, false, xs, ys);
  const LineFit f = fit_line(xs, ys);
  return {std::exp(f.slope), f.r_squared};
}

RateFit linear_rate(const std::vector<TraceRecord>& trace, long t_min, long t_max) {
  std::vector<double> t, e;
  split(trace, t, e);
  return linear_rate(t, e, static_cast<double>(t_min), static_cast<double>(t_max));
}

RateFit linear_rate_in_band(const std::vector<TraceRecord>& trace, double lo, double hi) {
  std::vector<double> xs, ys;
  for (const auto& r : trace)
    if (r.avg_obj_err >= lo && r.avg_obj_err <= hi) {
      xs.push_back(static_cast<double>(r.t));
      ys.push_back(std::log(r.avg_obj_err));
    }
  const LineFit f = fit_line(xs, ys);
  return {std::exp(f.slope), f.r_squared};
}

// ---- gain matrices -------------------------------------------------------------

double charpoly_sc(double z, double eta, double sigma, double L, double a) {
  const double el = eta * L;
  const double k1 = 4.0 * el + sigma * el;
  const double k2 = 2.0 * el * el * (4.0 + sigma) + el * sigma * (2.0 + a * sigma) +
                    2.0 * el * a * a * sigma * (2.0 + a * sigma) / (1.0 + a);
  const double c = (1.0 - a) / (1.0 + a) * sigma;
  return (z - sigma) * (z - c) * (z - sigma - 2.0 * el) - (k1 * (z - sigma - 2.0 * el) + k2);
}

double charpoly_nsc(double z, double eta, double sigma, double L) {
  const double el = eta * L;
  const double d = z - sigma;
  return d * d * (z - sigma - 2.0 * el) - 5.0 * el * (z - sigma - 2.0 * el) - 2.0 * el * sigma - 10.0 * el * el;
}

namespace {

void require_gain_params(double eta, double sigma, double L) {
  require(eta > 0.0 && L > 0.0, ErrorKind::InvalidParam, "eta and L must be positive");
  require(sigma > 0.0 && sigma < 1.0, ErrorKind::InvalidParam, "sigma must lie in (0, 1)");
}

struct Spectrum {
  double rho = 0;
  double second = 0;
  double imag = 0;
};

Spectrum perron(const Eigen::Matrix3d& g) {
  Eigen::EigenSolver<Eigen::Matrix3d> es(g, false);
  const auto ev = es.eigenvalues();
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(ev(k)) > std::abs(ev(best))) best = k;
  Spectrum s;
  s.rho = ev(best).real();
  s.imag = std::abs(ev(best).imag());
  for (int k = 0; k < 3; ++k)
    if (k != best) s.second = std::max(s.second, std::abs(ev(k)));
  return s;
}

// Largest root d > 0 of d^3 - 2el d^2 - 5el d - 2 sigma el, i.e. theta - sigma
// for the vanishing-step gain matrix. Newton from above converges monotonically
// since the cubic is convex to the right of its largest root.
double nsc_gap(double eta, double sigma, double L, double guess) {
  const double el = eta * L;
  auto q = [&](double d) { return ((d - 2.0 * el) * d - 5.0 * el) * d - 2.0 * sigma * el; };
  auto dq = [&](double d) { return (3.0 * d - 4.0 * el) * d - 5.0 * el; };
  // an upper bound on the root: every negative term is dominated once d exceeds it
  double d = std::max({guess, 3.0 * el, std::sqrt(15.0 * el), std::cbrt(6.0 * sigma * el)}) * 1.01;
  for (int k = 0; k < 200; ++k) {
    const double step = q(d) / dq(d);
    d -= step;
    if (std::abs(step) <= 1e-17 * d) break;
  }
  return d;
}

}  // namespace

GainMatrixSC gain_matrix_sc(double eta, double sigma, double L, double mu) {
  require_gain_params(eta, sigma, L);
  require(mu > 0.0 && mu <= L, ErrorKind::InvalidParam, "mu must lie in (0, L]");
  GainMatrixSC out;
  out.eta = eta;
  out.sigma = sigma;
  out.L = L;
  out.mu = mu;
  const double a = std::sqrt(mu * eta);
  require(a < 1.0, ErrorKind::InvalidParam, "sqrt(mu * eta) must be below 1");
  out.alpha = a;
  const double el = eta * L;
  out.g << (1.0 - a) * sigma, a * sigma, el / a,
      (1.0 - a) / (1.0 + a) * a * sigma, (1.0 + a * a) / (1.0 + a) * sigma, 2.0 * el,
      a * sigma, 2.0, sigma + 2.0 * el;
  const Spectrum sp = perron(out.g);
  out.rho = sp.rho;
  out.second_modulus = sp.second;
  out.poly_residual = std::abs(charpoly_sc(out.rho, eta, sigma, L, a));
  return out;
}

GainMatrixNSC gain_matrix_nsc(double eta, double sigma, double L) {
  require_gain_params(eta, sigma, L);
  GainMatrixNSC out;
  out.eta = eta;
  out.sigma = sigma;
  out.L = L;
  out.g << sigma, 0.0, eta,
      sigma, sigma, 2.0 * eta,
      L, 2.0 * L, sigma + 2.0 * eta * L;
  const Spectrum sp = perron(out.g);
  out.poly_residual = std::abs(charpoly_nsc(sp.rho, eta, sigma, L));
  // polish the gap theta - sigma so the eigenvector entries keep full
  // relative precision when eta is tiny
  const double d = nsc_gap(eta, sigma, L, sp.rho - sigma);
  out.theta = sigma + d;
  const double chi1 = eta / d;
  const double chi2 = (sigma * chi1 + 2.0 * eta) / d;
  out.chi << chi1, chi2, 1.0;
  out.eig_residual = (out.g * out.chi - out.theta * out.chi).norm();
  return out;
}

// ---- certification ---------------------------------------------------------------

void CertReport::add(CertRow row) {
  row.ok = row.margin >= -kCertTol * std::max(1.0, std::abs(row.bound));
  if (!row.ok) ++violations;
  rows.push_back(std::move(row));
}

void CertReport::merge(const CertReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  violations += other.violations;
  max_eig_residual = std::max(max_eig_residual, other.max_eig_residual);
  max_poly_residual = std::max(max_poly_residual, other.max_poly_residual);
}

namespace {

std::vector<double> log_uniform(double lo, double hi, int samples, Rng& rng) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<double> out;
  out.reserve(samples + 1);
  for (int k = 0; k < samples; ++k) out.push_back(std::exp(u(rng)));
  out.push_back(0.999 * hi);
  return out;
}

CertRow row(const char* lemma, const char* check, double sigma, double L, double mu, double eta, double value,
            double bound, bool upper) {
  CertRow r;
  r.lemma = lemma;
  r.check = check;
  r.sigma = sigma;
  r.L = L;
  r.mu = mu;
  r.eta = eta;
  r.value = value;
  r.bound = bound;
  r.margin = upper ? bound - value : value - bound;
  return r;
}

}  // namespace

CertReport certify_lemma5(double sigma, double L, double mu, int samples, Rng& rng) {
  require(samples >= 1, ErrorKind::InvalidParam, "need at least one sample");
  const double limit = std::min(std::pow(1.0 - sigma, 3) / (512.0 * L), sigma * sigma * sigma / (64.0 * L));
  CertReport rep;
  for (double eta : log_uniform(limit * 1e-6, limit, samples, rng)) {
    const GainMatrixSC g = gain_matrix_sc(eta, sigma, L, mu);
    const double el = eta * L;
    rep.max_poly_residual = std::max(rep.max_poly_residual, g.poly_residual);
    rep.add(row("5", "rho_lower", sigma, L, mu, eta, g.rho, sigma + std::cbrt(sigma * el), false));
    rep.add(row("5", "rho_upper", sigma, L, mu, eta, g.rho, sigma + 4.0 * std::cbrt(el), true));
    rep.add(row("5", "upper_below_theta", sigma, L, mu, eta, sigma + 4.0 * std::cbrt(el), (1.0 + sigma) / 2.0, true));
    rep.add(row("5", "perron_dominant", sigma, L, mu, eta, g.second_modulus, g.rho, true));
    rep.add(row("5", "charpoly", sigma, L, mu, eta, g.poly_residual, 1e-8, true));
  }
  return rep;
}

CertReport certify_lemmas8_10(double sigma, double L, int samples, Rng& rng) {
  require(samples >= 1, ErrorKind::InvalidParam, "need at least one sample");
  require(sigma > 0.0 && sigma < 1.0 && L > 0.0, ErrorKind::InvalidParam, "sigma in (0,1), L > 0");
  CertReport rep;
  auto track = [&](const GainMatrixNSC& g) {
    rep.max_eig_residual = std::max(rep.max_eig_residual, g.eig_residual);
    rep.max_poly_residual = std::max(rep.max_poly_residual, g.poly_residual);
    rep.add(row("8-10", "eig_residual", sigma, L, 0, g.eta, g.eig_residual, 1e-10, true));
    rep.add(row("8-10", "charpoly", sigma, L, 0, g.eta, g.poly_residual, 1e-8, true));
  };

  for (double eta : log_uniform(1e-6 / L, 1.0 / L, samples, rng)) {
    const GainMatrixNSC g = gain_matrix_nsc(eta, sigma, L);
    track(g);
    rep.add(row("8", "theta_lower", sigma, L, 0, eta, g.theta, sigma, false));
    rep.add(row("8", "theta_upper", sigma, L, 0, eta, g.theta, sigma + 4.0 * std::cbrt(eta * L), true));
    rep.add(row("8", "chi2_upper", sigma, L, 0, eta, g.chi(1), 2.0 * std::cbrt(eta) / std::cbrt(L * L), true));
    // strictness of theta > sigma: the gap itself must be positive
    CertRow gap = row("8", "theta_strict", sigma, L, 0, eta, g.theta - sigma, 0.0, false);
    gap.margin = g.theta - sigma > 0.0 ? gap.margin : -1.0;
    rep.add(gap);
  }

  const double lim9 = std::sqrt(sigma) / (2.0 * std::sqrt(2.0) * L);
  for (double eta : log_uniform(lim9 * 1e-6, lim9, samples, rng)) {
    const GainMatrixNSC g = gain_matrix_nsc(eta, sigma, L);
    track(g);
    const double c = std::cbrt(sigma * eta * L);
    rep.add(row("9", "theta_lower", sigma, L, 0, eta, g.theta, sigma + c, false));
    rep.add(row("9", "chi1_upper", sigma, L, 0, eta, g.chi(0), eta / c, true));
  }

  const double lim10 = sigma * sigma / (729.0 * L);
  std::uniform_real_distribution<double> u(std::log(lim10 * 1e-6), std::log(lim10));
  for (int k = 0; k < samples; ++k) {
    double z1 = std::exp(u(rng)), z2 = std::exp(u(rng));
    if (z1 < z2) std::swap(z1, z2);
    if (k == 0) z2 = z1;  // equality case
    const GainMatrixNSC g1 = gain_matrix_nsc(z1, sigma, L);
    const GainMatrixNSC g2 = gain_matrix_nsc(z2, sigma, L);
    track(g1);
    track(g2);
    const double lr = std::log(z1 / z2);
    CertRow r1 = row("10", "chi1_ratio_log", sigma, L, 0, z1, std::log(g1.chi(0) / g2.chi(0)), 6.0 / sigma * lr, true);
    r1.eta2 = z2;
    rep.add(r1);
    CertRow r2 = row("10", "chi2_ratio_log", sigma, L, 0, z1, std::log(g1.chi(1) / g2.chi(1)), 28.0 / sigma * lr, true);
    r2.eta2 = z2;
    rep.add(r2);
  }
  return rep;
}

CertReport certify_lemma12(double eta, double t0, double beta, double L, long horizon) {
  require(eta > 0.0 && L > 0.0, ErrorKind::InvalidParam, "eta and L must be positive");
  require(t0 >= 1.0, ErrorKind::InvalidParam, "t0 must be at least 1");
  require(beta >= 0.0 && beta < 2.0, ErrorKind::InvalidParam, "beta must lie in [0, 2)");
  require(horizon >= 10, ErrorKind::InvalidParam, "horizon must be at least 10");
  const StepSchedule sched = beta == 0.0 ? StepSchedule::fixed(eta) : StepSchedule::vanishing(eta, t0, beta);
  const double eta0 = schedule_eta(sched, 0);
  require(eta0 < 1.0 / (4.0 * L), ErrorKind::InvalidParam, "eta0 must be below 1/(4L)");
  const double D = thm4_D(beta, t0);

  CertReport rep;
  double alpha = std::sqrt(eta0 * L);
  double log_lambda = 0.0;  // lambda_0 = 1
  double eta_t = eta0;
  std::vector<double> ts, lambdas;
  for (long t = 0; t <= horizon; ++t) {
    const double td = static_cast<double>(t);
    rep.add(row("12", "alpha_upper", 0, L, 0, eta, alpha, 2.0 / (td + 1.0), true));
    if (beta > 0.0) {
      // compare in log space: lambda_t underflows long before the bound does
      const double log_bound = std::log(D) - (2.0 - beta) * std::log(td + t0);
      CertRow r = row("12", "lambda_lower_log", 0, L, 0, eta, log_lambda, log_bound, false);
      rep.add(r);
    }
    if (t >= 1) {
      ts.push_back(td);
      lambdas.push_back(std::exp(log_lambda));
    }
    log_lambda += std::log1p(-alpha);
    const double eta_next = schedule_eta(sched, t + 1);
    alpha = next_alpha(alpha, eta_t, eta_next);
    eta_t = eta_next;
  }
  rep.lambda_slope = loglog_slope(ts, lambdas, static_cast<double>(horizon) / 10.0, static_cast<double>(horizon));
  for (auto& r : rep.rows) {
    r.beta = beta;
    r.t0 = t0;
  }
  return rep;
}

CertReport certify_lemma5_grid(int samples, std::uint64_t seed) {
  CertReport all;
  std::uint64_t k = 0;
  for (double sigma : {0.3, 0.6, 0.9})
    for (double L : {1.0, 100.0})
      for (double ratio : {1e-3, 1e-1}) {
        Rng rng = derive_rng(seed, {5, k++});
        all.merge(certify_lemma5(sigma, L, ratio * L, samples, rng));
      }
  return all;
}

CertReport certify_lemmas8_10_grid(int samples, std::uint64_t seed) {
  CertReport all;
  std::uint64_t k = 0;
  for (double sigma : {0.3, 0.6, 0.9})
    for (double L : {1.0, 100.0}) {
      Rng rng = derive_rng(seed, {8, k++});
      all.merge(certify_lemmas8_10(sigma, L, samples, rng));
    }
  return all;
}

CertReport certify_lemma12_grid(long horizon) {
  CertReport all;
  for (double L : {1.0, 100.0})
    for (double eta_l : {1.0 / 8.0, 1.0 / 5.0})
      for (double beta : {0.0, 0.61, 1.0, 1.5})
        for (double t0 : {1.0, 10.0}) {
          CertReport r = certify_lemma12(eta_l / L, t0, beta, L, horizon);
          all.merge(r);
        }
  return all;
}

void write_report_csv(std::ostream& os, const CertReport& report) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "lemma,check,sigma,L,mu,eta,eta2,beta,t0,value,bound,margin,ok\n";
  for (const auto& r : report.rows)
    os << r.lemma << ',' << r.check << ',' << r.sigma << ',' << r.L << ',' << r.mu << ',' << r.eta << ',' << r.eta2
       << ',' << r.beta << ',' << r.t0 << ',' << r.value << ',' << r.bound << ',' << r.margin << ',' << (r.ok ? 1 : 0) << '\n';
  os.precision(old);
}

// ---- runtime invariants ------------------------------------------------------------

InexactGradientReport check_inexact_gradient(const AlgoState& st, const ObjectiveSuite& suite, int samples,
                                             Rng& rng) {
  require(samples >= 1, ErrorKind::InvalidParam, "need at least one sample");
  require(st.y.rows() == suite.n && st.grad.rows() == suite.n, ErrorKind::InvalidParam,
          "inexact-gradient check needs a distributed state");
  const int n = suite.n;
  const RowVector ybar = row_mean(st.y);
  const RowVector g = row_mean(st.grad);
  double fhat = 0.0;
  for (int i = 0; i < n; ++i)
    fhat += local_value(suite, i, st.y.row(i)) + st.grad.row(i).dot(ybar - st.y.row(i));
  fhat /= n;
  const double spread = (st.y.rowwise() - ybar).squaredNorm();
  // omega at a mix of scales around y_bar, including y_bar itself
  const double radius = std::max(1.0, std::sqrt(spread / n) + ybar.norm());
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> expo(-6.0, 1.0);

  InexactGradientReport rep;
  for (int k = 0; k < samples; ++k) {
    RowVector omega = ybar;
    if (k > 0) {
      RowVector dir(suite.dim);
      for (int c = 0; c < suite.dim; ++c) dir(c) = gauss(rng);
      omega += radius * std::pow(10.0, expo(rng)) * dir / std::max(dir.norm(), 1e-300);
    }
    const RowVector d = omega - ybar;
    const double f = global_value(suite, omega);
    const double lin = fhat + g.dot(d);
    const double lower = lin + 0.5 * suite.mu * d.squaredNorm();
    const double upper = lin + suite.L * d.squaredNorm() + suite.L / n * spread;
    const double scale = std::max(1.0, std::abs(f));
    const double vl = (lower - f) / scale;
    const double vu = (f - upper) / scale;
    rep.max_lower_violation = std::max(rep.max_lower_violation, vl);
    rep.max_upper_violation = std::max(rep.max_upper_violation, vu);
    if (vl > kCertTol || vu > kCertTol) ++rep.violations;
    ++rep.samples;
  }
  return rep;
}

double tracking_residual(const AlgoState& st) {
  require(is_tracking(st.kind), ErrorKind::InvalidParam, "state has no tracking variable");
  const RowVector sbar = row_mean(st.s);
  const RowVector g = row_mean(st.grad);
  const double rms = std::sqrt(st.grad.squaredNorm() / static_cast<double>(st.grad.rows()));
  const double scale = std::max({g.norm(), rms, std::numeric_limits<double>::min()});
  return (sbar - g).norm() / scale;
}

double average_identity_residual(const AlgoState& b, const AlgoState& a) {
  require(b.kind == a.kind && a.t == b.t + 1, ErrorKind::InvalidParam, "states must be consecutive");
  const RowVector yb = row_mean(b.y), vb = row_mean(b.v), g = row_mean(b.grad);
  const RowVector xa = row_mean(a.x), va = row_mean(a.v), ya = row_mean(a.y);
  auto rel = [](const RowVector& lhs, const RowVector& rhs, std::initializer_list<double> scales) {
    double s = std::max(1.0, lhs.norm());
    for (double v : scales) s = std::max(s, v);
    return (lhs - rhs).norm() / s;
  };
  double worst = 0.0;
  if (b.kind == AlgoKind::AccDngdSC) {
    const double al = b.alpha, eta = b.eta;
    worst = std::max(worst, rel(xa, yb - eta * g, {yb.norm(), eta * g.norm()}));
    worst = std::max(worst, rel(va, (1.0 - al) * vb + al * yb - (eta / al) * g,
                                {vb.norm(), yb.norm(), eta / al * g.norm()}));
    worst = std::max(worst, rel(ya, (xa + al * va) / (1.0 + al), {xa.norm(), va.norm()}));
  } else if (b.kind == AlgoKind::AccDngdNSC) {
    const double al = b.alpha, eta = b.eta, al1 = a.alpha;
    worst = std::max(worst, rel(xa, yb - eta * g, {yb.norm(), eta * g.norm()}));
    worst = std::max(worst, rel(va, vb - (eta / al) * g, {vb.norm(), eta / al * g.norm()}));
    worst = std::max(worst, rel(ya, (1.0 - al1) * xa + al1 * va, {xa.norm(), va.norm()}));
  } else {
    throw Error(ErrorKind::InvalidParam, "average identities are defined for the accelerated distributed methods");
  }
  return worst;
}

}  // namespace accdngd
