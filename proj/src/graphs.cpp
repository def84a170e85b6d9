#include <accdngd/error.hpp>
#include <accdngd/graphs.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace accdngd {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), adjacency_(n > 0 ? n : 0) {
  require(n >= 1, ErrorKind::InvalidParam, "graph needs at least one node");
  for (auto& [a, b] : edges) {
    require(a >= 0 && a < n && b >= 0 && b < n, ErrorKind::InvalidParam, "edge endpoint out of range");
    require(a != b, ErrorKind::InvalidParam, "self-loop (" + std::to_string(a) + ")");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  require(std::adjacent_find(edges.begin(), edges.end()) == edges.end(), ErrorKind::InvalidParam,
          "duplicate edge");
  edges_ = std::move(edges);
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

int Graph::max_degree() const {
  int d = 0;
  for (const auto& nb : adjacency_) d = std::max(d, static_cast<int>(nb.size()));
  return d;
}

bool Graph::has_edge(int i, int j) const {
  const auto& nb = adjacency_.at(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

bool Graph::connected() const {
  std::vector<char> seen(n_, 0);
  std::deque<int> frontier{0};
  seen[0] = 1;
  int visited = 1;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop_front();
    for (int v : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        frontier.push_back(v);
      }
    }
  }
  return visited == n_;
}

Graph gen_erdos_renyi(int n, double p, Rng& rng, int max_retries) {
  require(n >= 2, ErrorKind::InvalidParam, "erdos-renyi needs n >= 2");
  require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidParam, "edge probability outside [0, 1]");
  require(max_retries >= 1, ErrorKind::InvalidParam, "max_retries must be positive");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unif(rng) < p) edges.emplace_back(i, j);
    Graph g(n, std::move(edges));
    if (g.connected()) return g;
  }
  throw Error(ErrorKind::NotConnected,
              "no connected G(" + std::to_string(n) + ", p) draw in " + std::to_string(max_retries) + " tries");
}

Graph gen_k_cycle(int n, int k) {
  require(n >= 3, ErrorKind::InvalidParam, "k-cycle needs n >= 3");
  require(k >= 1, ErrorKind::InvalidParam, "k-cycle needs k >= 1");
  std::vector<Edge> edges;
  if (2 * k >= n - 1) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  } else {
    for (int i = 0; i < n; ++i)
      for (int d = 1; d <= k; ++d) {
        int j = (i + d) % n;
        edges.emplace_back(std::min(i, j), std::max(i, j));
      }
  }
  return Graph(n, std::move(edges));
}

Graph gen_grid2d(int rows, int cols) {
  require(rows >= 1 && cols >= 1, ErrorKind::InvalidParam, "grid dimensions must be positive");
  require(rows * cols >= 2, ErrorKind::InvalidParam, "grid needs at least two nodes");
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int u = r * cols + c;
      if (c + 1 < cols) edges.emplace_back(u, u + 1);
      if (r + 1 < rows) edges.emplace_back(u, u + cols);
    }
  return Graph(rows * cols, std::move(edges));
}

Graph sample_time_varying(const Graph& ground, double remove_fraction, Rng& rng) {
  require(ground.num_edges() >= 1, ErrorKind::InvalidParam, "ground graph has no edges");
  require(remove_fraction >= 0.0 && remove_fraction <= 1.0, ErrorKind::InvalidParam,
          "remove_fraction outside [0, 1]");
  const auto& all = ground.edges();
  const auto m = all.size();
  const auto keep = static_cast<std::size_t>(std::llround((1.0 - remove_fraction) * static_cast<double>(m)));
  // partial Fisher-Yates over edge indices
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < keep; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, m - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<Edge> kept;
  kept.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) kept.push_back(all[idx[i]]);
  return Graph(ground.n(), std::move(kept));
}

namespace {

double stochastic_defect(const Matrix& w) {
  const double rows = (w.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (w.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

}  // namespace

double second_singular(const Matrix& w) {
  require(w.rows() == w.cols() && w.rows() >= 1, ErrorKind::InvalidParam, "weight matrix must be square");
  require(w.allFinite(), ErrorKind::NotDoublyStochastic, "non-finite weight entry");
  require(stochastic_defect(w) <= 1e-10, ErrorKind::NotDoublyStochastic, "row or column sum differs from 1");
  const auto n = w.rows();
  Matrix centered = w.array() - 1.0 / static_cast<double>(n);
  Eigen::JacobiSVD<Matrix> svd(centered);
  return svd.singularValues()(0);
}

WeightMatrix::WeightMatrix(Matrix w) : w_(std::move(w)), sigma_(0.0) {
  require(w_.rows() == w_.cols() && w_.rows() >= 1, ErrorKind::InvalidParam, "weight matrix must be square");
  require(stochastic_defect(w_) <= 1e-12, ErrorKind::NotDoublyStochastic, "row or column sum differs from 1");
  require((w_.diagonal().array() > 0.0).all(), ErrorKind::InvalidParam, "weight matrix diagonal must be positive");
  sigma_ = second_singular(w_);
}

WeightMatrix laplacian_weights(const Graph& g) {
  require(g.connected(), ErrorKind::NotConnected, "laplacian weights need a connected graph");
  const int n = g.n();
  const double tau = static_cast<double>(g.max_degree() + 1);
  Matrix w = Matrix::Zero(n, n);
  for (const auto& [a, b] : g.edges()) {
    w(a, b) = 1.0 / tau;
    w(b, a) = 1.0 / tau;
  }
  for (int i = 0; i < n; ++i) w(i, i) = 1.0 - static_cast<double>(g.degree(i)) / tau;
  return WeightMatrix(std::move(w));
}

WeightMatrix metropolis_weights(const Graph& g) {
  const int n = g.n();
  Matrix w = Matrix::Zero(n, n);
  for (const auto& [a, b] : g.edges()) {
    const double wij = 1.0 / (1.0 + static_cast<double>(std::max(g.degree(a), g.degree(b))));
    w(a, b) = wij;
    w(b, a) = wij;
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j : g.neighbors(i)) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return WeightMatrix(std::move(w));
}

void write_edge_list(std::ostream& os, const Graph& g) {
  os << "n " << g.n() << '\n';
  for (const auto& [a, b] : g.edges()) os << a << ' ' << b << '\n';
}

Graph read_edge_list(std::istream& is) {
  std::string tag;
  int n = 0;
  if (!(is >> tag >> n) || tag != "n")
    throw Error(ErrorKind::ParseError, "edge list must start with `n <count>`");
  std::vector<Edge> edges;
  int a = 0, b = 0;
  while (is >> a >> b) edges.emplace_back(a, b);
  if (!is.eof()) throw Error(ErrorKind::ParseError, "malformed edge line");
  return Graph(n, std::move(edges));
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << '\n';
  }
  os.precision(old);
}

Graph graph_from_spec(const std::string& spec, Rng& rng) {
  auto fail = [&] { return Error(ErrorKind::ParseError, "bad graph spec `" + spec + "`"); };
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw fail();
  const std::string family = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  std::replace(rest.begin(), rest.end(), ':', ' ');
  std::replace(rest.begin(), rest.end(), 'x', ' ');
  std::istringstream in(rest);
  if (family == "grid2d") {
    int r = 0, c = 0;
    if (!(in >> r >> c)) throw fail();
    return gen_grid2d(r, c);
  }
  if (family == "kcycle") {
    int n = 0, k = 0;
    if (!(in >> n >> k)) throw fail();
    return gen_k_cycle(n, k);
  }
  if (family == "er") {
    int n = 0;
    double p = 0.0;
    if (!(in >> n >> p)) throw fail();
    return gen_erdos_renyi(n, p, rng);
  }
  throw fail();
}

}  // namespace accdngd
