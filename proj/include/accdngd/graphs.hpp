#pragma once

#include <accdngd/types.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace accdngd {

using Edge = std::pair<int, int>;

/// Undirected simple graph on nodes 0..n-1. Edges are stored normalized
/// (first < second) and sorted, so two graphs with the same edge set compare
/// equal and serialize identically.
class Graph {
 public:
  Graph(int n, std::vector<Edge> edges);

  int n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  int degree(int i) const { return static_cast<int>(adjacency_.at(i).size()); }
  int max_degree() const;
  const std::vector<int>& neighbors(int i) const { return adjacency_.at(i); }
  bool has_edge(int i, int j) const;

  /// Breadth-first reachability from node 0.
  bool connected() const;

  bool operator==(const Graph& other) const { return n_ == other.n_ && edges_ == other.edges_; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Erdos-Renyi G(n, p), regenerated until connected. Throws NotConnected once
/// max_retries draws have all been disconnected.
Graph gen_erdos_renyi(int n, double p, Rng& rng, int max_retries = 100);

/// Ring where node i is adjacent to i±1, ..., i±k (mod n). Saturates to the
/// complete graph when 2k >= n-1.
Graph gen_k_cycle(int n, int k);

/// rows x cols lattice; node (r, c) has id r*cols + c.
Graph gen_grid2d(int rows, int cols);

/// Keeps a uniformly random subset of round((1 - remove_fraction)|E|) edges.
/// The result may be disconnected.
Graph sample_time_varying(const Graph& ground, double remove_fraction, Rng& rng);

/// Second-largest singular value of a doubly stochastic matrix, i.e. the
/// spectral norm of W - (1/n) 11^T.
double second_singular(const Matrix& w);

class WeightMatrix {
 public:
  /// Validates the doubly stochastic invariants (1e-12) and caches sigma.
  explicit WeightMatrix(Matrix w);

  int n() const noexcept { return static_cast<int>(w_.rows()); }
  const Matrix& w() const noexcept { return w_; }
  double sigma() const noexcept { return sigma_; }
  double operator()(int i, int j) const { return w_(i, j); }

 private:
  Matrix w_;
  double sigma_;
};

/// W = I - Lap/(d_max + 1). Requires a connected graph.
WeightMatrix laplacian_weights(const Graph& g);

/// w_ij = 1/(1 + max(d_i, d_j)) on edges, diagonal fills the row to one.
WeightMatrix metropolis_weights(const Graph& g);

/// Edge-list text: header `n <count>` followed by one `i j` line per edge.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

/// Dense CSV, one row per line, full round-trip precision.
void write_matrix_csv(std::ostream& os, const Matrix& m);

/// Parses `grid2d:5x5`, `kcycle:100:20` or `er:20:0.3` (the seed is supplied
/// separately since it is not part of the topology).
Graph graph_from_spec(const std::string& spec, Rng& rng);

}  // namespace accdngd
