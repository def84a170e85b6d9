#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace accdngd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

using Rng = std::mt19937_64;

/// Deterministic child generator for an independent stream of a master seed.
/// Streams are keyed by small integers so that, e.g., adding an algorithm to a
/// run never perturbs the random graph or the data.
inline Rng derive_rng(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * keys.size());
  words.push_back(static_cast<std::uint32_t>(master));
  words.push_back(static_cast<std::uint32_t>(master >> 32));
  for (auto k : keys) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// Row mean of an n x N stacked iterate (the "bar" quantity).
inline RowVector row_mean(const Matrix& m) { return m.colwise().mean(); }

/// Frobenius distance of the stacked rows from their mean replicated n times.
inline double consensus_distance(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  return (m.rowwise() - row_mean(m)).norm();
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace accdngd
