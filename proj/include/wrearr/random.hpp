#pragma once

// Deterministic random instances: algebras, operators, partial isometries,
// orthogonal conjugators and weights. Values depend only on the seed, never on
// the standard library's distribution implementations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "wrearr/algebra.hpp"
#include "wrearr/matrix.hpp"
#include "wrearr/stepfn.hpp"
#include "wrearr/weighted.hpp"

namespace wrearr::random {

using Rng = std::mt19937_64;

/// Uniform in [lo, hi).
inline double uniform(Rng& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

/// Uniform integer in [lo, hi].
inline std::size_t integer(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

inline bool coin(Rng& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

/// splitmix64 finalizer, used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Non-increasing step weight with 1-8 steps (or exactly `steps` when non-zero).
inline Weight step_weight(Rng& rng, std::size_t steps = 0) {
  if (steps == 0) steps = integer(rng, 1, 8);
  std::vector<double> breaks{0.0};
  std::vector<double> vals;
  double level = uniform(rng, 0.5, 3.0);
  for (std::size_t i = 0; i < steps; ++i) {
    breaks.push_back(breaks.back() + uniform(rng, 0.25, 2.0));
    vals.push_back(level);
    level *= uniform(rng, 0.2, 1.0);
  }
  return Weight::step(StepFunction(std::move(breaks), std::move(vals)));
}

inline Weight weight(Rng& rng, double exponential_probability = 0.3) {
  if (coin(rng, exponential_probability)) return Weight::exponential();
  return step_weight(rng);
}

/// 1..max_blocks blocks of size 1..max_size with trace weights in [0.25, 2).
inline Algebra matrix_algebra(Rng& rng, std::size_t max_blocks = 3, std::size_t max_size = 4) {
  const std::size_t k = integer(rng, 1, max_blocks);
  std::vector<std::size_t> sizes;
  std::vector<double> weights;
  for (std::size_t i = 0; i < k; ++i) {
    sizes.push_back(integer(rng, 1, max_size));
    weights.push_back(uniform(rng, 0.25, 2.0));
  }
  return Algebra::matrix_blocks(std::move(sizes), std::move(weights));
}

/// Matrix algebra with total dimension at most max_dimension.
inline Algebra bounded_matrix_algebra(Rng& rng, std::size_t max_dimension) {
  const std::size_t total = integer(rng, 1, max_dimension);
  std::vector<std::size_t> sizes;
  std::vector<double> weights;
  std::size_t left = total;
  while (left > 0) {
    const std::size_t n = integer(rng, 1, std::min<std::size_t>(left, 4));
    sizes.push_back(n);
    weights.push_back(uniform(rng, 0.25, 2.0));
    left -= n;
  }
  return Algebra::matrix_blocks(std::move(sizes), std::move(weights));
}

inline Algebra commutative_algebra(Rng& rng) { return Algebra::commutative(uniform(rng, 0.5, 4.0)); }

/// Mixed corpus of algebras: mostly block matrices, one in four commutative.
inline Algebra algebra(Rng& rng) {
  return coin(rng, 0.25) ? commutative_algebra(rng) : matrix_algebra(rng);
}

inline Matrix matrix(Rng& rng, std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
  return m;
}

/// Signed step multiplier on [0, bound) with 1-6 pieces.
inline Multiplier multiplier(Rng& rng, double bound, bool positive = false) {
  const std::size_t k = integer(rng, 1, 6);
  std::vector<double> cuts;
  for (std::size_t i = 0; i + 1 < k; ++i) cuts.push_back(uniform(rng, 0.0, bound));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> breaks{0.0};
  for (double c : cuts)
    if (c > breaks.back()) breaks.push_back(c);
  breaks.push_back(bound);
  std::vector<double> vals;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    vals.push_back(positive ? uniform(rng, 0.0, 1.0) : uniform(rng, -1.0, 1.0));
  return Multiplier(std::move(breaks), std::move(vals));
}

/// Entries uniform in [-1, 1] (matrix), or a random signed multiplier.
inline Operator block_operator(Rng& rng, const Algebra& alg) {
  if (!alg.is_matrix()) return Operator::from_multiplier(alg, multiplier(rng, alg.domain_bound()));
  std::vector<Matrix> blocks;
  for (auto n : alg.block_sizes()) blocks.push_back(matrix(rng, n));
  return Operator::from_blocks(alg, std::move(blocks));
}

/// Diagonal operator; about a third of the time entries repeat to produce ties.
inline Operator diagonal_operator(Rng& rng, const Algebra& alg) {
  const std::size_t n = alg.dimension();
  std::vector<double> d(n);
  const bool ties = coin(rng, 0.35);
  const double palette[] = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), 0.0};
  for (auto& v : d) v = ties ? palette[integer(rng, 0, 2)] : uniform(rng, -1.0, 1.0);
  return Operator::diagonal(alg, d);
}

/// a^T a for a random a, optionally with forced rank deficiency.
inline Operator positive_operator(Rng& rng, const Algebra& alg) {
  if (!alg.is_matrix()) return Operator::from_multiplier(alg, multiplier(rng, alg.domain_bound(), true));
  std::vector<Matrix> blocks;
  for (auto n : alg.block_sizes()) {
    Matrix b = matrix(rng, n);
    if (coin(rng, 0.3)) {
      const std::size_t zero_rows = integer(rng, 0, n - 1);
      for (std::size_t r = 0; r < zero_rows; ++r)
        for (std::size_t c = 0; c < n; ++c) b(r, c) = 0.0;
    }
    blocks.push_back(b.transposed() * b);
  }
  return Operator::from_blocks(alg, std::move(blocks));
}

/// Orthogonal n x n matrix from the Q factor of a random matrix.
inline Matrix orthogonal_matrix(Rng& rng, std::size_t n) {
  for (;;) {
    Matrix q = orthonormal_columns(matrix(rng, n));
    if (q.cols() == n) return q;
  }
}

/// Block-diagonal orthogonal operator (identity on commutative algebras).
inline Operator orthogonal_operator(Rng& rng, const Algebra& alg) {
  if (!alg.is_matrix()) return Operator::identity(alg);
  std::vector<Matrix> blocks;
  for (auto n : alg.block_sizes()) blocks.push_back(orthogonal_matrix(rng, n));
  return Operator::from_blocks(alg, std::move(blocks));
}

/// v = U W^T with U, W having r orthonormal columns each, 0 <= r <= n per block.
inline Operator partial_isometry(Rng& rng, const Algebra& alg) {
  if (!alg.is_matrix()) {
    // multiplier taking values in {-1, 0, 1}
    auto m = multiplier(rng, alg.domain_bound());
    return Operator::from_multiplier(alg, m.map([](double v) { return v > 0.3 ? 1.0 : (v < -0.3 ? -1.0 : 0.0); }));
  }
  std::vector<Matrix> blocks;
  for (auto n : alg.block_sizes()) {
    const std::size_t r = integer(rng, 0, n);
    const Matrix u = orthogonal_matrix(rng, n);
    const Matrix w = orthogonal_matrix(rng, n);
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < r; ++k) s += u(i, k) * w(j, k);
        v(i, j) = s;
      }
    blocks.push_back(std::move(v));
  }
  return Operator::from_blocks(alg, std::move(blocks));
}

/// Any of the operator families above.
inline Operator any_operator(Rng& rng, const Algebra& alg) {
  if (!alg.is_matrix()) return block_operator(rng, alg);
  switch (integer(rng, 0, 3)) {
    case 0: return diagonal_operator(rng, alg);
    case 1: return positive_operator(rng, alg);
    case 2: return partial_isometry(rng, alg);
    default: return block_operator(rng, alg);
  }
}

}  // namespace wrearr::random
