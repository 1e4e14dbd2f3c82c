#pragma once

// Desk-scale semifinite algebras with trace: direct sums of real matrix
// blocks with per-block trace weights, and multiplication algebras of step
// functions on [0, bound). Bounded operators only, so tau-measurability is
// automatic.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "wrearr/errors.hpp"
#include "wrearr/extended.hpp"
#include "wrearr/matrix.hpp"
#include "wrearr/orlicz.hpp"
#include "wrearr/stepfn.hpp"

namespace wrearr {

inline constexpr std::size_t max_block_size = 64;
inline constexpr std::size_t max_total_dimension = 512;

/// Entrywise tolerance for p^2 = p = p^T.
inline constexpr double projection_tolerance = 1e-10;

/// Relative width inside which eigenvalues are treated as one cluster.
inline constexpr double eigen_cluster_tolerance = 1e-9;

class Algebra {
 public:
  static Algebra matrix_blocks(std::vector<std::size_t> sizes, std::vector<double> weights) {
    if (sizes.empty()) throw validation_error("matrix algebra needs at least one block");
    if (sizes.size() != weights.size()) throw validation_error("one trace weight per block is required");
    std::size_t total = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (sizes[i] < 1 || sizes[i] > max_block_size) throw validation_error("block sizes must lie in [1, 64]");
      if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
        throw validation_error("trace weights must be positive and finite");
      total += sizes[i];
    }
    if (total > max_total_dimension) throw validation_error("total dimension exceeds 512");
    return Algebra(Blocks{std::move(sizes), std::move(weights)});
  }

  static Algebra commutative(double bound) {
    if (!(bound > 0.0) || !std::isfinite(bound)) throw validation_error("domain bound must be positive and finite");
    return Algebra(Steps{bound});
  }

  [[nodiscard]] bool is_matrix() const noexcept { return std::holds_alternative<Blocks>(kind_); }

  [[nodiscard]] std::span<const std::size_t> block_sizes() const { return std::get<Blocks>(kind_).sizes; }
  [[nodiscard]] std::span<const double> trace_weights() const { return std::get<Blocks>(kind_).weights; }
  [[nodiscard]] double domain_bound() const { return std::get<Steps>(kind_).bound; }

  [[nodiscard]] std::size_t dimension() const {
    if (!is_matrix()) return 0;
    const auto s = block_sizes();
    return std::accumulate(s.begin(), s.end(), std::size_t{0});
  }

  /// tau(1).
  [[nodiscard]] double trace_of_identity() const {
    if (!is_matrix()) return domain_bound();
    double t = 0.0;
    for (std::size_t k = 0; k < block_sizes().size(); ++k)
      t += trace_weights()[k] * static_cast<double>(block_sizes()[k]);
    return t;
  }

  friend bool operator==(const Algebra& a, const Algebra& b) { return a.kind_ == b.kind_; }

 private:
  struct Blocks {
    std::vector<std::size_t> sizes;
    std::vector<double> weights;
    friend bool operator==(const Blocks&, const Blocks&) = default;
  };
  struct Steps {
    double bound;
    friend bool operator==(const Steps&, const Steps&) = default;
  };
  explicit Algebra(std::variant<Blocks, Steps> k) : kind_(std::move(k)) {}
  std::variant<Blocks, Steps> kind_;
};

/*!
  A real, possibly signed, finite step function on [0, inf) used as the
  payload of a multiplication operator. Canonical like StepFunction.
*/
class Multiplier {
 public:
  Multiplier() : breaks_{0.0} {}
  Multiplier(std::vector<double> breakpoints, std::vector<double> values)
      : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    if (breaks_.empty() && values_.empty()) breaks_.push_back(0.0);
    if (breaks_.size() != values_.size() + 1)
      throw validation_error("multiplier needs exactly one more breakpoint than values");
    if (breaks_.front() != 0.0) throw validation_error("first breakpoint must be 0");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      if (!std::isfinite(breaks_[i]) || !(breaks_[i] > breaks_[i - 1]))
        throw validation_error("breakpoints must be finite and strictly increasing");
    for (double v : values_)
      if (!std::isfinite(v)) throw validation_error("multiplier values must be finite");
    canonicalize();
  }

  static Multiplier from(const StepFunction& f) {
    return Multiplier({f.breakpoints().begin(), f.breakpoints().end()}, {f.values().begin(), f.values().end()});
  }

  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breaks_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double support_end() const noexcept { return breaks_.back(); }

  [[nodiscard]] double operator()(double t) const {
    if (t < 0.0 || values_.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin());
    if (idx == 0 || idx > values_.size()) return 0.0;
    return values_[idx - 1];
  }

  template <typename Fn>
  [[nodiscard]] Multiplier map(Fn&& fn) const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), fn);
    return Multiplier(breaks_, std::move(v));
  }

  /// Pointwise fn(a, b) on the common refinement; fn(0, 0) must be 0.
  template <typename Fn>
  [[nodiscard]] static Multiplier combine(const Multiplier& a, const Multiplier& b, Fn&& fn) {
    auto grid = common_refinement(a.breaks_, b.breaks_);
    std::vector<double> v(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) v[i] = fn(a(grid[i]), b(grid[i]));
    return Multiplier(std::move(grid), std::move(v));
  }

  [[nodiscard]] StepFunction abs() const {
    return StepFunction(breaks_, [&] {
      std::vector<double> v(values_.size());
      std::transform(values_.begin(), values_.end(), v.begin(), [](double x) { return std::abs(x); });
      return v;
    }());
  }

  friend bool operator==(const Multiplier&, const Multiplier&) = default;

 private:
  void canonicalize() {
    std::vector<double> b{breaks_.front()};
    std::vector<double> v;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!v.empty() && v.back() == values_[i]) b.back() = breaks_[i + 1];
      else {
        v.push_back(values_[i]);
        b.push_back(breaks_[i + 1]);
      }
    }
    while (!v.empty() && v.back() == 0.0) {
      v.pop_back();
      b.pop_back();
    }
    breaks_ = std::move(b);
    values_ = std::move(v);
  }

  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// An element of an Algebra: one matrix per block, or a multiplier.
class Operator {
 public:
  static Operator from_blocks(Algebra algebra, std::vector<Matrix> blocks) {
    if (!algebra.is_matrix()) throw validation_error("block payload given for a commutative algebra");
    const auto sizes = algebra.block_sizes();
    if (blocks.size() != sizes.size()) throw validation_error("number of blocks does not match algebra");
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      if (blocks[k].rows() != sizes[k] || blocks[k].cols() != sizes[k])
        throw validation_error("block " + std::to_string(k) + " has the wrong shape");
      for (double v : blocks[k].data())
        if (!std::isfinite(v)) throw validation_error("matrix entries must be finite");
    }
    return Operator(std::move(algebra), std::move(blocks));
  }

  static Operator from_multiplier(Algebra algebra, Multiplier f) {
    if (algebra.is_matrix()) throw validation_error("step payload given for a matrix algebra");
    if (f.support_end() > algebra.domain_bound() * (1.0 + 1e-15))
      throw validation_error("multiplier extends beyond the domain bound");
    return Operator(std::move(algebra), std::move(f));
  }

  static Operator zero(const Algebra& algebra) {
    if (!algebra.is_matrix()) return from_multiplier(algebra, Multiplier{});
    std::vector<Matrix> blocks;
    for (auto n : algebra.block_sizes()) blocks.emplace_back(n, n);
    return from_blocks(algebra, std::move(blocks));
  }

  static Operator identity(const Algebra& algebra) {
    if (!algebra.is_matrix()) return from_multiplier(algebra, Multiplier({0.0, algebra.domain_bound()}, {1.0}));
    std::vector<Matrix> blocks;
    for (auto n : algebra.block_sizes()) blocks.push_back(Matrix::identity(n));
    return from_blocks(algebra, std::move(blocks));
  }

  /// Diagonal operator with the given entries listed block after block.
  static Operator diagonal(const Algebra& algebra, std::span<const double> entries) {
    if (entries.size() != algebra.dimension()) throw validation_error("diagonal length must equal dimension");
    std::vector<Matrix> blocks;
    std::size_t offset = 0;
    for (auto n : algebra.block_sizes()) {
      blocks.push_back(Matrix::diagonal(entries.subspan(offset, n)));
      offset += n;
    }
    return from_blocks(algebra, std::move(blocks));
  }

  [[nodiscard]] const Algebra& algebra() const noexcept { return algebra_; }
  [[nodiscard]] bool is_matrix() const noexcept { return algebra_.is_matrix(); }
  [[nodiscard]] const std::vector<Matrix>& blocks() const { return std::get<std::vector<Matrix>>(payload_); }
  [[nodiscard]] const Multiplier& multiplier() const { return std::get<Multiplier>(payload_); }

  [[nodiscard]] bool is_diagonal() const {
    if (!is_matrix()) return true;
    return std::all_of(blocks().begin(), blocks().end(), [](const Matrix& m) { return m.is_diagonal(); });
  }

  /// Diagonal entries block after block (matrix algebras only).
  [[nodiscard]] std::vector<double> diagonal_entries() const {
    std::vector<double> d;
    for (const auto& b : blocks())
      for (std::size_t i = 0; i < b.rows(); ++i) d.push_back(b(i, i));
    return d;
  }

  friend bool operator==(const Operator&, const Operator&) = default;

 private:
  using Payload = std::variant<std::vector<Matrix>, Multiplier>;
  Operator(Algebra algebra, Payload payload) : algebra_(std::move(algebra)), payload_(std::move(payload)) {}

  Algebra algebra_;
  Payload payload_;
};

namespace detail {

inline void require_same_algebra(const Operator& a, const Operator& b) {
  if (!(a.algebra() == b.algebra())) throw validation_error("operators live in different algebras");
}

template <typename BlockFn, typename StepFn>
Operator binary(const Operator& a, const Operator& b, BlockFn&& on_blocks, StepFn&& on_steps) {
  require_same_algebra(a, b);
  if (!a.is_matrix()) return Operator::from_multiplier(a.algebra(), Multiplier::combine(a.multiplier(), b.multiplier(), on_steps));
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < a.blocks().size(); ++k) out.push_back(on_blocks(a.blocks()[k], b.blocks()[k]));
  return Operator::from_blocks(a.algebra(), std::move(out));
}

template <typename BlockFn, typename ValueFn>
Operator unary(const Operator& a, BlockFn&& on_block, ValueFn&& on_value) {
  if (!a.is_matrix()) return Operator::from_multiplier(a.algebra(), a.multiplier().map(on_value));
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < a.blocks().size(); ++k) out.push_back(on_block(a.blocks()[k], k));
  return Operator::from_blocks(a.algebra(), std::move(out));
}

}  // namespace detail

inline Operator operator+(const Operator& a, const Operator& b) {
  return detail::binary(a, b, [](const Matrix& x, const Matrix& y) { return x + y; },
                        [](double x, double y) { return x + y; });
}

inline Operator operator-(const Operator& a, const Operator& b) {
  return detail::binary(a, b, [](const Matrix& x, const Matrix& y) { return x - y; },
                        [](double x, double y) { return x - y; });
}

/// Operator product ab.
inline Operator operator*(const Operator& a, const Operator& b) {
  return detail::binary(a, b, [](const Matrix& x, const Matrix& y) { return x * y; },
                        [](double x, double y) { return x * y; });
}

inline Operator operator*(double s, const Operator& a) {
  return detail::unary(a, [s](const Matrix& m, std::size_t) { return s * m; }, [s](double v) { return s * v; });
}

/// Adjoint (transpose; scalars are real).
[[nodiscard]] inline Operator transpose(const Operator& a) {
  return detail::unary(a, [](const Matrix& m, std::size_t) { return m.transposed(); }, [](double v) { return v; });
}

/// v^T a v.
[[nodiscard]] inline Operator conjugate(const Operator& a, const Operator& v) {
  return transpose(v) * a * v;
}

/// tau(a): weighted sum of block traces, or the Lebesgue integral of the multiplier.
[[nodiscard]] inline double trace(const Operator& a) {
  if (!a.is_matrix()) {
    const auto& f = a.multiplier();
    double total = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i)
      total += f.values()[i] * (f.breakpoints()[i + 1] - f.breakpoints()[i]);
    return total;
  }
  double total = 0.0;
  const auto w = a.algebra().trace_weights();
  for (std::size_t k = 0; k < a.blocks().size(); ++k) {
    const auto& m = a.blocks()[k];
    double tr = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) tr += m(i, i);
    total += w[k] * tr;
  }
  return total;
}

[[nodiscard]] inline double operator_norm(const Operator& a) {
  if (!a.is_matrix()) return a.multiplier().abs().sup();
  double n = 0.0;
  for (std::size_t k = 0; k < a.blocks().size(); ++k) {
    const auto s = singular_values(a.blocks()[k], k);
    for (double v : s) n = std::max(n, v);
  }
  return n;
}

/// Symmetric positive semidefinite within tolerance (pointwise non-negative for multipliers).
[[nodiscard]] inline bool is_positive(const Operator& a, double tol = 1e-10) {
  if (!a.is_matrix()) {
    const auto v = a.multiplier().values();
    return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
  }
  for (std::size_t k = 0; k < a.blocks().size(); ++k) {
    const auto& m = a.blocks()[k];
    const double scale = 1.0 + m.max_abs();
    if (max_abs_difference(m, m.transposed()) > tol * scale) return false;
    const auto eig = symmetric_eigen(m, k);
    for (double lam : eig.values)
      if (lam < -tol * scale) return false;
  }
  return true;
}

[[nodiscard]] inline bool is_projection(const Operator& p, double tol = projection_tolerance) {
  if (!p.is_matrix()) {
    const auto v = p.multiplier().values();
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0 || x == 1.0; });
  }
  for (const auto& m : p.blocks()) {
    if (max_abs_difference(m, m.transposed()) > tol) return false;
    if (max_abs_difference(m * m, m) > tol) return false;
  }
  return true;
}

/// An operator verified to be an orthogonal projection.
class Projection {
 public:
  static Projection checked(Operator p, double tol = projection_tolerance) {
    if (!is_projection(p, tol)) throw validation_error("operator is not an orthogonal projection");
    return Projection(std::move(p));
  }

  [[nodiscard]] const Operator& op() const noexcept { return op_; }
  operator const Operator&() const noexcept { return op_; }  // NOLINT(google-explicit-constructor)

  /// 1 - p.
  [[nodiscard]] Projection complement() const {
    return Projection(Operator::identity(op_.algebra()) - op_);
  }

 private:
  explicit Projection(Operator p) : op_(std::move(p)) {}
  Operator op_;
};

/// |a| = (a^T a)^{1/2}.
[[nodiscard]] inline Operator abs(const Operator& a) {
  return detail::unary(
      a,
      [](const Matrix& m, std::size_t k) {
        const auto svd = jacobi_svd(m, k);
        return from_eigen(svd.sigma, svd.right);
      },
      [](double v) { return std::abs(v); });
}

/*!
  The singular values laid end to end: each singular value s of block k
  occupies an interval of width lambda_k. Its decreasing rearrangement with
  respect to Lebesgue measure is the singular value function.
*/
[[nodiscard]] inline StepFunction singular_value_layout(const Operator& a) {
  if (!a.is_matrix()) return a.multiplier().abs();
  std::vector<double> breaks{0.0};
  std::vector<double> vals;
  const auto w = a.algebra().trace_weights();
  for (std::size_t k = 0; k < a.blocks().size(); ++k) {
    for (double s : singular_values(a.blocks()[k], k)) {
      breaks.push_back(breaks.back() + w[k]);
      vals.push_back(s);
    }
  }
  return StepFunction(std::move(breaks), std::move(vals));
}

/// mu(a): t -> inf{||ap|| : tau(1 - p) <= t}.
[[nodiscard]] inline StepFunction singular_value_function(const Operator& a) {
  return rearrange(singular_value_layout(a), Measure::lebesgue());
}

/// d_t(|a|) = tau(e_(t,inf)(|a|)).
[[nodiscard]] inline StepFunction trace_distribution(const Operator& a) {
  return distribution(singular_value_layout(a), Measure::lebesgue());
}

namespace detail {

inline void require_positive(const Operator& a) {
  if (!is_positive(a)) throw validation_error("operator must be positive semidefinite");
}

/// Eigenvector columns whose eigenvalue cluster lies strictly above t.
inline Matrix eigenprojection_above(const Matrix& m, double t, std::size_t block) {
  const auto eig = symmetric_eigen(m, block);
  const std::size_t n = m.rows();
  double norm = 0.0;
  for (double lam : eig.values) norm = std::max(norm, std::abs(lam));
  const double cluster = eigen_cluster_tolerance * (1.0 + norm);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return eig.values[i] > eig.values[j]; });
  std::vector<double> keep(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && eig.values[order[j - 1]] - eig.values[order[j]] <= cluster) ++j;
    // cluster [i, j): decided by its largest member
    if (eig.values[order[i]] > t + cluster)
      for (std::size_t k = i; k < j; ++k) keep[order[k]] = 1.0;
    i = j;
  }
  return from_eigen(keep, eig.vectors);
}

}  // namespace detail

/// e_(t,inf)(a) for positive a.
[[nodiscard]] inline Projection spectral_projection(const Operator& a, double t) {
  detail::require_positive(a);
  auto p = detail::unary(
      a, [t](const Matrix& m, std::size_t k) { return detail::eigenprojection_above(m, t, k); },
      [t](double v) { return v > t ? 1.0 : 0.0; });
  return Projection::checked(std::move(p));
}

/// psi(a) by functional calculus; throws membership_error if psi is infinite on the spectrum.
[[nodiscard]] inline Operator apply_function(const OrliczFunction& psi, const Operator& a) {
  detail::require_positive(a);
  auto mapped = [&psi](double lam) {
    const double v = psi(std::max(lam, 0.0));
    if (std::isinf(v)) throw membership_error("psi is infinite on the spectrum of the operator");
    return v;
  };
  return detail::unary(
      a,
      [&](const Matrix& m, std::size_t k) {
        auto eig = symmetric_eigen(m, k);
        for (double& lam : eig.values) lam = mapped(lam);
        return from_eigen(eig.values, eig.vectors);
      },
      mapped);
}

/// Source and range projections (v^T v, v v^T) of a partial isometry v.
[[nodiscard]] inline std::pair<Projection, Projection> partial_isometry_conjugates(const Operator& v) {
  const Operator source = transpose(v) * v;
  if (!is_projection(source)) throw validation_error("operator is not a partial isometry");
  return {Projection::checked(source), Projection::checked(v * transpose(v))};
}

}  // namespace wrearr
