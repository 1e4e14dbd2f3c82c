#pragma once

// The weight x, the functional tau_x(a) = int mu_t(a) mu_t(x) dt, and the
// weighted decreasing rearrangement mu(a, x).

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "wrearr/algebra.hpp"
#include "wrearr/errors.hpp"
#include "wrearr/extended.hpp"
#include "wrearr/stepfn.hpp"

namespace wrearr {

/*!
  The decreasing rearrangement t -> mu_t(x) of a non-zero positive weight,
  either an explicit non-increasing step function or e^{-t}.

  Exposes F_x(t) = int_0^t mu_s(x) ds, its inverse on [0, F_x(t_x)), and
  t_x = inf{t > 0 : mu_t(x) = 0}.
*/
class Weight {
 public:
  static Weight step(StepFunction mu) {
    if (mu.is_zero()) throw validation_error("weight must be non-zero");
    if (!mu.is_non_increasing()) throw validation_error("weight must be given in non-increasing form");
    for (double v : mu.values())
      if (!std::isfinite(v)) throw validation_error("weight values must be finite");
    return Weight(std::move(mu));
  }

  static Weight exponential() { return Weight(); }

  [[nodiscard]] bool is_exponential() const noexcept { return exponential_; }
  /// The step density (step weights only).
  [[nodiscard]] const StepFunction& mu() const noexcept { return mu_; }

  [[nodiscard]] double density(double t) const {
    if (t < 0.0) return 0.0;
    return exponential_ ? std::exp(-t) : mu_(t);
  }

  /// F_x(t).
  [[nodiscard]] double cumulative(double t) const {
    if (!(t > 0.0)) return 0.0;
    if (exponential_) return std::isinf(t) ? 1.0 : -std::expm1(-t);
    const auto b = mu_.breakpoints();
    const auto idx = static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), t) - b.begin());
    if (idx > mu_.pieces()) return prefix_.back();
    return prefix_[idx - 1] + mu_.value(idx - 1) * (t - b[idx - 1]);
  }

  /// Inverse of F_x on [0, F_x(t_x)); returns t_x at or beyond the total mass.
  [[nodiscard]] double inverse_cumulative(double y) const {
    if (!(y > 0.0)) return 0.0;
    if (exponential_) return y < 1.0 ? -std::log1p(-y) : inf;
    if (y >= prefix_.back()) return mu_.support_end();
    const auto idx = static_cast<std::size_t>(std::upper_bound(prefix_.begin(), prefix_.end(), y) - prefix_.begin());
    return mu_.start(idx - 1) + (y - prefix_[idx - 1]) / mu_.value(idx - 1);
  }

  /// t_x.
  [[nodiscard]] double support_end() const noexcept { return exponential_ ? inf : mu_.support_end(); }

  /// F_x(inf) = int_0^inf mu_t(x) dt.
  [[nodiscard]] double total_mass() const noexcept { return exponential_ ? 1.0 : prefix_.back(); }

  /// nu = mu_t(x) dt.
  [[nodiscard]] Measure measure() const {
    return exponential_ ? Measure::exponential() : Measure::with_density(mu_);
  }

  friend bool operator==(const Weight& a, const Weight& b) {
    return a.exponential_ == b.exponential_ && a.mu_ == b.mu_;
  }

 private:
  Weight() : exponential_(true) {}
  explicit Weight(StepFunction mu) : exponential_(false), mu_(std::move(mu)) {
    prefix_.push_back(0.0);
    for (std::size_t i = 0; i < mu_.pieces(); ++i)
      prefix_.push_back(prefix_.back() + mu_.value(i) * (mu_.end(i) - mu_.start(i)));
  }

  bool exponential_;
  StepFunction mu_;
  std::vector<double> prefix_;
};

/// An algebra together with a weight on it.
struct WeightedContext {
  Algebra algebra;
  Weight weight;
};

namespace detail {
inline void require_context(const WeightedContext& ctx, const Operator& a) {
  if (!(a.algebra() == ctx.algebra)) throw validation_error("operator does not belong to the context's algebra");
}
}  // namespace detail

/// tau_x(a) = int mu_t(a) mu_t(x) dt.
[[nodiscard]] inline double tau_x(const WeightedContext& ctx, const Operator& a) {
  detail::require_context(ctx, a);
  return integrate(singular_value_function(a), ctx.weight.measure());
}

/// tau_x(1) = F_x(tau(1)).
[[nodiscard]] inline double tau_x_of_identity(const WeightedContext& ctx) {
  return ctx.weight.cumulative(ctx.algebra.trace_of_identity());
}

/*!
  d_t(a, x) = tau_x(e_(t,inf)(|a|)), evaluated as F_x(d_t(|a|)) since the
  weighted functional of a projection p is F_x(tau(p)).
*/
[[nodiscard]] inline StepFunction weighted_distribution(const WeightedContext& ctx, const Operator& a) {
  detail::require_context(ctx, a);
  const Weight& w = ctx.weight;
  return trace_distribution(a).map([&w](double s) { return w.cumulative(s); });
}

/// mu(a, x) as the generalized inverse t -> inf{s >= 0 : d_s(a, x) <= t}.
[[nodiscard]] inline StepFunction weighted_rearrangement_by_inversion(const WeightedContext& ctx, const Operator& a) {
  return generalized_inverse(weighted_distribution(ctx, a));
}

/// mu(a, x) as the decreasing rearrangement of mu(a) with respect to nu.
[[nodiscard]] inline StepFunction weighted_rearrangement(const WeightedContext& ctx, const Operator& a) {
  detail::require_context(ctx, a);
  auto mu = rearrange(singular_value_function(a), ctx.weight.measure());
  assert(approx_equal(mu, weighted_rearrangement_by_inversion(ctx, a), 1e-9, 1e-9));
  return mu;
}

inline constexpr std::size_t max_oracle_dimension = 20;

/*!
  mu_t(a, x) straight from its definition inf{||ae|| : tau_x(1 - e) <= t} for
  a diagonal operator, minimizing over all 2^n coordinate projections e. The
  span overload enumerates once and answers every t.
*/
[[nodiscard]] inline std::vector<double> weighted_rearrangement_oracle(const WeightedContext& ctx, const Operator& a,
                                                                       std::span<const double> ts) {
  detail::require_context(ctx, a);
  if (!a.is_matrix() || !a.is_diagonal()) throw validation_error("oracle needs a diagonal matrix operator");
  const std::size_t n = a.algebra().dimension();
  if (n > max_oracle_dimension) throw refusal_error("oracle refuses dimensions above 20");

  const auto diag = a.diagonal_entries();
  struct Candidate {
    double complement_tau_x;
    double norm;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(std::size_t{1} << n);
  std::vector<double> complement(n);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool in_e = (mask >> i) & 1u;
      complement[i] = in_e ? 0.0 : 1.0;
      if (in_e) norm = std::max(norm, std::abs(diag[i]));
    }
    const Operator one_minus_e = Operator::diagonal(ctx.algebra, complement);
    candidates.push_back({tau_x(ctx, one_minus_e), norm});
  }

  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) {
    double best = inf;
    for (const auto& c : candidates)
      if (c.complement_tau_x <= t) best = std::min(best, c.norm);
    out.push_back(best);
  }
  return out;
}

[[nodiscard]] inline double weighted_rearrangement_oracle(const WeightedContext& ctx, const Operator& a, double t) {
  return weighted_rearrangement_oracle(ctx, a, std::span<const double>(&t, 1)).front();
}

}  // namespace wrearr
