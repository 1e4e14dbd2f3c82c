#pragma once

// Right-continuous, non-negative, eventually-zero step functions on [0, inf),
// measures on [0, inf), and the distribution / decreasing-rearrangement
// machinery built on them.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wrearr/errors.hpp"
#include "wrearr/extended.hpp"

namespace wrearr {

/*!
  A step function f : [0, inf) -> [0, inf].

  Stored as breakpoints 0 = t_0 < t_1 < ... < t_k and values v_1..v_k with
  f = v_i on [t_{i-1}, t_i) and f = 0 on [t_k, inf). The representation is
  kept canonical: adjacent values differ and the last value is non-zero, so
  the zero function is the single breakpoint {0} with no values.
*/
class StepFunction {
 public:
  StepFunction() : breaks_{0.0} {}

  StepFunction(std::vector<double> breakpoints, std::vector<double> values)
      : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    if (breaks_.empty() && values_.empty()) breaks_.push_back(0.0);
    validate();
    canonicalize();
  }

  /// `value` on [0, length), zero afterwards.
  static StepFunction constant(double value, double length) {
    if (length <= 0.0) return {};
    return StepFunction({0.0, length}, {value});
  }

  /// Indicator of [lo, hi).
  static StepFunction indicator(double lo, double hi) {
    if (hi <= lo) return {};
    if (lo <= 0.0) return constant(1.0, hi);
    return StepFunction({0.0, lo, hi}, {0.0, 1.0});
  }

  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breaks_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t pieces() const noexcept { return values_.size(); }
  [[nodiscard]] bool is_zero() const noexcept { return values_.empty(); }

  /// Left end of piece i.
  [[nodiscard]] double start(std::size_t i) const { return breaks_[i]; }
  /// Right end of piece i.
  [[nodiscard]] double end(std::size_t i) const { return breaks_[i + 1]; }
  [[nodiscard]] double value(std::size_t i) const { return values_[i]; }

  /// Last breakpoint; f vanishes on [support_end(), inf).
  [[nodiscard]] double support_end() const noexcept { return breaks_.back(); }

  [[nodiscard]] double operator()(double t) const {
    if (t < 0.0 || values_.empty()) return 0.0;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    const auto idx = static_cast<std::size_t>(it - breaks_.begin());
    if (idx == 0 || idx > values_.size()) return 0.0;
    return values_[idx - 1];
  }

  [[nodiscard]] double sup() const noexcept {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
  }

  [[nodiscard]] bool is_non_increasing() const noexcept {
    return std::is_sorted(values_.rbegin(), values_.rend());
  }

  /// Pointwise composition fn(f(t)); fn must send [0, inf] to [0, inf] and 0 to 0.
  template <typename Fn>
  [[nodiscard]] StepFunction map(Fn&& fn) const {
    std::vector<double> mapped(values_.size());
    std::transform(values_.begin(), values_.end(), mapped.begin(), fn);
    return StepFunction(breaks_, std::move(mapped));
  }

  [[nodiscard]] StepFunction scaled(double c) const {
    if (!(c >= 0.0)) throw validation_error("step function scale must be non-negative");
    return map([c](double v) { return ext_mul(c, v); });
  }

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  void validate() const {
    if (breaks_.size() != values_.size() + 1)
      throw validation_error("step function needs exactly one more breakpoint than values");
    if (breaks_.front() != 0.0) throw validation_error("first breakpoint must be 0");
    for (std::size_t i = 1; i < breaks_.size(); ++i) {
      if (!std::isfinite(breaks_[i]) || !(breaks_[i] > breaks_[i - 1]))
        throw validation_error("breakpoints must be finite and strictly increasing");
    }
    for (double v : values_) {
      if (!is_extended_nonnegative(v))
        throw validation_error("step function values must be non-negative");
    }
  }

  void canonicalize() {
    std::vector<double> b{breaks_.front()};
    std::vector<double> v;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!v.empty() && v.back() == values_[i]) {
        b.back() = breaks_[i + 1];
      } else {
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

/// Sorted union of breakpoints of two step functions.
[[nodiscard]] inline std::vector<double> common_refinement(std::span<const double> a,
                                                           std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/*!
  Largest pointwise gap |f - g| over the common refinement, ignoring pieces
  narrower than `breakpoint_tol` after clustering nearby breakpoints. Returns
  inf where exactly one side is infinite.
*/
[[nodiscard]] inline double max_abs_difference(const StepFunction& f, const StepFunction& g,
                                               double breakpoint_tol = breakpoint_tolerance) {
  const auto grid = common_refinement(f.breakpoints(), g.breakpoints());
  std::vector<double> clustered;
  for (double t : grid) {
    if (clustered.empty() || t - clustered.back() > breakpoint_tol) clustered.push_back(t);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < clustered.size(); ++i) {
    const double mid = 0.5 * (clustered[i] + clustered[i + 1]);
    const double fv = f(mid);
    const double gv = g(mid);
    if (fv == gv) continue;
    worst = std::max(worst, std::abs(fv - gv));
  }
  return worst;
}

/// Equality of canonical forms up to the given breakpoint and value tolerances.
[[nodiscard]] inline bool approx_equal(const StepFunction& f, const StepFunction& g,
                                       double breakpoint_tol = breakpoint_tolerance,
                                       double value_tol = value_tolerance) {
  return max_abs_difference(f, g, breakpoint_tol) <= value_tol;
}

/// Density e^{-t}.
struct ExponentialDensity {};

/*!
  A measure on [0, inf): Lebesgue, a step density, or the density e^{-t}.
  Bounded intervals always have finite measure.
*/
class Measure {
 public:
  static Measure lebesgue() { return Measure(Lebesgue{}); }

  static Measure with_density(StepFunction density) {
    for (double v : density.values()) {
      if (!std::isfinite(v)) throw validation_error("measure density must be finite");
    }
    return Measure(std::move(density));
  }

  static Measure exponential() { return Measure(ExponentialDensity{}); }

  [[nodiscard]] bool is_lebesgue() const noexcept { return std::holds_alternative<Lebesgue>(kind_); }

  /// Density at t (1 for Lebesgue).
  [[nodiscard]] double density(double t) const {
    return std::visit(
        [t](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Lebesgue>) return t >= 0.0 ? 1.0 : 0.0;
          else if constexpr (std::is_same_v<K, StepFunction>) return k(t);
          else return t >= 0.0 ? std::exp(-t) : 0.0;
        },
        kind_);
  }

  /// Measure of [lo, hi) for 0 <= lo <= hi <= inf.
  [[nodiscard]] double of_interval(double lo, double hi) const {
    lo = std::max(lo, 0.0);
    if (!(hi > lo)) return 0.0;
    return std::visit(
        [lo, hi](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Lebesgue>) {
            return hi - lo;
          } else if constexpr (std::is_same_v<K, StepFunction>) {
            double total = 0.0;
            for (std::size_t i = 0; i < k.pieces(); ++i) {
              const double a = std::max(lo, k.start(i));
              const double b = std::min(hi, k.end(i));
              if (b > a) total += k.value(i) * (b - a);
            }
            return total;
          } else {
            // e^{-lo} - e^{-hi}, written to keep relative accuracy for short intervals
            if (std::isinf(hi)) return std::exp(-lo);
            return -std::exp(-lo) * std::expm1(-(hi - lo));
          }
        },
        kind_);
  }

 private:
  struct Lebesgue {};
  using Kind = std::variant<Lebesgue, StepFunction, ExponentialDensity>;
  explicit Measure(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Integral of f over [0, upper) with respect to m, in [0, inf].
[[nodiscard]] inline double integrate(const StepFunction& f, const Measure& m, double upper = inf) {
  double total = 0.0;
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    if (f.start(i) >= upper) break;
    total += ext_mul(f.value(i), m.of_interval(f.start(i), std::min(f.end(i), upper)));
  }
  return total;
}

namespace detail {

struct LevelPiece {
  double value;
  double mass;
};

/// (value, m-measure) for every non-null positive piece of f, largest value first.
inline std::vector<LevelPiece> sorted_levels(const StepFunction& f, const Measure& m) {
  std::vector<LevelPiece> levels;
  levels.reserve(f.pieces());
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    if (f.value(i) == 0.0) continue;
    const double mass = m.of_interval(f.start(i), f.end(i));
    if (mass == 0.0) continue;
    levels.push_back({f.value(i), mass});
  }
  std::stable_sort(levels.begin(), levels.end(),
                   [](const LevelPiece& a, const LevelPiece& b) { return a.value > b.value; });
  // merge equal values
  std::vector<LevelPiece> merged;
  for (const auto& l : levels) {
    if (!merged.empty() && merged.back().value == l.value) merged.back().mass += l.mass;
    else merged.push_back(l);
  }
  return merged;
}

}  // namespace detail

/*!
  Distribution function t -> m({s : f(s) > t}).

  The result is non-increasing and right-continuous. Throws std::domain_error
  when f is infinite on a set of positive measure, since the distribution is
  then not eventually zero.
*/
[[nodiscard]] inline StepFunction distribution(const StepFunction& f, const Measure& m) {
  const auto levels = detail::sorted_levels(f, m);
  if (!levels.empty() && std::isinf(levels.front().value))
    throw std::domain_error("distribution of a function that is infinite on a non-null set");
  // levels are descending: d = sum of masses of levels > t
  std::vector<double> breaks{0.0};
  std::vector<double> vals;
  double cumulative = 0.0;
  for (const auto& l : levels) cumulative += l.mass;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    breaks.push_back(it->value);
    vals.push_back(cumulative);
    cumulative -= it->mass;
  }
  return StepFunction(std::move(breaks), std::move(vals));
}

/*!
  Decreasing rearrangement of f with respect to m, i.e. the right-continuous
  generalized inverse t -> inf{s >= 0 : m({f > s}) <= t}. Computed by laying
  out the level sets of f in decreasing order of value with widths equal to
  their m-measure.
*/
[[nodiscard]] inline StepFunction rearrange(const StepFunction& f, const Measure& m) {
  const auto levels = detail::sorted_levels(f, m);
  std::vector<double> breaks{0.0};
  std::vector<double> vals;
  double position = 0.0;
  for (const auto& l : levels) {
    position += l.mass;
    breaks.push_back(position);
    vals.push_back(l.value);
  }
  return StepFunction(std::move(breaks), std::move(vals));
}

/*!
  Right-continuous generalized inverse t -> inf{s >= 0 : d(s) <= t} of a
  non-increasing step function d.
*/
[[nodiscard]] inline StepFunction generalized_inverse(const StepFunction& d) {
  if (!d.is_non_increasing()) throw validation_error("generalized inverse needs a non-increasing function");
  if (d.is_zero()) return {};
  if (std::isinf(d.value(0)))
    throw std::domain_error("generalized inverse of a function that is infinite near 0");
  // d's values are strictly decreasing in canonical form; piece [d_{j+1}, d_j) maps to s_j
  const std::size_t k = d.pieces();
  std::vector<double> breaks{0.0};
  std::vector<double> vals;
  for (std::size_t j = k; j-- > 0;) {
    breaks.push_back(d.value(j));
    vals.push_back(d.end(j));
  }
  return StepFunction(std::move(breaks), std::move(vals));
}

/// Piecewise (t_start, t_end, value) rows, one per canonical piece.
struct StepRow {
  double start;
  double end;
  double value;
};

[[nodiscard]] inline std::vector<StepRow> rows(const StepFunction& f) {
  std::vector<StepRow> out;
  out.reserve(f.pieces());
  for (std::size_t i = 0; i < f.pieces(); ++i) out.push_back({f.start(i), f.end(i), f.value(i)});
  return out;
}

}  // namespace wrearr
