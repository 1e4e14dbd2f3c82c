#pragma once

// Extended non-negative reals [0, inf] with measure-theory conventions,
// plus the library-wide default tolerances.

#include <algorithm>
#include <cmath>
#include <limits>

namespace wrearr {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Absolute tolerance on breakpoints when comparing canonical step functions.
inline constexpr double breakpoint_tolerance = 1e-12;
/// Absolute tolerance on values for cross-route equalities.
inline constexpr double value_tolerance = 1e-10;

/// Product on [0, inf] with 0 * inf = 0.
[[nodiscard]] constexpr double ext_mul(double a, double b) noexcept {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

[[nodiscard]] inline bool is_extended_nonnegative(double v) noexcept {
  return !std::isnan(v) && v >= 0.0;
}

/// |a - b| <= tol, treating equal infinities as equal.
[[nodiscard]] inline bool near(double a, double b, double tol) noexcept {
  if (a == b) return true;
  return std::abs(a - b) <= tol;
}

/// Relative closeness |a - b| <= tol * max(1, |a|, |b|); equal infinities match.
[[nodiscard]] inline bool near_relative(double a, double b, double tol) noexcept {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace wrearr
