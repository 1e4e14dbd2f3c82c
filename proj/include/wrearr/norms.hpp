#pragma once

// L^p and Orlicz (Luxemburg-Nakano) norms of step functions, and the two
// routes to a weighted operator norm: the norm of mu(a) under nu, and the
// norm of mu(a, x) under Lebesgue measure.

#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "wrearr/algebra.hpp"
#include "wrearr/errors.hpp"
#include "wrearr/extended.hpp"
#include "wrearr/orlicz.hpp"
#include "wrearr/stepfn.hpp"
#include "wrearr/weighted.hpp"

namespace wrearr {

/// L^p with 1 <= p <= inf.
struct LpNorm {
  double p;
};

/// Luxemburg-Nakano norm of an Orlicz function.
struct OrliczNorm {
  OrliczFunction psi;
};

using NormKind = std::variant<LpNorm, OrliczNorm>;

struct NormSpec {
  NormKind kind;
  Measure measure;
};

inline constexpr double luxemburg_relative_width = 1e-10;

namespace detail {

inline double parse_positive(std::string_view text, std::string_view what) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !(v > 0.0))
    throw validation_error("bad " + std::string(what) + " in norm spec: '" + s + "'");
  return v;
}

/// Largest value taken on a piece of positive m-mass.
inline double null_aware_sup(const StepFunction& f, const Measure& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.pieces(); ++i)
    if (f.value(i) > s && m.of_interval(f.start(i), f.end(i)) > 0.0) s = f.value(i);
  return s;
}

}  // namespace detail

/// Parses "L1", "L2", "Lp:1.5", "Linf", "orlicz:cosh-1", "orlicz:llogl", "orlicz:pow:3", "orlicz:capped:1.0".
[[nodiscard]] inline NormKind parse_norm_kind(std::string_view text) {
  if (text == "Linf") return LpNorm{inf};
  if (text.starts_with("Lp:")) {
    const double p = detail::parse_positive(text.substr(3), "exponent");
    if (p < 1.0) throw validation_error("L^p needs p >= 1");
    return LpNorm{p};
  }
  if (text.size() > 1 && text.front() == 'L') {
    const double p = detail::parse_positive(text.substr(1), "exponent");
    if (p < 1.0) throw validation_error("L^p needs p >= 1");
    return LpNorm{p};
  }
  if (text == "orlicz:cosh-1") return OrliczNorm{OrliczFunction::cosh_minus_one()};
  if (text == "orlicz:llogl") return OrliczNorm{OrliczFunction::llogl()};
  if (text.starts_with("orlicz:pow:"))
    return OrliczNorm{OrliczFunction::power(detail::parse_positive(text.substr(11), "power"))};
  if (text.starts_with("orlicz:capped:"))
    return OrliczNorm{OrliczFunction::capped(detail::parse_positive(text.substr(14), "cap"))};
  throw validation_error("unknown norm spec '" + std::string(text) + "'");
}

/// int psi(f) dm.
[[nodiscard]] inline double modular(const OrliczFunction& psi, const StepFunction& f, const Measure& m) {
  double total = 0.0;
  for (std::size_t i = 0; i < f.pieces(); ++i)
    total += ext_mul(psi(f.value(i)), m.of_interval(f.start(i), f.end(i)));
  return total;
}

/// m-essential supremum of f.
[[nodiscard]] inline double ess_sup(const StepFunction& f, const Measure& m) { return detail::null_aware_sup(f, m); }

[[nodiscard]] inline double lp_norm(const StepFunction& f, const Measure& m, double p) {
  if (std::isinf(p)) return ess_sup(f, m);
  if (p == 1.0) return integrate(f, m);
  double total = 0.0;
  for (std::size_t i = 0; i < f.pieces(); ++i)
    total += ext_mul(std::pow(f.value(i), p), m.of_interval(f.start(i), f.end(i)));
  return std::pow(total, 1.0 / p);
}

/*!
  inf{lambda > 0 : int psi(f / lambda) dm <= 1} by bisection on the
  non-increasing map lambda -> modular(psi, f / lambda). The bracket starts
  from the essential supremum of f and doubles at most 60 times before the
  norm is reported as infinite.
*/
[[nodiscard]] inline double luxemburg_norm(const OrliczFunction& psi, const StepFunction& f, const Measure& m) {
  const double top = ess_sup(f, m);
  if (top == 0.0) return 0.0;
  if (std::isinf(top)) return inf;

  auto fits = [&](double lambda) {
    double total = 0.0;
    for (std::size_t i = 0; i < f.pieces(); ++i) {
      const double mass = m.of_interval(f.start(i), f.end(i));
      if (mass == 0.0) continue;
      total += ext_mul(psi(f.value(i) / lambda), mass);
      if (total > 1.0) return false;
    }
    return true;
  };

  double hi = top;
  for (int k = 0; !fits(hi); ++k) {
    if (k == 60) return inf;
    hi *= 2.0;
  }
  double lo = hi;
  for (int k = 0; fits(lo); ++k) {
    if (k == 60) return 0.0;
    lo *= 0.5;
  }
  while (hi - lo > luxemburg_relative_width * hi) {
    const double mid = 0.5 * (lo + hi);
    (fits(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// The norm described by spec applied to f.
[[nodiscard]] inline double evaluate_norm(const NormSpec& spec, const StepFunction& f) {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LpNorm>) return lp_norm(f, spec.measure, k.p);
        else return luxemburg_norm(k.psi, f, spec.measure);
      },
      spec.kind);
}

/// f belongs to the space: some scaling lambda = 2^k, |k| <= 30, has finite modular.
[[nodiscard]] inline bool is_member(const NormSpec& spec, const StepFunction& f) {
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LpNorm>) {
          return std::isfinite(lp_norm(f, spec.measure, k.p));
        } else {
          for (int e = -30; e <= 30; ++e)
            if (std::isfinite(modular(k.psi, f.scaled(std::ldexp(1.0, e)), spec.measure))) return true;
          return false;
        }
      },
      spec.kind);
}

/// ||a|| computed from mu(a) under nu = mu_t(x) dt.
[[nodiscard]] inline double norm_route_a(const WeightedContext& ctx, const NormKind& kind, const Operator& a) {
  detail::require_context(ctx, a);
  return evaluate_norm({kind, ctx.weight.measure()}, singular_value_function(a));
}

/// ||a|| computed from mu(a, x) under Lebesgue measure.
[[nodiscard]] inline double norm_route_b(const WeightedContext& ctx, const NormKind& kind, const Operator& a) {
  return evaluate_norm({kind, Measure::lebesgue()}, weighted_rearrangement(ctx, a));
}

[[nodiscard]] inline bool membership_route_a(const WeightedContext& ctx, const NormKind& kind, const Operator& a) {
  detail::require_context(ctx, a);
  return is_member({kind, ctx.weight.measure()}, singular_value_function(a));
}

[[nodiscard]] inline bool membership_route_b(const WeightedContext& ctx, const NormKind& kind, const Operator& a) {
  return is_member({kind, Measure::lebesgue()}, weighted_rearrangement(ctx, a));
}

[[nodiscard]] inline std::string to_string(const NormKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LpNorm>) {
          if (std::isinf(k.p)) return "Linf";
          std::string s = std::to_string(k.p);
          s.erase(s.find_last_not_of('0') + 1);
          if (s.back() == '.') s.pop_back();
          return "L" + s;
        } else {
          return "orlicz:" + k.psi.name();
        }
      },
      kind);
}

}  // namespace wrearr
