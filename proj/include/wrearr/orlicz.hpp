#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "wrearr/errors.hpp"
#include "wrearr/extended.hpp"

namespace wrearr {

/*!
  A convex non-decreasing psi : [0, inf] -> [0, inf] with psi(0) = 0 and
  psi(inf) = inf. `threshold()` is b_psi = sup{u : psi(u) < inf}; psi is
  left continuous there.
*/
class OrliczFunction {
 public:
  /// u^p, p >= 1.
  static OrliczFunction power(double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw validation_error("power Orlicz function needs finite p >= 1");
    if (p == 1.0) return OrliczFunction("pow:1", inf, [](double u) { return u; });
    if (p == 2.0) return OrliczFunction("pow:2", inf, [](double u) { return u * u; });
    return OrliczFunction("pow:" + format_parameter(p), inf, [p](double u) { return std::pow(u, p); });
  }

  /// cosh(u) - 1.
  static OrliczFunction cosh_minus_one() {
    return OrliczFunction("cosh-1", inf, [](double u) {
      const double s = std::sinh(0.5 * u);
      return 2.0 * s * s;
    });
  }

  /// u log(u + 1).
  static OrliczFunction llogl() {
    return OrliczFunction("llogl", inf, [](double u) { return u * std::log1p(u); });
  }

  /// u on [0, cap], inf beyond.
  static OrliczFunction capped(double cap) {
    if (!(cap > 0.0) || std::isinf(cap)) throw validation_error("capped Orlicz function needs a finite cap > 0");
    return OrliczFunction("capped:" + format_parameter(cap), cap, [cap](double u) { return u <= cap ? u : inf; });
  }

  [[nodiscard]] double operator()(double u) const {
    if (std::isinf(u)) return inf;
    if (u <= 0.0) return 0.0;
    return eval_(u);
  }

  [[nodiscard]] double threshold() const noexcept { return threshold_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

 private:
  OrliczFunction(std::string name, double threshold, std::function<double(double)> eval)
      : name_(std::move(name)), threshold_(threshold), eval_(std::move(eval)) {}

  static std::string format_parameter(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  std::string name_;
  double threshold_;
  std::function<double(double)> eval_;
};

}  // namespace wrearr
