#pragma once

// Randomized property suite over every invariant of the library. Each
// property is a generator (seeded per trial) plus a check that reports a
// residual; failing instances are shrunk and can be dumped as JSON.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wrearr/algebra.hpp"
#include "wrearr/io.hpp"
#include "wrearr/norms.hpp"
#include "wrearr/random.hpp"
#include "wrearr/stepfn.hpp"
#include "wrearr/weighted.hpp"

namespace wrearr::verify {

struct Settings {
  /// When set, every instance uses this weight instead of a random one.
  std::optional<Weight> weight;
  /// Cross-route equality tolerance.
  double tolerance = value_tolerance;
};

/// A concrete test case: a context, operands and scalar parameters.
struct Instance {
  WeightedContext ctx;
  std::vector<Operator> ops;
  std::vector<double> params;
};

struct Outcome {
  double residual = 0.0;
  bool ok = true;
};

struct Property {
  std::string name;
  std::function<Instance(random::Rng&, const Settings&)> generate;
  std::function<Outcome(const Instance&, const Settings&)> check;
  /// Entries of the operands may be zeroed freely while shrinking.
  bool shrinkable = false;
};

struct Report {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  double worst_residual = 0.0;
  std::optional<Instance> counterexample;
  double seconds = 0.0;
};

/// The six Orlicz functions exercised by the norm properties.
inline std::vector<OrliczFunction> orlicz_corpus() {
  return {OrliczFunction::power(1), OrliczFunction::power(2), OrliczFunction::power(3),
          OrliczFunction::cosh_minus_one(), OrliczFunction::llogl(), OrliczFunction::capped(1.0)};
}

namespace detail {

using random::Rng;

inline Outcome within(double residual, double tol) { return {residual, residual <= tol}; }

inline Outcome boolean(bool ok) { return {ok ? 0.0 : 1.0, ok}; }

inline Outcome worst(std::initializer_list<Outcome> outs) {
  Outcome w;
  for (const auto& o : outs) {
    w.residual = std::max(w.residual, o.residual);
    w.ok = w.ok && o.ok;
  }
  return w;
}

inline Weight pick_weight(Rng& rng, const Settings& s) { return s.weight ? *s.weight : random::weight(rng); }

inline WeightedContext context(Rng& rng, const Settings& s, Algebra alg) { return {std::move(alg), pick_weight(rng, s)}; }

inline double relative_gap(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return inf;
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

/// Measure used by the step-function properties: params[0] selects Lebesgue (0) or nu (1).
inline Measure instance_measure(const Instance& in) {
  return in.params.at(0) == 0.0 ? Measure::lebesgue() : in.ctx.weight.measure();
}

inline Instance step_instance(Rng& rng, const Settings& s) {
  auto ctx = context(rng, s, random::commutative_algebra(rng));
  auto f = Operator::from_multiplier(ctx.algebra, random::multiplier(rng, ctx.algebra.domain_bound(), true));
  return {std::move(ctx), {std::move(f)}, {random::coin(rng, 0.5) ? 1.0 : 0.0}};
}

inline StepFunction instance_step(const Instance& in) { return in.ops.at(0).multiplier().abs(); }

/// Random times in [0, 1.2 tau_x(1)].
inline std::vector<double> random_times(Rng& rng, const WeightedContext& ctx, std::size_t n) {
  const double top = 1.2 * tau_x_of_identity(ctx);
  std::vector<double> ts(n);
  for (auto& t : ts) t = random::uniform(rng, 0.0, top);
  return ts;
}

inline Instance one_operator(Rng& rng, const Settings& s) {
  auto ctx = context(rng, s, random::algebra(rng));
  auto a = random::any_operator(rng, ctx.algebra);
  return {std::move(ctx), {std::move(a)}, {}};
}

inline Instance two_operators(Rng& rng, const Settings& s) {
  auto ctx = context(rng, s, random::algebra(rng));
  auto a = random::any_operator(rng, ctx.algebra);
  auto b = random::any_operator(rng, ctx.algebra);
  return {std::move(ctx), {std::move(a), std::move(b)}, {}};
}

inline Instance positive_operator(Rng& rng, const Settings& s) {
  auto ctx = context(rng, s, random::algebra(rng));
  auto a = random::positive_operator(rng, ctx.algebra);
  return {std::move(ctx), {std::move(a)}, {}};
}

inline double max_projection_gap(const Operator& p, const Operator& q) {
  if (!p.is_matrix()) return max_abs_difference(p.multiplier().abs(), q.multiplier().abs());
  double g = 0.0;
  for (std::size_t k = 0; k < p.blocks().size(); ++k) g = std::max(g, max_abs_difference(p.blocks()[k], q.blocks()[k]));
  return g;
}

inline bool right_continuous(const StepFunction& f) {
  for (std::size_t i = 0; i < f.pieces(); ++i)
    if (f(f.start(i)) != f.value(i)) return false;
  return f(f.support_end()) == 0.0;
}

/// L^inf([0, 2]) with x = e^{-t} and the indicators of [0, 2), [0, 1), [1, 2).
inline Instance indicator_instance() {
  const auto alg = Algebra::commutative(2.0);
  return {{alg, Weight::exponential()},
          {Operator::from_multiplier(alg, Multiplier({0.0, 2.0}, {1.0})),
           Operator::from_multiplier(alg, Multiplier({0.0, 1.0}, {1.0})),
           Operator::from_multiplier(alg, Multiplier({0.0, 1.0, 2.0}, {0.0, 1.0}))},
          {}};
}

}  // namespace detail

/// Every property, in report order.
inline std::vector<Property> properties() {
  using namespace detail;
  std::vector<Property> ps;

  // ---- step functions ----
  ps.push_back({"stepfn.distribution_monotone", step_instance, [](const Instance& in, const Settings&) {
                  const auto d = distribution(instance_step(in), instance_measure(in));
                  return boolean(d.is_non_increasing() && right_continuous(d));
                }});
  ps.push_back({"stepfn.equimeasurable", step_instance, [](const Instance& in, const Settings& s) {
                  const auto f = instance_step(in);
                  const auto m = instance_measure(in);
                  return within(max_abs_difference(distribution(rearrange(f, m), Measure::lebesgue()), distribution(f, m)),
                                s.tolerance);
                }});
  ps.push_back({"stepfn.level_bound", step_instance, [](const Instance& in, const Settings& s) {
                  const auto f = instance_step(in);
                  const auto m = instance_measure(in);
                  const auto mu = rearrange(f, m);
                  const auto d = distribution(f, m);
                  double excess = 0.0;
                  for (double t : mu.breakpoints()) excess = std::max(excess, d(mu(t)) - t);
                  return within(excess, s.tolerance);
                }});
  ps.push_back({"stepfn.integral_preserved", step_instance, [](const Instance& in, const Settings& s) {
                  const auto f = instance_step(in);
                  const auto m = instance_measure(in);
                  return within(relative_gap(integrate(rearrange(f, m), Measure::lebesgue()), integrate(f, m)), s.tolerance);
                }});

  // ---- algebra ----
  ps.push_back({"algebra.mu_invariance",
                [](Rng& rng, const Settings& s) {
                  auto in = one_operator(rng, s);
                  in.params = {random::uniform(rng, -3.0, 3.0)};
                  return in;
                },
                [](const Instance& in, const Settings& s) {
                  const auto& a = in.ops[0];
                  const double lam = in.params[0];
                  const auto mu = singular_value_function(a);
                  return within(std::max({max_abs_difference(mu, singular_value_function(abs(a))),
                                          max_abs_difference(mu, singular_value_function(transpose(a))),
                                          max_abs_difference(mu.scaled(std::abs(lam)), singular_value_function(lam * a))}),
                                s.tolerance);
                },
                true});
  ps.push_back({"algebra.distribution_identity",
                [](Rng& rng, const Settings& s) {
                  auto in = one_operator(rng, s);
                  const double top = 1.1 * operator_norm(in.ops[0]) + 0.1;
                  for (int i = 0; i < 5; ++i) in.params.push_back(random::uniform(rng, 0.0, top));
                  return in;
                },
                [](const Instance& in, const Settings& s) {
                  const auto& a = in.ops[0];
                  const auto d = distribution(singular_value_function(a), Measure::lebesgue());
                  const auto pos = abs(a);
                  double gap = 0.0;
                  for (double t : in.params) gap = std::max(gap, std::abs(d(t) - trace(spectral_projection(pos, t))));
                  return within(gap, s.tolerance);
                },
                true});
  ps.push_back({"algebra.support_projection",
                [](Rng& rng, const Settings& s) {
                  // a = b^T b with a known number of non-zero rows in b per block
                  auto ctx = context(rng, s, random::algebra(rng));
                  if (!ctx.algebra.is_matrix()) {
                    auto f = random::multiplier(rng, ctx.algebra.domain_bound(), true);
                    f = f.map([](double v) { return v < 0.3 ? 0.0 : v; });
                    double support = 0.0;
                    for (std::size_t i = 0; i < f.values().size(); ++i)
                      if (f.values()[i] > 0.0) support += f.breakpoints()[i + 1] - f.breakpoints()[i];
                    auto a = Operator::from_multiplier(ctx.algebra, f);
                    return Instance{std::move(ctx), {std::move(a)}, {support}};
                  }
                  std::vector<Matrix> blocks;
                  double expected = 0.0;
                  for (std::size_t k = 0; k < ctx.algebra.block_sizes().size(); ++k) {
                    const std::size_t n = ctx.algebra.block_sizes()[k];
                    const std::size_t r = random::integer(rng, 0, n);
                    Matrix b = random::matrix(rng, n);
                    for (std::size_t row = r; row < n; ++row)
                      for (std::size_t c = 0; c < n; ++c) b(row, c) = 0.0;
                    blocks.push_back(b.transposed() * b);
                    expected += ctx.algebra.trace_weights()[k] * static_cast<double>(r);
                  }
                  auto a = Operator::from_blocks(ctx.algebra, std::move(blocks));
                  return Instance{std::move(ctx), {std::move(a)}, {expected}};
                },
                [](const Instance& in, const Settings& s) {
                  return within(std::abs(trace(spectral_projection(in.ops[0], 0.0)) - in.params[0]), s.tolerance);
                }});
  ps.push_back({"algebra.level_sets_commute",
                [](Rng& rng, const Settings& s) {
                  auto in = positive_operator(rng, s);
                  in.params = {random::uniform(rng, 0.0, operator_norm(in.ops[0]) + 0.1),
                               static_cast<double>(random::integer(rng, 1, 4))};
                  return in;
                },
                [](const Instance& in, const Settings&) {
                  const auto psi = orlicz_corpus()[static_cast<std::size_t>(in.params[1])];
                  const double t = in.params[0];
                  const auto lhs = spectral_projection(apply_function(psi, in.ops[0]), psi(t));
                  const auto rhs = spectral_projection(in.ops[0], t);
                  return within(max_projection_gap(lhs, rhs), 1e-8);
                }});

  // ---- weighted ----
  ps.push_back({"weighted.indicator_example",
                [](Rng&, const Settings&) { return indicator_instance(); },
                [](const Instance& in, const Settings&) {
                  const double whole = tau_x(in.ctx, in.ops[0]);
                  const double left = tau_x(in.ctx, in.ops[1]);
                  const double right = tau_x(in.ctx, in.ops[2]);
                  const double e1 = -std::expm1(-1.0);
                  const double e2 = -std::expm1(-2.0);
                  const double gap = (left + right) - whole;
                  auto out = within(std::max({std::abs(whole - e2), std::abs(left - e1), std::abs(right - e1),
                                              std::abs(gap - e1 * e1)}),
                                    1e-12);
                  out.ok = out.ok && gap > 0.0;
                  return out;
                }});
  ps.push_back({"weighted.oracle_equivalence",
                [](Rng& rng, const Settings& s) {
                  auto ctx = context(rng, s, random::bounded_matrix_algebra(rng, 8));
                  auto a = random::diagonal_operator(rng, ctx.algebra);
                  auto ts = random_times(rng, ctx, 50);
                  return Instance{std::move(ctx), {std::move(a)}, std::move(ts)};
                },
                [](const Instance& in, const Settings& s) {
                  const auto mu = weighted_rearrangement(in.ctx, in.ops[0]);
                  const auto oracle = weighted_rearrangement_oracle(in.ctx, in.ops[0], in.params);
                  double gap = 0.0;
                  for (std::size_t i = 0; i < in.params.size(); ++i)
                    gap = std::max(gap, std::abs(mu(in.params[i]) - oracle[i]));
                  return within(gap, s.tolerance);
                }});
  ps.push_back({"weighted.integral_identity", one_operator, [](const Instance& in, const Settings& s) {
                  const double lhs = integrate(weighted_rearrangement(in.ctx, in.ops[0]), Measure::lebesgue());
                  return within(relative_gap(lhs, tau_x(in.ctx, in.ops[0])), s.tolerance);
                }, true});
  ps.push_back({"weighted.route_agreement", one_operator, [](const Instance& in, const Settings& s) {
                  const auto a = rearrange(singular_value_function(in.ops[0]), in.ctx.weight.measure());
                  const auto b = weighted_rearrangement_by_inversion(in.ctx, in.ops[0]);
                  return within(max_abs_difference(a, b), s.tolerance);
                }, true});
  ps.push_back({"weighted.distribution_by_projections",
                [](Rng& rng, const Settings& s) {
                  auto in = one_operator(rng, s);
                  const double top = 1.1 * operator_norm(in.ops[0]) + 0.1;
                  for (int i = 0; i < 5; ++i) in.params.push_back(random::uniform(rng, 0.0, top));
                  return in;
                },
                [](const Instance& in, const Settings& s) {
                  const auto d = weighted_distribution(in.ctx, in.ops[0]);
                  const auto pos = abs(in.ops[0]);
                  double gap = 0.0;
                  for (double t : in.params) gap = std::max(gap, std::abs(d(t) - tau_x(in.ctx, spectral_projection(pos, t))));
                  return within(gap, s.tolerance);
                },
                true});
  ps.push_back({"weighted.tau_subadditive", two_operators, [](const Instance& in, const Settings& s) {
                  const auto& a = in.ops[0];
                  const auto& b = in.ops[1];
                  return within(std::max(0.0, tau_x(in.ctx, a + b) - tau_x(in.ctx, a) - tau_x(in.ctx, b)), s.tolerance);
                }, true});
  ps.push_back({"weighted.tau_homogeneous",
                [](Rng& rng, const Settings& s) {
                  auto in = one_operator(rng, s);
                  in.params = {random::uniform(rng, -4.0, 4.0)};
                  return in;
                },
                [](const Instance& in, const Settings& s) {
                  const double lam = in.params[0];
                  return within(relative_gap(tau_x(in.ctx, lam * in.ops[0]), std::abs(lam) * tau_x(in.ctx, in.ops[0])),
                                s.tolerance);
                },
                true});
  ps.push_back({"weighted.tau_adjoint_products", one_operator, [](const Instance& in, const Settings&) {
                  const auto& a = in.ops[0];
                  return within(relative_gap(tau_x(in.ctx, transpose(a) * a), tau_x(in.ctx, a * transpose(a))), 1e-9);
                }, true});
  ps.push_back({"weighted.tau_faithful",
                [](Rng& rng, const Settings& s) {
                  auto in = one_operator(rng, s);
                  const auto pick = random::integer(rng, 0, 3);
                  if (pick == 0) in.ops[0] = Operator::zero(in.ctx.algebra);
                  if (pick == 1) in.ops[0] = 1e-13 * in.ops[0];
                  return in;
                },
                [](const Instance& in, const Settings&) {
                  const double t = tau_x(in.ctx, in.ops[0]);
                  const double n = operator_norm(in.ops[0]);
                  const bool zero_ok = tau_x(in.ctx, Operator::zero(in.ctx.algebra)) == 0.0;
                  const bool implication = t != 0.0 || n <= 1e-12;
                  const bool positive = n == 0.0 || t > 0.0;
                  return boolean(zero_ok && implication && positive);
                }});
  ps.push_back({"weighted.tau_normality", positive_operator, [](const Instance& in, const Settings&) {
                  // a_n = (1 - 2^-n) a increases to a; a_n = (1 - 1/n) a has the exact gap tau_x(a) / n
                  const auto& a = in.ops[0];
                  const double target = tau_x(in.ctx, a);
                  double prev = 0.0;
                  bool monotone = true;
                  double sup = 0.0;
                  for (int n = 1; n <= 1024; n = n < 64 ? n + 1 : n * 2) {
                    const double v = tau_x(in.ctx, (1.0 - std::ldexp(1.0, -n)) * a);
                    monotone = monotone && v >= prev - 1e-12;
                    prev = v;
                    sup = std::max(sup, v);
                  }
                  double harmonic_gap = 0.0;
                  double hprev = 0.0;
                  for (int n = 1; n <= 1024; n *= 2) {
                    const double v = tau_x(in.ctx, (1.0 - 1.0 / n) * a);
                    monotone = monotone && v >= hprev - 1e-12;
                    hprev = v;
                    harmonic_gap = std::max(harmonic_gap, std::abs((target - v) - target / n));
                  }
                  auto out = within(std::max(std::abs(target - sup), harmonic_gap), 1e-9);
                  out.ok = out.ok && monotone;
                  return out;
                }});
  ps.push_back({"weighted.equivalent_projections",
                [](Rng& rng, const Settings& s) {
                  auto ctx = context(rng, s, random::algebra(rng));
                  auto v = random::partial_isometry(rng, ctx.algebra);
                  return Instance{std::move(ctx), {std::move(v)}, {}};
                },
                [](const Instance& in, const Settings&) {
                  const auto [source, range] = partial_isometry_conjugates(in.ops[0]);
                  return within(std::abs(tau_x(in.ctx, source) - tau_x(in.ctx, range)), 1e-9);
                }});
  ps.push_back({"weighted.orthogonal_projections",
                [](Rng& rng, const Settings& s) {
                  // p and q with p ^ q = 0: disjoint coordinate sets, or generic subspaces with rank p + rank q <= n
                  auto ctx = context(rng, s, random::matrix_algebra(rng));
                  const bool diagonal = random::coin(rng, 0.5);
                  std::vector<Matrix> ps_, qs_;
                  for (auto n : ctx.algebra.block_sizes()) {
                    if (diagonal) {
                      Matrix p(n, n), q(n, n);
                      for (std::size_t i = 0; i < n; ++i) {
                        const auto pick = random::integer(rng, 0, 2);
                        if (pick == 0) p(i, i) = 1.0;
                        if (pick == 1) q(i, i) = 1.0;
                      }
                      ps_.push_back(p);
                      qs_.push_back(q);
                    } else {
                      const std::size_t rp = random::integer(rng, 0, n);
                      const std::size_t rq = random::integer(rng, 0, n - rp);
                      auto span_of = [&](std::size_t r) {
                        const Matrix u = random::orthogonal_matrix(rng, n);
                        Matrix p(n, n);
                        for (std::size_t i = 0; i < n; ++i)
                          for (std::size_t j = 0; j < n; ++j)
                            for (std::size_t k = 0; k < r; ++k) p(i, j) += u(i, k) * u(j, k);
                        return p;
                      };
                      ps_.push_back(span_of(rp));
                      qs_.push_back(span_of(rq));
                    }
                  }
                  auto p = Operator::from_blocks(ctx.algebra, std::move(ps_));
                  auto q = Operator::from_blocks(ctx.algebra, std::move(qs_));
                  return Instance{std::move(ctx), {std::move(p), std::move(q)}, {}};
                },
                [](const Instance& in, const Settings&) {
                  const auto p = Projection::checked(in.ops[0]);
                  const auto q = Projection::checked(in.ops[1]);
                  return within(std::max(0.0, tau_x(in.ctx, p) - tau_x(in.ctx, q.complement())), 1e-12);
                }});
  ps.push_back({"weighted.mu_invariance",
                [](Rng& rng, const Settings& s) {
                  auto in = one_operator(rng, s);
                  in.params = {random::uniform(rng, -3.0, 3.0)};
                  return in;
                },
                [](const Instance& in, const Settings& s) {
                  const auto& a = in.ops[0];
                  const double lam = in.params[0];
                  const auto mu = weighted_rearrangement(in.ctx, a);
                  return within(std::max({max_abs_difference(mu, weighted_rearrangement(in.ctx, abs(a))),
                                          max_abs_difference(mu, weighted_rearrangement(in.ctx, transpose(a))),
                                          max_abs_difference(mu.scaled(std::abs(lam)), weighted_rearrangement(in.ctx, lam * a))}),
                                s.tolerance);
                },
                true});
  auto shift_instance = [](Rng& rng, const Settings& s) {
    auto in = two_operators(rng, s);
    const double top = 1.1 * tau_x_of_identity(in.ctx);
    in.params = {random::uniform(rng, 0.0, top), random::uniform(rng, 0.0, top)};
    return in;
  };
  ps.push_back({"weighted.sum_shift", shift_instance, [](const Instance& in, const Settings& s) {
                  const double t = in.params[0], u = in.params[1];
                  const double lhs = weighted_rearrangement(in.ctx, in.ops[0] + in.ops[1])(t + u);
                  const double rhs = weighted_rearrangement(in.ctx, in.ops[0])(t) + weighted_rearrangement(in.ctx, in.ops[1])(u);
                  return within(std::max(0.0, lhs - rhs), s.tolerance);
                }, true});
  ps.push_back({"weighted.product_shift", shift_instance, [](const Instance& in, const Settings& s) {
                  const double t = in.params[0], u = in.params[1];
                  const double lhs = weighted_rearrangement(in.ctx, in.ops[0] * in.ops[1])(t + u);
                  const double rhs = weighted_rearrangement(in.ctx, in.ops[0])(t) * weighted_rearrangement(in.ctx, in.ops[1])(u);
                  return within(std::max(0.0, lhs - rhs), s.tolerance);
                }, true});
  ps.push_back({"weighted.structure", one_operator, [](const Instance& in, const Settings& s) {
                  const auto& a = in.ops[0];
                  const auto mu = weighted_rearrangement(in.ctx, a);
                  const auto d = weighted_distribution(in.ctx, a);
                  double excess = 0.0;
                  for (double t : mu.breakpoints()) excess = std::max(excess, d(mu(t)) - t);
                  const double small_t = 1e-9 * tau_x_of_identity(in.ctx);
                  const double limit_gap = std::abs(mu(small_t) - operator_norm(a));
                  auto out = worst({within(excess, s.tolerance), within(limit_gap, 1e-9)});
                  out.ok = out.ok && mu.is_non_increasing() && right_continuous(mu);
                  return out;
                }, true});
  ps.push_back({"weighted.truncation_bound",
                [](Rng& rng, const Settings& s) {
                  auto ctx = context(rng, s, random::bounded_matrix_algebra(rng, 8));
                  auto a = random::diagonal_operator(rng, ctx.algebra);
                  std::vector<double> keep;
                  for (std::size_t i = 0; i < ctx.algebra.dimension(); ++i) keep.push_back(random::coin(rng, 0.5) ? 1.0 : 0.0);
                  keep.push_back(random::uniform(rng, 1e-9, 0.5) * tau_x_of_identity(ctx));
                  return Instance{std::move(ctx), {std::move(a)}, std::move(keep)};
                },
                [](const Instance& in, const Settings& s) {
                  // b = a on a coordinate set; any b with tau_x(supp b) <= t bounds mu_t(a, x) by ||a - b||
                  const auto& a = in.ops[0];
                  const auto diag = a.diagonal_entries();
                  std::vector<double> b(diag.size()), support(diag.size());
                  for (std::size_t i = 0; i < diag.size(); ++i) {
                    b[i] = in.params[i] == 1.0 ? diag[i] : 0.0;
                    support[i] = b[i] != 0.0 ? 1.0 : 0.0;
                  }
                  const auto bop = Operator::diagonal(in.ctx.algebra, b);
                  const double t = tau_x(in.ctx, Operator::diagonal(in.ctx.algebra, support)) + in.params.back();
                  const double lhs = weighted_rearrangement(in.ctx, a)(t);
                  return within(std::max(0.0, lhs - operator_norm(a - bop)), s.tolerance);
                }});

  // ---- norms ----
  ps.push_back({"norms.orlicz_routes",
                [](Rng& rng, const Settings& s) {
                  auto in = one_operator(rng, s);
                  in.params = {static_cast<double>(random::integer(rng, 0, 5))};
                  return in;
                },
                [](const Instance& in, const Settings&) {
                  const NormKind kind = OrliczNorm{orlicz_corpus()[static_cast<std::size_t>(in.params[0])]};
                  const double a = norm_route_a(in.ctx, kind, in.ops[0]);
                  const double b = norm_route_b(in.ctx, kind, in.ops[0]);
                  auto out = within(relative_gap(a, b), 1e-8);
                  out.ok = out.ok && membership_route_a(in.ctx, kind, in.ops[0]) == membership_route_b(in.ctx, kind, in.ops[0]);
                  return out;
                },
                true});
  ps.push_back({"norms.lp_routes",
                [](Rng& rng, const Settings& s) {
                  auto in = one_operator(rng, s);
                  const double choices[] = {1.0, 2.0, 3.0, inf};
                  in.params = {choices[random::integer(rng, 0, 3)]};
                  return in;
                },
                [](const Instance& in, const Settings& s) {
                  const NormKind kind = LpNorm{in.params[0]};
                  const double a = norm_route_a(in.ctx, kind, in.ops[0]);
                  const double b = norm_route_b(in.ctx, kind, in.ops[0]);
                  double gap = relative_gap(a, b);
                  if (in.params[0] == 1.0) gap = std::max(gap, relative_gap(a, tau_x(in.ctx, in.ops[0])));
                  if (std::isinf(in.params[0])) gap = std::max(gap, relative_gap(b, operator_norm(in.ops[0])));
                  return within(gap, s.tolerance);
                },
                true});
  ps.push_back({"norms.functional_calculus",
                [](Rng& rng, const Settings& s) {
                  auto in = positive_operator(rng, s);
                  const auto which = random::integer(rng, 0, 5);
                  // keep the spectrum inside [0, b_psi]
                  if (which == 5) {
                    const double n = operator_norm(in.ops[0]);
                    if (n > 0.0) in.ops[0] = (random::uniform(rng, 0.2, 1.0) / n) * in.ops[0];
                  }
                  in.params = {static_cast<double>(which)};
                  return in;
                },
                [](const Instance& in, const Settings& s) {
                  const auto psi = orlicz_corpus()[static_cast<std::size_t>(in.params[0])];
                  const auto lhs = weighted_rearrangement(in.ctx, in.ops[0]).map([&psi](double v) { return psi(v); });
                  const auto rhs = weighted_rearrangement(in.ctx, apply_function(psi, abs(in.ops[0])));
                  return within(max_abs_difference(lhs, rhs, breakpoint_tolerance), s.tolerance);
                }});
  ps.push_back({"norms.norm_axioms",
                [](Rng& rng, const Settings& s) {
                  auto in = two_operators(rng, s);
                  in.params = {static_cast<double>(random::integer(rng, 0, 8)), random::uniform(rng, -3.0, 3.0)};
                  return in;
                },
                [](const Instance& in, const Settings&) {
                  const auto corpus = orlicz_corpus();
                  const auto idx = static_cast<std::size_t>(in.params[0]);
                  const NormKind kind = idx < corpus.size() ? NormKind{OrliczNorm{corpus[idx]}}
                                                            : NormKind{LpNorm{idx == 6 ? 1.0 : (idx == 7 ? 2.0 : inf)}};
                  const auto& a = in.ops[0];
                  const auto& b = in.ops[1];
                  const double na = norm_route_b(in.ctx, kind, a);
                  const double nb = norm_route_b(in.ctx, kind, b);
                  const double nsum = norm_route_b(in.ctx, kind, a + b);
                  const double lam = in.params[1];
                  const double nscaled = norm_route_b(in.ctx, kind, lam * a);
                  const double triangle = std::max(0.0, nsum - na - nb) / std::max(1.0, na + nb);
                  const double homogeneity = relative_gap(nscaled, std::abs(lam) * na);
                  const bool faithful = norm_route_b(in.ctx, kind, Operator::zero(in.ctx.algebra)) == 0.0 &&
                                        (operator_norm(a) == 0.0 || na > 0.0);
                  auto out = within(std::max(triangle, homogeneity), 1e-8);
                  out.ok = out.ok && faithful;
                  return out;
                },
                true});
  ps.push_back({"norms.conjugation_invariance",
                [](Rng& rng, const Settings& s) {
                  auto ctx = context(rng, s, random::matrix_algebra(rng));
                  auto a = random::any_operator(rng, ctx.algebra);
                  auto v = random::orthogonal_operator(rng, ctx.algebra);
                  return Instance{std::move(ctx), {std::move(a), std::move(v)}, {}};
                },
                [](const Instance& in, const Settings&) {
                  const auto& a = in.ops[0];
                  const auto c = conjugate(a, in.ops[1]);
                  double gap = std::max(max_abs_difference(singular_value_function(a), singular_value_function(c)),
                                        max_abs_difference(weighted_rearrangement(in.ctx, a), weighted_rearrangement(in.ctx, c)));
                  std::vector<NormKind> kinds{LpNorm{1.0}, LpNorm{2.0}, LpNorm{inf}};
                  for (const auto& psi : orlicz_corpus()) kinds.push_back(OrliczNorm{psi});
                  for (const auto& k : kinds) {
                    gap = std::max(gap, relative_gap(norm_route_a(in.ctx, k, a), norm_route_a(in.ctx, k, c)));
                    gap = std::max(gap, relative_gap(norm_route_b(in.ctx, k, a), norm_route_b(in.ctx, k, c)));
                  }
                  return within(gap, 1e-9);
                }});
  return ps;
}

/// Evaluate a check, mapping exceptions to an infinite residual.
inline Outcome evaluate(const Property& p, const Instance& in, const Settings& s) {
  try {
    return p.check(in, s);
  } catch (const std::exception&) {
    return {inf, false};
  }
}

/// Zero operand entries one at a time while the check keeps failing.
inline Instance shrink(const Property& p, Instance in, const Settings& s) {
  if (!p.shrinkable) return in;
  for (std::size_t o = 0; o < in.ops.size(); ++o) {
    if (!in.ops[o].is_matrix()) continue;
    for (std::size_t k = 0; k < in.ops[o].blocks().size(); ++k) {
      const std::size_t n = in.ops[o].blocks()[k].rows();
      for (std::size_t i = 0; i < n * n; ++i) {
        auto blocks = in.ops[o].blocks();
        if (blocks[k].data()[i] == 0.0) continue;
        blocks[k](i / n, i % n) = 0.0;
        Instance candidate = in;
        candidate.ops[o] = Operator::from_blocks(in.ctx.algebra, std::move(blocks));
        try {
          if (!p.check(candidate, s).ok) in = std::move(candidate);
        } catch (const std::exception&) {
        }
      }
    }
  }
  return in;
}

/// Run `trials` independent trials; trial i is seeded from (seed, property index, i).
inline Report run(const Property& p, std::size_t index, std::uint64_t seed, std::size_t trials, const Settings& s) {
  Report r;
  r.name = p.name;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < trials; ++i) {
    random::Rng rng(random::mix_seed(random::mix_seed(seed, index), i));
    Instance in = p.generate(rng, s);
    const Outcome out = evaluate(p, in, s);
    r.worst_residual = std::max(r.worst_residual, out.residual);
    if (out.ok) {
      ++r.passed;
    } else {
      ++r.failed;
      if (!r.counterexample) r.counterexample = shrink(p, std::move(in), s);
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline io::json dump(const std::string& property, const Instance& in) {
  io::json ops = io::json::array();
  for (const auto& a : in.ops) ops.push_back(io::to_json(a));
  io::json params = io::json::array();
  for (double v : in.params) params.push_back(io::format_number(v));
  return {{"property", property}, {"weight", io::to_json(in.ctx.weight)}, {"operators", ops}, {"params", params}};
}

}  // namespace wrearr::verify
