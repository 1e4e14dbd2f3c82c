#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "wrearr/stepfn.hpp"

using namespace wrearr;

namespace {

// Independent oracles: sample on a grid of cells of width h, fine enough that
// every breakpoint used below sits on a cell boundary.
constexpr double h = 1.0 / 64.0;

double cell_mass(const Measure& m, double lo, double hi) {
  if (m.is_lebesgue()) return hi - lo;
  return m.density(0.5 * (lo + hi)) * (hi - lo);
}

double grid_integral(const StepFunction& f, const Measure& m, double length) {
  double total = 0.0;
  for (double lo = 0.0; lo < length; lo += h) total += f(lo + 0.5 * h) * cell_mass(m, lo, lo + h);
  return total;
}

double grid_distribution(const StepFunction& f, const Measure& m, double s, double length) {
  double total = 0.0;
  for (double lo = 0.0; lo < length; lo += h)
    if (f(lo + 0.5 * h) > s) total += cell_mass(m, lo, lo + h);
  return total;
}

// inf{s >= 0 : d(s) <= t}: the infimum is attained at 0 or at a value of f.
double brute_rearranged(const StepFunction& f, const Measure& m, double t, double length) {
  std::vector<double> candidates{0.0};
  for (double v : f.values()) candidates.push_back(v);
  double best = inf;
  for (double s : candidates)
    if (grid_distribution(f, m, s, length) <= t) best = std::min(best, s);
  return best;
}

StepFunction random_dyadic(std::mt19937_64& rng, double length) {
  std::uniform_int_distribution<int> pieces(1, 6), level(0, 8);
  std::vector<double> b{0.0};
  std::vector<double> v;
  const int k = pieces(rng);
  const int cells = static_cast<int>(length * 8);
  std::uniform_int_distribution<int> cut(1, cells - 1);
  std::vector<int> cuts;
  for (int i = 0; i + 1 < k; ++i) cuts.push_back(cut(rng));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (int c : cuts) b.push_back(c / 8.0);
  b.push_back(length);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) v.push_back(level(rng) * 0.25);
  return StepFunction(b, v);
}

const StepFunction f321({0, 1, 2, 3}, {3, 2, 1});
const Measure m21 = Measure::with_density(StepFunction({0, 1, 3}, {2, 1}));

}  // namespace

TEST(StepFunction, CanonicalForm) {
  const StepFunction f({0, 1, 2, 3, 4}, {2, 2, 1, 0});
  EXPECT_EQ(f.pieces(), 2u);
  EXPECT_EQ(f.support_end(), 3.0);
  EXPECT_TRUE(StepFunction({0, 2}, {0}).is_zero());
  EXPECT_TRUE(StepFunction().is_zero());
}

TEST(StepFunction, RightContinuousEvaluation) {
  EXPECT_EQ(f321(0.0), 3.0);
  EXPECT_EQ(f321(1.0), 2.0);
  EXPECT_EQ(f321(2.999), 1.0);
  EXPECT_EQ(f321(3.0), 0.0);
  EXPECT_EQ(f321(100.0), 0.0);
}

TEST(StepFunction, RejectsMalformedInput) {
  EXPECT_THROW(StepFunction({0, 2, 1}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(StepFunction({1, 2}, {1}), std::invalid_argument);
  EXPECT_THROW(StepFunction({0, 1}, {-1}), std::invalid_argument);
  EXPECT_THROW(StepFunction({0, 1, 2}, {1}), std::invalid_argument);
}

TEST(Integrate, FrozenValues) {
  EXPECT_DOUBLE_EQ(grid_integral(f321, m21, 3.0), 9.0);
  EXPECT_NEAR(integrate(f321, m21), 9.0, 1e-12);
  EXPECT_EQ(integrate(StepFunction(), m21), 0.0);
  EXPECT_NEAR(integrate(StepFunction::indicator(0, 2), Measure::exponential()), 1.0 - std::exp(-2.0), 1e-12);
  EXPECT_NEAR(integrate(f321, Measure::lebesgue(), 1.5), 3.0 + 1.0, 1e-12);
}

TEST(Integrate, InfiniteValueOnPositiveMass) {
  const StepFunction f({0, 1}, {inf});
  EXPECT_EQ(integrate(f, Measure::lebesgue()), inf);
}

TEST(Distribution, FrozenValues) {
  const StepFunction expected({0, 1, 2, 3}, {4, 3, 2});
  for (double s : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0}) EXPECT_DOUBLE_EQ(grid_distribution(f321, m21, s, 3), expected(s));
  EXPECT_TRUE(approx_equal(distribution(f321, m21), expected));
  EXPECT_TRUE(approx_equal(distribution(StepFunction::constant(1.0, 5.0), Measure::lebesgue()), StepFunction({0, 1}, {5})));
  EXPECT_TRUE(distribution(StepFunction(), m21).is_zero());
}

TEST(Rearrange, FrozenValues) {
  EXPECT_TRUE(approx_equal(rearrange(f321, Measure::lebesgue()), f321));
  EXPECT_TRUE(approx_equal(rearrange(StepFunction({0, 1, 2}, {1, 3}), Measure::lebesgue()), StepFunction({0, 1, 2}, {3, 1})));
  const StepFunction expected({0, 2, 3, 4}, {3, 2, 1});
  for (double t = 0.0; t < 4.5; t += 0.125) EXPECT_EQ(brute_rearranged(f321, m21, t, 3), expected(t)) << t;
  EXPECT_TRUE(approx_equal(rearrange(f321, m21), expected));
}

TEST(Rearrange, MatchesGridOracleOnRandomDyadicInputs) {
  std::mt19937_64 rng(2024);
  const Measure dens = Measure::with_density(StepFunction({0, 0.5, 1.5, 4}, {3, 1.5, 0.25}));
  for (int trial = 0; trial < 60; ++trial) {
    const StepFunction f = random_dyadic(rng, 4.0);
    for (const Measure& m : {Measure::lebesgue(), dens}) {
      EXPECT_NEAR(integrate(f, m), grid_integral(f, m, 4.0), 1e-12);
      const auto d = distribution(f, m);
      for (double s = 0.0; s <= 2.25; s += 0.125) EXPECT_NEAR(d(s), grid_distribution(f, m, s, 4.0), 1e-12);
      const auto mu = rearrange(f, m);
      EXPECT_TRUE(mu.is_non_increasing());
      const double top = m.of_interval(0.0, 4.0) + 0.5;
      for (double t = 0.0; t < top; t += 0.0625 + 1e-7) EXPECT_EQ(mu(t), brute_rearranged(f, m, t, 4.0)) << t;
    }
  }
}

TEST(GeneralizedInverse, MatchesBruteForce) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    // random non-increasing d
    auto raw = random_dyadic(rng, 3.0);
    auto d = rearrange(raw, Measure::lebesgue());
    const auto g = generalized_inverse(d);
    std::vector<double> candidates{0.0};
    for (double b : d.breakpoints()) candidates.push_back(b);
    for (double t = 0.0; t < 3.0; t += 0.03125 + 1e-9) {
      double best = inf;
      for (double s : candidates)
        if (d(s) <= t) best = std::min(best, s);
      EXPECT_EQ(g(t), best);
    }
  }
}

TEST(GeneralizedInverse, RejectsIncreasingInput) {
  EXPECT_THROW((void)generalized_inverse(StepFunction({0, 1, 2}, {1, 2})), std::invalid_argument);
}

TEST(Measure, Intervals) {
  EXPECT_NEAR(m21.of_interval(0.5, 2.0), 1.0 + 1.0, 1e-15);
  EXPECT_NEAR(Measure::exponential().of_interval(1, 2), std::exp(-1.0) - std::exp(-2.0), 1e-15);
  EXPECT_NEAR(Measure::exponential().of_interval(0, inf), 1.0, 1e-15);
  EXPECT_EQ(Measure::lebesgue().of_interval(0, inf), inf);
}

TEST(StepFunction, Rows) {
  const auto rs = rows(f321);
  ASSERT_EQ(rs.size(), 3u);
  EXPECT_EQ(rs[1].start, 1.0);
  EXPECT_EQ(rs[1].end, 2.0);
  EXPECT_EQ(rs[1].value, 2.0);
}
