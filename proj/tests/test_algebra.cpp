#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wrearr/algebra.hpp"
#include "wrearr/random.hpp"

using namespace wrearr;

namespace {

const Algebra m2 = Algebra::matrix_blocks({2}, {1.0});
const Algebra m3 = Algebra::matrix_blocks({3}, {1.0});

Operator single(const Algebra& alg, std::vector<double> entries) {
  const std::size_t n = alg.block_sizes()[0];
  return Operator::from_blocks(alg, {Matrix(n, n, std::move(entries))});
}

// 2x2 rotation by theta.
Matrix rotation(double theta) {
  return Matrix(2, 2, {std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)});
}

// mu(a) from its definition for diagonal a: generalized inverse of t -> tau(e_(t,inf)|a|),
// the trace of the coordinate projection onto entries with |a_ii| > t.
double brute_mu(const std::vector<double>& diag, const std::vector<double>& weights, double t) {
  double best = inf;
  std::vector<double> candidates{0.0};
  for (double d : diag) candidates.push_back(std::abs(d));
  for (double s : candidates) {
    double mass = 0.0;
    for (std::size_t i = 0; i < diag.size(); ++i)
      if (std::abs(diag[i]) > s) mass += weights[i];
    if (mass <= t) best = std::min(best, s);
  }
  return best;
}

}  // namespace

TEST(Algebra, Validation) {
  EXPECT_THROW((void)Algebra::matrix_blocks({65}, {1.0}), std::invalid_argument);
  EXPECT_THROW((void)Algebra::matrix_blocks(std::vector<std::size_t>(9, 60), std::vector<double>(9, 1.0)),
               std::invalid_argument);
  EXPECT_THROW((void)Algebra::matrix_blocks({2}, {0.0}), std::invalid_argument);
  EXPECT_THROW((void)Algebra::matrix_blocks({2}, {}), std::invalid_argument);
  EXPECT_THROW((void)Algebra::commutative(-1.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(Algebra::matrix_blocks({1, 2}, {0.5, 1.0}).trace_of_identity(), 2.5);
}

TEST(Operator, PayloadShapeIsChecked) {
  EXPECT_THROW((void)Operator::from_blocks(m2, {Matrix(3, 3)}), std::invalid_argument);
  EXPECT_THROW((void)Operator::from_blocks(m2, {Matrix(2, 2, {inf, 0, 0, 0})}), std::invalid_argument);
  EXPECT_THROW((void)Operator::from_multiplier(Algebra::commutative(1.0), Multiplier({0, 2}, {1})), std::invalid_argument);
}

TEST(Abs, Examples) {
  const auto a = Operator::diagonal(m2, std::vector<double>{-3, 2});
  EXPECT_LT(max_abs_difference(abs(a).blocks()[0], Matrix(2, 2, {3, 0, 0, 2})), 1e-15);
  // |[[0,1],[0,0]]|: a^T a = diag(0, 1) has square root diag(0, 1)
  EXPECT_LT(max_abs_difference(abs(single(m2, {0, 1, 0, 0})).blocks()[0], Matrix(2, 2, {0, 0, 0, 1})), 1e-15);
  const auto alg = Algebra::commutative(1.0);
  EXPECT_EQ(abs(Operator::from_multiplier(alg, Multiplier({0, 1}, {-2}))).multiplier().values()[0], 2.0);
}

TEST(Abs, SquaresToGram) {
  random::Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto alg = random::matrix_algebra(rng);
    const auto a = random::block_operator(rng, alg);
    const auto m = abs(a);
    EXPECT_TRUE(is_positive(m));
    const auto diff = m * m - transpose(a) * a;
    EXPECT_LT(operator_norm(diff), 1e-12);
  }
}

TEST(SingularValueFunction, Examples) {
  const auto a = Operator::diagonal(m3, std::vector<double>{1, 3, 2});
  EXPECT_TRUE(approx_equal(singular_value_function(a), StepFunction({0, 1, 2, 3}, {3, 2, 1})));

  const auto alg = Algebra::matrix_blocks({1, 2}, {0.5, 1.0});
  const auto b = Operator::diagonal(alg, std::vector<double>{5, 4, 4});
  const StepFunction expected({0, 0.5, 2.5}, {5, 4});
  for (double t = 0.0; t < 3.0; t += 0.125) EXPECT_EQ(brute_mu({5, 4, 4}, {0.5, 1, 1}, t), expected(t));
  EXPECT_TRUE(approx_equal(singular_value_function(b), expected));
  EXPECT_TRUE(singular_value_function(Operator::zero(alg)).is_zero());
}

TEST(SingularValueFunction, DiagonalMatchesDefinition) {
  random::Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto alg = random::bounded_matrix_algebra(rng, 8);
    const auto a = random::diagonal_operator(rng, alg);
    std::vector<double> weights;
    for (std::size_t k = 0; k < alg.block_sizes().size(); ++k)
      for (std::size_t i = 0; i < alg.block_sizes()[k]; ++i) weights.push_back(alg.trace_weights()[k]);
    const auto mu = singular_value_function(a);
    const auto diag = a.diagonal_entries();
    for (double t = 0.003; t < alg.trace_of_identity() + 1; t += 0.05) EXPECT_NEAR(mu(t), brute_mu(diag, weights, t), 1e-15);
  }
}

TEST(SingularValueFunction, RotationInvariant) {
  // [[3,0],[0,1]] conjugated by a rotation keeps singular values {3, 1}
  const Matrix r = rotation(0.7);
  const Matrix m = r.transposed() * Matrix(2, 2, {3, 0, 0, 1}) * r;
  EXPECT_LT(max_abs_difference(singular_value_function(single(m2, {m.data().begin(), m.data().end()})),
                               StepFunction({0, 1, 2}, {3, 1})),
            1e-14);
}

TEST(SpectralProjection, Examples) {
  const auto a = Operator::diagonal(m2, std::vector<double>{3, 1});
  EXPECT_LT(max_abs_difference(spectral_projection(a, 2).op().blocks()[0], Matrix(2, 2, {1, 0, 0, 0})), 1e-15);
  EXPECT_EQ(trace(spectral_projection(a, 5)), 0.0);
  // rank one with eigenvalues {2, 0}: 2 u u^T, u = (cos th, sin th)
  const double th = 0.3;
  const double c = std::cos(th), s = std::sin(th);
  const auto b = single(m2, {2 * c * c, 2 * c * s, 2 * c * s, 2 * s * s});
  const Matrix expected(2, 2, {c * c, c * s, c * s, s * s});
  EXPECT_LT(max_abs_difference(spectral_projection(b, 1).op().blocks()[0], expected), 1e-14);
  EXPECT_THROW((void)spectral_projection(single(m2, {-1, 0, 0, 1}), 0.5), std::invalid_argument);
}

TEST(SpectralProjection, CommutativeIndicator) {
  const auto alg = Algebra::commutative(3.0);
  const auto f = Operator::from_multiplier(alg, Multiplier({0, 1, 2, 3}, {0.5, 2, 1}));
  EXPECT_DOUBLE_EQ(trace(spectral_projection(f, 0.75)), 2.0);
}

TEST(ApplyFunction, Examples) {
  const auto sq = OrliczFunction::power(2);
  const auto a = Operator::diagonal(m2, std::vector<double>{2, 3});
  EXPECT_LT(max_abs_difference(apply_function(sq, a).blocks()[0], Matrix(2, 2, {4, 0, 0, 9})), 1e-13);
  EXPECT_EQ(operator_norm(apply_function(OrliczFunction::cosh_minus_one(), Operator::zero(m2))), 0.0);
  // eigenvalues {1, 2} in a rotated basis map to {1, 4} in the same basis
  const Matrix r = rotation(1.1);
  const Matrix m = r * Matrix(2, 2, {1, 0, 0, 2}) * r.transposed();
  const Matrix expected = r * Matrix(2, 2, {1, 0, 0, 4}) * r.transposed();
  EXPECT_LT(max_abs_difference(apply_function(sq, single(m2, {m.data().begin(), m.data().end()})).blocks()[0], expected), 1e-13);
  EXPECT_THROW((void)apply_function(OrliczFunction::capped(1.0), a), membership_error);
}

TEST(PartialIsometry, Examples) {
  const auto [src, rng_] = partial_isometry_conjugates(single(m2, {0, 1, 0, 0}));
  EXPECT_LT(max_abs_difference(src.op().blocks()[0], Matrix(2, 2, {0, 0, 0, 1})), 1e-15);
  EXPECT_LT(max_abs_difference(rng_.op().blocks()[0], Matrix(2, 2, {1, 0, 0, 0})), 1e-15);
  const auto [s1, r1] = partial_isometry_conjugates(Operator::identity(m3));
  EXPECT_EQ(trace(s1), 3.0);
  EXPECT_EQ(trace(r1), 3.0);
  EXPECT_THROW((void)partial_isometry_conjugates(single(m2, {2, 0, 0, 0})), std::invalid_argument);
}

TEST(PartialIsometry, RandomRankTwoInFour) {
  random::Rng rng(4);
  const auto alg = Algebra::matrix_blocks({4}, {1.0});
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix u = random::orthogonal_matrix(rng, 4);
    const Matrix w = random::orthogonal_matrix(rng, 4);
    Matrix v(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) v(i, j) = u(i, 0) * w(j, 0) + u(i, 1) * w(j, 1);
    const auto op = Operator::from_blocks(alg, {v});
    EXPECT_LT(operator_norm(op * transpose(op) * op - op), 1e-12);
    const auto [s, r] = partial_isometry_conjugates(op);
    EXPECT_NEAR(trace(s), 2.0, 1e-12);
    EXPECT_NEAR(trace(r), 2.0, 1e-12);
  }
}

TEST(Projection, CheckedAndComplement) {
  EXPECT_THROW((void)Projection::checked(single(m2, {1, 0.1, 0.1, 0})), std::invalid_argument);
  const auto p = Projection::checked(Operator::diagonal(m2, std::vector<double>{1, 0}));
  EXPECT_EQ(trace(p.complement()), 1.0);
}

TEST(Trace, WeightedBlocks) {
  const auto alg = Algebra::matrix_blocks({1, 2}, {0.5, 2.0});
  EXPECT_DOUBLE_EQ(trace(Operator::diagonal(alg, std::vector<double>{4, 1, 3})), 0.5 * 4 + 2.0 * 4);
  const auto c = Algebra::commutative(2.0);
  EXPECT_DOUBLE_EQ(trace(Operator::from_multiplier(c, Multiplier({0, 1, 2}, {3, 1}))), 4.0);
}
