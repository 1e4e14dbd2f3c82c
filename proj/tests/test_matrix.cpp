#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "wrearr/errors.hpp"
#include "wrearr/matrix.hpp"

using namespace wrearr;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

// Closed-form singular values of a 2x2 matrix [[a, b], [c, d]].
std::vector<double> closed_form_sv(double a, double b, double c, double d) {
  const double s1 = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double root = std::sqrt(std::max(0.0, s1 * s1 - 4.0 * det * det));
  return {std::sqrt(0.5 * (s1 + root)), std::sqrt(std::max(0.0, 0.5 * (s1 - root)))};
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

TEST(Matrix, Arithmetic) {
  Matrix a(2, 2, {1, 2, 3, 4});
  Matrix b(2, 2, {0, 1, 1, 0});
  EXPECT_EQ(a * b, Matrix(2, 2, {2, 1, 4, 3}));
  EXPECT_EQ(a.transposed(), Matrix(2, 2, {1, 3, 2, 4}));
  EXPECT_EQ(a + b, Matrix(2, 2, {1, 3, 4, 4}));
  EXPECT_DOUBLE_EQ(a.frobenius_norm(), std::sqrt(30.0));
  EXPECT_TRUE(Matrix::identity(3).is_diagonal());
  EXPECT_FALSE(a.is_diagonal());
}

TEST(SymmetricEigen, ReconstructsAndIsOrthogonal) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u}) {
    const Matrix b = random_matrix(rng, n);
    const Matrix s = b + b.transposed();
    const auto e = symmetric_eigen(s);
    EXPECT_LT(max_abs_difference(from_eigen(e.values, e.vectors), s), 1e-12 * (1.0 + s.frobenius_norm()));
    EXPECT_LT(max_abs_difference(e.vectors.transposed() * e.vectors, Matrix::identity(n)), 1e-12);
  }
}

TEST(SymmetricEigen, TwoByTwoClosedForm) {
  // [[2, 1], [1, 2]] has eigenvalues 1 and 3
  auto e = symmetric_eigen(Matrix(2, 2, {2, 1, 1, 2}));
  auto vals = sorted_desc(e.values);
  EXPECT_NEAR(vals[0], 3.0, 1e-14);
  EXPECT_NEAR(vals[1], 1.0, 1e-14);
}

TEST(JacobiSvd, MatchesTwoByTwoClosedForm) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix m = random_matrix(rng, 2);
    const auto expected = closed_form_sv(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
    const auto got = sorted_desc(singular_values(m));
    EXPECT_NEAR(got[0], expected[0], 1e-13);
    EXPECT_NEAR(got[1], expected[1], 1e-13);
  }
}

TEST(JacobiSvd, RightVectorsDiagonalizeGram) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {3u, 6u, 12u, 32u}) {
    const Matrix a = random_matrix(rng, n);
    const auto svd = jacobi_svd(a);
    std::vector<double> sq(svd.sigma.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = svd.sigma[i] * svd.sigma[i];
    EXPECT_LT(max_abs_difference(from_eigen(sq, svd.right), a.transposed() * a), 1e-11);
    EXPECT_LT(max_abs_difference(svd.right.transposed() * svd.right, Matrix::identity(n)), 1e-12);
  }
}

TEST(JacobiSvd, RankDeficientAndZero) {
  const Matrix nil(2, 2, {0, 1, 0, 0});
  auto s = sorted_desc(singular_values(nil));
  EXPECT_NEAR(s[0], 1.0, 1e-15);
  EXPECT_NEAR(s[1], 0.0, 1e-15);
  for (double v : singular_values(Matrix(3, 3))) EXPECT_EQ(v, 0.0);
  // product of two rank-one matrices with badly scaled columns
  Matrix a(3, 3, {1e-9, 1, 0, 0, 1e-9, 0, 0, 0, 1e8});
  EXPECT_NO_THROW((void)singular_values(a * a.transposed() * a));
}

TEST(JacobiSvd, SpectralNorm) {
  EXPECT_DOUBLE_EQ(spectral_norm(Matrix::diagonal(std::vector<double>{-3, 2})), 3.0);
}

TEST(OrthonormalColumns, DropsDependentColumns) {
  const Matrix a(3, 3, {1, 2, 0, 0, 0, 1, 1, 2, 0});
  const Matrix q = orthonormal_columns(a);
  EXPECT_EQ(q.cols(), 2u);
  EXPECT_LT(max_abs_difference(q.transposed() * q, Matrix::identity(2)), 1e-14);
}
