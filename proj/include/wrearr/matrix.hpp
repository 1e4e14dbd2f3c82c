#pragma once

// Small dense real matrices and Jacobi-based spectral routines.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "wrearr/errors.hpp"

namespace wrearr {

/// Row-major dense real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw validation_error("matrix data size does not match shape");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    assert(a.cols_ == b.rows_);
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  [[nodiscard]] double frobenius_norm() const {
    return std::sqrt(std::inner_product(data_.begin(), data_.end(), data_.begin(), 0.0));
  }

  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  [[nodiscard]] bool is_diagonal() const {
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (r != c && (*this)(r, c) != 0.0) return false;
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Largest entrywise deviation |a - b|.
[[nodiscard]] inline double max_abs_difference(const Matrix& a, const Matrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

struct JacobiOptions {
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

/// Symmetric eigendecomposition a = V diag(values) V^T; columns of V are eigenvectors.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

/*!
  Cyclic Jacobi eigensolver for a symmetric matrix. Iterates until the
  off-diagonal Frobenius norm is below tolerance * (1 + ||a||_F).
  `block` only labels the convergence error.
*/
[[nodiscard]] inline SymmetricEigen symmetric_eigen(const Matrix& a, std::size_t block = 0,
                                                    JacobiOptions opts = {}) {
  assert(a.is_square());
  const std::size_t n = a.rows();
  Matrix m = a;
  // symmetrize against rounding noise in the caller's product
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = 0.5 * (m(i, j) + m(j, i));
  Matrix v = Matrix::identity(n);
  const double threshold = opts.tolerance * (1.0 + a.frobenius_norm());

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * m(i, j) * m(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > threshold) {
    if (++sweep > opts.max_sweeps) throw convergence_error("Jacobi eigensolver did not converge", block);
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  SymmetricEigen out{std::vector<double>(n), std::move(v)};
  for (std::size_t i = 0; i < n; ++i) out.values[i] = m(i, i);
  return out;
}

/// Reassemble V diag(values) V^T.
[[nodiscard]] inline Matrix from_eigen(std::span<const double> values, const Matrix& vectors) {
  const std::size_t n = vectors.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double lam = values[k];
    if (lam == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = lam * vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * vectors(j, k);
    }
  }
  return out;
}

/// Singular values and right singular vectors: a^T a = V diag(sigma^2) V^T.
struct RightSingular {
  std::vector<double> sigma;
  Matrix right;
};

/*!
  One-sided (Hestenes) Jacobi SVD of a square matrix. Rotations orthogonalize
  the columns of a * V; the singular values are the final column norms. This
  is Jacobi on a^T a applied implicitly, which keeps small singular values
  accurate instead of taking square roots of rounded eigenvalues.
*/
[[nodiscard]] inline RightSingular jacobi_svd(const Matrix& a, std::size_t block = 0,
                                              JacobiOptions opts = {}) {
  const std::size_t rows = a.rows();
  const std::size_t n = a.cols();
  Matrix u = a;
  Matrix v = Matrix::identity(n);
  // columns whose pairwise cosine is within roundoff count as orthogonal; columns
  // that are pure roundoff relative to ||a|| are never rotated
  const double eps = static_cast<double>(std::max(rows, n)) * std::numeric_limits<double>::epsilon();
  const double negligible = std::pow(std::numeric_limits<double>::epsilon() * a.frobenius_norm(), 2);

  for (int sweep = 0;; ++sweep) {
    if (sweep > opts.max_sweeps) throw convergence_error("one-sided Jacobi SVD did not converge", block);
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < rows; ++k) {
          alpha += u(k, p) * u(k, p);
          beta += u(k, q) * u(k, q);
          gamma += u(k, p) * u(k, q);
        }
        if (gamma == 0.0 || alpha <= negligible || beta <= negligible || std::abs(gamma) <= eps * std::sqrt(alpha * beta))
          continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < rows; ++k) {
          const double ukp = u(k, p);
          const double ukq = u(k, q);
          u(k, p) = c * ukp - s * ukq;
          u(k, q) = s * ukp + c * ukq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (!rotated) break;
  }
  RightSingular out{std::vector<double>(n), std::move(v)};
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < rows; ++k) s += u(k, j) * u(k, j);
    out.sigma[j] = std::sqrt(s);
  }
  return out;
}

/// Singular values of a, in no particular order.
[[nodiscard]] inline std::vector<double> singular_values(const Matrix& a, std::size_t block = 0) {
  return jacobi_svd(a, block).sigma;
}

/// Spectral (operator 2-) norm.
[[nodiscard]] inline double spectral_norm(const Matrix& a) {
  const auto s = singular_values(a);
  return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
}

/*!
  Orthonormalize the columns of a by modified Gram-Schmidt with one
  reorthogonalization pass (the Q factor of a thin QR). Columns that become
  numerically dependent are dropped, so the result may have fewer columns.
*/
[[nodiscard]] inline Matrix orthonormal_columns(const Matrix& a) {
  const std::size_t rows = a.rows();
  std::vector<std::vector<double>> basis;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    std::vector<double> col(rows);
    for (std::size_t i = 0; i < rows; ++i) col[i] = a(i, j);
    double original = std::sqrt(std::inner_product(col.begin(), col.end(), col.begin(), 0.0));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double d = std::inner_product(col.begin(), col.end(), b.begin(), 0.0);
        for (std::size_t i = 0; i < rows; ++i) col[i] -= d * b[i];
      }
    }
    const double nrm = std::sqrt(std::inner_product(col.begin(), col.end(), col.begin(), 0.0));
    if (nrm <= 1e-10 * std::max(original, 1e-300)) continue;
    for (double& x : col) x /= nrm;
    basis.push_back(std::move(col));
  }
  Matrix q(rows, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) q(i, j) = basis[j][i];
  return q;
}

}  // namespace wrearr
