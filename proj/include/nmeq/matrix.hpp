#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "nmeq/errors.hpp"

namespace nmeq {

using Index = std::ptrdiff_t;

/// Dense real matrix, row major, value semantics.
class Matrix {
 public:
  Matrix() = default;

  Matrix(Index rows, Index cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols), fill) {
    if (rows < 1 || cols < 1)
      throw DimensionMismatch("Matrix: dimensions must be positive, got " +
                              std::to_string(rows) + "x" + std::to_string(cols));
  }

  Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = static_cast<Index>(init.size());
    cols_ = rows_ > 0 ? static_cast<Index>(init.begin()->size()) : 0;
    if (rows_ < 1 || cols_ < 1)
      throw DimensionMismatch("Matrix: empty initializer");
    data_.reserve(static_cast<size_t>(rows_ * cols_));
    for (const auto& row : init) {
      if (static_cast<Index>(row.size()) != cols_)
        throw DimensionMismatch("Matrix: ragged initializer");
      for (double v : row) data_.push_back(v);
    }
  }

  static Matrix identity(Index n) {
    Matrix I(n, n);
    for (Index i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  double& operator()(Index i, Index j) { return data_[static_cast<size_t>(i * cols_ + j)]; }
  double operator()(Index i, Index j) const { return data_[static_cast<size_t>(i * cols_ + j)]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (Index i = 0; i < rows_; ++i)
      for (Index j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

inline void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(op) + ": shapes " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b, "operator+");
  Matrix c = a;
  for (size_t k = 0; k < c.data().size(); ++k) c.data()[k] += b.data()[k];
  return c;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b, "operator-");
  Matrix c = a;
  for (size_t k = 0; k < c.data().size(); ++k) c.data()[k] -= b.data()[k];
  return c;
}

inline Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

inline Matrix operator*(const Matrix& a, double s) { return s * a; }

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("operator*: inner dimensions " + std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()));
  Matrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (Index j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

/// Frobenius norm, sqrt of the sum of squared entries.
inline double fro_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

inline double max_abs(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s = std::max(s, std::abs(v));
  return s;
}

/// (M + M')/2.
inline Matrix symmetrize(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("symmetrize: matrix not square");
  Matrix s(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    s(i, i) = m(i, i);
    for (Index j = 0; j < i; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

/// Square matrix whose (i,j) and (j,i) reads are bit identical by storage.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(Index n) : m_(n, n) {}

  /// Accepts a square matrix that is already exactly symmetric; use
  /// from_general for roundoff-level asymmetry.
  explicit SymMatrix(const Matrix& m) : m_(m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("SymMatrix: matrix not square");
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < i; ++j)
        if (m(i, j) != m(j, i))
          throw DimensionMismatch("SymMatrix: entries (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") differ across the diagonal");
  }

  /// Symmetrizes the input, scrubbing roundoff.
  static SymMatrix from_general(const Matrix& m) { return SymMatrix(symmetrize(m)); }

  static SymMatrix identity(Index n) { return SymMatrix(Matrix::identity(n)); }

  Index n() const { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }

  /// Sets both (i,j) and (j,i).
  void set(Index i, Index j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

inline SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.mat() + b.mat());
}
inline SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.mat() - b.mat());
}
inline SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.mat()); }

inline double fro_norm(const SymMatrix& m) { return fro_norm(m.mat()); }

/// Symmetric positive definite refinement of SymMatrix. Construction checks
/// positive definiteness by attempting a Cholesky factorization, so holding
/// an SpdMatrix is itself the witness.
class SpdMatrix {
 public:
  SpdMatrix() = default;

  explicit SpdMatrix(const SymMatrix& s) : s_(s) { verify(); }
  explicit SpdMatrix(const Matrix& m) : s_(m) { verify(); }

  static SpdMatrix identity(Index n) { return SpdMatrix(SymMatrix::identity(n)); }

  /// Wraps without re-checking; for kernels whose output is SPD by
  /// construction (eigendecomposition with positive values).
  static SpdMatrix trusted(SymMatrix s) { return SpdMatrix(std::move(s), 0); }

  Index n() const { return s_.n(); }
  double operator()(Index i, Index j) const { return s_(i, j); }
  const SymMatrix& sym() const { return s_; }
  const Matrix& mat() const { return s_.mat(); }

 private:
  SpdMatrix(SymMatrix s, int) : s_(std::move(s)) {}
  void verify() const;

  SymMatrix s_;
};

namespace detail {

/// In-place lower Cholesky of the symmetric matrix stored in m. The pivot is
/// the diagonal remainder before the square root; returns the index of the
/// first pivot at or below tol, or -1 on success. Only the lower triangle of
/// the result is meaningful.
inline Index cholesky_in_place(Matrix& m, double tol) {
  const Index n = m.rows();
  for (Index j = 0; j < n; ++j) {
    double d = m(j, j);
    for (Index k = 0; k < j; ++k) d -= m(j, k) * m(j, k);
    if (!(d > tol) || !std::isfinite(d)) return j;
    const double ljj = std::sqrt(d);
    m(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Index k = 0; k < j; ++k) s -= m(i, k) * m(j, k);
      m(i, j) = s / ljj;
    }
  }
  return -1;
}

/// Pivot tolerance used by the positive definiteness contract.
inline double spd_pivot_tol(const Matrix& m) { return 1e-13 * fro_norm(m); }

}  // namespace detail

inline void SpdMatrix::verify() const {
  Matrix work = s_.mat();
  const Index bad = detail::cholesky_in_place(work, detail::spd_pivot_tol(s_.mat()));
  if (bad >= 0)
    throw NotPositiveDefinite("SpdMatrix: Cholesky pivot " + std::to_string(bad) +
                              " at or below tolerance; matrix is not positive definite");
}

inline double fro_norm(const SpdMatrix& m) { return fro_norm(m.mat()); }

/// Lower triangular with strictly zero upper part.
class LowerTriangular {
 public:
  explicit LowerTriangular(Index n) : m_(n, n) {}

  Index n() const { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  void set(Index i, Index j, double v) {
    if (j > i) throw DimensionMismatch("LowerTriangular: write above diagonal");
    m_(i, j) = v;
  }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

/// Result of a symmetric eigendecomposition, eigenvalues ascending.
struct EigenDecomp {
  Matrix vectors;               // orthogonal, columns are eigenvectors
  std::vector<double> values;   // ascending

  Matrix reconstruct() const {
    const Index n = vectors.rows();
    Matrix vd = vectors;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) vd(i, j) *= values[static_cast<size_t>(j)];
    return vd * vectors.transpose();
  }
};

}  // namespace nmeq
