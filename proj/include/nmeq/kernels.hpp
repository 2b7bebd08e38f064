#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "nmeq/errors.hpp"
#include "nmeq/matrix.hpp"

namespace nmeq {

/// Lower Cholesky factor of an SPD matrix, M = L L'.
///
/// Throws NotPositiveDefinite when a pivot falls at or below
/// 1e-13 * ||M||_F, which signals the input violates the SPD contract.
inline LowerTriangular cholesky(const SpdMatrix& m) {
  Matrix work = m.mat();
  const Index bad = detail::cholesky_in_place(work, detail::spd_pivot_tol(m.mat()));
  if (bad >= 0)
    throw NotPositiveDefinite("cholesky: pivot " + std::to_string(bad) +
                              " at or below tolerance");
  const Index n = m.n();
  LowerTriangular l(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) l.set(i, j, work(i, j));
  return l;
}

/// Solves L W = B by forward substitution (W = L^{-1} B).
inline Matrix forward_solve(const LowerTriangular& l, const Matrix& b) {
  if (l.n() != b.rows()) throw DimensionMismatch("forward_solve: dimension mismatch");
  Matrix w = b;
  const Index n = l.n();
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = 0; i < n; ++i) {
      double s = w(i, j);
      for (Index k = 0; k < i; ++k) s -= l(i, k) * w(k, j);
      w(i, j) = s / l(i, i);
    }
  }
  return w;
}

/// Solves L' W = B by back substitution (W = L^{-T} B).
inline Matrix backward_solve_transposed(const LowerTriangular& l, const Matrix& b) {
  if (l.n() != b.rows()) throw DimensionMismatch("backward_solve_transposed: dimension mismatch");
  Matrix w = b;
  const Index n = l.n();
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = n - 1; i >= 0; --i) {
      double s = w(i, j);
      for (Index k = i + 1; k < n; ++k) s -= l(k, i) * w(k, j);
      w(i, j) = s / l(i, i);
    }
  }
  return w;
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Eigenvalues come back ascending; the vectors matrix is orthogonal with
/// column j the eigenvector of values[j]. Sweeps stop when the off-diagonal
/// Frobenius mass falls below 1e-14 * ||M||_F; more than 100 sweeps raises
/// NoConvergence.
inline EigenDecomp sym_eigen(const SymMatrix& m) {
  const Index n = m.n();
  Matrix a = m.mat();
  Matrix v = Matrix::identity(n);
  if (!a.all_finite()) throw Error("sym_eigen: input has non-finite entries");

  const double thresh = 1e-14 * fro_norm(a);
  const int max_sweeps = 100;

  auto off_norm = [&]() {
    double s = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > thresh) {
    if (++sweep > max_sweeps)
      throw NoConvergence("sym_eigen: exceeded " + std::to_string(max_sweeps) + " Jacobi sweeps");
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Symmetric Schur 2x2: pick the rotation zeroing a(p,q).
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(p, k) = a(k, p);
          a(k, q) = s * akp + c * akq;
          a(q, k) = a(k, q);
        }
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });

  EigenDecomp d;
  d.values.resize(static_cast<size_t>(n));
  d.vectors = Matrix(n, n);
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<size_t>(j)];
    d.values[static_cast<size_t>(j)] = a(src, src);
    for (Index i = 0; i < n; ++i) d.vectors(i, j) = v(i, src);
  }
  return d;
}

namespace detail {

/// V diag(f(values)) V' as an exactly symmetric matrix.
template <typename F>
SymMatrix eigen_rebuild(const EigenDecomp& d, F&& f) {
  const Index n = d.vectors.rows();
  Matrix vd = d.vectors;
  for (Index j = 0; j < n; ++j) {
    const double fj = f(d.values[static_cast<size_t>(j)]);
    for (Index i = 0; i < n; ++i) vd(i, j) *= fj;
  }
  return SymMatrix::from_general(vd * d.vectors.transpose());
}

}  // namespace detail

/// M^p for SPD M through the spectral decomposition. p may be any real,
/// p = -1 gives the inverse. Eigenvalues at or below 1e-13 * lambda_max are
/// an error, not clamped.
inline SpdMatrix spd_power(const SpdMatrix& m, double p) {
  if (!std::isfinite(p)) throw Error("spd_power: exponent must be finite");
  const EigenDecomp d = sym_eigen(m.sym());
  const double lam_max = d.values.back();
  const double floor = 1e-13 * lam_max;
  for (double lam : d.values)
    if (!(lam > floor))
      throw NotPositiveDefinite("spd_power: eigenvalue " + std::to_string(lam) +
                                " at or below 1e-13 * lambda_max");
  return SpdMatrix::trusted(detail::eigen_rebuild(d, [p](double lam) { return std::pow(lam, p); }));
}

/// (M' M)^{1/2}: the SPD polar factor of a square matrix, used as the
/// D = I case of the total least squares solver. Throws SingularTarget when
/// M'M has an eigenvalue at or below 1e-13 * lambda_max.
inline SpdMatrix spd_abs(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("spd_abs: matrix not square");
  const SymMatrix mtm = SymMatrix::from_general(m.transpose() * m);
  const EigenDecomp d = sym_eigen(mtm);
  const double lam_max = d.values.back();
  for (double lam : d.values)
    if (!(lam > 1e-13 * lam_max))
      throw SingularTarget("spd_abs: T'T eigenvalue " + std::to_string(lam) +
                           " at or below 1e-13 * lambda_max");
  return SpdMatrix::trusted(
      detail::eigen_rebuild(d, [](double lam) { return std::sqrt(lam); }));
}

/// One Newton-Schulz step toward X^{-1}: returns 2Y - Y X Y, symmetrized to
/// scrub roundoff. Satisfies I - X * result = (I - X Y)^2 exactly in
/// arithmetic.
inline SymMatrix newton_schulz_step(const SymMatrix& y, const SymMatrix& x) {
  if (y.n() != x.n())
    throw DimensionMismatch("newton_schulz_step: dimensions " + std::to_string(y.n()) + " vs " +
                            std::to_string(x.n()));
  const Matrix yxy = y.mat() * (x.mat() * y.mat());
  return SymMatrix::from_general(2.0 * y.mat() - yxy);
}

/// Singular values of a general matrix, ascending, as the square roots of
/// the eigenvalues of M'M.
inline std::vector<double> singular_values(const Matrix& m) {
  const SymMatrix mtm = SymMatrix::from_general(m.transpose() * m);
  EigenDecomp d = sym_eigen(mtm);
  std::vector<double> sv;
  sv.reserve(d.values.size());
  for (double lam : d.values) sv.push_back(std::sqrt(std::max(lam, 0.0)));
  return sv;
}

/// Smallest eigenvalue; the positive definiteness probe used by tests and
/// iterate validation.
inline double lambda_min(const SymMatrix& m) { return sym_eigen(m).values.front(); }

}  // namespace nmeq
