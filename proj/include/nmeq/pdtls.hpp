#pragma once

#include <string>

#include "nmeq/kernels.hpp"
#include "nmeq/matrix.hpp"

namespace nmeq {

/// Total least squares data for D X ~= T with error in both sides.
struct PdtlsProblem {
  Matrix D;  // m x n, full column rank
  Matrix T;  // m x n
};

/// The SPD minimizer of tr((DX - T)'(D - T X^{-1})).
///
/// The stationarity condition reduces to the Riccati-type equation
/// X (D'D) X = T'T, solved by congruence: factor D'D = L L', form
/// Z = (L' T'T L)^{1/2}, and return X = L^{-T} Z L^{-1} by two triangular
/// solves. The solution is unique on the SPD cone.
///
/// Throws RankDeficient when the Cholesky of D'D breaks down and
/// SingularTarget when T'T has an eigenvalue at or below 1e-13 * lambda_max.
inline SpdMatrix pdtls_chol(const PdtlsProblem& p) {
  if (p.D.cols() != p.T.cols() || p.D.rows() != p.T.rows())
    throw DimensionMismatch("pdtls_chol: D and T must share shape");
  if (p.D.rows() < p.D.cols())
    throw DimensionMismatch("pdtls_chol: D must have at least as many rows as columns");

  // Fast path for D = I, where X (D'D) X = T'T collapses to X = (T'T)^{1/2}.
  const Index n = p.D.cols();
  bool d_is_identity = (p.D.rows() == n);
  for (Index i = 0; d_is_identity && i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (p.D(i, j) != (i == j ? 1.0 : 0.0)) {
        d_is_identity = false;
        break;
      }
  if (d_is_identity) return spd_abs(p.T);

  const SymMatrix m = SymMatrix::from_general(p.D.transpose() * p.D);
  Matrix work = m.mat();
  if (detail::cholesky_in_place(work, detail::spd_pivot_tol(m.mat())) >= 0)
    throw RankDeficient("pdtls_chol: D'D is numerically rank deficient");
  LowerTriangular l(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) l.set(i, j, work(i, j));

  const SymMatrix tt = SymMatrix::from_general(p.T.transpose() * p.T);
  {
    const EigenDecomp d = sym_eigen(tt);
    if (!(d.values.front() > 1e-13 * d.values.back()))
      throw SingularTarget("pdtls_chol: T'T eigenvalue at or below 1e-13 * lambda_max");
  }

  const SymMatrix g = SymMatrix::from_general(l.mat().transpose() * tt.mat() * l.mat());
  const SpdMatrix z = [&] {
    const EigenDecomp d = sym_eigen(g);
    if (!(d.values.front() > 0))
      throw SingularTarget("pdtls_chol: congruence of T'T lost definiteness");
    return SpdMatrix::trusted(
        detail::eigen_rebuild(d, [](double lam) { return std::sqrt(lam); }));
  }();

  // X = L^{-T} Z L^{-1} by two back substitutions:
  // S = L^{-T} Z, then X = L^{-T} S' = L^{-T} Z L^{-1} since Z is symmetric.
  const Matrix s = backward_solve_transposed(l, z.mat());
  const Matrix x = backward_solve_transposed(l, s.transpose());
  return SpdMatrix(symmetrize(x));
}

inline SpdMatrix pdtls_chol(const Matrix& d, const Matrix& t) {
  return pdtls_chol(PdtlsProblem{d, t});
}

/// The error functional of the total formulation, evaluated literally:
/// f(X) = tr((DX - T)'(D - T X^{-1})).
inline double pdtls_objective(const PdtlsProblem& p, const SpdMatrix& x) {
  const Matrix xinv = spd_power(x, -1.0).mat();
  const Matrix left = p.D * x.mat() - p.T;
  const Matrix right = p.D - p.T * xinv;
  double tr = 0.0;
  for (Index j = 0; j < left.cols(); ++j)
    for (Index i = 0; i < left.rows(); ++i) tr += left(i, j) * right(i, j);
  return tr;
}

}  // namespace nmeq
