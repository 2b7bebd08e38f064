#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "nmeq/kernels.hpp"
#include "nmeq/matrix.hpp"
#include "nmeq/rng.hpp"

namespace testsup {

using nmeq::Index;
using nmeq::Matrix;

inline Matrix random_matrix(nmeq::Rng& rng, Index rows, Index cols, double lo = -1.0,
                            double hi = 1.0) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = lo + (hi - lo) * rng.uniform01();
  return m;
}

inline nmeq::SymMatrix random_symmetric(nmeq::Rng& rng, Index n, double scale = 1.0) {
  nmeq::SymMatrix s(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) s.set(i, j, scale * (2.0 * rng.uniform01() - 1.0));
  return s;
}

/// Random SPD matrix with eigenvalues drawn uniformly from [lam_lo, lam_hi],
/// so the condition number is controlled by construction.
inline nmeq::SpdMatrix random_spd(nmeq::Rng& rng, Index n, double lam_lo = 0.5,
                                  double lam_hi = 2.0) {
  const nmeq::EigenDecomp basis = nmeq::sym_eigen(random_symmetric(rng, n));
  Matrix vd = basis.vectors;
  for (Index j = 0; j < n; ++j) {
    const double lam = lam_lo + (lam_hi - lam_lo) * rng.uniform01();
    for (Index i = 0; i < n; ++i) vd(i, j) *= lam;
  }
  return nmeq::SpdMatrix(nmeq::SymMatrix::from_general(vd * basis.vectors.transpose()));
}

/// Bisection root finder for a continuous scalar function with a sign change
/// on [lo, hi]; the independent oracle for the scalar equation examples.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-13) {
  double flo = f(lo);
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo <= 0) == (fm <= 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Derivative-free Nelder-Mead minimization, used as the brute-force oracle
/// against closed-form solutions. Deterministic given the start point.
inline std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x0, int max_evals = 60000,
                                       double tol = 1e-14) {
  const size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (size_t i = 0; i < n; ++i)
    simplex[i + 1][i] += (x0[i] != 0.0 ? 0.05 * std::abs(x0[i]) : 0.025);
  std::vector<double> fx(n + 1);
  int evals = 0;
  for (size_t i = 0; i <= n; ++i) fx[i] = (++evals, f(simplex[i]));

  auto order = [&] {
    for (size_t i = 0; i <= n; ++i)
      for (size_t j = i + 1; j <= n; ++j)
        if (fx[j] < fx[i]) {
          std::swap(fx[i], fx[j]);
          std::swap(simplex[i], simplex[j]);
        }
  };
  order();

  while (evals < max_evals && fx[n] - fx[0] > tol * (1.0 + std::abs(fx[0]))) {
    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);

    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (size_t j = 0; j < n; ++j) p[j] = centroid[j] + coef * (simplex[n][j] - centroid[j]);
      return p;
    };

    const auto refl = blend(-1.0);
    const double fr = (++evals, f(refl));
    if (fr < fx[0]) {
      const auto exp_ = blend(-2.0);
      const double fe = (++evals, f(exp_));
      simplex[n] = (fe < fr) ? exp_ : refl;
      fx[n] = std::min(fe, fr);
    } else if (fr < fx[n - 1]) {
      simplex[n] = refl;
      fx[n] = fr;
    } else {
      const auto con = blend(0.5);
      const double fc = (++evals, f(con));
      if (fc < fx[n]) {
        simplex[n] = con;
        fx[n] = fc;
      } else {
        for (size_t i = 1; i <= n; ++i) {
          for (size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          fx[i] = (++evals, f(simplex[i]));
        }
      }
    }
    order();
  }
  return simplex[0];
}

}  // namespace testsup
