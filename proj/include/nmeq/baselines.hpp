#pragma once

#include <string>
#include <vector>

#include "nmeq/equation.hpp"
#include "nmeq/kernels.hpp"
#include "nmeq/solvers.hpp"

namespace nmeq {

/// Plain substitution baselines standing in for the cited comparator
/// methods, which this artifact does not reimplement. They share the stop
/// rule and report shape with the main solvers so benchmark comparisons stay
/// apples-to-apples. The stopping residual is the defining equation itself.

/// X_{k+1} = Q - A' X_k^{-1} A from X_0 = Q.
inline SolveReport fixed_point_case1(const Matrix& a, const SpdMatrix& q,
                                     const SolverConfig& cfg = {}) {
  cfg.check();
  check_spec(EquationSpec{Case1Spec{a, q}});
  const detail::WallTimer timer;
  const Matrix at = a.transpose();

  SpdMatrix x = q;
  SolveReport rep;
  rep.residual_history.reserve(static_cast<size_t>(cfg.max_iter));
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Matrix xinv = spd_power(x, -1.0).mat();
    const SymMatrix xn = SymMatrix::from_general(q.mat() - at * (xinv * a));
    if (!(lambda_min(xn) > 0))
      throw NotPositiveDefinite("fixed_point_case1: iterate left the SPD cone at iteration " +
                                std::to_string(k));
    x = SpdMatrix::trusted(xn);
    const double e = fro_norm(x.mat() + at * (spd_power(x, -1.0).mat() * a) - q.mat());
    rep.residual_history.push_back(e);
    rep.iterations = k;
    rep.E = e;
    if (!std::isfinite(e)) break;
    if (stop_check(e, fro_norm(x), cfg)) {
      rep.converged = true;
      break;
    }
  }
  rep.X = x;
  rep.Y = spd_power(x, -1.0).sym();
  rep.U = x.sym();
  rep.true_residual = rep.E;
  rep.wall_time_s = timer.seconds();
  return rep;
}

/// X_{k+1} = Q + A' X_k^{-2} A from X_0 = Q.
inline SolveReport fixed_point_case2(const Matrix& a, const SpdMatrix& q,
                                     const SolverConfig& cfg = {}) {
  cfg.check();
  check_spec(EquationSpec{Case2Spec{a, q}});
  const detail::WallTimer timer;
  const Matrix at = a.transpose();

  SpdMatrix x = q;
  SolveReport rep;
  rep.residual_history.reserve(static_cast<size_t>(cfg.max_iter));
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Matrix xinv2 = spd_power(x, -2.0).mat();
    const SymMatrix xn = SymMatrix::from_general(q.mat() + at * (xinv2 * a));
    if (!(lambda_min(xn) > 0))
      throw NotPositiveDefinite("fixed_point_case2: iterate left the SPD cone at iteration " +
                                std::to_string(k));
    x = SpdMatrix::trusted(xn);
    const double e = fro_norm(x.mat() - at * (spd_power(x, -2.0).mat() * a) - q.mat());
    rep.residual_history.push_back(e);
    rep.iterations = k;
    rep.E = e;
    if (!std::isfinite(e)) break;
    if (stop_check(e, fro_norm(x), cfg)) {
      rep.converged = true;
      break;
    }
  }
  rep.X = x;
  rep.Y = spd_power(x, -1.0).sym();
  rep.U = x.sym();
  rep.true_residual = rep.E;
  rep.wall_time_s = timer.seconds();
  return rep;
}

/// X_{k+1} = (Q - A1' X_k^{-t1} A1 - A2' X_k^{-t2} A2)^{1/s} from
/// X_0 = Q^{1/s}; NotPositiveDefinite when the base leaves the cone.
inline SolveReport fixed_point_case3(const Matrix& a1, const Matrix& a2, const SpdMatrix& q,
                                     double s, double t1, double t2,
                                     const SolverConfig& cfg = {}) {
  cfg.check();
  const Case3Spec spec{a1, a2, q, s, t1, t2};
  check_spec(EquationSpec{spec});
  const detail::WallTimer timer;

  SpdMatrix x = (s == 1.0) ? q : spd_power(q, 1.0 / s);
  SolveReport rep;
  rep.residual_history.reserve(static_cast<size_t>(cfg.max_iter));
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Matrix f1 = a1.transpose() * (spd_power(x, -t1).mat() * a1);
    const Matrix f2 = a2.transpose() * (spd_power(x, -t2).mat() * a2);
    const SymMatrix base = SymMatrix::from_general(q.mat() - f1 - f2);
    if (!(lambda_min(base) > 0))
      throw NotPositiveDefinite("fixed_point_case3: update base left the SPD cone at iteration " +
                                std::to_string(k));
    x = (s == 1.0) ? SpdMatrix::trusted(base) : spd_power(SpdMatrix::trusted(base), 1.0 / s);
    const double e = true_residual(EquationSpec{spec}, x);
    rep.residual_history.push_back(e);
    rep.iterations = k;
    rep.E = e;
    if (!std::isfinite(e)) break;
    const double scale = (s == 1.0) ? fro_norm(x) : fro_norm(spd_power(x, s));
    if (stop_check(e, scale, cfg)) {
      rep.converged = true;
      break;
    }
  }
  rep.X = x;
  rep.Y = spd_power(x, -1.0).sym();
  rep.U = (s == 1.0) ? x.sym() : spd_power(x, s).sym();
  rep.true_residual = rep.E;
  rep.wall_time_s = timer.seconds();
  return rep;
}

}  // namespace nmeq
