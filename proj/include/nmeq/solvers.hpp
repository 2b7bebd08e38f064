#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "nmeq/equation.hpp"
#include "nmeq/kernels.hpp"
#include "nmeq/matrix.hpp"
#include "nmeq/pdtls.hpp"

namespace nmeq {

namespace detail {

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline void validate_spd_iterate(const SymMatrix& m, const char* which) {
  if (!(lambda_min(m) > 0))
    throw NotPositiveDefinite(std::string(which) + " iterate left the SPD cone");
}

/// Starting inverse iterate for the coupled loop. The Q-based default is
/// ((gamma+1)/(2 gamma)) Q^{-1/s}, which collapses to Q^{-1} for the plain
/// inverse equation at the default gamma = 1.
inline SpdMatrix initial_y(const SpdMatrix& q, double s, const SolverConfig& cfg) {
  struct V {
    const SpdMatrix& q;
    double s;
    double gamma;
    SpdMatrix operator()(const IdentityInit&) const { return SpdMatrix::identity(q.n()); }
    SpdMatrix operator()(const QbasedInit&) const {
      const double scale = (gamma + 1.0) / (2.0 * gamma);
      SpdMatrix p = spd_power(q, -1.0 / s);
      if (scale == 1.0) return p;
      return SpdMatrix(scale * p.sym());
    }
    SpdMatrix operator()(const CustomInit& c) const { return c.Y0; }
  };
  return std::visit(V{q, s, cfg.gamma}, cfg.init);
}

inline SpdMatrix initial_x(const SpdMatrix& q, const SolverConfig& cfg) {
  struct V {
    const SpdMatrix& q;
    SpdMatrix operator()(const IdentityInit&) const { return SpdMatrix::identity(q.n()); }
    SpdMatrix operator()(const QbasedInit&) const { return q; }
    SpdMatrix operator()(const CustomInit& c) const { return c.X0; }
  };
  return std::visit(V{q}, cfg.init);
}

}  // namespace detail

/// Core coupled iteration for X^s + sum_i Ai' X^{-ti} Ai = Q.
///
/// Each pass solves the linear subproblem with the last inverse iterate and
/// then advances the inverse by one Newton-Schulz step:
///   U = pdtls_chol(I, Q - sum Ai' Y^{ti} Ai),   X = U^{1/s},
///   Y = Y (2I - X Y),
///   E = || U + sum Ai' Y^{ti} Ai - Q ||_F,  stop when E <= delta + eps ||U||_F.
/// X stays SPD in every iteration because the subproblem solution does.
inline SolveReport solve_general(const std::vector<Matrix>& a_list,
                                 const std::vector<double>& t_list, double s, const SpdMatrix& q,
                                 const SolverConfig& cfg = {}) {
  cfg.check();
  const GeneralSpec spec{a_list, t_list, s, q};
  check_spec(EquationSpec{spec});
  const detail::WallTimer timer;
  const Index n = q.n();
  const Matrix identity = Matrix::identity(n);
  const size_t m = a_list.size();

  SpdMatrix y = detail::initial_y(q, s, cfg);
  SpdMatrix x = SpdMatrix::identity(n);

  auto weighted_sum = [&](const SpdMatrix& yy) {
    Matrix acc(n, n);
    for (size_t i = 0; i < m; ++i) {
      const SymMatrix yt = detail::sym_pow(yy, t_list[i]);
      acc = acc + a_list[i].transpose() * (yt.mat() * a_list[i]);
    }
    return acc;
  };

  SolveReport rep;
  rep.residual_history.reserve(static_cast<size_t>(cfg.max_iter));
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Matrix target = q.mat() - weighted_sum(y);
    const SpdMatrix u = pdtls_chol(identity, target);
    x = (s == 1.0) ? u : spd_power(u, 1.0 / s);
    y = SpdMatrix(newton_schulz_step(y.sym(), x.sym()));
    if (cfg.validate_iterates) {
      detail::validate_spd_iterate(x.sym(), "X");
      detail::validate_spd_iterate(y.sym(), "Y");
    }
    const double e = fro_norm(u.mat() + weighted_sum(y) - q.mat());
    rep.residual_history.push_back(e);
    rep.iterations = k;
    rep.E = e;
    rep.U = u.sym();
    if (!std::isfinite(e)) break;  // diverged; report non-convergence
    if (stop_check(e, fro_norm(u), cfg)) {
      rep.converged = true;
      break;
    }
  }
  rep.X = x;
  rep.Y = y.sym();
  rep.true_residual = true_residual(EquationSpec{spec}, x);
  rep.wall_time_s = timer.seconds();
  return rep;
}

/// X + A' X^{-1} A = Q. Delegates to the general m = 1, t = 1, s = 1 loop,
/// to which it is algebraically identical.
inline SolveReport solve_case1(const Matrix& a, const SpdMatrix& q, const SolverConfig& cfg = {}) {
  SolveReport rep = solve_general({a}, {1.0}, 1.0, q, cfg);
  rep.true_residual = true_residual(EquationSpec{Case1Spec{a, q}}, rep.X);
  return rep;
}

/// X - A' X^{-2} A = Q.
///
/// The roles flip relative to the other cases: the subproblem updates the
/// inverse iterate Y through pdtls_chol(X, 2I - A'Y^2 A X^{-1} - Q X^{-1})
/// and X advances by the Newton-Schulz step X (2I - Y X) toward Y^{-1}. The
/// X update is not guarded by the subproblem, so a cone exit is detected and
/// reported as NotPositiveDefinite.
inline SolveReport solve_case2(const Matrix& a, const SpdMatrix& q, const SolverConfig& cfg = {}) {
  cfg.check();
  const Case2Spec spec{a, q};
  check_spec(EquationSpec{spec});
  const detail::WallTimer timer;
  const Index n = q.n();
  const Matrix identity = Matrix::identity(n);
  const Matrix at = a.transpose();

  SpdMatrix x = detail::initial_x(q, cfg);
  SpdMatrix y = [&] {
    struct V {
      const SpdMatrix& q;
      SpdMatrix operator()(const IdentityInit&) const { return SpdMatrix::identity(q.n()); }
      SpdMatrix operator()(const QbasedInit&) const { return spd_power(q, -1.0); }
      SpdMatrix operator()(const CustomInit& c) const { return c.Y0; }
    };
    return std::visit(V{q}, cfg.init);
  }();

  SolveReport rep;
  rep.residual_history.reserve(static_cast<size_t>(cfg.max_iter));
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Matrix xinv = spd_power(x, -1.0).mat();
    const Matrix ay2a = at * (y.mat() * y.mat() * a);
    const Matrix target = 2.0 * identity - ay2a * xinv - q.mat() * xinv;
    y = pdtls_chol(x.mat(), target);
    const Matrix xn = x.mat() * (2.0 * identity - y.mat() * x.mat());
    const SymMatrix xs = SymMatrix::from_general(xn);
    if (!(lambda_min(xs) > 0))
      throw NotPositiveDefinite("solve_case2: X update left the SPD cone at iteration " +
                                std::to_string(k));
    x = SpdMatrix::trusted(xs);
    if (cfg.validate_iterates) detail::validate_spd_iterate(y.sym(), "Y");
    const double e = fro_norm(x.mat() - at * (y.mat() * y.mat() * a) - q.mat());
    rep.residual_history.push_back(e);
    rep.iterations = k;
    rep.E = e;
    if (!std::isfinite(e)) break;  // diverged; report non-convergence
    if (stop_check(e, fro_norm(x), cfg)) {
      rep.converged = true;
      break;
    }
  }
  rep.X = x;
  rep.Y = y.sym();
  rep.U = x.sym();
  rep.true_residual = true_residual(EquationSpec{spec}, x);
  rep.wall_time_s = timer.seconds();
  return rep;
}

/// X^s + A1' X^{-t1} A1 + A2' X^{-t2} A2 = Q. Behaviorally identical to
/// solve_general with m = 2.
inline SolveReport solve_case3(const Matrix& a1, const Matrix& a2, const SpdMatrix& q, double s,
                               double t1, double t2, const SolverConfig& cfg = {}) {
  SolveReport rep = solve_general({a1, a2}, {t1, t2}, s, q, cfg);
  rep.true_residual = true_residual(EquationSpec{Case3Spec{a1, a2, q, s, t1, t2}}, rep.X);
  return rep;
}

/// Dispatch on an EquationSpec.
inline SolveReport solve(const EquationSpec& spec, const SolverConfig& cfg = {}) {
  struct V {
    const SolverConfig& cfg;
    SolveReport operator()(const Case1Spec& c) const { return solve_case1(c.A, c.Q, cfg); }
    SolveReport operator()(const Case2Spec& c) const { return solve_case2(c.A, c.Q, cfg); }
    SolveReport operator()(const Case3Spec& c) const {
      return solve_case3(c.A1, c.A2, c.Q, c.s, c.t1, c.t2, cfg);
    }
    SolveReport operator()(const GeneralSpec& c) const {
      return solve_general(c.A_list, c.t_list, c.s, c.Q, cfg);
    }
  };
  return std::visit(V{cfg}, spec);
}

}  // namespace nmeq
