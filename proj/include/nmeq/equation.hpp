#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nmeq/kernels.hpp"
#include "nmeq/matrix.hpp"

namespace nmeq {

/// X + A' X^{-1} A = Q.
struct Case1Spec {
  Matrix A;
  SpdMatrix Q;
};

/// X - A' X^{-2} A = Q.
struct Case2Spec {
  Matrix A;
  SpdMatrix Q;
};

/// X^s + A1' X^{-t1} A1 + A2' X^{-t2} A2 = Q.
struct Case3Spec {
  Matrix A1;
  Matrix A2;
  SpdMatrix Q;
  double s = 1.0;
  double t1 = 1.0;
  double t2 = 1.0;
};

/// X^s + sum_i Ai' X^{-ti} Ai = Q.
struct GeneralSpec {
  std::vector<Matrix> A_list;
  std::vector<double> t_list;
  double s = 1.0;
  SpdMatrix Q;
};

using EquationSpec = std::variant<Case1Spec, Case2Spec, Case3Spec, GeneralSpec>;

inline int case_tag(const EquationSpec& spec) {
  struct V {
    int operator()(const Case1Spec&) const { return 1; }
    int operator()(const Case2Spec&) const { return 2; }
    int operator()(const Case3Spec&) const { return 3; }
    int operator()(const GeneralSpec&) const { return 4; }
  };
  return std::visit(V{}, spec);
}

inline Index dimension(const EquationSpec& spec) {
  struct V {
    Index operator()(const Case1Spec& c) const { return c.Q.n(); }
    Index operator()(const Case2Spec& c) const { return c.Q.n(); }
    Index operator()(const Case3Spec& c) const { return c.Q.n(); }
    Index operator()(const GeneralSpec& c) const { return c.Q.n(); }
  };
  return std::visit(V{}, spec);
}

struct IdentityInit {};
struct QbasedInit {};
struct CustomInit {
  SpdMatrix X0;
  SpdMatrix Y0;
};
using InitStrategy = std::variant<IdentityInit, QbasedInit, CustomInit>;

struct SolverConfig {
  double delta = 1e-10;
  double eps = 1e-12;
  int max_iter = 500;
  InitStrategy init = QbasedInit{};
  /// Scale in the Case 3 start Y0 = ((gamma+1)/(2*gamma)) Q^{-1/s}.
  double gamma = 1.0;
  /// When set, every recorded X and Y iterate is checked for positive
  /// definiteness and a violation raises NotPositiveDefinite.
  bool validate_iterates = false;

  void check() const {
    if (delta < 0 || eps < 0) throw Error("SolverConfig: delta and eps must be nonnegative");
    if (delta == 0 && eps == 0) throw Error("SolverConfig: delta and eps cannot both be zero");
    if (max_iter < 1) throw Error("SolverConfig: max_iter must be positive");
    if (gamma <= 0) throw Error("SolverConfig: gamma must be positive");
  }
};

/// Mixed absolute/relative stopping rule E <= delta + eps * scale.
inline bool stop_check(double e, double scale, const SolverConfig& cfg) {
  return e <= cfg.delta + cfg.eps * scale;
}

struct SolveReport {
  SpdMatrix X;
  double E = 0.0;              // final stopping residual
  double true_residual = 0.0;  // defining equation recomputed with powers of X
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
  double wall_time_s = 0.0;
  // Final coupled iterates, exposed so the stopping residual can be
  // recomputed and the inverse-iterate quality ||XY - I|| inspected.
  SymMatrix Y;
  SymMatrix U;  // X^s as the iteration produced it; equals X when s = 1
};

namespace detail {

/// Y^t, short-circuiting t == 1 so integer-power paths stay exact.
inline SymMatrix sym_pow(const SpdMatrix& y, double t) {
  if (t == 1.0) return y.sym();
  return spd_power(y, t).sym();
}

}  // namespace detail

/// || lhs(X) - Q ||_F with the defining equation evaluated through exact
/// powers of X, bypassing the solver's inverse iterate.
inline double true_residual(const EquationSpec& spec, const SpdMatrix& x) {
  struct V {
    const SpdMatrix& x;
    double operator()(const Case1Spec& c) const {
      const Matrix xinv = spd_power(x, -1.0).mat();
      return fro_norm(x.mat() + c.A.transpose() * (xinv * c.A) - c.Q.mat());
    }
    double operator()(const Case2Spec& c) const {
      const Matrix xinv2 = spd_power(x, -2.0).mat();
      return fro_norm(x.mat() - c.A.transpose() * (xinv2 * c.A) - c.Q.mat());
    }
    double operator()(const Case3Spec& c) const {
      const Matrix xs = spd_power(x, c.s).mat();
      const Matrix f1 = c.A1.transpose() * (spd_power(x, -c.t1).mat() * c.A1);
      const Matrix f2 = c.A2.transpose() * (spd_power(x, -c.t2).mat() * c.A2);
      return fro_norm(xs + f1 + f2 - c.Q.mat());
    }
    double operator()(const GeneralSpec& c) const {
      Matrix lhs = (c.s == 1.0) ? x.mat() : spd_power(x, c.s).mat();
      for (size_t i = 0; i < c.A_list.size(); ++i)
        lhs = lhs + c.A_list[i].transpose() *
                        (spd_power(x, -c.t_list[i]).mat() * c.A_list[i]);
      return fro_norm(lhs - c.Q.mat());
    }
  };
  return std::visit(V{x}, spec);
}

/// Validates the shared preconditions: square coefficients matching Q.
inline void check_spec(const EquationSpec& spec) {
  const Index n = dimension(spec);
  auto check_mat = [n](const Matrix& a, const char* name) {
    if (a.rows() != n || a.cols() != n)
      throw DimensionMismatch(std::string(name) + ": expected " + std::to_string(n) + "x" +
                              std::to_string(n));
    if (!a.all_finite()) throw Error(std::string(name) + ": non-finite entries");
  };
  struct V {
    Index n;
    decltype(check_mat)& cm;
    void operator()(const Case1Spec& c) const { cm(c.A, "A"); }
    void operator()(const Case2Spec& c) const { cm(c.A, "A"); }
    void operator()(const Case3Spec& c) const {
      cm(c.A1, "A1");
      cm(c.A2, "A2");
      if (!(c.s > 0)) throw Error("Case3: s must be positive");
      if (!(c.t1 > 0 && c.t1 <= 1) || !(c.t2 > 0 && c.t2 <= 1))
        throw Error("Case3: t1, t2 must lie in (0, 1]");
    }
    void operator()(const GeneralSpec& c) const {
      if (c.A_list.empty() || c.A_list.size() != c.t_list.size())
        throw Error("General: A_list and t_list must be nonempty and equal length");
      for (const auto& a : c.A_list) cm(a, "Ai");
      for (double t : c.t_list)
        if (!(t > 0 && t <= 1)) throw Error("General: every ti must lie in (0, 1]");
      if (!(c.s > 0)) throw Error("General: s must be positive");
    }
  };
  std::visit(V{n, check_mat}, spec);
}

}  // namespace nmeq
