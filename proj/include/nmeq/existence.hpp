#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "nmeq/kernels.hpp"
#include "nmeq/matrix.hpp"

namespace nmeq {

/// Factors (L, N1[, N2]) certifying solvability through the factorization
/// conditions. N_list has length 1 for the single-term equation and 2 for
/// the two-term one.
struct FactorWitness {
  Matrix L;
  std::vector<Matrix> N_list;
  SpdMatrix Q;
};

/// A scalar alpha > 2 bracketing every singular value of A inside
/// (alpha sqrt(alpha-1), sqrt(2 alpha)(alpha-1)), plus the slacks of the
/// three matrix inequalities it implies.
struct ExistenceCertificate {
  double alpha = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double margin1 = 0.0;  // lambda_min(AA') - alpha^2 (alpha - 1)
  double margin2 = 0.0;  // 1 - max_i f(lambda_i)
  double margin3 = 0.0;  // 1 - ||A||^2 / (2 alpha (alpha - 1)^2)

  bool holds() const { return margin1 > 0 && margin2 > 0 && margin3 > 0; }
};

namespace detail {

inline double relative_offdiag(const Matrix& m) {
  double off = 0.0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j) off = std::max(off, std::abs(m(i, j)));
  const double scale = fro_norm(m);
  return scale > 0 ? off / scale : 0.0;
}

}  // namespace detail

/// Single-term condition: Q^{-1/2} L'L Q^{-1/2} + Q^{-1/2} N'N Q^{-1/2}
/// diagonal, tested with relative off-diagonal threshold 1e-10.
inline bool check_diagonal_condition(const FactorWitness& w) {
  if (w.N_list.size() != 1) throw DimensionMismatch("check_diagonal_condition: expected exactly one N");
  const Matrix qih = spd_power(w.Q, -0.5).mat();
  const Matrix sum = qih * (w.L.transpose() * w.L + w.N_list[0].transpose() * w.N_list[0]) * qih;
  return detail::relative_offdiag(sum) <= 1e-10;
}

/// Two-term condition: the stack (L Q^{-1/2}; N1 Q^{-1/2}; N2 Q^{-1/2}) has
/// orthogonal columns, i.e. its Gram matrix is diagonal. The exponents are
/// part of the factorization being certified but do not enter the Gram test.
inline bool check_orthogonal_columns(const FactorWitness& w, double /*s*/, double /*t1*/, double /*t2*/) {
  if (w.N_list.size() != 2) throw DimensionMismatch("check_orthogonal_columns: expected exactly two N");
  const Matrix qih = spd_power(w.Q, -0.5).mat();
  const Matrix gram =
      qih *
      (w.L.transpose() * w.L + w.N_list[0].transpose() * w.N_list[0] +
       w.N_list[1].transpose() * w.N_list[1]) *
      qih;
  return detail::relative_offdiag(gram) <= 1e-10;
}

/// Sufficient conditions for the inverse-square equation at a given alpha:
///   AA' > alpha^2 (alpha-1) I,
///   sqrt(AA' / (alpha-1)) - AA' / alpha^2 < I,
///   ||A||^2 / (2 alpha (alpha-1)^2) < 1.
/// All three are evaluated on the spectrum of AA'; ties at machine precision
/// count as failures. Margins are returned alongside the verdict.
inline std::pair<bool, ExistenceCertificate> check_alpha_conditions(const Matrix& a, double alpha) {
  if (!(alpha > 2.0)) throw InvalidAlpha("check_alpha_conditions: alpha must exceed 2");
  const SymMatrix aat = SymMatrix::from_general(a * a.transpose());
  const EigenDecomp d = sym_eigen(aat);
  const double lam_min = d.values.front();
  const double lam_max = d.values.back();

  ExistenceCertificate cert;
  cert.alpha = alpha;
  cert.sigma_min = std::sqrt(std::max(lam_min, 0.0));
  cert.sigma_max = std::sqrt(std::max(lam_max, 0.0));
  cert.margin1 = lam_min - alpha * alpha * (alpha - 1.0);
  double fmax = -1e300;
  for (double lam : d.values) {
    const double f = std::sqrt(std::max(lam, 0.0) / (alpha - 1.0)) - lam / (alpha * alpha);
    fmax = std::max(fmax, f);
  }
  cert.margin2 = 1.0 - fmax;
  cert.margin3 = 1.0 - lam_max / (2.0 * alpha * (alpha - 1.0) * (alpha - 1.0));
  return {cert.holds(), cert};
}

namespace detail {

inline double g1(double alpha) { return alpha * std::sqrt(alpha - 1.0); }
inline double g2(double alpha) { return std::sqrt(2.0 * alpha) * (alpha - 1.0); }

/// Inverse of a strictly increasing g on (2, inf) by bisection to 1e-12.
template <typename G>
double increasing_inverse(G&& g, double target) {
  double lo = 2.0;
  double hi = 4.0;
  while (g(hi) < target) hi *= 2.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Searches for an alpha > 2 with every singular value of A strictly inside
/// (alpha sqrt(alpha-1), sqrt(2 alpha)(alpha-1)). Both window edges are
/// strictly increasing in alpha, so the feasible alphas form the interval
/// (g2^{-1}(sigma_max), g1^{-1}(sigma_min)); the certificate carries its
/// midpoint. Absence of a feasible alpha is a value, not an error.
inline std::optional<ExistenceCertificate> find_alpha_window(const Matrix& a) {
  const std::vector<double> sv = singular_values(a);
  const double sigma_min = sv.front();
  const double sigma_max = sv.back();
  // g1 maps (2, inf) onto (2, inf): sigma_min at or below 2 leaves no room.
  if (!(sigma_min > 2.0)) return std::nullopt;

  const double hi = detail::increasing_inverse(detail::g1, sigma_min);
  const double lo = std::max(2.0, detail::increasing_inverse(detail::g2, sigma_max));
  if (!(lo < hi)) return std::nullopt;

  const double alpha = 0.5 * (lo + hi);
  auto [ok, cert] = check_alpha_conditions(a, alpha);
  cert.sigma_min = sigma_min;
  cert.sigma_max = sigma_max;
  if (!ok) return std::nullopt;
  return cert;
}

}  // namespace nmeq
