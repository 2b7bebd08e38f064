#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nmeq/equation.hpp"
#include "nmeq/existence.hpp"
#include "nmeq/kernels.hpp"
#include "nmeq/matrix.hpp"
#include "nmeq/rng.hpp"

namespace nmeq {

/// One test problem: the equation, the construction's solvability witness or
/// certificate, and enough metadata to reproduce it.
struct GeneratedProblem {
  std::string id;
  EquationSpec spec;
  std::optional<FactorWitness> witness;        // cases 1 and 3
  std::optional<ExistenceCertificate> certificate;  // case 2
  std::uint64_t seed = 0;
  int case_tag = 0;
};

namespace detail {

/// Orthogonal factor of a square matrix by Householder QR, with the signs
/// normalized so diag(R) > 0 and the factorization is unique.
inline Matrix qr_orthogonal(const Matrix& a) {
  const Index n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("qr_orthogonal: matrix not square");
  Matrix r = a;
  Matrix q = Matrix::identity(n);

  std::vector<double> v(static_cast<size_t>(n));
  for (Index k = 0; k < n - 1; ++k) {
    double norm = 0.0;
    for (Index i = k; i < n; ++i) norm += r(i, k) * r(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = (r(k, k) >= 0.0) ? -norm : norm;
    double vnorm2 = 0.0;
    for (Index i = k; i < n; ++i) {
      v[static_cast<size_t>(i)] = r(i, k);
      if (i == k) v[static_cast<size_t>(i)] -= alpha;
      vnorm2 += v[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
    }
    if (vnorm2 == 0.0) continue;
    // r <- (I - 2 v v' / v'v) r ; q <- q (I - 2 v v' / v'v)
    for (Index j = k; j < n; ++j) {
      double dot = 0.0;
      for (Index i = k; i < n; ++i) dot += v[static_cast<size_t>(i)] * r(i, j);
      const double f = 2.0 * dot / vnorm2;
      for (Index i = k; i < n; ++i) r(i, j) -= f * v[static_cast<size_t>(i)];
    }
    for (Index i = 0; i < n; ++i) {
      double dot = 0.0;
      for (Index j = k; j < n; ++j) dot += q(i, j) * v[static_cast<size_t>(j)];
      const double f = 2.0 * dot / vnorm2;
      for (Index j = k; j < n; ++j) q(i, j) -= f * v[static_cast<size_t>(j)];
    }
  }
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0)
      for (Index i = 0; i < n; ++i) q(i, j) = -q(i, j);
  }
  return q;
}

inline Matrix block(const Matrix& m, Index row0, Index rows, Index col0, Index cols) {
  Matrix b(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) b(i, j) = m(row0 + i, col0 + j);
  return b;
}

}  // namespace detail

/// Single-term problem from an orthonormal 2n x n stack: split the first n
/// columns of a random orthogonal matrix into L (top) and N (bottom), so
/// L'L + N'N = I, and set A = (L'L)^{1/2} N with Q = I. Then X = L'L solves
/// the equation exactly and the diagonality condition holds by construction.
inline GeneratedProblem gen_case1(Index n, std::uint64_t seed) {
  Rng rng(seed);
  const Matrix q1 = detail::qr_orthogonal(rng.uniform_matrix(2 * n, 2 * n));
  const Matrix l = detail::block(q1, 0, n, 0, n);
  const Matrix nn = detail::block(q1, n, n, 0, n);
  const SpdMatrix ltl = SpdMatrix(SymMatrix::from_general(l.transpose() * l));
  const Matrix a = spd_power(ltl, 0.5).mat() * nn;

  GeneratedProblem p;
  p.id = "case1-n" + std::to_string(n) + "-s" + std::to_string(seed);
  p.spec = Case1Spec{a, SpdMatrix::identity(n)};
  p.witness = FactorWitness{l, {nn}, SpdMatrix::identity(n)};
  p.seed = seed;
  p.case_tag = 1;
  return p;
}

/// Inverse-square problem with every singular value strictly inside the
/// alpha window (alpha sqrt(alpha-1), sqrt(2 alpha)(alpha-1)):
/// A = U diag(d) V' with U, V orthogonal factors of random matrices, Q = I.
inline GeneratedProblem gen_case2(Index n, double alpha, std::uint64_t seed) {
  if (!(alpha > 2.0)) throw InvalidAlpha("gen_case2: alpha must exceed 2");
  Rng rng(seed);
  const double s1 = detail::g1(alpha);
  const double s2 = detail::g2(alpha);
  std::vector<double> d(static_cast<size_t>(n));
  for (auto& v : d) v = s1 + (s2 - s1) * rng.uniform01();
  const Matrix u = detail::qr_orthogonal(rng.uniform_matrix(n, n));
  const Matrix v = detail::qr_orthogonal(rng.uniform_matrix(n, n));
  Matrix ud = u;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) ud(i, j) *= d[static_cast<size_t>(j)];
  const Matrix a = ud * v.transpose();

  GeneratedProblem p;
  p.id = "case2-n" + std::to_string(n) + "-s" + std::to_string(seed);
  p.spec = Case2Spec{a, SpdMatrix::identity(n)};
  p.certificate = find_alpha_window(a);
  p.seed = seed;
  p.case_tag = 2;
  return p;
}

/// Two-term problem from an orthonormal 3n x n stack: L, N1, N2 are the row
/// blocks of the first n columns of a random orthogonal matrix, and
/// A_i = (L'L)^{t_i/(2s)} N_i with Q = I, so X = (L'L)^{1/s} solves the
/// equation exactly and the stack has orthonormal columns by construction.
inline GeneratedProblem gen_case3(Index n, double s, double t1, double t2, std::uint64_t seed) {
  if (!(s > 0) || !(t1 > 0 && t1 <= 1) || !(t2 > 0 && t2 <= 1))
    throw Error("gen_case3: require s > 0 and t1, t2 in (0, 1]");
  Rng rng(seed);
  const Matrix q1 = detail::qr_orthogonal(rng.uniform_matrix(3 * n, 3 * n));
  const Matrix l = detail::block(q1, 0, n, 0, n);
  const Matrix n1 = detail::block(q1, n, n, 0, n);
  const Matrix n2 = detail::block(q1, 2 * n, n, 0, n);
  const SpdMatrix ltl = SpdMatrix(SymMatrix::from_general(l.transpose() * l));
  const Matrix a1 = spd_power(ltl, t1 / (2.0 * s)).mat() * n1;
  const Matrix a2 = spd_power(ltl, t2 / (2.0 * s)).mat() * n2;

  GeneratedProblem p;
  p.id = "case3-n" + std::to_string(n) + "-s" + std::to_string(seed);
  p.spec = Case3Spec{a1, a2, SpdMatrix::identity(n), s, t1, t2};
  p.witness = FactorWitness{l, {n1, n2}, SpdMatrix::identity(n)};
  p.seed = seed;
  p.case_tag = 3;
  return p;
}

/// The fixed example problems, entries transcribed verbatim: the three real
/// single-term examples, the same coefficients reused for the inverse-square
/// equation plus its dedicated third matrix, and the two two-term examples.
inline std::vector<GeneratedProblem> fixtures() {
  const Matrix a_ex1{{0.0955, 0.0797, 0.0848, 0.0575},
                     {0.0920, 0.0114, 0.0583, 0.0010},
                     {0.0385, 0.0159, 0.0586, 0.0809},
                     {0.0163, 0.0356, 0.0926, 0.0609}};
  const Matrix a_ex2{{0.8862, 0.8978, 0.8194, 0.4279},
                     {0.9311, 0.5934, 0.5319, 0.9661},
                     {0.1908, 0.5038, 0.2021, 0.6201},
                     {0.2586, 0.6128, 0.4539, 0.6954}};
  const Matrix a_ex4{{0.0450, 0.0440, 0.0900, 0.0660, 0.0470, 0.0060},
                     {0.0810, 0.0680, 0.0550, 0.0700, 0.0460, 0.0140},
                     {0.0930, 0.0470, 0.0750, 0.0920, 0.0810, 0.0170},
                     {0.0670, 0.0950, 0.0120, 0.0660, 0.0820, 0.0630},
                     {0.0370, 0.0350, 0.0450, 0.0690, 0.0190, 0.0030},
                     {0.0410, 0.0340, 0.0070, 0.0850, 0.0030, 0.0470}};
  const Matrix a_c2ex3{{-0.1, -0.1, 0.02, 0.08},
                       {-0.09, 0.3, -0.2, -0.1},
                       {-0.04, 0.1, 0.01, -0.1},
                       {-0.08, -0.06, -0.1, -0.2}};
  const Matrix a_c3ex1{{2, 0, 0, 1, 0, 0},
                       {1, 2, 0, 0, 1, 0},
                       {0, 0, 3, 0, 1, 0},
                       {1, 0, 0, 2, 0, 1},
                       {1, 0, 1, 0, 3, 0},
                       {0, 1, 0, 0, 1, 2}};
  const Matrix b_c3ex1{{2, 1, 6, 0, 5, 7},
                       {3, 4, 7, 1, 3, 0},
                       {0, 9, 2, 4, 7, 8},
                       {8, 5, 3, 0, 0, 1},
                       {2, 5, 0, 2, 1, 7},
                       {4, 0, 0, 1, 4, 9}};
  const SpdMatrix q_c3ex1{SymMatrix(Matrix{{105, 66, 58, 15, 41, 73},
                                           {66, 154, 67, 50, 88, 121},
                                           {58, 67, 109, 15, 71, 61},
                                           {15, 50, 15, 28, 37, 57},
                                           {41, 88, 71, 37, 113, 136},
                                           {73, 121, 61, 57, 136, 250}})};
  const Matrix a_c3ex2{{0.5853, 0.0}, {0.0, 0.5497}};
  const Matrix b_c3ex2{{0.9172, 0.0}, {0.0, 0.2858}};
  const SpdMatrix q_c3ex2{SymMatrix(Matrix{{0.3786, 0.0}, {0.0, 0.3769}})};

  const SpdMatrix i4 = SpdMatrix::identity(4);
  const SpdMatrix i6 = SpdMatrix::identity(6);

  std::vector<GeneratedProblem> out;
  auto add = [&out](std::string id, EquationSpec spec, int tag) {
    GeneratedProblem p;
    p.id = std::move(id);
    p.spec = std::move(spec);
    p.case_tag = tag;
    out.push_back(std::move(p));
  };
  add("case1-ex1", Case1Spec{a_ex1, i4}, 1);
  add("case1-ex2", Case1Spec{a_ex2, i4}, 1);
  add("case1-ex4", Case1Spec{a_ex4, i6}, 1);
  add("case2-ex1", Case2Spec{a_ex1, i4}, 2);
  add("case2-ex2", Case2Spec{a_ex2, i4}, 2);
  add("case2-ex3", Case2Spec{a_c2ex3, i4}, 2);
  add("case2-ex4", Case2Spec{a_ex4, i6}, 2);
  add("case3-ex1", Case3Spec{a_c3ex1, b_c3ex1, q_c3ex1, 5.0, 0.2, 0.5}, 3);
  add("case3-ex2", Case3Spec{a_c3ex2, b_c3ex2, q_c3ex2, 2.0, 0.5, 0.5}, 3);
  return out;
}

}  // namespace nmeq
