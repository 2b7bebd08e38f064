#include <catch2/catch.hpp>
#include <cmath>

#include "nmeq/existence.hpp"
#include "nmeq/probgen.hpp"
#include "test_support.hpp"

using namespace nmeq;

TEST_CASE("diagonal-sum condition on orthonormal and identity witnesses", "[existence]") {
  // Orthonormal-column stack: the sum collapses to the identity.
  const GeneratedProblem p = gen_case1(4, 42);
  REQUIRE(p.witness.has_value());
  CHECK(check_diagonal_condition(*p.witness));

  // L = N = I gives the diagonal 2I.
  FactorWitness w{Matrix::identity(3), {Matrix::identity(3)}, SpdMatrix::identity(3)};
  CHECK(check_diagonal_condition(w));

  // A dense N breaks diagonality.
  Matrix n{{0.3, 1.3}, {1.3, 0.3}};
  FactorWitness bad{Matrix::identity(2), {n}, SpdMatrix::identity(2)};
  CHECK_FALSE(check_diagonal_condition(bad));

  CHECK_THROWS_AS(
      check_diagonal_condition(FactorWitness{Matrix::identity(2), {}, SpdMatrix::identity(2)}),
      DimensionMismatch);
}

TEST_CASE("orthogonal-columns condition on stacks and perturbations", "[existence]") {
  const GeneratedProblem p = gen_case3(5, 2.0, 0.5, 0.5, 11);
  REQUIRE(p.witness.has_value());
  CHECK(check_orthogonal_columns(*p.witness, 2.0, 0.5, 0.5));

  // Diagonal Gram still counts as orthogonal columns.
  FactorWitness diag{Matrix::identity(2),
                     {Matrix::identity(2), Matrix::identity(2)},
                     SpdMatrix::identity(2)};
  CHECK(check_orthogonal_columns(diag, 2.0, 0.5, 0.5));

  // All-ones N1 has a dense Gram.
  FactorWitness dense{Matrix::identity(2),
                      {Matrix(2, 2, 1.0), Matrix::identity(2)},
                      SpdMatrix::identity(2)};
  CHECK_FALSE(check_orthogonal_columns(dense, 2.0, 0.5, 0.5));

  // Perturbing one witness entry by 1e-3 destroys orthogonality.
  FactorWitness bumped = *p.witness;
  bumped.L(0, 1) += 1e-3;
  CHECK_FALSE(check_orthogonal_columns(bumped, 2.0, 0.5, 0.5));
}

TEST_CASE("fixed-alpha conditions against scalar arithmetic", "[existence]") {
  Matrix a(1, 1);
  a(0, 0) = 4.5;
  auto [ok, cert] = check_alpha_conditions(a, 3.0);
  CHECK(ok);
  // 20.25 > 18, sqrt(20.25/2) - 20.25/9 ~ 0.932 < 1, 20.25/24 < 1.
  CHECK(cert.margin1 == Approx(20.25 - 18.0));
  CHECK(cert.margin2 == Approx(1.0 - (std::sqrt(20.25 / 2.0) - 20.25 / 9.0)));
  CHECK(cert.margin3 == Approx(1.0 - 20.25 / 24.0));

  a(0, 0) = 1.0;
  auto [ok_small, cert_small] = check_alpha_conditions(a, 3.0);
  CHECK_FALSE(ok_small);
  CHECK(cert_small.margin1 < 0);  // 1 < 18 fails

  CHECK_THROWS_AS(check_alpha_conditions(a, 2.0), InvalidAlpha);
}

TEST_CASE("fixed-alpha conditions hold on generated window problems", "[existence]") {
  const GeneratedProblem p = gen_case2(6, 3.0, 5);
  const auto& spec = std::get<Case2Spec>(p.spec);
  auto [ok, cert] = check_alpha_conditions(spec.A, 3.0);
  CHECK(ok);
  CHECK(cert.holds());
}

TEST_CASE("alpha window search brackets the scalar case", "[existence]") {
  Matrix a(1, 1);
  a(0, 0) = 4.5;
  const auto cert = find_alpha_window(a);
  REQUIRE(cert.has_value());
  // g1(3) ~ 4.243 < 4.5 < g2(3) ~ 4.899, so an alpha near 3 works.
  CHECK(cert->alpha > 2.5);
  CHECK(cert->alpha < 3.5);
  CHECK(detail::g1(cert->alpha) < 4.5);
  CHECK(detail::g2(cert->alpha) > 4.5);

  // Identical singular values give the same alpha as the scalar case.
  const Matrix a5 = 4.5 * Matrix::identity(5);
  const auto cert5 = find_alpha_window(a5);
  REQUIRE(cert5.has_value());
  CHECK(cert5->alpha == Approx(cert->alpha).margin(1e-9));
}

TEST_CASE("infeasible singular value spreads return no certificate", "[existence]") {
  // sigma_min = 1 is below g1's range entirely.
  Matrix wide(2, 2);
  wide(0, 0) = 1.0;
  wide(1, 1) = 100.0;
  CHECK_FALSE(find_alpha_window(wide).has_value());

  // Wide but large spread: g2^{-1}(100) far above g1^{-1}(5).
  wide(0, 0) = 5.0;
  CHECK_FALSE(find_alpha_window(wide).has_value());

  // The zero matrix cannot be certified.
  CHECK_FALSE(find_alpha_window(Matrix(3, 3)).has_value());
}

TEST_CASE("a window certificate always satisfies the fixed-alpha conditions", "[existence][property]") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 9ull, 77ull}) {
    const GeneratedProblem p = gen_case2(5, 2.7, seed);
    const auto& spec = std::get<Case2Spec>(p.spec);
    const auto cert = find_alpha_window(spec.A);
    REQUIRE(cert.has_value());
    auto [ok, c3] = check_alpha_conditions(spec.A, cert->alpha);
    CHECK(ok);
    CHECK(c3.margin1 > 0);
    CHECK(c3.margin2 > 0);
    CHECK(c3.margin3 > 0);
  }
}

TEST_CASE("window edges are strictly increasing", "[existence][property]") {
  double prev1 = detail::g1(2.0 + 1e-9);
  double prev2 = detail::g2(2.0 + 1e-9);
  for (double alpha = 2.1; alpha < 12.0; alpha += 0.37) {
    CHECK(detail::g1(alpha) > prev1);
    CHECK(detail::g2(alpha) > prev2);
    prev1 = detail::g1(alpha);
    prev2 = detail::g2(alpha);
  }
}
