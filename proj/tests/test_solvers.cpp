#include <catch2/catch.hpp>
#include <cmath>

#include "nmeq/probgen.hpp"
#include "nmeq/solvers.hpp"
#include "test_support.hpp"

using namespace nmeq;

namespace {

SpdMatrix scalar_spd(double v) {
  SymMatrix s(1);
  s.set(0, 0, v);
  return SpdMatrix(s);
}

const GeneratedProblem& fixture(const std::vector<GeneratedProblem>& all, const std::string& id) {
  for (const auto& p : all)
    if (p.id == id) return p;
  throw std::runtime_error("missing fixture " + id);
}

}  // namespace

TEST_CASE("stop_check boundary arithmetic", "[solvers]") {
  SolverConfig cfg;  // delta 1e-10, eps 1e-12
  CHECK(stop_check(1e-12, 1.0, cfg));
  CHECK_FALSE(stop_check(1e-9, 1.0, cfg));
  CHECK(stop_check(1.0e-10 + 0.5e-12, 1.0, cfg));
}

TEST_CASE("degenerate A = 0 returns Q exactly for case 1", "[solvers]") {
  Rng rng(2);
  const SpdMatrix q = testsup::random_spd(rng, 5, 0.5, 2.5);
  const SolveReport rep = solve_case1(Matrix(5, 5), q);
  REQUIRE(rep.converged);
  CHECK(rep.iterations <= 2);
  CHECK(rep.E <= 1e-13);
  CHECK(fro_norm(rep.X.mat() - q.mat()) <= 1e-12 * fro_norm(q.mat()));
}

TEST_CASE("degenerate A = 0 returns Q exactly for case 2", "[solvers]") {
  Rng rng(3);
  const SpdMatrix q = testsup::random_spd(rng, 4, 0.5, 2.0);
  const SolveReport rep = solve_case2(Matrix(4, 4), q);
  REQUIRE(rep.converged);
  CHECK(rep.E <= 1e-12);
  CHECK(fro_norm(rep.X.mat() - q.mat()) <= 1e-12 * fro_norm(q.mat()));
}

TEST_CASE("degenerate A = 0 returns Q^{1/s} for case 3", "[solvers]") {
  Rng rng(4);
  const SpdMatrix q = testsup::random_spd(rng, 4, 0.5, 2.0);
  const SolveReport rep = solve_case3(Matrix(4, 4), Matrix(4, 4), q, 3.0, 0.5, 0.5);
  REQUIRE(rep.converged);
  CHECK(rep.E <= 1e-13);
  const SpdMatrix ref = spd_power(q, 1.0 / 3.0);
  CHECK(fro_norm(rep.X.mat() - ref.mat()) <= 1e-12 * fro_norm(ref.mat()));
}

TEST_CASE("scalar case 1 converges to the larger quadratic root", "[solvers][oracle]") {
  // x + a^2/x = q has roots of x^2 - qx + a^2 = 0: {0.2, 1.8} for a=0.6, q=2.
  const double root_small = testsup::bisect([](double x) { return x * x - 2.0 * x + 0.36; },
                                            0.05, 0.5);
  const double root_large = testsup::bisect([](double x) { return x * x - 2.0 * x + 0.36; },
                                            1.5, 1.95);
  CHECK(root_small == Approx(0.2).margin(1e-10));
  CHECK(root_large == Approx(1.8).margin(1e-10));

  Matrix a(1, 1);
  a(0, 0) = 0.6;
  SolverConfig cfg;
  cfg.init = CustomInit{scalar_spd(1.0), scalar_spd(1.0)};
  const SolveReport rep = solve_case1(a, scalar_spd(2.0), cfg);
  REQUIRE(rep.converged);
  const double x = rep.X(0, 0);
  CHECK(std::abs(x + 0.36 / x - 2.0) <= 1e-10);
  // From X0 = Y0 = 1 the iteration selects the larger root.
  CHECK(x == Approx(1.8).margin(1e-9));
}

TEST_CASE("scalar case 2 root exists but is repelling for the coupled iteration",
          "[solvers][oracle]") {
  // x - a^2/x^2 = q with a=4.5, q=1: the cubic x^3 - x^2 - 20.25 has its
  // positive root in (3.0, 3.2).
  const double root = testsup::bisect(
      [](double x) { return x * x * x - x * x - 20.25; }, 3.0, 3.2);
  CHECK(root > 3.0);
  CHECK(root < 3.2);
  CHECK(std::abs(root - 3.1030456465425074) < 1e-10);

  // The linearization of the coupled iteration at that root has spectral
  // radius 2(1 - 1/root) > 1, so the root repels the iteration; the solver
  // must report non-convergence rather than a wrong answer.
  CHECK(2.0 * (1.0 - 1.0 / root) > 1.0);
  Matrix a(1, 1);
  a(0, 0) = 4.5;
  SolverConfig cfg;
  cfg.max_iter = 200;
  bool converged_to_root = false;
  try {
    const SolveReport rep = solve_case2(a, scalar_spd(1.0), cfg);
    converged_to_root = rep.converged && std::abs(rep.X(0, 0) - root) < 1e-6;
  } catch (const NotPositiveDefinite&) {
    // Leaving the cone is the other legitimate way the instability shows up.
  }
  CHECK_FALSE(converged_to_root);
}

TEST_CASE("scalar case 2 in the contractive regime", "[solvers][oracle]") {
  // a = 0.4, q = 1: x^3 - x^2 - 0.16 = 0 has its positive root near 1.13,
  // and 2(1 - 1/x*) < 1 there, so the coupled iteration converges.
  const double root = testsup::bisect(
      [](double x) { return x * x * x - x * x - 0.16; }, 1.0, 1.3);
  Matrix a(1, 1);
  a(0, 0) = 0.4;
  const SolveReport rep = solve_case2(a, scalar_spd(1.0));
  REQUIRE(rep.converged);
  CHECK(rep.X(0, 0) == Approx(root).margin(1e-9));
}

TEST_CASE("scalar case 3 probe solves the cubic", "[solvers][oracle]") {
  // x^2 + (a1^2 + a2^2)/x = q with a1 = a2 = 0.3, q = 2: multiply by x to
  // get x^3 - 2x + 0.18 = 0; the iteration lands on the root in (1, 1.4).
  const double root = testsup::bisect([](double x) { return x * x * x - 2.0 * x + 0.18; },
                                      1.0, 1.4);
  Matrix a(1, 1);
  a(0, 0) = 0.3;
  const SolveReport rep = solve_case3(a, a, scalar_spd(2.0), 2.0, 1.0, 1.0);
  REQUIRE(rep.converged);
  CHECK(rep.X(0, 0) == Approx(root).margin(1e-9));
}

TEST_CASE("single-term fixture example 1 hits the reported error scale", "[solvers][fixture]") {
  const auto all = fixtures();
  const auto& p = fixture(all, "case1-ex1");
  const auto& spec = std::get<Case1Spec>(p.spec);
  SolverConfig cfg;
  cfg.validate_iterates = true;
  const SolveReport rep = solve_case1(spec.A, spec.Q, cfg);
  REQUIRE(rep.converged);
  CHECK(rep.E <= 1e-9);
  CHECK(rep.iterations <= 15);
  CHECK(rep.true_residual <= 1e-8);
  CHECK(lambda_min(rep.X.sym()) > 0);
}

TEST_CASE("inverse-square fixture example 3 converges", "[solvers][fixture]") {
  const auto all = fixtures();
  const auto& p = fixture(all, "case2-ex3");
  const auto& spec = std::get<Case2Spec>(p.spec);
  const SolveReport rep = solve_case2(spec.A, spec.Q);
  REQUIRE(rep.converged);
  CHECK(rep.E <= 1e-9);
  CHECK(rep.true_residual <= 1e-8);
  // Solutions of X - A'X^{-2}A = I sit above the identity on the diagonal.
  for (Index i = 0; i < 4; ++i) CHECK(rep.X(i, i) >= 1.0);
}

TEST_CASE("two-term fixture example 1 converges with SPD iterates", "[solvers][fixture]") {
  const auto all = fixtures();
  const auto& p = fixture(all, "case3-ex1");
  const auto& spec = std::get<Case3Spec>(p.spec);
  SolverConfig cfg;
  cfg.validate_iterates = true;
  const SolveReport rep = solve_case3(spec.A1, spec.A2, spec.Q, spec.s, spec.t1, spec.t2, cfg);
  REQUIRE(rep.converged);
  CHECK(rep.E <= 1e-7);
  CHECK(rep.true_residual <= 1e-6);
  CHECK(lambda_min(rep.X.sym()) > 0);
}

TEST_CASE("two-term fixture example 2 is recorded but infeasible", "[solvers][fixture]") {
  // The diagonal instance asks for x^2 + c/sqrt(x) = q with
  // min_x (x^2 + c/sqrt(x)) well above q, so no SPD solution exists; the
  // solver must not claim convergence to one.
  const auto all = fixtures();
  const auto& p = fixture(all, "case3-ex2");
  const auto& spec = std::get<Case3Spec>(p.spec);
  const double c = spec.A1(0, 0) * spec.A1(0, 0) + spec.A2(0, 0) * spec.A2(0, 0);
  const double xmin = std::pow(c / 4.0, 0.4);
  CHECK(xmin * xmin + c / std::sqrt(xmin) > spec.Q(0, 0));

  SolverConfig cfg;
  cfg.max_iter = 120;
  bool claimed_solution = false;
  try {
    const SolveReport rep =
        solve_case3(spec.A1, spec.A2, spec.Q, spec.s, spec.t1, spec.t2, cfg);
    claimed_solution = rep.converged && rep.true_residual <= 1e-6;
  } catch (const Error&) {
  }
  CHECK_FALSE(claimed_solution);
}

TEST_CASE("general solver reduces to case 1 at m=1, t=1, s=1", "[solvers]") {
  Matrix a(1, 1);
  a(0, 0) = 0.6;
  SolverConfig cfg;
  cfg.init = CustomInit{scalar_spd(1.0), scalar_spd(1.0)};
  const SolveReport r1 = solve_case1(a, scalar_spd(2.0), cfg);
  const SolveReport rg = solve_general({a}, {1.0}, 1.0, scalar_spd(2.0), cfg);
  REQUIRE(r1.converged);
  REQUIRE(rg.converged);
  CHECK(std::abs(r1.X(0, 0) - rg.X(0, 0)) <= 1e-10);
}

TEST_CASE("general solver with all-zero coefficients returns Q^{1/s}", "[solvers]") {
  Rng rng(9);
  const SpdMatrix q = testsup::random_spd(rng, 3, 0.6, 2.0);
  const std::vector<Matrix> as(3, Matrix(3, 3));
  const SolveReport rep = solve_general(as, {0.5, 0.7, 1.0}, 2.0, q);
  REQUIRE(rep.converged);
  const SpdMatrix ref = spd_power(q, 0.5);
  CHECK(fro_norm(rep.X.mat() - ref.mat()) <= 1e-12 * fro_norm(ref.mat()));
}

TEST_CASE("case 3 and the general solver are behaviorally identical", "[solvers]") {
  const auto all = fixtures();
  const auto& p = fixture(all, "case3-ex1");
  const auto& spec = std::get<Case3Spec>(p.spec);
  const SolveReport r3 = solve_case3(spec.A1, spec.A2, spec.Q, spec.s, spec.t1, spec.t2);
  const SolveReport rg =
      solve_general({spec.A1, spec.A2}, {spec.t1, spec.t2}, spec.s, spec.Q);
  REQUIRE(r3.converged);
  REQUIRE(rg.converged);
  REQUIRE(r3.iterations == rg.iterations);
  CHECK(r3.residual_history == rg.residual_history);  // bitwise
  for (Index i = 0; i < r3.X.n(); ++i)
    for (Index j = 0; j < r3.X.n(); ++j) CHECK(r3.X(i, j) == rg.X(i, j));
}

TEST_CASE("identical inputs give bit-identical residual histories", "[solvers][property]") {
  const auto all = fixtures();
  const auto& p = fixture(all, "case1-ex1");
  const auto& spec = std::get<Case1Spec>(p.spec);
  const SolveReport a = solve_case1(spec.A, spec.Q);
  const SolveReport b = solve_case1(spec.A, spec.Q);
  REQUIRE(a.residual_history.size() == b.residual_history.size());
  CHECK(a.residual_history == b.residual_history);
}

TEST_CASE("stopping residual is reproducible from the final iterates", "[solvers][property]") {
  const auto all = fixtures();
  {
    const auto& spec = std::get<Case1Spec>(fixture(all, "case1-ex1").spec);
    const SolveReport rep = solve_case1(spec.A, spec.Q);
    const double e = fro_norm(rep.U.mat() + spec.A.transpose() * (rep.Y.mat() * spec.A) -
                              spec.Q.mat());
    CHECK(std::abs(e - rep.E) <= 1e-14);
  }
  {
    const auto& spec = std::get<Case2Spec>(fixture(all, "case2-ex3").spec);
    const SolveReport rep = solve_case2(spec.A, spec.Q);
    const double e = fro_norm(rep.X.mat() -
                              spec.A.transpose() * (rep.Y.mat() * rep.Y.mat() * spec.A) -
                              spec.Q.mat());
    CHECK(std::abs(e - rep.E) <= 1e-14);
  }
  {
    const auto& spec = std::get<Case3Spec>(fixture(all, "case3-ex1").spec);
    const SolveReport rep = solve_case3(spec.A1, spec.A2, spec.Q, spec.s, spec.t1, spec.t2);
    const SpdMatrix y{rep.Y};
    const double e = fro_norm(rep.U.mat() +
                              spec.A1.transpose() * (spd_power(y, spec.t1).mat() * spec.A1) +
                              spec.A2.transpose() * (spd_power(y, spec.t2).mat() * spec.A2) -
                              spec.Q.mat());
    CHECK(std::abs(e - rep.E) <= 1e-14);
  }
}

TEST_CASE("coupled fixed point soundness links E to the true residual", "[solvers][property]") {
  const auto all = fixtures();
  for (const auto* id : {"case1-ex1", "case1-ex4"}) {
    const auto& spec = std::get<Case1Spec>(fixture(all, id).spec);
    const SolveReport rep = solve_case1(spec.A, spec.Q);
    REQUIRE(rep.converged);
    const double xy_gap =
        fro_norm(rep.X.mat() * rep.Y.mat() - Matrix::identity(rep.X.n()));
    if (xy_gap <= 1e-6) CHECK(rep.true_residual <= std::max(1e-8, 10.0 * rep.E));
  }
}

TEST_CASE("true_residual pinned cases", "[solvers]") {
  Rng rng(12);
  const SpdMatrix q = testsup::random_spd(rng, 4, 0.5, 2.0);
  CHECK(true_residual(EquationSpec{Case1Spec{Matrix(4, 4), q}}, q) <= 1e-12);

  const SpdMatrix x3 = spd_power(q, 1.0 / 3.0);
  CHECK(true_residual(EquationSpec{Case3Spec{Matrix(4, 4), Matrix(4, 4), q, 3.0, 0.5, 0.5}},
                      x3) <= 1e-12);
}

TEST_CASE("solver input validation", "[solvers]") {
  const SpdMatrix q = SpdMatrix::identity(3);
  CHECK_THROWS_AS(solve_case1(Matrix(2, 2), q), DimensionMismatch);
  CHECK_THROWS_AS(solve_case3(Matrix(3, 3), Matrix(3, 3), q, -1.0, 0.5, 0.5), Error);
  CHECK_THROWS_AS(solve_case3(Matrix(3, 3), Matrix(3, 3), q, 2.0, 1.5, 0.5), Error);
  CHECK_THROWS_AS(solve_general({}, {}, 1.0, q), Error);
  SolverConfig bad;
  bad.delta = 0.0;
  bad.eps = 0.0;
  CHECK_THROWS_AS(solve_case1(Matrix(3, 3), q, bad), Error);
}
