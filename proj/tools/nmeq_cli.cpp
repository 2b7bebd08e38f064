// Command line front end: solve nonlinear matrix equations from matrix
// files, generate seeded test suites, run existence checks, benchmark
// solver grids and compute performance profiles.
//
// Exit codes: 0 success/converged, 1 existence condition does not hold,
// 2 iteration cap reached, 3 invalid input or parse failure, 4 numerical
// breakdown.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nmeq/nmeq.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConditionFails = 1;
constexpr int kExitMaxIter = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitBreakdown = 4;

struct SolveArgs {
  std::string case_name;
  bool s_given = false;
  std::string a_path;
  std::string a2_path;
  std::vector<std::string> ai_paths;
  std::string q_path;
  double s = 1.0;
  double t1 = 1.0;
  double t2 = 1.0;
  std::vector<double> t_list;
  double delta = 1e-10;
  double eps = 1e-12;
  int max_iter = 500;
  std::string solver = "nonlinear";
  std::string out;
  bool print_x = false;
};

nmeq::SpdMatrix load_spd(const std::string& path) {
  const nmeq::Matrix m = nmeq::read_matrix(path);
  return nmeq::SpdMatrix(nmeq::SymMatrix::from_general(m));
}

json report_json(const nmeq::SolveReport& rep, const std::string& case_name, nmeq::Index n,
                 const std::string& solver, const std::string& x_path, bool print_x) {
  json j;
  j["case"] = case_name;
  j["n"] = n;
  j["solver"] = solver;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["E"] = rep.E;
  j["true_residual"] = rep.true_residual;
  j["time_s"] = rep.wall_time_s;
  if (!x_path.empty()) j["x_path"] = x_path;
  if (print_x) {
    json rows = json::array();
    for (nmeq::Index i = 0; i < rep.X.n(); ++i) {
      json row = json::array();
      for (nmeq::Index jc = 0; jc < rep.X.n(); ++jc) row.push_back(rep.X(i, jc));
      rows.push_back(std::move(row));
    }
    j["X"] = std::move(rows);
  }
  return j;
}

int run_solve(const SolveArgs& a) {
  nmeq::SolverConfig cfg;
  cfg.delta = a.delta;
  cfg.eps = a.eps;
  cfg.max_iter = a.max_iter;

  const bool baseline = (a.solver == "fixed-point");
  if (!baseline && a.solver != "nonlinear") {
    std::cerr << "solve: unknown solver '" << a.solver << "'\n";
    return kExitBadInput;
  }

  nmeq::SolveReport rep;
  nmeq::Index n = 0;
  const nmeq::SpdMatrix q = load_spd(a.q_path);
  n = q.n();

  if (a.case_name == "1" || a.case_name == "2") {
    if (a.a_path.empty()) {
      std::cerr << "solve: --A is required for case " << a.case_name << "\n";
      return kExitBadInput;
    }
    const nmeq::Matrix A = nmeq::read_matrix(a.a_path);
    if (a.case_name == "1") {
      rep = baseline ? nmeq::fixed_point_case1(A, q, cfg) : nmeq::solve_case1(A, q, cfg);
    } else {
      rep = baseline ? nmeq::fixed_point_case2(A, q, cfg) : nmeq::solve_case2(A, q, cfg);
    }
  } else if (a.case_name == "3") {
    if (a.a_path.empty() || a.a2_path.empty()) {
      std::cerr << "solve: case 3 requires --A and --A2\n";
      return kExitBadInput;
    }
    if (!a.s_given) {
      std::cerr << "solve: case 3 requires --s\n";
      return kExitBadInput;
    }
    const nmeq::Matrix A1 = nmeq::read_matrix(a.a_path);
    const nmeq::Matrix A2 = nmeq::read_matrix(a.a2_path);
    rep = baseline ? nmeq::fixed_point_case3(A1, A2, q, a.s, a.t1, a.t2, cfg)
                   : nmeq::solve_case3(A1, A2, q, a.s, a.t1, a.t2, cfg);
  } else if (a.case_name == "general") {
    if (a.ai_paths.empty() || a.ai_paths.size() != a.t_list.size()) {
      std::cerr << "solve: case general requires matching repeated --Ai and --t\n";
      return kExitBadInput;
    }
    if (!a.s_given) {
      std::cerr << "solve: case general requires --s\n";
      return kExitBadInput;
    }
    if (baseline) {
      std::cerr << "solve: no fixed-point baseline for the general equation\n";
      return kExitBadInput;
    }
    std::vector<nmeq::Matrix> As;
    for (const auto& p : a.ai_paths) As.push_back(nmeq::read_matrix(p));
    rep = nmeq::solve_general(As, a.t_list, a.s, q, cfg);
  } else {
    std::cerr << "solve: unknown case '" << a.case_name << "'\n";
    return kExitBadInput;
  }

  std::string x_path;
  if (!a.out.empty()) {
    nmeq::write_matrix(rep.X.mat(), a.out);
    x_path = a.out;
  }
  std::cout << report_json(rep, a.case_name, n, a.solver, x_path, a.print_x).dump(2) << "\n";
  return rep.converged ? kExitOk : kExitMaxIter;
}

struct GenerateArgs {
  int case_tag = 0;
  nmeq::Index n = 0;
  std::uint64_t seed = 0;
  double alpha = 3.0;
  double s = 2.0;
  double t1 = 0.5;
  double t2 = 0.5;
  std::string out_dir;
};

int run_generate(const GenerateArgs& g) {
  nmeq::GeneratedProblem p;
  switch (g.case_tag) {
    case 1:
      p = nmeq::gen_case1(g.n, g.seed);
      break;
    case 2:
      p = nmeq::gen_case2(g.n, g.alpha, g.seed);
      break;
    case 3:
      p = nmeq::gen_case3(g.n, g.s, g.t1, g.t2, g.seed);
      break;
    default:
      std::cerr << "generate: --case must be 1, 2 or 3\n";
      return kExitBadInput;
  }

  fs::create_directories(g.out_dir);
  json manifest;
  manifest["id"] = p.id;
  manifest["case"] = p.case_tag;
  manifest["n"] = g.n;
  manifest["seed"] = p.seed;

  auto emit = [&](const nmeq::Matrix& m, const std::string& name) {
    const std::string path = (fs::path(g.out_dir) / name).string();
    nmeq::write_matrix(m, path);
    return name;
  };

  if (const auto* c1 = std::get_if<nmeq::Case1Spec>(&p.spec)) {
    manifest["A"] = emit(c1->A, "A.mat");
    manifest["Q"] = emit(c1->Q.mat(), "Q.mat");
  } else if (const auto* c2 = std::get_if<nmeq::Case2Spec>(&p.spec)) {
    manifest["A"] = emit(c2->A, "A.mat");
    manifest["Q"] = emit(c2->Q.mat(), "Q.mat");
    manifest["alpha"] = g.alpha;
    if (p.certificate) manifest["certified_alpha"] = p.certificate->alpha;
  } else if (const auto* c3 = std::get_if<nmeq::Case3Spec>(&p.spec)) {
    manifest["A1"] = emit(c3->A1, "A1.mat");
    manifest["A2"] = emit(c3->A2, "A2.mat");
    manifest["Q"] = emit(c3->Q.mat(), "Q.mat");
    manifest["s"] = c3->s;
    manifest["t1"] = c3->t1;
    manifest["t2"] = c3->t2;
  }
  if (p.witness) {
    manifest["L"] = emit(p.witness->L, "L.mat");
    for (size_t i = 0; i < p.witness->N_list.size(); ++i)
      manifest["N" + std::to_string(i + 1)] =
          emit(p.witness->N_list[i], "N" + std::to_string(i + 1) + ".mat");
  }

  std::ofstream mf(fs::path(g.out_dir) / "manifest.json");
  if (!mf) {
    std::cerr << "generate: cannot write manifest\n";
    return kExitBadInput;
  }
  mf << manifest.dump(2) << "\n";
  std::cout << manifest.dump(2) << "\n";
  return kExitOk;
}

struct CheckArgs {
  std::string case_name;
  std::string a_path;
  std::string l_path;
  std::vector<std::string> n_paths;
  std::string q_path;
  std::optional<double> alpha;
  double s = 2.0;
  double t1 = 0.5;
  double t2 = 0.5;
};

int run_check(const CheckArgs& c) {
  json out;
  bool holds = false;
  if (c.case_name == "2") {
    if (c.a_path.empty()) {
      std::cerr << "check: case 2 requires --A\n";
      return kExitBadInput;
    }
    const nmeq::Matrix A = nmeq::read_matrix(c.a_path);
    if (c.alpha) {
      auto [ok, cert] = nmeq::check_alpha_conditions(A, *c.alpha);
      holds = ok;
      out["condition"] = "fixed-alpha";
      out["alpha"] = cert.alpha;
      out["margins"] = {{"m1", cert.margin1}, {"m2", cert.margin2}, {"m3", cert.margin3}};
      out["sigma_min"] = cert.sigma_min;
      out["sigma_max"] = cert.sigma_max;
    } else {
      const auto cert = nmeq::find_alpha_window(A);
      holds = cert.has_value();
      out["condition"] = "alpha-window";
      if (cert) {
        out["alpha"] = cert->alpha;
        out["margins"] = {
            {"m1", cert->margin1}, {"m2", cert->margin2}, {"m3", cert->margin3}};
        out["sigma_min"] = cert->sigma_min;
        out["sigma_max"] = cert->sigma_max;
      } else {
        const auto sv = nmeq::singular_values(A);
        out["sigma_min"] = sv.front();
        out["sigma_max"] = sv.back();
      }
    }
  } else if (c.case_name == "1" || c.case_name == "3") {
    const size_t need = (c.case_name == "1") ? 1 : 2;
    if (c.l_path.empty() || c.n_paths.size() != need || c.q_path.empty()) {
      std::cerr << "check: case " << c.case_name << " requires --L, " << need
                << " --N file(s) and --Q\n";
      return kExitBadInput;
    }
    nmeq::FactorWitness w{nmeq::read_matrix(c.l_path), {}, load_spd(c.q_path)};
    for (const auto& p : c.n_paths) w.N_list.push_back(nmeq::read_matrix(p));
    holds = (c.case_name == "1") ? nmeq::check_diagonal_condition(w)
                                 : nmeq::check_orthogonal_columns(w, c.s, c.t1, c.t2);
    out["condition"] = (c.case_name == "1") ? "diagonal-sum" : "orthogonal-columns";
  } else {
    std::cerr << "check: unknown case '" << c.case_name << "'\n";
    return kExitBadInput;
  }
  out["holds"] = holds;
  std::cout << out.dump(2) << "\n";
  return holds ? kExitOk : kExitConditionFails;
}

struct BenchArgs {
  std::string suite_path;
  std::string out_path;
  std::vector<std::string> solvers;
  double delta = 1e-10;
  double eps = 1e-12;
  int max_iter = 500;
};

std::vector<nmeq::GeneratedProblem> load_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nmeq::IoError("bench: cannot open suite " + path);
  json suite;
  try {
    in >> suite;
  } catch (const json::exception& e) {
    throw nmeq::ParseError(std::string("bench: suite parse failure: ") + e.what());
  }
  if (!suite.contains("problems") || !suite["problems"].is_array())
    throw nmeq::ParseError("bench: suite must contain a 'problems' array");

  const fs::path base = fs::path(path).parent_path();
  std::vector<nmeq::GeneratedProblem> problems;
  for (const auto& item : suite["problems"]) {
    if (item.contains("generate")) {
      const auto& g = item["generate"];
      const int tag = g.at("case").get<int>();
      const nmeq::Index n = g.at("n").get<nmeq::Index>();
      const std::uint64_t seed = g.at("seed").get<std::uint64_t>();
      if (tag == 1) {
        problems.push_back(nmeq::gen_case1(n, seed));
      } else if (tag == 2) {
        problems.push_back(nmeq::gen_case2(n, g.value("alpha", 3.0), seed));
      } else if (tag == 3) {
        problems.push_back(
            nmeq::gen_case3(n, g.value("s", 2.0), g.value("t1", 0.5), g.value("t2", 0.5), seed));
      } else {
        throw nmeq::ParseError("bench: generate.case must be 1, 2 or 3");
      }
      if (item.contains("id")) problems.back().id = item["id"].get<std::string>();
    } else if (item.contains("files")) {
      const auto& f = item["files"];
      auto file = [&](const std::string& key) {
        return (base / f.at(key).get<std::string>()).string();
      };
      const int tag = f.at("case").get<int>();
      nmeq::GeneratedProblem p;
      p.case_tag = tag;
      p.id = item.value("id", std::string("file-problem"));
      const nmeq::SpdMatrix q = load_spd(file("Q"));
      if (tag == 1) {
        p.spec = nmeq::Case1Spec{nmeq::read_matrix(file("A")), q};
      } else if (tag == 2) {
        p.spec = nmeq::Case2Spec{nmeq::read_matrix(file("A")), q};
      } else if (tag == 3) {
        p.spec = nmeq::Case3Spec{nmeq::read_matrix(file("A1")), nmeq::read_matrix(file("A2")), q,
                                 f.value("s", 2.0), f.value("t1", 0.5), f.value("t2", 0.5)};
      } else {
        throw nmeq::ParseError("bench: files.case must be 1, 2 or 3");
      }
      problems.push_back(std::move(p));
    } else {
      throw nmeq::ParseError("bench: each problem needs 'generate' or 'files'");
    }
  }
  return problems;
}

int run_bench(const BenchArgs& b) {
  const auto problems = load_suite(b.suite_path);
  nmeq::SolverConfig cfg;
  cfg.delta = b.delta;
  cfg.eps = b.eps;
  cfg.max_iter = b.max_iter;
  std::vector<std::string> solvers = b.solvers;
  if (solvers.empty()) solvers = {"nonlinear", "fixed-point"};
  const auto records = nmeq::run_suite(problems, solvers, cfg);
  nmeq::write_records_csv(records, b.out_path);
  std::cout << "{\"records\": " << records.size() << ", \"out\": \"" << b.out_path << "\"}\n";
  return kExitOk;
}

struct ProfileArgs {
  std::string records_path;
  std::string out_path;
  std::string metric = "time";
};

int run_profile(const ProfileArgs& p) {
  const auto records = nmeq::read_records_csv(p.records_path);
  const auto metric = (p.metric == "error") ? nmeq::ProfileMetric::error : nmeq::ProfileMetric::time;
  if (p.metric != "time" && p.metric != "error") {
    std::cerr << "profile: --metric must be time or error\n";
    return kExitBadInput;
  }
  const auto curves = nmeq::dolan_more(records, metric);
  nmeq::write_profiles_csv(curves, p.out_path);
  std::cout << "{\"solvers\": " << curves.size() << ", \"out\": \"" << p.out_path << "\"}\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPD solutions of nonlinear matrix equations"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve one equation from matrix files");
  solve->add_option("--case", sa.case_name, "1, 2, 3 or general")->required();
  solve->add_option("--A", sa.a_path, "coefficient matrix file");
  solve->add_option("--A2", sa.a2_path, "second coefficient matrix file (case 3)");
  solve->add_option("--Ai", sa.ai_paths, "repeated coefficient files (general)");
  solve->add_option("--Q", sa.q_path, "right-hand side matrix file")->required();
  auto* s_opt = solve->add_option("--s", sa.s, "outer exponent (case 3/general)");
  solve->add_option("--t1", sa.t1, "first inverse exponent (case 3)");
  solve->add_option("--t2", sa.t2, "second inverse exponent (case 3)");
  solve->add_option("--t", sa.t_list, "repeated inverse exponents (general)");
  solve->add_option("--delta", sa.delta, "absolute stop tolerance");
  solve->add_option("--eps", sa.eps, "relative stop tolerance");
  solve->add_option("--max-iter", sa.max_iter, "iteration cap");
  solve->add_option("--solver", sa.solver, "nonlinear or fixed-point");
  solve->add_option("--out", sa.out, "write the solution matrix here");
  solve->add_flag("--print-x", sa.print_x, "include X in the JSON report");

  GenerateArgs ga;
  auto* generate = app.add_subcommand("generate", "Generate a seeded random test problem");
  generate->add_option("--case", ga.case_tag, "1, 2 or 3")->required();
  generate->add_option("--n", ga.n, "dimension")->required();
  generate->add_option("--seed", ga.seed, "64-bit seed")->required();
  generate->add_option("--alpha", ga.alpha, "singular value window parameter (case 2)");
  generate->add_option("--s", ga.s, "outer exponent (case 3)");
  generate->add_option("--t1", ga.t1, "first inverse exponent (case 3)");
  generate->add_option("--t2", ga.t2, "second inverse exponent (case 3)");
  generate->add_option("--out-dir", ga.out_dir, "output directory")->required();

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Run the existence condition checkers");
  check->add_option("--case", ca.case_name, "1, 2 or 3")->required();
  check->add_option("--A", ca.a_path, "coefficient matrix file (case 2)");
  check->add_option("--L", ca.l_path, "witness factor L (cases 1 and 3)");
  check->add_option("--N", ca.n_paths, "witness factors N (one for case 1, two for case 3)");
  check->add_option("--Q", ca.q_path, "right-hand side matrix file (cases 1 and 3)");
  double alpha_in = 0.0;
  auto* alpha_opt = check->add_option("--alpha", alpha_in, "check at a fixed alpha (case 2)");
  check->add_option("--s", ca.s, "outer exponent (case 3)");
  check->add_option("--t1", ca.t1, "first inverse exponent (case 3)");
  check->add_option("--t2", ca.t2, "second inverse exponent (case 3)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run a solver-by-problem grid and emit records CSV");
  bench->add_option("--suite", ba.suite_path, "suite JSON")->required();
  bench->add_option("--out", ba.out_path, "records CSV path")->required();
  bench->add_option("--solver", ba.solvers, "repeatable solver ids (default both families)");
  bench->add_option("--delta", ba.delta, "absolute stop tolerance");
  bench->add_option("--eps", ba.eps, "relative stop tolerance");
  bench->add_option("--max-iter", ba.max_iter, "iteration cap");

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "Compute performance profiles from records CSV");
  profile->add_option("--records", pa.records_path, "records CSV")->required();
  profile->add_option("--out", pa.out_path, "profiles CSV path")->required();
  profile->add_option("--metric", pa.metric, "time or error");

  try {
    app.parse(argc, argv);
    sa.s_given = s_opt->count() > 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (solve->parsed()) return run_solve(sa);
    if (generate->parsed()) return run_generate(ga);
    if (check->parsed()) {
      if (alpha_opt->count() > 0) ca.alpha = alpha_in;
      return run_check(ca);
    }
    if (bench->parsed()) return run_bench(ba);
    if (profile->parsed()) return run_profile(pa);
  } catch (const nmeq::NotPositiveDefinite& e) {
    std::cerr << "breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const nmeq::SingularTarget& e) {
    std::cerr << "breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const nmeq::RankDeficient& e) {
    std::cerr << "breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const nmeq::NoConvergence& e) {
    std::cerr << "breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const nmeq::InvalidAlpha& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const nmeq::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const nmeq::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const nmeq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
