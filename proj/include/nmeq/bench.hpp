#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nmeq/baselines.hpp"
#include "nmeq/equation.hpp"
#include "nmeq/probgen.hpp"
#include "nmeq/solvers.hpp"

namespace nmeq {

/// One (solver, problem) measurement. E is absent after a hard numerical
/// breakdown.
struct PerfRecord {
  std::string solver_id;
  std::string problem_id;
  int case_tag = 0;
  Index n = 0;
  double time_s = 0.0;
  std::optional<double> E;
  int iterations = 0;
  bool converged = false;
};

enum class ProfileMetric { time, error };

inline const char* metric_name(ProfileMetric m) {
  return m == ProfileMetric::time ? "time" : "error";
}

/// Step curve rho_s(tau) of a Dolan-More performance profile.
struct ProfileCurve {
  std::string solver_id;
  ProfileMetric metric = ProfileMetric::time;
  std::vector<std::pair<double, double>> points;  // (tau, rho), tau ascending
};

namespace detail {

inline bool solver_matches_case(const std::string& id, int tag) {
  return id == "nonlinear" + std::to_string(tag) || id == "fp" + std::to_string(tag);
}

inline std::string resolve_solver_id(const std::string& id, int tag) {
  if (id == "nonlinear" || id == "fixed-point")
    return (id == "nonlinear" ? "nonlinear" : "fp") + std::to_string(tag);
  if (solver_matches_case(id, tag)) return id;
  throw UnknownSolverId("run_suite: solver '" + id + "' does not apply to case " +
                        std::to_string(tag));
}

inline SolveReport dispatch_solver(const std::string& resolved, const EquationSpec& spec,
                                   const SolverConfig& cfg) {
  const bool baseline = resolved.rfind("fp", 0) == 0;
  struct V {
    bool baseline;
    const SolverConfig& cfg;
    SolveReport operator()(const Case1Spec& c) const {
      return baseline ? fixed_point_case1(c.A, c.Q, cfg) : solve_case1(c.A, c.Q, cfg);
    }
    SolveReport operator()(const Case2Spec& c) const {
      return baseline ? fixed_point_case2(c.A, c.Q, cfg) : solve_case2(c.A, c.Q, cfg);
    }
    SolveReport operator()(const Case3Spec& c) const {
      return baseline ? fixed_point_case3(c.A1, c.A2, c.Q, c.s, c.t1, c.t2, cfg)
                      : solve_case3(c.A1, c.A2, c.Q, c.s, c.t1, c.t2, cfg);
    }
    SolveReport operator()(const GeneralSpec& c) const {
      if (baseline) throw UnknownSolverId("run_suite: no baseline for the general equation");
      return solve_general(c.A_list, c.t_list, c.s, c.Q, cfg);
    }
  };
  return std::visit(V{baseline, cfg}, spec);
}

}  // namespace detail

/// Runs every (problem, solver) pair and collects one record each. Solver
/// ids are either generic ("nonlinear", "fixed-point") or case-specific
/// ("nonlinear1", "fp3", ...); a specific id must match the problem's case.
/// Hard breakdowns are recorded as converged = false with E absent. Records
/// come back sorted by (problem_id, solver_id).
inline std::vector<PerfRecord> run_suite(const std::vector<GeneratedProblem>& problems,
                                         const std::vector<std::string>& solver_ids,
                                         const SolverConfig& cfg = {}) {
  if (problems.empty()) throw EmptyInput("run_suite: no problems");
  if (solver_ids.empty()) throw UnknownSolverId("run_suite: no solvers");

  std::vector<PerfRecord> records;
  records.reserve(problems.size() * solver_ids.size());
  for (const auto& p : problems) {
    const int tag = case_tag(p.spec) == 4 ? 3 : case_tag(p.spec);
    for (const auto& id : solver_ids) {
      const std::string resolved = detail::resolve_solver_id(id, tag);
      PerfRecord r;
      r.solver_id = resolved;
      r.problem_id = p.id;
      r.case_tag = tag;
      r.n = dimension(p.spec);
      try {
        const SolveReport rep = detail::dispatch_solver(resolved, p.spec, cfg);
        r.time_s = rep.wall_time_s;
        r.E = rep.E;
        r.iterations = rep.iterations;
        r.converged = rep.converged;
      } catch (const Error&) {
        r.time_s = 0.0;
        r.converged = false;
      }
      records.push_back(std::move(r));
    }
  }
  std::sort(records.begin(), records.end(), [](const PerfRecord& a, const PerfRecord& b) {
    return std::tie(a.problem_id, a.solver_id) < std::tie(b.problem_id, b.solver_id);
  });
  return records;
}

/// Standard ratio/CDF construction: r_{p,s} = m_{p,s} / min_s m_{p,s} with
/// the per-problem best taken over solved records, unsolved pairs mapped to
/// an infinite ratio, and rho_s(tau) = |{p : r_{p,s} <= tau}| / |P|. For the
/// time metric "solved" means converged; for the error metric any finite E
/// counts and zero errors are clamped to 1e-16.
inline std::vector<ProfileCurve> dolan_more(const std::vector<PerfRecord>& records,
                                            ProfileMetric metric) {
  if (records.empty()) throw EmptyInput("dolan_more: no records");

  const double inf = std::numeric_limits<double>::infinity();
  auto value_of = [&](const PerfRecord& r) -> double {
    if (metric == ProfileMetric::time)
      return r.converged ? std::max(r.time_s, 1e-16) : inf;
    if (!r.E.has_value() || !std::isfinite(*r.E)) return inf;
    return std::max(*r.E, 1e-16);
  };

  std::set<std::string> problem_set;
  std::set<std::string> solver_set;
  std::map<std::string, double> best;  // per problem
  for (const auto& r : records) {
    problem_set.insert(r.problem_id);
    solver_set.insert(r.solver_id);
    const double v = value_of(r);
    auto [it, fresh] = best.emplace(r.problem_id, v);
    if (!fresh) it->second = std::min(it->second, v);
  }
  const double num_problems = static_cast<double>(problem_set.size());

  std::map<std::string, std::vector<double>> ratios;
  for (const auto& s : solver_set) ratios[s] = {};
  for (const auto& r : records) {
    const double v = value_of(r);
    const double b = best.at(r.problem_id);
    if (std::isfinite(v) && std::isfinite(b) && b > 0)
      ratios[r.solver_id].push_back(v / b);
  }

  std::vector<ProfileCurve> curves;
  for (auto& [solver, rs] : ratios) {
    std::sort(rs.begin(), rs.end());
    ProfileCurve c;
    c.solver_id = solver;
    c.metric = metric;
    // Explicit tau = 1 anchor: rho(1) is the fraction of problems where this
    // solver attains the minimum (ties count for every tied solver).
    size_t at_one = 0;
    while (at_one < rs.size() && rs[at_one] <= 1.0) ++at_one;
    c.points.emplace_back(1.0, static_cast<double>(at_one) / num_problems);
    size_t i = at_one;
    while (i < rs.size()) {
      const double tau = rs[i];
      size_t j = i;
      while (j < rs.size() && rs[j] == tau) ++j;
      c.points.emplace_back(tau, static_cast<double>(j) / num_problems);
      i = j;
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

// ---------------------------------------------------------------------------
// CSV / JSON emission with exact round-trip at 17 significant digits.

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline void write_records_csv(const std::vector<PerfRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_records_csv: cannot open " + path);
  out << "solver,problem,case,n,time_s,E,iterations,converged\n";
  for (const auto& r : records) {
    out << r.solver_id << ',' << r.problem_id << ',' << r.case_tag << ',' << r.n << ','
        << detail::format_double(r.time_s) << ','
        << (r.E.has_value() ? detail::format_double(*r.E) : "") << ',' << r.iterations << ','
        << (r.converged ? "true" : "false") << '\n';
  }
  if (!out) throw IoError("write_records_csv: write failed for " + path);
}

inline std::vector<PerfRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_records_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("read_records_csv: empty file " + path);
  if (line != "solver,problem,case,n,time_s,E,iterations,converged")
    throw ParseError("read_records_csv: unexpected header in " + path);
  std::vector<PerfRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 8) throw ParseError("read_records_csv: bad row '" + line + "'");
    PerfRecord r;
    r.solver_id = f[0];
    r.problem_id = f[1];
    r.case_tag = std::stoi(f[2]);
    r.n = std::stol(f[3]);
    r.time_s = std::stod(f[4]);
    if (!f[5].empty()) r.E = std::stod(f[5]);
    r.iterations = std::stoi(f[6]);
    r.converged = (f[7] == "true");
    records.push_back(std::move(r));
  }
  return records;
}

inline void write_profiles_csv(const std::vector<ProfileCurve>& curves, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_profiles_csv: cannot open " + path);
  out << "solver,metric,tau,rho\n";
  std::vector<const ProfileCurve*> sorted;
  for (const auto& c : curves) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(),
            [](const ProfileCurve* a, const ProfileCurve* b) { return a->solver_id < b->solver_id; });
  for (const ProfileCurve* c : sorted)
    for (const auto& [tau, rho] : c->points)
      out << c->solver_id << ',' << metric_name(c->metric) << ',' << detail::format_double(tau)
          << ',' << detail::format_double(rho) << '\n';
  if (!out) throw IoError("write_profiles_csv: write failed for " + path);
}

inline std::vector<ProfileCurve> read_profiles_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_profiles_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "solver,metric,tau,rho")
    throw ParseError("read_profiles_csv: unexpected header in " + path);
  std::vector<ProfileCurve> curves;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 4) throw ParseError("read_profiles_csv: bad row '" + line + "'");
    const ProfileMetric metric = (f[1] == "time") ? ProfileMetric::time : ProfileMetric::error;
    if (curves.empty() || curves.back().solver_id != f[0] || curves.back().metric != metric) {
      curves.push_back(ProfileCurve{f[0], metric, {}});
    }
    curves.back().points.emplace_back(std::stod(f[2]), std::stod(f[3]));
  }
  return curves;
}

// JSON mirrors of the same record and profile fields.

inline void write_records_json(const std::vector<PerfRecord>& records, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j{{"solver", r.solver_id}, {"problem", r.problem_id}, {"case", r.case_tag},
                     {"n", r.n},              {"time_s", r.time_s},      {"iterations", r.iterations},
                     {"converged", r.converged}};
    if (r.E.has_value() && std::isfinite(*r.E)) j["E"] = *r.E;
    arr.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw IoError("write_records_json: cannot open " + path);
  out << arr.dump(2) << '\n';
  if (!out) throw IoError("write_records_json: write failed for " + path);
}

inline std::vector<PerfRecord> read_records_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_records_json: cannot open " + path);
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("read_records_json: ") + e.what());
  }
  std::vector<PerfRecord> records;
  for (const auto& j : arr) {
    PerfRecord r;
    r.solver_id = j.at("solver").get<std::string>();
    r.problem_id = j.at("problem").get<std::string>();
    r.case_tag = j.at("case").get<int>();
    r.n = j.at("n").get<Index>();
    r.time_s = j.at("time_s").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.converged = j.at("converged").get<bool>();
    if (j.contains("E")) r.E = j.at("E").get<double>();
    records.push_back(std::move(r));
  }
  return records;
}

inline void write_profiles_json(const std::vector<ProfileCurve>& curves, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : curves) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& [tau, rho] : c.points) points.push_back({{"tau", tau}, {"rho", rho}});
    arr.push_back({{"solver", c.solver_id}, {"metric", metric_name(c.metric)},
                   {"points", std::move(points)}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("write_profiles_json: cannot open " + path);
  out << arr.dump(2) << '\n';
  if (!out) throw IoError("write_profiles_json: write failed for " + path);
}

inline std::vector<ProfileCurve> read_profiles_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_profiles_json: cannot open " + path);
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("read_profiles_json: ") + e.what());
  }
  std::vector<ProfileCurve> curves;
  for (const auto& j : arr) {
    ProfileCurve c;
    c.solver_id = j.at("solver").get<std::string>();
    c.metric = j.at("metric").get<std::string>() == "time" ? ProfileMetric::time
                                                           : ProfileMetric::error;
    for (const auto& p : j.at("points"))
      c.points.emplace_back(p.at("tau").get<double>(), p.at("rho").get<double>());
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace nmeq
