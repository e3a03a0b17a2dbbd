// mersched: build, solve, validate, and compare restoration schedules.
//
// Exit codes: 0 success / schedule passes, 1 infeasible or validation
// failure, 2 bad input, 3 backend trouble.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mersched/assemble.hpp"
#include "mersched/count_audit.hpp"
#include "mersched/lp_format.hpp"
#include "mersched/schedule.hpp"
#include "mersched/solver.hpp"
#include "mersched/validate.hpp"

namespace fs = std::filesystem;
using namespace mersched;

namespace {

struct CommonArgs {
  std::string scenario;
  std::string case_id;
  std::string out_dir = ".";
  std::string backend;
  double gap = -1;
  double time_limit = -1;
  double phi_travel = -1;
  double phi_fuel = -1;
  int disk_segments = 0;
  bool strict_pickup = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool solving) {
  cmd->add_option("--scenario", a.scenario, "scenario JSON file")->required();
  cmd->add_option("--case", a.case_id, "study variant: case1..case5");
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_option("--disk-segments", a.disk_segments,
                  "polygon segment count for apparent-power disks");
  cmd->add_flag("--strict-pickup", a.strict_pickup,
                "forbid serving load at a node while a module is collected there");
  cmd->add_option("--phi-travel", a.phi_travel, "travel penalty weight");
  cmd->add_option("--phi-fuel", a.phi_fuel, "exchange penalty weight");
  if (solving) {
    cmd->add_option("--gap", a.gap, "relative MIP gap target");
    cmd->add_option("--time-limit", a.time_limit, "wall clock limit, seconds");
    cmd->add_option("--backend", a.backend,
                    "solver bridge script (default: MERSCHED_BACKEND or bundled)");
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("io", path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

Scenario load_scenario(const CommonArgs& a) {
  Scenario sc = parse_scenario_text(slurp(a.scenario));
  if (!a.case_id.empty()) sc.study.variant = case_from_string(a.case_id);
  if (a.gap >= 0) sc.study.gap = a.gap;
  if (a.time_limit >= 0) sc.study.time_limit_s = a.time_limit;
  if (a.phi_travel >= 0) sc.study.phi_travel = a.phi_travel;
  if (a.phi_fuel >= 0) sc.study.phi_fuel = a.phi_fuel;
  if (a.disk_segments > 0) sc.study.disk_segments = a.disk_segments;
  if (a.strict_pickup) sc.study.strict_pickup = true;
  return sc;
}

SolveOptions solve_options(const Scenario& sc, const CommonArgs& a) {
  SolveOptions so;
  so.gap = sc.study.gap;
  so.time_limit_s = sc.study.time_limit_s;
  if (!a.backend.empty()) so.backend = a.backend;
  return so;
}

// Solver wall time goes to a sidecar so the primary outputs stay
// byte-identical across reruns.
std::string solve_summary(const SolveResult& r) {
  std::ostringstream os;
  os << "status " << to_string(r.status) << "\n";
  os << "objective " << format_double(r.objective) << "\n";
  os << "bound " << format_double(r.bound) << "\n";
  os << "gap " << format_double(r.gap) << "\n";
  return os.str();
}

std::string series_table(const std::vector<std::string>& headers,
                         const std::vector<std::vector<double>>& columns) {
  std::ostringstream os;
  os << "span";
  for (const auto& h : headers) os << "\t" << h;
  os << "\n";
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  for (std::size_t t = 0; t < rows; ++t) {
    os << (t + 1);
    for (const auto& c : columns)
      os << "\t" << format_double(t < c.size() ? c[t] : 0.0);
    os << "\n";
  }
  return os.str();
}

int exit_for(SolveStatus st, bool incumbent) {
  switch (st) {
    case SolveStatus::optimal:
    case SolveStatus::gap_limit: return 0;
    case SolveStatus::time_limit: return incumbent ? 0 : 1;
    case SolveStatus::infeasible:
    case SolveStatus::unbounded: return 1;
    case SolveStatus::error: return 3;
  }
  return 3;
}

int cmd_build(const CommonArgs& a) {
  Scenario sc = load_scenario(a);
  Model m = assemble(sc);
  CountReport counts = audit_counts(m);
  fs::path out(a.out_dir);
  spill(out / "model.lp", write_lp(m.ir));
  spill(out / "counts.txt", counts.to_text());
  std::cout << counts.to_text();
  std::cout << "model written to " << (out / "model.lp").string() << "\n";
  return counts.consistent() ? 0 : 1;
}

int cmd_solve(const CommonArgs& a) {
  Scenario sc = load_scenario(a);
  Model m = assemble(sc);
  SolveResult r = solve(m.ir, solve_options(sc, a));
  fs::path out(a.out_dir);
  spill(out / "solve.txt", solve_summary(r));
  spill(out / "solve.meta.txt", "seconds " + format_double(r.seconds) + "\n");
  std::cout << solve_summary(r);
  if (r.status == SolveStatus::error) {
    std::cerr << "backend: " << r.message << "\n";
    return 3;
  }
  if (r.has_incumbent()) {
    Schedule s = extract_schedule(m, assignment_for(m.ir, r), r.objective);
    spill(out / "schedule.json", serialize_schedule(s));
    std::cout << "schedule written to " << (out / "schedule.json").string() << "\n";
  }
  return exit_for(r.status, r.has_incumbent());
}

int cmd_validate(const CommonArgs& a, const std::string& schedule_path) {
  Scenario sc = load_scenario(a);
  Schedule s = parse_schedule_text(slurp(schedule_path));
  ValidationReport rep = check_schedule(sc, s);
  fs::path out(a.out_dir);
  spill(out / "validation.txt", rep.to_text());
  spill(out / "resilience.tsv",
        series_table({"restored_kwh", "restored_weighted_kwh"},
                     {rep.restored_kwh_per_span, rep.restored_weighted_kwh_per_span}));
  std::cout << rep.to_text();
  return rep.ok() ? 0 : 1;
}

int cmd_compare(const CommonArgs& a, std::vector<std::string> cases) {
  if (cases.empty()) cases = {"case1", "case2", "case3", "case4", "case5"};
  Scenario base = load_scenario(a);
  fs::path out(a.out_dir);
  std::ostringstream table;
  table << "case\tstatus\tobjective\trestored_weighted_kwh\ttravel_spans\texchanges\n";
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;
  int rc = 0;
  for (const std::string& c : cases) {
    Scenario sc = base;
    sc.study.variant = case_from_string(c);
    Model m = assemble(sc);
    SolveResult r = solve(m.ir, solve_options(sc, a));
    if (r.status == SolveStatus::error) {
      std::cerr << "backend (" << c << "): " << r.message << "\n";
      return 3;
    }
    rc = std::max(rc, exit_for(r.status, r.has_incumbent()));
    std::string obj = "-", restored = "-", travel = "-", exchanges = "-";
    if (r.has_incumbent()) {
      Schedule s = extract_schedule(m, assignment_for(m.ir, r), r.objective);
      spill(out / (c + "_schedule.json"), serialize_schedule(s));
      ValidationReport rep = check_schedule(sc, s);
      if (!rep.ok()) {
        std::cerr << c << ": solver schedule failed validation\n"
                  << rep.to_text();
        return 1;
      }
      obj = format_double(rep.objective);
      restored = format_double(rep.restored_weighted_kwh);
      travel = format_double(rep.travel_penalty / std::max(sc.study.phi_travel, 1e-12));
      exchanges = format_double(rep.fuel_penalty / std::max(sc.study.phi_fuel, 1e-12));
      headers.push_back(c);
      columns.push_back(rep.restored_weighted_kwh_per_span);
    }
    table << c << "\t" << to_string(r.status) << "\t" << obj << "\t" << restored
          << "\t" << travel << "\t" << exchanges << "\n";
  }
  spill(out / "compare.tsv", table.str());
  spill(out / "resilience.tsv", series_table(headers, columns));
  std::cout << table.str();
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"restoration scheduling toolkit"};
  app.require_subcommand(1);

  CommonArgs build_args, solve_args, validate_args, compare_args;
  std::string schedule_path;
  std::vector<std::string> case_list;

  CLI::App* build = app.add_subcommand("build", "assemble a model and audit its size");
  add_common(build, build_args, false);

  CLI::App* solve = app.add_subcommand("solve", "solve a scenario and emit the schedule");
  add_common(solve, solve_args, true);

  CLI::App* validate = app.add_subcommand("validate", "re-check a schedule against a scenario");
  add_common(validate, validate_args, false);
  validate->add_option("--schedule", schedule_path, "schedule JSON file")->required();

  CLI::App* compare = app.add_subcommand("compare", "solve several study variants side by side");
  add_common(compare, compare_args, true);
  compare->add_option("--cases", case_list, "variants to run (default case1..case5)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return cmd_build(build_args);
    if (solve->parsed()) return cmd_solve(solve_args);
    if (validate->parsed()) return cmd_validate(validate_args, schedule_path);
    return cmd_compare(compare_args, case_list);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
