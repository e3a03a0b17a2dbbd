#pragma once

// Shared plumbing for the test binaries: fixture locations, scenario
// loading, and a solve helper wired to the bundled backend script.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mersched/assemble.hpp"
#include "mersched/schedule.hpp"
#include "mersched/solver.hpp"
#include "mersched/validate.hpp"

#ifndef MERSCHED_SOURCE_DIR
#define MERSCHED_SOURCE_DIR "."
#endif
#ifndef MERSCHED_BUILD_DIR
#define MERSCHED_BUILD_DIR "."
#endif

namespace testsup {

inline std::string fixture_path(const std::string& name) {
  return std::string(MERSCHED_SOURCE_DIR) + "/fixtures/" + name;
}

inline std::string backend_path() {
  if (const char* env = std::getenv("MERSCHED_BACKEND"); env && *env) return env;
  return std::string(MERSCHED_BUILD_DIR) + "/milp_backend.py";
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline mersched::Scenario load_fixture(const std::string& name) {
  return mersched::parse_scenario_text(slurp(fixture_path(name)));
}

struct Solved {
  mersched::Model model;
  mersched::SolveResult result;
  mersched::Schedule schedule;
};

// Solve to proven optimality (tiny instances only).
inline Solved solve_scenario(const mersched::Scenario& sc, double gap = 1e-6) {
  Solved out{mersched::assemble(sc), {}, {}};
  mersched::SolveOptions so;
  so.gap = gap;
  so.backend = backend_path();
  out.result = mersched::solve(out.model.ir, so);
  if (out.result.has_incumbent())
    out.schedule = mersched::extract_schedule(
        out.model, mersched::assignment_for(out.model.ir, out.result),
        out.result.objective);
  return out;
}

inline Solved solve_fixture(const std::string& name, mersched::CaseId variant,
                            double gap = 1e-6) {
  mersched::Scenario sc = load_fixture(name);
  sc.study.variant = variant;
  return solve_scenario(sc, gap);
}

// Empty variant keeps whatever the fixture's study block selects.
inline Solved solve_fixture(const std::string& name, const std::string& variant = "",
                            double gap = 1e-6) {
  mersched::Scenario sc = load_fixture(name);
  if (!variant.empty()) sc.study.variant = mersched::case_from_string(variant);
  return solve_scenario(sc, gap);
}

}  // namespace testsup
