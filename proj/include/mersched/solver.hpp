#pragma once

#include <sys/types.h>
#include <sys/wait.h>

#include <csignal>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "lp_format.hpp"
#include "model_ir.hpp"

namespace mersched {

enum class SolveStatus { optimal, gap_limit, time_limit, infeasible, unbounded, error };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::gap_limit: return "gap-limit";
    case SolveStatus::time_limit: return "time-limit";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::error: return "error";
  }
  return "error";
}

struct SolveOptions {
  std::string solver = "highs";  // or "glpk"
  double gap = 0;                // relative optimality gap target
  double time_limit_s = 0;       // 0 = unlimited
  std::string backend;           // resolver used when empty
  bool keep_files = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::error;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0;
  std::map<std::string, double> values;
  std::string message;

  bool has_incumbent() const {
    return !values.empty() && (status == SolveStatus::optimal ||
                               status == SolveStatus::gap_limit ||
                               status == SolveStatus::time_limit);
  }
};

// Locate the solver bridge script: explicit env wins, then next to the
// running binary, then one level up (the build tree layout), then the cwd.
inline std::string default_backend() {
  if (const char* env = std::getenv("MERSCHED_BACKEND"); env && *env) return env;
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  std::vector<fs::path> probes;
  if (!ec) {
    probes.push_back(exe.parent_path() / "milp_backend.py");
    probes.push_back(exe.parent_path().parent_path() / "milp_backend.py");
  }
  probes.push_back(fs::path("milp_backend.py"));
  probes.push_back(fs::path("tools/milp_backend.py"));
  for (const fs::path& p : probes)
    if (fs::exists(p, ec)) return p.string();
  return "milp_backend.py";
}

namespace detail {

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string tail_of(const std::string& s, std::size_t n = 800) {
  return s.size() <= n ? s : s.substr(s.size() - n);
}

}  // namespace detail

inline SolveResult solve(const ModelIR& ir, const SolveOptions& opts = {}) {
  namespace fs = std::filesystem;
  SolveResult out;

  std::string tmpl = (fs::temp_directory_path() / "mersched.XXXXXX").string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) {
    out.message = "cannot create work directory";
    return out;
  }
  fs::path dir(buf.data());
  fs::path lp = dir / "model.lp";
  fs::path res = dir / "result.json";
  fs::path log = dir / "backend.log";
  {
    std::ofstream f(lp, std::ios::binary);
    f << write_lp(ir);
    if (!f) {
      out.message = "cannot write " + lp.string();
      return out;
    }
  }

  const char* py = std::getenv("MERSCHED_PYTHON");
  std::string python = py && *py ? py : "python3";
  std::string backend = opts.backend.empty() ? default_backend() : opts.backend;
  std::vector<std::string> args = {python,
                                   backend,
                                   "--lp",
                                   lp.string(),
                                   "--out",
                                   res.string(),
                                   "--solver",
                                   opts.solver,
                                   "--gap",
                                   format_double(opts.gap),
                                   "--time-limit",
                                   format_double(opts.time_limit_s)};

  pid_t pid = fork();
  if (pid < 0) {
    out.message = "fork failed";
    return out;
  }
  if (pid == 0) {
    if (FILE* lf = std::fopen(log.c_str(), "w")) {
      dup2(fileno(lf), 1);
      dup2(fileno(lf), 2);
    }
    std::vector<char*> argv;
    for (std::string& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    _exit(127);
  }

  const double grace = 60;
  const double deadline =
      opts.time_limit_s > 0 ? opts.time_limit_s + grace : 0;
  timespec t0{};
  clock_gettime(CLOCK_MONOTONIC, &t0);
  int wstatus = 0;
  bool killed = false;
  for (;;) {
    pid_t r = waitpid(pid, &wstatus, WNOHANG);
    if (r == pid) break;
    if (r < 0) {
      out.message = "waitpid failed";
      return out;
    }
    timespec now{};
    clock_gettime(CLOCK_MONOTONIC, &now);
    double elapsed = double(now.tv_sec - t0.tv_sec) + 1e-9 * (now.tv_nsec - t0.tv_nsec);
    if (deadline > 0 && elapsed > deadline && !killed) {
      kill(pid, SIGKILL);
      killed = true;
    }
    timespec nap{0, 20'000'000};
    nanosleep(&nap, nullptr);
  }

  auto cleanup = [&]() {
    if (!opts.keep_files) {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  };

  if (killed) {
    out.message = "backend exceeded the wall deadline and was killed";
    cleanup();
    return out;
  }
  const int code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
  if (code != 0 || !fs::exists(res)) {
    out.message = "backend failed (exit " + std::to_string(code) + "): " +
                  detail::tail_of(detail::read_text_file(log));
    cleanup();
    return out;
  }

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(detail::read_text_file(res));
  } catch (const std::exception& e) {
    out.message = std::string("bad backend result: ") + e.what();
    cleanup();
    return out;
  }
  const std::string st = doc.value("status", "error");
  if (st == "optimal") out.status = SolveStatus::optimal;
  else if (st == "gap-limit") out.status = SolveStatus::gap_limit;
  else if (st == "time-limit") out.status = SolveStatus::time_limit;
  else if (st == "infeasible") out.status = SolveStatus::infeasible;
  else if (st == "unbounded") out.status = SolveStatus::unbounded;
  else out.status = SolveStatus::error;
  if (doc.contains("objective") && doc["objective"].is_number())
    out.objective = doc["objective"].get<double>();
  if (doc.contains("bound") && doc["bound"].is_number())
    out.bound = doc["bound"].get<double>();
  if (doc.contains("gap") && doc["gap"].is_number())
    out.gap = doc["gap"].get<double>();
  out.seconds = doc.value("seconds", 0.0);
  out.message = doc.value("message", "");
  if (doc.contains("values") && doc["values"].is_object())
    for (auto it = doc["values"].begin(); it != doc["values"].end(); ++it)
      out.values[it.key()] = it.value().get<double>();
  cleanup();
  return out;
}

// Solution vector aligned with the model's variable order.
inline std::vector<double> assignment_for(const ModelIR& ir, const SolveResult& r) {
  std::vector<double> x(ir.vars.size(), 0.0);
  for (std::size_t i = 0; i < ir.vars.size(); ++i) {
    auto it = r.values.find(ir.vars[i].name);
    if (it != r.values.end()) x[i] = it->second;
  }
  return x;
}

}  // namespace mersched
