#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "../test_support.hpp"
#include "mersched/schedule.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() { return std::string(MERSCHED_BUILD_DIR) + "/tools/mersched"; }

fs::path fresh_dir(const std::string& tag) {
  static int serial = 0;
  fs::path d = fs::temp_directory_path() /
               ("mersched_cli_" + std::to_string(getpid()) + "_" + tag + "_" +
                std::to_string(serial++));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

struct Run {
  int code;
  std::string output;
};

Run run_cli(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "cli.log";
  const std::string cmd = cli_path() + " " + args + " > " + log.string() + " 2>&1";
  int st = std::system(cmd.c_str());
  int code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return {code, testsup::slurp(log.string())};
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  return testsup::slurp(a.string()) == testsup::slurp(b.string());
}

}  // namespace

TEST_CASE("build writes the model and its size audit") {
  fs::path dir = fresh_dir("build");
  Run r = run_cli("build --scenario " + testsup::fixture_path("t1_island_relay.json") +
                      " --out " + (dir / "out").string(),
                  dir);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "out" / "model.lp"));
  CHECK(fs::exists(dir / "out" / "counts.txt"));
  const std::string counts = testsup::slurp((dir / "out" / "counts.txt").string());
  CHECK(counts.find("disk-segments") != std::string::npos);
  CHECK(r.output.find("binary") != std::string::npos);
  const std::string lp = testsup::slurp((dir / "out" / "model.lp").string());
  CHECK(lp.find("c1a.") != std::string::npos);
}

TEST_CASE("build is byte-stable across reruns") {
  fs::path dir = fresh_dir("stable");
  std::string base = "build --scenario " + testsup::fixture_path("t1_island_relay.json");
  REQUIRE(run_cli(base + " --out " + (dir / "a").string(), dir).code == 0);
  REQUIRE(run_cli(base + " --out " + (dir / "b").string(), dir).code == 0);
  CHECK(same_bytes(dir / "a" / "model.lp", dir / "b" / "model.lp"));
  CHECK(same_bytes(dir / "a" / "counts.txt", dir / "b" / "counts.txt"));
}

TEST_CASE("study flags reshape the model") {
  fs::path dir = fresh_dir("flags");
  Run bundled = run_cli("build --scenario " +
                            testsup::fixture_path("t2_relay_capacity.json") +
                            " --case case3 --out " + (dir / "c3").string(),
                        dir);
  CHECK(bundled.code == 0);
  const std::string lp3 = testsup::slurp((dir / "c3" / "model.lp").string());
  CHECK(lp3.find("case3.") != std::string::npos);

  Run strict = run_cli("build --scenario " +
                           testsup::fixture_path("t1_island_relay.json") +
                           " --strict-pickup --out " + (dir / "sp").string(),
                       dir);
  CHECK(strict.code == 0);
  const std::string lpsp = testsup::slurp((dir / "sp" / "model.lp").string());
  CHECK(lpsp.find("strict_pickup.") != std::string::npos);

  Run wider = run_cli("build --scenario " +
                          testsup::fixture_path("t1_island_relay.json") +
                          " --disk-segments 12 --out " + (dir / "d12").string(),
                      dir);
  CHECK(wider.code == 0);
  CHECK_FALSE(same_bytes(dir / "sp" / "model.lp", dir / "d12" / "model.lp"));
}

TEST_CASE("solve emits the summary, sidecar, and schedule") {
  fs::path dir = fresh_dir("solve");
  Run r = run_cli("solve --scenario " + testsup::fixture_path("t4_loop_choice.json") +
                      " --gap 1e-6 --out " + (dir / "out").string(),
                  dir);
  CHECK(r.code == 0);
  const std::string summary = testsup::slurp((dir / "out" / "solve.txt").string());
  CHECK(summary.find("status optimal") != std::string::npos);
  CHECK(summary.find("objective 80") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "solve.meta.txt"));
  CHECK(fs::exists(dir / "out" / "schedule.json"));

  SECTION("the emitted schedule validates cleanly through the CLI") {
    Run v = run_cli("validate --scenario " +
                        testsup::fixture_path("t4_loop_choice.json") + " --schedule " +
                        (dir / "out" / "schedule.json").string() + " --out " +
                        (dir / "val").string(),
                    dir);
    CHECK(v.code == 0);
    const std::string report = testsup::slurp((dir / "val" / "validation.txt").string());
    CHECK(report.find("schedule is feasible") != std::string::npos);
    const std::string res = testsup::slurp((dir / "val" / "resilience.tsv").string());
    CHECK(res.find("span\trestored_kwh\trestored_weighted_kwh") != std::string::npos);
    CHECK(res.find("1\t25\t40") != std::string::npos);
  }

  SECTION("a damaged schedule is rejected with exit 1") {
    mersched::Schedule s = mersched::parse_schedule_text(
        testsup::slurp((dir / "out" / "schedule.json").string()));
    s.grid.v_squared[0][0] = 0.5;
    std::ofstream((dir / "bad.json").string(), std::ios::binary)
        << mersched::serialize_schedule(s);
    Run v = run_cli("validate --scenario " +
                        testsup::fixture_path("t4_loop_choice.json") + " --schedule " +
                        (dir / "bad.json").string() + " --out " + (dir / "valbad").string(),
                    dir);
    CHECK(v.code == 1);
    const std::string report =
        testsup::slurp((dir / "valbad" / "validation.txt").string());
    CHECK(report.find("[9g]") != std::string::npos);
  }
}

TEST_CASE("penalty overrides steer the optimum from the command line") {
  fs::path dir = fresh_dir("phi");
  Run r = run_cli("solve --scenario " + testsup::fixture_path("t1_island_relay.json") +
                      " --phi-travel 200 --phi-fuel 200 --gap 1e-6 --out " +
                      (dir / "out").string(),
                  dir);
  CHECK(r.code == 0);
  const std::string summary = testsup::slurp((dir / "out" / "solve.txt").string());
  CHECK(summary.find("objective 75") != std::string::npos);
}

TEST_CASE("compare sweeps the study variants") {
  fs::path dir = fresh_dir("compare");
  Run r = run_cli("compare --scenario " + testsup::fixture_path("t1_island_relay.json") +
                      " --cases case1,case5 --gap 1e-6 --out " + (dir / "out").string(),
                  dir);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "out" / "case1_schedule.json"));
  CHECK(fs::exists(dir / "out" / "case5_schedule.json"));
  const std::string table = testsup::slurp((dir / "out" / "compare.tsv").string());
  CHECK(table.find("case1\toptimal\t75\t75\t0\t0") != std::string::npos);
  CHECK(table.find("case5\toptimal\t157.9\t158\t1\t0") != std::string::npos);
  const std::string res = testsup::slurp((dir / "out" / "resilience.tsv").string());
  CHECK(res.find("span\tcase1\tcase5") != std::string::npos);
  CHECK(res.find("66.5") != std::string::npos);
}

TEST_CASE("input mistakes exit with code 2") {
  fs::path dir = fresh_dir("errs");
  CHECK(run_cli("build --scenario /nonexistent.json --out " + dir.string(), dir).code == 2);
  CHECK(run_cli("build --out " + dir.string(), dir).code == 2);
  CHECK(run_cli("frobnicate", dir).code == 2);
  CHECK(run_cli("solve --scenario " + testsup::fixture_path("t1_island_relay.json") +
                    " --case case9 --out " + dir.string(),
                dir)
            .code == 2);
}

TEST_CASE("backend trouble exits with code 3") {
  fs::path dir = fresh_dir("backend");
  Run r = run_cli("solve --scenario " + testsup::fixture_path("t4_loop_choice.json") +
                      " --backend /nonexistent/bridge.py --out " + (dir / "out").string(),
                  dir);
  CHECK(r.code == 3);
}
