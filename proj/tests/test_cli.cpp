#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

std::string cli_path() {
  const char* p = std::getenv("POLYENS_CLI");
  return p == nullptr ? "" : p;
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args, const json& config) {
  static int counter = 0;
  std::string cfg_path =
      "/tmp/polyens_cli_cfg_" + std::to_string(counter) + ".json";
  std::string out_path =
      "/tmp/polyens_cli_out_" + std::to_string(counter) + ".txt";
  ++counter;
  {
    std::ofstream cfg(cfg_path);
    cfg << config.dump();
  }
  std::string cmd = cli_path() + " " + args + " --config " + cfg_path +
                    " --out " + out_path + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  res.output = buf.str();
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
  return res;
}

json base_config() {
  return json{{"schema_version", 1},
              {"ensemble", {{"kind", "gue_ext"}, {"a", {0.5, -0.5}}}},
              {"numerics", {{"seed", 42}, {"mc_samples", 4000}}}};
}

json strip_timing(json report) {
  if (report.contains("diagnostics")) {
    report["diagnostics"].erase("wall_time_ms");
  }
  return report;
}

}  // namespace

TEST_CASE("cli is configured for the test run") {
  REQUIRE(!cli_path().empty());
}

TEST_CASE("zcheck runs clean and reports both formulas") {
  RunResult r = run_cli("zcheck", base_config());
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.output);
  CHECK(report["schema_version"] == 1);
  CHECK(report["command"] == "zcheck");
  CHECK(report["outputs"]["relative_gap"].get<double>() < 1e-8);
  CHECK(report["outputs"].contains("z_moment_formula"));
  CHECK(report["outputs"].contains("z_source_formula"));
  CHECK(report["diagnostics"].contains("wall_time_ms"));
}

TEST_CASE("zcheck at N=1 gives unit normalization both ways") {
  json cfg = base_config();
  cfg["ensemble"]["a"] = {0.3};
  RunResult r = run_cli("zcheck", cfg);
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.output);
  CHECK(std::abs(report["outputs"]["z_moment_formula"].get<double>() - 1.0) <
        1e-8);
  CHECK(report["outputs"]["z_source_formula"].get<double>() == 1.0);
}

TEST_CASE("empty ratio query returns exactly one") {
  json cfg = base_config();
  cfg["zs"] = json::array();
  cfg["ys"] = json::array();
  RunResult r = run_cli("ratio", cfg);
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.output);
  CHECK(report["outputs"]["master"][0].get<double>() == 1.0);
  CHECK(report["outputs"]["master"][1].get<double>() == 0.0);
}

TEST_CASE("fractional nu cannot feed the matrix-model sampler") {
  json cfg = base_config();
  cfg["ensemble"] = {{"kind", "chgue_ext"}, {"a", {0.4, 1.1}}, {"nu", 0.5}};
  cfg["zs"] = {{0.3, 0.0}};
  cfg["ys"] = {{1.0, 1.0}};
  cfg["oracle"] = {{"mode", "mc"}};
  CHECK(run_cli("oracle", cfg).exit_code == 3);
  // quad mode is fine with fractional nu
  cfg["oracle"] = {{"mode", "quad"}, {"nodes_axis", 240}};
  CHECK(run_cli("oracle", cfg).exit_code == 0);
}

TEST_CASE("coincident source parameters exit with the precondition code") {
  json cfg = base_config();
  cfg["ensemble"]["a"] = {0.5, 0.5};
  RunResult r = run_cli("zcheck", cfg);
  CHECK(r.exit_code == 3);
  json report = json::parse(r.output);
  CHECK(report.contains("error"));
}

TEST_CASE("schema violations exit with the config code") {
  json cfg = base_config();
  cfg.erase("schema_version");
  CHECK(run_cli("zcheck", cfg).exit_code == 2);

  cfg = base_config();
  cfg["ensemble"]["kind"] = "wishart";
  CHECK(run_cli("zcheck", cfg).exit_code == 2);
}

TEST_CASE("ratio command reports provider agreement") {
  json cfg = base_config();
  cfg["zs"] = {{0.3, 0.0}};
  cfg["ys"] = {{1.0, 1.0}};
  RunResult r = run_cli("ratio", cfg);
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.output);
  CHECK(report["outputs"].contains("master"));
  CHECK(report["outputs"].contains("bordered"));
  CHECK(report["outputs"].contains("quad_oracle"));
  CHECK(report["outputs"].contains("mc_oracle"));
  CHECK(report["diagnostics"]["convergence_gaps"]["quad_oracle_vs_master"]
            .get<double>() < 1e-6);
}

TEST_CASE("ratio command rejects L > N with the precondition code") {
  json cfg = base_config();
  cfg["zs"] = json::array();
  cfg["ys"] = {{0.0, 1.0}, {0.0, 2.0}, {0.0, 3.0}};
  RunResult r = run_cli("ratio", cfg);
  CHECK(r.exit_code == 3);
}

TEST_CASE("kernel emits csv with the fixed column layout") {
  json cfg = base_config();
  cfg["grid"] = {{"x_min", -1.0}, {"x_max", 1.0}, {"x_count", 2},
                 {"y_min", -1.0}, {"y_max", 1.0}, {"y_count", 2}};
  RunResult r = run_cli("kernel --format csv", cfg);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.rfind("x,y,K\n", 0) == 0);
  // header + 4 grid rows
  int lines = 0;
  for (char c : r.output) lines += c == '\n' ? 1 : 0;
  CHECK(lines >= 5);
}

TEST_CASE("kernel rejects an empty grid") {
  json cfg = base_config();
  cfg["grid"] = {{"x_min", -1.0}, {"x_max", 1.0}, {"x_count", 0},
                 {"y_min", -1.0}, {"y_max", 1.0}, {"y_count", 2}};
  CHECK(run_cli("kernel", cfg).exit_code == 2);
}

TEST_CASE("oracle replays identically for a fixed seed") {
  json cfg = base_config();
  cfg["zs"] = {{0.3, 0.0}};
  cfg["ys"] = {{1.0, 1.0}};
  cfg["oracle"] = {{"mode", "mc"}};
  RunResult r1 = run_cli("oracle", cfg);
  RunResult r2 = run_cli("oracle", cfg);
  REQUIRE(r1.exit_code == 0);
  CHECK(strip_timing(json::parse(r1.output)) ==
        strip_timing(json::parse(r2.output)));

  RunResult r3 = run_cli("oracle --seed 77", cfg);
  CHECK(strip_timing(json::parse(r1.output)) !=
        strip_timing(json::parse(r3.output)));
}

TEST_CASE("oracle quad refuses N > 3") {
  json cfg = base_config();
  cfg["ensemble"]["a"] = {0.5, -0.5, 1.0, 1.5};
  cfg["oracle"] = {{"mode", "quad"}};
  cfg["zs"] = {{0.3, 0.0}};
  RunResult r = run_cli("oracle", cfg);
  CHECK(r.exit_code == 3);
}

TEST_CASE("giambelli sweep stays within tolerance") {
  json cfg = base_config();
  cfg["ensemble"]["a"] = {0.5, -0.25, 0.9};
  cfg["max_boxes"] = 3;
  cfg["n_values"] = {2, 3};
  RunResult r = run_cli("giambelli", cfg);
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.output);
  CHECK(report["outputs"]["max_gap"].get<double>() < 1e-8);
}
