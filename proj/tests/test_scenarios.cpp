#include <catch2/catch_amalgamated.hpp>
#include <obstacle_lab/scenarios.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

using namespace olab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

nlohmann::json read_summary(const std::string& out_dir) {
  const fs::path p = fs::path(out_dir) / "summary.json";
  REQUIRE(fs::exists(p));
  return nlohmann::json::parse(slurp(p));
}

// Runs the installed CLI binary (path from the environment) and returns its
// exit code, capturing output into the given file.
int run_cli(const std::string& bin, const std::string& args,
            const fs::path& capture) {
  const std::string cmd = bin + " " + args + " > " + capture.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("catalog lists eleven distinct documented scenarios") {
  const std::vector<ScenarioInfo> cat = scenario_catalog();
  REQUIRE(cat.size() == 11);
  std::set<std::string> names;
  for (const ScenarioInfo& info : cat) {
    REQUIRE_FALSE(info.name.empty());
    REQUIRE_FALSE(info.claim.empty());
    names.insert(info.name);
    REQUIRE(is_known_scenario(info.name));
  }
  REQUIRE(names.size() == cat.size());
  REQUIRE_FALSE(is_known_scenario("no-such-scenario"));
}

TEST_CASE("defaults are tailored per scenario") {
  const ScenarioConfig moll = scenario_defaults("mollify-convergence");
  REQUIRE(moll.name == "mollify-convergence");
  REQUIRE(moll.nt > moll.nx);  // long-time study refines the time axis
  const ScenarioConfig ell = scenario_defaults("elliptic-envelope");
  REQUIRE(ell.newton_tol <= 1e-9);
  const ScenarioConfig bb = scenario_defaults("barenblatt");
  REQUIRE(bb.x_min < 0.0);  // symmetric domain around the source
  REQUIRE_FALSE(bb.out_dir.empty());
  REQUIRE_THROWS_AS(scenario_defaults("no-such-scenario"), std::invalid_argument);
}

TEST_CASE("json overrides apply known keys and reject unknown ones") {
  ScenarioConfig cfg = scenario_defaults("supersolution-obstacle");

  SECTION("scalar and array keys round trip") {
    nlohmann::json j = {{"nx", 48},
                        {"nt", 96},
                        {"p", 2.5},
                        {"omega", 1.4},
                        {"eps_list", {0.4, 0.2}},
                        {"check_init_independence", true}};
    apply_json_overrides(cfg, j);
    REQUIRE(cfg.nx == 48);
    REQUIRE(cfg.nt == 96);
    REQUIRE(cfg.p == 2.5);
    REQUIRE(cfg.omega == 1.4);
    REQUIRE(cfg.eps_list == std::vector<double>{0.4, 0.2});
    REQUIRE(cfg.check_init_independence);
    const nlohmann::json back = config_to_json(cfg);
    REQUIRE(back["nx"] == 48);
    REQUIRE(back["p"] == 2.5);
  }

  SECTION("unknown keys are named in the error") {
    try {
      apply_json_overrides(cfg, {{"nx_typo", 48}});
      FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
      REQUIRE(std::string(e.what()).find("nx_typo") != std::string::npos);
    }
  }

  SECTION("wrongly typed values are named in the error") {
    try {
      apply_json_overrides(cfg, {{"nx", "many"}});
      FAIL("expected a throw");
    } catch (const std::exception& e) {
      REQUIRE(std::string(e.what()).find("nx") != std::string::npos);
    }
  }
}

TEST_CASE("run_scenario rejects unusable configurations") {
  ScenarioConfig cfg = scenario_defaults("supersolution-obstacle");
  cfg.name = "no-such-scenario";
  cfg.out_dir = "scenario_reject_out";
  REQUIRE_THROWS_AS(run_scenario(cfg), std::invalid_argument);
  cfg = scenario_defaults("supersolution-obstacle");
  cfg.out_dir.clear();
  REQUIRE_THROWS_AS(run_scenario(cfg), std::invalid_argument);
}

TEST_CASE("a green run writes a complete summary") {
  ScenarioConfig cfg = scenario_defaults("supersolution-obstacle");
  cfg.nx = 32;
  cfg.nt = 32;
  cfg.out_dir = "scenario_green_out";
  const ScenarioOutcome out = run_scenario(cfg);
  REQUIRE(out.pass);
  REQUIRE(out.failing.empty());
  REQUIRE(out.elapsed_seconds >= 0.0);

  const nlohmann::json summary = read_summary(cfg.out_dir);
  REQUIRE(summary["scenario"] == "supersolution-obstacle");
  REQUIRE(summary["pass"] == true);
  REQUIRE(summary["failing_check"].is_null());
  REQUIRE(summary["config"]["nx"] == 32);
  for (const auto& [label, ok] : summary["metrics"]["checks"].items())
    REQUIRE(ok == true);
  REQUIRE(fs::exists(fs::path(cfg.out_dir) / "solution.csv"));
  REQUIRE(fs::exists(fs::path(cfg.out_dir) / "solution_info.json"));
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("a failing run still writes its summary with the failing check") {
  ScenarioConfig cfg = scenario_defaults("counterexample");
  cfg.nx = 16;
  cfg.nt = 16;
  cfg.max_inner_iters = 1;  // force a solver failure
  cfg.out_dir = "scenario_red_out";
  const ScenarioOutcome out = run_scenario(cfg);
  REQUIRE_FALSE(out.pass);
  REQUIRE_FALSE(out.failing.empty());

  const nlohmann::json summary = read_summary(cfg.out_dir);
  REQUIRE(summary["pass"] == false);
  REQUIRE(summary["failing_check"].is_string());
  REQUIRE_FALSE(summary["failing_check"].get<std::string>().empty());
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("command line interface behaves end to end") {
  const char* bin_env = std::getenv("OBSTACLE_LAB_BIN");
  if (bin_env == nullptr || std::string(bin_env).empty())
    SKIP("OBSTACLE_LAB_BIN not set; ctest provides it");
  const std::string bin(bin_env);
  const fs::path work = fs::path("cli_e2e_out");
  fs::create_directories(work);

  SECTION("list prints every scenario and exits cleanly") {
    const fs::path cap = work / "list.txt";
    REQUIRE(run_cli(bin, "list", cap) == 0);
    const std::string text = slurp(cap);
    for (const ScenarioInfo& info : scenario_catalog())
      REQUIRE(text.find(info.name) != std::string::npos);
  }

  SECTION("unknown scenarios exit with status two") {
    const fs::path cap = work / "unknown.txt";
    REQUIRE(run_cli(bin, "run --scenario no-such-scenario", cap) == 2);
    REQUIRE(slurp(cap).find("supersolution-obstacle") != std::string::npos);
  }

  SECTION("a malformed config file exits with status two") {
    const fs::path cfg_path = work / "broken.json";
    std::ofstream(cfg_path) << "{ this is not json";
    const fs::path cap = work / "badcfg.txt";
    REQUIRE(run_cli(bin,
                    "run --scenario supersolution-obstacle --config " +
                        cfg_path.string(),
                    cap) == 2);
  }

  SECTION("an unknown config key exits with status two") {
    const fs::path cfg_path = work / "badkey.json";
    std::ofstream(cfg_path) << R"({"nx_typo": 32})";
    const fs::path cap = work / "badkey.txt";
    REQUIRE(run_cli(bin,
                    "run --scenario supersolution-obstacle --config " +
                        cfg_path.string(),
                    cap) == 2);
    REQUIRE(slurp(cap).find("nx_typo") != std::string::npos);
  }

  SECTION("green runs exit zero and are bytewise deterministic") {
    const fs::path out1 = work / "run1";
    const fs::path out2 = work / "run2";
    const std::string args = "run --scenario supersolution-obstacle --nx 32 --nt 32";
    REQUIRE(run_cli(bin, args + " --out " + out1.string(), work / "r1.txt") == 0);
    REQUIRE(run_cli(bin, args + " --out " + out2.string(), work / "r2.txt") == 0);
    const std::string a = slurp(out1 / "solution.csv");
    const std::string b = slurp(out2 / "solution.csv");
    REQUIRE_FALSE(a.empty());
    REQUIRE(a == b);
  }

  SECTION("a red scenario exits with status one") {
    const fs::path cap = work / "red.txt";
    const int rc = run_cli(bin,
                           "run --scenario counterexample --nx 16 --nt 16 "
                           "--max-inner-iters 1 --out " +
                               (work / "red_out").string(),
                           cap);
    REQUIRE(rc == 1);
    REQUIRE(slurp(cap).find("FAIL") != std::string::npos);
  }

  fs::remove_all(work);
}
