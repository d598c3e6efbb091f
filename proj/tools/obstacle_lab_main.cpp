// Command-line front end: `obstacle-lab run --scenario <name> [...]` executes
// one scenario and writes its artifacts; `obstacle-lab list` prints the
// catalog.  Exit codes: 0 scenario passed, 1 scenario failed (a check or a
// solver), 2 usage or configuration problems.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>

#include "obstacle_lab/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for obstacle-constrained degenerate diffusion"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run a scenario and write its artifacts");
  std::string scenario;
  std::string config_path;
  std::string out_dir;
  int nx = 0, nt = 0, max_inner_iters = 0;
  double p = 0.0, eps = 0.0, sigma = 0.0, omega = 0.0, newton_tol = 0.0;
  long long seed = -1;
  bool init_flag = false;
  run->add_option("--scenario", scenario, "scenario name (see `obstacle-lab list`)")->required();
  run->add_option("--config", config_path, "JSON file with configuration overrides");
  run->add_option("--nx", nx, "number of space cells");
  run->add_option("--nt", nt, "number of time steps");
  run->add_option("--p", p, "diffusion exponent (>= 2)");
  run->add_option("--eps", eps, "exponential time mollification scale");
  run->add_option("--sigma", sigma, "bump mollification radius");
  run->add_option("--omega", omega, "relaxation factor for the sweeps");
  run->add_option("--newton-tol", newton_tol, "residual tolerance per time step");
  run->add_option("--max-inner-iters", max_inner_iters, "sweep budget per time step");
  run->add_option("--seed", seed, "seed for the scenario's random draws");
  run->add_option("--out", out_dir, "output directory (default out/<scenario>)");
  run->add_flag("--check-init-independence", init_flag,
                "also compare zero-start and upper-start solves");

  CLI::App* list = app.add_subcommand("list", "list available scenarios");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& s : olab::scenario_catalog())
      std::printf("%-24s %s\n", s.name.c_str(), s.claim.c_str());
    return 0;
  }

  if (!olab::is_known_scenario(scenario)) {
    std::fprintf(stderr, "unknown scenario '%s'; valid names:\n", scenario.c_str());
    for (const auto& s : olab::scenario_catalog())
      std::fprintf(stderr, "  %s\n", s.name.c_str());
    return 2;
  }

  olab::ScenarioConfig cfg;
  try {
    cfg = olab::scenario_defaults(scenario);
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) {
        std::fprintf(stderr, "cannot open config file '%s'\n", config_path.c_str());
        return 2;
      }
      olab::apply_json_overrides(cfg, nlohmann::json::parse(is));
    }
    if (run->count("--nx")) cfg.nx = nx;
    if (run->count("--nt")) cfg.nt = nt;
    if (run->count("--p")) cfg.p = p;
    if (run->count("--eps")) cfg.eps = eps;
    if (run->count("--sigma")) cfg.sigma = sigma;
    if (run->count("--omega")) cfg.omega = omega;
    if (run->count("--newton-tol")) cfg.newton_tol = newton_tol;
    if (run->count("--max-inner-iters")) cfg.max_inner_iters = max_inner_iters;
    if (run->count("--seed")) cfg.seed = static_cast<unsigned>(seed);
    if (run->count("--out")) cfg.out_dir = out_dir;
    if (init_flag) cfg.check_init_independence = true;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  try {
    const olab::ScenarioOutcome outcome = olab::run_scenario(cfg);
    if (outcome.pass)
      std::printf("%s: PASS (%.2fs); artifacts in %s\n", cfg.name.c_str(),
                  outcome.elapsed_seconds, cfg.out_dir.c_str());
    else
      std::printf("%s: FAIL — %s (%.2fs); see %s/summary.json\n", cfg.name.c_str(),
                  outcome.failing.c_str(), outcome.elapsed_seconds, cfg.out_dir.c_str());
    return outcome.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
