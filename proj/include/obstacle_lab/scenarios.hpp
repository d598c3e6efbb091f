#pragma once
// Runnable scenario programs.  Each scenario builds its frozen problem
// (grid, obstacle, constants), runs solves, evaluates its claims as named
// checks, and writes artifacts: solution/obstacle CSVs, sweep tables, and a
// summary.json that is produced even when a check or a solver fails.

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "obstacle_lab/analysis.hpp"
#include "obstacle_lab/barenblatt.hpp"
#include "obstacle_lab/grid.hpp"
#include "obstacle_lab/obstacle.hpp"

namespace olab {

struct ScenarioConfig {
  std::string name;
  double x_min = 0.0, x_max = 1.0;
  int nx = 128;
  double T = 1.0;
  int nt = 256;
  double p = 3.0;
  double newton_tol = 1e-10;
  int max_inner_iters = 20000;
  double omega = 1.7;
  unsigned seed = 12345;
  double eps = 0.1;
  double sigma = 0.05;
  std::vector<double> eps_list;
  bool check_init_independence = false;
  std::string out_dir;

  SpaceTimeGrid grid() const { return make_cylinder_grid(x_min, x_max, nx, T, nt); }
  PParams pparams() const {
    PParams pp;
    pp.p = p;
    pp.newton_tol = newton_tol;
    pp.max_inner_iters = max_inner_iters;
    pp.omega = omega;
    return pp;
  }
};

struct ScenarioInfo {
  std::string name;
  std::string claim;
};

inline const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog = {
      {"continuous-obstacle",
       "smooth obstacle: constrained solve with complementarity and nonnegative pairings"},
      {"supersolution-obstacle",
       "a concave, nondecreasing obstacle is its own constrained solution"},
      {"ordered-obstacles", "comparison: larger obstacles give larger solutions"},
      {"counterexample",
       "a zero-measure obstacle slice: invisible almost everywhere, binding pointwise"},
      {"mollify-convergence",
       "solutions with time-mollified obstacles approach the unmollified solution"},
      {"space-time-mollify",
       "space-time smoothed obstacles: Cauchy trend of constrained solutions"},
      {"elliptic-envelope",
       "stationary problem: solution equals the least concave majorant for every p"},
      {"elliptic-stability",
       "stationary problem: solution distance shrinks with obstacle perturbation"},
      {"barenblatt", "unconstrained degenerate diffusion against a closed-form reference"},
      {"lsc-from-below", "obstacles increasing to a limit: solutions converge from below"},
      {"usc-pointwise",
       "obstacles decreasing to a slice: solutions converge to the pointwise solution"},
  };
  return catalog;
}

inline bool is_known_scenario(const std::string& name) {
  for (const auto& s : scenario_catalog())
    if (s.name == name) return true;
  return false;
}

inline ScenarioConfig scenario_defaults(const std::string& name) {
  if (!is_known_scenario(name))
    throw std::invalid_argument("unknown scenario '" + name + "'");
  ScenarioConfig cfg;
  cfg.name = name;
  if (name == "ordered-obstacles") {
    cfg.nx = 64;
    cfg.nt = 128;
  } else if (name == "mollify-convergence") {
    cfg.T = 4.0;
    cfg.nt = 8192;
    cfg.omega = 1.6;
    cfg.eps_list = {0.2, 0.1, 0.05, 0.025};
  } else if (name == "space-time-mollify") {
    cfg.eps_list = {0.2, 0.1, 0.05, 0.025};
  } else if (name == "elliptic-envelope" || name == "elliptic-stability") {
    cfg.nx = 256;
    cfg.nt = 4;  // unused by the stationary problem
    cfg.omega = 1.9;
    cfg.newton_tol = 1e-9;
    cfg.max_inner_iters = 200000;
  } else if (name == "barenblatt") {
    cfg.x_min = -2.0;
    cfg.x_max = 2.0;
    cfg.T = 0.25;
    cfg.omega = 1.3;
  }
  cfg.out_dir = "out/" + name;
  return cfg;
}

inline void apply_json_overrides(ScenarioConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const nlohmann::json& v = it.value();
    try {
      if (key == "x_min")
        cfg.x_min = v.get<double>();
      else if (key == "x_max")
        cfg.x_max = v.get<double>();
      else if (key == "nx")
        cfg.nx = v.get<int>();
      else if (key == "T")
        cfg.T = v.get<double>();
      else if (key == "nt")
        cfg.nt = v.get<int>();
      else if (key == "p")
        cfg.p = v.get<double>();
      else if (key == "newton_tol")
        cfg.newton_tol = v.get<double>();
      else if (key == "max_inner_iters")
        cfg.max_inner_iters = v.get<int>();
      else if (key == "omega")
        cfg.omega = v.get<double>();
      else if (key == "seed")
        cfg.seed = v.get<unsigned>();
      else if (key == "eps")
        cfg.eps = v.get<double>();
      else if (key == "sigma")
        cfg.sigma = v.get<double>();
      else if (key == "eps_list")
        cfg.eps_list = v.get<std::vector<double>>();
      else if (key == "check_init_independence")
        cfg.check_init_independence = v.get<bool>();
      else if (key == "out_dir")
        cfg.out_dir = v.get<std::string>();
      else
        throw std::invalid_argument("config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument("config: bad value for key '" + key + "'");
    }
  }
}

inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  return nlohmann::json{{"scenario", cfg.name},
                        {"x_min", cfg.x_min},
                        {"x_max", cfg.x_max},
                        {"nx", cfg.nx},
                        {"T", cfg.T},
                        {"nt", cfg.nt},
                        {"p", cfg.p},
                        {"newton_tol", cfg.newton_tol},
                        {"max_inner_iters", cfg.max_inner_iters},
                        {"omega", cfg.omega},
                        {"seed", cfg.seed},
                        {"eps", cfg.eps},
                        {"sigma", cfg.sigma},
                        {"eps_list", cfg.eps_list},
                        {"check_init_independence", cfg.check_init_independence},
                        {"out_dir", cfg.out_dir}};
}

struct ScenarioOutcome {
  bool pass = true;
  std::string failing;  // first failed check, or the thrown error
  nlohmann::json metrics = nlohmann::json::object();
  double elapsed_seconds = 0.0;
};

namespace detail {

inline void check(ScenarioOutcome& out, bool ok, const std::string& label) {
  out.metrics["checks"][label] = ok;
  if (!ok && out.pass) {
    out.pass = false;
    out.failing = label;
  }
}

inline std::string join_path(const std::string& dir, const std::string& leaf) {
  return (std::filesystem::path(dir) / leaf).string();
}

inline void write_sweep_csv(const std::string& path,
                            const std::vector<ConvergenceRecord>& recs) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << "eps,dist_lp,dist_grad_lp,energy\n";
  for (const auto& r : recs)
    os << fmt_double(r.eps) << ',' << fmt_double(r.dist_lp) << ','
       << fmt_double(r.dist_grad_lp) << ',' << fmt_double(r.energy) << '\n';
}

inline void write_table_csv(const std::string& path,
                            const std::vector<std::string>& cols,
                            const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < cols.size(); ++c)
    os << cols[c] << (c + 1 < cols.size() ? ',' : '\n');
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << fmt_double(row[c]) << (c + 1 < row.size() ? ',' : '\n');
  }
}

// Solution CSV plus a JSON sidecar holding the solver diagnostics.
inline void write_solution(const std::string& dir, const std::string& stem,
                           const ObstacleSolution& sol, const PParams& params) {
  write_field_csv(sol.u, join_path(dir, stem + ".csv"));
  nlohmann::json info{
      {"mode", sol.mode == ConstraintMode::ae ? "ae" : "pointwise"},
      {"comp_residual", sol.comp_residual},
      {"inactive_residual", sol.inactive_residual},
      {"iterations_per_step", sol.iterations},
      {"active_node_count_per_step", sol.active_count},
      {"params",
       {{"p", params.p},
        {"newton_tol", params.newton_tol},
        {"max_inner_iters", params.max_inner_iters},
        {"omega", params.omega}}},
  };
  std::ofstream os(join_path(dir, stem + "_info.json"));
  os << info.dump(2) << '\n';
}

// Tight node box containing every nonzero of the field.
inline Cylinder support_box_of(const Field& f) {
  const SpaceTimeGrid& g = f.grid;
  Cylinder c{g.nx, 0, g.nt, 0};
  bool any = false;
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i)
      if (f.at(k, i) != 0.0) {
        any = true;
        c.i_lo = std::min(c.i_lo, i);
        c.i_hi = std::max(c.i_hi, i);
        c.k_lo = std::min(c.k_lo, k);
        c.k_hi = std::max(c.k_hi, k);
      }
  if (!any) throw std::invalid_argument("support_box_of: field is identically zero");
  return c;
}

inline Obstacle make_obstacle(Field psi, double L,
                              std::vector<int> thin_slices = {}) {
  Obstacle ob;
  ob.support = support_box_of(psi);
  ob.psi = std::move(psi);
  ob.L = L;
  ob.thin_slices = std::move(thin_slices);
  validate_obstacle(ob);
  return ob;
}

// Full-width wedge profile: distance to the nearest wall.  Concave across
// the whole interval and zero exactly at both walls.
inline double hat_profile(const SpaceTimeGrid& g, double x) {
  return std::min(x - g.x_min, g.x_max - x);
}

template <class SolveFn>
void record_init_independence(ScenarioOutcome& out, const SolveFn& solve) {
  const Field a = solve(SweepStart::zero);
  const Field b = solve(SweepStart::upper);
  const double d = linf_dist(a, b);
  out.metrics["init_independence_max"] = d;
  check(out, d <= 1e-9, "initialization independence");
}

// ---------------------------------------------------------------------------
// continuous-obstacle: a smooth compactly supported obstacle; verifies the
// constrained solve dominates the obstacle, respects the uniform bound,
// converges in complementarity form, and produces nonnegative weak pairings
// against the whole test battery.

inline void scenario_continuous_obstacle(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  const SpaceTimeGrid g = cfg.grid();
  const PParams params = cfg.pparams();
  const double A = 0.8;
  const double W = g.x_max - g.x_min;
  Field psi = sample_function(g, [&](double x, double t) {
    const double xr = (x - g.x_min) / W;
    const double s = std::sin(kPi * t / g.T);
    return A * poly_bump(xr, 0.5, 0.3) * s * s;
  });
  const Obstacle ob = make_obstacle(std::move(psi), A);
  const Field psi_eff = effective_obstacle(ob, ConstraintMode::ae);
  const ObstacleSolution sol =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae);

  double min_gap = 0.0, max_u = 0.0;
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) {
      min_gap = std::min(min_gap, sol.u.at(k, i) - psi_eff.at(k, i));
      max_u = std::max(max_u, sol.u.at(k, i));
    }
  out.metrics["min_gap"] = min_gap;
  out.metrics["max_u"] = max_u;
  out.metrics["comp_residual"] = sol.comp_residual;
  out.metrics["inactive_residual"] = sol.inactive_residual;
  out.metrics["max_sweeps"] =
      *std::max_element(sol.iterations.begin(), sol.iterations.end());
  long active_total = 0;
  for (int c : sol.active_count) active_total += c;
  out.metrics["active_fraction"] =
      static_cast<double>(active_total) / (static_cast<double>(g.nt) * (g.nx - 1));
  check(out, min_gap >= 0.0, "solution dominates obstacle");
  check(out, max_u <= ob.L + 1e-9, "uniform bound");
  check(out, sol.comp_residual < params.newton_tol, "complementarity residual");
  check(out, sol.inactive_residual < params.newton_tol, "inactive-node residual");

  const std::vector<TestFunction> battery = residual_test_battery(g, cfg.seed);
  double super_min = std::numeric_limits<double>::infinity();
  double vr_min = std::numeric_limits<double>::infinity();
  for (const TestFunction& tf : battery) {
    super_min = std::min(super_min, supersolution_residual(sol.u, params, tf));
    Field phi = psi_eff;
    for (std::size_t idx = 0; idx < phi.values.size(); ++idx)
      phi.values[idx] += tf.phi.values[idx];
    vr_min = std::min(vr_min, variational_residual(sol.u, params, phi, psi_eff));
  }
  vr_min = std::min(vr_min, variational_residual(sol.u, params, psi_eff, psi_eff));
  out.metrics["supersolution_pairing_min"] = super_min;
  out.metrics["variational_pairing_min"] = vr_min;
  check(out, super_min >= -1e-8, "supersolution pairing nonnegative");
  check(out, vr_min >= -1e-8, "variational pairing nonnegative");

  const EnergyBoundReport rep = energy_bound_check(sol, psi_eff, ob.L, params);
  out.metrics["energy_lhs"] = rep.lhs_energy;
  out.metrics["energy_rhs_gradient"] = rep.rhs_gradient_term;
  out.metrics["energy_rhs_time"] = rep.rhs_time_term;
  out.metrics["energy_ratio"] = rep.ratio;
  check(out, rep.ratio <= 10.0, "energy bound ratio");

  if (cfg.check_init_independence)
    record_init_independence(out, [&](SweepStart start) {
      SolveOptions opts;
      opts.start = start;
      return solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae, opts).u;
    });

  write_solution(cfg.out_dir, "solution", sol, params);
  write_field_csv(psi_eff, join_path(cfg.out_dir, "obstacle.csv"));
}

// ---------------------------------------------------------------------------
// supersolution-obstacle: the wedge obstacle (concave in space, nondecreasing
// in time) is a discrete supersolution, so the constrained solution must
// coincide with it on every constrained level.

inline void scenario_supersolution_obstacle(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  const SpaceTimeGrid g = cfg.grid();
  const PParams params = cfg.pparams();
  Field psi(g, 0.0);
  for (int k = 1; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) psi.at(k, i) = hat_profile(g, g.x(i));
  const double L = 0.5 * (g.x_max - g.x_min);
  const Obstacle ob = make_obstacle(std::move(psi), L);
  const Field psi_eff = effective_obstacle(ob, ConstraintMode::ae);
  const ObstacleSolution sol =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae);

  const double max_dev = linf_dist(sol.u, psi_eff);
  out.metrics["max_deviation"] = max_dev;
  out.metrics["comp_residual"] = sol.comp_residual;
  check(out, max_dev <= 10.0 * params.newton_tol, "solution pins to the obstacle");

  // The obstacle itself must pair nonnegatively with the battery.
  const std::vector<TestFunction> battery = residual_test_battery(g, cfg.seed);
  double super_min = std::numeric_limits<double>::infinity();
  for (const TestFunction& tf : battery)
    super_min = std::min(super_min, supersolution_residual(psi_eff, params, tf));
  out.metrics["obstacle_supersolution_pairing_min"] = super_min;
  check(out, super_min >= -1e-8, "obstacle pairs as a supersolution");

  if (cfg.check_init_independence)
    record_init_independence(out, [&](SweepStart start) {
      SolveOptions opts;
      opts.start = start;
      return solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae, opts).u;
    });

  write_solution(cfg.out_dir, "solution", sol, params);
  write_field_csv(psi_eff, join_path(cfg.out_dir, "obstacle.csv"));
}

// ---------------------------------------------------------------------------
// ordered-obstacles: seeded pairs psi1 <= psi2; the constrained solutions
// must preserve the order.

inline double piecewise_linear(const std::array<double, 9>& knots, double s) {
  const double z = 8.0 * std::min(std::max(s, 0.0), 1.0);
  const int seg = std::min(7, static_cast<int>(z));
  const double f = z - seg;
  return (1.0 - f) * knots[seg] + f * knots[seg + 1];
}

inline void scenario_ordered_obstacles(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  const SpaceTimeGrid g = cfg.grid();
  const PParams params = cfg.pparams();
  const double W = g.x_max - g.x_min;
  const int pairs = 20;
  double worst = 0.0;
  double comp_max = 0.0;
  std::vector<double> violations;
  ObstacleSolution last1, last2;
  Obstacle first_ob;
  for (int pair_idx = 0; pair_idx < pairs; ++pair_idx) {
    std::mt19937 rng(cfg.seed + 1000u * static_cast<unsigned>(pair_idx));
    std::uniform_real_distribution<double> base_amp(0.2, 1.0);
    std::uniform_real_distribution<double> time_amp(0.3, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::array<double, 9> px{}, mt{}, qx{}, nt_knots{};
    for (int a = 1; a < 8; ++a) px[a] = base_amp(rng);
    for (int a = 1; a <= 8; ++a) mt[a] = time_amp(rng);
    for (int a = 1; a < 8; ++a) qx[a] = uni(rng);
    for (int a = 1; a <= 8; ++a) nt_knots[a] = uni(rng);
    Field psi1 = sample_function(g, [&](double x, double t) {
      return 0.5 * piecewise_linear(px, (x - g.x_min) / W) * piecewise_linear(mt, t / g.T);
    });
    Field psi2 = sample_function(g, [&](double x, double t) {
      return 0.5 * piecewise_linear(px, (x - g.x_min) / W) * piecewise_linear(mt, t / g.T) +
             0.3 * piecewise_linear(qx, (x - g.x_min) / W) *
                 piecewise_linear(nt_knots, t / g.T);
    });
    const Obstacle ob1 = make_obstacle(std::move(psi1), 0.8);
    const Obstacle ob2 = make_obstacle(std::move(psi2), 0.8);
    const ObstacleSolution s1 = solve_parabolic_obstacle(g, params, ob1, ConstraintMode::ae);
    const ObstacleSolution s2 = solve_parabolic_obstacle(g, params, ob2, ConstraintMode::ae);
    comp_max = std::max({comp_max, s1.comp_residual, s2.comp_residual});
    double v = 0.0;
    for (std::size_t idx = 0; idx < s1.u.values.size(); ++idx)
      v = std::max(v, s1.u.values[idx] - s2.u.values[idx]);
    violations.push_back(v);
    worst = std::max(worst, v);
    if (pair_idx == 0) first_ob = ob1;
    if (pair_idx == pairs - 1) {
      last1 = s1;
      last2 = s2;
    }
  }
  out.metrics["max_order_violation"] = worst;
  out.metrics["violations"] = violations;
  out.metrics["comp_residual_max"] = comp_max;
  check(out, worst <= 10.0 * params.newton_tol, "order preserved");
  check(out, comp_max < params.newton_tol, "complementarity residual");

  if (cfg.check_init_independence)
    record_init_independence(out, [&](SweepStart start) {
      SolveOptions opts;
      opts.start = start;
      return solve_parabolic_obstacle(g, params, first_ob, ConstraintMode::ae, opts).u;
    });

  write_solution(cfg.out_dir, "solution_lower", last1, params);
  write_solution(cfg.out_dir, "solution_upper", last2, params);
}

// ---------------------------------------------------------------------------
// counterexample: an obstacle living on a single time level.  Dropping the
// zero-measure slice gives the zero solution; keeping it pointwise forces the
// solution up to the slice, after which it decays freely.  The free decay is
// verified against an unconstrained restart from the slice level.

inline void scenario_counterexample(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  const SpaceTimeGrid g = cfg.grid();
  const PParams params = cfg.pparams();
  const int k_mid = g.nt / 2;
  const int i_lo = g.nx / 8;
  const int i_hi = g.nx - g.nx / 8;
  Field psi(g, 0.0);
  for (int i = i_lo; i <= i_hi; ++i) psi.at(k_mid, i) = 1.0;
  const Obstacle ob = make_obstacle(std::move(psi), 1.0, {k_mid});

  const ObstacleSolution ae =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae);
  const ObstacleSolution moll =
      solve_with_mollified_obstacle(g, params, ob, cfg.eps);
  const ObstacleSolution pw =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::pointwise);

  out.metrics["ae_max"] = ae.u.max_abs();
  out.metrics["mollified_max"] = moll.u.max_abs();
  out.metrics["comp_residual_max"] =
      std::max({ae.comp_residual, moll.comp_residual, pw.comp_residual});
  double slice_min = std::numeric_limits<double>::infinity();
  for (int i = i_lo; i <= i_hi; ++i)
    slice_min = std::min(slice_min, pw.u.at(k_mid, i));
  double after_max = 0.0;
  for (int i = 0; i <= g.nx; ++i)
    after_max = std::max(after_max, pw.u.at(k_mid + 1, i));
  out.metrics["pointwise_slice_min"] = slice_min;
  out.metrics["pointwise_after_max"] = after_max;
  check(out, ae.u.max_abs() <= 1e-12, "slice invisible almost everywhere");
  check(out, moll.u.max_abs() <= 1e-12, "slice invisible after mollification");
  check(out, slice_min >= 1.0 - 1e-9, "pointwise solve reaches the slice");
  check(out, after_max >= 0.1, "slice persists just after");
  check(out,
        std::max({ae.comp_residual, moll.comp_residual, pw.comp_residual}) <
            params.newton_tol,
        "complementarity residual");

  // Free decay beyond the slice must match an unconstrained restart.
  {
    const SpaceTimeGrid g2 =
        make_cylinder_grid(g.x_min, g.x_max, g.nx, g.T - g.t(k_mid), g.nt - k_mid);
    std::vector<double> initial(g.nx + 1);
    for (int i = 0; i <= g.nx; ++i) initial[i] = pw.u.at(k_mid, i);
    const Field v = solve_p_parabolic(g2, params, initial,
                                      [](double) { return std::pair{0.0, 0.0}; });
    double restart_diff = 0.0;
    for (int k2 = 0; k2 <= g2.nt; ++k2)
      for (int i = 0; i <= g.nx; ++i)
        restart_diff =
            std::max(restart_diff, std::abs(v.at(k2, i) - pw.u.at(k_mid + k2, i)));
    out.metrics["restart_max_diff"] = restart_diff;
    check(out, restart_diff <= 1e-8, "free decay matches restart");
  }

  // Admissible comparison fields for the pointwise solve: a plateau in space
  // times time profiles that all equal one at the slice level.
  {
    const double W = g.x_max - g.x_min;
    auto bx = [&](double x) {
      const double s = (x - g.x_min) / W;
      if (s <= 0.0 || s >= 1.0) return 0.0;
      return std::min(1.0, std::min(s, 1.0 - s) / 0.1);
    };
    std::vector<std::function<double(double)>> bt = {
        [](double tr) { return std::max(0.0, 1.0 - std::abs(tr - 0.5) / 0.25); },
        [](double tr) { return std::max(0.0, 1.0 - std::abs(tr - 0.5) / 0.5); },
        [](double tr) { return std::sin(kPi * tr); },
        [](double tr) { return std::min(2.0 * tr, 2.0 - 2.0 * tr); },
        [](double tr) { return std::min(2.0 * tr, 1.0); },
        [](double tr) {
          const double s = std::sin(kPi * tr);
          return s * s;
        },
    };
    const Field psi_pw = effective_obstacle(ob, ConstraintMode::pointwise);
    const Field psi_ae = effective_obstacle(ob, ConstraintMode::ae);
    double vr_min = std::numeric_limits<double>::infinity();
    for (const auto& shape : bt) {
      const Field phi = sample_function(
          g, [&](double x, double t) { return bx(x) * shape(t / g.T); });
      vr_min = std::min(vr_min, variational_residual(pw.u, params, phi, psi_pw));
      vr_min = std::min(vr_min, variational_residual(ae.u, params, phi, psi_ae));
    }
    out.metrics["variational_pairing_min"] = vr_min;
    check(out, vr_min >= -1e-8, "variational pairing nonnegative");
  }

  if (cfg.check_init_independence)
    record_init_independence(out, [&](SweepStart start) {
      SolveOptions opts;
      opts.start = start;
      return solve_parabolic_obstacle(g, params, ob, ConstraintMode::pointwise, opts).u;
    });

  write_solution(cfg.out_dir, "solution_pointwise", pw, params);
  write_solution(cfg.out_dir, "solution_ae", ae, params);
}

// ---------------------------------------------------------------------------
// mollify-convergence: the wedge obstacle with a slow smooth ramp that
// saturates halfway.  Solutions with exponentially time-mollified obstacles
// must approach the unmollified solution monotonically as eps shrinks.

inline void scenario_mollify_convergence(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  const SpaceTimeGrid g = cfg.grid();
  const PParams params = cfg.pparams();
  Field psi = sample_function(g, [&](double x, double t) {
    const double s = (t <= g.T / 2) ? std::sin(kPi * t / g.T) : 1.0;
    const double ramp = (t <= g.T / 2) ? s * s : 1.0;
    return hat_profile(g, x) * ramp;
  });
  const double L = 0.5 * (g.x_max - g.x_min);
  const Obstacle ob = make_obstacle(std::move(psi), L);
  const std::vector<double> eps_list =
      cfg.eps_list.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.025} : cfg.eps_list;

  const SweepResult sweep = convergence_sweep(g, params, ob, eps_list);
  check(out, sweep.complete, "all mollified solves converge");
  nlohmann::json records = nlohmann::json::array();
  double comp_max = sweep.complete ? sweep.reference.comp_residual : 0.0;
  for (const auto& r : sweep.records) {
    records.push_back({{"eps", r.eps},
                       {"dist_lp", r.dist_lp},
                       {"dist_grad_lp", r.dist_grad_lp},
                       {"energy", r.energy},
                       {"comp_residual", r.comp_residual}});
    comp_max = std::max(comp_max, r.comp_residual);
  }
  out.metrics["records"] = records;
  out.metrics["comp_residual_max"] = comp_max;
  if (!sweep.records.empty())
    detail::write_sweep_csv(join_path(cfg.out_dir, "sweep.csv"), sweep.records);

  if (sweep.complete && !sweep.records.empty()) {
    bool decreasing = true, grad_decreasing = true;
    for (std::size_t j = 1; j < sweep.records.size(); ++j) {
      if (sweep.records[j].dist_lp > 1.10 * sweep.records[j - 1].dist_lp)
        decreasing = false;
      if (sweep.records[j].dist_grad_lp > 1.15 * sweep.records[j - 1].dist_grad_lp)
        grad_decreasing = false;
    }
    const double ref_norm = lp_norm(sweep.reference.u, params.p);
    const double final_rel = sweep.records.back().dist_lp / ref_norm;
    out.metrics["reference_norm"] = ref_norm;
    out.metrics["final_relative_dist"] = final_rel;
    check(out, decreasing, "distances decrease");
    check(out, grad_decreasing, "gradient distances decrease");
    check(out, final_rel <= 0.02, "final distance within two percent");
    check(out, comp_max < params.newton_tol, "complementarity residual");
  }

  if (cfg.check_init_independence)
    record_init_independence(out, [&](SweepStart start) {
      SolveOptions opts;
      opts.start = start;
      return solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae, opts).u;
    });
}

// ---------------------------------------------------------------------------
// space-time-mollify: a sharp box obstacle smoothed in space (zero extension)
// and then in time; as both scales shrink together the solutions form a
// Cauchy-like sequence approaching the unsmoothed solve.

inline void scenario_space_time_mollify(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  const SpaceTimeGrid g = cfg.grid();
  const PParams params = cfg.pparams();
  Field psi(g, 0.0);
  const int ia = static_cast<int>(std::ceil(0.3 * g.nx));
  const int ib = static_cast<int>(std::floor(0.7 * g.nx));
  const int ka = static_cast<int>(std::ceil(0.4 * g.nt));
  const int kb = static_cast<int>(std::floor(0.6 * g.nt));
  for (int k = ka; k <= kb; ++k)
    for (int i = ia; i <= ib; ++i) psi.at(k, i) = 1.0;
  const Obstacle ob = make_obstacle(std::move(psi), 1.0);
  const std::vector<double> eps_list =
      cfg.eps_list.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.025} : cfg.eps_list;

  const ObstacleSolution ref =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae);
  std::vector<ConvergenceRecord> recs;
  std::vector<double> succ;
  Field prev_u;
  double max_u = 0.0;
  double comp_max = ref.comp_residual;
  for (std::size_t j = 0; j < eps_list.size(); ++j) {
    const double eps = eps_list[j];
    const double sigma = 0.4 * eps;
    const ObstacleSolution sol =
        solve_with_space_time_mollified(g, params, ob, eps, sigma);
    max_u = std::max(max_u, sol.u.max_abs());
    comp_max = std::max(comp_max, sol.comp_residual);
    ConvergenceRecord rec;
    rec.eps = eps;
    rec.dist_lp = lp_dist(sol.u, ref.u, params.p);
    rec.dist_grad_lp = grad_lp_dist(sol.u, ref.u, params.p);
    rec.energy = energy(sol.u, params.p);
    rec.comp_residual = sol.comp_residual;
    recs.push_back(rec);
    if (j > 0) succ.push_back(lp_dist(sol.u, prev_u, params.p));
    prev_u = sol.u;
  }
  out.metrics["dist_to_reference"] = nlohmann::json::array();
  for (const auto& r : recs) out.metrics["dist_to_reference"].push_back(r.dist_lp);
  out.metrics["successive_dists"] = succ;
  out.metrics["max_u"] = max_u;
  out.metrics["comp_residual_max"] = comp_max;

  bool cauchy = true;
  for (std::size_t j = 1; j < succ.size(); ++j)
    if (succ[j] > 1.15 * succ[j - 1]) cauchy = false;
  check(out, cauchy, "successive distances decrease");
  check(out, recs.back().dist_lp <= recs.front().dist_lp,
        "approaches the unsmoothed solution");
  check(out, max_u <= ob.L + 1e-9, "uniform bound");
  check(out, comp_max < params.newton_tol, "complementarity residual");
  detail::write_sweep_csv(join_path(cfg.out_dir, "sweep.csv"), recs);

  if (cfg.check_init_independence)
    record_init_independence(out, [&](SweepStart start) {
      SolveOptions opts;
      opts.start = start;
      return solve_with_space_time_mollified(g, params, ob, eps_list.front(),
                                             0.4 * eps_list.front(), opts)
          .u;
    });
}

// ---------------------------------------------------------------------------
// elliptic-envelope: for the stationary problem the solution is the least
// concave majorant of the obstacle, for every exponent p.

inline void scenario_elliptic_envelope(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  PParams params = cfg.pparams();
  const int nx = cfg.nx;
  const double hx = (cfg.x_max - cfg.x_min) / nx;
  const double p_values[3] = {2.0, 3.0, 4.0};
  double worst_env = 0.0, worst_pdiff = 0.0;
  std::vector<double> last_psi, last_v, last_env;
  for (int case_idx = 0; case_idx < 10; ++case_idx) {
    std::mt19937 rng(cfg.seed + 77u * static_cast<unsigned>(case_idx));
    std::uniform_real_distribution<double> interior(-0.2, 0.5);
    std::uniform_real_distribution<double> ends(-0.3, -0.05);
    std::array<double, 9> knots{};
    knots[0] = ends(rng);
    knots[8] = ends(rng);
    for (int a = 1; a < 8; ++a) knots[a] = interior(rng);
    std::vector<double> psi(nx + 1);
    for (int i = 0; i <= nx; ++i)
      psi[i] = piecewise_linear(knots, static_cast<double>(i) / nx);
    const std::vector<double> env = concave_envelope(psi);
    std::vector<std::vector<double>> solutions;
    for (double pv : p_values) {
      params.p = pv;
      const std::vector<double> v =
          solve_elliptic_obstacle(cfg.x_min, cfg.x_max, nx, params, psi);
      for (int i = 0; i <= nx; ++i)
        worst_env = std::max(worst_env, std::abs(v[i] - env[i]));
      solutions.push_back(v);
    }
    for (std::size_t a = 1; a < solutions.size(); ++a)
      for (int i = 0; i <= nx; ++i)
        worst_pdiff =
            std::max(worst_pdiff, std::abs(solutions[a][i] - solutions[0][i]));
    if (case_idx == 9) {
      last_psi = psi;
      last_v = solutions[1];
      last_env = env;
    }
  }
  out.metrics["max_envelope_error"] = worst_env;
  out.metrics["max_p_difference"] = worst_pdiff;
  check(out, worst_env <= 1e-6, "solution matches the concave envelope");
  check(out, worst_pdiff <= 1e-6, "solution independent of p");

  std::vector<std::vector<double>> rows;
  for (int i = 0; i <= nx; ++i)
    rows.push_back({cfg.x_min + i * hx, last_psi[i], last_v[i], last_env[i]});
  detail::write_table_csv(join_path(cfg.out_dir, "envelope.csv"),
                          {"x", "psi", "v", "envelope"}, rows);

  if (cfg.check_init_independence) {
    params.p = 3.0;
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> interior(-0.2, 0.5);
    std::uniform_real_distribution<double> ends(-0.3, -0.05);
    std::array<double, 9> knots{};
    knots[0] = ends(rng);
    knots[8] = ends(rng);
    for (int a = 1; a < 8; ++a) knots[a] = interior(rng);
    std::vector<double> psi(nx + 1);
    for (int i = 0; i <= nx; ++i)
      psi[i] = piecewise_linear(knots, static_cast<double>(i) / nx);
    const std::vector<double> a =
        solve_elliptic_obstacle(cfg.x_min, cfg.x_max, nx, params, psi, SweepStart::zero);
    const std::vector<double> b =
        solve_elliptic_obstacle(cfg.x_min, cfg.x_max, nx, params, psi, SweepStart::upper);
    double d = 0.0;
    for (int i = 0; i <= nx; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    out.metrics["init_independence_max"] = d;
    check(out, d <= 1e-9, "initialization independence");
  }
}

// ---------------------------------------------------------------------------
// elliptic-stability: shrinking perturbations of the obstacle produce
// shrinking W^{1,p} changes of the stationary solution.

inline void scenario_elliptic_stability(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  const PParams params = cfg.pparams();
  const int nx = cfg.nx;
  const double knots_x[7] = {0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 1.0};
  const double knots_y[7] = {-0.05, 0.25, 0.05, 0.3, 0.05, 0.2, -0.05};
  auto base_at = [&](double s) {
    int seg = 0;
    while (seg < 5 && s > knots_x[seg + 1]) ++seg;
    const double f = (s - knots_x[seg]) / (knots_x[seg + 1] - knots_x[seg]);
    return (1.0 - f) * knots_y[seg] + f * knots_y[seg + 1];
  };
  auto tent_at = [&](double s) {
    return std::max(0.0, 1.0 - std::abs(s - 0.45) / 0.15);
  };
  std::vector<double> base(nx + 1);
  for (int i = 0; i <= nx; ++i) base[i] = base_at(static_cast<double>(i) / nx);

  const double A = 0.003;
  const int js[5] = {1, 2, 4, 8, 16};
  std::vector<std::vector<double>> perturbed;
  for (int j : js) {
    std::vector<double> psi = base;
    for (int i = 0; i <= nx; ++i)
      psi[i] += (A / j) * tent_at(static_cast<double>(i) / nx);
    perturbed.push_back(std::move(psi));
  }
  const std::vector<double> dists =
      elliptic_stability_sweep(cfg.x_min, cfg.x_max, nx, params, base, perturbed);
  out.metrics["dists"] = dists;
  bool decreasing = true;
  for (std::size_t j = 1; j < dists.size(); ++j)
    if (!(dists[j] < dists[j - 1])) decreasing = false;
  check(out, decreasing, "distances strictly decrease");
  check(out, dists.back() <= 1e-3, "final distance below threshold");

  // Alternating-sign perturbations, recorded but not asserted monotone.
  std::vector<std::vector<double>> alternating;
  for (std::size_t m = 0; m < 5; ++m) {
    std::vector<double> psi = base;
    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i <= nx; ++i)
      psi[i] += sgn * (A / js[m]) * tent_at(static_cast<double>(i) / nx);
    alternating.push_back(std::move(psi));
  }
  out.metrics["alternating_dists"] =
      elliptic_stability_sweep(cfg.x_min, cfg.x_max, nx, params, base, alternating);

  std::vector<std::vector<double>> rows;
  for (std::size_t m = 0; m < dists.size(); ++m)
    rows.push_back({static_cast<double>(js[m]), A / js[m], dists[m]});
  detail::write_table_csv(join_path(cfg.out_dir, "stability.csv"),
                          {"j", "amplitude", "dist_w1p"}, rows);
}

// ---------------------------------------------------------------------------
// barenblatt: unconstrained marching against the closed-form source solution,
// on two grids, with the error required to shrink under refinement.

inline void scenario_barenblatt(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  const PParams params = cfg.pparams();
  const double t0 = 0.5;
  const double C = 0.35;
  const double horizon = cfg.T;
  const double radius = barenblatt_support_radius(t0 + horizon, params.p, C);
  out.metrics["support_radius_final"] = radius;
  check(out, radius < cfg.x_max, "support stays inside the domain");

  auto run_grid = [&](int nx, int nt, double& err, double& drift, double& seconds) {
    const SpaceTimeGrid g = make_cylinder_grid(cfg.x_min, cfg.x_max, nx, horizon, nt);
    std::vector<double> initial(nx + 1);
    for (int i = 0; i <= nx; ++i)
      initial[i] = barenblatt_value(g.x(i), t0, params.p, C);
    const auto start = std::chrono::steady_clock::now();
    const Field u = solve_p_parabolic(g, params, initial,
                                      [](double) { return std::pair{0.0, 0.0}; });
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    err = 0.0;
    for (int k = 1; k <= g.nt; ++k)
      for (int i = 0; i <= g.nx; ++i)
        err = std::max(err, std::abs(u.at(k, i) -
                                     barenblatt_value(g.x(i), t0 + g.t(k), params.p, C)));
    auto mass = [&](int k) {
      double s = 0.5 * (u.at(k, 0) + u.at(k, g.nx));
      for (int i = 1; i < g.nx; ++i) s += u.at(k, i);
      return s * g.hx;
    };
    drift = std::abs(mass(g.nt) - mass(0));
    if (nx == cfg.nx) {
      write_field_csv(u, detail::join_path(cfg.out_dir, "solution.csv"));
      std::vector<std::vector<double>> rows;
      for (int i = 0; i <= g.nx; ++i)
        rows.push_back({g.x(i), u.at(g.nt, i),
                        barenblatt_value(g.x(i), t0 + horizon, params.p, C)});
      detail::write_table_csv(detail::join_path(cfg.out_dir, "final_profile.csv"),
                              {"x", "numeric", "exact"}, rows);
    }
    return u;
  };

  double err_coarse = 0.0, err_fine = 0.0, drift_c = 0.0, drift_f = 0.0;
  double sec_c = 0.0, sec_f = 0.0;
  run_grid(cfg.nx / 2, cfg.nt / 2, err_coarse, drift_c, sec_c);
  run_grid(cfg.nx, cfg.nt, err_fine, drift_f, sec_f);
  const double ratio = err_coarse / err_fine;
  out.metrics["err_coarse"] = err_coarse;
  out.metrics["err_fine"] = err_fine;
  out.metrics["refinement_ratio"] = ratio;
  out.metrics["mass_drift_coarse"] = drift_c;
  out.metrics["mass_drift_fine"] = drift_f;
  out.metrics["seconds_coarse"] = sec_c;
  out.metrics["seconds_fine"] = sec_f;
  check(out, err_fine <= 0.02, "fine-grid error below threshold");
  check(out, ratio >= 1.7, "error shrinks under refinement");
  check(out, drift_f <= 1e-6, "mass conserved");
}

// ---------------------------------------------------------------------------
// lsc-from-below: obstacles increasing to a target; the solutions increase
// and their limit lands within tolerance of the target solution.

inline void scenario_lsc_from_below(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  const SpaceTimeGrid g = cfg.grid();
  const PParams params = cfg.pparams();
  const double L = 0.5 * (g.x_max - g.x_min);
  auto stage_field = [&](double scale) {
    return sample_function(g, [&](double x, double t) {
      const double ramp = std::min(1.0, 2.0 * t / g.T);
      return scale * hat_profile(g, x) * ramp;
    });
  };
  const Obstacle target = detail::make_obstacle(stage_field(1.0), L);
  const ObstacleSolution u_target =
      solve_parabolic_obstacle(g, params, target, ConstraintMode::ae);

  Field prev;
  bool increasing = true;
  std::vector<double> stage_dists;
  ObstacleSolution last_sol;
  double comp_max = u_target.comp_residual;
  for (int stage = 1; stage <= 6; ++stage) {
    const double scale = 1.0 - std::pow(2.0, -stage);
    const Obstacle ob = detail::make_obstacle(stage_field(scale), L);
    const ObstacleSolution sol =
        solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae);
    comp_max = std::max(comp_max, sol.comp_residual);
    if (stage > 1)
      for (std::size_t idx = 0; idx < prev.values.size(); ++idx)
        if (sol.u.values[idx] < prev.values[idx] - 10.0 * params.newton_tol)
          increasing = false;
    stage_dists.push_back(lp_dist(sol.u, u_target.u, params.p));
    prev = sol.u;
    if (stage == 6) last_sol = sol;
  }
  out.metrics["stage_dists"] = stage_dists;
  out.metrics["final_dist"] = stage_dists.back();
  out.metrics["threshold"] = 0.02 * L;
  out.metrics["comp_residual_max"] = comp_max;
  check(out, increasing, "solutions increase with the obstacles");
  check(out, stage_dists.back() <= 0.02 * L, "limit reaches the target solution");
  check(out, comp_max < params.newton_tol, "complementarity residual");

  if (cfg.check_init_independence)
    record_init_independence(out, [&](SweepStart start) {
      SolveOptions opts;
      opts.start = start;
      return solve_parabolic_obstacle(g, params, target, ConstraintMode::ae, opts).u;
    });

  write_solution(cfg.out_dir, "solution", last_sol, params);
  write_field_csv(effective_obstacle(target, ConstraintMode::ae),
                  join_path(cfg.out_dir, "obstacle.csv"));
}

// ---------------------------------------------------------------------------
// usc-pointwise: tent obstacles shrinking in time width down to a single
// level; the solutions decrease and land on the pointwise slice solution.

inline void scenario_usc_pointwise(const ScenarioConfig& cfg, ScenarioOutcome& out) {
  const SpaceTimeGrid g = cfg.grid();
  const PParams params = cfg.pparams();
  const int k_mid = g.nt / 2;
  const double W = g.x_max - g.x_min;
  auto bx = [&](double x) {
    const double s = (x - g.x_min) / W;
    if (s <= 0.15 || s >= 0.85) return 0.0;
    return std::min(1.0, std::min(s - 0.15, 0.85 - s) / 0.1);
  };

  Field slice_psi(g, 0.0);
  for (int i = 0; i <= g.nx; ++i) slice_psi.at(k_mid, i) = bx(g.x(i));
  const Obstacle slice_ob = detail::make_obstacle(std::move(slice_psi), 1.0, {k_mid});
  const ObstacleSolution pw =
      solve_parabolic_obstacle(g, params, slice_ob, ConstraintMode::pointwise);

  const int widths[4] = {8, 4, 2, 1};
  Field prev;
  bool decreasing = true;
  std::vector<double> dists_to_pw;
  double comp_max = pw.comp_residual;
  for (int m = 0; m < 4; ++m) {
    Field psi(g, 0.0);
    for (int k = k_mid - widths[m] + 1; k <= k_mid + widths[m] - 1; ++k) {
      const double tent = 1.0 - std::abs(k - k_mid) / static_cast<double>(widths[m]);
      for (int i = 0; i <= g.nx; ++i) psi.at(k, i) = bx(g.x(i)) * tent;
    }
    const Obstacle ob = detail::make_obstacle(std::move(psi), 1.0);
    const ObstacleSolution sol =
        solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae);
    comp_max = std::max(comp_max, sol.comp_residual);
    if (m > 0)
      for (std::size_t idx = 0; idx < prev.values.size(); ++idx)
        if (sol.u.values[idx] > prev.values[idx] + 10.0 * params.newton_tol)
          decreasing = false;
    dists_to_pw.push_back(lp_dist(sol.u, pw.u, params.p));
    prev = sol.u;
  }
  out.metrics["dists_to_pointwise"] = dists_to_pw;
  out.metrics["final_dist"] = dists_to_pw.back();
  out.metrics["comp_residual_max"] = comp_max;
  check(out, decreasing, "solutions decrease with the obstacles");
  check(out, dists_to_pw.back() <= 1e-12, "narrowest tent matches the pointwise solve");
  check(out, dists_to_pw.back() <= 0.02 * slice_ob.L, "limit within tolerance");
  check(out, comp_max < params.newton_tol, "complementarity residual");

  if (cfg.check_init_independence)
    record_init_independence(out, [&](SweepStart start) {
      SolveOptions opts;
      opts.start = start;
      return solve_parabolic_obstacle(g, params, slice_ob, ConstraintMode::pointwise, opts).u;
    });

  write_solution(cfg.out_dir, "solution_pointwise", pw, params);
  write_field_csv(effective_obstacle(slice_ob, ConstraintMode::pointwise),
                  join_path(cfg.out_dir, "obstacle.csv"));
}

}  // namespace detail

// Runs one scenario and always writes <out_dir>/summary.json, including when
// a check fails or a solver throws (the summary then names what failed).
inline ScenarioOutcome run_scenario(const ScenarioConfig& cfg) {
  if (!is_known_scenario(cfg.name))
    throw std::invalid_argument("unknown scenario '" + cfg.name + "'");
  if (cfg.out_dir.empty())
    throw std::invalid_argument("run_scenario: out_dir must be set");
  std::filesystem::create_directories(cfg.out_dir);
  ScenarioOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (cfg.name == "continuous-obstacle")
      detail::scenario_continuous_obstacle(cfg, out);
    else if (cfg.name == "supersolution-obstacle")
      detail::scenario_supersolution_obstacle(cfg, out);
    else if (cfg.name == "ordered-obstacles")
      detail::scenario_ordered_obstacles(cfg, out);
    else if (cfg.name == "counterexample")
      detail::scenario_counterexample(cfg, out);
    else if (cfg.name == "mollify-convergence")
      detail::scenario_mollify_convergence(cfg, out);
    else if (cfg.name == "space-time-mollify")
      detail::scenario_space_time_mollify(cfg, out);
    else if (cfg.name == "elliptic-envelope")
      detail::scenario_elliptic_envelope(cfg, out);
    else if (cfg.name == "elliptic-stability")
      detail::scenario_elliptic_stability(cfg, out);
    else if (cfg.name == "barenblatt")
      detail::scenario_barenblatt(cfg, out);
    else if (cfg.name == "lsc-from-below")
      detail::scenario_lsc_from_below(cfg, out);
    else if (cfg.name == "usc-pointwise")
      detail::scenario_usc_pointwise(cfg, out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.failing = e.what();
  }
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json summary{{"scenario", cfg.name},
                         {"pass", out.pass},
                         {"failing_check", out.pass ? nlohmann::json() : nlohmann::json(out.failing)},
                         {"elapsed_seconds", out.elapsed_seconds},
                         {"config", config_to_json(cfg)},
                         {"metrics", out.metrics}};
  std::ofstream os(detail::join_path(cfg.out_dir, "summary.json"));
  os << summary.dump(2) << '\n';
  return out;
}

}  // namespace olab
