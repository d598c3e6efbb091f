#include <catch2/catch_amalgamated.hpp>
#include <obstacle_lab/obstacle.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace olab;

namespace {

// Hat obstacle scaled by a time ramp starting at zero: concave in space,
// nondecreasing in time, zero on the parabolic boundary.
Obstacle ramped_hat(const SpaceTimeGrid& g, double height_fraction = 1.0) {
  Obstacle ob;
  ob.L = 0.5 * (g.x_max - g.x_min);
  ob.psi = sample_function(g, [&](double x, double t) {
    const double hat = std::min(x - g.x_min, g.x_max - x);
    return height_fraction * hat * std::min(1.0, 2.0 * t / g.T);
  });
  ob.support = Cylinder{1, g.nx - 1, 1, g.nt};
  validate_obstacle(ob);
  return ob;
}

}  // namespace

TEST_CASE("obstacle validation names the offending node") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 8, 1.0, 8);

  SECTION("negative values are rejected") {
    Obstacle ob;
    ob.psi = Field(g, 0.0);
    ob.support = Cylinder{1, 7, 1, 8};
    ob.psi.at(3, 2) = -0.5;
    try {
      validate_obstacle(ob);
      FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      REQUIRE(msg.find("i=2") != std::string::npos);
      REQUIRE(msg.find("k=3") != std::string::npos);
    }
  }

  SECTION("values above the bound are rejected") {
    Obstacle ob;
    ob.psi = Field(g, 0.0);
    ob.L = 1.0;
    ob.support = Cylinder{1, 7, 1, 8};
    ob.psi.at(4, 4) = 1.5;
    REQUIRE_THROWS_AS(validate_obstacle(ob), std::invalid_argument);
  }

  SECTION("support must leave the walls and the initial level free") {
    Obstacle ob;
    ob.psi = Field(g, 0.0);
    ob.support = Cylinder{0, 7, 1, 8};
    REQUIRE_THROWS_AS(validate_obstacle(ob), std::invalid_argument);
    ob.support = Cylinder{1, 8, 1, 8};
    REQUIRE_THROWS_AS(validate_obstacle(ob), std::invalid_argument);
    ob.support = Cylinder{1, 7, 0, 8};
    REQUIRE_THROWS_AS(validate_obstacle(ob), std::invalid_argument);
  }

  SECTION("mass outside the declared support is rejected") {
    Obstacle ob;
    ob.psi = Field(g, 0.0);
    ob.support = Cylinder{2, 6, 2, 6};
    ob.psi.at(7, 4) = 0.5;  // inside the cylinder, outside the support box
    REQUIRE_THROWS_AS(validate_obstacle(ob), std::invalid_argument);
  }

  SECTION("thin slices must lie within the support rows") {
    Obstacle ob;
    ob.psi = Field(g, 0.0);
    ob.support = Cylinder{2, 6, 2, 6};
    ob.thin_slices = {7};
    REQUIRE_THROWS_AS(validate_obstacle(ob), std::invalid_argument);
  }
}

TEST_CASE("effective obstacle releases thin slices in ae mode only") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 8, 1.0, 8);
  Obstacle ob;
  ob.psi = Field(g, 0.0);
  ob.support = Cylinder{2, 6, 2, 6};
  ob.thin_slices = {4};
  for (int i = 2; i <= 6; ++i) {
    ob.psi.at(3, i) = 0.25;
    ob.psi.at(4, i) = 0.5;
  }
  validate_obstacle(ob);

  const Field ae = effective_obstacle(ob, ConstraintMode::ae);
  const Field pw = effective_obstacle(ob, ConstraintMode::pointwise);
  for (int i = 0; i <= 8; ++i) {
    REQUIRE(ae.at(4, i) == 0.0);
    REQUIRE(pw.at(4, i) == ob.psi.at(4, i));
    REQUIRE(ae.at(3, i) == ob.psi.at(3, i));
  }
}

TEST_CASE("obstacles positive on the parabolic boundary are rejected") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 8, 1.0, 8);
  PParams params;
  Field psi(g, 0.0);
  psi.at(3, 0) = 0.1;  // left wall at a later time
  try {
    solve_obstacle_field(g, params, psi, 1.0, ConstraintMode::ae);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("i=0") != std::string::npos);
    REQUIRE(msg.find("k=3") != std::string::npos);
  }
}

TEST_CASE("a concave nondecreasing obstacle is its own solution") {
  // The ramped hat is a discrete supersolution, so the least supersolution
  // above it is the obstacle itself; the solver must return it bit-for-bit
  // up to the complementarity tolerance.
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 32, 1.0, 64);
  PParams params;
  params.p = 3.0;
  params.omega = 1.7;
  const Obstacle ob = ramped_hat(g);
  const ObstacleSolution sol =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae);
  double worst = 0.0;
  for (std::size_t idx = 0; idx < sol.u.values.size(); ++idx)
    worst = std::max(worst, std::abs(sol.u.values[idx] - ob.psi.values[idx]));
  REQUIRE(worst <= 10.0 * params.newton_tol);
  REQUIRE(sol.comp_residual < params.newton_tol);
}

TEST_CASE("solutions respect obstacle ordering") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 16, 1.0, 16);
  PParams params;
  params.p = 3.0;
  const Obstacle lo = ramped_hat(g, 0.6);
  const Obstacle hi = ramped_hat(g, 1.0);
  const ObstacleSolution ulo =
      solve_parabolic_obstacle(g, params, lo, ConstraintMode::ae);
  const ObstacleSolution uhi =
      solve_parabolic_obstacle(g, params, hi, ConstraintMode::ae);
  for (std::size_t idx = 0; idx < ulo.u.values.size(); ++idx)
    REQUIRE(ulo.u.values[idx] <= uhi.u.values[idx] + 10.0 * params.newton_tol);
}

TEST_CASE("solutions dominate the obstacle and stay within the bound") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 16, 1.0, 16);
  PParams params;
  params.p = 3.0;
  const Obstacle ob = ramped_hat(g);
  const ObstacleSolution sol =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae);
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) {
      REQUIRE(sol.u.at(k, i) >= ob.psi.at(k, i) - 1e-15);
      REQUIRE(sol.u.at(k, i) <= ob.L + 1e-12);
    }
}

TEST_CASE("active mask marks exactly the pinned nodes") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 16, 1.0, 16);
  PParams params;
  params.p = 3.0;
  const Obstacle ob = ramped_hat(g);
  const ObstacleSolution sol =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae);
  REQUIRE(sol.active.size() == sol.u.values.size());
  REQUIRE(static_cast<int>(sol.iterations.size()) == g.nt);
  REQUIRE(static_cast<int>(sol.active_count.size()) == g.nt);
  for (int k = 1; k <= g.nt; ++k) {
    int count = 0;
    for (int i = 1; i < g.nx; ++i) {
      if (sol.active_at(k, i)) {
        ++count;
        REQUIRE(sol.u.at(k, i) <= ob.psi.at(k, i) + 1e-12);
      }
    }
    REQUIRE(count == sol.active_count[k - 1]);
    REQUIRE(sol.iterations[k - 1] >= 1);
  }
}

TEST_CASE("a slice obstacle binds pointwise but not almost everywhere") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 16, 1.0, 16);
  PParams params;
  params.p = 3.0;
  Obstacle ob;
  ob.psi = Field(g, 0.0);
  ob.support = Cylinder{4, 12, 8, 8};
  ob.thin_slices = {8};
  for (int i = 4; i <= 12; ++i) ob.psi.at(8, i) = 0.5;
  validate_obstacle(ob);

  const ObstacleSolution ae =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae);
  REQUIRE(ae.u.max_abs() <= 1e-12);  // released slice leaves nothing behind

  const ObstacleSolution pw =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::pointwise);
  for (int i = 4; i <= 12; ++i)
    REQUIRE(pw.u.at(8, i) >= 0.5 - 1e-12);
  REQUIRE(pw.u.at(9, 8) > 0.01);  // the pulse persists past the slice
  for (int i = 0; i <= g.nx; ++i)
    REQUIRE(pw.u.at(7, i) <= 1e-12);  // and is invisible before it
}

TEST_CASE("mollified obstacle solves remain feasible") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 16, 1.0, 32);
  PParams params;
  params.p = 3.0;
  const Obstacle ob = ramped_hat(g);
  const ObstacleSolution sol = solve_with_mollified_obstacle(g, params, ob, 0.1);
  const Field psi_eps =
      exp_time_convolve(effective_obstacle(ob, ConstraintMode::ae), 0.1);
  for (std::size_t idx = 0; idx < sol.u.values.size(); ++idx) {
    REQUIRE(sol.u.values[idx] >= psi_eps.values[idx] - 1e-15);
    REQUIRE(sol.u.values[idx] <= ob.L + 1e-12);
  }
}

TEST_CASE("space-time mollified solves reject oversized kernels") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 16, 1.0, 16);
  PParams params;
  const Obstacle ob = ramped_hat(g);
  REQUIRE_THROWS_AS(
      solve_with_space_time_mollified(g, params, ob, 0.1, /*sigma=*/0.6),
      std::invalid_argument);
}

TEST_CASE("concave envelope hand oracles") {
  SECTION("a single spike produces a tent") {
    std::vector<double> psi(9, 0.0);
    psi[4] = 1.0;
    const std::vector<double> env = concave_envelope(psi);
    for (int i = 0; i <= 8; ++i) {
      const double expect = (i <= 4) ? i / 4.0 : (8 - i) / 4.0;
      REQUIRE(env[i] == Catch::Approx(expect).margin(1e-14));
    }
  }

  SECTION("nonpositive data has the zero envelope") {
    std::vector<double> psi = {0.0, -1.0, -0.5, -2.0, 0.0};
    const std::vector<double> env = concave_envelope(psi);
    for (double v : env) REQUIRE(v == 0.0);
  }

  SECTION("the envelope dominates the data and is concave") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> uni(-0.3, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> psi(33);
      for (double& v : psi) v = uni(rng);
      psi.front() = psi.back() = 0.0;
      const std::vector<double> env = concave_envelope(psi);
      for (std::size_t i = 0; i < psi.size(); ++i)
        REQUIRE(env[i] >= std::max(psi[i], 0.0) - 1e-12);
      for (std::size_t i = 1; i + 1 < env.size(); ++i)
        REQUIRE(env[i] >= 0.5 * (env[i - 1] + env[i + 1]) - 1e-12);
    }
  }
}

TEST_CASE("stationary solves equal the concave envelope for every exponent") {
  const int nx = 64;
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> uni(-0.2, 0.8);
  std::vector<double> psi(nx + 1);
  for (double& v : psi) v = uni(rng);
  psi.front() = psi.back() = 0.0;
  const std::vector<double> env = concave_envelope(psi);

  std::vector<double> prev;
  for (double p : {2.0, 3.0, 4.0}) {
    PParams params;
    params.p = p;
    params.omega = 1.9;
    params.newton_tol = 1e-9;
    params.max_inner_iters = 200000;
    const std::vector<double> v = solve_elliptic_obstacle(0.0, 1.0, nx, params, psi);
    for (int i = 0; i <= nx; ++i)
      REQUIRE(v[i] == Catch::Approx(env[i]).margin(1e-6));
    if (!prev.empty())
      for (int i = 0; i <= nx; ++i)
        REQUIRE(v[i] == Catch::Approx(prev[i]).margin(1e-6));
    prev = v;
  }
}

TEST_CASE("stationary solver rejects infeasible endpoints") {
  PParams params;
  std::vector<double> psi(17, 0.0);
  psi[0] = 0.5;
  REQUIRE_THROWS_AS(solve_elliptic_obstacle(0.0, 1.0, 16, params, psi),
                    std::invalid_argument);
  psi[0] = 0.0;
  psi[16] = 0.5;
  REQUIRE_THROWS_AS(solve_elliptic_obstacle(0.0, 1.0, 16, params, psi),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      solve_elliptic_obstacle(0.0, 1.0, 16, params, std::vector<double>(5, 0.0)),
      std::invalid_argument);
}

TEST_CASE("stability sweep reports shrinking distances") {
  const int nx = 64;
  std::vector<double> base(nx + 1, 0.0);
  for (int i = 0; i <= nx; ++i) {
    const double s = static_cast<double>(i) / nx;
    base[i] = 0.4 * std::max(0.0, 1.0 - std::abs(s - 0.5) / 0.3);
  }
  PParams params;
  params.omega = 1.9;
  params.newton_tol = 1e-9;
  params.max_inner_iters = 200000;
  std::vector<std::vector<double>> perturbed;
  for (int j : {1, 2, 4}) {
    std::vector<double> psi = base;
    for (int i = 0; i <= nx; ++i) {
      const double s = static_cast<double>(i) / nx;
      psi[i] += (0.01 / j) * std::max(0.0, 1.0 - std::abs(s - 0.5) / 0.2);
    }
    perturbed.push_back(std::move(psi));
  }
  const std::vector<double> dists =
      elliptic_stability_sweep(0.0, 1.0, nx, params, base, perturbed);
  REQUIRE(dists.size() == 3);
  REQUIRE(dists[0] > dists[1]);
  REQUIRE(dists[1] > dists[2]);
  REQUIRE(dists[2] > 0.0);
}

TEST_CASE("start strategy does not change the answer") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 16, 1.0, 16);
  PParams params;
  params.p = 3.0;
  const Obstacle ob = ramped_hat(g);
  SolveOptions zero_start, upper_start;
  zero_start.start = SweepStart::zero;
  upper_start.start = SweepStart::upper;
  const ObstacleSolution a =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae, zero_start);
  const ObstacleSolution b =
      solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae, upper_start);
  double worst = 0.0;
  for (std::size_t idx = 0; idx < a.u.values.size(); ++idx)
    worst = std::max(worst, std::abs(a.u.values[idx] - b.u.values[idx]));
  REQUIRE(worst <= 10.0 * params.newton_tol);
}
