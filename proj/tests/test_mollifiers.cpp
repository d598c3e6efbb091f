#include <catch2/catch_amalgamated.hpp>
#include <obstacle_lab/mollifiers.hpp>

#include <cmath>
#include <random>

using namespace olab;

namespace {

Field random_field(const SpaceTimeGrid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Field f(g, 0.0);
  for (double& v : f.values) v = uni(rng);
  return f;
}

}  // namespace

TEST_CASE("exponential convolution of a constant approaches the constant") {
  // For u identically one the recurrence has the closed form
  //   y_k = kappa * (1 - e^{-a k}),   kappa = a e^{-a} / (1 - e^{-a}),
  // with a = ht/eps.  Checked against the solver output node by node.
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 4, 1.0, 20);
  const double eps = 0.25;
  const double a = g.ht / eps;
  const double kappa = a * std::exp(-a) / (1.0 - std::exp(-a));
  const Field u(g, 1.0);
  const Field y = exp_time_convolve(u, eps);
  for (int k = 0; k <= g.nt; ++k) {
    const double expect = kappa * (1.0 - std::exp(-a * k));
    for (int i = 0; i <= g.nx; ++i)
      REQUIRE(y.at(k, i) == Catch::Approx(expect).margin(1e-13));
  }
  // The bias factor kappa is strictly below one and tends to one as eps grows.
  REQUIRE(kappa < 1.0);
  REQUIRE(1.0 - kappa <= 0.5 * a * 1.0000001);
}

TEST_CASE("exponential convolution of an impulse decays geometrically") {
  // A unit impulse at level j produces y_k = a e^{-a (k - j)} for k > j.
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 4, 1.0, 16);
  const double eps = 0.5;
  const double a = g.ht / eps;
  const int j = 5;
  Field u(g, 0.0);
  for (int i = 0; i <= g.nx; ++i) u.at(j, i) = 1.0;
  const Field y = exp_time_convolve(u, eps);
  for (int k = 0; k <= g.nt; ++k) {
    const double expect = (k > j) ? a * std::exp(-a * (k - j)) : 0.0;
    REQUIRE(y.at(k, 2) == Catch::Approx(expect).margin(1e-14));
  }
}

TEST_CASE("exponential convolution is an Lp contraction") {
  // The recurrence weights are nonnegative and sum below one, so every
  // Lp norm of the output stays below the input norm.
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 8, 1.0, 64);
  for (unsigned seed : {1u, 2u, 3u}) {
    const Field u = random_field(g, seed);
    for (double eps : {0.5, 0.1, 0.05}) {
      const Field y = exp_time_convolve(u, eps);
      for (double p : {2.0, 3.0, 4.0}) {
        double nu = 0.0, ny = 0.0;
        for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
          nu += std::pow(std::abs(u.values[idx]), p);
          ny += std::pow(std::abs(y.values[idx]), p);
        }
        REQUIRE(ny <= nu * (1.0 + 1e-12));
      }
      REQUIRE(y.max_abs() <= u.max_abs() * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("exponential convolution nearly satisfies its defining equation") {
  // The continuum object solves eps * y' = u - y.  The discrete recurrence
  // satisfies the same identity up to O(ht) per node.
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 8, 1.0, 256);
  const double eps = 1.0;
  const Field u = sample_function(
      g, [](double x, double t) { return std::sin(5 * x + 3 * t); });
  const Field y = exp_time_convolve(u, eps);
  double worst = 0.0;
  for (int k = 0; k < g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) {
      const double lhs = (y.at(k + 1, i) - y.at(k, i)) / g.ht;
      const double rhs = (u.at(k, i) - y.at(k, i)) / eps;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  REQUIRE(worst <= 2.0 * g.ht * u.max_abs() / (eps * eps));
}

TEST_CASE("friedrichs weights are a normalized symmetric bump") {
  SECTION("hand-computed three-point kernel at sigma = 1.5 h") {
    // Offsets {-h, 0, h}: zeta(0) = e^{-1}, zeta(h) = exp(-sigma^2/(sigma^2-h^2))
    // with sigma = 1.5, h = 1 gives ratio e^{-0.8}; normalizing yields
    // w0 = 1/(1 + 2 e^{-0.8}), w+- = e^{-0.8} w0.
    const std::vector<double> w = friedrichs_weights(1.5, 1.0);
    REQUIRE(w.size() == 3);
    const double w0 = 1.0 / (1.0 + 2.0 * std::exp(-0.8));
    REQUIRE(w[1] == Catch::Approx(w0).epsilon(1e-12));
    REQUIRE(w[0] == Catch::Approx(std::exp(-0.8) * w0).epsilon(1e-12));
    REQUIRE(w[0] == w[2]);
  }

  SECTION("weights always sum to one and stay symmetric") {
    for (double sigma : {0.3, 1.0, 2.7, 5.5}) {
      const std::vector<double> w = friedrichs_weights(sigma, 1.0);
      REQUIRE(w.size() % 2 == 1);
      double sum = 0.0;
      for (double v : w) {
        REQUIRE(v > 0.0);
        sum += v;
      }
      REQUIRE(sum == Catch::Approx(1.0).epsilon(1e-13));
      for (std::size_t j = 0; j < w.size() / 2; ++j)
        REQUIRE(w[j] == w[w.size() - 1 - j]);
    }
  }

  SECTION("support narrower than one step collapses to the identity") {
    const std::vector<double> w = friedrichs_weights(1.0, 1.0);
    REQUIRE(w.size() == 1);
    REQUIRE(w[0] == 1.0);
  }

  SECTION("invalid scales are rejected") {
    REQUIRE_THROWS_AS(friedrichs_weights(0.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(friedrichs_weights(1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("time mollification reproduces linear functions inside the band") {
  // A symmetric normalized kernel applied to u = t returns t exactly wherever
  // the full stencil fits.
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 4, 1.0, 32);
  const double sigma = 0.1;
  const Field u = sample_function(g, [](double, double t) { return t; });
  const auto [k_lo, k_hi] = friedrichs_valid_band(g, sigma);
  REQUIRE(k_lo > 0);
  REQUIRE(k_hi < g.nt);
  const Field y = friedrichs_time_mollify(u, sigma);
  for (int k = k_lo; k <= k_hi; ++k)
    for (int i = 0; i <= g.nx; ++i)
      REQUIRE(y.at(k, i) == Catch::Approx(g.t(k)).margin(1e-14));
  // Outside the band the field is copied through unchanged.
  REQUIRE(y.at(0, 0) == u.at(0, 0));
  REQUIRE(y.at(g.nt, 2) == u.at(g.nt, 2));
}

TEST_CASE("row mollification enforces its validity band") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 4, 1.0, 32);
  const double sigma = 0.1;
  const Field u = sample_function(g, [](double x, double t) { return x * t; });
  const auto [k_lo, k_hi] = friedrichs_valid_band(g, sigma);
  REQUIRE_NOTHROW(friedrichs_time_mollify_row(u, sigma, k_lo));
  REQUIRE_NOTHROW(friedrichs_time_mollify_row(u, sigma, k_hi));
  try {
    friedrichs_time_mollify_row(u, sigma, k_lo - 1);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    // The error names the admissible band so callers can fix their request.
    REQUIRE(msg.find(std::to_string(k_lo)) != std::string::npos);
    REQUIRE(msg.find(std::to_string(k_hi)) != std::string::npos);
  }
  REQUIRE_THROWS_AS(friedrichs_time_mollify_row(u, sigma, k_hi + 1),
                    std::invalid_argument);
  // A scale too wide for the cylinder leaves no valid band at all.
  REQUIRE_THROWS_AS(friedrichs_valid_band(g, 0.6), std::invalid_argument);
}

TEST_CASE("space mollification with zero extension bleeds at the walls") {
  // For u identically one and the three-point sigma = 1.5 hx kernel, interior
  // nodes keep the value one while each wall node loses the weight of the
  // stencil arm that left the domain: 1 - w = (1 + e^{-0.8})/(1 + 2 e^{-0.8}).
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 10, 1.0, 4);
  const double sigma = 1.5 * g.hx;
  const Field u(g, 1.0);
  const Field y = space_mollify_zero_extend(u, sigma);
  const double w0 = 1.0 / (1.0 + 2.0 * std::exp(-0.8));
  const double wall = w0 * (1.0 + std::exp(-0.8));
  for (int k = 0; k <= g.nt; ++k) {
    REQUIRE(y.at(k, 0) == Catch::Approx(wall).epsilon(1e-12));
    REQUIRE(y.at(k, g.nx) == Catch::Approx(wall).epsilon(1e-12));
    for (int i = 1; i < g.nx; ++i)
      REQUIRE(y.at(k, i) == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cutoff ramp hits hand-computed values") {
  // T = 1, h = 0.2, nt = 10: zero on [0, 0.2] and [0.8, 1], linear ramps on
  // (0.2, 0.4) and (0.6, 0.8), one on [0.4, 0.6].
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 4, 1.0, 10);
  const std::vector<double> chi = cutoff_chi(g, 0.2);
  const std::vector<double> expect = {0.0, 0.0, 0.0, 0.5, 1.0, 1.0,
                                      1.0, 0.5, 0.0, 0.0, 0.0};
  REQUIRE(chi.size() == expect.size());
  for (std::size_t k = 0; k < chi.size(); ++k)
    REQUIRE(chi[k] == Catch::Approx(expect[k]).margin(1e-14));
}

TEST_CASE("cutoff requires room for both ramps") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 4, 1.0, 10);
  REQUIRE_THROWS_AS(cutoff_chi(g, 0.25), std::invalid_argument);
  REQUIRE_THROWS_AS(cutoff_chi(g, 0.0), std::invalid_argument);
}

TEST_CASE("mollifier parameter validation") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 4, 1.0, 10);
  MollifierParams mp;
  REQUIRE_NOTHROW(mp.validate(g));
  MollifierParams bad_eps = mp;
  bad_eps.eps = 0.0;
  REQUIRE_THROWS_AS(bad_eps.validate(g), std::invalid_argument);
  MollifierParams bad_sigma = mp;
  bad_sigma.sigma = 0.6;  // >= T/2
  REQUIRE_THROWS_AS(bad_sigma.validate(g), std::invalid_argument);
  MollifierParams bad_cut = mp;
  bad_cut.h_cut = 0.3;  // 4 h >= T
  REQUIRE_THROWS_AS(bad_cut.validate(g), std::invalid_argument);
}

TEST_CASE("convolution scale below the step emits a warning but still runs") {
  const SpaceTimeGrid g = make_cylinder_grid(0.0, 1.0, 4, 1.0, 10);
  const Field u(g, 1.0);
  // eps < 2 ht: heavily biased but well defined; must not throw.
  const Field y = exp_time_convolve(u, 0.05);
  REQUIRE(std::isfinite(y.max_abs()));
  REQUIRE_THROWS_AS(exp_time_convolve(u, 0.0), std::invalid_argument);
}
