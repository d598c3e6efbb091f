#pragma once
// Obstacle-constrained solves.  The parabolic engine is implicit Euler in
// time with projected nonlinear Gauss-Seidel sweeps per step: each interior
// node solves its scalar implicit equation, relaxes, and is clamped to the
// obstacle.  Convergence is declared on the complementarity residual
//   max_i | min(u_i - psi_i, R_i) |,
// where R is the divided-difference equation residual, together with the
// plain residual on strictly inactive nodes.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "obstacle_lab/grid.hpp"
#include "obstacle_lab/mollifiers.hpp"
#include "obstacle_lab/pde.hpp"

namespace olab {

// How the time-zero-measure slices of the obstacle are interpreted:
//   ae        — constraints on the marked slices are dropped (they carry no
//               time measure, so an almost-everywhere constraint ignores them)
//   pointwise — every node value binds
enum class ConstraintMode { ae, pointwise };

// Initial guess for the sweeps at each time step.
enum class SweepStart { previous, zero, upper };

struct SolveOptions {
  SweepStart start = SweepStart::previous;
};

struct Obstacle {
  Field psi;                     // node values, 0 <= psi <= L
  double L = 1.0;                // uniform bound
  std::vector<int> thin_slices;  // time rows meant as zero-measure constraints
  Cylinder support;              // psi must vanish outside this node box
};

inline void validate_obstacle(const Obstacle& ob) {
  validate_field(ob.psi, "Obstacle.psi");
  const SpaceTimeGrid& g = ob.psi.grid;
  if (!(ob.L > 0.0) || !std::isfinite(ob.L))
    throw std::invalid_argument("Obstacle: L must be positive and finite");
  const Cylinder& s = ob.support;
  // Space support must stay strictly between the walls; the time support may
  // reach the final level (the constraint remains meaningful there) but must
  // leave the initial level free.
  if (!(0 < s.i_lo && s.i_lo <= s.i_hi && s.i_hi < g.nx))
    throw std::invalid_argument("Obstacle: spatial support must satisfy 0 < i_lo <= i_hi < nx");
  if (!(1 <= s.k_lo && s.k_lo <= s.k_hi && s.k_hi <= g.nt))
    throw std::invalid_argument("Obstacle: time support must satisfy 1 <= k_lo <= k_hi <= nt");
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) {
      const double v = ob.psi.at(k, i);
      if (v < 0.0 || v > ob.L)
        throw std::invalid_argument("Obstacle: psi out of [0, L] at node (i=" +
                                    std::to_string(i) + ", k=" + std::to_string(k) + ")");
      const bool inside = (i >= s.i_lo && i <= s.i_hi && k >= s.k_lo && k <= s.k_hi);
      if (!inside && v != 0.0)
        throw std::invalid_argument("Obstacle: psi nonzero outside support at node (i=" +
                                    std::to_string(i) + ", k=" + std::to_string(k) + ")");
    }
  for (int k : ob.thin_slices)
    if (k < s.k_lo || k > s.k_hi)
      throw std::invalid_argument("Obstacle: thin slice k=" + std::to_string(k) +
                                  " lies outside the support rows");
}

// The obstacle actually imposed on the solver.  In ae mode the marked thin
// slices are released (their rows are replaced by zero, which is vacuous for
// nonnegative solutions); in pointwise mode every node binds.
inline Field effective_obstacle(const Obstacle& ob, ConstraintMode mode) {
  Field out = ob.psi;
  if (mode == ConstraintMode::ae)
    for (int k : ob.thin_slices)
      std::fill(out.row(k), out.row(k) + out.grid.nx + 1, 0.0);
  return out;
}

struct ObstacleSolution {
  Field u;
  std::vector<std::uint8_t> active;  // node mask, same layout as Field values
  double comp_residual = 0.0;        // max |min(u - psi, R)| over interior nodes
  double inactive_residual = 0.0;    // max |R| over strictly inactive nodes
  std::vector<int> iterations;       // sweeps used at each time step (size nt)
  std::vector<int> active_count;     // active interior nodes per step (size nt)
  ConstraintMode mode = ConstraintMode::ae;

  bool active_at(int k, int i) const {
    return active[static_cast<std::size_t>(k) * (u.grid.nx + 1) + i] != 0;
  }
};

// Core engine: marches the implicit Euler obstacle problem for an arbitrary
// effective obstacle field with zero parabolic boundary data.  psi_eff must
// be <= 0 on the parabolic boundary so that the boundary data is feasible.
inline ObstacleSolution solve_obstacle_field(const SpaceTimeGrid& g,
                                             const PParams& params,
                                             const Field& psi_eff, double L,
                                             ConstraintMode tag,
                                             const SolveOptions& opts = {}) {
  params.validate();
  validate_field(psi_eff, "solve_obstacle_field obstacle");
  if (!psi_eff.grid.same_layout(g))
    throw std::invalid_argument("solve_obstacle_field: obstacle grid mismatch");
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i)
      if (g.on_parabolic_boundary(i, k) && psi_eff.at(k, i) > 0.0)
        throw std::invalid_argument(
            "solve_obstacle_field: obstacle positive on the parabolic boundary at (i=" +
            std::to_string(i) + ", k=" + std::to_string(k) +
            "); zero boundary data would be infeasible");

  ObstacleSolution sol;
  sol.mode = tag;
  sol.u = Field(g, 0.0);
  sol.active.assign(static_cast<std::size_t>(g.nt + 1) * (g.nx + 1), 0);
  sol.iterations.assign(g.nt, 0);
  sol.active_count.assign(g.nt, 0);

  const double inv_ht = 1.0 / g.ht;
  const double tol = params.newton_tol;
  const double gtol = 0.01 * tol;
  std::vector<double> flux(g.nx, 0.0);

  for (int k = 1; k <= g.nt; ++k) {
    const double* prev = sol.u.row(k - 1);
    double* cur = sol.u.row(k);
    const double* psi = psi_eff.row(k);
    switch (opts.start) {
      case SweepStart::previous:
        for (int i = 1; i < g.nx; ++i) cur[i] = std::max(prev[i], psi[i]);
        break;
      case SweepStart::zero:
        for (int i = 1; i < g.nx; ++i) cur[i] = 0.0;
        break;
      case SweepStart::upper:
        for (int i = 1; i < g.nx; ++i) cur[i] = L;
        break;
    }
    cur[0] = 0.0;
    cur[g.nx] = 0.0;

    double comp_res = 0.0, inact_res = 0.0;
    bool done = false;
    int sweeps = 0;
    while (sweeps < params.max_inner_iters) {
      ++sweeps;
      for (int i = 1; i < g.nx; ++i) {
        const double root = detail::solve_interior_node(
            cur[i - 1], cur[i + 1], prev[i], inv_ht, g.hx, params.p, cur[i], gtol);
        cur[i] = std::max(cur[i] + params.omega * (root - cur[i]), psi[i]);
      }
      for (int i = 0; i < g.nx; ++i)
        flux[i] = p_flux((cur[i + 1] - cur[i]) / g.hx, params.p);
      comp_res = 0.0;
      inact_res = 0.0;
      for (int i = 1; i < g.nx; ++i) {
        const double r = inv_ht * (cur[i] - prev[i]) - (flux[i] - flux[i - 1]) / g.hx;
        comp_res = std::max(comp_res, std::abs(std::min(cur[i] - psi[i], r)));
        if (cur[i] > psi[i] + 10.0 * tol) inact_res = std::max(inact_res, std::abs(r));
      }
      if (comp_res < tol && inact_res < tol) {
        done = true;
        break;
      }
    }
    if (!done)
      throw SolveError(
          "solve_obstacle_field: sweep budget exhausted at step k=" +
              std::to_string(k) + " (complementarity residual " +
              detail::fmt_double(comp_res) + ", inactive residual " +
              detail::fmt_double(inact_res) + ", tol " + detail::fmt_double(tol) + ")",
          k, std::max(comp_res, inact_res));
    sol.iterations[k - 1] = sweeps;
    int count = 0;
    for (int i = 1; i < g.nx; ++i)
      if (cur[i] <= psi[i]) {
        sol.active[static_cast<std::size_t>(k) * (g.nx + 1) + i] = 1;
        ++count;
      }
    sol.active_count[k - 1] = count;
    sol.comp_residual = std::max(sol.comp_residual, comp_res);
    sol.inactive_residual = std::max(sol.inactive_residual, inact_res);
  }
  return sol;
}

inline ObstacleSolution solve_parabolic_obstacle(const SpaceTimeGrid& g,
                                                 const PParams& params,
                                                 const Obstacle& ob,
                                                 ConstraintMode mode,
                                                 const SolveOptions& opts = {}) {
  validate_obstacle(ob);
  if (!ob.psi.grid.same_layout(g))
    throw std::invalid_argument("solve_parabolic_obstacle: obstacle grid mismatch");
  return solve_obstacle_field(g, params, effective_obstacle(ob, mode), ob.L, mode, opts);
}

// Solve against the one-sided exponential time mollification of the obstacle.
// The convolution is applied to the ae-effective obstacle: a zero-measure
// slice contributes nothing to the time integral it discretizes.
inline ObstacleSolution solve_with_mollified_obstacle(const SpaceTimeGrid& g,
                                                      const PParams& params,
                                                      const Obstacle& ob, double eps,
                                                      const SolveOptions& opts = {}) {
  validate_obstacle(ob);
  if (!ob.psi.grid.same_layout(g))
    throw std::invalid_argument("solve_with_mollified_obstacle: obstacle grid mismatch");
  const Field psi_eps = exp_time_convolve(effective_obstacle(ob, ConstraintMode::ae), eps);
  return solve_obstacle_field(g, params, psi_eps, ob.L, ConstraintMode::ae, opts);
}

// Space bump mollification (zero extension) followed by the exponential time
// convolution.  Errors if sigma exceeds the obstacle's lateral margin (the
// smoothed obstacle would then be positive on the walls).
inline ObstacleSolution solve_with_space_time_mollified(
    const SpaceTimeGrid& g, const PParams& params, const Obstacle& ob,
    double eps, double sigma, const SolveOptions& opts = {}) {
  validate_obstacle(ob);
  if (!ob.psi.grid.same_layout(g))
    throw std::invalid_argument("solve_with_space_time_mollified: obstacle grid mismatch");
  const Field smooth_x = space_mollify_zero_extend(effective_obstacle(ob, ConstraintMode::ae), sigma);
  const Field psi_m = exp_time_convolve(smooth_x, eps);
  return solve_obstacle_field(g, params, psi_m, ob.L, ConstraintMode::ae, opts);
}

// ---------------------------------------------------------------------------
// Stationary problem on (x_min, x_max) with zero Dirichlet data.  For every
// p >= 2 the nodewise flux balance F((u_{i+1}-x)/hx) = F((x-u_{i-1})/hx) has
// the unique root x = (u_{i-1}+u_{i+1})/2 because F is strictly increasing,
// so projected relaxation is the same linear PSOR iteration for all p; p
// enters only through the flux-form residual used to declare convergence.

inline std::vector<double> solve_elliptic_obstacle(double x_min, double x_max,
                                                   int nx, const PParams& params,
                                                   const std::vector<double>& psi,
                                                   SweepStart start = SweepStart::zero) {
  params.validate();
  if (static_cast<int>(psi.size()) != nx + 1)
    throw std::invalid_argument("solve_elliptic_obstacle: psi has wrong length");
  if (!(x_max > x_min) || nx < 4)
    throw std::invalid_argument("solve_elliptic_obstacle: bad domain");
  for (double v : psi)
    if (!std::isfinite(v))
      throw std::invalid_argument("solve_elliptic_obstacle: psi must be finite");
  if (psi[0] > 0.0 || psi[nx] > 0.0)
    throw std::invalid_argument(
        "solve_elliptic_obstacle: psi must be <= 0 at the endpoints");
  const double hx = (x_max - x_min) / nx;
  std::vector<double> u(nx + 1, 0.0);
  if (start == SweepStart::upper) {
    const double top = std::max(0.0, *std::max_element(psi.begin(), psi.end()));
    for (int i = 1; i < nx; ++i) u[i] = top;
  }
  const double tol = params.newton_tol;
  std::vector<double> flux(nx, 0.0);
  double comp_res = 0.0, inact_res = 0.0;
  for (int sweep = 0; sweep < params.max_inner_iters; ++sweep) {
    for (int i = 1; i < nx; ++i) {
      const double mid = 0.5 * (u[i - 1] + u[i + 1]);
      u[i] = std::max(u[i] + params.omega * (mid - u[i]), psi[i]);
    }
    for (int i = 0; i < nx; ++i)
      flux[i] = p_flux((u[i + 1] - u[i]) / hx, params.p);
    comp_res = 0.0;
    inact_res = 0.0;
    for (int i = 1; i < nx; ++i) {
      const double r = -(flux[i] - flux[i - 1]) / hx;
      comp_res = std::max(comp_res, std::abs(std::min(u[i] - psi[i], r)));
      if (u[i] > psi[i] + 10.0 * tol) inact_res = std::max(inact_res, std::abs(r));
    }
    if (comp_res < tol && inact_res < tol) return u;
  }
  throw SolveError("solve_elliptic_obstacle: sweep budget exhausted (complementarity residual " +
                       detail::fmt_double(comp_res) + ", inactive residual " +
                       detail::fmt_double(inact_res) + ")",
                   0, std::max(comp_res, inact_res));
}

// Solves the base obstacle and each perturbed obstacle, returning the
// W^{1,p} distance of every perturbed solution to the base solution.
inline std::vector<double> elliptic_stability_sweep(
    double x_min, double x_max, int nx, const PParams& params,
    const std::vector<double>& base_psi,
    const std::vector<std::vector<double>>& perturbed) {
  const double hx = (x_max - x_min) / nx;
  const std::vector<double> u0 = solve_elliptic_obstacle(x_min, x_max, nx, params, base_psi);
  std::vector<double> dists;
  dists.reserve(perturbed.size());
  for (const auto& psi_j : perturbed) {
    const std::vector<double> uj = solve_elliptic_obstacle(x_min, x_max, nx, params, psi_j);
    std::vector<double> diff(uj.size());
    for (std::size_t i = 0; i < uj.size(); ++i) diff[i] = uj[i] - u0[i];
    dists.push_back(w1p_norm_1d(diff, hx, params.p));
  }
  return dists;
}

// Least concave majorant of max(psi, 0) on the node set, with the endpoint
// values clamped to zero Dirichlet data.  Computed by the monotone-chain
// upper hull of the points (i, max(psi_i, 0)) — an independent geometric
// construction of the stationary solution for comparison with the solver.
inline std::vector<double> concave_envelope(const std::vector<double>& psi) {
  const int n = static_cast<int>(psi.size()) - 1;
  if (n < 1) throw std::invalid_argument("concave_envelope: needs >= 2 nodes");
  std::vector<double> h(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) h[i] = std::max(psi[i], 0.0);
  std::vector<int> hull;  // indices of upper hull vertices, left to right
  for (int i = 0; i <= n; ++i) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull[hull.size() - 1];
      // pop b when (a, b, i) fails to turn clockwise (b not above chord a-i)
      const double cross = static_cast<double>(b - a) * (h[i] - h[a]) -
                           (h[b] - h[a]) * static_cast<double>(i - a);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  std::vector<double> env(psi.size(), 0.0);
  for (std::size_t v = 0; v + 1 < hull.size(); ++v) {
    const int a = hull[v];
    const int b = hull[v + 1];
    for (int i = a; i <= b; ++i) {
      const double s = static_cast<double>(i - a) / static_cast<double>(b - a);
      env[i] = h[a] + s * (h[b] - h[a]);
    }
  }
  return env;
}

}  // namespace olab
