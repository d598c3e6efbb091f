#pragma once
// The degenerate diffusion operator div(|grad u|^{p-2} grad u) on the line,
// discretized with cell-face fluxes, and the implicit Euler marching solver
// built from safeguarded scalar Newton solves inside Gauss-Seidel sweeps.

#include <functional>
#include <utility>
#include <vector>

#include "obstacle_lab/grid.hpp"

namespace olab {

struct PParams {
  double p = 3.0;
  double newton_tol = 1e-10;   // residual tolerance for a converged time step
  int max_inner_iters = 20000; // sweep budget per time step
  double omega = 1.0;          // relaxation factor, 0 < omega < 2

  double q() const { return p / (p - 1.0); }

  void validate() const {
    if (!std::isfinite(p) || !(p >= 2.0))
      throw std::invalid_argument("PParams: p must be finite and >= 2");
    if (!(newton_tol > 0.0))
      throw std::invalid_argument("PParams: newton_tol must be positive");
    if (max_inner_iters < 1)
      throw std::invalid_argument("PParams: max_inner_iters must be >= 1");
    if (!(omega > 0.0) || !(omega < 2.0))
      throw std::invalid_argument("PParams: omega must lie in (0, 2)");
    // Conjugate exponent sanity: 1/p + 1/q = 1 must hold to rounding.
    const double resid = q() * (p - 1.0) - p;
    if (std::abs(resid) > 1e-12 * p)
      throw std::invalid_argument("PParams: conjugate exponent identity failed");
  }
};

// F(s) = |s|^{p-2} s, the scalar flux of the p-Laplace operator.
inline double p_flux(double s, double p) {
  if (s == 0.0) return 0.0;
  if (p == 2.0) return s;
  if (p == 3.0) return std::abs(s) * s;
  if (p == 4.0) return s * s * s;
  return std::pow(std::abs(s), p - 2.0) * s;
}

// F'(s) = (p-1)|s|^{p-2} >= 0.
inline double p_flux_derivative(double s, double p) {
  if (p == 2.0) return 1.0;
  if (s == 0.0) return 0.0;
  if (p == 3.0) return 2.0 * std::abs(s);
  if (p == 4.0) return 3.0 * s * s;
  return (p - 1.0) * std::pow(std::abs(s), p - 2.0);
}

// Divided-difference p-Laplacian of a single spatial slice:
//   (F((u_{i+1}-u_i)/hx) - F((u_i-u_{i-1})/hx)) / hx  at interior nodes.
// Boundary entries of the result are zero.
inline std::vector<double> p_laplacian_apply(const std::vector<double>& slice,
                                             double p, double hx) {
  if (slice.size() < 3)
    throw std::invalid_argument("p_laplacian_apply: slice needs at least 3 nodes");
  if (!(hx > 0.0)) throw std::invalid_argument("p_laplacian_apply: hx must be positive");
  const int n = static_cast<int>(slice.size()) - 1;
  std::vector<double> out(slice.size(), 0.0);
  double flux_left = p_flux((slice[1] - slice[0]) / hx, p);
  for (int i = 1; i < n; ++i) {
    const double flux_right = p_flux((slice[i + 1] - slice[i]) / hx, p);
    out[i] = (flux_right - flux_left) / hx;
    flux_left = flux_right;
  }
  return out;
}

struct SolveError : std::runtime_error {
  int step = 0;
  double residual = 0.0;
  SolveError(const std::string& msg, int step_, double residual_)
      : std::runtime_error(msg), step(step_), residual(residual_) {}
};

namespace detail {

// Root of g(x) = inv_ht*(x - uold) - (F((r-x)/hx) - F((x-l)/hx))/hx, the
// implicit Euler equation at one interior node with its neighbors frozen.
// g is strictly increasing and the root is bracketed by the data
// [min(l,r,uold), max(l,r,uold)]; Newton steps are taken when safe and
// bisection otherwise, so the iteration cannot escape or stall.
inline double solve_interior_node(double l, double r, double uold,
                                  double inv_ht, double hx, double p,
                                  double start, double gtol) {
  double lo = std::min(std::min(l, r), uold);
  double hi = std::max(std::max(l, r), uold);
  auto g = [&](double x) {
    return inv_ht * (x - uold) -
           (p_flux((r - x) / hx, p) - p_flux((x - l) / hx, p)) / hx;
  };
  auto gp = [&](double x) {
    return inv_ht + (p_flux_derivative((r - x) / hx, p) +
                     p_flux_derivative((x - l) / hx, p)) /
                        (hx * hx);
  };
  double x = std::min(std::max(start, lo), hi);
  for (int it = 0; it < 80; ++it) {
    const double gx = g(x);
    if (std::abs(gx) <= gtol) return x;
    if (gx > 0.0)
      hi = x;
    else
      lo = x;
    const double d = gp(x);
    double xn = (d > 1e-14) ? x - gx / d : 0.5 * (lo + hi);
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * (1.0 + std::abs(x))) return 0.5 * (lo + hi);
    x = xn;
  }
  return x;
}

}  // namespace detail

// Dirichlet data on the two lateral walls as a function of time:
// returns {left value, right value}.
using LateralBC = std::function<std::pair<double, double>(double)>;

// Implicit Euler marching for u_t = div(|grad u|^{p-2} grad u) with given
// initial slice and lateral Dirichlet data.  Each step runs nonlinear
// Gauss-Seidel sweeps (scalar Newton per node) until the divided-difference
// residual drops below newton_tol.
inline Field solve_p_parabolic(const SpaceTimeGrid& g, const PParams& params,
                               const std::vector<double>& initial,
                               const LateralBC& lateral) {
  params.validate();
  if (static_cast<int>(initial.size()) != g.nx + 1)
    throw std::invalid_argument("solve_p_parabolic: initial slice has wrong length");
  Field u(g, 0.0);
  std::copy(initial.begin(), initial.end(), u.row(0));
  const double inv_ht = 1.0 / g.ht;
  const double gtol = 0.01 * params.newton_tol;
  std::vector<double> flux(g.nx, 0.0);
  for (int k = 1; k <= g.nt; ++k) {
    const double* prev = u.row(k - 1);
    double* cur = u.row(k);
    std::copy(prev, prev + g.nx + 1, cur);
    const auto [bl, br] = lateral(g.t(k));
    cur[0] = bl;
    cur[g.nx] = br;
    double res = 0.0;
    bool done = false;
    for (int sweep = 0; sweep < params.max_inner_iters; ++sweep) {
      for (int i = 1; i < g.nx; ++i) {
        const double root = detail::solve_interior_node(
            cur[i - 1], cur[i + 1], prev[i], inv_ht, g.hx, params.p, cur[i], gtol);
        cur[i] += params.omega * (root - cur[i]);
      }
      for (int i = 0; i < g.nx; ++i)
        flux[i] = p_flux((cur[i + 1] - cur[i]) / g.hx, params.p);
      res = 0.0;
      for (int i = 1; i < g.nx; ++i) {
        const double r = inv_ht * (cur[i] - prev[i]) - (flux[i] - flux[i - 1]) / g.hx;
        res = std::max(res, std::abs(r));
      }
      if (res < params.newton_tol) {
        done = true;
        break;
      }
    }
    if (!done)
      throw SolveError("solve_p_parabolic: sweep budget exhausted at step k=" +
                           std::to_string(k) + " (residual " +
                           olab::detail::fmt_double(res) + ", tol " +
                           olab::detail::fmt_double(params.newton_tol) + ")",
                       k, res);
  }
  return u;
}

// Replaces u inside the open subcylinder Q by the solution of the equation
// that matches u on the bottom and lateral sides of Q.  The input field
// outside Q (including the whole final time level above Q's top) is kept.
inline Field poisson_modify(const Field& u, const Cylinder& q,
                            const PParams& params) {
  params.validate();
  validate_field(u, "poisson_modify input");
  const SpaceTimeGrid& g = u.grid;
  require_strictly_inside(q, g, "poisson_modify");
  Field out = u;
  const double inv_ht = 1.0 / g.ht;
  const double gtol = 0.01 * params.newton_tol;
  const int width = q.i_hi - q.i_lo + 1;
  std::vector<double> flux(width - 1, 0.0);
  for (int k = q.k_lo + 1; k <= q.k_hi; ++k) {
    const double* prev = out.row(k - 1);
    double* cur = out.row(k);
    double res = 0.0;
    bool done = false;
    for (int sweep = 0; sweep < params.max_inner_iters; ++sweep) {
      for (int i = q.i_lo + 1; i < q.i_hi; ++i) {
        const double root = detail::solve_interior_node(
            cur[i - 1], cur[i + 1], prev[i], inv_ht, g.hx, params.p, cur[i], gtol);
        cur[i] += params.omega * (root - cur[i]);
      }
      for (int i = q.i_lo; i < q.i_hi; ++i)
        flux[i - q.i_lo] = p_flux((cur[i + 1] - cur[i]) / g.hx, params.p);
      res = 0.0;
      for (int i = q.i_lo + 1; i < q.i_hi; ++i) {
        const double r = inv_ht * (cur[i] - prev[i]) -
                         (flux[i - q.i_lo] - flux[i - q.i_lo - 1]) / g.hx;
        res = std::max(res, std::abs(r));
      }
      if (res < params.newton_tol) {
        done = true;
        break;
      }
    }
    if (!done)
      throw SolveError("poisson_modify: sweep budget exhausted at step k=" +
                           std::to_string(k) + " (residual " +
                           olab::detail::fmt_double(res) + ")",
                       k, res);
  }
  return out;
}

// Exponential barrier anchored at a parabolic boundary node (i0, k0):
//   f(x,t) = exp(-alpha*R0^2) - exp(-alpha*R^2),
// where R is the distance to a center placed at distance R0 outside the
// cylinder (below the bottom, beyond a wall, or diagonally out of a corner).
// f vanishes at the anchor node, is positive inside the cylinder beyond
// distance R0 from the center, and for large alpha becomes a supersolution
// near the anchor.
inline Field barrier(const SpaceTimeGrid& g, int i0, int k0, double alpha,
                     double R0) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("barrier: alpha must be positive");
  if (!(R0 > 0.0) || !std::isfinite(R0))
    throw std::invalid_argument("barrier: R0 must be positive");
  if (i0 < 0 || i0 > g.nx || k0 < 0 || k0 > g.nt)
    throw std::invalid_argument("barrier: anchor node out of range");
  if (!g.on_parabolic_boundary(i0, k0))
    throw std::invalid_argument(
        "barrier: anchor node (i=" + std::to_string(i0) +
        ", k=" + std::to_string(k0) + ") is not on the parabolic boundary");
  const double x0 = g.x(i0);
  const double t0 = g.t(k0);
  double cx = x0, ct = t0;
  const double diag = R0 / std::sqrt(2.0);
  if (k0 == 0 && i0 > 0 && i0 < g.nx) {
    ct = t0 - R0;
  } else if (k0 == 0 && i0 == 0) {
    cx = x0 - diag;
    ct = t0 - diag;
  } else if (k0 == 0 && i0 == g.nx) {
    cx = x0 + diag;
    ct = t0 - diag;
  } else if (i0 == 0) {
    cx = x0 - R0;
  } else {
    cx = x0 + R0;
  }
  Field f(g, 0.0);
  const double base = std::exp(-alpha * R0 * R0);
  for (int k = 0; k <= g.nt; ++k) {
    const double dt = g.t(k) - ct;
    double* row = f.row(k);
    for (int i = 0; i <= g.nx; ++i) {
      const double dx = g.x(i) - cx;
      row[i] = base - std::exp(-alpha * (dx * dx + dt * dt));
    }
  }
  return f;
}

}  // namespace olab
