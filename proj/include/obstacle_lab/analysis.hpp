#pragma once
// Measurement layer: space-time norms, weak-form pairings against test
// functions, the seeded test-function battery, convergence sweeps over the
// mollification scale, and the energy bound report.
//
// Discretization conventions, shared by every routine here:
//   * gradients live on cells (forward divided differences),
//   * node sums in space use trapezoid weights (hx/2 at the walls),
//   * time sums use the rectangle rule over levels k = 1..nt,
//   * time derivatives are backward differences.
// With these choices summation by parts is exact, so the weak pairings below
// reproduce the solver's divided-difference residual identically rather than
// up to quadrature error.  That is what lets the nonnegativity contracts be
// asserted at roundoff tolerances.

#include <limits>
#include <random>
#include <vector>

#include "obstacle_lab/grid.hpp"
#include "obstacle_lab/obstacle.hpp"
#include "obstacle_lab/pde.hpp"

namespace olab {

namespace detail {

inline double space_weight(const SpaceTimeGrid& g, int i) {
  return (i == 0 || i == g.nx) ? 0.5 * g.hx : g.hx;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Norms and distances.

// L^p norm over the cylinder: rectangle rule in time (levels 1..nt),
// trapezoid rule in space.
inline double lp_norm(const Field& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: requires p >= 1");
  const SpaceTimeGrid& g = u.grid;
  double s = 0.0;
  for (int k = 1; k <= g.nt; ++k) {
    const double* row = u.row(k);
    double rs = 0.5 * (std::pow(std::abs(row[0]), p) + std::pow(std::abs(row[g.nx]), p));
    for (int i = 1; i < g.nx; ++i) rs += std::pow(std::abs(row[i]), p);
    s += g.ht * g.hx * rs;
  }
  return std::pow(s, 1.0 / p);
}

// L^p norm of the spatial gradient (cell divided differences).
inline double grad_lp_norm(const Field& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("grad_lp_norm: requires p >= 1");
  const SpaceTimeGrid& g = u.grid;
  double s = 0.0;
  for (int k = 1; k <= g.nt; ++k) {
    const double* row = u.row(k);
    double rs = 0.0;
    for (int i = 0; i < g.nx; ++i)
      rs += std::pow(std::abs((row[i + 1] - row[i]) / g.hx), p);
    s += g.ht * g.hx * rs;
  }
  return std::pow(s, 1.0 / p);
}

// Dissipated gradient energy: the p-th power of grad_lp_norm.
inline double energy(const Field& u, double p) {
  const double gn = grad_lp_norm(u, p);
  return std::pow(gn, p);
}

inline Field field_difference(const Field& a, const Field& b) {
  if (!a.grid.same_layout(b.grid))
    throw std::invalid_argument("field_difference: grid mismatch");
  Field d = a;
  for (std::size_t idx = 0; idx < d.values.size(); ++idx) d.values[idx] -= b.values[idx];
  return d;
}

inline double lp_dist(const Field& a, const Field& b, double p) {
  return lp_norm(field_difference(a, b), p);
}

inline double grad_lp_dist(const Field& a, const Field& b, double p) {
  return grad_lp_norm(field_difference(a, b), p);
}

inline double linf_dist(const Field& a, const Field& b) {
  return field_difference(a, b).max_abs();
}

// ---------------------------------------------------------------------------
// Divided-difference equation residual
//   R(k,i) = (u(k,i) - u(k-1,i))/ht - (F(grad_right) - F(grad_left))/hx
// at interior nodes of levels k >= 1; boundary entries are zero.
inline Field equation_residual(const Field& u, const PParams& params) {
  params.validate();
  validate_field(u, "equation_residual input");
  const SpaceTimeGrid& g = u.grid;
  Field r(g, 0.0);
  std::vector<double> flux(g.nx, 0.0);
  for (int k = 1; k <= g.nt; ++k) {
    const double* cur = u.row(k);
    const double* prev = u.row(k - 1);
    double* out = r.row(k);
    for (int i = 0; i < g.nx; ++i)
      flux[i] = p_flux((cur[i + 1] - cur[i]) / g.hx, params.p);
    for (int i = 1; i < g.nx; ++i)
      out[i] = (cur[i] - prev[i]) / g.ht - (flux[i] - flux[i - 1]) / g.hx;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Test functions.

struct TestFunction {
  Field phi;
  bool nonnegative = false;
  bool compact_support = false;  // zero at k=0, k=nt, i=0 and i=nx
};

// Validates that the claimed flags actually hold for the stored values.
inline TestFunction make_test_function(Field phi, bool nonnegative,
                                       bool compact_support) {
  validate_field(phi, "TestFunction.phi");
  const SpaceTimeGrid& g = phi.grid;
  if (nonnegative)
    for (int k = 0; k <= g.nt; ++k)
      for (int i = 0; i <= g.nx; ++i)
        if (phi.at(k, i) < 0.0)
          throw std::invalid_argument(
              "make_test_function: claimed nonnegative but negative at (i=" +
              std::to_string(i) + ", k=" + std::to_string(k) + ")");
  if (compact_support)
    for (int k = 0; k <= g.nt; ++k)
      for (int i = 0; i <= g.nx; ++i) {
        const bool edge = (k == 0 || k == g.nt || i == 0 || i == g.nx);
        if (edge && phi.at(k, i) != 0.0)
          throw std::invalid_argument(
              "make_test_function: claimed compactly supported but nonzero at (i=" +
              std::to_string(i) + ", k=" + std::to_string(k) + ")");
      }
  return TestFunction{std::move(phi), nonnegative, compact_support};
}

// ---------------------------------------------------------------------------
// Weak pairings.

// Supersolution pairing of u against a nonnegative, compactly supported test
// function:
//   sum_{k=1..nt} ht sum_cells hx F(grad u) grad phi
//   - sum_{k=0..nt-1} sum_nodes w_i u(k,i) (phi(k+1,i) - phi(k,i)).
// By exact summation by parts this equals sum ht w_i phi * R(u), so it is
// nonnegative (up to the solver tolerance) whenever u is a discrete
// supersolution.
inline double supersolution_residual(const Field& u, const PParams& params,
                                     const TestFunction& tf) {
  params.validate();
  if (!tf.nonnegative || !tf.compact_support)
    throw std::invalid_argument(
        "supersolution_residual: test function must be nonnegative and compactly supported");
  const Field& phi = tf.phi;
  if (!u.grid.same_layout(phi.grid))
    throw std::invalid_argument("supersolution_residual: grid mismatch");
  const SpaceTimeGrid& g = u.grid;
  double grad_term = 0.0;
  for (int k = 1; k <= g.nt; ++k) {
    const double* urow = u.row(k);
    const double* prow = phi.row(k);
    double rs = 0.0;
    for (int i = 0; i < g.nx; ++i)
      rs += p_flux((urow[i + 1] - urow[i]) / g.hx, params.p) * (prow[i + 1] - prow[i]);
    grad_term += g.ht * rs;
  }
  double time_term = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    const double* urow = u.row(k);
    const double* prow = phi.row(k);
    const double* pnext = phi.row(k + 1);
    double rs = 0.0;
    for (int i = 0; i <= g.nx; ++i)
      rs += detail::space_weight(g, i) * urow[i] * (pnext[i] - prow[i]);
    time_term += rs;
  }
  return grad_term - time_term;
}

// Variational pairing of a constrained solve v against an admissible
// comparison field phi (phi >= psi, phi = 0 on the parabolic boundary):
//   sum ht sum_cells hx F(grad v) grad(phi - v)
//   + sum_{k=1..nt} sum_nodes w_i (phi - v)(phi(k) - phi(k-1))
//   - 1/2 sum_nodes w_i (phi(nt) - v(nt))^2.
// For the exact discrete solution this equals a nonnegative quantity (the
// complementarity pairing plus squared time increments), so values below
// -tolerance falsify the solve.
inline double variational_residual(const Field& v, const PParams& params,
                                   const Field& phi, const Field& psi) {
  params.validate();
  validate_field(v, "variational_residual v");
  validate_field(phi, "variational_residual phi");
  validate_field(psi, "variational_residual psi");
  const SpaceTimeGrid& g = v.grid;
  if (!phi.grid.same_layout(g) || !psi.grid.same_layout(g))
    throw std::invalid_argument("variational_residual: grid mismatch");
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) {
      if (phi.at(k, i) < psi.at(k, i))
        throw std::invalid_argument(
            "variational_residual: phi below the obstacle at (i=" + std::to_string(i) +
            ", k=" + std::to_string(k) + ")");
      if (g.on_parabolic_boundary(i, k)) {
        if (phi.at(k, i) != 0.0)
          throw std::invalid_argument(
              "variational_residual: phi nonzero on the parabolic boundary at (i=" +
              std::to_string(i) + ", k=" + std::to_string(k) + ")");
        if (v.at(k, i) != 0.0)
          throw std::invalid_argument(
              "variational_residual: v nonzero on the parabolic boundary at (i=" +
              std::to_string(i) + ", k=" + std::to_string(k) + ")");
      }
    }
  double grad_term = 0.0;
  for (int k = 1; k <= g.nt; ++k) {
    const double* vrow = v.row(k);
    const double* prow = phi.row(k);
    double rs = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      const double dv = (vrow[i + 1] - vrow[i]) / g.hx;
      const double dphi = (prow[i + 1] - prow[i]) / g.hx;
      rs += p_flux(dv, params.p) * (dphi - dv);
    }
    grad_term += g.ht * g.hx * rs;
  }
  double time_term = 0.0;
  for (int k = 1; k <= g.nt; ++k) {
    const double* vrow = v.row(k);
    const double* prow = phi.row(k);
    const double* pprev = phi.row(k - 1);
    double rs = 0.0;
    for (int i = 0; i <= g.nx; ++i)
      rs += detail::space_weight(g, i) * (prow[i] - vrow[i]) * (prow[i] - pprev[i]);
    time_term += rs;
  }
  double final_term = 0.0;
  {
    const double* vrow = v.row(g.nt);
    const double* prow = phi.row(g.nt);
    for (int i = 0; i <= g.nx; ++i) {
      const double d = prow[i] - vrow[i];
      final_term += detail::space_weight(g, i) * d * d;
    }
  }
  return grad_term + time_term - 0.5 * final_term;
}

// ---------------------------------------------------------------------------
// Test-function battery: 8 deterministic tensor-product bumps and 4 seeded
// piecewise-bilinear fields, all nonnegative with compact support.

namespace detail {

inline double poly_bump(double s, double c, double w) {
  const double z = (s - c) / w;
  const double core = 1.0 - z * z;
  return core > 0.0 ? core * core : 0.0;
}

}  // namespace detail

inline std::vector<TestFunction> residual_test_battery(const SpaceTimeGrid& g,
                                                       unsigned seed) {
  std::vector<TestFunction> out;
  const double W = g.x_max - g.x_min;
  const std::pair<double, double> sp[4] = {{0.35, 0.25}, {0.5, 0.4}, {0.65, 0.25}, {0.5, 0.2}};
  const std::pair<double, double> tp[4] = {{0.5, 0.45}, {0.3, 0.25}, {0.7, 0.25}, {0.5, 0.3}};
  const int pairing[8][2] = {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 2}, {1, 3}, {2, 0}, {3, 1}};
  for (const auto& pr : pairing) {
    const auto [cs, ws] = sp[pr[0]];
    const auto [ct, wt] = tp[pr[1]];
    Field f = sample_function(g, [&](double x, double t) {
      const double xr = (x - g.x_min) / W;
      const double tr = t / g.T;
      return detail::poly_bump(xr, cs, ws) * detail::poly_bump(tr, ct, wt);
    });
    out.push_back(make_test_function(std::move(f), true, true));
  }
  for (int variant = 0; variant < 4; ++variant) {
    std::mt19937 rng(seed + static_cast<unsigned>(variant));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    // Coarse 9x9 lattice of values, zero on the outer ring, bilinearly
    // interpolated to the grid: piecewise-linear, nonnegative, compact.
    double lattice[9][9] = {};
    for (int a = 1; a < 8; ++a)
      for (int b = 1; b < 8; ++b) lattice[a][b] = uni(rng);
    Field f = sample_function(g, [&](double x, double t) {
      const double sx = 8.0 * (x - g.x_min) / W;
      const double st = 8.0 * t / g.T;
      const int a = std::min(7, static_cast<int>(sx));
      const int b = std::min(7, static_cast<int>(st));
      const double fx = sx - a;
      const double ft = st - b;
      return (1.0 - fx) * (1.0 - ft) * lattice[a][b] + fx * (1.0 - ft) * lattice[a + 1][b] +
             (1.0 - fx) * ft * lattice[a][b + 1] + fx * ft * lattice[a + 1][b + 1];
    });
    out.push_back(make_test_function(std::move(f), true, true));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convergence sweep over the exponential mollification scale.

struct ConvergenceRecord {
  double eps = 0.0;
  double dist_lp = 0.0;       // L^p distance to the unmollified solution
  double dist_grad_lp = 0.0;  // gradient L^p distance to the same
  double energy = 0.0;        // dissipated gradient energy of this solve
  double comp_residual = 0.0;
};

struct SweepResult {
  std::vector<ConvergenceRecord> records;
  bool complete = true;
  std::string error;  // first solver failure, when complete is false
  ObstacleSolution reference;
};

inline SweepResult convergence_sweep(const SpaceTimeGrid& g, const PParams& params,
                                     const Obstacle& ob,
                                     const std::vector<double>& eps_list,
                                     const SolveOptions& opts = {}) {
  SweepResult result;
  try {
    result.reference = solve_parabolic_obstacle(g, params, ob, ConstraintMode::ae, opts);
  } catch (const SolveError& e) {
    result.complete = false;
    result.error = e.what();
    return result;
  }
  for (double eps : eps_list) {
    try {
      const ObstacleSolution sol = solve_with_mollified_obstacle(g, params, ob, eps, opts);
      ConvergenceRecord rec;
      rec.eps = eps;
      rec.dist_lp = lp_dist(sol.u, result.reference.u, params.p);
      rec.dist_grad_lp = grad_lp_dist(sol.u, result.reference.u, params.p);
      rec.energy = energy(sol.u, params.p);
      rec.comp_residual = sol.comp_residual;
      result.records.push_back(rec);
    } catch (const SolveError& e) {
      result.complete = false;
      result.error = e.what();
      break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Energy bound report: compares the dissipated gradient energy of a
// constrained solve against the obstacle data that drives it,
//   lhs  = integral |grad u|^p,
//   rhs  = integral |grad psi|^p  +  L * integral |dt psi|.
// For solutions of the constrained problem the ratio lhs/rhs stays bounded by
// a modest constant; the report carries the pieces so scenarios can pin it.

struct EnergyBoundReport {
  double lhs_energy = 0.0;
  double rhs_gradient_term = 0.0;
  double rhs_time_term = 0.0;
  double ratio = 0.0;
};

inline EnergyBoundReport energy_bound_check(const ObstacleSolution& sol,
                                            const Field& psi, double L,
                                            const PParams& params) {
  params.validate();
  if (!sol.u.grid.same_layout(psi.grid))
    throw std::invalid_argument("energy_bound_check: grid mismatch");
  const SpaceTimeGrid& g = psi.grid;
  EnergyBoundReport rep;
  rep.lhs_energy = energy(sol.u, params.p);
  rep.rhs_gradient_term = energy(psi, params.p);
  double tv = 0.0;
  for (int k = 1; k <= g.nt; ++k) {
    const double* cur = psi.row(k);
    const double* prev = psi.row(k - 1);
    double rs = 0.0;
    for (int i = 0; i <= g.nx; ++i)
      rs += detail::space_weight(g, i) * std::abs(cur[i] - prev[i]);
    tv += rs;
  }
  rep.rhs_time_term = L * tv;
  const double denom = rep.rhs_gradient_term + rep.rhs_time_term;
  rep.ratio = (denom > 0.0) ? rep.lhs_energy / denom
                            : (rep.lhs_energy > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return rep;
}

}  // namespace olab
