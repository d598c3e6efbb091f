#pragma once
// Uniform space-time grids on the cylinder (x_min, x_max) x (0, T) and the
// scalar node fields living on them.  Everything downstream (mollifiers,
// solvers, residuals) works on these value types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace olab {

inline constexpr double kPi = 3.14159265358979323846;

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Node layout: x_i = x_min + i*hx for i = 0..nx, t_k = k*ht for k = 0..nt.
struct SpaceTimeGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  int nx = 4;          // number of space cells; nx+1 nodes
  double T = 1.0;
  int nt = 4;          // number of time steps; nt+1 levels
  double hx = 0.25;
  double ht = 0.25;

  double x(int i) const { return x_min + i * hx; }
  double t(int k) const { return k * ht; }
  int n_space_nodes() const { return nx + 1; }
  int n_time_levels() const { return nt + 1; }

  // Bottom slice plus the two lateral walls (the top slice is not part of it).
  bool on_parabolic_boundary(int i, int k) const {
    return k == 0 || i == 0 || i == nx;
  }

  bool same_layout(const SpaceTimeGrid& o) const {
    return x_min == o.x_min && x_max == o.x_max && nx == o.nx && T == o.T &&
           nt == o.nt;
  }
};

inline SpaceTimeGrid make_cylinder_grid(double x_min, double x_max, int nx,
                                        double T, int nt) {
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(T)))
    throw std::invalid_argument("make_cylinder_grid: non-finite extent");
  if (!(x_max > x_min))
    throw std::invalid_argument("make_cylinder_grid: requires x_max > x_min");
  if (!(T > 0.0))
    throw std::invalid_argument("make_cylinder_grid: requires T > 0");
  if (nx < 4 || nt < 4)
    throw std::invalid_argument("make_cylinder_grid: requires nx >= 4 and nt >= 4");
  SpaceTimeGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.nx = nx;
  g.T = T;
  g.nt = nt;
  g.hx = (x_max - x_min) / nx;
  g.ht = T / nt;
  return g;
}

// Scalar values at every grid node, time-major: row k holds slice t_k.
struct Field {
  SpaceTimeGrid grid;
  std::vector<double> values;  // size (nt+1) * (nx+1)

  Field() = default;
  explicit Field(const SpaceTimeGrid& g, double fill = 0.0)
      : grid(g),
        values(static_cast<size_t>(g.nt + 1) * (g.nx + 1), fill) {}

  double& at(int k, int i) {
    return values[static_cast<size_t>(k) * (grid.nx + 1) + i];
  }
  double at(int k, int i) const {
    return values[static_cast<size_t>(k) * (grid.nx + 1) + i];
  }
  const double* row(int k) const {
    return values.data() + static_cast<size_t>(k) * (grid.nx + 1);
  }
  double* row(int k) {
    return values.data() + static_cast<size_t>(k) * (grid.nx + 1);
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

// Checks the Field invariant (finite values, matching dimensions).
inline void validate_field(const Field& f, const char* what = "field") {
  const size_t want = static_cast<size_t>(f.grid.nt + 1) * (f.grid.nx + 1);
  if (f.values.size() != want)
    throw std::invalid_argument(std::string(what) +
                                ": field dimensions do not match its grid");
  for (int k = 0; k <= f.grid.nt; ++k)
    for (int i = 0; i <= f.grid.nx; ++i)
      if (!std::isfinite(f.at(k, i)))
        throw std::invalid_argument(
            std::string(what) + ": non-finite value at node (i=" +
            std::to_string(i) + ", k=" + std::to_string(k) + ")");
}

inline Field sample_function(const SpaceTimeGrid& g,
                             const std::function<double(double, double)>& f) {
  Field out(g);
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) {
      const double v = f(g.x(i), g.t(k));
      if (!std::isfinite(v))
        throw std::invalid_argument(
            "sample_function: non-finite sample at node (i=" +
            std::to_string(i) + ", k=" + std::to_string(k) +
            "), x=" + detail::fmt_double(g.x(i)) +
            ", t=" + detail::fmt_double(g.t(k)));
      out.at(k, i) = v;
    }
  return out;
}

// Axis-aligned sub-box of grid nodes [i_lo, i_hi] x [k_lo, k_hi].
struct Cylinder {
  int i_lo = 0, i_hi = 0, k_lo = 0, k_hi = 0;
};

// Strict containment in the open cylinder: used by the Poisson modification.
inline void require_strictly_inside(const Cylinder& c, const SpaceTimeGrid& g,
                                    const char* what = "box") {
  if (!(0 < c.i_lo && c.i_lo < c.i_hi && c.i_hi < g.nx && 0 < c.k_lo &&
        c.k_lo < c.k_hi && c.k_hi < g.nt))
    throw std::invalid_argument(
        std::string(what) +
        ": sub-cylinder must satisfy 0 < i_lo < i_hi < nx and 0 < k_lo < k_hi < nt");
}

// Windowed lower regularization: out(k,i) = min of u over the node window
// |k'-k| <= r, |i'-i| <= r clipped to the grid.  r = 0 is the identity.
// Computed separably (row minima, then column minima over the squares).
inline Field regularize_essliminf(const Field& u, int r) {
  if (r < 0) throw std::invalid_argument("regularize_essliminf: r must be >= 0");
  if (r == 0) return u;
  const SpaceTimeGrid& g = u.grid;
  Field rowmin(g), out(g);
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) {
      const int lo = std::max(0, i - r), hi = std::min(g.nx, i + r);
      double m = u.at(k, lo);
      for (int j = lo + 1; j <= hi; ++j) m = std::min(m, u.at(k, j));
      rowmin.at(k, i) = m;
    }
  for (int i = 0; i <= g.nx; ++i)
    for (int k = 0; k <= g.nt; ++k) {
      const int lo = std::max(0, k - r), hi = std::min(g.nt, k + r);
      double m = rowmin.at(lo, i);
      for (int j = lo + 1; j <= hi; ++j) m = std::min(m, rowmin.at(j, i));
      out.at(k, i) = m;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature over a single spatial slice: trapezoid rule for node values,
// cell rule for divided differences.

inline double lp_norm_1d(const std::vector<double>& v, double hx, double p) {
  if (v.size() < 2) throw std::invalid_argument("lp_norm_1d: needs >= 2 nodes");
  if (!(hx > 0.0) || !(p >= 1.0))
    throw std::invalid_argument("lp_norm_1d: requires hx > 0 and p >= 1");
  const int n = static_cast<int>(v.size()) - 1;
  double s = 0.5 * (std::pow(std::abs(v[0]), p) + std::pow(std::abs(v[n]), p));
  for (int i = 1; i < n; ++i) s += std::pow(std::abs(v[i]), p);
  return std::pow(hx * s, 1.0 / p);
}

inline double w1p_norm_1d(const std::vector<double>& v, double hx, double p) {
  const double lp = lp_norm_1d(v, hx, p);
  const int n = static_cast<int>(v.size()) - 1;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::pow(std::abs((v[i + 1] - v[i]) / hx), p);
  return std::pow(std::pow(lp, p) + hx * s, 1.0 / p);
}

// ---------------------------------------------------------------------------
// CSV serialization.  One header line carrying the grid, then one row per
// time level with nx+1 comma-separated values.

inline void write_field_csv(const Field& f, std::ostream& os) {
  const SpaceTimeGrid& g = f.grid;
  os << "# nx=" << g.nx << " nt=" << g.nt
     << " x_min=" << detail::fmt_double(g.x_min)
     << " x_max=" << detail::fmt_double(g.x_max)
     << " T=" << detail::fmt_double(g.T) << "\n";
  for (int k = 0; k <= g.nt; ++k) {
    for (int i = 0; i <= g.nx; ++i) {
      if (i) os << ',';
      os << detail::fmt_double(f.at(k, i));
    }
    os << "\n";
  }
}

inline void write_field_csv(const Field& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_field_csv: cannot open " + path);
  write_field_csv(f, os);
}

inline Field read_field_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("# nx=", 0) != 0)
    throw std::runtime_error("read_field_csv: missing grid header line");
  int nx = 0, nt = 0;
  double x_min = 0, x_max = 0, T = 0;
  if (std::sscanf(header.c_str(), "# nx=%d nt=%d x_min=%lf x_max=%lf T=%lf",
                  &nx, &nt, &x_min, &x_max, &T) != 5)
    throw std::runtime_error("read_field_csv: malformed grid header: " + header);
  Field f(make_cylinder_grid(x_min, x_max, nx, T, nt));
  std::string line;
  for (int k = 0; k <= nt; ++k) {
    if (!std::getline(is, line))
      throw std::runtime_error("read_field_csv: truncated at time row " +
                               std::to_string(k));
    std::istringstream row(line);
    std::string cell;
    for (int i = 0; i <= nx; ++i) {
      if (!std::getline(row, cell, ','))
        throw std::runtime_error("read_field_csv: row " + std::to_string(k) +
                                 " has fewer than nx+1 values");
      f.at(k, i) = std::strtod(cell.c_str(), nullptr);
    }
  }
  validate_field(f, "read_field_csv");
  return f;
}

inline Field read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_field_csv: cannot open " + path);
  return read_field_csv(is);
}

}  // namespace olab
