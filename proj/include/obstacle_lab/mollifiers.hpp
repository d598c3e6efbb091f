#pragma once
// Time and space mollification of grid fields: the one-sided exponential
// convolution u_eps(x,t) = (1/eps) * integral_0^t exp((s-t)/eps) u(x,s) ds,
// the compactly supported smooth bump kernel for ordinary mollification, and
// the trapezoidal time cutoff.

#include <cstdio>
#include <vector>

#include "obstacle_lab/grid.hpp"

namespace olab {

struct MollifierParams {
  double eps = 0.1;    // exponential convolution timescale
  double sigma = 0.05; // bump kernel radius
  double h_cut = 0.1;  // cutoff ramp width

  void validate(const SpaceTimeGrid& g) const {
    if (!(eps > 0.0) || !std::isfinite(eps))
      throw std::invalid_argument("MollifierParams: eps must be positive");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw std::invalid_argument("MollifierParams: sigma must be positive");
    if (!(sigma < g.T / 2))
      throw std::invalid_argument("MollifierParams: requires sigma < T/2");
    if (!(h_cut > 0.0) || !(4.0 * h_cut < g.T))
      throw std::invalid_argument("MollifierParams: requires 4*h_cut < T");
  }
};

// One-sided exponential convolution in time, computed by the kernel's exact
// semigroup recurrence with a left-endpoint quadrature cell:
//   y(t_{k+1}) = exp(-ht/eps) * ( y(t_k) + (ht/eps) * u(t_k) ),  y(t_0) = 0.
// The quadrature weights are nonnegative with column sums <= 1, which is what
// makes the discrete L^p contraction exact (not merely approximate).
inline Field exp_time_convolve(const Field& u, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("exp_time_convolve: eps must be positive");
  const SpaceTimeGrid& g = u.grid;
  if (eps < 2.0 * g.ht)
    std::fprintf(stderr,
                 "exp_time_convolve: warning: eps=%g is below 2*ht=%g; the "
                 "convolution is under-resolved in time\n",
                 eps, 2.0 * g.ht);
  const double a = g.ht / eps;
  const double decay = std::exp(-a);
  Field out(g, 0.0);
  for (int k = 0; k < g.nt; ++k) {
    const double* uk = u.row(k);
    const double* yk = out.row(k);
    double* yk1 = out.row(k + 1);
    for (int i = 0; i <= g.nx; ++i) yk1[i] = decay * (yk[i] + a * uk[i]);
  }
  return out;
}

// Normalized discrete bump kernel exp(-sigma^2/(sigma^2 - s^2)) sampled at
// offsets s = j*h for |j*h| < sigma.  The weights sum to 1 exactly.
inline std::vector<double> friedrichs_weights(double sigma, double h) {
  if (!(sigma > 0.0) || !(h > 0.0))
    throw std::invalid_argument("friedrichs_weights: sigma and h must be positive");
  const int m = static_cast<int>(std::ceil(sigma / h - 1e-12)) - 1;
  std::vector<double> w(2 * std::max(m, 0) + 1, 0.0);
  double sum = 0.0;
  for (int j = -m; j <= m; ++j) {
    const double s = j * h;
    const double v = std::exp(-sigma * sigma / (sigma * sigma - s * s));
    w[j + m] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

// Time levels at which the centered kernel of radius sigma fits inside [0, T].
inline std::pair<int, int> friedrichs_valid_band(const SpaceTimeGrid& g,
                                                 double sigma) {
  const int k_lo = static_cast<int>(std::ceil(sigma / g.ht - 1e-12));
  const int k_hi = static_cast<int>(std::floor((g.T - sigma) / g.ht + 1e-12));
  if (k_lo > k_hi)
    throw std::invalid_argument(
        "friedrichs_valid_band: sigma leaves no valid time band (needs sigma <= T/2)");
  return {k_lo, k_hi};
}

// Centered bump mollification of a single time level.  Errors outside the
// valid band, where the kernel would poke past the time interval.
inline std::vector<double> friedrichs_time_mollify_row(const Field& u,
                                                       double sigma, int k) {
  const SpaceTimeGrid& g = u.grid;
  const auto [k_lo, k_hi] = friedrichs_valid_band(g, sigma);
  if (k < k_lo || k > k_hi)
    throw std::invalid_argument(
        "friedrichs_time_mollify_row: level k=" + std::to_string(k) +
        " is outside the valid band [" + std::to_string(k_lo) + ", " +
        std::to_string(k_hi) + "] for sigma=" + detail::fmt_double(sigma));
  const std::vector<double> w = friedrichs_weights(sigma, g.ht);
  const int m = (static_cast<int>(w.size()) - 1) / 2;
  std::vector<double> out(g.nx + 1, 0.0);
  for (int j = -m; j <= m; ++j) {
    const double* row = u.row(k - j);
    const double wj = w[j + m];
    for (int i = 0; i <= g.nx; ++i) out[i] += wj * row[i];
  }
  return out;
}

// Whole-field bump mollification in time.  Levels inside the valid band are
// convolved; levels outside it are copied unchanged (they cannot be mollified
// without data beyond the cylinder).
inline Field friedrichs_time_mollify(const Field& u, double sigma) {
  const SpaceTimeGrid& g = u.grid;
  const auto [k_lo, k_hi] = friedrichs_valid_band(g, sigma);
  Field out = u;
  for (int k = k_lo; k <= k_hi; ++k) {
    const std::vector<double> row = friedrichs_time_mollify_row(u, sigma, k);
    std::copy(row.begin(), row.end(), out.row(k));
  }
  return out;
}

// Bump mollification of every time slice in space, treating the field as zero
// outside (x_min, x_max).  Near the walls the kernel therefore averages in
// zeros, which is the behavior the compactly supported obstacles rely on.
inline Field space_mollify_zero_extend(const Field& u, double sigma) {
  const SpaceTimeGrid& g = u.grid;
  const std::vector<double> w = friedrichs_weights(sigma, g.hx);
  const int m = (static_cast<int>(w.size()) - 1) / 2;
  Field out(g, 0.0);
  for (int k = 0; k <= g.nt; ++k) {
    const double* row = u.row(k);
    double* orow = out.row(k);
    for (int i = 0; i <= g.nx; ++i) {
      double acc = 0.0;
      for (int j = -m; j <= m; ++j) {
        const int ii = i - j;
        if (ii >= 0 && ii <= g.nx) acc += w[j + m] * row[ii];
      }
      orow[i] = acc;
    }
  }
  return out;
}

// Piecewise-linear plateau cutoff in time: 0 up to h, ramps to 1 over
// [h, 2h], holds 1 until T-2h, ramps back down, 0 from T-h on.
inline std::vector<double> cutoff_chi(const SpaceTimeGrid& g, double h_cut) {
  if (!(h_cut > 0.0) || !(4.0 * h_cut < g.T))
    throw std::invalid_argument("cutoff_chi: requires 0 < h_cut and 4*h_cut < T");
  std::vector<double> chi(g.nt + 1, 0.0);
  for (int k = 0; k <= g.nt; ++k) {
    const double t = g.t(k);
    double v = 0.0;
    if (t <= h_cut || t >= g.T - h_cut)
      v = 0.0;
    else if (t < 2.0 * h_cut)
      v = (t - h_cut) / h_cut;
    else if (t > g.T - 2.0 * h_cut)
      v = (g.T - h_cut - t) / h_cut;
    else
      v = 1.0;
    chi[k] = v;
  }
  return chi;
}

}  // namespace olab
