#pragma once
// Source-type self-similar solution of u_t = (|u_x|^{p-2} u_x)_x on the line
// for p > 2:
//   u(x,t) = t^{-a} * [ C - kp * |x * t^{-a}|^{p/(p-1)} ]_+^{(p-1)/(p-2)},
// with a = 1/(2(p-1)) and kp = ((p-2)/p) * a^{1/(p-1)}.  The profile has a
// compact, expanding support and exact conservation of mass, which makes it
// the reference solution for convergence measurements.

#include <cmath>
#include <stdexcept>

namespace olab {

inline double barenblatt_value(double x, double t, double p, double C) {
  if (!(p > 2.0)) throw std::invalid_argument("barenblatt_value: requires p > 2");
  if (!(t > 0.0)) throw std::invalid_argument("barenblatt_value: requires t > 0");
  if (!(C > 0.0)) throw std::invalid_argument("barenblatt_value: requires C > 0");
  const double a = 1.0 / (2.0 * (p - 1.0));
  const double kp = ((p - 2.0) / p) * std::pow(a, 1.0 / (p - 1.0));
  const double xi = std::abs(x) * std::pow(t, -a);
  const double core = C - kp * std::pow(xi, p / (p - 1.0));
  if (core <= 0.0) return 0.0;
  return std::pow(t, -a) * std::pow(core, (p - 1.0) / (p - 2.0));
}

// Half-width of the support at time t: the profile vanishes for
// |x| >= r(t) = (C/kp)^{(p-1)/p} * t^{a}.
inline double barenblatt_support_radius(double t, double p, double C) {
  if (!(p > 2.0)) throw std::invalid_argument("barenblatt_support_radius: requires p > 2");
  if (!(t > 0.0)) throw std::invalid_argument("barenblatt_support_radius: requires t > 0");
  const double a = 1.0 / (2.0 * (p - 1.0));
  const double kp = ((p - 2.0) / p) * std::pow(a, 1.0 / (p - 1.0));
  return std::pow(C / kp, (p - 1.0) / p) * std::pow(t, a);
}

}  // namespace olab
