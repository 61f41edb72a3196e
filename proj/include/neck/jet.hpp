#pragma once

// Second-order jets in (r, x_n) without the mixed derivative: enough to
// apply L u = u_rr + (n-2)/r u_r - c/r^2 u + u_nn to closed-form barriers
// by exact differentiation.

#include <cmath>

namespace neck {

struct Jet {
  double v = 0.0;
  double r = 0.0;
  double n = 0.0;
  double rr = 0.0;
  double nn = 0.0;

  static Jet constant(double c) { return {c, 0, 0, 0, 0}; }
  static Jet radial(double r) { return {r, 1, 0, 0, 0}; }
  static Jet vertical(double x) { return {x, 0, 1, 0, 0}; }
  /// A function of r alone with value f, slope f1 and curvature f2.
  static Jet of_r(double f, double f1, double f2) { return {f, f1, 0, f2, 0}; }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  return {a.v + b.v, a.r + b.r, a.n + b.n, a.rr + b.rr, a.nn + b.nn};
}
inline Jet operator-(const Jet& a, const Jet& b) {
  return {a.v - b.v, a.r - b.r, a.n - b.n, a.rr - b.rr, a.nn - b.nn};
}
inline Jet operator*(double c, const Jet& a) { return {c * a.v, c * a.r, c * a.n, c * a.rr, c * a.nn}; }
inline Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.r * b.v + a.v * b.r, a.n * b.v + a.v * b.n,
          a.rr * b.v + 2.0 * a.r * b.r + a.v * b.rr, a.nn * b.v + 2.0 * a.n * b.n + a.v * b.nn};
}

/// a^p for a.v > 0.
inline Jet pow(const Jet& a, double p) {
  const double f = std::pow(a.v, p);
  const double f1 = p * std::pow(a.v, p - 1.0);
  const double f2 = p * (p - 1.0) * std::pow(a.v, p - 2.0);
  return {f, f1 * a.r, f1 * a.n, f1 * a.rr + f2 * a.r * a.r, f1 * a.nn + f2 * a.n * a.n};
}

/// L applied to a jet evaluated at radius r.
inline double apply_mode_operator(const Jet& u, int dim, double potential, double r) {
  return u.rr + (dim - 2.0) / r * u.r - potential / (r * r) * u.v + u.nn;
}

}  // namespace neck
