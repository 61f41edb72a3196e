#include "neck/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "neck/errors.hpp"
#include "neck/jet.hpp"

namespace neck {

double feasibility_margin(int n, int k, double xi, double beta, double b) {
  const double K = angular_eigenvalue(n, k);
  return xi * xi + (n - 3.0 + b + 2.0 * beta) * xi - K + (n - 3.0 + beta) * beta;
}

BarrierParams make_barrier_params(int n, int k, double xi, double beta, double b) {
  if (!(xi > 0.0 && beta > 0.0 && b > 0.0)) {
    throw DomainError("barrier parameters xi, beta, b must be positive");
  }
  BarrierParams p;
  p.n = n;
  p.k = k;
  p.alpha_k = alpha_k(n, k);
  p.xi = xi;
  p.beta = beta;
  p.b = b;
  p.margin = feasibility_margin(n, k, xi, beta, b);
  return p;
}

BarrierParams corner_params(int n, int k, double xi, double corner_delta) {
  if (corner_delta < 0.0) throw DomainError("corner_delta must be nonnegative");
  const double beta = alpha_k(n, k) - xi + corner_delta;
  const double b = 2.0 + 2.0 * beta / xi + corner_delta;
  BarrierParams p = make_barrier_params(n, k, xi, beta, b);
  p.corner_delta = corner_delta;
  return p;
}

BarrierParams with_case2(BarrierParams p, const BoundaryProfile& profile) {
  const double k1 = profile.kappa1();
  const double k2 = profile.kappa2();
  if (!(k1 > 0.0) || k2 < 0.0) {
    throw DomainError("Case-2 barrier needs kappa1 > 0 and kappa2 >= 0; use Case 1");
  }
  const double kap = profile.kappa();
  const double scale = 2.0 * (p.beta + p.xi) / (p.xi * kap);
  auto pick = [](double bound) { return bound > 0.0 ? 1.25 * bound : 0.1; };
  p.case2 = Case2Weights{pick(scale * k1), pick(scale * k2)};
  p.margin = feasibility_margin(p.n, p.k, p.xi, p.beta, p.case2->b1 + p.case2->b2);
  return p;
}

double normal_derivative(const DomainSpec& domain, Side side, double r, const BarrierEval& e) {
  const Vec2 nu = outward_normal(domain, side, r);
  return nu.r * e.d_r + nu.n * e.d_n;
}

BarrierEval phi_case1(const BarrierParams& p, double r, double x) {
  if (!(r > 0.0)) throw DomainError("barrier L-image is singular on the axis (r <= 0)");
  const double K = angular_eigenvalue(p.n, p.k);
  const double a = p.alpha_k;
  const double x2 = x * x;
  const double rho1 = r * r + 2.0 * x2;
  const double rho2 = r * r + p.b * x2;
  const double rb = std::pow(r, p.beta);

  // L phi_1: the first bracket vanishes by the definition of alpha_k.
  const double t1[3] = {(a * a + (p.n - 1.0) * a - K) * std::pow(rho1, 0.5 * a - 1.0),
                        2.0 * a * (a - 2.0) * std::pow(rho1, 0.5 * a - 2.0) * x2,
                        -2.0 * K / (r * r) * std::pow(rho1, 0.5 * a - 1.0) * x2};
  // L phi_2.
  const double f = feasibility_margin(p.n, p.k, p.xi, p.beta, p.b);
  const double t2[3] = {
      f * rb * std::pow(rho2, 0.5 * p.xi - 1.0),
      p.b * (p.b - 1.0) * p.xi * (p.xi - 2.0) * rb * std::pow(rho2, 0.5 * p.xi - 2.0) * x2,
      ((p.n - 3.0 + p.beta) * p.beta - K) * p.b * std::pow(r, p.beta - 2.0) *
          std::pow(rho2, 0.5 * p.xi - 1.0) * x2};

  BarrierEval e;
  e.value = std::pow(rho1, 0.5 * a) + rb * std::pow(rho2, 0.5 * p.xi);
  for (int i = 0; i < 3; ++i) {
    e.L += t1[i] + t2[i];
    e.L_scale += std::abs(t1[i]) + std::abs(t2[i]);
  }
  const double g1 = std::pow(rho1, 0.5 * a - 1.0);
  const double g2 = std::pow(rho2, 0.5 * p.xi - 1.0);
  e.d_r = a * r * g1 + p.beta * std::pow(r, p.beta - 1.0) * std::pow(rho2, 0.5 * p.xi) +
          p.xi * rb * r * g2;
  e.d_n = 2.0 * a * x * g1 + p.b * p.xi * x * rb * g2;
  return e;
}

namespace {

BarrierEval from_jet(const Jet& j, int n, double K, double r) {
  BarrierEval e;
  e.value = j.v;
  e.L = apply_mode_operator(j, n, K, r);
  e.L_scale = std::abs(j.rr) + std::abs((n - 2.0) / r * j.r) + std::abs(K / (r * r) * j.v) +
              std::abs(j.nn);
  e.d_r = j.r;
  e.d_n = j.n;
  return e;
}

Jet leading_jet(double alpha, double r, double x) {
  const Jet R = Jet::radial(r);
  const Jet X = Jet::vertical(x);
  return pow(R * R + 2.0 * (X * X), 0.5 * alpha);
}

}  // namespace

BarrierEval phi_case1_jet(const BarrierParams& p, double r, double x) {
  if (!(r > 0.0)) throw DomainError("barrier L-image is singular on the axis (r <= 0)");
  const Jet R = Jet::radial(r);
  const Jet X = Jet::vertical(x);
  const Jet phi = leading_jet(p.alpha_k, r, x) +
                  pow(R, p.beta) * pow(R * R + p.b * (X * X), 0.5 * p.xi);
  return from_jet(phi, p.n, angular_eigenvalue(p.n, p.k), r);
}

BarrierEval phi_case2(const BarrierParams& p, const DomainSpec& d, double r, double x) {
  if (!p.case2) throw ConfigError("phi_case2 needs Case-2 weights");
  const auto& prof = d.profile();
  if (!(prof.kappa1() > 0.0) || prof.kappa2() < 0.0) {
    throw DomainError("Case-2 barrier needs kappa1 > 0 and kappa2 >= 0; use Case 1");
  }
  if (!(r > 0.0)) throw DomainError("barrier L-image is singular on the axis (r <= 0)");
  const Jet R = Jet::radial(r);
  const Jet X = Jet::vertical(x);
  const Jet upper = Jet::of_r(boundary_height(d, Side::Upper, r), boundary_slope(d, Side::Upper, r),
                              boundary_curvature(d, Side::Upper, r));
  const Jet lower = Jet::of_r(boundary_height(d, Side::Lower, r), boundary_slope(d, Side::Lower, r),
                              boundary_curvature(d, Side::Lower, r));
  const Jet du = X - upper;
  const Jet dl = X - lower;
  const Jet inner = R * R + p.case2->b1 * (du * du) + p.case2->b2 * (dl * dl);
  const Jet phi = leading_jet(p.alpha_k, r, x) + pow(R, p.beta) * pow(inner, 0.5 * p.xi);
  return from_jet(phi, p.n, angular_eigenvalue(p.n, p.k), r);
}

BarrierEval phi(const BarrierParams& p, const DomainSpec& d, double r, double x) {
  return p.case2 ? phi_case2(p, d, r, x) : phi_case1(p, r, x);
}

TildeParams make_tilde_params(int n, int k, std::optional<double> beta1) {
  const double a = alpha_k(n, k);
  TildeParams t;
  t.n = n;
  t.k = k;
  t.beta1 = beta1.value_or(0.25 * a);
  t.beta2 = a - t.beta1;
  if (!(t.beta1 > 0.0 && t.beta2 > t.beta1)) {
    throw DomainError("lower barrier needs beta2 > beta1 > 0 with beta1 + beta2 = alpha_k");
  }
  return t;
}

BarrierEval tilde_phi(const TildeParams& p, double r, double x) {
  const double a = alpha_k(p.n, p.k);
  if (!(p.beta1 > 0.0 && p.beta2 > p.beta1) || std::abs(p.beta1 + p.beta2 - a) > 1e-12) {
    throw DomainError("lower barrier needs beta2 > beta1 > 0 with beta1 + beta2 = alpha_k");
  }
  if (!(r > 0.0)) throw DomainError("barrier L-image is singular on the axis (r <= 0)");
  const double K = angular_eigenvalue(p.n, p.k);
  const double b1 = p.beta1, b2 = p.beta2;
  const double x2 = x * x;
  const double rho = r * r + 4.0 * x2;
  const double rb = std::pow(r, b1);
  const double bracket = b2 * b2 + (p.n + 1.0 + 2.0 * b1) * b2 - K + (p.n - 3.0 + b1) * b1;
  const double t[3] = {bracket * rb * std::pow(rho, 0.5 * b2 - 1.0),
                       12.0 * b2 * (b2 - 2.0) * rb * std::pow(rho, 0.5 * b2 - 2.0) * x2,
                       4.0 * ((p.n - 3.0 + b1) * b1 - K) * std::pow(r, b1 - 2.0) *
                           std::pow(rho, 0.5 * b2 - 1.0) * x2};
  BarrierEval e;
  e.value = rb * std::pow(rho, 0.5 * b2);
  for (double term : t) {
    e.L += term;
    e.L_scale += std::abs(term);
  }
  e.d_r = b1 * std::pow(r, b1 - 1.0) * std::pow(rho, 0.5 * b2) +
          b2 * rb * r * std::pow(rho, 0.5 * b2 - 1.0);
  e.d_n = 4.0 * b2 * x * rb * std::pow(rho, 0.5 * b2 - 1.0);
  return e;
}

namespace {

struct Shifted {
  double y1, y2, dm, sq;  // dm: midline slope, sq: sqrt(sigma)
};

Shifted shift_2d(const DomainSpec& d, double x1, double x2) {
  const auto& prof = d.profile();
  if (!(prof.kappa() > 0.0)) throw DomainError("two-dimensional barriers need kappa > 0");
  const double sigma = d.epsilon() / prof.kappa();
  const double mid = 0.5 * (prof.h1(x1) + prof.h2(x1));
  const double dmid = 0.5 * (prof.h1_prime(x1) + prof.h2_prime(x1));
  return {x1, x2 - mid, dmid, std::sqrt(sigma)};
}

}  // namespace

Eval2d phi_2d(const DomainSpec& d, double x1, double x2) {
  const Shifted y = shift_2d(d, x1, x2);
  const double p = y.y2 + y.sq, m = y.y2 - y.sq;
  const double D1 = y.y1 * y.y1 + p * p;
  const double D2 = y.y1 * y.y1 + m * m;
  Eval2d e;
  e.value = y.sq * y.y1 / D1 + y.sq * y.y1 / D2;
  const double dy1 = y.sq * ((p * p - y.y1 * y.y1) / (D1 * D1) + (m * m - y.y1 * y.y1) / (D2 * D2));
  const double dy2 = y.sq * (-2.0 * y.y1 * p / (D1 * D1) - 2.0 * y.y1 * m / (D2 * D2));
  e.d_1 = dy1 - y.dm * dy2;
  e.d_2 = dy2;
  return e;
}

Eval2d tilde_phi_2d(const DomainSpec& d, double x1, double x2) {
  const Shifted y = shift_2d(d, x1, x2);
  const double sigma = y.sq * y.sq;
  const double p = y.y2 + y.sq, m = y.y2 - y.sq;
  const double D1 = y.y1 * y.y1 + p * p;
  const double D2 = y.y1 * y.y1 + m * m;
  Eval2d e;
  e.value = std::log(D1) + std::log(D2) - 2.0 * std::log(sigma);
  const double dy1 = 2.0 * y.y1 / D1 + 2.0 * y.y1 / D2;
  const double dy2 = 2.0 * p / D1 + 2.0 * m / D2;
  e.d_1 = dy1 - y.dm * dy2;
  e.d_2 = dy2;
  return e;
}

double normal_derivative_2d(const DomainSpec& d, Side side, double x1, const Eval2d& e) {
  const Vec2 nu = outward_normal(d, side, x1);
  return nu.r * e.d_1 + nu.n * e.d_2;
}

std::string to_string(SignQuantity q) {
  switch (q) {
    case SignQuantity::LPhiLe0: return "L_phi_le_0";
    case SignQuantity::DnuPhiGe0Upper: return "dnu_phi_ge_0_upper";
    case SignQuantity::DnuPhiGe0Lower: return "dnu_phi_ge_0_lower";
    case SignQuantity::LTildeLe0: return "L_tilde_le_0";
    case SignQuantity::Dnu2d: return "dnu_2d";
  }
  return "unknown";
}

SignQuantity sign_quantity_from_string(const std::string& s) {
  for (SignQuantity q : {SignQuantity::LPhiLe0, SignQuantity::DnuPhiGe0Upper,
                         SignQuantity::DnuPhiGe0Lower, SignQuantity::LTildeLe0,
                         SignQuantity::Dnu2d}) {
    if (to_string(q) == s) return q;
  }
  throw ConfigError("unknown sign quantity '" + s + "'");
}

namespace {

// Accumulates samples of a quantity that should be <= 0 (sign = +1) or
// >= 0 (sign = -1), tracking the most wrong-signed one in traversal order.
class SignAccumulator {
 public:
  SignAccumulator(SignQuantity q, double sign, double slack) : sign_(sign), slack_(slack) {
    report_.quantity = q;
    report_.worst_margin = -sign * std::numeric_limits<double>::infinity();
  }
  void add(double value, double scale, double r, double x) {
    ++report_.n_points;
    const double oriented = sign_ * value;
    if (oriented > slack_ * scale) ++report_.n_violations;
    if (oriented > sign_ * report_.worst_margin) {
      report_.worst_margin = value;
      report_.worst_r = r;
      report_.worst_x_n = x;
    }
  }
  SignReport report() const { return report_; }

 private:
  double sign_;
  double slack_;
  SignReport report_;
};

}  // namespace

SignReport certify_sign(SignQuantity q, const BarrierParams& params, const TildeParams& tilde,
                        const DomainSpec& d, const SamplingOptions& so) {
  if (so.n_r < 1 || so.n_t < 2 || so.n_boundary < 2) throw ConfigError("sampling too coarse");
  const double R = d.R();

  if (q == SignQuantity::LPhiLe0 || q == SignQuantity::LTildeLe0) {
    if (d.n() != (q == SignQuantity::LPhiLe0 ? params.n : tilde.n)) {
      throw ConfigError("barrier dimension differs from the domain's");
    }
    SignAccumulator acc(q, 1.0, so.slack);
    for (int i = 1; i <= so.n_r; ++i) {
      const double r = R * std::pow(static_cast<double>(i) / so.n_r, 2.0);
      const double lo = boundary_height(d, Side::Lower, r);
      const double g = gap(d, r);
      for (int j = 0; j < so.n_t; ++j) {
        const double x = lo + g * j / (so.n_t - 1.0);
        const BarrierEval e = q == SignQuantity::LPhiLe0 ? phi(params, d, r, x) : tilde_phi(tilde, r, x);
        acc.add(e.L, e.L_scale, r, x);
      }
    }
    return acc.report();
  }

  if (q == SignQuantity::DnuPhiGe0Upper || q == SignQuantity::DnuPhiGe0Lower) {
    const Side side = q == SignQuantity::DnuPhiGe0Upper ? Side::Upper : Side::Lower;
    SignAccumulator acc(q, -1.0, so.slack);
    for (int i = 1; i <= so.n_boundary; ++i) {
      const double r = R * std::pow(static_cast<double>(i) / so.n_boundary, 2.0);
      const double x = boundary_height(d, side, r);
      const BarrierEval e = phi(params, d, r, x);
      const Vec2 nu = outward_normal(d, side, r);
      acc.add(nu.r * e.d_r + nu.n * e.d_n, std::abs(nu.r * e.d_r) + std::abs(nu.n * e.d_n), r, x);
    }
    return acc.report();
  }

  // Two-dimensional upper barrier on the half neck 0 < x_1 <= sqrt(eps).
  SignAccumulator acc(q, -1.0, so.slack);
  const double reach = std::min(std::sqrt(d.epsilon()), R);
  const int per_side = so.n_boundary / 2;
  for (Side side : {Side::Upper, Side::Lower}) {
    for (int i = 1; i <= per_side; ++i) {
      const double x1 = reach * i / per_side;
      const double x2 = boundary_height(d, side, x1);
      const Eval2d e = phi_2d(d, x1, x2);
      const Vec2 nu = outward_normal(d, side, x1);
      acc.add(nu.r * e.d_1 + nu.n * e.d_2, std::abs(nu.r * e.d_1) + std::abs(nu.n * e.d_2), x1, x2);
    }
  }
  return acc.report();
}

std::pair<CheckOutcome, CheckOutcome> comparison_bounds(const Field& field,
                                                        const BarrierParams& params,
                                                        const TildeParams& tilde, double C) {
  const Grid& grid = field.grid;
  const DomainSpec& d = grid.domain();
  if (d.n() < 3) throw ConfigError("comparison bounds apply to mode fields (n >= 3)");
  const int Ns = grid.Ns(), Nt = grid.Nt();
  const auto& s = grid.s();

  double sup_u = -std::numeric_limits<double>::infinity();
  double inf_u = std::numeric_limits<double>::infinity();
  double inf_phi = std::numeric_limits<double>::infinity();
  double sup_tilde = 0.0;
  for (int j = 0; j <= Nt; ++j) {
    const double x = grid.x_n(Ns, j);
    sup_u = std::max(sup_u, field.values(Ns, j));
    inf_u = std::min(inf_u, field.values(Ns, j));
    inf_phi = std::min(inf_phi, phi(params, d, s[Ns], x).value);
    sup_tilde = std::max(sup_tilde, tilde_phi(tilde, s[Ns], x).value);
  }
  const double A = sup_u / inf_phi;
  const double B = inf_u / sup_tilde;

  CheckOutcome upper;
  upper.name = "comparison_upper";
  upper.measured = -std::numeric_limits<double>::infinity();
  upper.threshold = C;
  CheckOutcome lower;
  lower.name = "comparison_lower";
  lower.measured = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= Ns; ++i) {
    for (int j = 0; j <= Nt; ++j) {
      const double x = grid.x_n(i, j);
      const double u = field.values(i, j);
      const double excess = (u - A * phi(params, d, s[i], x).value) / d.epsilon();
      if (excess > upper.measured) {
        upper.measured = excess;
        upper.location = {s[i], x};
      }
      const double gap_lo = u - B * tilde_phi(tilde, s[i], x).value;
      if (gap_lo < lower.measured) {
        lower.measured = gap_lo;
        lower.location = {s[i], x};
      }
    }
  }
  upper.passed = upper.measured <= C;
  lower.threshold = -1e-8;
  lower.passed = lower.measured >= lower.threshold;
  upper.note = "max (u - A phi)/eps, A = sup u(R)/inf phi(R)";
  lower.note = "min (u - B tilde_phi), B = inf u(R)/sup tilde_phi(R)";
  return {upper, lower};
}

}  // namespace neck
