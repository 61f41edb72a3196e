#include "neck/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "neck/errors.hpp"

namespace neck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_region(const Grid& g, int i, double fraction) {
  return std::abs(g.s()[i]) <= fraction * g.domain().R() * (1.0 + 1e-12);
}

void require_consistent(const std::vector<Field>& fields) {
  if (fields.size() < 3) throw ConfigError("sweep checks need at least 3 fields");
  const Field& f0 = fields.front();
  const DomainSpec& d0 = f0.grid.domain();
  for (const Field& f : fields) {
    const DomainSpec& d = f.grid.domain();
    if (d.n() != d0.n() || d.R() != d0.R() || d.profile().kind() != d0.profile().kind() ||
        d.profile().kappa1() != d0.profile().kappa1() ||
        d.profile().kappa2() != d0.profile().kappa2() || f.grid.Ns() != f0.grid.Ns() ||
        f.grid.Nt() != f0.grid.Nt() || f.angular_coefficient != f0.angular_coefficient) {
      throw ConfigError("sweep fields differ in geometry or problem data");
    }
  }
}

CheckOutcome outcome(std::string name, double measured, double threshold, bool le) {
  CheckOutcome c;
  c.name = std::move(name);
  c.measured = measured;
  c.threshold = threshold;
  c.passed = le ? measured <= threshold : measured >= threshold;
  return c;
}

}  // namespace

double max_gradient(const Field& field, const GradientField& grad, double fraction,
                    double min_r) {
  double m = 0.0;
  for (int i = 0; i <= field.grid.Ns(); ++i) {
    if (!in_region(field.grid, i, fraction) || std::abs(field.grid.s()[i]) < min_r) continue;
    m = std::max(m, grad.mode_mag.row(i).maxCoeff());
  }
  return m;
}

CheckOutcome check_dn_bound(const std::vector<Field>& fields, double fraction) {
  require_consistent(fields);
  double lo = kInf, hi = 0.0, scale = 0.0;
  std::vector<double> loc;
  for (const Field& f : fields) {
    const GradientField g = gradient(f);
    double m = 0.0;
    for (int i = 0; i <= f.grid.Ns(); ++i) {
      if (!in_region(f.grid, i, fraction)) continue;
      m = std::max(m, g.d_n.row(i).cwiseAbs().maxCoeff());
    }
    if (m < lo) loc = {f.grid.domain().epsilon()};
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    scale = std::max(scale, f.values.cwiseAbs().maxCoeff() / f.grid.domain().R());
  }
  CheckOutcome c;
  if (hi <= 1e-8 * scale) {
    c = outcome("dn_bound", 1.0, 3.0, true);
    c.note = "d_n vanishes at every eps";
  } else {
    c = outcome("dn_bound", lo > 0.0 ? hi / lo : kInf, 3.0, true);
    c.note = "max_eps M / min_eps M with M = max|d_n| over the neck";
  }
  c.location = loc;
  return c;
}

CheckOutcome check_local_gradient_lemma(const Field& field, double fraction) {
  const Grid& g = field.grid;
  const double eps = g.domain().epsilon();
  const auto& s = g.s();
  const int Ns = g.Ns();
  const GradientField grad = gradient(field);
  std::vector<double> col_sup(Ns + 1);
  for (int i = 0; i <= Ns; ++i) col_sup[i] = field.values.row(i).cwiseAbs().maxCoeff();

  CheckOutcome c = outcome("local_gradient_lemma", 0.0, 50.0, true);
  double worst = 0.0;
  for (int i = 0; i <= Ns; ++i) {
    if (!in_region(g, i, fraction)) continue;
    const double rho = std::sqrt(eps + s[i] * s[i]);
    double sup = 0.0;
    for (int m = 0; m <= Ns; ++m) {
      if (std::abs(s[m] - s[i]) <= 2.0 * rho) sup = std::max(sup, col_sup[m]);
    }
    const double denom = sup + eps + rho * rho;
    for (int j = 0; j <= g.Nt(); ++j) {
      const double ratio = grad.mode_mag(i, j) * rho / denom;
      if (ratio > worst) {
        worst = ratio;
        c.location = {s[i], g.x_n(i, j)};
      }
    }
  }
  c.measured = worst;
  c.passed = worst <= c.threshold;
  c.note = "|grad u| rho / (local sup|u| + eps + rho^2)";
  return c;
}

CheckOutcome check_pointwise_gradient_lemma(const Field& field, double fraction) {
  const Grid& g = field.grid;
  const double eps = g.domain().epsilon();
  const auto& s = g.s();
  const GradientField grad = gradient(field);
  CheckOutcome c = outcome("pointwise_gradient_lemma", 0.0, 50.0, true);
  c.required = false;
  double worst = 0.0;
  for (int i = 0; i <= g.Ns(); ++i) {
    if (!in_region(g, i, fraction)) continue;
    const double rho = std::sqrt(eps + s[i] * s[i]);
    for (int j = 0; j <= g.Nt(); ++j) {
      const double u = std::abs(field.values(i, j));
      const double num = grad.mode_mag(i, j) * rho;
      const double ratio = u > 0.0 ? num / u : (num > 0.0 ? kInf : 0.0);
      if (ratio > worst) {
        worst = ratio;
        c.location = {s[i], g.x_n(i, j)};
      }
    }
  }
  c.measured = worst;
  c.passed = worst <= c.threshold;
  c.note = "|grad u| rho / |u|; unbounded at zeros of u";
  return c;
}

CheckOutcome check_local_gradient_stability(const std::vector<CheckOutcome>& per_eps) {
  if (per_eps.empty()) throw ConfigError("no local-lemma outcomes");
  double lo = kInf, hi = 0.0;
  for (const auto& o : per_eps) {
    lo = std::min(lo, o.measured);
    hi = std::max(hi, o.measured);
  }
  CheckOutcome c = outcome("local_gradient_stability", lo > 0.0 ? hi / lo : (hi > 0.0 ? kInf : 1.0),
                           2.0, true);
  c.note = "max/min of the local-lemma ratio across eps";
  return c;
}

CheckOutcome check_boundary_identity(const Field& field, double fraction) {
  const Grid& g = field.grid;
  const DomainSpec& d = g.domain();
  if (d.n() != 2) throw ConfigError("boundary identity applies to n = 2 fields");
  if (d.profile().perturbation() && d.profile().perturbation()->amplitude != 0.0) {
    throw ConfigError("boundary identity needs an unperturbed quadratic profile");
  }
  const int Ns = g.Ns(), Nt = g.Nt();
  const auto& s = g.s();
  const double dt = g.t()[1] - g.t()[0];
  const GradientField grad = gradient(field);
  const Eigen::MatrixXd G =
      grad.d_r.cwiseProduct(grad.d_r) + grad.d_n.cwiseProduct(grad.d_n);
  const bool flat = d.profile().kind() == ProfileKind::Flat;

  double gmax = 0.0;
  for (int i = 0; i <= Ns; ++i) {
    if (in_region(g, i, fraction)) gmax = std::max({gmax, G(i, 0), G(i, Nt)});
  }

  CheckOutcome c = outcome("boundary_identity", 0.0, 0.1, true);
  double worst = 0.0;
  for (Side side : {Side::Upper, Side::Lower}) {
    const int j = side == Side::Upper ? Nt : 0;
    const double t = g.t()[j];
    const double sgn = side == Side::Upper ? 1.0 : -1.0;
    for (int i = 1; i < Ns; ++i) {
      if (!in_region(g, i, fraction) || G(i, j) < 0.01 * gmax) continue;
      const double r = s[i];
      const Weights3 ws = first_derivative_weights(s[i - 1], s[i], s[i + 1], s[i]);
      const double Gs = ws.w0 * G(i - 1, j) + ws.w1 * G(i, j) + ws.w2 * G(i + 1, j);
      const double Gt = side == Side::Upper
                            ? (3.0 * G(i, Nt) - 4.0 * G(i, Nt - 1) + G(i, Nt - 2)) / (2.0 * dt)
                            : (-3.0 * G(i, 0) + 4.0 * G(i, 1) - G(i, 2)) / (2.0 * dt);
      const double gp = gap(d, r);
      const double t_r = -(boundary_slope(d, Side::Lower, r) + t * gap_prime(d, r)) / gp;
      const double Gr = Gs + t_r * Gt;
      const double Gn = Gt / gp;
      const Vec2 nu = outward_normal(d, side, r);
      const double lhs = nu.r * Gr + nu.n * Gn;
      const double hp = boundary_slope(d, side, r);
      const double u1 = grad.d_r(i, j);
      const double rhs = sgn * 2.0 * boundary_curvature(d, side, r) * u1 * u1 / std::sqrt(1.0 + hp * hp);
      const double denom = flat ? gmax / d.R() : std::abs(rhs);
      const double mismatch = denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0;
      if (mismatch > worst) {
        worst = mismatch;
        c.location = {r, g.x_n(i, j)};
      }
    }
  }
  c.measured = worst;
  c.passed = worst <= c.threshold;
  c.note = "relative mismatch of d_nu|grad u|^2 against 2 h'' u_1^2 / sqrt(1+h'^2)";
  return c;
}

QParams default_q_params(const DomainSpec& d, QVariant variant) {
  const auto& p = d.profile();
  auto pick = [](double bound) { return bound > 0.0 ? 1.25 * bound : 0.1; };
  QParams q;
  q.variant = variant;
  if (variant == QVariant::Case1) {
    q.A = pick(8.0 * std::max(p.kappa1(), -p.kappa2()));
    q.B = q.A - d.n() + 3.0;
  } else {
    if (!(p.kappa() > 0.0)) throw ConfigError("Case-2 Q needs kappa > 0");
    q.A1 = pick(8.0 * p.kappa2() / p.kappa());
    q.A2 = pick(4.0 * p.kappa1());
    q.B = q.A1 + q.A2 - d.n() + 3.0;
  }
  return q;
}

void validate_q_params(const DomainSpec& d, const QParams& q) {
  const auto& p = d.profile();
  if (q.variant == QVariant::Case1) {
    if (!(q.A > 8.0 * std::max(p.kappa1(), -p.kappa2()) && q.A > 0.0)) {
      throw ConfigError("Q parameter A must exceed 8 max(kappa1, -kappa2)");
    }
    if (!(q.B > q.A - d.n() + 2.0)) throw ConfigError("Q parameter B must exceed A - n + 2");
  } else {
    if (!(p.kappa() > 0.0)) throw ConfigError("Case-2 Q needs kappa > 0");
    if (!(q.A1 > 8.0 * p.kappa2() / p.kappa() && q.A1 >= 0.0)) {
      throw ConfigError("Q parameter A1 must exceed 8 kappa2 / kappa");
    }
    if (!(q.A2 > 4.0 * p.kappa1() && q.A2 >= 0.0)) {
      throw ConfigError("Q parameter A2 must exceed 4 kappa1");
    }
    if (!(q.B > q.A1 + q.A2 - d.n() + 2.0)) {
      throw ConfigError("Q parameter B must exceed A1 + A2 - n + 2");
    }
  }
}

CheckOutcome check_q_maximum(const Field& field, const QParams& q) {
  const Grid& g = field.grid;
  const DomainSpec& d = g.domain();
  validate_q_params(d, q);
  const double eps = d.epsilon();
  const int Ns = g.Ns();
  const GradientField grad = gradient(field);

  double best = -kInf;
  int bi = 0, bj = 0;
  for (int i = 0; i <= Ns; ++i) {
    const double r = g.s()[i];
    const double up = boundary_height(d, Side::Upper, r);
    const double lo = boundary_height(d, Side::Lower, r);
    for (int j = 0; j <= g.Nt(); ++j) {
      const double x = g.x_n(i, j);
      double w;
      if (q.variant == QVariant::Case1) {
        w = q.A * x * x;
      } else {
        w = q.A1 * (x - up) * (x - up) + q.A2 * (x - lo) * (x - lo);
      }
      const double m = grad.mode_mag(i, j);
      const double u = field.values(i, j);
      const double Q = (eps + r * r - w) * m * m + q.B * u * u;
      if (Q > best) {
        best = Q;
        bi = i;
        bj = j;
      }
    }
  }
  const bool outer = bi >= Ns - 1 || (d.n() == 2 && bi <= 1);
  CheckOutcome c;
  c.name = "q_maximum";
  c.measured = bi;
  c.threshold = Ns - 1;
  c.passed = outer;
  c.location = {g.s()[bi], g.x_n(bi, bj)};
  c.note = "grid column of the argmax of Q; outer two columns accepted";
  return c;
}

CheckOutcome check_flat_gradient(const std::vector<Field>& fields, double fraction) {
  require_consistent(fields);
  if (fields.front().grid.domain().profile().kind() != ProfileKind::Flat) {
    throw ConfigError("flat-gradient check needs a flat profile");
  }
  double lo = kInf, hi = 0.0, C = 0.0;
  std::vector<double> loc;
  for (const Field& f : fields) {
    const Grid& g = f.grid;
    const double eps = g.domain().epsilon();
    const GradientField grad = gradient(f);
    const double m = max_gradient(f, grad, fraction);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    for (int i = 0; i <= g.Ns(); ++i) {
      const double r = g.s()[i];
      if (!in_region(g, i, fraction) || std::abs(r) < std::sqrt(eps)) continue;
      for (int j = 0; j <= g.Nt(); ++j) {
        const double t = g.t()[j];
        if (t < 0.25 || t > 0.75) continue;
        const double x = g.x_n(i, j);
        const double u = std::abs(f.values(i, j));
        const double c_hi = u / std::sqrt(eps + r * r + x * x);
        const double c_lo = u > 0.0 ? std::sqrt(r * r + x * x) / u : kInf;
        const double cc = std::max(c_hi, c_lo);
        if (cc > C) {
          C = cc;
          loc = {r, x};
        }
      }
    }
  }
  const double drift = lo > 0.0 ? (hi - lo) / lo : kInf;
  CheckOutcome c;
  c.name = "flat_gradient";
  c.measured = drift;
  c.threshold = 0.1;
  c.passed = drift <= 0.1 && C <= 10.0;
  c.location = loc;
  c.note = "drift of max|grad u| across eps; envelope constant C = " + std::to_string(C) +
           " (limit 10)";
  return c;
}

}  // namespace neck
