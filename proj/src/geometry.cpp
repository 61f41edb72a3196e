#include "neck/geometry.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "neck/errors.hpp"

namespace neck {

namespace {

double perturbation_value(const std::optional<Perturbation>& p, double r) {
  if (!p) return 0.0;
  return p->amplitude * std::pow(std::abs(r), 2.0 + p->gamma);
}

double perturbation_slope(const std::optional<Perturbation>& p, double r) {
  if (!p || r == 0.0) return 0.0;
  double sign = r > 0.0 ? 1.0 : -1.0;
  return sign * p->amplitude * (2.0 + p->gamma) * std::pow(std::abs(r), 1.0 + p->gamma);
}

// c (2+gamma)(1+gamma) |r|^gamma; taken as 0 at r = 0.
double perturbation_curvature(const std::optional<Perturbation>& p, double r) {
  if (!p || r == 0.0) return 0.0;
  return p->amplitude * (2.0 + p->gamma) * (1.0 + p->gamma) * std::pow(std::abs(r), p->gamma);
}

void check_perturbation(const std::optional<Perturbation>& p) {
  if (p && !(p->gamma > 0.0 && p->gamma < 1.0)) {
    throw InvariantError("perturbation exponent gamma must lie in (0,1)");
  }
}

void check_range(const DomainSpec& d, double r) {
  const double slack = 1e-12 * d.R();
  if (!(r >= d.r_min() - slack && r <= d.R() + slack)) {
    std::ostringstream os;
    os << "radial coordinate " << r << " outside [" << d.r_min() << ", " << d.R() << "]";
    throw DomainError(os.str());
  }
}

}  // namespace

BoundaryProfile BoundaryProfile::quadratic(double kappa1, double kappa2,
                                           std::optional<Perturbation> perturbation) {
  if (!(kappa1 - kappa2 > 0.0)) {
    throw InvariantError("quadratic profile requires kappa1 - kappa2 > 0");
  }
  check_perturbation(perturbation);
  BoundaryProfile p;
  p.kind_ = ProfileKind::Quadratic;
  p.kappa1_ = kappa1;
  p.kappa2_ = kappa2;
  p.perturbation_ = perturbation;
  return p;
}

BoundaryProfile BoundaryProfile::anisotropic(std::vector<double> mus, Radialization radial,
                                             std::optional<Perturbation> perturbation) {
  if (mus.empty()) throw InvariantError("anisotropic profile needs at least one mu");
  for (double mu : mus) {
    if (!(mu > 0.0)) throw InvariantError("anisotropic coefficients must be positive");
  }
  check_perturbation(perturbation);
  double eff = 0.0;
  if (radial == Radialization::Arithmetic) {
    eff = std::accumulate(mus.begin(), mus.end(), 0.0) / static_cast<double>(mus.size());
  } else {
    double log_sum = 0.0;
    for (double mu : mus) log_sum += std::log(mu);
    eff = std::exp(log_sum / static_cast<double>(mus.size()));
  }
  BoundaryProfile p;
  p.kind_ = ProfileKind::Anisotropic;
  p.kappa1_ = 0.5 * eff;
  p.kappa2_ = -0.5 * eff;
  p.mus_ = std::move(mus);
  p.radial_ = radial;
  p.perturbation_ = perturbation;
  return p;
}

BoundaryProfile BoundaryProfile::flat() { return BoundaryProfile(); }

double BoundaryProfile::h1(double r) const {
  return kappa1_ * r * r + perturbation_value(perturbation_, r);
}
double BoundaryProfile::h1_prime(double r) const {
  return 2.0 * kappa1_ * r + perturbation_slope(perturbation_, r);
}
double BoundaryProfile::h1_second(double r) const {
  return 2.0 * kappa1_ + perturbation_curvature(perturbation_, r);
}
double BoundaryProfile::h2(double r) const { return kappa2_ * r * r; }
double BoundaryProfile::h2_prime(double r) const { return 2.0 * kappa2_ * r; }
double BoundaryProfile::h2_second(double) const { return 2.0 * kappa2_; }

DomainSpec::DomainSpec(int n, double epsilon, double R, BoundaryProfile profile)
    : n_(n), epsilon_(epsilon), R_(R), profile_(std::move(profile)) {
  if (n_ < 2) throw DomainError("dimension n must be at least 2");
  if (!(epsilon_ > 0.0)) throw DomainError("gap epsilon must be positive");
  if (!(R_ > 0.0)) throw DomainError("neck radius R must be positive");
  if (profile_.kind() == ProfileKind::Anisotropic &&
      profile_.mus().size() != static_cast<std::size_t>(n_ - 1)) {
    throw InvariantError("anisotropic profile needs n-1 coefficients");
  }
  // gap(r) > 0 on the whole neck.
  constexpr int kSamples = 1024;
  for (int i = 0; i <= kSamples; ++i) {
    double r = R_ * i / kSamples;
    double g = epsilon_ + profile_.h1(r) - profile_.h2(r);
    if (!(g > 0.0)) {
      std::ostringstream os;
      os << "neck gap is nonpositive at r=" << r;
      throw InvariantError(os.str());
    }
  }
}

double boundary_height(const DomainSpec& d, Side side, double r) {
  check_range(d, r);
  const double half = 0.5 * d.epsilon();
  return side == Side::Upper ? half + d.profile().h1(r) : -half + d.profile().h2(r);
}

double boundary_slope(const DomainSpec& d, Side side, double r) {
  check_range(d, r);
  return side == Side::Upper ? d.profile().h1_prime(r) : d.profile().h2_prime(r);
}

double boundary_curvature(const DomainSpec& d, Side side, double r) {
  check_range(d, r);
  return side == Side::Upper ? d.profile().h1_second(r) : d.profile().h2_second(r);
}

double gap(const DomainSpec& d, double r) {
  check_range(d, r);
  double g = d.epsilon() + d.profile().h1(r) - d.profile().h2(r);
  if (!(g > 0.0)) throw InvariantError("nonpositive neck gap");
  return g;
}

double gap_prime(const DomainSpec& d, double r) {
  check_range(d, r);
  return d.profile().h1_prime(r) - d.profile().h2_prime(r);
}

double gap_second(const DomainSpec& d, double r) {
  check_range(d, r);
  return d.profile().h1_second(r) - d.profile().h2_second(r);
}

Vec2 outward_normal(const DomainSpec& d, Side side, double r) {
  double slope = boundary_slope(d, side, r);
  double inv = 1.0 / std::sqrt(1.0 + slope * slope);
  if (side == Side::Upper) return {-slope * inv, inv};
  return {slope * inv, -inv};
}

double alpha_exponent(int n) {
  if (n < 2) throw DomainError("alpha_exponent requires n >= 2");
  double m = n - 1.0;
  return 0.5 * (-m + std::sqrt(m * m + 4.0 * (n - 2.0)));
}

double angular_eigenvalue(int n, int k) { return static_cast<double>(k) * (k + n - 3); }

double alpha_k(int n, int k) {
  if (n < 3) throw DomainError("alpha_k requires n >= 3");
  if (k < 0) throw DomainError("alpha_k requires k >= 0");
  double m = n - 1.0;
  return 0.5 * (-m + std::sqrt(m * m + 4.0 * angular_eigenvalue(n, k)));
}

double blowup_exponent(int n) { return 0.5 * (alpha_exponent(n) - 1.0); }

double weinkove_gamma(int n) {
  if (n < 4) throw DomainError("weinkove_gamma requires n >= 4");
  // (n-2) g^2 + (n^2-4n+5) g - (n^2-5n+5) = 0, positive root.
  double a = n - 2.0;
  double b = n * n - 4.0 * n + 5.0;
  double c = -(n * n - 5.0 * n + 5.0);
  return (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
}

}  // namespace neck
