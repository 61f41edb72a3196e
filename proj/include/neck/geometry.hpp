#pragma once

// Narrow-neck domain between two nearly touching inclusions.
//
// The neck is described in cylindrical coordinates (r, x_n): the upper
// boundary is x_n = eps/2 + h1(r), the lower one x_n = -eps/2 + h2(r). For
// n = 2 the coordinate r is the signed abscissa x_1 in [-R, R] and the
// profiles are even in it.

#include <optional>
#include <vector>

namespace neck {

enum class ProfileKind { Quadratic, Anisotropic, Flat };
enum class Side { Upper, Lower };

/// How an anisotropic gap sum(mu_i x_i^2) is radialized for the
/// axisymmetric strip solver.
enum class Radialization { Arithmetic, Geometric };

struct Perturbation {
  double amplitude = 0.0;  // c in c * |r|^(2 + gamma), added to h1
  double gamma = 0.5;
};

class BoundaryProfile {
 public:
  static BoundaryProfile quadratic(double kappa1, double kappa2,
                                   std::optional<Perturbation> perturbation = {});
  static BoundaryProfile anisotropic(std::vector<double> mus,
                                     Radialization radial = Radialization::Arithmetic,
                                     std::optional<Perturbation> perturbation = {});
  static BoundaryProfile flat();

  ProfileKind kind() const { return kind_; }
  double kappa1() const { return kappa1_; }
  double kappa2() const { return kappa2_; }
  /// kappa1 - kappa2, the curvature of the gap.
  double kappa() const { return kappa1_ - kappa2_; }
  const std::vector<double>& mus() const { return mus_; }
  const std::optional<Perturbation>& perturbation() const { return perturbation_; }
  Radialization radialization() const { return radial_; }

  double h1(double r) const;
  double h1_prime(double r) const;
  double h1_second(double r) const;
  double h2(double r) const;
  double h2_prime(double r) const;
  double h2_second(double r) const;

 private:
  BoundaryProfile() = default;

  ProfileKind kind_ = ProfileKind::Flat;
  double kappa1_ = 0.0;
  double kappa2_ = 0.0;
  std::vector<double> mus_;
  std::optional<Perturbation> perturbation_;
  Radialization radial_ = Radialization::Arithmetic;
};

/// Geometry of the neck Omega_R. Immutable; validated on construction.
class DomainSpec {
 public:
  static constexpr double kDefaultRadius = 0.1;

  DomainSpec(int n, double epsilon, double R, BoundaryProfile profile);

  int n() const { return n_; }
  double epsilon() const { return epsilon_; }
  double R() const { return R_; }
  const BoundaryProfile& profile() const { return profile_; }

  /// Lower end of the radial coordinate: 0 for n >= 3, -R for n = 2.
  double r_min() const { return n_ == 2 ? -R_ : 0.0; }

  DomainSpec with_epsilon(double epsilon) const {
    return DomainSpec(n_, epsilon, R_, profile_);
  }

 private:
  int n_;
  double epsilon_;
  double R_;
  BoundaryProfile profile_;
};

struct Vec2 {
  double r = 0.0;
  double n = 0.0;
};

double boundary_height(const DomainSpec& domain, Side side, double r);
double boundary_slope(const DomainSpec& domain, Side side, double r);
double boundary_curvature(const DomainSpec& domain, Side side, double r);

/// eps + h1(r) - h2(r). Throws InvariantError if nonpositive.
double gap(const DomainSpec& domain, double r);
double gap_prime(const DomainSpec& domain, double r);
double gap_second(const DomainSpec& domain, double r);

/// Outward unit normal in the (r, x_n) plane.
Vec2 outward_normal(const DomainSpec& domain, Side side, double r);

// Closed-form exponents.
double alpha_exponent(int n);
double alpha_k(int n, int k);
double blowup_exponent(int n);
double weinkove_gamma(int n);

/// k(k + n - 3), the angular eigenvalue of degree-k harmonics on S^(n-2).
double angular_eigenvalue(int n, int k);

}  // namespace neck
