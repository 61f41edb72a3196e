#pragma once

// First nonzero eigenvalue of the weighted operator -div(a grad u) = lambda a u
// on the sphere S^{n-2}, and the gradient exponent it induces.

#include <string>
#include <vector>

namespace neck {

enum class WeightKind { Constant, FromMus, Tabulated };

struct Weight {
  WeightKind kind = WeightKind::Constant;
  double value = 1.0;
  std::vector<double> mus;
  /// Uniform samples over [0, 2 pi), periodic linear interpolation.
  std::vector<double> samples;

  /// a(theta) on S^1. Constant weights ignore theta.
  double operator()(double theta) const;
};

Weight constant_weight(double value = 1.0);
/// a(theta) = mu1 cos^2 + mu2 sin^2. Only S^1 (two entries) is supported.
Weight weight_from_mus(const std::vector<double>& mus);
Weight tabulated_weight(std::vector<double> samples);

struct EigenResult {
  /// Richardson-extrapolated value from N and N/2 (closed form when exact).
  double lambda1 = 0.0;
  /// Unextrapolated value at resolution N.
  double lambda1_raw = 0.0;
  double tilde_alpha = 0.0;
  bool tilde_alpha_ge_one = false;
  int N = 0;
  /// |lambda(N) - lambda(N/2)| / 3, the error estimate of the raw value.
  double convergence_estimate = 0.0;
  /// (lambda(N/4) - lambda(N/2)) / (lambda(N/2) - lambda(N)); near 4 for
  /// second-order convergence. NaN when the differences are at roundoff.
  double richardson_ratio = 0.0;
  bool closed_form = false;
};

/// Raw flux-form eigenvalue at resolution N (n = 3 only).
double discrete_first_eigenvalue(const Weight& weight, int N);

/// For a constant weight with n != 3 the closed form n - 2 is returned.
/// Non-constant weights require n = 3 and N >= 32 divisible by 4.
EigenResult first_nonzero_eigenvalue(const Weight& weight, int N = 1024, int n = 3);

/// [-(n-1) + sqrt((n-1)^2 + 4 lambda)] / 2; requires n >= 3 and lambda >= 0.
double tilde_alpha(int n, double lambda);

std::string to_json(const EigenResult& r);

}  // namespace neck
