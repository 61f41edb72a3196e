#pragma once

// Comparison functions for the mode equation and the two-dimensional neck,
// their exact L-images and normal derivatives, and grid-based sign
// certification of the inequalities they are meant to satisfy.

#include <optional>
#include <string>
#include <utility>

#include "neck/geometry.hpp"
#include "neck/modesolver.hpp"
#include "neck/outcome.hpp"

namespace neck {

struct Case2Weights {
  double b1 = 0.0;
  double b2 = 0.0;
};

/// Parameters of the upper barrier
///   phi = (r^2 + 2 x^2)^(alpha_k/2) + r^beta (r^2 + b x^2)^(xi/2)
/// (Case 1) or its boundary-adapted variant (Case 2).
struct BarrierParams {
  int n = 3;
  int k = 1;
  double alpha_k = 0.0;
  double xi = 0.1;
  double beta = 0.0;
  double b = 0.0;
  std::optional<Case2Weights> case2;
  double corner_delta = 0.0;
  /// feasibility_margin at construction (with b1 + b2 for Case 2); < 0 is
  /// strictly feasible.
  double margin = 0.0;
};

double feasibility_margin(int n, int k, double xi, double beta, double b);

/// General parameters; throws DomainError unless xi, beta, b > 0.
BarrierParams make_barrier_params(int n, int k, double xi, double beta, double b);

/// beta = alpha_k - xi + delta, b = 2 + 2 beta/xi + delta. delta = 0 is the
/// corner of the constraint set, where the margin vanishes.
BarrierParams corner_params(int n, int k, double xi = 0.1, double corner_delta = 0.0);

/// Adds Case-2 weights at 1.25x their lower bounds (0.1 when a bound is 0).
/// Throws DomainError unless kappa1 > 0 and kappa2 >= 0.
BarrierParams with_case2(BarrierParams params, const BoundaryProfile& profile);

struct BarrierEval {
  double value = 0.0;
  double L = 0.0;
  /// Sum of magnitudes of the terms making up L (roundoff scale).
  double L_scale = 0.0;
  double d_r = 0.0;
  double d_n = 0.0;
};

/// Normal derivative of a barrier on `side` at the boundary point above r.
double normal_derivative(const DomainSpec& domain, Side side, double r, const BarrierEval& e);

BarrierEval phi_case1(const BarrierParams& p, double r, double x_n);
/// Exact jet-based evaluation of the same Case-1 barrier.
BarrierEval phi_case1_jet(const BarrierParams& p, double r, double x_n);
BarrierEval phi_case2(const BarrierParams& p, const DomainSpec& domain, double r, double x_n);

/// Evaluates Case 2 when p.case2 is set, Case 1 otherwise.
BarrierEval phi(const BarrierParams& p, const DomainSpec& domain, double r, double x_n);

struct TildeParams {
  int n = 3;
  int k = 1;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

/// beta1 + beta2 = alpha_k, beta2 > beta1 > 0; beta1 = alpha_k/4 by default.
TildeParams make_tilde_params(int n, int k, std::optional<double> beta1 = {});

/// r^beta1 (r^2 + 4 x^2)^(beta2/2).
BarrierEval tilde_phi(const TildeParams& p, double r, double x_n);

/// Two-dimensional barriers in the coordinates y = (x_1, x_2 - (h1+h2)/2)
/// with sigma = eps/kappa. Gradients are with respect to (x_1, x_2).
struct Eval2d {
  double value = 0.0;
  double d_1 = 0.0;
  double d_2 = 0.0;
};
Eval2d phi_2d(const DomainSpec& domain, double x1, double x2);
Eval2d tilde_phi_2d(const DomainSpec& domain, double x1, double x2);
double normal_derivative_2d(const DomainSpec& domain, Side side, double x1, const Eval2d& e);

enum class SignQuantity { LPhiLe0, DnuPhiGe0Upper, DnuPhiGe0Lower, LTildeLe0, Dnu2d };
std::string to_string(SignQuantity q);
SignQuantity sign_quantity_from_string(const std::string& s);

struct SignReport {
  SignQuantity quantity = SignQuantity::LPhiLe0;
  int n_points = 0;
  int n_violations = 0;
  double worst_margin = 0.0;
  double worst_r = 0.0;
  double worst_x_n = 0.0;
};

struct SamplingOptions {
  int n_r = 512;
  int n_t = 64;
  int n_boundary = 2048;
  /// Relative roundoff slack: a sample violates only if it is wrong-signed
  /// by more than slack times the magnitude of its constituent terms.
  double slack = 1e-12;
};

SignReport certify_sign(SignQuantity quantity, const BarrierParams& params,
                        const TildeParams& tilde, const DomainSpec& domain,
                        const SamplingOptions& sampling = {});

/// Upper comparison u <= A phi + C eps and lower comparison u >= B tilde_phi
/// on a solved mode field, with A, B built from the data at r = R.
std::pair<CheckOutcome, CheckOutcome> comparison_bounds(const Field& field,
                                                        const BarrierParams& params,
                                                        const TildeParams& tilde,
                                                        double C = 10.0);

}  // namespace neck
