#pragma once

// Checks of intermediate estimates on solved fields: the d_n bound, the
// local gradient lemma, the boundary identity for |grad u|^2 in two
// dimensions, the location of the Q-function maximum and the flat case.

#include <vector>

#include "neck/modesolver.hpp"
#include "neck/outcome.hpp"

namespace neck {

/// Nodes with |s| <= fraction * R count as the neck region.
constexpr double kRegionFraction = 0.5;

/// max over eps of max|d_n| divided by its min; passes when <= 3.
CheckOutcome check_dn_bound(const std::vector<Field>& fields,
                            double region_fraction = kRegionFraction);

/// max of |grad u| rho / (sup of |u| over |s' - s| <= 2 rho + eps + rho^2),
/// rho = sqrt(eps + r^2). Passes when <= 50.
CheckOutcome check_local_gradient_lemma(const Field& field,
                                        double region_fraction = kRegionFraction);

/// Pointwise variant |grad u| rho / |u|; informational (required = false).
CheckOutcome check_pointwise_gradient_lemma(const Field& field,
                                            double region_fraction = kRegionFraction);

/// Spread (max/min) of local-lemma ratios across a sweep; passes when <= 2.
CheckOutcome check_local_gradient_stability(const std::vector<CheckOutcome>& per_eps);

/// n = 2: one-sided d_nu |grad u|^2 against 2 h'' u_1^2 / sqrt(1 + h'^2)
/// (sign flipped on the lower side). Passes when the relative mismatch is
/// <= 0.1 where |grad u|^2 exceeds 1% of its boundary maximum.
CheckOutcome check_boundary_identity(const Field& field,
                                     double region_fraction = kRegionFraction);

enum class QVariant { Case1, Case2 };

struct QParams {
  QVariant variant = QVariant::Case1;
  double A = 0.0;   // Case 1
  double A1 = 0.0;  // Case 2
  double A2 = 0.0;  // Case 2
  double B = 0.0;
};

/// 1.25x the lower bounds (0.1 where a bound is 0); B = bound + 1.
QParams default_q_params(const DomainSpec& domain, QVariant variant);
/// Throws ConfigError unless the strict inequalities hold for the profile.
void validate_q_params(const DomainSpec& domain, const QParams& q);

/// Q = (eps + r^2 - weight(x_n)) |grad u|^2 + B u^2 on the grid; passes when
/// its argmax lies in the outer two grid columns.
CheckOutcome check_q_maximum(const Field& field, const QParams& q);

/// Flat profile sweep: drift of max|grad u| <= 10% and a single C <= 10 with
/// |u| <= C sqrt(eps + r^2 + x_n^2), |u| >= sqrt(r^2 + x_n^2) / C on the band
/// t in [1/4, 3/4] with |r| >= sqrt(eps).
CheckOutcome check_flat_gradient(const std::vector<Field>& fields,
                                 double region_fraction = kRegionFraction);

/// max mode_mag over the neck region, optionally only where |r| >= min_r.
double max_gradient(const Field& field, const GradientField& grad,
                    double region_fraction = kRegionFraction, double min_r = 0.0);

}  // namespace neck
