#pragma once

// Epsilon sweeps: per-eps solves, blow-up exponent fits, envelope ratios,
// verdicts from the diagnostics and report emission.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "neck/diagnostics.hpp"
#include "neck/geometry.hpp"
#include "neck/modesolver.hpp"
#include "neck/numerics.hpp"
#include "neck/outcome.hpp"

namespace neck {

struct GridSettings {
  int Ns = 256;
  int Nt = 32;
  Stretch stretch = Stretch::NeckRefined;
  double grading = 2.0;
};

struct OutputFormats {
  bool csv = true;
  bool json = true;
  bool svg = false;
};

/// Sweeps need eps < R^2 down to eps = 1e-2 with room for the finite-R
/// correction, so their template radius exceeds the single-solve default.
constexpr double kSweepRadius = 0.5;

struct SweepConfig {
  int n = 3;
  double R = kSweepRadius;
  BoundaryProfile profile = BoundaryProfile::quadratic(0.5, -0.5);
  int k = 1;
  std::vector<double> epsilons = {1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4};
  double region_fraction = kRegionFraction;
  /// Dirichlet data: u = data at r = R (n >= 3), u = -data / +data at the
  /// two ends (n = 2).
  double data = 1.0;
  GridSettings grid;
  SolveOptions solver;
  /// Eigen resolution for anisotropic sweeps.
  int eigen_N = 1024;
  OutputFormats formats;
  /// 0 selects NECK_THREADS or the available parallelism.
  int threads = 0;
};

/// Throws ConfigError unless there are >= 3 strictly decreasing epsilons,
/// all below R^2, and sqrt(eps) spans at least 3 neck cells.
void validate(const SweepConfig& config);

struct SweepRow {
  double epsilon = 0.0;
  double max_grad = 0.0;
  double max_u = 0.0;
  /// min |u| / (r^2 + x_n^2)^(alpha/2) over |r| >= sqrt(eps).
  double ratio_lo = 0.0;
  /// max |u| / (eps + r^2 + x_n^2)^(alpha/2).
  double ratio_hi = 0.0;
  double dn_max = 0.0;
  /// ratio_lo taken from the first off-axis column instead.
  double ratio_lo_axis = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  FitResult fit;
  double theory_exponent = 0.0;
  double envelope_exponent = 0.0;
  std::string theory_source;
  /// Anisotropic sweeps: eigenvalue data and the geometric-mean variant.
  std::optional<double> lambda1;
  std::optional<double> tilde_alpha;
  std::optional<double> geometric_slope;
  /// Anisotropic sweeps fit max_grad over sqrt(eps) <= |r|; this is the
  /// slope over the whole region, including the axis layer.
  std::optional<double> full_region_slope;
  std::vector<CheckOutcome> verdicts;

  bool all_required_passed() const;
};

/// Solves one epsilon of the sweep.
Field solve_sweep_member(const SweepConfig& config, double eps,
                         std::optional<double> potential = {});

SweepReport run_sweep(const SweepConfig& config);

/// n = 3 with an anisotropic profile: lambda from the weighted eigenproblem,
/// potential lambda / r^2, theory exponent (tilde_alpha - 1) / 2. For
/// lambda < 1 the mode behaves like r^sqrt(lambda) near the axis, so
/// max_grad is taken over sqrt(eps) <= |r| and the Q check is informational.
SweepReport run_anisotropic_sweep(const SweepConfig& config);

/// n = 2 envelope constants on |x_1| <= sqrt(eps), off the x_1 = 0 column:
/// upper = max |u| (eps + x_1^2 + x_2^2) / (sqrt(eps) |x_1|),
/// lower = min |u| / ln((eps + x_1^2 + x_2^2) / eps).
std::pair<CheckOutcome, CheckOutcome> check_2d_envelopes(const Field& field);

/// Number of worker threads: NECK_THREADS if set, else hardware concurrency.
int worker_count(int requested = 0);

std::string sweep_csv(const SweepReport& report);
std::string sweep_json(const SweepReport& report);
std::string rate_svg(const SweepReport& report);

/// Writes sweep.csv, report.json and rate.svg as selected; returns paths.
std::vector<std::filesystem::path> emit_report(const SweepReport& report,
                                               const std::filesystem::path& dir,
                                               const OutputFormats& formats);

}  // namespace neck
