#pragma once

// JSON run configuration. The schema is documented in docs/config.md;
// unknown keys are rejected before any computation starts.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "neck/barriers.hpp"
#include "neck/geometry.hpp"
#include "neck/numerics.hpp"
#include "neck/spectral.hpp"
#include "neck/sweep.hpp"

namespace neck {

struct BarrierSection {
  double xi = 0.1;
  double corner_delta = 0.0;
  /// Explicit beta and b override the corner parameterization.
  std::optional<double> beta;
  std::optional<double> b;
  bool case2 = false;
  std::optional<double> beta1;
  std::vector<SignQuantity> quantities = {SignQuantity::LPhiLe0, SignQuantity::DnuPhiGe0Upper,
                                          SignQuantity::DnuPhiGe0Lower, SignQuantity::LTildeLe0,
                                          SignQuantity::Dnu2d};
  /// Quantities whose violations are recorded but do not fail the run.
  std::vector<SignQuantity> informational = {SignQuantity::LTildeLe0};
  SamplingOptions sampling;
};

struct EigenSection {
  Weight weight = constant_weight(1.0);
  int N = 1024;
  int n = 3;
};

struct MmsSection {
  /// (Ns, Nt) pairs, coarse to fine, each refining the previous by 2.
  std::vector<std::pair<int, int>> grids = {{32, 8}, {64, 16}, {128, 32}};
  double min_order = 1.7;
  double max_order = 2.3;
};

struct Config {
  int n = 3;
  double epsilon = 1e-3;
  /// Unset: DomainSpec::kDefaultRadius for single solves, barriers and
  /// manufactured solutions, kSweepRadius for sweeps and checks.
  std::optional<double> radius;
  BoundaryProfile profile = BoundaryProfile::quadratic(0.5, -0.5);
  int k = 1;
  std::optional<double> potential;
  double data = 1.0;
  GridSettings grid;
  SolveOptions solver;
  std::vector<double> epsilons = {1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4};
  double region_fraction = kRegionFraction;
  OutputFormats formats;
  int threads = 0;
  BarrierSection barriers;
  EigenSection eigen;
  MmsSection mms;

  /// Canonical form of the parsed document (sorted keys), used for hashing.
  nlohmann::json canonical;
};

/// Throws ConfigError on malformed JSON (with line and column), unknown
/// keys, wrong types or values outside their documented ranges.
Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

DomainSpec make_domain(const Config& c);
DomainSpec make_domain(const Config& c, double eps);
Grid make_grid(const Config& c, const DomainSpec& d);
SweepConfig make_sweep_config(const Config& c);
BarrierParams make_barrier_params(const Config& c);
TildeParams make_tilde_params(const Config& c);

/// 16 hex digits of a 64-bit FNV-1a hash of the command and canonical config.
std::string config_hash(const std::string& command, const Config& c);

}  // namespace neck
