#pragma once

#include <optional>
#include <string>
#include <vector>

namespace neck {

/// Result of one numerical check: `measured` compared against `threshold`
/// in the direction the check prescribes.
struct CheckOutcome {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  /// Coordinates of the extremum: {r} or {r, x_n}.
  std::vector<double> location;
  /// Whether a failure should count against the run (exit status).
  bool required = true;
  std::string note;
};

}  // namespace neck
