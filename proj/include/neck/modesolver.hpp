#pragma once

// Finite-difference solver for the mode-reduced Neumann problem
//
//   u_rr + (n-2)/r u_r - c/r^2 u + u_nn = f   in the neck,
//   u_n - h'(r) u_r = g                        on the upper/lower boundary,
//
// with c = k(k+n-3) (or an eigenvalue override), Dirichlet data at r = R and
// an axis condition at r = 0. For n = 2 the same machinery solves Laplace's
// equation directly on x_1 in [-R, R] with Dirichlet data at both ends.

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <optional>

#include "neck/numerics.hpp"

namespace neck {

/// Closed-form function of the physical coordinates (r, x_n) with the
/// derivatives needed to build manufactured forcing terms.
struct ExactSolution {
  std::function<double(double, double)> value;
  std::function<double(double, double)> d_r;
  std::function<double(double, double)> d_n;
  std::function<double(double, double)> d_rr;
  std::function<double(double, double)> d_nn;
};

struct ModeProblem {
  explicit ModeProblem(Grid g) : grid(std::move(g)) {}

  Grid grid;
  int k = 1;
  /// Replaces k(k+n-3) as the coefficient of the 1/r^2 potential.
  std::optional<double> potential;
  /// Data at s = R as a function of t in [0, 1].
  std::function<double(double)> outer = [](double) { return 1.0; };
  /// n = 2 only: data at s = -R.
  std::function<double(double)> inner = [](double) { return -1.0; };
  /// Manufactured-solution hooks; empty for the homogeneous problem.
  std::function<double(double, double)> forcing;
  std::function<double(Side, double, double)> neumann_data;
  std::function<double(double)> axis_data;

  int n() const { return grid.domain().n(); }
  double angular_coefficient() const;
  /// Axis pinned to a Dirichlet value (k >= 1 or positive potential).
  bool pinned_axis() const;
};

ModeProblem make_mode_problem(const Grid& grid, int k);

/// Discrete solution on the chart nodes, values(i, j) at (s_i, t_j).
struct Field {
  Grid grid;
  Eigen::MatrixXd values;
  double angular_coefficient = 0.0;
  double residual = 0.0;

  double x_n(int i, int j) const { return grid.x_n(i, j); }
};

struct GradientField {
  Eigen::MatrixXd d_r;
  Eigen::MatrixXd d_n;
  Eigen::MatrixXd mode_mag;
};

SparseSystem assemble(const ModeProblem& problem);

Field solve_mode(const ModeProblem& problem, const SolveOptions& options = {});

/// Laplace's equation on the two-dimensional neck with u = g_left at
/// x_1 = -R and u = g_right at x_1 = R.
Field solve_2d(const DomainSpec& domain, double g_left, double g_right, const Grid& grid,
               const SolveOptions& options = {});

GradientField gradient(const Field& field);

/// r^k (1 + r^2) cos(x_n): smooth, compatible with the axis condition of
/// mode k. For n = 2 use k = 1.
ExactSolution manufactured_solution(int k);

/// Max-norm errors of forced solves against `exact` on each grid.
/// The axis condition follows k exactly as in the homogeneous problem.
std::vector<double> manufactured_convergence(const ExactSolution& exact, int k,
                                             const std::vector<Grid>& grids);

/// Writes one row per node: s,t,x_n,value,d_r,d_n,mode_mag.
void write_field_csv(std::ostream& out, const Field& field, const GradientField& grad);

}  // namespace neck
