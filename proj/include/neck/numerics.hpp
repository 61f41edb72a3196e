#pragma once

// Generic numerical kernels: boundary-fitted strip grid, sparse linear
// solves, a small generalized symmetric eigensolver and log-log fits.

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <span>
#include <vector>

#include "neck/geometry.hpp"

namespace neck {

enum class Stretch { Uniform, NeckRefined };

/// Structured chart of the neck: x_n(s, t) = lower(s) + t * gap(s),
/// t in [0, 1]. For n = 2 the s-axis spans [-R, R].
class Grid {
 public:
  Grid(DomainSpec domain, std::vector<double> s, std::vector<double> t, Stretch stretch);

  const DomainSpec& domain() const { return domain_; }
  const std::vector<double>& s() const { return s_; }
  const std::vector<double>& t() const { return t_; }
  int Ns() const { return static_cast<int>(s_.size()) - 1; }
  int Nt() const { return static_cast<int>(t_.size()) - 1; }
  Stretch stretch() const { return stretch_; }

  double x_n(int i, int j) const;
  /// Linear index of node (i, j); t varies fastest.
  int index(int i, int j) const { return i * (Nt() + 1) + j; }
  int size() const { return (Ns() + 1) * (Nt() + 1); }

 private:
  DomainSpec domain_;
  std::vector<double> s_;
  std::vector<double> t_;
  Stretch stretch_;
};

/// `grading` is the exponent q of the NeckRefined map s_i = R (i/Ns)^q.
Grid build_grid(const DomainSpec& domain, int Ns, int Nt, Stretch stretch, double grading = 2.0);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct SparseSystem {
  SparseMatrix matrix;  // compressed rows, explicit zeros pruned
  Eigen::VectorXd rhs;
  int size() const { return static_cast<int>(rhs.size()); }
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 0;  // 0 selects 20 * size
};

/// Direct sparse LU with iterative refinement until
/// ||Ax - b|| / ||b|| <= tol. Throws SolverError on failure.
Eigen::VectorXd solve_sparse(const SparseSystem& system, const SolveOptions& options = {});

double relative_residual(const SparseSystem& system, const Eigen::VectorXd& x);

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // M-normalized
};

/// Smallest `how_many` eigenpairs of A v = lambda M v with A symmetric
/// positive semidefinite and M = diag(mass) positive. Shift-invert subspace
/// iteration with Rayleigh-Ritz; results ascending, vectors M-orthonormal.
std::vector<EigenPair> generalized_symmetric_eig_smallest(const SparseMatrix& stiffness,
                                                          const Eigen::VectorXd& mass,
                                                          int how_many);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  int n_points = 0;
};

/// Ordinary least squares of log(ys) against log(xs).
FitResult fit_loglog(std::span<const double> xs, std::span<const double> ys);

// Three-point finite-difference weights on a possibly nonuniform stencil
// (x0 < x1 < x2), evaluated at the node x_at.
struct Weights3 {
  double w0 = 0.0, w1 = 0.0, w2 = 0.0;
};
Weights3 first_derivative_weights(double x0, double x1, double x2, double x_at);
Weights3 second_derivative_weights(double x0, double x1, double x2);

}  // namespace neck
