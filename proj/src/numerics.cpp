#include "neck/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "neck/errors.hpp"

namespace neck {

Grid::Grid(DomainSpec domain, std::vector<double> s, std::vector<double> t, Stretch stretch)
    : domain_(std::move(domain)), s_(std::move(s)), t_(std::move(t)), stretch_(stretch) {
  auto increasing = [](const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
  };
  if (s_.size() < 3 || t_.size() < 3 || !increasing(s_) || !increasing(t_)) {
    throw InvariantError("grid coordinates must be strictly increasing");
  }
}

double Grid::x_n(int i, int j) const {
  double s = s_[i];
  return boundary_height(domain_, Side::Lower, s) + t_[j] * gap(domain_, s);
}

Grid build_grid(const DomainSpec& domain, int Ns, int Nt, Stretch stretch, double grading) {
  if (Ns < 8 || Nt < 4) throw ConfigError("grid needs Ns >= 8 and Nt >= 4");
  if (!(grading >= 1.0)) throw ConfigError("grading exponent must be >= 1");
  const bool two_sided = domain.n() == 2;
  if (two_sided && Ns % 2 != 0) throw ConfigError("n = 2 grids need an even Ns");
  const double R = domain.R();
  const double q = stretch == Stretch::NeckRefined ? grading : 1.0;

  std::vector<double> s(Ns + 1);
  for (int i = 0; i <= Ns; ++i) {
    if (two_sided) {
      // Symmetric about x_1 = 0, which is node Ns/2.
      int half = Ns / 2;
      double xi = static_cast<double>(std::abs(i - half)) / half;
      double mag = R * std::pow(xi, q);
      s[i] = i < half ? -mag : mag;
    } else {
      s[i] = R * std::pow(static_cast<double>(i) / Ns, q);
    }
  }
  s.front() = two_sided ? -R : 0.0;
  s.back() = R;

  std::vector<double> t(Nt + 1);
  for (int j = 0; j <= Nt; ++j) t[j] = static_cast<double>(j) / Nt;
  return Grid(domain, std::move(s), std::move(t), stretch);
}

double relative_residual(const SparseSystem& system, const Eigen::VectorXd& x) {
  double bnorm = system.rhs.norm();
  double rnorm = (system.rhs - system.matrix * x).norm();
  return bnorm > 0.0 ? rnorm / bnorm : rnorm;
}

Eigen::VectorXd solve_sparse(const SparseSystem& system, const SolveOptions& options) {
  const int m = system.size();
  if (system.matrix.rows() != m || system.matrix.cols() != m) {
    throw ConfigError("sparse system must be square and match its right-hand side");
  }
  if (!(options.tol > 0.0)) throw ConfigError("solver tolerance must be positive");
  const int max_iter = options.max_iter > 0 ? options.max_iter : 20 * m;

  for (int row = 0; row < m; ++row) {
    bool has_diag = false;
    bool nonzero = false;
    for (SparseMatrix::InnerIterator it(system.matrix, row); it; ++it) {
      if (it.value() != 0.0) {
        nonzero = true;
        if (it.col() == row) has_diag = true;
      }
    }
    if (!nonzero) {
      std::ostringstream os;
      os << "singular system: row " << row << " is zero";
      throw SolverError(os.str(), std::numeric_limits<double>::infinity());
    }
    if (!has_diag) {
      std::ostringstream os;
      os << "row " << row << " has no diagonal entry";
      throw SolverError(os.str(), std::numeric_limits<double>::infinity());
    }
  }

  Eigen::SparseMatrix<double> colmajor = system.matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(colmajor);
  lu.factorize(colmajor);
  if (lu.info() != Eigen::Success) {
    throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage(),
                      std::numeric_limits<double>::infinity());
  }

  Eigen::VectorXd x = lu.solve(system.rhs);
  double res = relative_residual(system, x);
  for (int iter = 0; iter < max_iter && !(res <= options.tol); ++iter) {
    Eigen::VectorXd r = system.rhs - system.matrix * x;
    x += lu.solve(r);
    double next = relative_residual(system, x);
    if (!(next < 0.5 * res)) {
      res = std::min(res, next);
      break;  // refinement has stalled
    }
    res = next;
  }
  if (!std::isfinite(res) || res > options.tol) {
    std::ostringstream os;
    os << "linear solve did not reach tol=" << options.tol << " (residual " << res << ")";
    throw SolverError(os.str(), res);
  }
  return x;
}

std::vector<EigenPair> generalized_symmetric_eig_smallest(const SparseMatrix& stiffness,
                                                          const Eigen::VectorXd& mass,
                                                          int how_many) {
  const int m = static_cast<int>(mass.size());
  if (stiffness.rows() != m || stiffness.cols() != m) {
    throw ConfigError("stiffness and mass sizes differ");
  }
  if (how_many < 1 || how_many > m) throw ConfigError("how_many out of range");
  if ((mass.array() <= 0.0).any()) throw DomainError("mass matrix must be positive definite");

  const int block = std::min(m, 2 * how_many + 8);
  Eigen::SparseMatrix<double> A = stiffness;

  auto ritz = [&](const Eigen::MatrixXd& basis, Eigen::VectorXd& values, Eigen::MatrixXd& vecs) {
    Eigen::MatrixXd AB = A * basis;
    Eigen::MatrixXd Ap = basis.transpose() * AB;
    Eigen::MatrixXd Mp = basis.transpose() * mass.asDiagonal() * basis;
    Ap = 0.5 * (Ap + Ap.transpose()).eval();
    Mp = 0.5 * (Mp + Mp.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> small(Ap, Mp);
    if (small.info() != Eigen::Success) {
      throw SolverError("Rayleigh-Ritz step failed", std::numeric_limits<double>::infinity());
    }
    values = small.eigenvalues();
    vecs = basis * small.eigenvectors();
  };

  Eigen::VectorXd values;
  Eigen::MatrixXd vecs;
  if (block == m) {
    ritz(Eigen::MatrixXd::Identity(m, m), values, vecs);
  } else {
    const double trace_a = A.diagonal().sum();
    const double trace_m = mass.sum();
    const double shift = trace_a > 0.0 ? 1e-8 * trace_a / trace_m : 1.0;
    Eigen::SparseMatrix<double> shifted = A;
    for (int i = 0; i < m; ++i) shifted.coeffRef(i, i) += shift * mass[i];
    shifted.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(shifted);
    if (lu.info() != Eigen::Success) {
      throw SolverError("shifted factorization failed", std::numeric_limits<double>::infinity());
    }

    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd X(m, block);
    for (int c = 0; c < block; ++c)
      for (int r = 0; r < m; ++r) X(r, c) = dist(rng);
    X.col(0).setOnes();

    const double a_norm = [&] {
      double best = 0.0;
      for (int r = 0; r < A.outerSize(); ++r) {
        double sum = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, r); it; ++it) sum += std::abs(it.value());
        best = std::max(best, sum);
      }
      return best;
    }();
    const double m_norm = mass.maxCoeff();

    constexpr int kMaxIter = 2000;
    double worst = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < kMaxIter; ++iter) {
      Eigen::MatrixXd Y = lu.solve(mass.asDiagonal() * X);
      // Re-orthonormalize the block for conditioning of the projected problem.
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
      Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, block);
      ritz(Q, values, vecs);
      X = vecs;
      worst = 0.0;
      for (int i = 0; i < how_many; ++i) {
        Eigen::VectorXd res = A * vecs.col(i) - values[i] * mass.cwiseProduct(vecs.col(i));
        double scale = (a_norm + std::abs(values[i]) * m_norm) * vecs.col(i).norm();
        worst = std::max(worst, res.norm() / scale);
      }
      if (worst < 1e-13) break;
    }
    if (!(worst < 1e-10)) {
      throw SolverError("subspace iteration did not converge", worst);
    }
  }

  std::vector<EigenPair> out;
  out.reserve(how_many);
  for (int i = 0; i < how_many; ++i) {
    Eigen::VectorXd v = vecs.col(i);
    double norm = std::sqrt(v.dot(mass.cwiseProduct(v)));
    out.push_back({values[i], v / norm});
  }
  return out;
}

FitResult fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("fit_loglog: xs and ys differ in length");
  if (xs.size() < 3) throw DomainError("fit_loglog needs at least 3 points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw DomainError("fit_loglog needs positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_loglog needs distinct abscissae");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += e * e;
  }
  fit.residual_rms = std::sqrt(ss / n);
  fit.n_points = static_cast<int>(n);
  return fit;
}

Weights3 first_derivative_weights(double x0, double x1, double x2, double x) {
  return {((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2)),
          ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2)),
          ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1))};
}

Weights3 second_derivative_weights(double x0, double x1, double x2) {
  return {2.0 / ((x0 - x1) * (x0 - x2)), 2.0 / ((x1 - x0) * (x1 - x2)),
          2.0 / ((x2 - x0) * (x2 - x1))};
}

}  // namespace neck
