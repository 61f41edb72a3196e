#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/LU>

#include "doctest.h"
#include "neck/errors.hpp"
#include "neck/numerics.hpp"

using namespace neck;

namespace {
SparseSystem make_system(int m, const std::vector<Eigen::Triplet<double>>& entries,
                         const Eigen::VectorXd& rhs) {
  SparseSystem sys;
  sys.matrix.resize(m, m);
  sys.matrix.setFromTriplets(entries.begin(), entries.end());
  sys.matrix.makeCompressed();
  sys.rhs = rhs;
  return sys;
}

// Eigenvalues of a symmetric 3x3 matrix from the trigonometric solution of
// its characteristic cubic.
std::vector<double> cubic_roots_sym3(const Eigen::Matrix3d& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = a.trace() / 3.0;
  const double p2 = std::pow(a(0, 0) - q, 2) + std::pow(a(1, 1) - q, 2) + std::pow(a(2, 2) - q, 2) + 2 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Eigen::Matrix3d b = (a - q * Eigen::Matrix3d::Identity()) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2 * p * std::cos(phi);
  const double e3 = q + 2 * p * std::cos(phi + 2 * std::numbers::pi / 3);
  return {e3, 3 * q - e1 - e3, e1};
}
}  // namespace

TEST_SUITE("numerics") {
  TEST_CASE("uniform grid on a flat strip") {
    DomainSpec flat(3, 1e-3, 0.1, BoundaryProfile::flat());
    Grid g = build_grid(flat, 8, 4, Stretch::Uniform);
    for (int i = 0; i <= 8; ++i) {
      CHECK(g.s()[i] == doctest::Approx(0.1 * i / 8).epsilon(1e-15));
      CHECK(std::abs(g.x_n(i, 2)) <= 1e-18);
    }
    CHECK_THROWS_AS(build_grid(flat, 4, 4, Stretch::Uniform), ConfigError);
    CHECK_THROWS_AS(build_grid(flat, 8, 2, Stretch::Uniform), ConfigError);
  }

  TEST_CASE("chart matches the boundary heights") {
    DomainSpec d(3, 1e-3, 0.1, BoundaryProfile::quadratic(0.5, -0.5));
    Grid g = build_grid(d, 16, 8, Stretch::NeckRefined);
    CHECK(g.s()[1] == doctest::Approx(0.1 / 256).epsilon(1e-14));
    for (int i = 0; i <= 16; ++i) {
      double s = g.s()[i];
      CHECK(std::abs(g.x_n(i, 8) - g.x_n(i, 0) - gap(d, s)) <= 1e-14);
      CHECK(std::abs(g.x_n(i, 0) - boundary_height(d, Side::Lower, s)) <= 1e-14);
      CHECK(std::abs(g.x_n(i, 8) - boundary_height(d, Side::Upper, s)) <= 1e-14);
      for (int j = 0; j < 8; ++j) CHECK(g.x_n(i, j + 1) > g.x_n(i, j));
    }
    DomainSpec d2(2, 1e-3, 0.1, BoundaryProfile::quadratic(0.5, -0.5));
    Grid g2 = build_grid(d2, 16, 8, Stretch::NeckRefined);
    CHECK(g2.s().front() == doctest::Approx(-0.1));
    CHECK(g2.s().back() == doctest::Approx(0.1));
  }

  TEST_CASE("identity system") {
    Eigen::VectorXd b(4);
    b << 1, -2, 3.5, 0.25;
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < 4; ++i) t.emplace_back(i, i, 1.0);
    auto x = solve_sparse(make_system(4, t, b));
    CHECK((x - b).norm() <= 1e-15);
  }

  TEST_CASE("1D Poisson reproduces the sampled parabola") {
    const int m = 65;
    const double h = 1.0 / (m - 1);
    std::vector<Eigen::Triplet<double>> t;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    t.emplace_back(0, 0, 1.0);
    t.emplace_back(m - 1, m - 1, 1.0);
    for (int i = 1; i < m - 1; ++i) {
      t.emplace_back(i, i - 1, -1.0 / (h * h));
      t.emplace_back(i, i, 2.0 / (h * h));
      t.emplace_back(i, i + 1, -1.0 / (h * h));
      b[i] = 1.0;
    }
    auto sys = make_system(m, t, b);
    auto x = solve_sparse(sys);
    CHECK(relative_residual(sys, x) <= 1e-10);
    double err = 0.0;
    for (int i = 0; i < m; ++i) {
      double xi = i * h;
      err = std::max(err, std::abs(x[i] - xi * (1 - xi) / 2));
    }
    CHECK(err <= 1e-12);
  }

  TEST_CASE("singular system is a solver error") {
    std::vector<Eigen::Triplet<double>> t = {{0, 0, 1.0}, {1, 0, 1.0}, {1, 1, 0.0}, {2, 2, 1.0}};
    Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
    auto sys = make_system(3, t, b);
    CHECK_THROWS_AS(solve_sparse(sys), SolverError);
  }

  TEST_CASE("eigensolver: zero stiffness") {
    SparseMatrix A(5, 5);
    auto pairs = generalized_symmetric_eig_smallest(A, Eigen::VectorXd::Ones(5), 1);
    REQUIRE(pairs.size() == 1);
    CHECK(std::abs(pairs[0].value) <= 1e-14);
    CHECK(std::abs(pairs[0].vector.squaredNorm() - 1.0) <= 1e-12);
  }

  TEST_CASE("eigensolver: 3x3 against the characteristic polynomial") {
    Eigen::Matrix3d a;
    a << 4, 1, 0.5, 1, 3, -0.7, 0.5, -0.7, 2;
    SparseMatrix A = a.sparseView();
    auto pairs = generalized_symmetric_eig_smallest(A, Eigen::VectorXd::Ones(3), 3);
    auto roots = cubic_roots_sym3(a);
    for (int i = 0; i < 3; ++i) CHECK(pairs[i].value == doctest::Approx(roots[i]).epsilon(1e-12));
  }

  TEST_CASE("eigensolver: periodic second difference") {
    const int N = 64;
    const double h = 2 * std::numbers::pi / N;
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < N; ++i) {
      t.emplace_back(i, i, 2.0 / h);
      t.emplace_back(i, (i + 1) % N, -1.0 / h);
      t.emplace_back(i, (i + N - 1) % N, -1.0 / h);
    }
    SparseMatrix A(N, N);
    A.setFromTriplets(t.begin(), t.end());
    Eigen::VectorXd M = Eigen::VectorXd::Constant(N, h);
    auto pairs = generalized_symmetric_eig_smallest(A, M, 3);
    const double expected = 2.0 / (h * h) * (1 - std::cos(h));
    CHECK(std::abs(pairs[0].value) <= 1e-10);
    CHECK(pairs[1].value == doctest::Approx(expected).epsilon(1e-10));
    CHECK(pairs[2].value == doctest::Approx(expected).epsilon(1e-10));
    CHECK(expected == doctest::Approx(1.0).epsilon(1e-3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double ip = pairs[i].vector.dot(M.asDiagonal() * pairs[j].vector);
        CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-10);
      }
    for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i].value >= pairs[i - 1].value);
  }

  TEST_CASE("eigensolver rejects an indefinite mass") {
    SparseMatrix A(3, 3);
    Eigen::VectorXd M(3);
    M << 1, -1, 1;
    CHECK_THROWS_AS(generalized_symmetric_eig_smallest(A, M, 1), DomainError);
  }

  TEST_CASE("log-log fit recovers planted exponents") {
    std::vector<double> xs = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    std::vector<double> a, b;
    for (double x : xs) {
      a.push_back(std::pow(x, -0.5));
      b.push_back(3 * std::pow(x, 0.4142));
    }
    auto fa = fit_loglog(xs, a);
    CHECK(fa.slope == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(fa.residual_rms <= 1e-13);
    CHECK(fa.n_points == 5);
    auto fb = fit_loglog(xs, b);
    CHECK(fb.slope == doctest::Approx(0.4142).epsilon(1e-13));
    CHECK(fb.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    std::vector<double> two = {1.0, 2.0};
    CHECK_THROWS_AS(fit_loglog(two, two), DomainError);
    std::vector<double> neg = {1.0, -2.0, 3.0};
    std::vector<double> pos = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit_loglog(neg, pos), DomainError);
  }

  TEST_CASE("finite-difference weights are exact on quadratics") {
    const double x0 = 0.1, x1 = 0.25, x2 = 0.6;
    auto f = [](double x) { return 3 * x * x - 2 * x + 1; };
    for (double at : {x0, x1, x2}) {
      auto w = first_derivative_weights(x0, x1, x2, at);
      CHECK(w.w0 * f(x0) + w.w1 * f(x1) + w.w2 * f(x2) == doctest::Approx(6 * at - 2).epsilon(1e-12));
    }
    auto w2 = second_derivative_weights(x0, x1, x2);
    CHECK(w2.w0 * f(x0) + w2.w1 * f(x1) + w2.w2 * f(x2) == doctest::Approx(6.0).epsilon(1e-12));
  }
}
