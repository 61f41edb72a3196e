#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "neck/errors.hpp"
#include "neck/geometry.hpp"
#include "neck/numerics.hpp"
#include "neck/spectral.hpp"

using namespace neck;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Operator {
  Eigen::MatrixXd A;
  Eigen::VectorXd mass;
};

// Flux-form periodic operator -(a u')' with a at cell midpoints and a lumped
// weighted mass, assembled densely.
Operator dense_operator(const Weight& w, int N) {
  const double h = kTwoPi / N;
  Operator op{Eigen::MatrixXd::Zero(N, N), Eigen::VectorXd(N)};
  for (int i = 0; i < N; ++i) {
    const double ar = w((i + 0.5) * h) / h, al = w((i - 0.5) * h) / h;
    op.A(i, i) += ar + al;
    op.A(i, (i + 1) % N) -= ar;
    op.A(i, (i + N - 1) % N) -= al;
    op.mass(i) = w(i * h) * h;
  }
  return op;
}

// Fourier-Galerkin value of the first nonzero eigenvalue with modes up to M.
double galerkin_lambda1(const Weight& w, int M) {
  const int dim = 2 * M + 1;
  const int Q = 8 * M + 16;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim, dim), G = Eigen::MatrixXd::Zero(dim, dim);
  auto basis = [](int b, double th, double& v, double& dv) {
    if (b == 0) {
      v = 1.0;
      dv = 0.0;
      return;
    }
    const int m = (b + 1) / 2;
    if (b % 2) {
      v = std::cos(m * th);
      dv = -m * std::sin(m * th);
    } else {
      v = std::sin(m * th);
      dv = m * std::cos(m * th);
    }
  };
  for (int q = 0; q < Q; ++q) {
    const double th = kTwoPi * q / Q, a = w(th), dq = kTwoPi / Q;
    for (int i = 0; i < dim; ++i) {
      double vi, di;
      basis(i, th, vi, di);
      for (int j = 0; j < dim; ++j) {
        double vj, dj;
        basis(j, th, vj, dj);
        K(i, j) += a * di * dj * dq;
        G(i, j) += a * vi * vj * dq;
      }
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, G);
  return es.eigenvalues()(1);
}
}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("weights") {
    CHECK(weight_from_mus({1, 1})(0.7) == doctest::Approx(1.0));
    Weight w = weight_from_mus({2, 1});
    CHECK(w(0.0) == doctest::Approx(2.0));
    CHECK(w(std::numbers::pi / 2) == doctest::Approx(1.0));
    CHECK(w(std::numbers::pi / 4) == doctest::Approx(1.5));
    CHECK_THROWS_AS(weight_from_mus({1, 2, 3}), ConfigError);
    CHECK_THROWS_AS(weight_from_mus({1, -2}), DomainError);
    CHECK_THROWS(tabulated_weight({1.0, 0.0, 2.0}));
    Weight t = tabulated_weight({1.0, 2.0, 3.0, 2.0});
    CHECK(t(0.0) == doctest::Approx(1.0));
    CHECK(t(std::numbers::pi / 4) == doctest::Approx(1.5));
  }

  TEST_CASE("constant weight on the circle") {
    auto r = first_nonzero_eigenvalue(constant_weight(), 1024, 3);
    CHECK(std::abs(r.lambda1 - 1.0) <= 1e-6);
    CHECK(r.richardson_ratio >= 3.5);
    CHECK(r.richardson_ratio <= 4.5);
    CHECK(r.tilde_alpha == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-9));
    const double h = kTwoPi / 1024;
    CHECK(r.lambda1_raw == doctest::Approx(2.0 / (h * h) * (1 - std::cos(h))).epsilon(1e-10));
  }

  TEST_CASE("constant weight closed form in higher dimension") {
    auto r = first_nonzero_eigenvalue(constant_weight(), 1024, 5);
    CHECK(r.closed_form);
    CHECK(r.lambda1 == 3.0);
    CHECK(r.tilde_alpha == doctest::Approx(alpha_exponent(5)).epsilon(1e-14));
  }

  TEST_CASE("anisotropic weight against a dense eigensolve") {
    Weight w = weight_from_mus({2, 1});
    const int N = 512;
    Operator op = dense_operator(w, N);
    Eigen::MatrixXd M = op.mass.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(op.A, M);
    const double oracle = es.eigenvalues()(1);
    CHECK(std::abs(discrete_first_eigenvalue(w, N) - oracle) <= 1e-8);
  }

  TEST_CASE("anisotropic weight against Fourier-Galerkin") {
    for (auto mus : {std::vector<double>{2, 1}, {3, 1}, {1, 4}}) {
      Weight w = weight_from_mus(mus);
      auto r = first_nonzero_eigenvalue(w, 1024, 3);
      CHECK(r.lambda1 == doctest::Approx(galerkin_lambda1(w, 24)).epsilon(1e-7));
      CHECK(r.convergence_estimate < 1e-5);
    }
  }

  TEST_CASE("scaling invariance") {
    auto a = first_nonzero_eigenvalue(weight_from_mus({1, 1}), 512, 3);
    auto b = first_nonzero_eigenvalue(weight_from_mus({4, 4}), 512, 3);
    CHECK(a.lambda1 == doctest::Approx(b.lambda1).epsilon(1e-12));
    auto c = first_nonzero_eigenvalue(weight_from_mus({2, 1}), 512, 3);
    auto d = first_nonzero_eigenvalue(weight_from_mus({6, 3}), 512, 3);
    CHECK(c.lambda1 == doctest::Approx(d.lambda1).epsilon(1e-12));
    CHECK(std::abs(b.lambda1 - 1.0) <= 1e-6);
  }

  TEST_CASE("first eigenvector is weighted-orthogonal to constants") {
    Operator op = dense_operator(weight_from_mus({2, 1}), 256);
    SparseMatrix A = op.A.sparseView();
    auto pairs = generalized_symmetric_eig_smallest(A, op.mass, 2);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(256);
    CHECK(std::abs(pairs[1].vector.dot(op.mass.asDiagonal() * ones)) <= 1e-10);
    CHECK(std::abs(pairs[0].value) <= 1e-10);
  }

  TEST_CASE("tilde alpha") {
    CHECK(tilde_alpha(3, 1.0) == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-15));
    CHECK(tilde_alpha(3, 2.0) == doctest::Approx(std::sqrt(3.0) - 1).epsilon(1e-15));
    for (int n = 3; n <= 8; ++n) CHECK(std::abs(tilde_alpha(n, n - 2.0) - alpha_exponent(n)) <= 1e-14);
    CHECK_THROWS_AS(tilde_alpha(2, 1.0), DomainError);
    CHECK_THROWS_AS(tilde_alpha(3, -1.0), DomainError);
  }

  TEST_CASE("resolution validation") {
    CHECK_THROWS_AS(first_nonzero_eigenvalue(weight_from_mus({2, 1}), 30, 3), ConfigError);
    CHECK_THROWS_AS(first_nonzero_eigenvalue(weight_from_mus({2, 1}), 1024, 4), ConfigError);
  }

  TEST_CASE("json output") {
    auto s = to_json(first_nonzero_eigenvalue(constant_weight(), 256, 3));
    CHECK(s.find("\"lambda1\"") != std::string::npos);
    CHECK(s.find("\"richardson_ratio\"") != std::string::npos);
  }
}
