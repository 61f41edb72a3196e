#include <cmath>

#include "doctest.h"
#include "neck/errors.hpp"
#include "neck/geometry.hpp"

using namespace neck;

namespace {
DomainSpec quad(double eps, double k1 = 0.5, double k2 = -0.5) {
  return DomainSpec(3, eps, 0.1, BoundaryProfile::quadratic(k1, k2));
}
}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("boundary heights") {
    auto d = quad(1e-3);
    CHECK(boundary_height(d, Side::Upper, 0.0) == doctest::Approx(5e-4).epsilon(1e-14));
    CHECK(boundary_height(d, Side::Upper, 0.1) == doctest::Approx(5.5e-3).epsilon(1e-13));
    DomainSpec flat(3, 1e-3, 0.3, BoundaryProfile::flat());
    CHECK(boundary_height(flat, Side::Lower, 0.2) == doctest::Approx(-5e-4).epsilon(1e-14));
    CHECK_THROWS_AS(boundary_height(d, Side::Upper, 0.2), DomainError);
  }

  TEST_CASE("gap") {
    CHECK(gap(quad(1e-3), 0.1) == doctest::Approx(0.011).epsilon(1e-13));
    DomainSpec flat(3, 1e-3, 0.1, BoundaryProfile::flat());
    CHECK(gap(flat, 0.07) == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(gap(quad(1e-4, 1.0, 0.0), 0.05) == doctest::Approx(2.6e-3).epsilon(1e-13));
  }

  TEST_CASE("invalid profiles are rejected") {
    CHECK_THROWS(BoundaryProfile::quadratic(0.2, 0.5));
    CHECK_THROWS(BoundaryProfile::anisotropic({1.0, -1.0}));
    CHECK_THROWS(BoundaryProfile::quadratic(0.5, -0.5, Perturbation{1.0, 1.5}));
    CHECK_THROWS(DomainSpec(1, 1e-3, 0.1, BoundaryProfile::flat()));
    CHECK_THROWS(DomainSpec(3, 0.0, 0.1, BoundaryProfile::flat()));
  }

  TEST_CASE("outward normals") {
    auto d = quad(1e-3);
    auto up = outward_normal(d, Side::Upper, 0.2 * 0.5);
    CHECK(std::hypot(up.r, up.n) == doctest::Approx(1.0).epsilon(1e-14));
    DomainSpec wide(3, 1e-3, 0.3, BoundaryProfile::quadratic(0.5, -0.5));
    auto u = outward_normal(wide, Side::Upper, 0.2);
    CHECK(u.r == doctest::Approx(-0.196116135).epsilon(1e-8));
    CHECK(u.n == doctest::Approx(0.980580676).epsilon(1e-8));
    auto l = outward_normal(wide, Side::Lower, 0.2);
    CHECK(l.r == doctest::Approx(-0.196116135).epsilon(1e-8));
    CHECK(l.n == doctest::Approx(-0.980580676).epsilon(1e-8));
    DomainSpec flat(3, 1e-3, 0.1, BoundaryProfile::flat());
    auto f = outward_normal(flat, Side::Upper, 0.05);
    CHECK(f.r == 0.0);
    CHECK(f.n == 1.0);
  }

  TEST_CASE("derivatives match finite differences") {
    DomainSpec d(3, 1e-3, 0.3, BoundaryProfile::quadratic(0.7, -0.2, Perturbation{0.3, 0.5}));
    const double h = 1e-5;
    for (double r : {0.05, 0.1, 0.2}) {
      double fd1 = (boundary_height(d, Side::Upper, r + h) - boundary_height(d, Side::Upper, r - h)) / (2 * h);
      double fd2 = (boundary_slope(d, Side::Upper, r + h) - boundary_slope(d, Side::Upper, r - h)) / (2 * h);
      CHECK(boundary_slope(d, Side::Upper, r) == doctest::Approx(fd1).epsilon(1e-8));
      CHECK(boundary_curvature(d, Side::Upper, r) == doctest::Approx(fd2).epsilon(1e-7));
    }
    CHECK(boundary_curvature(d, Side::Upper, 0.0) == doctest::Approx(1.4));
  }

  TEST_CASE("exponents") {
    CHECK(alpha_exponent(2) == 0.0);
    CHECK(alpha_exponent(3) == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-15));
    CHECK(alpha_exponent(4) == doctest::Approx((-3 + std::sqrt(17.0)) / 2).epsilon(1e-15));
    CHECK(alpha_k(3, 0) == 0.0);
    CHECK(alpha_k(3, 2) == doctest::Approx(std::sqrt(5.0) - 1).epsilon(1e-15));
    CHECK(alpha_k(5, 1) == doctest::Approx(std::sqrt(7.0) - 2).epsilon(1e-15));
    CHECK(blowup_exponent(2) == -0.5);
    CHECK(blowup_exponent(3) == doctest::Approx((std::sqrt(2.0) - 2) / 2).epsilon(1e-15));
    CHECK(blowup_exponent(4) == doctest::Approx(-0.2192236).epsilon(1e-6));
    CHECK(weinkove_gamma(4) == doctest::Approx((-5 + std::sqrt(33.0)) / 4).epsilon(1e-14));
    CHECK(weinkove_gamma(5) == doctest::Approx((-10 + std::sqrt(160.0)) / 6).epsilon(1e-14));
    CHECK(weinkove_gamma(6) == doctest::Approx((-17 + std::sqrt(465.0)) / 8).epsilon(1e-14));
    CHECK_THROWS_AS(alpha_exponent(1), DomainError);
    CHECK_THROWS_AS(alpha_k(2, 1), DomainError);
    CHECK_THROWS_AS(weinkove_gamma(3), DomainError);
  }

  TEST_CASE("exponent identities") {
    for (int n = 3; n <= 10; ++n) {
      double a = alpha_exponent(n);
      CHECK(std::abs(alpha_k(n, 1) - a) <= 1e-14);
      CHECK(std::abs(a * a + (n - 1) * a - (n - 2)) <= 1e-14);
      for (int k = 0; k < 6; ++k) CHECK(alpha_k(n, k + 1) > alpha_k(n, k));
    }
  }

  TEST_CASE("gap lower bounds") {
    DomainSpec a(3, 1e-3, 0.1, BoundaryProfile::anisotropic({2.0, 1.0}));
    auto q = quad(1e-3, 0.3, -0.1);
    for (double r = 0.0; r <= 0.1; r += 0.01) {
      CHECK(gap(q, r) >= 1e-3);
      CHECK(gap(a, r) >= 1e-3 + 1.0 * r * r - 1e-15);
    }
  }
}
