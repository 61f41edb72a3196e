#include <cmath>

#include "doctest.h"
#include "neck/diagnostics.hpp"
#include "neck/errors.hpp"

using namespace neck;

namespace {
Field mode_field(double eps, int k = 1, double R = 0.5, int Ns = 256, int Nt = 32,
                 BoundaryProfile prof = BoundaryProfile::quadratic(0.5, -0.5)) {
  DomainSpec d(3, eps, R, prof);
  return solve_mode(make_mode_problem(build_grid(d, Ns, Nt, Stretch::NeckRefined), k));
}

Field odd_2d(double eps, int Ns, int Nt, double R = 0.5) {
  DomainSpec d(2, eps, R, BoundaryProfile::quadratic(0.5, -0.5));
  return solve_2d(d, -1.0, 1.0, build_grid(d, Ns, Nt, Stretch::NeckRefined));
}

Field flat_r(double eps, double R = 0.1) {
  DomainSpec d(3, eps, R, BoundaryProfile::flat());
  ModeProblem p = make_mode_problem(build_grid(d, 128, 16, Stretch::NeckRefined), 1);
  p.outer = [R](double) { return R; };
  return solve_mode(p);
}
}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("d_n bound on a flat field") {
    std::vector<Field> fs = {flat_r(1e-2), flat_r(1e-3), flat_r(1e-4)};
    auto c = check_dn_bound(fs);
    CHECK(c.passed);
    CHECK(c.measured == doctest::Approx(1.0));
    CHECK_THROWS_AS(check_dn_bound({fs[0], fs[1]}), ConfigError);
  }

  TEST_CASE("d_n bound across a quadratic sweep") {
    std::vector<Field> fs = {mode_field(1e-2), mode_field(1e-3), mode_field(1e-4)};
    auto c = check_dn_bound(fs);
    CHECK(c.passed);
    CHECK(c.measured <= 3.0);
  }

  TEST_CASE("local gradient lemma") {
    CHECK(check_local_gradient_lemma(flat_r(1e-3)).measured <= 4.0);
    auto zero = check_local_gradient_lemma(mode_field(1e-3, 0, 0.1, 64, 16));
    CHECK(zero.measured <= 1e-6);
    CHECK(check_local_gradient_lemma(mode_field(1e-3)).passed);
    auto odd = odd_2d(1e-3, 256, 32);
    CHECK(check_local_gradient_lemma(odd).passed);
    auto pw = check_pointwise_gradient_lemma(odd);
    CHECK_FALSE(pw.required);
    CHECK(pw.measured > 50.0);
  }

  TEST_CASE("gradient lemma stability") {
    std::vector<CheckOutcome> per;
    for (double e : {1e-2, 1e-3, 1e-4}) per.push_back(check_local_gradient_lemma(mode_field(e)));
    auto c = check_local_gradient_stability(per);
    CHECK(c.passed);
    CHECK(c.measured >= 1.0);
  }

  TEST_CASE("boundary identity") {
    DomainSpec flat(2, 1e-3, 0.1, BoundaryProfile::flat());
    Field f = solve_2d(flat, -1.0, 1.0, build_grid(flat, 64, 8, Stretch::Uniform));
    CHECK(check_boundary_identity(f).measured <= 1e-6);
    auto coarse = check_boundary_identity(odd_2d(1e-2, 128, 16));
    auto fine = check_boundary_identity(odd_2d(1e-2, 256, 32));
    CHECK(fine.measured < coarse.measured);
    CHECK(coarse.measured / fine.measured >= 1.5);
    CHECK(fine.passed);
    CHECK_THROWS_AS(check_boundary_identity(flat_r(1e-3)), ConfigError);
  }

  TEST_CASE("Q parameters") {
    DomainSpec d(3, 1e-3, 0.1, BoundaryProfile::quadratic(0.5, -0.5));
    validate_q_params(d, QParams{QVariant::Case1, 5.0, 0.0, 0.0, 5.0});
    CHECK_THROWS_AS(validate_q_params(d, QParams{QVariant::Case1, 4.0, 0.0, 0.0, 5.0}), ConfigError);
    CHECK_THROWS_AS(validate_q_params(d, QParams{QVariant::Case1, 5.0, 0.0, 0.0, 4.0}), ConfigError);
    auto q = default_q_params(d, QVariant::Case1);
    CHECK(q.A == doctest::Approx(5.0));
    validate_q_params(d, q);
    DomainSpec c2(3, 1e-3, 0.1, BoundaryProfile::quadratic(1.0, 0.25));
    validate_q_params(c2, default_q_params(c2, QVariant::Case2));
  }

  TEST_CASE("Q maximum sits on the outer columns") {
    for (double e : {1e-2, 1e-3, 1e-4}) {
      Field f = mode_field(e);
      auto c = check_q_maximum(f, default_q_params(f.grid.domain(), QVariant::Case1));
      CHECK(c.passed);
    }
    Field flat = flat_r(1e-3);
    CHECK(check_q_maximum(flat, default_q_params(flat.grid.domain(), QVariant::Case1)).passed);
  }

  TEST_CASE("Q argmax is invariant under data scaling") {
    DomainSpec d(3, 1e-3, 0.5, BoundaryProfile::quadratic(0.5, -0.5));
    Grid g = build_grid(d, 256, 32, Stretch::NeckRefined);
    ModeProblem p1 = make_mode_problem(g, 1), p2 = make_mode_problem(g, 1);
    p2.outer = [](double) { return 3.0; };
    auto q = default_q_params(d, QVariant::Case1);
    auto a = check_q_maximum(solve_mode(p1), q);
    auto b = check_q_maximum(solve_mode(p2), q);
    CHECK(a.location == b.location);
    CHECK(b.measured == doctest::Approx(a.measured));
  }

  TEST_CASE("flat gradient stays bounded") {
    std::vector<Field> fs = {flat_r(1e-2), flat_r(1e-3), flat_r(1e-4)};
    auto c = check_flat_gradient(fs);
    CHECK(c.passed);
    CHECK(c.measured <= 0.1);
  }

  TEST_CASE("max gradient") {
    Field f = flat_r(1e-3);
    CHECK(max_gradient(f, gradient(f)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
  }
}
