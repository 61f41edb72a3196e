// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "neck/barriers.hpp"
#include "neck/spectral.hpp"
#include "neck/sweep.hpp"

using namespace neck;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s | %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const CheckOutcome* find(const SweepReport& r, const std::string& name) {
  for (const auto& v : r.verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

SweepConfig quadratic_sweep(int n) {
  SweepConfig c;
  c.n = n;
  c.profile = BoundaryProfile::quadratic(0.5, -0.5);
  c.epsilons = {1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4};
  return c;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  DomainSpec d(3, 1e-3, 0.1, BoundaryProfile::flat());
  ModeProblem p = make_mode_problem(build_grid(d, 256, 32, Stretch::NeckRefined), 1);
  p.outer = [](double) { return 0.1; };
  Field f = solve_mode(p);
  double err = 0.0;
  for (int i = 0; i <= f.grid.Ns(); ++i)
    for (int j = 0; j <= f.grid.Nt(); ++j) err = std::max(err, std::abs(f.values(i, j) - f.grid.s()[i]));
  const double dt = seconds_since(t0);
  report(1, "flat k=1 solution equals r", err <= 1e-8 && dt < 5.0,
         "max error " + fmt("%.3e", err) + ", " + fmt("%.3f s", dt));
}

void criterion2(const SweepReport& r, double dt) {
  const double target = (std::sqrt(2.0) - 2) / 2;
  const bool ok = std::abs(r.fit.slope - target) <= 0.05 && dt < 120.0;
  report(2, "n=3 quadratic blow-up exponent", ok,
         "slope " + fmt("%.4f", r.fit.slope) + " vs " + fmt("%.4f", target) + ", " + fmt("%.2f s", dt));
}

void criterion3(const SweepReport& r) {
  const bool ok = std::abs(r.fit.slope + 0.5) <= 0.05;
  report(3, "n=2 blow-up exponent", ok, "slope " + fmt("%.4f", r.fit.slope) + " vs -0.5");
}

void criterion4(const SweepReport& r) {
  const CheckOutcome* c = find(r, "flat_gradient");
  const bool ok = c && c->passed && r.rows.front().epsilon / r.rows.back().epsilon >= 99.0;
  report(4, "flat-profile gradient bounded", ok,
         c ? "drift " + fmt("%.3e", c->measured) + "; " + c->note : "missing verdict");
}

void criterion5(const SweepReport& r) {
  const CheckOutcome* hi = find(r, "envelope_hi_spread");
  const CheckOutcome* lo = find(r, "envelope_lo_spread");
  const CheckOutcome* q = find(r, "envelope_quotient");
  const bool ok = hi && lo && q && hi->passed && lo->passed && q->passed;
  std::string detail = "missing verdict";
  if (hi && lo && q) {
    detail = "hi spread " + fmt("%.3f", hi->measured) + ", lo spread " + fmt("%.3f", lo->measured) +
             ", quotient " + fmt("%.3f", q->measured);
  }
  report(5, "growth envelope constants stable", ok, detail);
}

void criterion6() {
  auto e = first_nonzero_eigenvalue(constant_weight(), 1024, 3);
  bool ok = std::abs(e.lambda1 - 1.0) <= 1e-6 && e.richardson_ratio >= 3.5 && e.richardson_ratio <= 4.5;
  double worst = 0.0;
  for (int n = 3; n <= 8; ++n) worst = std::max(worst, std::abs(tilde_alpha(n, n - 2.0) - alpha_exponent(n)));
  ok = ok && worst <= 1e-14;
  report(6, "weighted eigenvalue and exponent formula", ok,
         "lambda1 " + fmt("%.10f", e.lambda1) + ", ratio " + fmt("%.3f", e.richardson_ratio) +
             ", max formula gap " + fmt("%.1e", worst));
}

void criterion7() {
  DomainSpec d(3, 1e-3, 0.1, BoundaryProfile::quadratic(0.5, -0.5));
  auto corner = corner_params(3, 1);
  SamplingOptions s;
  auto rep = certify_sign(SignQuantity::LPhiLe0, corner, make_tilde_params(3, 1), d, s);
  bool ok = rep.n_violations == 0 && rep.n_points >= 32768;

  // Finite-difference L against the analytic image at h and h/2.
  const double K = angular_eigenvalue(3, 1);
  auto val = [&](double r, double x) { return phi_case1(corner, r, x).value; };
  auto fdL = [&](double r, double x, double h) {
    const double c = val(r, x);
    return (val(r + h, x) - 2 * c + val(r - h, x)) / (h * h) + (val(r + h, x) - val(r - h, x)) / (2 * h * r) -
           K / (r * r) * c + (val(r, x + h) - 2 * c + val(r, x - h)) / (h * h);
  };
  double min_ratio = 1e300, max_ratio = 0.0;
  for (auto [r, x] : {std::pair{0.05, 0.01}, {0.08, 0.02}, {0.03, -0.005}}) {
    const double exact = phi_case1(corner, r, x).L;
    const double ratio = std::abs(fdL(r, x, 5e-4) - exact) / std::abs(fdL(r, x, 2.5e-4) - exact);
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
  }
  ok = ok && min_ratio >= 3.5 && max_ratio <= 4.5;

  double worst = 0.0;
  for (int n = 3; n <= 8; ++n)
    for (int k = 1; k <= 3; ++k)
      for (double xi : {0.05, 0.1, 0.2}) {
        const double beta = alpha_k(n, k) - xi;
        worst = std::max(worst, std::abs(feasibility_margin(n, k, xi, beta, 2 + 2 * beta / xi)));
      }
  ok = ok && worst <= 1e-11;
  report(7, "corner barrier certification", ok,
         std::to_string(rep.n_violations) + " violations of " + std::to_string(rep.n_points) +
             ", FD ratio [" + fmt("%.2f", min_ratio) + fmt(", %.2f]", max_ratio) + ", corner margin " +
             fmt("%.1e", worst));
}

void criterion8(const std::vector<std::pair<std::string, const SweepReport*>>& sweeps) {
  bool ok = true;
  std::string detail;
  for (const auto& [name, r] : sweeps) {
    const CheckOutcome* q = find(*r, "q_maximum");
    if (!q) {
      ok = false;
      detail += name + ": missing; ";
      continue;
    }
    if (q->required && !q->passed) ok = false;
    detail += name + (q->passed ? ": outer" : ": interior") + (q->required ? "" : " (informational)") + "; ";
  }
  report(8, "Q maximum on the outer columns", ok, detail);
}

void criterion9(const SweepReport& r) {
  const bool ok = r.tilde_alpha && std::abs(r.fit.slope - r.theory_exponent) <= 0.05;
  report(9, "anisotropic exponent", ok,
         "slope " + fmt("%.4f", r.fit.slope) + " vs " + fmt("%.4f", r.theory_exponent) + " (lambda " +
             fmt("%.6f", r.lambda1.value_or(NAN)) + ")");
}

void criterion10(const SweepReport& first) {
  SweepReport again = run_sweep(quadratic_sweep(3));
  bool ok = sweep_json(first) == sweep_json(again) && sweep_csv(first) == sweep_csv(again);
  DomainSpec d(3, 1e-3, 0.5, BoundaryProfile::quadratic(0.5, -0.5));
  Grid g = build_grid(d, 256, 32, Stretch::NeckRefined);
  ModeProblem p1 = make_mode_problem(g, 1), p2 = make_mode_problem(g, 1);
  p1.outer = [](double t) { return 1.0 + 0.5 * t * t; };
  p2.outer = [](double t) { return 2.0 * (1.0 + 0.5 * t * t); };
  const double lin = (solve_mode(p2).values - 2.0 * solve_mode(p1).values).cwiseAbs().maxCoeff();
  ok = ok && lin <= 1e-9;
  report(10, "determinism and linearity", ok,
         std::string(ok ? "identical reports" : "reports or solves differ") + ", linearity " + fmt("%.2e", lin));
}

}  // namespace

int main() {
  try {
    criterion1();

    const auto t0 = std::chrono::steady_clock::now();
    const SweepReport q3 = run_sweep(quadratic_sweep(3));
    const double dt = seconds_since(t0);
    const SweepReport q2 = run_sweep(quadratic_sweep(2));
    SweepConfig fc = quadratic_sweep(3);
    fc.profile = BoundaryProfile::flat();
    const SweepReport flat = run_sweep(fc);
    SweepConfig ac = quadratic_sweep(3);
    ac.profile = BoundaryProfile::anisotropic({2.0, 1.0});
    const SweepReport aniso = run_sweep(ac);

    criterion2(q3, dt);
    criterion3(q2);
    criterion4(flat);
    criterion5(q3);
    criterion6();
    criterion7();
    criterion8({{"n=3", &q3}, {"n=2", &q2}, {"flat", &flat}, {"mus=(2,1)", &aniso}});
    criterion9(aniso);
    criterion10(q3);
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance run aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
