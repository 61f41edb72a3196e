// Command-line front end: neck <solve|barriers|eigen|sweep|check|mms>
//   --config PATH --out DIR [--quiet]
// Exit codes: 0 success, 1 configuration, 2 non-convergence, 3 check failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "neck/barriers.hpp"
#include "neck/config.hpp"
#include "neck/diagnostics.hpp"
#include "neck/errors.hpp"
#include "neck/modesolver.hpp"
#include "neck/report.hpp"
#include "neck/spectral.hpp"
#include "neck/sweep.hpp"

namespace fs = std::filesystem;
using namespace neck;

namespace {

enum Exit { kOk = 0, kConfig = 1, kSolver = 2, kCheck = 3 };

struct Context {
  Config config;
  fs::path dir;
  bool quiet = false;

  void say(const std::string& s) const {
    if (!quiet) std::cout << s;
  }
};

std::string verdict_line(const std::string& what, double fitted, double theory, double tol) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s: fitted %.4f  theory %.4f  tolerance %.2f  %s\n",
                what.c_str(), fitted, theory, tol,
                std::abs(fitted - theory) <= tol ? "within" : "outside");
  return buf;
}

int cmd_solve(const Context& ctx) {
  const Config& c = ctx.config;
  const DomainSpec d = make_domain(c);
  const Grid g = make_grid(c, d);
  Field f = [&] {
    if (c.n == 2) return solve_2d(d, -c.data, c.data, g, c.solver);
    ModeProblem p = make_mode_problem(g, c.k);
    const double data = c.data;
    p.outer = [data](double) { return data; };
    p.potential = c.potential;
    return solve_mode(p, c.solver);
  }();
  const GradientField grad = gradient(f);
  std::ostringstream csv;
  write_field_csv(csv, f, grad);
  write_text_file(ctx.dir / "field.csv", csv.str());

  double dn_max = 0.0;
  for (int i = 0; i <= g.Ns(); ++i) {
    if (std::abs(g.s()[i]) <= c.region_fraction * d.R() * (1.0 + 1e-12)) {
      dn_max = std::max(dn_max, grad.d_n.row(i).cwiseAbs().maxCoeff());
    }
  }
  Json j;
  j["epsilon"] = c.epsilon;
  j["max_u"] = f.values.cwiseAbs().maxCoeff();
  j["max_grad"] = max_gradient(f, grad, c.region_fraction);
  j["dn_max"] = dn_max;
  j["residual"] = f.residual;
  write_text_file(ctx.dir / "summary.json", j.dump(2) + "\n");
  ctx.say("max_u " + fmt17(j["max_u"].get<double>()) + "\nmax_grad " +
          fmt17(j["max_grad"].get<double>()) + "\ndn_max " + fmt17(dn_max) + "\n");
  return kOk;
}

int cmd_barriers(const Context& ctx) {
  const Config& c = ctx.config;
  const BarrierParams params = make_barrier_params(c);
  const TildeParams tilde = make_tilde_params(c);
  Json reports = Json::array();
  bool failed = false;
  char line[200];
  std::snprintf(line, sizeof line, "%-22s %10s %12s %14s %s\n", "quantity", "points", "violations",
                "worst", "required");
  ctx.say(line);
  for (SignQuantity q : c.barriers.quantities) {
    const DomainSpec base = make_domain(c);
    const DomainSpec d =
        q == SignQuantity::Dnu2d ? DomainSpec(2, c.epsilon, base.R(), c.profile) : base;
    const SignReport r = certify_sign(q, params, tilde, d, c.barriers.sampling);
    const bool required = std::find(c.barriers.informational.begin(),
                                    c.barriers.informational.end(),
                                    q) == c.barriers.informational.end();
    Json jr = to_json_value(r, params);
    jr["required"] = required;
    reports.push_back(jr);
    if (required && r.n_violations > 0) failed = true;
    std::snprintf(line, sizeof line, "%-22s %10d %12d %14.6g %s\n", to_string(q).c_str(),
                  r.n_points, r.n_violations, r.worst_margin, required ? "yes" : "no");
    ctx.say(line);
  }
  Json j;
  j["params"] = to_json_value(params);
  j["tilde"] = {{"beta1", tilde.beta1}, {"beta2", tilde.beta2}};
  j["reports"] = reports;
  write_text_file(ctx.dir / "barriers.json", j.dump(2) + "\n");
  return failed ? kCheck : kOk;
}

int cmd_eigen(const Context& ctx) {
  const Config& c = ctx.config;
  const EigenResult r = first_nonzero_eigenvalue(c.eigen.weight, c.eigen.N, c.eigen.n);
  write_text_file(ctx.dir / "eigen.json", to_json(r) + "\n");
  ctx.say("lambda1 " + fmt17(r.lambda1) + "\ntilde_alpha " + fmt17(r.tilde_alpha) +
          (r.tilde_alpha_ge_one ? "  (>= 1, flagged)" : "") + "\n");
  return kOk;
}

int cmd_sweep(const Context& ctx) {
  const SweepConfig sc = make_sweep_config(ctx.config);
  const SweepReport rep = run_sweep(sc);
  emit_report(rep, ctx.dir, sc.formats);
  const bool flat = sc.profile.kind() == ProfileKind::Flat;
  ctx.say(verdict_line("blow-up exponent", rep.fit.slope, rep.theory_exponent, flat ? 0.02 : 0.05));
  ctx.say(render_table(rep.verdicts));
  return rep.all_required_passed() ? kOk : kCheck;
}

int cmd_check(const Context& ctx) {
  const SweepConfig sc = make_sweep_config(ctx.config);
  const SweepReport rep = run_sweep(sc);
  write_text_file(ctx.dir / "checks.json", to_json_value(rep.verdicts).dump(2) + "\n");
  ctx.say(render_table(rep.verdicts));
  return rep.all_required_passed() ? kOk : kCheck;
}

int cmd_mms(const Context& ctx) {
  const Config& c = ctx.config;
  const DomainSpec d = make_domain(c);
  std::vector<Grid> grids;
  for (auto [Ns, Nt] : c.mms.grids) grids.push_back(build_grid(d, Ns, Nt, c.grid.stretch, c.grid.grading));
  const int k = c.n == 2 ? 1 : c.k;
  const std::vector<double> errors = manufactured_convergence(manufactured_solution(k), k, grids);
  Json j;
  Json rows = Json::array();
  bool ok = true;
  for (size_t i = 0; i < errors.size(); ++i) {
    Json row = {{"Ns", grids[i].Ns()}, {"Nt", grids[i].Nt()}, {"max_error", errors[i]}};
    if (i > 0) {
      const double order = std::log2(errors[i - 1] / errors[i]);
      row["order"] = number_or_null(order);
      if (i + 1 == errors.size()) ok = order >= c.mms.min_order && order <= c.mms.max_order;
    }
    rows.push_back(row);
    ctx.say("Ns " + std::to_string(grids[i].Ns()) + "  Nt " + std::to_string(grids[i].Nt()) +
            "  max error " + fmt17(errors[i]) + "\n");
  }
  j["k"] = k;
  j["levels"] = rows;
  j["order_window"] = {c.mms.min_order, c.mms.max_order};
  j["passed"] = ok;
  write_text_file(ctx.dir / "mms.json", j.dump(2) + "\n");
  ctx.say(std::string("observed order ") + (ok ? "within" : "outside") + " the expected window\n");
  return ok ? kOk : kCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient blow-up experiments for the insulated conductivity neck"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "runs";
  bool quiet = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "Output root; results go to <out>/<command>-<hash>");
  app.add_flag("--quiet", quiet, "Suppress summaries");
  app.fallthrough();

  using Handler = int (*)(const Context&);
  const std::pair<const char*, Handler> commands[] = {
      {"solve", cmd_solve}, {"barriers", cmd_barriers}, {"eigen", cmd_eigen},
      {"sweep", cmd_sweep}, {"check", cmd_check},       {"mms", cmd_mms}};
  const std::pair<const char*, const char*> help[] = {
      {"solve", "Solve one configuration and write field.csv and summary.json"},
      {"barriers", "Certify barrier sign conditions"},
      {"eigen", "First nonzero eigenvalue of the weighted spherical operator"},
      {"sweep", "Run an epsilon sweep and write sweep.csv, report.json, rate.svg"},
      {"check", "Run the diagnostics over an epsilon sweep"},
      {"mms", "Manufactured-solution convergence study"}};
  for (const auto& [name, text] : help) app.add_subcommand(name, text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    Context ctx;
    ctx.quiet = quiet;
    ctx.config = config_path.empty() ? parse_config("{}") : load_config(config_path);
    for (const auto& [name, handler] : commands) {
      if (!app.got_subcommand(name)) continue;
      ctx.dir = fs::path(out_dir) / (std::string(name) + "-" + config_hash(name, ctx.config));
      std::error_code ec;
      fs::create_directories(ctx.dir, ec);
      if (ec) throw std::runtime_error("cannot create " + ctx.dir.string() + ": " + ec.message());
      const int code = handler(ctx);
      ctx.say("results in " + ctx.dir.string() + "\n");
      return code;
    }
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
