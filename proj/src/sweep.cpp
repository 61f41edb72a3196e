#include "neck/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "neck/barriers.hpp"
#include "neck/errors.hpp"
#include "neck/report.hpp"
#include "neck/spectral.hpp"

namespace neck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DomainSpec member_domain(const SweepConfig& c, double eps) {
  return DomainSpec(c.n, eps, c.R, c.profile);
}

Grid member_grid(const SweepConfig& c, const DomainSpec& d) {
  return build_grid(d, c.grid.Ns, c.grid.Nt, c.grid.stretch, c.grid.grading);
}

double envelope_exponent_for(const SweepConfig& c, std::optional<double> tilde) {
  if (tilde) return *tilde;
  if (c.profile.kind() == ProfileKind::Flat) return 1.0;
  if (c.n == 2) return alpha_exponent(2);
  return alpha_k(c.n, c.k);
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo <= 0.0) return kInf;
  return *hi / *lo;
}

CheckOutcome spread_outcome(std::string name, const std::vector<double>& v, double limit,
                            std::string note) {
  CheckOutcome c;
  c.name = std::move(name);
  c.measured = spread(v);
  c.threshold = limit;
  c.passed = c.measured <= limit;
  c.note = std::move(note);
  return c;
}

SweepRow measure_row(const SweepConfig& c, const Field& f, double alpha, bool skip_axis_layer) {
  const Grid& g = f.grid;
  const double eps = g.domain().epsilon();
  const GradientField grad = gradient(f);
  const auto& s = g.s();
  double first_off_axis = kInf;
  for (double si : s) {
    if (si != 0.0) first_off_axis = std::min(first_off_axis, std::abs(si));
  }

  SweepRow row;
  row.epsilon = eps;
  row.max_grad = max_gradient(f, grad, c.region_fraction, skip_axis_layer ? std::sqrt(eps) : 0.0);
  row.ratio_lo = kInf;
  row.ratio_lo_axis = kInf;
  for (int i = 0; i <= g.Ns(); ++i) {
    const double r = s[i];
    if (std::abs(r) > c.region_fraction * c.R * (1.0 + 1e-12)) continue;
    for (int j = 0; j <= g.Nt(); ++j) {
      const double x = g.x_n(i, j);
      const double u = std::abs(f.values(i, j));
      row.max_u = std::max(row.max_u, u);
      row.dn_max = std::max(row.dn_max, std::abs(grad.d_n(i, j)));
      row.ratio_hi = std::max(row.ratio_hi, u / std::pow(eps + r * r + x * x, 0.5 * alpha));
      const double lo = u / std::pow(r * r + x * x, 0.5 * alpha);
      if (std::abs(r) >= first_off_axis) row.ratio_lo_axis = std::min(row.ratio_lo_axis, lo);
      if (std::abs(r) >= std::sqrt(eps)) row.ratio_lo = std::min(row.ratio_lo, lo);
    }
  }
  return row;
}

std::vector<Field> solve_all(const SweepConfig& c, std::optional<double> potential) {
  const int m = static_cast<int>(c.epsilons.size());
  std::vector<std::optional<Field>> out(m);
  std::vector<std::exception_ptr> errors(m);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int i = next++; i < m; i = next++) {
      try {
        out[i] = solve_sweep_member(c, c.epsilons[i], potential);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nthreads = std::min(worker_count(c.threads), m);
  if (nthreads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (int i = 0; i < m; ++i) {
    if (!errors[i]) continue;
    const std::string at = " (eps = " + fmt17(c.epsilons[i]) + ")";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const SolverError& e) {
      throw SolverError(e.what() + at, e.last_residual());
    } catch (const ConfigError& e) {
      throw ConfigError(e.what() + at);
    } catch (const DomainError& e) {
      throw DomainError(e.what() + at);
    }
  }
  std::vector<Field> fields;
  fields.reserve(m);
  for (auto& f : out) fields.push_back(std::move(*f));
  return fields;
}

QVariant q_variant_for(const BoundaryProfile& p) {
  return (p.kappa1() > 0.0 && p.kappa2() >= 0.0) ? QVariant::Case2 : QVariant::Case1;
}

void add_verdicts(const SweepConfig& c, const std::vector<Field>& fields, SweepReport& rep,
                  bool axis_layer) {
  auto& v = rep.verdicts;
  const bool flat = c.profile.kind() == ProfileKind::Flat;

  CheckOutcome rate;
  rate.name = "rate";
  rate.measured = std::abs(rep.fit.slope - rep.theory_exponent);
  rate.threshold = flat ? 0.02 : 0.05;
  rate.passed = rate.measured <= rate.threshold;
  rate.note = "fitted slope " + fmt17(rep.fit.slope) + " vs theory " + fmt17(rep.theory_exponent);
  v.push_back(rate);

  v.push_back(check_dn_bound(fields, c.region_fraction));

  std::vector<CheckOutcome> local;
  CheckOutcome worst_local, worst_pointwise;
  worst_pointwise.measured = -1.0;
  worst_local.measured = -1.0;
  for (const Field& f : fields) {
    local.push_back(check_local_gradient_lemma(f, c.region_fraction));
    if (local.back().measured > worst_local.measured) worst_local = local.back();
    CheckOutcome pw = check_pointwise_gradient_lemma(f, c.region_fraction);
    if (pw.measured > worst_pointwise.measured) worst_pointwise = pw;
  }
  v.push_back(worst_local);
  v.push_back(check_local_gradient_stability(local));
  v.push_back(worst_pointwise);

  {
    const QVariant variant = q_variant_for(c.profile);
    CheckOutcome q;
    q.name = "q_maximum";
    q.threshold = 0.0;
    int failures = 0;
    std::ostringstream cols;
    cols << (variant == QVariant::Case1 ? "Case 1" : "Case 2") << "; argmax columns:";
    for (const Field& f : fields) {
      const CheckOutcome one = check_q_maximum(f, default_q_params(f.grid.domain(), variant));
      if (!one.passed) {
        ++failures;
        q.location = one.location;
      }
      cols << ' ' << static_cast<int>(one.measured);
    }
    q.measured = failures;
    q.passed = failures == 0;
    q.note = cols.str();
    if (axis_layer) {
      q.required = false;
      q.note += "; informational: the lambda mode is singular at the axis";
    }
    v.push_back(q);
  }

  std::vector<double> hi, lo, lo_axis;
  for (const auto& r : rep.rows) {
    hi.push_back(r.ratio_hi);
    lo.push_back(r.ratio_lo);
    lo_axis.push_back(r.ratio_lo_axis);
  }
  if (c.n >= 3 && !flat) {
    v.push_back(spread_outcome("envelope_hi_spread", hi, 2.0, "max/min of ratio_hi across eps"));
    v.push_back(spread_outcome("envelope_lo_spread", lo, 2.0,
                               "max/min of ratio_lo (|r| >= sqrt(eps)) across eps"));
    CheckOutcome lo_ax = spread_outcome("envelope_lo_axis_spread", lo_axis, 2.0,
                                        "ratio_lo from the first off-axis column");
    lo_ax.required = false;
    v.push_back(lo_ax);
    CheckOutcome quot;
    quot.name = "envelope_quotient";
    quot.measured = *std::max_element(hi.begin(), hi.end()) / *std::min_element(lo.begin(), lo.end());
    quot.threshold = 100.0;
    quot.passed = quot.measured <= 100.0;
    quot.note = "max ratio_hi / min ratio_lo";
    v.push_back(quot);
  }

  if (flat) v.push_back(check_flat_gradient(fields, c.region_fraction));

  if (c.n == 2) {
    std::vector<double> ups, lows;
    CheckOutcome bid;
    bid.measured = -1.0;
    const bool perturbed = c.profile.perturbation() && c.profile.perturbation()->amplitude != 0.0;
    for (const Field& f : fields) {
      auto [up, low] = check_2d_envelopes(f);
      ups.push_back(up.measured);
      lows.push_back(low.measured);
      if (!perturbed) {
        CheckOutcome b = check_boundary_identity(f, c.region_fraction);
        if (b.measured > bid.measured) bid = b;
      }
    }
    // Relative to the largest eps: the upper constant must not grow, the
    // lower one must not decay by more than 2x.
    CheckOutcome up;
    up.name = "envelope_2d_upper_growth";
    up.measured = *std::max_element(ups.begin(), ups.end()) / ups.front();
    up.threshold = 2.0;
    up.passed = up.measured <= 2.0;
    up.note = "max_eps C_up / C_up(largest eps)";
    v.push_back(up);
    CheckOutcome low;
    low.name = "envelope_2d_lower_decay";
    low.measured = *std::min_element(lows.begin(), lows.end()) / lows.front();
    low.threshold = 0.5;
    low.passed = low.measured >= 0.5;
    low.note = "min_eps C_lo / C_lo(largest eps)";
    v.push_back(low);
    if (!perturbed) v.push_back(bid);
  }

  if (c.n >= 3 && c.profile.kind() != ProfileKind::Anisotropic) {
    const bool case2 = c.profile.kappa1() > 0.0 && c.profile.kappa2() >= 0.0;
    BarrierParams params = corner_params(c.n, c.k);
    if (case2) params = with_case2(params, c.profile);
    const TildeParams tilde = make_tilde_params(c.n, c.k);
    CheckOutcome upper, lower;
    upper.measured = -kInf;
    lower.measured = kInf;
    for (const Field& f : fields) {
      auto [u, l] = comparison_bounds(f, params, tilde);
      if (u.measured > upper.measured) upper = u;
      if (l.measured < lower.measured) lower = l;
    }
    lower.required = false;
    v.push_back(upper);
    v.push_back(lower);
  }
}

SweepReport run_with(const SweepConfig& c, std::optional<double> potential,
                     std::optional<double> tilde) {
  validate(c);
  const std::vector<Field> fields = solve_all(c, potential);
  SweepReport rep;
  rep.envelope_exponent = envelope_exponent_for(c, tilde);
  // For a potential below 1 the mode is r^sqrt(lambda) at the axis.
  const bool axis_layer = potential && *potential < 1.0 - 1e-6;
  for (const Field& f : fields) {
    rep.rows.push_back(measure_row(c, f, rep.envelope_exponent, axis_layer));
  }
  std::vector<double> eps, grads;
  for (const auto& r : rep.rows) {
    eps.push_back(r.epsilon);
    grads.push_back(r.max_grad);
  }
  rep.fit = fit_loglog(eps, grads);
  if (axis_layer) {
    std::vector<double> full;
    for (const Field& f : fields) full.push_back(max_gradient(f, gradient(f), c.region_fraction));
    rep.full_region_slope = fit_loglog(eps, full).slope;
  }
  if (tilde) {
    rep.theory_exponent = 0.5 * (*tilde - 1.0);
    rep.theory_source = "(tilde_alpha - 1)/2";
  } else if (c.profile.kind() == ProfileKind::Flat) {
    rep.theory_exponent = 0.0;
    rep.theory_source = "flat";
  } else if (c.n == 2) {
    rep.theory_exponent = -0.5;
    rep.theory_source = "two-dimensional";
  } else {
    rep.theory_exponent = 0.5 * (alpha_k(c.n, c.k) - 1.0);
    rep.theory_source = "(alpha_k - 1)/2";
  }
  add_verdicts(c, fields, rep, axis_layer);
  return rep;
}

}  // namespace

bool SweepReport::all_required_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const CheckOutcome& c) { return c.passed || !c.required; });
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NECK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    throw ConfigError("NECK_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void validate(const SweepConfig& c) {
  if (c.epsilons.size() < 3) throw ConfigError("a sweep needs at least 3 epsilon values");
  for (size_t i = 0; i < c.epsilons.size(); ++i) {
    const double e = c.epsilons[i];
    if (!(e > 0.0)) throw ConfigError("epsilon values must be positive");
    if (i > 0 && !(e < c.epsilons[i - 1])) {
      throw ConfigError("epsilon values must be strictly decreasing");
    }
    if (!(e < c.R * c.R)) throw ConfigError("epsilon " + fmt17(e) + " is not below R^2");
  }
  if (c.k < 0) throw ConfigError("mode k must be nonnegative");
  if (!(c.region_fraction > 0.0 && c.region_fraction <= 1.0)) {
    throw ConfigError("region fraction must lie in (0, 1]");
  }
  const double smallest = c.epsilons.back();
  const DomainSpec d = member_domain(c, smallest);
  const Grid g = member_grid(c, d);
  int cells = 0;
  for (int i = 0; i < g.Ns(); ++i) {
    if (g.s()[i] >= 0.0 && g.s()[i + 1] <= std::sqrt(smallest)) ++cells;
  }
  if (cells < 3) {
    throw ConfigError("sqrt(eps) = " + fmt17(std::sqrt(smallest)) +
                      " spans fewer than 3 neck cells; refine the grid or raise eps");
  }
}

Field solve_sweep_member(const SweepConfig& c, double eps, std::optional<double> potential) {
  const DomainSpec d = member_domain(c, eps);
  const Grid g = member_grid(c, d);
  if (c.n == 2) return solve_2d(d, -c.data, c.data, g, c.solver);
  ModeProblem p = make_mode_problem(g, c.k);
  const double data = c.data;
  p.outer = [data](double) { return data; };
  p.potential = potential;
  return solve_mode(p, c.solver);
}

SweepReport run_sweep(const SweepConfig& c) {
  if (c.profile.kind() == ProfileKind::Anisotropic) return run_anisotropic_sweep(c);
  return run_with(c, {}, {});
}

SweepReport run_anisotropic_sweep(const SweepConfig& c) {
  if (c.n != 3) throw ConfigError("anisotropic sweeps need n = 3");
  if (c.profile.kind() != ProfileKind::Anisotropic || c.profile.mus().size() != 2) {
    throw ConfigError("anisotropic sweeps need an anisotropic profile with two mus");
  }
  const EigenResult eig = first_nonzero_eigenvalue(weight_from_mus(c.profile.mus()), c.eigen_N, 3);
  SweepReport rep = run_with(c, eig.lambda1, eig.tilde_alpha);
  rep.lambda1 = eig.lambda1;
  rep.tilde_alpha = eig.tilde_alpha;

  const Radialization other = c.profile.radialization() == Radialization::Arithmetic
                                  ? Radialization::Geometric
                                  : Radialization::Arithmetic;
  SweepConfig alt = c;
  alt.profile = BoundaryProfile::anisotropic(c.profile.mus(), other, c.profile.perturbation());
  const std::vector<Field> fields = solve_all(alt, eig.lambda1);
  std::vector<double> eps, grads;
  for (const Field& f : fields) {
    eps.push_back(f.grid.domain().epsilon());
    const double floor = rep.full_region_slope ? std::sqrt(f.grid.domain().epsilon()) : 0.0;
    grads.push_back(max_gradient(f, gradient(f), c.region_fraction, floor));
  }
  rep.geometric_slope = fit_loglog(eps, grads).slope;
  return rep;
}

std::pair<CheckOutcome, CheckOutcome> check_2d_envelopes(const Field& f) {
  const Grid& g = f.grid;
  const DomainSpec& d = g.domain();
  if (d.n() != 2) throw ConfigError("two-dimensional envelopes need an n = 2 field");
  const double eps = d.epsilon();
  const double reach = std::sqrt(eps) * (1.0 + 1e-12);

  CheckOutcome up, low;
  up.name = "envelope_2d_upper";
  low.name = "envelope_2d_lower";
  up.measured = 0.0;
  low.measured = kInf;
  for (int i = 0; i <= g.Ns(); ++i) {
    const double x1 = g.s()[i];
    if (x1 == 0.0 || std::abs(x1) > reach) continue;
    for (int j = 0; j <= g.Nt(); ++j) {
      const double x2 = g.x_n(i, j);
      const double u = std::abs(f.values(i, j));
      const double q = eps + x1 * x1 + x2 * x2;
      const double a = u * q / (std::sqrt(eps) * std::abs(x1));
      if (a > up.measured) {
        up.measured = a;
        up.location = {x1, x2};
      }
      const double b = u / std::log(q / eps);
      if (b < low.measured) {
        low.measured = b;
        low.location = {x1, x2};
      }
    }
  }
  up.threshold = kInf;
  up.passed = std::isfinite(up.measured);
  up.note = "max |u| (eps + |x|^2) / (sqrt(eps) |x_1|) on |x_1| <= sqrt(eps)";
  low.threshold = 0.0;
  low.passed = low.measured > 0.0;
  low.note = "min |u| / ln((eps + |x|^2) / eps) on 0 < |x_1| <= sqrt(eps)";
  return {up, low};
}

std::string sweep_csv(const SweepReport& rep) {
  std::string s = "epsilon,max_grad,max_u,ratio_lo,ratio_hi,dn_max\n";
  for (const auto& r : rep.rows) {
    s += fmt17(r.epsilon) + ',' + fmt17(r.max_grad) + ',' + fmt17(r.max_u) + ',' +
         fmt17(r.ratio_lo) + ',' + fmt17(r.ratio_hi) + ',' + fmt17(r.dn_max) + '\n';
  }
  return s;
}

std::string sweep_json(const SweepReport& rep) {
  Json j;
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"epsilon", r.epsilon},
                    {"max_grad", r.max_grad},
                    {"max_u", r.max_u},
                    {"ratio_lo", number_or_null(r.ratio_lo)},
                    {"ratio_hi", number_or_null(r.ratio_hi)},
                    {"dn_max", r.dn_max},
                    {"ratio_lo_axis", number_or_null(r.ratio_lo_axis)}});
  }
  j["rows"] = rows;
  j["fit"] = {{"slope", rep.fit.slope},
              {"intercept", rep.fit.intercept},
              {"residual_rms", rep.fit.residual_rms},
              {"n_points", rep.fit.n_points}};
  j["theory_exponent"] = rep.theory_exponent;
  j["theory_source"] = rep.theory_source;
  j["envelope_exponent"] = rep.envelope_exponent;
  if (rep.lambda1) j["lambda1"] = *rep.lambda1;
  if (rep.tilde_alpha) j["tilde_alpha"] = *rep.tilde_alpha;
  if (rep.geometric_slope) j["geometric_radialization_slope"] = *rep.geometric_slope;
  if (rep.full_region_slope) j["full_region_slope"] = *rep.full_region_slope;
  j["verdicts"] = to_json_value(rep.verdicts);
  j["all_required_passed"] = rep.all_required_passed();
  return j.dump(2) + "\n";
}

std::string rate_svg(const SweepReport& rep) {
  const double W = 480, H = 360, pad = 50;
  std::vector<double> lx, ly;
  for (const auto& r : rep.rows) {
    lx.push_back(std::log10(r.epsilon));
    ly.push_back(std::log10(r.max_grad));
  }
  const auto [xmin, xmax] = std::minmax_element(lx.begin(), lx.end());
  double x0 = *xmin, x1 = *xmax;
  auto line_at = [&](double slope, double intercept, double x) {
    return (slope * x * std::log(10.0) + intercept) / std::log(10.0);
  };
  // Theory line passes through the fitted centroid.
  double cx = 0.0, cy = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    cx += lx[i];
    cy += ly[i];
  }
  cx /= lx.size();
  cy /= ly.size();
  auto theory_at = [&](double x) { return cy + rep.theory_exponent * (x - cx); };
  double y0 = *std::min_element(ly.begin(), ly.end()), y1 = *std::max_element(ly.begin(), ly.end());
  for (double x : {x0, x1}) {
    y0 = std::min({y0, line_at(rep.fit.slope, rep.fit.intercept, x), theory_at(x)});
    y1 = std::max({y1, line_at(rep.fit.slope, rep.fit.intercept, x), theory_at(x)});
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
  auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
  auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\""
     << H - pad << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-size=\"12\">log10 eps</text>\n";
  os << "<text x=\"14\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << H / 2
     << ")\" text-anchor=\"middle\">log10 max grad</text>\n";
  os << "<line x1=\"" << px(x0) << "\" y1=\"" << py(line_at(rep.fit.slope, rep.fit.intercept, x0))
     << "\" x2=\"" << px(x1) << "\" y2=\"" << py(line_at(rep.fit.slope, rep.fit.intercept, x1))
     << "\" stroke=\"steelblue\"/>\n";
  os << "<line x1=\"" << px(x0) << "\" y1=\"" << py(theory_at(x0)) << "\" x2=\"" << px(x1)
     << "\" y2=\"" << py(theory_at(x1)) << "\" stroke=\"firebrick\" stroke-dasharray=\"6 4\"/>\n";
  for (size_t i = 0; i < lx.size(); ++i) {
    os << "<circle cx=\"" << px(lx[i]) << "\" cy=\"" << py(ly[i]) << "\" r=\"4\" fill=\"black\"/>\n";
  }
  os << "<text x=\"" << W - pad << "\" y=\"" << pad - 20
     << "\" text-anchor=\"end\" font-size=\"12\" fill=\"steelblue\">fit " << fmt17(rep.fit.slope)
     << "</text>\n";
  os << "<text x=\"" << W - pad << "\" y=\"" << pad - 6
     << "\" text-anchor=\"end\" font-size=\"12\" fill=\"firebrick\">theory "
     << fmt17(rep.theory_exponent) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> emit_report(const SweepReport& rep,
                                               const std::filesystem::path& dir,
                                               const OutputFormats& formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  if (formats.csv) {
    write_text_file(dir / "sweep.csv", sweep_csv(rep));
    written.push_back(dir / "sweep.csv");
  }
  if (formats.json) {
    write_text_file(dir / "report.json", sweep_json(rep));
    written.push_back(dir / "report.json");
  }
  if (formats.svg) {
    write_text_file(dir / "rate.svg", rate_svg(rep));
    written.push_back(dir / "rate.svg");
  }
  return written;
}

}  // namespace neck
