#include "neck/modesolver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "neck/errors.hpp"

namespace neck {

namespace {

using Triplet = Eigen::Triplet<double>;

// Chart metric at (s, t): derivatives of t(r, x_n) = (x_n - lower(r)) / gap(r).
struct Chart {
  double gap = 0.0;
  double t_r = 0.0;
  double t_rr = 0.0;
};

Chart chart_at(const DomainSpec& d, double s, double t) {
  const double g = gap(d, s);
  const double g1 = gap_prime(d, s);
  const double g2 = gap_second(d, s);
  const double l1 = boundary_slope(d, Side::Lower, s);
  const double l2 = boundary_curvature(d, Side::Lower, s);
  Chart c;
  c.gap = g;
  c.t_r = -(l1 + t * g1) / g;
  c.t_rr = -(l2 + t * g2) / g - 2.0 * c.t_r * g1 / g;
  return c;
}

// Weights of the s-derivatives at node i, using the nearest three nodes.
Weights3 s_first(const std::vector<double>& s, int i) {
  const int n = static_cast<int>(s.size()) - 1;
  const int c = std::clamp(i, 1, n - 1);
  return first_derivative_weights(s[c - 1], s[c], s[c + 1], s[i]);
}

Weights3 t_first(double dt, int j, int nt) {
  if (j == 0) return {-1.5 / dt, 2.0 / dt, -0.5 / dt};
  if (j == nt) return {0.5 / dt, -2.0 / dt, 1.5 / dt};
  return {-0.5 / dt, 0.0, 0.5 / dt};
}

int stencil_start(int i, int n) { return std::clamp(i, 1, n - 1) - 1; }

class RowBuilder {
 public:
  RowBuilder(std::vector<Triplet>& out, int row) : out_(out), row_(row) {}
  void add(int col, double v) {
    if (v == 0.0) return;
    for (auto& e : entries_) {
      if (e.first == col) {
        e.second += v;
        return;
      }
    }
    entries_.emplace_back(col, v);
  }
  // Rows are equilibrated to unit max-norm so residuals are comparable
  // across the wide range of metric scales in thin necks.
  double flush() {
    double scale = 0.0;
    for (auto& e : entries_) scale = std::max(scale, std::abs(e.second));
    if (scale == 0.0) scale = 1.0;
    for (auto& e : entries_) {
      double v = e.second / scale;
      if (v != 0.0) out_.emplace_back(row_, e.first, v);
    }
    return scale;
  }

 private:
  std::vector<Triplet>& out_;
  int row_;
  std::vector<std::pair<int, double>> entries_;
};

}  // namespace

double ModeProblem::angular_coefficient() const {
  if (n() == 2) return 0.0;
  if (potential) return *potential;
  return angular_eigenvalue(n(), k);
}

bool ModeProblem::pinned_axis() const { return n() >= 3 && angular_coefficient() > 0.0; }

ModeProblem make_mode_problem(const Grid& grid, int k) {
  if (k < 0) throw ConfigError("mode degree k must be nonnegative");
  ModeProblem p(grid);
  p.k = k;
  return p;
}

SparseSystem assemble(const ModeProblem& problem) {
  const Grid& grid = problem.grid;
  const DomainSpec& d = grid.domain();
  const int n = d.n();
  const int Ns = grid.Ns();
  const int Nt = grid.Nt();
  const auto& s = grid.s();
  const auto& t = grid.t();
  const double dt = t[1] - t[0];
  for (int j = 1; j <= Nt; ++j) {
    if (std::abs((t[j] - t[j - 1]) - dt) > 1e-12) throw ConfigError("t-grid must be uniform");
  }
  if (n >= 3 && s.front() != 0.0) throw ConfigError("mode grids must start at the axis r = 0");
  if (n == 2 && std::abs(s.front() + d.R()) > 1e-12 * d.R()) {
    throw ConfigError("two-dimensional grids must span [-R, R]");
  }
  if (std::abs(s.back() - d.R()) > 1e-12 * d.R()) throw ConfigError("grid must end at r = R");

  const double c_ang = problem.angular_coefficient();
  const int m = grid.size();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(m) * 9);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);

  for (int i = 0; i <= Ns; ++i) {
    for (int j = 0; j <= Nt; ++j) {
      const int row = grid.index(i, j);
      RowBuilder rb(trip, row);
      double b = 0.0;

      if (i == Ns) {
        rb.add(row, 1.0);
        b = problem.outer(t[j]);
      } else if (i == 0 && n == 2) {
        rb.add(row, 1.0);
        b = problem.inner(t[j]);
      } else if (i == 0 && problem.pinned_axis()) {
        rb.add(row, 1.0);
        b = problem.axis_data ? problem.axis_data(t[j]) : 0.0;
      } else if (i == 0) {
        // Symmetry axis for the k = 0 mode: u_r(0, .) = 0.
        Weights3 w = first_derivative_weights(s[0], s[1], s[2], s[0]);
        rb.add(grid.index(0, j), w.w0);
        rb.add(grid.index(1, j), w.w1);
        rb.add(grid.index(2, j), w.w2);
      } else if (j == 0 || j == Nt) {
        // u_n - h' u_r = g written in the chart: (1 + h'^2)/gap U_t - h' U_s.
        const Side side = j == Nt ? Side::Upper : Side::Lower;
        const double slope = boundary_slope(d, side, s[i]);
        const double g = gap(d, s[i]);
        Weights3 ws = s_first(s, i);
        Weights3 wt = t_first(dt, j, Nt);
        const int j0 = j == 0 ? 0 : Nt - 2;
        const double ct = (1.0 + slope * slope) / g;
        rb.add(grid.index(i, j0), ct * wt.w0);
        rb.add(grid.index(i, j0 + 1), ct * wt.w1);
        rb.add(grid.index(i, j0 + 2), ct * wt.w2);
        rb.add(grid.index(i - 1, j), -slope * ws.w0);
        rb.add(grid.index(i, j), -slope * ws.w1);
        rb.add(grid.index(i + 1, j), -slope * ws.w2);
        if (problem.neumann_data) b = problem.neumann_data(side, s[i], grid.x_n(i, j));
      } else {
        const Chart ch = chart_at(d, s[i], t[j]);
        const double r = s[i];
        const double a_ss = 1.0;
        const double a_st = 2.0 * ch.t_r;
        const double a_tt = ch.t_r * ch.t_r + 1.0 / (ch.gap * ch.gap);
        double b_s = 0.0;
        double b_t = ch.t_rr;
        double c0 = 0.0;
        if (n >= 3) {
          b_s = (n - 2.0) / r;
          b_t += (n - 2.0) / r * ch.t_r;
          c0 = -c_ang / (r * r);
        }
        Weights3 w1 = first_derivative_weights(s[i - 1], s[i], s[i + 1], s[i]);
        Weights3 w2 = second_derivative_weights(s[i - 1], s[i], s[i + 1]);
        const double ws1[3] = {w1.w0, w1.w1, w1.w2};
        const double ws2[3] = {w2.w0, w2.w1, w2.w2};
        const double wt1[3] = {-0.5 / dt, 0.0, 0.5 / dt};
        const double wt2[3] = {1.0 / (dt * dt), -2.0 / (dt * dt), 1.0 / (dt * dt)};
        for (int a = 0; a < 3; ++a) {
          rb.add(grid.index(i - 1 + a, j), a_ss * ws2[a] + b_s * ws1[a]);
          rb.add(grid.index(i, j - 1 + a), a_tt * wt2[a] + b_t * wt1[a]);
        }
        // Cross term: tensor product of the two first-derivative stencils.
        // On a nonuniform s-grid the centre s-weight is nonzero, so this
        // touches the four corners plus the (i, j +- 1) neighbours.
        for (int a = 0; a < 3; ++a) {
          for (int bb = 0; bb < 3; bb += 2) {
            rb.add(grid.index(i - 1 + a, j - 1 + bb), a_st * ws1[a] * wt1[bb]);
          }
        }
        rb.add(row, c0);
        if (problem.forcing) b = problem.forcing(r, grid.x_n(i, j));
      }
      const double scale = rb.flush();
      rhs[row] = b / scale;
    }
  }

  SparseSystem sys;
  sys.matrix.resize(m, m);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.prune(0.0);
  sys.matrix.makeCompressed();
  sys.rhs = std::move(rhs);
  return sys;
}

Field solve_mode(const ModeProblem& problem, const SolveOptions& options) {
  SparseSystem sys = assemble(problem);
  Eigen::VectorXd x = solve_sparse(sys, options);
  const Grid& grid = problem.grid;
  Field f{grid, Eigen::MatrixXd(grid.Ns() + 1, grid.Nt() + 1), problem.angular_coefficient(),
          relative_residual(sys, x)};
  for (int i = 0; i <= grid.Ns(); ++i)
    for (int j = 0; j <= grid.Nt(); ++j) f.values(i, j) = x[grid.index(i, j)];
  // Dirichlet rows are exact; drop the O(tol) wobble left by the solver.
  if (problem.pinned_axis() && !problem.axis_data) f.values.row(0).setZero();
  return f;
}

Field solve_2d(const DomainSpec& domain, double g_left, double g_right, const Grid& grid,
               const SolveOptions& options) {
  if (domain.n() != 2) throw ConfigError("solve_2d requires n = 2");
  ModeProblem p(Grid(domain, grid.s(), grid.t(), grid.stretch()));
  p.k = 0;
  p.inner = [g_left](double) { return g_left; };
  p.outer = [g_right](double) { return g_right; };
  return solve_mode(p, options);
}

GradientField gradient(const Field& field) {
  const Grid& grid = field.grid;
  const DomainSpec& d = grid.domain();
  const int Ns = grid.Ns();
  const int Nt = grid.Nt();
  const auto& s = grid.s();
  const auto& t = grid.t();
  const double dt = t[1] - t[0];
  const Eigen::MatrixXd& U = field.values;
  const bool axis = d.n() >= 3;

  GradientField g;
  g.d_r.resize(Ns + 1, Nt + 1);
  g.d_n.resize(Ns + 1, Nt + 1);
  g.mode_mag.resize(Ns + 1, Nt + 1);
  for (int i = 0; i <= Ns; ++i) {
    const Weights3 ws = s_first(s, i);
    const int i0 = stencil_start(i, Ns);
    for (int j = 0; j <= Nt; ++j) {
      const Weights3 wt = t_first(dt, j, Nt);
      const int j0 = stencil_start(j, Nt);
      const double Us = ws.w0 * U(i0, j) + ws.w1 * U(i0 + 1, j) + ws.w2 * U(i0 + 2, j);
      const double Ut = wt.w0 * U(i, j0) + wt.w1 * U(i, j0 + 1) + wt.w2 * U(i, j0 + 2);
      const Chart ch = chart_at(d, s[i], t[j]);
      const double dr = Us + ch.t_r * Ut;
      const double dn = Ut / ch.gap;
      double ang = 0.0;
      if (axis && field.angular_coefficient != 0.0) {
        const double over_r = s[i] > 0.0 ? U(i, j) / s[i] : dr;
        ang = field.angular_coefficient * over_r * over_r;
      }
      g.d_r(i, j) = dr;
      g.d_n(i, j) = dn;
      g.mode_mag(i, j) = std::sqrt(dr * dr + dn * dn + ang);
    }
  }
  return g;
}

ExactSolution manufactured_solution(int k) {
  if (k < 0) throw ConfigError("mode k must be nonnegative");
  const double kk = k;
  auto f = [kk](double r) { return std::pow(r, kk) + std::pow(r, kk + 2.0); };
  auto f1 = [kk](double r) {
    return (kk > 0.0 ? kk * std::pow(r, kk - 1.0) : 0.0) + (kk + 2.0) * std::pow(r, kk + 1.0);
  };
  auto f2 = [kk](double r) {
    return (kk > 1.0 ? kk * (kk - 1.0) * std::pow(r, kk - 2.0) : 0.0) +
           (kk + 2.0) * (kk + 1.0) * std::pow(r, kk);
  };
  ExactSolution e;
  e.value = [f](double r, double x) { return f(r) * std::cos(x); };
  e.d_r = [f1](double r, double x) { return f1(r) * std::cos(x); };
  e.d_n = [f](double r, double x) { return -f(r) * std::sin(x); };
  e.d_rr = [f2](double r, double x) { return f2(r) * std::cos(x); };
  e.d_nn = [f](double r, double x) { return -f(r) * std::cos(x); };
  return e;
}

std::vector<double> manufactured_convergence(const ExactSolution& exact, int k,
                                             const std::vector<Grid>& grids) {
  std::vector<double> errors;
  errors.reserve(grids.size());
  for (const Grid& grid : grids) {
    const DomainSpec& d = grid.domain();
    ModeProblem p = make_mode_problem(grid, k);
    const int n = d.n();
    const double c_ang = p.angular_coefficient();
    const double R = d.R();
    p.forcing = [&exact, n, c_ang](double r, double x) {
      double f = exact.d_rr(r, x) + exact.d_nn(r, x);
      if (n >= 3) f += (n - 2.0) / r * exact.d_r(r, x) - c_ang / (r * r) * exact.value(r, x);
      return f;
    };
    p.neumann_data = [&exact, &d](Side side, double r, double x) {
      return exact.d_n(r, x) - boundary_slope(d, side, r) * exact.d_r(r, x);
    };
    auto along = [&exact, &d](double r) {
      return [&exact, &d, r](double t) {
        double x = boundary_height(d, Side::Lower, r) + t * gap(d, r);
        return exact.value(r, x);
      };
    };
    p.outer = along(R);
    p.inner = along(-R);
    if (p.pinned_axis()) p.axis_data = along(0.0);

    Field f = solve_mode(p, {1e-12, 0});
    double err = 0.0;
    for (int i = 0; i <= grid.Ns(); ++i)
      for (int j = 0; j <= grid.Nt(); ++j)
        err = std::max(err, std::abs(f.values(i, j) - exact.value(grid.s()[i], grid.x_n(i, j))));
    errors.push_back(err);
  }
  return errors;
}

void write_field_csv(std::ostream& out, const Field& field, const GradientField& grad) {
  const Grid& grid = field.grid;
  out << "s,t,x_n,value,d_r,d_n,mode_mag\n";
  out << std::setprecision(17);
  for (int i = 0; i <= grid.Ns(); ++i) {
    for (int j = 0; j <= grid.Nt(); ++j) {
      out << grid.s()[i] << ',' << grid.t()[j] << ',' << grid.x_n(i, j) << ','
          << field.values(i, j) << ',' << grad.d_r(i, j) << ',' << grad.d_n(i, j) << ','
          << grad.mode_mag(i, j) << '\n';
    }
  }
}

}  // namespace neck
