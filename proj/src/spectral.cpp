#include "neck/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"

#include "neck/errors.hpp"
#include "neck/numerics.hpp"

namespace neck {

double Weight::operator()(double theta) const {
  switch (kind) {
    case WeightKind::Constant:
      return value;
    case WeightKind::FromMus: {
      const double c = std::cos(theta), s = std::sin(theta);
      return mus[0] * c * c + mus[1] * s * s;
    }
    case WeightKind::Tabulated: {
      const double two_pi = 2.0 * std::numbers::pi;
      const int m = static_cast<int>(samples.size());
      double pos = std::fmod(theta, two_pi);
      if (pos < 0.0) pos += two_pi;
      pos *= m / two_pi;
      const int i0 = static_cast<int>(std::floor(pos)) % m;
      const double w = pos - std::floor(pos);
      return (1.0 - w) * samples[i0] + w * samples[(i0 + 1) % m];
    }
  }
  return value;
}

Weight constant_weight(double value) {
  if (!(value > 0.0)) throw DomainError("weight must be positive");
  Weight w;
  w.value = value;
  return w;
}

Weight weight_from_mus(const std::vector<double>& mus) {
  if (mus.size() != 2) {
    throw ConfigError("only n = 3 weights from two mus are supported");
  }
  if (!(mus[0] > 0.0 && mus[1] > 0.0)) throw DomainError("mus must be positive");
  Weight w;
  w.kind = WeightKind::FromMus;
  w.mus = mus;
  return w;
}

Weight tabulated_weight(std::vector<double> samples) {
  if (samples.size() < 3) throw ConfigError("tabulated weight needs at least 3 samples");
  for (double s : samples) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("weight samples must be positive");
  }
  Weight w;
  w.kind = WeightKind::Tabulated;
  w.samples = std::move(samples);
  return w;
}

double discrete_first_eigenvalue(const Weight& weight, int N) {
  if (N < 8) throw ConfigError("eigen resolution too small");
  const double h = 2.0 * std::numbers::pi / N;
  Eigen::VectorXd mid(N), mass(N);
  for (int i = 0; i < N; ++i) {
    mid(i) = weight((i + 0.5) * h);
    mass(i) = weight(i * h) * h;
    if (!(mid(i) > 0.0) || !(mass(i) > 0.0)) throw DomainError("nonpositive weight sample");
  }
  // -(a u')' with a at midpoints: row i couples i-1, i, i+1 periodically.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * N);
  for (int i = 0; i < N; ++i) {
    const int ip = (i + 1) % N, im = (i + N - 1) % N;
    const double ar = mid(i) / h, al = mid(im) / h;
    trip.emplace_back(i, i, ar + al);
    trip.emplace_back(i, ip, -ar);
    trip.emplace_back(i, im, -al);
  }
  SparseMatrix A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  const auto pairs = generalized_symmetric_eig_smallest(A, mass, 2);
  return pairs[1].value;
}

double tilde_alpha(int n, double lambda) {
  if (n < 3) throw DomainError("tilde_alpha needs n >= 3");
  if (!(lambda >= 0.0)) throw DomainError("tilde_alpha needs lambda >= 0");
  const double m = n - 1.0;
  return 0.5 * (-m + std::sqrt(m * m + 4.0 * lambda));
}

EigenResult first_nonzero_eigenvalue(const Weight& weight, int N, int n) {
  EigenResult res;
  res.N = N;
  if (weight.kind == WeightKind::Constant && n != 3) {
    if (n < 3) throw DomainError("spherical eigenproblem needs n >= 3");
    if (!(weight.value > 0.0)) throw DomainError("weight must be positive");
    res.lambda1 = res.lambda1_raw = n - 2.0;
    res.closed_form = true;
    res.richardson_ratio = std::numeric_limits<double>::quiet_NaN();
  } else {
    if (n != 3) throw ConfigError("non-constant weights are supported on S^1 (n = 3) only");
    if (N < 32 || N % 4 != 0) throw ConfigError("N must be >= 32 and divisible by 4");
    const double l1 = discrete_first_eigenvalue(weight, N);
    const double l2 = discrete_first_eigenvalue(weight, N / 2);
    const double l4 = discrete_first_eigenvalue(weight, N / 4);
    res.lambda1_raw = l1;
    res.lambda1 = (4.0 * l1 - l2) / 3.0;
    res.convergence_estimate = std::abs(l1 - l2) / 3.0;
    const double num = l4 - l2, den = l2 - l1;
    const double floor = 1e-13 * std::abs(l1);
    res.richardson_ratio = (std::abs(den) > floor && std::abs(num) > floor)
                               ? num / den
                               : std::numeric_limits<double>::quiet_NaN();
  }
  res.tilde_alpha = tilde_alpha(n, res.lambda1);
  res.tilde_alpha_ge_one = res.tilde_alpha >= 1.0;
  return res;
}

std::string to_json(const EigenResult& r) {
  nlohmann::ordered_json j;
  j["lambda1"] = r.lambda1;
  j["lambda1_raw"] = r.lambda1_raw;
  j["tilde_alpha"] = r.tilde_alpha;
  j["tilde_alpha_ge_one"] = r.tilde_alpha_ge_one;
  j["N"] = r.N;
  j["convergence_estimate"] = r.convergence_estimate;
  if (std::isnan(r.richardson_ratio)) {
    j["richardson_ratio"] = nullptr;
  } else {
    j["richardson_ratio"] = r.richardson_ratio;
  }
  j["closed_form"] = r.closed_form;
  return j.dump(2);
}

}  // namespace neck
