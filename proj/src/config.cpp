#include "neck/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "neck/errors.hpp"

namespace neck {

namespace {

using nlohmann::json;

// Walks one JSON object, rejecting keys outside `allowed`.
class Section {
 public:
  Section(const json& j, std::string path, std::initializer_list<const char*> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j_.items()) {
      if (!ok.count(item.key())) throw ConfigError("unknown key '" + where(item.key()) + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const json& at(const char* key) const { return j_.at(key); }
  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <class T>
  void get(const char* key, T& out) const {
    if (!has(key)) return;
    out = read<T>(key);
  }
  template <class T>
  void get(const char* key, std::optional<T>& out) const {
    if (!has(key)) return;
    out = read<T>(key);
  }

  template <class T>
  T read(const char* key) const {
    const json& v = j_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(where(key) + " must be a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError(where(key) + " must be an integer");
      return v.get<int>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
      return v.get<double>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
      return v.get<std::string>();
    } else {
      static_assert(std::is_same_v<T, std::vector<double>>);
      if (!v.is_array()) throw ConfigError(where(key) + " must be an array of numbers");
      std::vector<double> out;
      for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(where(key) + " must be an array of numbers");
        out.push_back(e.get<double>());
      }
      return out;
    }
  }

 private:
  const json& j_;
  std::string path_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

std::optional<Perturbation> parse_perturbation(const Section& s) {
  if (!s.has("perturbation")) return std::nullopt;
  Section p(s.at("perturbation"), s.where("perturbation"), {"amplitude", "gamma"});
  Perturbation out;
  p.get("amplitude", out.amplitude);
  p.get("gamma", out.gamma);
  return out;
}

BoundaryProfile parse_profile(const json& j) {
  Section s(j, "profile",
            {"kind", "kappa1", "kappa2", "mus", "radialization", "perturbation"});
  require(s.has("kind"), "profile.kind is required");
  const std::string kind = s.read<std::string>("kind");
  if (kind == "quadratic") {
    require(!s.has("mus") && !s.has("radialization"),
            "profile.mus/radialization apply to anisotropic profiles only");
    double k1 = 0.5, k2 = -0.5;
    s.get("kappa1", k1);
    s.get("kappa2", k2);
    return BoundaryProfile::quadratic(k1, k2, parse_perturbation(s));
  }
  if (kind == "anisotropic") {
    require(!s.has("kappa1") && !s.has("kappa2"),
            "profile.kappa1/kappa2 apply to quadratic profiles only");
    require(s.has("mus"), "profile.mus is required for anisotropic profiles");
    Radialization rad = Radialization::Arithmetic;
    if (s.has("radialization")) {
      const std::string r = s.read<std::string>("radialization");
      if (r == "geometric") {
        rad = Radialization::Geometric;
      } else {
        require(r == "arithmetic", "profile.radialization must be arithmetic or geometric");
      }
    }
    return BoundaryProfile::anisotropic(s.read<std::vector<double>>("mus"), rad,
                                        parse_perturbation(s));
  }
  if (kind == "flat") {
    require(!s.has("kappa1") && !s.has("kappa2") && !s.has("mus") && !s.has("perturbation") &&
                !s.has("radialization"),
            "flat profiles take no parameters");
    return BoundaryProfile::flat();
  }
  throw ConfigError("profile.kind must be quadratic, anisotropic or flat");
}

Weight parse_weight(const json& j) {
  Section s(j, "eigen.weight", {"kind", "value", "mus", "samples"});
  require(s.has("kind"), "eigen.weight.kind is required");
  const std::string kind = s.read<std::string>("kind");
  if (kind == "constant") {
    double v = 1.0;
    s.get("value", v);
    return constant_weight(v);
  }
  if (kind == "mus") {
    require(s.has("mus"), "eigen.weight.mus is required");
    return weight_from_mus(s.read<std::vector<double>>("mus"));
  }
  if (kind == "tabulated") {
    require(s.has("samples"), "eigen.weight.samples is required");
    return tabulated_weight(s.read<std::vector<double>>("samples"));
  }
  throw ConfigError("eigen.weight.kind must be constant, mus or tabulated");
}

std::vector<SignQuantity> parse_quantities(const json& v, const std::string& where) {
  require(v.is_array(), where + " must be an array of strings");
  std::vector<SignQuantity> out;
  for (const auto& e : v) {
    require(e.is_string(), where + " must be an array of strings");
    out.push_back(sign_quantity_from_string(e.get<std::string>()));
  }
  return out;
}

void parse_into(const json& root, Config& c) {
  Section top(root, "",
              {"dimension", "epsilon", "radius", "profile", "mode", "grid", "solver", "sweep",
               "barriers", "eigen", "mms"});
  top.get("dimension", c.n);
  top.get("epsilon", c.epsilon);
  top.get("radius", c.radius);
  if (top.has("profile")) c.profile = parse_profile(top.at("profile"));

  if (top.has("mode")) {
    Section s(top.at("mode"), "mode", {"k", "potential", "data"});
    s.get("k", c.k);
    s.get("potential", c.potential);
    s.get("data", c.data);
    require(c.k >= 0, "mode.k must be >= 0");
    require(!c.potential || *c.potential >= 0.0, "mode.potential must be >= 0");
  }
  if (top.has("grid")) {
    Section s(top.at("grid"), "grid", {"Ns", "Nt", "stretch", "grading"});
    s.get("Ns", c.grid.Ns);
    s.get("Nt", c.grid.Nt);
    s.get("grading", c.grid.grading);
    if (s.has("stretch")) {
      const std::string st = s.read<std::string>("stretch");
      if (st == "uniform") {
        c.grid.stretch = Stretch::Uniform;
      } else {
        require(st == "neck_refined", "grid.stretch must be uniform or neck_refined");
        c.grid.stretch = Stretch::NeckRefined;
      }
    }
    require(c.grid.grading >= 1.0, "grid.grading must be >= 1");
  }
  if (top.has("solver")) {
    Section s(top.at("solver"), "solver", {"tol", "max_iter"});
    s.get("tol", c.solver.tol);
    s.get("max_iter", c.solver.max_iter);
    require(c.solver.tol > 0.0, "solver.tol must be positive");
    require(c.solver.max_iter >= 0, "solver.max_iter must be >= 0");
  }
  if (top.has("sweep")) {
    Section s(top.at("sweep"), "sweep", {"epsilons", "region_fraction", "outputs", "threads"});
    s.get("epsilons", c.epsilons);
    s.get("region_fraction", c.region_fraction);
    s.get("threads", c.threads);
    require(c.threads >= 0, "sweep.threads must be >= 0");
    if (s.has("outputs")) {
      Section o(s.at("outputs"), "sweep.outputs", {"csv", "json", "svg"});
      o.get("csv", c.formats.csv);
      o.get("json", c.formats.json);
      o.get("svg", c.formats.svg);
    }
  }
  if (top.has("barriers")) {
    Section s(top.at("barriers"), "barriers",
              {"xi", "corner_delta", "beta", "b", "case2", "beta1", "quantities", "informational",
               "sampling"});
    auto& b = c.barriers;
    s.get("xi", b.xi);
    s.get("corner_delta", b.corner_delta);
    s.get("beta", b.beta);
    s.get("b", b.b);
    s.get("case2", b.case2);
    s.get("beta1", b.beta1);
    require(b.beta.has_value() == b.b.has_value(), "barriers.beta and barriers.b go together");
    if (s.has("quantities")) b.quantities = parse_quantities(s.at("quantities"), "barriers.quantities");
    if (s.has("informational")) {
      b.informational = parse_quantities(s.at("informational"), "barriers.informational");
    }
    if (s.has("sampling")) {
      Section o(s.at("sampling"), "barriers.sampling", {"n_r", "n_t", "n_boundary", "slack"});
      o.get("n_r", b.sampling.n_r);
      o.get("n_t", b.sampling.n_t);
      o.get("n_boundary", b.sampling.n_boundary);
      o.get("slack", b.sampling.slack);
      require(b.sampling.n_r >= 1 && b.sampling.n_t >= 2 && b.sampling.n_boundary >= 2,
              "barriers.sampling is too coarse");
    }
  }
  if (top.has("eigen")) {
    Section s(top.at("eigen"), "eigen", {"weight", "N", "n"});
    if (s.has("weight")) c.eigen.weight = parse_weight(s.at("weight"));
    s.get("N", c.eigen.N);
    s.get("n", c.eigen.n);
  }
  if (top.has("mms")) {
    Section s(top.at("mms"), "mms", {"grids", "min_order", "max_order"});
    s.get("min_order", c.mms.min_order);
    s.get("max_order", c.mms.max_order);
    if (s.has("grids")) {
      const json& g = s.at("grids");
      require(g.is_array() && g.size() >= 2, "mms.grids must list at least two [Ns, Nt] pairs");
      c.mms.grids.clear();
      for (const auto& p : g) {
        require(p.is_array() && p.size() == 2 && p[0].is_number_integer() &&
                    p[1].is_number_integer(),
                "mms.grids entries must be [Ns, Nt] integer pairs");
        c.mms.grids.emplace_back(p[0].get<int>(), p[1].get<int>());
      }
    }
  }
}

}  // namespace

Config parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("malformed JSON at line " + std::to_string(line) + ", column " +
                      std::to_string(col));
  }
  Config c;
  try {
    parse_into(root, c);
    // Construct the derived objects once so invalid geometry fails here.
    make_domain(c);
  } catch (const InvariantError& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  c.canonical = root;
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

DomainSpec make_domain(const Config& c) { return make_domain(c, c.epsilon); }

DomainSpec make_domain(const Config& c, double eps) {
  return DomainSpec(c.n, eps, c.radius.value_or(DomainSpec::kDefaultRadius), c.profile);
}

Grid make_grid(const Config& c, const DomainSpec& d) {
  return build_grid(d, c.grid.Ns, c.grid.Nt, c.grid.stretch, c.grid.grading);
}

SweepConfig make_sweep_config(const Config& c) {
  SweepConfig s;
  s.n = c.n;
  s.R = c.radius.value_or(kSweepRadius);
  s.profile = c.profile;
  s.k = c.k;
  s.epsilons = c.epsilons;
  s.region_fraction = c.region_fraction;
  s.data = c.data;
  s.grid = c.grid;
  s.solver = c.solver;
  s.eigen_N = c.eigen.N;
  s.formats = c.formats;
  s.threads = c.threads;
  return s;
}

BarrierParams make_barrier_params(const Config& c) {
  const auto& b = c.barriers;
  BarrierParams p = b.beta ? make_barrier_params(c.n, c.k, b.xi, *b.beta, *b.b)
                           : corner_params(c.n, c.k, b.xi, b.corner_delta);
  if (b.case2) p = with_case2(p, c.profile);
  return p;
}

TildeParams make_tilde_params(const Config& c) {
  return make_tilde_params(c.n, c.k, c.barriers.beta1);
}

std::string config_hash(const std::string& command, const Config& c) {
  const std::string text = command + "\n" + c.canonical.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace neck
