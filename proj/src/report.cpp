#include "neck/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace neck {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json_value(const CheckOutcome& c) {
  Json j;
  j["name"] = c.name;
  j["passed"] = c.passed;
  j["measured"] = number_or_null(c.measured);
  j["threshold"] = number_or_null(c.threshold);
  Json loc = Json::array();
  for (double v : c.location) loc.push_back(number_or_null(v));
  j["location"] = loc;
  j["required"] = c.required;
  j["note"] = c.note;
  return j;
}

Json to_json_value(const std::vector<CheckOutcome>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(to_json_value(c));
  return a;
}

Json to_json_value(const BarrierParams& p) {
  Json j;
  j["n"] = p.n;
  j["k"] = p.k;
  j["alpha_k"] = p.alpha_k;
  j["xi"] = p.xi;
  j["beta"] = p.beta;
  j["b"] = p.b;
  if (p.case2) {
    j["case2"] = {{"b1", p.case2->b1}, {"b2", p.case2->b2}};
  } else {
    j["case2"] = nullptr;
  }
  j["corner_delta"] = p.corner_delta;
  j["feasibility_margin"] = p.margin;
  return j;
}

Json to_json_value(const SignReport& r, const BarrierParams& params) {
  Json j;
  j["quantity"] = to_string(r.quantity);
  j["params"] = to_json_value(params);
  j["n_points"] = r.n_points;
  j["n_violations"] = r.n_violations;
  j["worst_margin"] = number_or_null(r.worst_margin);
  j["worst_location"] = {number_or_null(r.worst_r), number_or_null(r.worst_x_n)};
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string render_table(const std::vector<CheckOutcome>& cs) {
  std::ostringstream os;
  char line[200];
  std::snprintf(line, sizeof line, "%-30s %-6s %14s %14s %s\n", "check", "result", "measured",
                "threshold", "required");
  os << line;
  for (const auto& c : cs) {
    std::snprintf(line, sizeof line, "%-30s %-6s %14.6g %14.6g %s\n", c.name.c_str(),
                  c.passed ? "PASS" : "FAIL", c.measured, c.threshold, c.required ? "yes" : "no");
    os << line;
  }
  return os.str();
}

}  // namespace neck
