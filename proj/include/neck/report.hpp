#pragma once

// Serialization shared by the sweep reports and the command-line tool.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "neck/barriers.hpp"
#include "neck/outcome.hpp"

namespace neck {

using Json = nlohmann::ordered_json;

/// Shortest decimal with 17 significant digits ("%.17g").
std::string fmt17(double x);

/// Non-finite numbers become null.
Json number_or_null(double x);

Json to_json_value(const CheckOutcome& c);
Json to_json_value(const std::vector<CheckOutcome>& cs);
Json to_json_value(const BarrierParams& p);
Json to_json_value(const SignReport& r, const BarrierParams& params);

/// Writes `content` to `path`, throwing std::runtime_error with the path on
/// failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Fixed-width pass/fail table.
std::string render_table(const std::vector<CheckOutcome>& cs);

}  // namespace neck
