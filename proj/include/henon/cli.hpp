#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace henon::cli {

inline constexpr int kSchemaVersion = 1;

enum class Format { Csv, Json };

/// One fully resolved invocation. `config` holds the parameter keys
/// (n, a, b, nu, alpha, beta or a k-coupled table) together with the
/// command options, flags already merged over the JSON file.
struct RunConfig {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::string out;          ///< empty writes to the output stream
    Format format = Format::Json;
    std::uint64_t seed = 1;
    int jobs = 1;
};

/// Exit codes: 0 success, 2 validation or parse error, 3 numerical failure or I/O error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and calls run.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// RFC-4180 field quoting: fields containing a comma, quote or line break are
/// wrapped in quotes with inner quotes doubled.
std::string csv_field(const std::string& field);
/// %.17g, so values round-trip exactly.
std::string format_number(double value);

/// "lo:hi:step" or a single number. ParseError on malformed input or a
/// non-positive step.
std::vector<double> parse_range(const std::string& text);

}  // namespace henon::cli
