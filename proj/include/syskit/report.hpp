#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "syskit/error.hpp"

namespace syskit {

using Json = nlohmann::ordered_json;

enum class ReportFormat { Json, Csv };

ReportFormat parse_format(const std::string& name);

/// Pretty JSON with floats at 17 significant digits; non-finite floats
/// become null.
std::string render_json(const Json& doc);

/// One `path,value` line per leaf, floats at 12 significant digits.
std::string render_csv(const Json& doc);

/// Comma-joined scalars on a single line (calculator output).
std::string render_csv_row(const std::vector<Json>& cells);

Json error_object(ErrorCode code, const std::string& message);

}  // namespace syskit
