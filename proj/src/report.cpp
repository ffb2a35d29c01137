#include "syskit/report.hpp"

#include <cmath>

#include "syskit/graph.hpp"

namespace syskit {

namespace {

std::string scalar_text(const Json& v, int digits) {
  switch (v.type()) {
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      if (!std::isfinite(x)) return "null";
      return format_double(x, digits);
    }
    case Json::value_t::null: return "null";
    default: return v.dump();
  }
}

void write_json(const Json& v, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  if (v.is_object()) {
    if (v.empty()) { out += "{}"; return; }
    out += "{\n";
    bool first = true;
    for (const auto& [key, item] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(key).dump() + ": ";
      write_json(item, depth + 1, out);
    }
    out += "\n" + close + "}";
  } else if (v.is_array()) {
    if (v.empty()) { out += "[]"; return; }
    bool flat = true;
    for (const auto& item : v) flat = flat && item.is_primitive();
    if (flat) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += scalar_text(v[i], 17);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      write_json(v[i], depth + 1, out);
    }
    out += "\n" + close + "]";
  } else {
    out += scalar_text(v, 17);
  }
}

std::string csv_cell(const Json& v) {
  if (!v.is_string()) return scalar_text(v, 12);
  const auto& s = v.get_ref<const std::string&>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_csv(const Json& v, const std::string& path, std::string& out) {
  if (v.is_object()) {
    for (const auto& [key, item] : v.items())
      write_csv(item, path.empty() ? key : path + "." + key, out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) write_csv(v[i], path + "." + std::to_string(i), out);
  } else {
    out += csv_cell(Json(path)) + "," + csv_cell(v) + "\n";
  }
}

}  // namespace

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  fail(ErrorCode::BadParams, "unknown format " + name);
}

std::string render_json(const Json& doc) {
  std::string out;
  write_json(doc, 0, out);
  return out + "\n";
}

std::string render_csv(const Json& doc) {
  std::string out;
  write_csv(doc, "", out);
  return out;
}

std::string render_csv_row(const std::vector<Json>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ",";
    out += csv_cell(cells[i]);
  }
  return out + "\n";
}

Json error_object(ErrorCode code, const std::string& message) {
  Json e;
  e["status"] = "error";
  e["error"]["code"] = std::string(error_name(code));
  e["error"]["value"] = static_cast<int>(code);
  e["error"]["message"] = message;
  return e;
}

}  // namespace syskit
