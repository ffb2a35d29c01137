#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "syskit/graph.hpp"
#include "syskit/mesh.hpp"
#include "syskit/report.hpp"

namespace syskit {

struct RunConfig {
  std::optional<double> ell;
  std::optional<std::string> eps;  ///< number, or "max" for the fat torus
  std::optional<int> count;
  std::optional<int> target;
  std::uint64_t seed = 0;
  int steiner = 0;  ///< midpoint refinements applied to input meshes
  LogBase log_base = LogBase::Natural;
  ReportFormat format = ReportFormat::Json;
  std::map<std::string, std::string> consts;
};

/// Applies `key=value` (or a bare flag name and value) to the config.
void set_config(RunConfig& cfg, const std::string& key, const std::string& value);

enum class InputKind { None, Mesh, Graph, OptionalMesh };

/// Throws BAD_PARAMS for unknown commands.
InputKind command_input(const std::string& command);
std::vector<std::string> command_names();

struct RunInput {
  const TriMesh* mesh = nullptr;
  const WeightedGraph* graph = nullptr;
  std::string source;  ///< echoed in the report
};

struct RunOutput {
  Json doc;
  std::vector<Json> row;  ///< calculators: single CSV line
  int flagged = 0;        ///< failed applicable audits
};

RunOutput run_command(const std::string& command, const RunInput& in, const RunConfig& cfg);

std::string render(const RunOutput& out, ReportFormat format);

/// Fixture kinds: flat-torus n, sphere-subdiv k, genus2 [n hole],
/// pinched-genus2 w, hairy-torus n girth, marked-sphere n. A `jitter`
/// constant perturbs lengths using the seed.
TriMesh generate_fixture(const std::string& kind, const std::vector<std::string>& params, const RunConfig& cfg);

/// Line plot of CSV columns (header row, first column x) as SVG.
std::string svg_plot(const std::string& csv, const std::string& title);

}  // namespace syskit
