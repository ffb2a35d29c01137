#include "syskit/syskit.h"

#include <fstream>
#include <new>
#include <sstream>

#include "syskit/error.hpp"
#include "syskit/run.hpp"

struct syskit_mesh {
  syskit::TriMesh mesh;
};

struct syskit_config {
  syskit::RunConfig cfg;
};

struct syskit_report {
  int status = SYSKIT_OK;
  int flagged = 0;
  std::string text;
};

static_assert(SYSKIT_E_PARSE == static_cast<int>(syskit::ErrorCode::Parse));
static_assert(SYSKIT_E_BAD_PARAMS == static_cast<int>(syskit::ErrorCode::BadParams));
static_assert(SYSKIT_E_BAD_BRANCH_DATA == static_cast<int>(syskit::ErrorCode::BadBranchData));
static_assert(SYSKIT_E_INTERNAL == static_cast<int>(syskit::ErrorCode::Internal));

namespace {

thread_local int last_status = SYSKIT_OK;
thread_local std::string last_message;
thread_local std::string last_json;

void remember(int status, const std::string& message, const std::string& command = {}) {
  last_status = status;
  last_message = message;
  auto doc = syskit::error_object(static_cast<syskit::ErrorCode>(status), message);
  if (!command.empty()) {
    syskit::Json j;
    j["command"] = command;
    j.update(doc);
    doc = j;
  }
  last_json = syskit::render_json(doc);
}

template <class F>
int guarded(F&& body, const std::string& command = {}) {
  last_status = SYSKIT_OK;
  last_message.clear();
  last_json.clear();
  try {
    body();
    return SYSKIT_OK;
  } catch (const syskit::Error& e) {
    remember(static_cast<int>(e.code()), e.what(), command);
  } catch (const std::bad_alloc&) {
    remember(SYSKIT_E_INTERNAL, "out of memory", command);
  } catch (const std::exception& e) {
    remember(SYSKIT_E_INTERNAL, e.what(), command);
  } catch (...) {
    remember(SYSKIT_E_INTERNAL, "unknown failure", command);
  }
  return last_status;
}

int null_argument(const char* what) {
  remember(SYSKIT_E_BAD_PARAMS, std::string("null argument: ") + what);
  return SYSKIT_E_BAD_PARAMS;
}

const syskit::RunConfig& config_of(const syskit_config* cfg) {
  static const syskit::RunConfig defaults;
  return cfg ? cfg->cfg : defaults;
}

int finish_run(const char* command, const syskit::RunInput& in, const syskit_config* cfg, syskit_report** out,
               syskit::TriMesh* owned_mesh, syskit::WeightedGraph* owned_graph, const char* path) {
  const auto& c = config_of(cfg);
  auto* rep = new (std::nothrow) syskit_report;
  if (!rep) {
    remember(SYSKIT_E_INTERNAL, "out of memory");
    return SYSKIT_E_INTERNAL;
  }
  const int status = guarded(
      [&] {
        syskit::RunInput input = in;
        if (path) {
          const auto kind = syskit::command_input(command);
          if (kind == syskit::InputKind::Mesh || kind == syskit::InputKind::OptionalMesh) {
            *owned_mesh = syskit::load_mesh(path);
            input.mesh = owned_mesh;
          } else if (kind == syskit::InputKind::Graph) {
            *owned_graph = syskit::load_wgraph(path);
            input.graph = owned_graph;
          } else {
            syskit::fail(syskit::ErrorCode::BadParams, std::string(command) + " takes no input file");
          }
          input.source = path;
        }
        const auto result = syskit::run_command(command, input, c);
        rep->text = syskit::render(result, c.format);
        rep->flagged = result.flagged;
      },
      command);
  rep->status = status;
  if (status != SYSKIT_OK) {
    syskit::Json doc;
    doc["command"] = command;
    doc.update(syskit::error_object(static_cast<syskit::ErrorCode>(status), last_message));
    rep->text = c.format == syskit::ReportFormat::Csv ? syskit::render_csv(doc) : syskit::render_json(doc);
  }
  *out = rep;
  return status;
}

}  // namespace

extern "C" {

const char* syskit_status_name(int status) {
  if (status == SYSKIT_OK) return "OK";
  if (status < SYSKIT_E_PARSE || status > SYSKIT_E_INTERNAL) return "UNKNOWN";
  return syskit::error_name(static_cast<syskit::ErrorCode>(status)).data();
}

const char* syskit_last_error(void) { return last_message.c_str(); }

const char* syskit_last_error_json(void) { return last_json.c_str(); }

const char* syskit_commands(void) {
  static const std::string list = [] {
    std::string s;
    for (const auto& n : syskit::command_names()) s += n + "\n";
    return s;
  }();
  return list.c_str();
}

int syskit_command_input(const char* command, int* input) {
  if (!command || !input) return null_argument("command");
  return guarded([&] { *input = static_cast<int>(syskit::command_input(command)); });
}

syskit_config* syskit_config_new(void) { return new (std::nothrow) syskit_config; }

void syskit_config_free(syskit_config* cfg) { delete cfg; }

int syskit_config_set(syskit_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return null_argument("config key or value");
  return guarded([&] { syskit::set_config(cfg->cfg, key, value); });
}

int syskit_mesh_load(const char* path, syskit_mesh** out) {
  if (!path || !out) return null_argument("path");
  *out = nullptr;
  return guarded([&] { *out = new syskit_mesh{syskit::load_mesh(path)}; });
}

int syskit_mesh_generate(const char* kind, int argc, const char* const* argv, const syskit_config* cfg,
                         syskit_mesh** out) {
  if (!kind || !out || (argc > 0 && !argv)) return null_argument("kind");
  *out = nullptr;
  return guarded([&] {
    std::vector<std::string> params;
    for (int i = 0; i < argc; ++i) params.emplace_back(argv[i] ? argv[i] : "");
    *out = new syskit_mesh{syskit::generate_fixture(kind, params, config_of(cfg))};
  });
}

int syskit_mesh_save(const syskit_mesh* mesh, const char* path) {
  if (!mesh || !path) return null_argument("mesh or path");
  return guarded([&] { syskit::save_mesh(mesh->mesh, path); });
}

int syskit_mesh_info(const syskit_mesh* mesh, int* vertices, int* edges, int* faces, int* genus, int* marks,
                     double* area) {
  if (!mesh) return null_argument("mesh");
  return guarded([&] {
    const auto& m = mesh->mesh;
    if (vertices) *vertices = m.vertex_count();
    if (edges) *edges = m.edge_count();
    if (faces) *faces = m.face_count();
    if (genus) *genus = m.genus();
    if (marks) *marks = static_cast<int>(m.marks().size());
    if (area) *area = m.area();
  });
}

void syskit_mesh_free(syskit_mesh* mesh) { delete mesh; }

int syskit_run(const char* command, const syskit_mesh* mesh, const syskit_config* cfg, syskit_report** out) {
  if (!command || !out) return null_argument("command");
  syskit::RunInput in;
  if (mesh) in.mesh = &mesh->mesh;
  return finish_run(command, in, cfg, out, nullptr, nullptr, nullptr);
}

int syskit_run_path(const char* command, const char* path, const syskit_config* cfg, syskit_report** out) {
  if (!command || !out) return null_argument("command");
  syskit::TriMesh mesh;
  syskit::WeightedGraph graph;
  return finish_run(command, {}, cfg, out, &mesh, &graph, path);
}

const char* syskit_report_text(const syskit_report* report) { return report ? report->text.c_str() : ""; }

int syskit_report_status(const syskit_report* report) { return report ? report->status : SYSKIT_E_BAD_PARAMS; }

int syskit_report_flagged(const syskit_report* report) { return report ? report->flagged : 0; }

void syskit_report_free(syskit_report* report) { delete report; }

int syskit_plot_svg(const char* csv_path, const char* title, const char* svg_path) {
  if (!csv_path || !svg_path) return null_argument("path");
  return guarded([&] {
    std::ifstream in(csv_path);
    if (!in) syskit::fail(syskit::ErrorCode::Parse, std::string("cannot open ") + csv_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string svg = syskit::svg_plot(ss.str(), title ? title : "");
    std::ofstream out(svg_path);
    if (!out) syskit::fail(syskit::ErrorCode::Io, std::string("cannot write ") + svg_path);
    out << svg;
    if (!out) syskit::fail(syskit::ErrorCode::Io, std::string("write failed: ") + svg_path);
  });
}

}  // extern "C"
