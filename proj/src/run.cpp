#include "syskit/run.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "syskit/fixtures.hpp"
#include "syskit/homology.hpp"
#include "syskit/hyperbolic.hpp"
#include "syskit/nerve.hpp"
#include "syskit/pants.hpp"

namespace syskit {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  if (text == "pi/6") return std::numbers::pi / 6.0;
  if (text == "pi/3") return std::numbers::pi / 3.0;
  double x = 0.0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || p != end || !std::isfinite(x))
    fail(ErrorCode::BadParams, what + ": not a number: '" + text + "'");
  return x;
}

long long parse_integer(const std::string& text, const std::string& what) {
  long long x = 0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || p != end) fail(ErrorCode::BadParams, what + ": not an integer: '" + text + "'");
  return x;
}

std::optional<std::string> lookup(const RunConfig& cfg, const std::string& name) {
  auto it = cfg.consts.find(name);
  if (it != cfg.consts.end()) return it->second;
  if (name == "ell" && cfg.ell) return format_double(*cfg.ell);
  if (name == "eps" && cfg.eps) return *cfg.eps;
  return std::nullopt;
}

double number(const RunConfig& cfg, const std::string& name) {
  auto v = lookup(cfg, name);
  if (!v) fail(ErrorCode::BadParams, "missing parameter " + name + " (use --const " + name + "=VALUE)");
  return parse_number(*v, name);
}

double number_or(const RunConfig& cfg, const std::string& name, double fallback) {
  auto v = lookup(cfg, name);
  return v ? parse_number(*v, name) : fallback;
}

long long integer(const RunConfig& cfg, const std::string& name) {
  auto v = lookup(cfg, name);
  if (!v) fail(ErrorCode::BadParams, "missing parameter " + name + " (use --const " + name + "=VALUE)");
  return parse_integer(*v, name);
}

long long integer_or(const RunConfig& cfg, const std::string& name, long long fallback) {
  auto v = lookup(cfg, name);
  return v ? parse_integer(*v, name) : fallback;
}

std::string bits(const Z2Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.dim(); ++i) s += v.get(i) ? '1' : '0';
  return s;
}

Json mesh_json(const TriMesh& m) {
  Json j;
  j["vertices"] = m.vertex_count();
  j["edges"] = m.edge_count();
  j["faces"] = m.face_count();
  j["marks"] = static_cast<int>(m.marks().size());
  j["closed"] = m.is_closed();
  j["genus"] = m.genus();
  j["area"] = m.area();
  return j;
}

Json loop_json(const TriMesh& m, const MeshLoop& l) {
  Json j;
  j["length"] = l.length;
  j["walk"] = l.vertices(m);
  return j;
}

Json audit_json(const Audit& a) {
  Json j;
  j["name"] = a.name;
  j["anchor"] = a.anchor;
  j["lhs"] = a.lhs;
  j["rhs"] = a.rhs;
  j["pass"] = a.pass;
  j["applicable"] = a.applicable;
  return j;
}

class Builder {
 public:
  Builder(const std::string& command, const RunInput& in, const RunConfig& cfg) {
    out_.doc["command"] = command;
    out_.doc["status"] = "ok";
    if (!in.source.empty()) out_.doc["input"] = in.source;
    Json c;
    if (cfg.ell) c["ell"] = *cfg.ell;
    if (cfg.eps) c["eps"] = *cfg.eps;
    if (cfg.count) c["count"] = *cfg.count;
    if (cfg.target) c["target"] = *cfg.target;
    c["seed"] = cfg.seed;
    c["steiner"] = cfg.steiner;
    c["log_base"] = cfg.log_base == LogBase::Natural ? "e" : "2";
    for (const auto& [k, v] : cfg.consts) c["const"][k] = v;
    out_.doc["config"] = c;
  }

  Json& result() { return out_.doc["result"]; }

  void audit(const Audit& a) {
    audits_.push_back(audit_json(a));
    if (a.applicable && !a.pass) ++out_.flagged;
  }
  void audit(std::string name, std::string anchor, double lhs, double rhs) {
    audit(make_audit(std::move(name), std::move(anchor), lhs, rhs));
  }
  /// Flag-style check: lhs 1 when the property fails.
  void check(std::string name, std::string anchor, bool ok) {
    audit(std::move(name), std::move(anchor), ok ? 0.0 : 1.0, 0.0);
  }
  void deviation(const std::string& name, const Json& value) {
    Json d;
    d["name"] = name;
    d["value"] = value;
    deviations_.push_back(d);
  }
  void row(std::vector<Json> cells) { out_.row = std::move(cells); }

  RunOutput finish() {
    out_.doc["audits"] = audits_.is_null() ? Json::array() : audits_;
    out_.doc["deviations"] = deviations_.is_null() ? Json::array() : deviations_;
    out_.doc["flagged"] = out_.flagged;
    return std::move(out_);
  }

 private:
  RunOutput out_;
  Json audits_ = Json::array();
  Json deviations_ = Json::array();
};

Json decomposition_json(const PantsDecomposition& d, Builder& b) {
  Json j;
  j["mesh"] = mesh_json(d.mesh);
  j["loop_count"] = static_cast<int>(d.loops.size());
  j["total_length"] = d.total_length;
  j["max_length"] = d.max_length;
  j["refinements"] = d.refinements;
  j["valid"] = d.valid();
  j["degenerate"] = d.degenerate();
  Json loops = Json::array();
  for (std::size_t i = 0; i < d.loops.size(); ++i) {
    Json l = loop_json(d.mesh, d.loops[i]);
    if (i < d.provenance.size()) l["provenance"] = d.provenance[i];
    loops.push_back(l);
  }
  j["loops"] = loops;
  Json comps = Json::array();
  for (const auto& c : d.validation.components) {
    Json r;
    r["euler"] = c.euler;
    r["boundaries"] = c.boundaries;
    r["marks"] = c.marks;
    r["genus"] = c.genus;
    r["area"] = c.area;
    r["type"] = piece_name(c.type);
    r["loops"] = c.loops;
    comps.push_back(r);
  }
  j["components"] = comps;
  j["loops_simple"] = d.validation.loops_simple;
  j["loops_vertex_disjoint"] = d.validation.loops_vertex_disjoint;
  j["marks_off_loops"] = d.validation.marks_off_loops;
  b.check("validator", "every complementary component is a pair of pants", d.valid() || d.degenerate());
  for (const auto& a : d.audits) b.audit(a);
  for (const auto& [name, value] : d.deviations) b.deviation(name, value);
  return j;
}

TriMesh prepared(const RunInput& in, const RunConfig& cfg) {
  if (!in.mesh) fail(ErrorCode::BadParams, "command needs a mesh input");
  TriMesh m = *in.mesh;
  for (int i = 0; i < cfg.steiner; ++i) m = refine_midpoint(m);
  return m;
}

// ---------------------------------------------------------------------------
// Mesh commands

RunOutput short_loops(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const TriMesh m = prepared(in, cfg);
  if (!cfg.ell) fail(ErrorCode::BadParams, "short-loops needs --ell");
  ShortLoopsOptions opt;
  if (cfg.eps) opt.eps = parse_number(*cfg.eps, "eps");
  opt.allow_irregular = integer_or(cfg, "allow_irregular", 0) != 0;
  opt.log_base = cfg.log_base;
  opt.c0_numerator = number_or(cfg, "C0", opt.c0_numerator);
  const int count = cfg.count ? *cfg.count : 2 * m.genus();
  const auto r = short_homology_loops(m, *cfg.ell, count, opt);

  Json& j = b.result();
  j["mesh"] = mesh_json(m);
  j["genus"] = r.genus;
  j["area"] = r.area;
  j["scale"] = r.scale;
  j["ell"] = r.ell;
  j["eps"] = r.eps;
  j["r0"] = r.r0;
  j["c0"] = r.c0;
  j["centers"] = r.centers;
  j["nerve_edges"] = r.nerve_edges;
  j["nerve_betti"] = r.nerve_betti;
  j["gamma1_betti"] = r.gamma1_betti;
  j["regular"] = r.regular;
  j["rank"] = r.rank;
  Json loops = Json::array();
  for (std::size_t i = 0; i < r.loops.size(); ++i) {
    Json l = loop_json(m, r.loops[i]);
    l["k"] = static_cast<int>(i) + 1;
    l["graph_length"] = r.graph_lengths[i];
    l["class"] = bits(r.classes[i]);
    loops.push_back(l);
  }
  j["loops"] = loops;
  Json rows = Json::array();
  for (const auto& row : r.bounds) {
    Json x;
    x["k"] = row.k;
    x["length"] = row.length;
    x["normalized_length"] = row.normalized_length;
    x["bound"] = row.bound;
    x["pass"] = row.pass;
    rows.push_back(x);
    b.audit("loop " + std::to_string(row.k) + " bound",
            "normalized k-th loop <= C0 log(2g - k + 2) / (2g - k + 1) g", row.normalized_length, row.bound);
  }
  j["bounds"] = rows;
  if (r.oracle_length) {
    j["oracle_length"] = *r.oracle_length;
    if (!r.loops.empty())
      b.audit("oracle dominance", "shortest nontrivial loop <= first independent loop", *r.oracle_length,
              r.loops.front().length);
  }
  b.check("rank", "returned loops are independent over Z2", r.rank == count);
  if (!r.regular) b.deviation("irregular_vertices_allowed", true);
  b.deviation("bound_constants", "constants as stated; checks are loose");
  return b.finish();
}

RunOutput homology_basis(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const TriMesh m = prepared(in, cfg);
  if (!cfg.eps) fail(ErrorCode::BadParams, "homology-basis needs --eps (the cut length)");
  const double eps_cut = parse_number(*cfg.eps, "eps");
  const int target = cfg.target ? *cfg.target : m.genus();
  IndependentSystemOptions opt;
  opt.c_lambda_numerator = number_or(cfg, "Clambda", opt.c_lambda_numerator);
  const auto r = short_independent_system(m, target, eps_cut, opt);

  Json& j = b.result();
  j["mesh"] = mesh_json(m);
  j["genus"] = r.genus;
  j["target"] = r.target;
  j["eps_cut"] = r.eps_cut;
  j["rank"] = r.rank;
  j["lambda"] = r.lambda;
  j["bound_applicable"] = r.bound_applicable;
  j["c_lambda"] = r.c_lambda;
  j["bound"] = r.bound;
  Json loops = Json::array();
  for (std::size_t i = 0; i < r.loops.size(); ++i) {
    Json l = loop_json(m, r.loops[i]);
    l["class"] = bits(r.classes[i]);
    l["phase"] = r.phase[i];
    loops.push_back(l);
    Audit a = make_audit("loop " + std::to_string(i + 1) + " bound",
                         "loop <= C_lambda log(g + 1) / sqrt(g) sqrt(area)", r.loops[i].length, r.bound);
    a.applicable = r.bound_applicable;
    if (!a.applicable) a.pass = true;
    b.audit(a);
  }
  j["loops"] = loops;
  b.check("rank", "returned loops are independent over Z2", r.rank == static_cast<int>(r.loops.size()));
  b.deviation("surgery", "cut and flat-disk cap in place of fat-torus gluing; independence certified by Z2 rank");
  return b.finish();
}

std::vector<double> height_for(const TriMesh& m, const RunConfig& cfg) {
  auto kind = lookup(cfg, "height");
  return height_function(m, kind ? *kind : (m.has_coords() ? "z" : "dist"));
}

RunOutput pants_reeb(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const TriMesh m = prepared(in, cfg);
  const auto f = height_for(m, cfg);
  const auto rg = reeb_graph(m, f);
  const auto d = reeb_pants_decomposition(m, f);
  Json& j = b.result();
  j["input_mesh"] = mesh_json(m);
  j["reeb_nodes"] = static_cast<int>(rg.nodes.size());
  j["reeb_arcs"] = static_cast<int>(rg.arcs.size());
  j["reeb_betti"] = rg.betti();
  j["sweep_width"] = sweep_width(m, f);
  j["decomposition"] = decomposition_json(d, b);
  return b.finish();
}

RunOutput pants_sphere(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const TriMesh m = prepared(in, cfg);
  MarkedSphereOptions opt;
  if (cfg.ell) opt.ell = *cfg.ell;
  opt.max_refinements = static_cast<int>(integer_or(cfg, "refinements", opt.max_refinements));
  const auto r = marked_sphere_decomposition(m, opt);
  Json& j = b.result();
  j["input_mesh"] = mesh_json(m);
  j["ell"] = r.ell;
  j["r0"] = r.r0;
  j["kappa"] = r.kappa;
  j["centers"] = r.centers;
  j["graph_length"] = r.graph_length;
  j["tree_length"] = r.tree_length;
  j["gamma_length"] = r.gamma_length;
  j["delta_corridor"] = r.delta_corridor;
  j["order"] = r.order;
  j["decomposition"] = decomposition_json(r.decomposition, b);
  return b.finish();
}

RunOutput pants_full(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const TriMesh m = prepared(in, cfg);
  GenusOptions opt;
  if (cfg.ell) opt.ell = *cfg.ell;
  opt.c_g = number_or(cfg, "Cg", opt.c_g);
  opt.max_refinements = static_cast<int>(integer_or(cfg, "refinements", opt.max_refinements));
  const auto r = genus_surface_decomposition(m, opt);
  Json& j = b.result();
  j["input_mesh"] = mesh_json(m);
  j["genus"] = r.genus;
  j["marks"] = r.marks;
  j["scale"] = r.scale;
  j["steps"] = r.steps;
  j["signatures"] = r.signatures;
  j["decomposition"] = decomposition_json(r.decomposition, b);
  if (r.decomposition.valid() || r.decomposition.degenerate()) {
    const auto ind = extract_independent_from_pants(r.decomposition.mesh, r.decomposition.loops);
    Json loops = Json::array();
    for (const auto& l : ind) loops.push_back(loop_json(r.decomposition.mesh, l));
    j["independent"] = loops;
    b.audit("independent loops", "g independent loops among the pants curves",
            static_cast<double>(r.genus), static_cast<double>(ind.size()));
  }
  return b.finish();
}

RunOutput pants_lift(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  TriMesh sphere;
  std::vector<int> cocycle;
  if (in.mesh) {
    sphere = prepared(in, cfg);
    auto path = lookup(cfg, "cocycle");
    if (!path) fail(ErrorCode::BadParams, "pants-lift on a mesh needs --const cocycle=PATH");
    if (cfg.steiner > 0) fail(ErrorCode::BadParams, "--steiner would invalidate the cocycle edge ids");
    cocycle = read_cocycle(*path);
  } else {
    const long long g = integer_or(cfg, "g", 2);
    if (g < 1 || g > 16) fail(ErrorCode::BadParams, "g must lie in [1, 16]");
    auto fx = hyperelliptic_fixture(static_cast<int>(g));
    sphere = std::move(fx.sphere);
    cocycle = std::move(fx.cocycle);
  }
  LiftOptions opt;
  opt.c = number_or(cfg, "C", opt.c);
  opt.max_refinements = static_cast<int>(integer_or(cfg, "refinements", opt.max_refinements));
  const auto r = lift_through_double_cover(sphere, cocycle, opt);
  Json& j = b.result();
  j["base_mesh"] = mesh_json(sphere);
  j["cover_mesh"] = mesh_json(r.cover.mesh);
  j["cover_genus"] = r.cover_genus;
  j["base_loops"] = static_cast<int>(r.base.decomposition.loops.size());
  j["lifted_count"] = r.lifted_count;
  j["decomposition"] = decomposition_json(r.decomposition, b);
  for (const auto& a : r.audits) b.audit(a);
  return b.finish();
}

// ---------------------------------------------------------------------------
// Graph commands

RunOutput calc_bst(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  if (!in.graph) fail(ErrorCode::BadParams, "command needs a WGRAPH input");
  Builder b(cmd, in, cfg);
  const WeightedGraph& g = *in.graph;
  const auto s = graph_systole(g);
  const double bound = bst_bound(g, cfg.log_base);
  Json& j = b.result();
  j["vertices"] = g.vertex_count();
  j["edges"] = g.edge_count();
  j["betti"] = g.betti_number();
  j["total_length"] = g.total_length();
  j["systole"] = s.length;
  j["cycle_edges"] = s.cycle.edges;
  j["bst_bound"] = bound;
  b.audit("graph systole", "sys(G) <= 4 log(1 + b) / b length(G)", s.length, bound);
  b.row({cmd, g.betti_number(), g.total_length(), s.length, bound});
  return b.finish();
}

RunOutput calc_greedy(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  if (!in.graph) fail(ErrorCode::BadParams, "command needs a WGRAPH input");
  Builder b(cmd, in, cfg);
  const WeightedGraph& g = *in.graph;
  const int count = cfg.count ? *cfg.count : g.betti_number();
  const auto steps = greedy_systolic_sequence(g, count, cfg.log_base);
  Json& j = b.result();
  j["betti"] = g.betti_number();
  j["count"] = count;
  Json rows = Json::array();
  std::vector<GraphCycle> cycles;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& s = steps[k];
    Json x;
    x["k"] = static_cast<int>(k) + 1;
    x["length"] = s.cycle.length;
    x["edges"] = s.cycle.edges;
    x["removed_edge"] = s.removed_edge;
    x["betti_before"] = s.betti_before;
    x["graph_length_before"] = s.graph_length_before;
    x["bound"] = s.step_bound;
    rows.push_back(x);
    b.audit("step " + std::to_string(k + 1), "gamma_k <= 4 log(1 + b_k) / b_k length(Gamma_k)", s.cycle.length,
            s.step_bound);
    if (k > 0)
      b.audit("monotone " + std::to_string(k + 1), "lengths non-decreasing", steps[k - 1].cycle.length,
              s.cycle.length);
  }
  j["steps"] = rows;
  return b.finish();
}

// ---------------------------------------------------------------------------
// Hyperbolic calculators

Json polygon_json(const hyp::HypPolygon& p) {
  Json j;
  j["kind"] = p.kind;
  j["sides"] = p.sides;
  j["angles"] = p.angles;
  j["closure_residual"] = p.closure_residual;
  return j;
}

Json piece_json(const hyp::HoledPiece& p) {
  Json j;
  j["kind"] = p.kind;
  j["ell"] = p.ell;
  j["L"] = p.L;
  j["holes"] = p.holes;
  j["boundary_length"] = p.boundary_length;
  j["collar_width"] = p.collar_width;
  j["corner_angle"] = p.corner_angle;
  j["outer"] = polygon_json(p.outer);
  j["core"] = polygon_json(p.core);
  j["max_residual"] = p.max_residual;
  return j;
}

constexpr double kClosureTol = 1e-9;

double fat_eps(const RunConfig& cfg) {
  auto v = lookup(cfg, "eps");
  if (!v) fail(ErrorCode::BadParams, "missing --eps (a number or max)");
  return *v == "max" ? 2.0 * std::asinh(1.0) : parse_number(*v, "eps");
}

Json fat_json(const hyp::FatTorusParams& p) {
  Json j;
  j["eps"] = p.eps;
  j["a"] = p.a;
  j["h"] = p.h;
  j["h_pentagon"] = p.h_pentagon;
  j["two_a_gt_eps"] = p.two_a_gt_eps;
  j["two_h_gt_two_a"] = p.two_h_gt_two_a;
  return j;
}

RunOutput calc_fat_torus(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const auto p = hyp::fat_torus(fat_eps(cfg));
  b.result() = fat_json(p);
  b.result()["sinh_half_eps"] = std::sinh(p.eps / 2.0);
  b.audit("basis vs boundary", "eps < 2a", p.eps, 2.0 * p.a);
  b.audit("height vs basis", "2a < 2h", 2.0 * p.a, 2.0 * p.h);
  b.row({cmd, p.eps, p.a, p.h, p.two_a_gt_eps, p.two_h_gt_two_a});
  return b.finish();
}

RunOutput hyp_fat_torus(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const long long n = integer_or(cfg, "points", 1000);
  if (n < 1) fail(ErrorCode::BadParams, "points must be positive");
  const double top = 2.0 * std::asinh(1.0);
  double min_a = INFINITY, min_h = INFINITY;
  long long bad = 0;
  for (long long i = 1; i <= n; ++i) {
    const auto p = hyp::fat_torus(top * static_cast<double>(i) / static_cast<double>(n));
    min_a = std::min(min_a, 2.0 * p.a - p.eps);
    min_h = std::min(min_h, 2.0 * p.h - 2.0 * p.a);
    if (!p.two_a_gt_eps || !p.two_h_gt_two_a) ++bad;
  }
  const auto p = hyp::fat_torus(top);
  Json& j = b.result();
  j["points"] = n;
  j["eps_max"] = top;
  j["min_2a_minus_eps"] = min_a;
  j["min_2h_minus_2a"] = min_h;
  j["violations"] = bad;
  j["at_eps_max"] = fat_json(p);
  j["sinh_half_eps_max"] = std::sinh(top / 2.0);
  b.audit("grid 2a > eps", "eps < 2a on the grid", 0.0, min_a);
  b.audit("grid 2h > 2a", "2a < 2h on the grid", 0.0, min_h);
  return b.finish();
}

RunOutput calc_capacity(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const double len = number(cfg, "L");
  const double bound = hyp::collar_capacity_bound(len);
  Json& j = b.result();
  j["w0"] = hyp::collar_w0();
  j["theta0"] = hyp::collar_theta0();
  j["pi_minus_2theta0"] = std::numbers::pi - 2.0 * hyp::collar_theta0();
  j["length"] = len;
  j["bound"] = bound;
  b.row({cmd, len, bound});
  return b.finish();
}

RunOutput polygon_output(const std::string& cmd, const RunInput& in, const RunConfig& cfg,
                         const hyp::HypPolygon& p, std::vector<Json> inputs) {
  Builder b(cmd, in, cfg);
  b.result() = polygon_json(p);
  b.audit("closure", "boundary word closes", p.closure_residual, kClosureTol);
  inputs.insert(inputs.begin(), cmd);
  for (double s : p.sides) inputs.push_back(s);
  b.row(std::move(inputs));
  return b.finish();
}

RunOutput calc_piece(const std::string& cmd, const RunInput& in, const RunConfig& cfg, bool x7) {
  Builder b(cmd, in, cfg);
  const double ell = number(cfg, "ell");
  const double L = number(cfg, "L");
  const auto p = x7 ? hyp::assemble_X7(ell, L) : hyp::assemble_X3(ell, L);
  b.result() = piece_json(p);
  b.audit("closure", "boundary word closes", p.max_residual, kClosureTol);
  b.row({cmd, ell, L, p.boundary_length, p.collar_width});
  return b.finish();
}

RunOutput calc_collar(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  auto kind = lookup(cfg, "kind");
  const std::string k = kind ? *kind : "X3";
  const double ell = number(cfg, "ell");
  const double tau = number(cfg, "tau");
  const double L = hyp::find_L_for_collar(k, ell, tau);
  const auto p = k == "X7" ? hyp::assemble_X7(ell, L) : hyp::assemble_X3(ell, L);
  Json& j = b.result();
  j["kind"] = k;
  j["tau"] = tau;
  j["L"] = L;
  j["piece"] = piece_json(p);
  b.audit("collar", "collar width >= tau", tau, p.collar_width);
  b.row({cmd, k, ell, tau, L, p.collar_width});
  return b.finish();
}

Json reading_json(const hyp::PlanReading& r) {
  Json j;
  j["name"] = r.name;
  j["triangles"] = r.triangles;
  j["vertices"] = r.vertices;
  j["edges"] = r.edges;
  j["small_triangles"] = r.small_triangles;
  j["x3"] = r.x3;
  j["x7"] = r.x7;
  j["holes"] = r.holes;
  j["pairs"] = r.pairs;
  j["euler_characteristic"] = r.euler_characteristic;
  j["genus_from_chi"] = r.genus_from_chi;
  j["genus_from_pairs"] = r.genus_from_pairs;
  j["consistent"] = r.consistent;
  return j;
}

Json plan_json(const hyp::ConstructionPlan& p) {
  Json j;
  j["h"] = p.h;
  j["m"] = p.m;
  j["ell"] = p.ell;
  j["cosh_ell"] = p.cosh_ell;
  j["genus_formula"] = p.genus_formula;
  j["k_formula"] = p.k_formula;
  j["triangle_area"] = p.triangle_area;
  j["stated"] = reading_json(p.stated);
  j["euler"] = reading_json(p.euler);
  return j;
}

int int_param(const RunConfig& cfg, const std::string& name) {
  const long long v = integer(cfg, name);
  if (v < -1000000 || v > 1000000) fail(ErrorCode::BadParams, name + " out of range");
  return static_cast<int>(v);
}

RunOutput calc_plan(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const auto p = hyp::construction_plan(int_param(cfg, "h"), int_param(cfg, "m"), number(cfg, "ell"));
  b.result() = plan_json(p);
  b.check("euler counts consistent", "triangle and vertex counts satisfy V - E + F = 2 - 2h",
          p.euler.consistent);
  if (!p.stated.consistent)
    b.deviation("stated_counts", "14(h-1) triangles and 6(h-1) vertices fail the Euler count; derived counts reported");
  b.row({cmd, p.h, p.m, p.ell, p.genus_formula, p.euler.triangles, p.euler.vertices, p.stated.consistent});
  return b.finish();
}

RunOutput hyp_construct(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const double ell = number(cfg, "ell");
  const double tau = number_or(cfg, "tau", 5.0);
  const auto plan = hyp::construction_plan(int_param(cfg, "h"), int_param(cfg, "m"), ell);
  Json& j = b.result();
  j["plan"] = plan_json(plan);
  b.check("euler counts consistent", "triangle and vertex counts satisfy V - E + F = 2 - 2h",
          plan.euler.consistent);
  if (!plan.stated.consistent)
    b.deviation("stated_counts", "14(h-1) triangles and 6(h-1) vertices fail the Euler count; derived counts reported");
  for (const std::string kind : {"X3", "X7"}) {
    const double L = hyp::find_L_for_collar(kind, ell, tau);
    const auto p = kind == "X7" ? hyp::assemble_X7(ell, L) : hyp::assemble_X3(ell, L);
    j[kind] = piece_json(p);
    b.audit(kind + " closure", "boundary word closes", p.max_residual, kClosureTol);
    b.audit(kind + " collar", "collar width >= tau", tau, p.collar_width);
  }
  return b.finish();
}

RunOutput calc_logh(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const double h = number(cfg, "h"), m = number(cfg, "m"), K = number(cfg, "K");
  const double v = hyp::logh_bound(h, m, K);
  b.result()["value"] = v;
  b.row({cmd, h, m, K, v});
  return b.finish();
}

RunOutput calc_cex(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const auto p = hyp::cex_parameters(number(cfg, "C"), number_or(cfg, "K", 1.0));
  Json& j = b.result();
  j["C"] = p.C;
  j["K"] = p.K;
  j["eps"] = p.eps;
  j["m"] = p.m;
  j["h_min"] = p.h_min;
  j["eps_le_hundredth"] = p.eps_le_hundredth;
  j["m_ge_ratio"] = p.m_ge_ratio;
  j["eps_m2_le_hundredth"] = p.eps_m2_le_hundredth;
  const double m = static_cast<double>(p.m);
  b.audit("eps", "eps <= 1/100", p.eps, 0.01);
  b.audit("m", "3C / 2K <= m", 1.5 * p.C / p.K, m);
  b.audit("eps m^2", "eps m^2 <= 1/100", p.eps * m * m, 0.01);
  b.row({cmd, p.C, p.K, p.eps, p.m, p.h_min});
  return b.finish();
}

RunOutput calc_bers(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const double g = number(cfg, "g"), C = number(cfg, "C");
  const double sq = hyp::bers_sqrtg_bound(g, C);
  const double bp = hyp::bp09_bound(g, C);
  b.result()["sqrtg_bound"] = sq;
  b.result()["bp09_bound"] = bp;
  b.audit("simplification", "46 sqrt(2pi(2g-2)) sqrt((C log g / 2pi)^2 + 1) <= 46 C sqrt(g) log g", bp, sq);
  b.row({cmd, g, C, bp, sq});
  return b.finish();
}

RunOutput calc_sum(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const double g = number(cfg, "g");
  const auto r = hyp::sum_shortest_optimize(g, number_or(cfg, "c1", 1.0), number_or(cfg, "c2", 1.0));
  b.result()["lambda"] = r.lambda;
  b.result()["bound"] = r.bound;
  b.result()["ratio"] = r.ratio;
  b.row({cmd, g, r.lambda, r.bound, r.ratio});
  return b.finish();
}

RunOutput calc_group(const std::string& cmd, const RunInput& in, const RunConfig& cfg) {
  Builder b(cmd, in, cfg);
  const long long b1 = integer(cfg, "b1");
  const auto r = hyp::group_bounds(b1, number_or(cfg, "Clow", 1.0), number_or(cfg, "c0", 1.0),
                                   number_or(cfg, "c", 1.0));
  Json& j = b.result();
  j["b1"] = b1;
  j["lower"] = r.lower;
  j["upper_even"] = r.upper_even;
  j["odd"] = r.odd;
  if (r.odd) {
    j["odd_genus"] = r.odd_genus;
    j["odd_sys"] = r.odd_sys;
    j["odd_area"] = r.odd_area;
    j["odd_ratio"] = r.odd_ratio;
    j["odd_upper"] = r.odd_upper;
    b.audit("odd record", "area / sys^2 <= c0 b / log^2 b", r.odd_ratio, r.odd_upper);
  }
  j["disk_regularity"] = hyp::kDiskRegularity;
  b.row({cmd, b1, r.lower, r.upper_even});
  return b.finish();
}

using Handler = RunOutput (*)(const std::string&, const RunInput&, const RunConfig&);

struct CommandEntry {
  const char* name;
  InputKind input;
  Handler run;
};

const CommandEntry kCommands[] = {
    {"short-loops", InputKind::Mesh, short_loops},
    {"homology-basis", InputKind::Mesh, homology_basis},
    {"pants-reeb", InputKind::Mesh, pants_reeb},
    {"pants-sphere", InputKind::Mesh, pants_sphere},
    {"pants-full", InputKind::Mesh, pants_full},
    {"pants-lift", InputKind::OptionalMesh, pants_lift},
    {"hyp-fat-torus", InputKind::None, hyp_fat_torus},
    {"hyp-construct", InputKind::None, hyp_construct},
    {"calc-fat-torus", InputKind::None, calc_fat_torus},
    {"calc-capacity", InputKind::None, calc_capacity},
    {"calc-right-pentagon", InputKind::None,
     [](const std::string& c, const RunInput& in, const RunConfig& cfg) {
       const double a = number(cfg, "a"), b = number(cfg, "b");
       return polygon_output(c, in, cfg, hyp::solve_right_pentagon(a, b), {a, b});
     }},
    {"calc-hexagon", InputKind::None,
     [](const std::string& c, const RunInput& in, const RunConfig& cfg) {
       const double t = number(cfg, "theta"), ell = number(cfg, "ell"), L = number(cfg, "L");
       return polygon_output(c, in, cfg, hyp::solve_hexagon(t, ell, L), {t, ell, L});
     }},
    {"calc-right-hexagon", InputKind::None,
     [](const std::string& c, const RunInput& in, const RunConfig& cfg) {
       const double L = number(cfg, "L");
       return polygon_output(c, in, cfg, hyp::solve_right_hexagon(L), {L});
     }},
    {"calc-pentagon", InputKind::None,
     [](const std::string& c, const RunInput& in, const RunConfig& cfg) {
       const double L = number(cfg, "L");
       return polygon_output(c, in, cfg, hyp::solve_pentagon_P(L), {L});
     }},
    {"calc-x3", InputKind::None,
     [](const std::string& c, const RunInput& in, const RunConfig& cfg) { return calc_piece(c, in, cfg, false); }},
    {"calc-x7", InputKind::None,
     [](const std::string& c, const RunInput& in, const RunConfig& cfg) { return calc_piece(c, in, cfg, true); }},
    {"calc-collar", InputKind::None, calc_collar},
    {"calc-plan", InputKind::None, calc_plan},
    {"calc-logh", InputKind::None, calc_logh},
    {"calc-cex", InputKind::None, calc_cex},
    {"calc-bers", InputKind::None, calc_bers},
    {"calc-sum", InputKind::None, calc_sum},
    {"calc-group", InputKind::None, calc_group},
    {"calc-bst", InputKind::Graph, calc_bst},
    {"calc-greedy", InputKind::Graph, calc_greedy},
};

const CommandEntry& find_command(const std::string& name) {
  for (const auto& c : kCommands)
    if (name == c.name) return c;
  fail(ErrorCode::BadParams, "unknown command " + name);
}

}  // namespace

void set_config(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "ell") {
    cfg.ell = parse_number(value, "ell");
  } else if (key == "eps") {
    cfg.eps = value;
  } else if (key == "count") {
    cfg.count = static_cast<int>(parse_integer(value, "count"));
  } else if (key == "target") {
    cfg.target = static_cast<int>(parse_integer(value, "target"));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_integer(value, "seed"));
  } else if (key == "steiner") {
    const long long s = parse_integer(value, "steiner");
    if (s < 0 || s > 4) fail(ErrorCode::BadParams, "steiner must lie in [0, 4]");
    cfg.steiner = static_cast<int>(s);
  } else if (key == "log_base") {
    if (value == "e" || value == "natural") cfg.log_base = LogBase::Natural;
    else if (value == "2") cfg.log_base = LogBase::Two;
    else fail(ErrorCode::BadParams, "log_base must be e or 2");
  } else if (key == "format") {
    cfg.format = parse_format(value);
  } else if (key == "const") {
    const auto eq = value.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorCode::BadParams, "--const expects NAME=VALUE");
    if (value.substr(0, eq) == "log_base") return set_config(cfg, "log_base", value.substr(eq + 1));
    cfg.consts[value.substr(0, eq)] = value.substr(eq + 1);
  } else {
    fail(ErrorCode::BadParams, "unknown config key " + key);
  }
}

InputKind command_input(const std::string& command) { return find_command(command).input; }

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& c : kCommands) out.emplace_back(c.name);
  return out;
}

RunOutput run_command(const std::string& command, const RunInput& in, const RunConfig& cfg) {
  const auto& c = find_command(command);
  if (c.input == InputKind::Mesh && !in.mesh) fail(ErrorCode::BadParams, command + " needs a mesh input");
  if (c.input == InputKind::Graph && !in.graph) fail(ErrorCode::BadParams, command + " needs a WGRAPH input");
  return c.run(command, in, cfg);
}

std::string render(const RunOutput& out, ReportFormat format) {
  if (format == ReportFormat::Json) return render_json(out.doc);
  if (!out.row.empty()) return render_csv_row(out.row);
  return render_csv(out.doc);
}

TriMesh generate_fixture(const std::string& kind, const std::vector<std::string>& params, const RunConfig& cfg) {
  auto arg = [&](std::size_t i) -> const std::string& {
    if (i >= params.size()) fail(ErrorCode::BadParams, kind + " needs " + std::to_string(i + 1) + " parameter(s)");
    return params[i];
  };
  auto count = [&](std::size_t i, long long lo, long long hi) {
    const long long v = parse_integer(arg(i), kind);
    if (v < lo || v > hi)
      fail(ErrorCode::BadParams, kind + " parameter must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
  };
  TriMesh m;
  if (kind == "flat-torus") {
    m = flat_torus(count(0, 3, 512));
  } else if (kind == "sphere-subdiv") {
    m = icosphere(count(0, 0, 7));
  } else if (kind == "genus2") {
    m = params.empty() ? genus2_surface() : genus2_surface(count(0, 5, 128), count(1, 1, 126));
  } else if (kind == "pinched-genus2") {
    const double w = parse_number(arg(0), kind);
    if (!(w > 0.0 && w <= 1.0)) fail(ErrorCode::BadParams, "pinch width must lie in (0, 1]");
    m = pinched_genus2(w);
  } else if (kind == "hairy-torus") {
    const int hairs = count(0, 0, 16);
    const double girth = parse_number(arg(1), kind);
    if (!(girth > 0.0 && girth <= 4.0)) fail(ErrorCode::BadParams, "girth must lie in (0, 4]");
    m = hairy_torus(hairs, girth);
  } else if (kind == "marked-sphere") {
    m = marked_sphere(count(0, 1, 256));
  } else {
    fail(ErrorCode::BadParams, "unknown fixture kind " + kind);
  }
  const double amp = number_or(cfg, "jitter", 0.0);
  if (amp < 0.0 || amp >= 0.5) fail(ErrorCode::BadParams, "jitter must lie in [0, 0.5)");
  if (amp > 0.0) m = jitter_lengths(m, cfg.seed, amp);
  return m;
}

namespace {

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string svg_plot(const std::string& csv, const std::string& title) {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    auto nl = csv.find('\n', pos);
    if (nl == std::string::npos) nl = csv.size();
    std::string line = csv.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t s = 0;
    while (true) {
      const auto c = line.find(',', s);
      cells.push_back(line.substr(s, c == std::string::npos ? std::string::npos : c - s));
      if (c == std::string::npos) break;
      s = c + 1;
    }
    if (header.empty()) {
      header = cells;
      continue;
    }
    if (cells.size() != header.size()) fail(ErrorCode::Parse, "plot: ragged CSV row");
    std::vector<double> r;
    for (const auto& c : cells) r.push_back(parse_number(c, "plot cell"));
    rows.push_back(std::move(r));
  }
  if (header.size() < 2 || rows.empty()) fail(ErrorCode::Parse, "plot needs a header and at least one data row");

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& r : rows) {
    x0 = std::min(x0, r[0]);
    x1 = std::max(x1, r[0]);
    for (std::size_t c = 1; c < r.size(); ++c) {
      y0 = std::min(y0, r[c]);
      y1 = std::max(y1, r[c]);
    }
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;
  const double W = 640, H = 400, M = 50;
  auto px = [&](double x) { return format_double(M + (x - x0) / (x1 - x0) * (W - 2 * M), 6); };
  auto py = [&](double y) { return format_double(H - M - (y - y0) / (y1 - y0) * (H - 2 * M), 6); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + xml_escape(title) + "</text>\n";
  s += "<line x1=\"50\" y1=\"350\" x2=\"590\" y2=\"350\" stroke=\"black\"/>\n";
  s += "<line x1=\"50\" y1=\"50\" x2=\"50\" y2=\"350\" stroke=\"black\"/>\n";
  s += "<text x=\"320\" y=\"385\" text-anchor=\"middle\" font-size=\"12\">" + xml_escape(header[0]) + "</text>\n";
  s += "<text x=\"50\" y=\"365\" text-anchor=\"middle\" font-size=\"10\">" + format_double(x0, 4) + "</text>\n";
  s += "<text x=\"590\" y=\"365\" text-anchor=\"middle\" font-size=\"10\">" + format_double(x1, 4) + "</text>\n";
  s += "<text x=\"45\" y=\"354\" text-anchor=\"end\" font-size=\"10\">" + format_double(y0, 4) + "</text>\n";
  s += "<text x=\"45\" y=\"54\" text-anchor=\"end\" font-size=\"10\">" + format_double(y1, 4) + "</text>\n";
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string color = colors[(c - 1) % 6];
    s += "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) s += (i ? " " : "") + px(rows[i][0]) + "," + py(rows[i][c]);
    s += "\"/>\n";
    s += "<text x=\"600\" y=\"" + std::to_string(60 + 16 * c) + "\" font-size=\"12\" fill=\"" + color +
         "\" text-anchor=\"end\">" + xml_escape(header[c]) + "</text>\n";
  }
  return s + "</svg>\n";
}

}  // namespace syskit
