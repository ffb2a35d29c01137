// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "syskit/fixtures.hpp"
#include "syskit/graph.hpp"
#include "syskit/homology.hpp"
#include "syskit/hyperbolic.hpp"
#include "syskit/nerve.hpp"
#include "syskit/pants.hpp"
#include "syskit/report.hpp"
#include "syskit/z2.hpp"

using namespace syskit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  Json transcript;  ///< every computed value, compared across reruns
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240611;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int digits = 6) { return format_double(x, digits); }

/// Connected multigraph with v <= 30, Betti number >= 1, lengths in [0.1, 10].
WeightedGraph random_graph(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv(1, 30);
  std::uniform_real_distribution<double> len(0.1, 10.0);
  const int v = nv(rng);
  WeightedGraph g(v);
  for (int i = 1; i < v; ++i) g.add_edge(i, std::uniform_int_distribution<int>(0, i - 1)(rng), len(rng));
  const int extra = std::uniform_int_distribution<int>(1, v + 5)(rng);
  std::uniform_int_distribution<int> end(0, v - 1);
  for (int k = 0; k < extra; ++k) g.add_edge(end(rng), end(rng), len(rng));
  return g;
}

std::vector<WeightedGraph> graph_corpus() {
  std::mt19937_64 rng(kSeed);
  std::vector<WeightedGraph> out;
  for (int i = 0; i < 1000; ++i) out.push_back(random_graph(rng));
  return out;
}

Outcome graph_bst() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto corpus = graph_corpus();
  int violations = 0;
  double worst = 0.0;
  for (const auto& g : corpus) {
    const double sys = graph_systole(g).length;
    const double bound = bst_bound(g);
    if (!(sys <= bound)) ++violations;
    worst = std::max(worst, sys / bound);
    o.transcript.push_back(Json::array({sys, bound}));
  }
  const double t = seconds_since(t0);
  o.pass = violations == 0 && t < 10.0;
  o.detail = std::to_string(corpus.size()) + " graphs, " + std::to_string(violations) +
             " violations, max sys/bound " + fmt(worst) + ", " + fmt(t, 3) + " s";
  return o;
}

Outcome greedy_sequence() {
  Outcome o;
  const auto corpus = graph_corpus();
  int bound_fail = 0, rank_fail = 0, order_fail = 0;
  for (const auto& g : corpus) {
    const int b = g.betti_number();
    const auto steps = greedy_systolic_sequence(g, b);
    Z2Basis span(static_cast<std::size_t>(g.edge_count()));
    int rank = 0;
    double remaining = g.total_length();
    Json lengths = Json::array();
    for (int k = 1; k <= static_cast<int>(steps.size()); ++k) {
      const auto& s = steps[static_cast<std::size_t>(k - 1)];
      const double bound = 4.0 * std::log(2.0 + b - k) / (b - k + 1.0) * remaining;
      if (!(s.cycle.length <= bound)) ++bound_fail;
      if (k > 1 && steps[static_cast<std::size_t>(k - 2)].cycle.length > s.cycle.length) ++order_fail;
      rank += span.insert(s.cycle.edge_vector(g));
      remaining -= g.edge(s.removed_edge).length;
      lengths.push_back(s.cycle.length);
    }
    if (rank != b || static_cast<int>(steps.size()) != b) ++rank_fail;
    o.transcript.push_back(lengths);
  }
  o.pass = bound_fail == 0 && rank_fail == 0 && order_fail == 0;
  o.detail = "bound violations " + std::to_string(bound_fail) + ", rank failures " + std::to_string(rank_fail) +
             ", order violations " + std::to_string(order_fail);
  return o;
}

std::vector<TriMesh> oracle_corpus() {
  std::vector<TriMesh> out;
  for (int n = 5; n <= 9; ++n) out.push_back(flat_torus(n));
  for (std::uint64_t s = 1; s <= 25; ++s) out.push_back(jitter_lengths(flat_torus(5 + static_cast<int>(s % 4)), kSeed + s, 0.1));
  out.push_back(genus2_surface(8, 3));
  out.push_back(genus2_surface(7, 2));
  out.push_back(genus2_surface(8, 1));
  out.push_back(genus2_surface(9, 3));
  out.push_back(pinched_genus2(0.5));
  for (std::uint64_t s = 1; s <= 15; ++s)
    out.push_back(jitter_lengths(genus2_surface(7 + static_cast<int>(s % 2), 2 + static_cast<int>(s % 2)), kSeed + 100 + s, 0.1));
  return out;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto corpus = oracle_corpus();
  int violations = 0, errors = 0;
  std::string first_error;
  for (const auto& m : corpus) {
    try {
      const int g = m.genus();
      const auto oracle = shortest_nontrivial_loop_oracle(m);
      const double ell = oracle.length;
      const auto r = short_homology_loops(m, ell, 2 * g);
      const double scale = std::sqrt((g >= 2 ? 4.0 * kPi * (g - 1) : 1.0) / m.area());
      const double c0 = 65536.0 / std::min(1.0, ell * scale);
      Json row = Json::array({oracle.length});
      for (int k = 1; k <= 2 * g; ++k) {
        const double len = r.loops[static_cast<std::size_t>(k - 1)].length;
        const double bound = c0 * std::log(2.0 * g - k + 2.0) / (2.0 * g - k + 1.0) * g;
        if (!(oracle.length <= len)) ++violations;
        if (!(len * scale <= bound)) ++violations;
        row.push_back(len);
      }
      if (r.rank != 2 * g) ++violations;
      o.transcript.push_back(row);
    } catch (const Error& e) {
      ++errors;
      if (first_error.empty()) first_error = std::string(error_name(e.code())) + ": " + e.what();
      o.transcript.push_back(std::string(error_name(e.code())));
    }
  }
  o.pass = violations == 0 && errors == 0;
  o.detail = std::to_string(corpus.size()) + " meshes, " + std::to_string(violations) + " violations, " +
             std::to_string(errors) + " errors" + (first_error.empty() ? "" : " (" + first_error + ")");
  return o;
}

double golden(const std::string& key) {
  static const Json j = [] {
    std::ifstream in(SYSKIT_TEST_DATA "/golden/hyperbolic_golden.json");
    return Json::parse(in);
  }();
  return std::stod(j.at(key).get<std::string>());
}

Outcome fat_torus_grid() {
  Outcome o;
  const double top = 2.0 * std::asinh(1.0);
  int bad = 0;
  for (int i = 1; i <= 1000; ++i) {
    const auto p = hyp::fat_torus(top * i / 1000.0);
    if (!(2.0 * p.a > p.eps) || !(2.0 * p.h > 2.0 * p.a)) ++bad;
    o.transcript.push_back(Json::array({p.a, p.h}));
  }
  const auto p = hyp::fat_torus(top);
  const double s = std::sinh(p.eps / 2.0);
  const bool a_ok = std::abs(p.a - 0.91504) <= 1e-4 && std::abs(p.a - golden("fat_a")) <= 1e-4;
  const bool h_ok = std::abs(p.h - 1.16598) <= 1e-4 && std::abs(p.h - golden("fat_h")) <= 1e-4;
  const bool s_ok = std::abs(s - 1.0) <= 1e-12;
  o.pass = bad == 0 && a_ok && h_ok && s_ok;
  o.detail = "grid violations " + std::to_string(bad) + ", a = " + fmt(p.a) + ", h = " + fmt(p.h) +
             ", sinh(eps/2) - 1 = " + fmt(s - 1.0, 3);
  return o;
}

Outcome capacity_constant() {
  Outcome o;
  const double v = kPi - 2.0 * hyp::collar_theta0();
  const double gold = golden("pi_minus_2theta0");
  o.pass = std::abs(v - 0.8542) <= 1e-3 && std::abs(v - gold) <= 1e-12 &&
           std::abs(hyp::collar_w0() - 0.5 * std::asinh(1.0)) <= 1e-15;
  o.detail = "pi - 2 theta0 = " + fmt(v) + " (golden " + fmt(gold) + ")";
  o.transcript = Json::array({v, hyp::collar_w0()});
  return o;
}

Outcome polygon_solvers() {
  Outcome o;
  const double ell = std::acosh(7.5);
  double worst = 0.0;
  int errors = 0, monotone_fail = 0;
  std::vector<double> Ls;
  for (int j = 0; j < 20; ++j) Ls.push_back(5.0 + 0.5 * j);
  for (int i = 0; i < 20; ++i) {
    const double theta = kPi / 6 + (kPi / 3 - kPi / 6) * i / 19.0;
    for (double L : Ls) {
      try {
        const auto h = hyp::solve_hexagon(theta, ell, L);
        worst = std::max(worst, h.closure_residual);
        o.transcript.push_back(h.sides);
      } catch (const Error&) {
        ++errors;
      }
    }
  }
  double prev3 = INFINITY, prev7 = INFINITY;
  for (double L : Ls) {
    const auto x3 = hyp::assemble_X3(ell, L);
    const auto x7 = hyp::assemble_X7(ell, L);
    worst = std::max({worst, x3.max_residual, x7.max_residual, hyp::solve_right_hexagon(L).closure_residual,
                      hyp::solve_pentagon_P(L).closure_residual});
    if (!(x3.boundary_length < prev3) || !(x7.boundary_length < prev7)) ++monotone_fail;
    prev3 = x3.boundary_length;
    prev7 = x7.boundary_length;
    o.transcript.push_back(Json::array({x3.boundary_length, x7.boundary_length}));
  }
  bool collar_ok = true;
  Json collars = Json::array();
  for (const std::string kind : {"X3", "X7"}) {
    const double L = hyp::find_L_for_collar(kind, ell, 5.0);
    const auto p = kind == "X3" ? hyp::assemble_X3(ell, L) : hyp::assemble_X7(ell, L);
    const double w = hyp::collar_width(p.boundary_length);
    collar_ok = collar_ok && w >= 5.0;
    collars.push_back(Json::array({L, w}));
  }
  o.transcript.push_back(collars);
  o.pass = errors == 0 && worst < 1e-9 && monotone_fail == 0 && collar_ok;
  o.detail = "max residual " + fmt(worst, 3) + ", solver errors " + std::to_string(errors) +
             ", monotonicity failures " + std::to_string(monotone_fail) + ", collar tau = 5 " +
             (collar_ok ? "verified" : "NOT verified");
  return o;
}

Outcome construction_arithmetic() {
  Outcome o;
  const auto p = hyp::construction_plan(3, 2, std::acosh(7.5));
  bool ok = p.genus_formula == 87 && !p.stated.consistent && p.euler.consistent && p.euler.triangles == 28 * 2 &&
            p.euler.vertices == 12 * 2;
  std::string cex;
  for (double C : {1.1, 2.0, 10.0}) {
    const auto c = hyp::cex_parameters(C);
    const double m = static_cast<double>(c.m);
    ok = ok && c.eps * m * m <= 0.01 && c.eps_m2_le_hundredth;
    cex += " " + fmt(c.eps * m * m, 4);
    o.transcript.push_back(Json::array({c.eps, c.m, c.h_min}));
  }
  o.transcript.push_back(Json::array({p.genus_formula, p.euler.triangles, p.euler.vertices}));
  o.pass = ok;
  o.detail = "genus " + std::to_string(p.genus_formula) + ", stated counts " +
             (p.stated.consistent ? "consistent" : "flagged inconsistent") + ", derived F = " +
             std::to_string(p.euler.triangles) + " V = " + std::to_string(p.euler.vertices) + ", eps m^2:" + cex;
  return o;
}

bool audit_passes(const std::vector<Audit>& audits, const std::string& name) {
  for (const auto& a : audits)
    if (a.name == name) return a.pass;
  return false;
}

Outcome marked_sphere_runs() {
  Outcome o;
  std::string detail;
  for (int n : {4, 8, 16, 32, 64}) {
    const auto r = marked_sphere_decomposition(marked_sphere(n));
    const auto& d = r.decomposition;
    const int kappa = static_cast<int>(std::floor(std::log2(n))) + 1;
    bool pants = d.valid();
    for (const auto& c : d.validation.components) pants = pants && c.type == PieceType::Pants;
    // The graph inequality is exact; the two totals carry the measured corridor slack.
    const bool graph = r.graph_length <= 12.0 * (r.centers - 2) * r.r0;
    const double slack = 1.0 + r.delta_corridor;
    const bool nested = d.total_length <= 2.0 * kappa * r.gamma_length * slack;
    const bool area = d.total_length <= 1024.0 * std::log(n) * d.mesh.area() / r.ell * slack;
    const bool ok = pants && graph && nested && area && r.kappa == kappa && audit_passes(d.audits, "graph length") &&
                    static_cast<int>(d.loops.size()) == n - 3;
    o.pass = o.pass && ok;
    detail += " n=" + std::to_string(n) + (ok ? " ok" : " FAIL") + " (kappa " + std::to_string(r.kappa) +
              ", delta " + fmt(r.delta_corridor, 3) + ")";
    Json t = Json::array({n, r.kappa, r.graph_length, r.gamma_length, d.total_length, r.delta_corridor});
    for (const auto& l : d.loops) t.push_back(l.length);
    o.transcript.push_back(t);
  }
  o.detail = detail.substr(1);
  return o;
}

int z2_rank(const TriMesh& m, const std::vector<MeshLoop>& loops) {
  const auto basis = tree_cotree_basis(m);
  Z2Basis span(static_cast<std::size_t>(basis.dim));
  int rank = 0;
  for (const auto& l : loops) rank += span.insert(homology_class(m, basis, l));
  return rank;
}

Outcome full_pipeline() {
  Outcome o;
  auto torus = flat_torus(8);
  torus.set_marks({0});
  const std::vector<std::pair<std::string, TriMesh>> cases{
      {"torus+1", torus}, {"genus-2", genus2_surface()}, {"pinched", pinched_genus2(0.2)},
      {"hairy(3)", hairy_torus(3, 0.1)}};
  std::string detail;
  for (const auto& [name, m] : cases) {
    bool ok = false;
    std::string note;
    try {
      const auto r = genus_surface_decomposition(m);
      const auto& d = r.decomposition;
      const int g = m.genus();
      const int n = static_cast<int>(m.marks().size());
      const auto ind = extract_independent_from_pants(d.mesh, d.loops);
      const int rank = z2_rank(d.mesh, ind);
      ok = d.valid() && static_cast<int>(d.loops.size()) == 3 * g - 3 + n && rank == g &&
           static_cast<int>(ind.size()) == g;
      note = std::to_string(d.loops.size()) + " loops, rank " + std::to_string(rank);
      Json t = Json::array({name, d.total_length});
      for (const auto& l : d.loops) t.push_back(l.length);
      o.transcript.push_back(t);
    } catch (const Error& e) {
      note = std::string(error_name(e.code()));
      o.transcript.push_back(note);
    }
    o.pass = o.pass && ok;
    detail += "; " + name + (ok ? " ok" : " FAIL") + " (" + note + ")";
  }
  o.detail = detail.substr(2);
  return o;
}

Outcome hyperelliptic_lift() {
  Outcome o;
  const auto fx = hyperelliptic_fixture(2);
  const auto r = lift_through_double_cover(fx.sphere, fx.cocycle);
  const int chi = r.cover.mesh.euler_characteristic();
  const int rh = 2 * fx.sphere.euler_characteristic() - static_cast<int>(fx.sphere.marks().size());
  bool pants = r.decomposition.valid();
  for (const auto& c : r.decomposition.validation.components) pants = pants && c.type == PieceType::Pants;
  o.pass = r.cover_genus == 2 && chi == rh && pants && static_cast<int>(r.decomposition.loops.size()) == 3;
  o.detail = "cover genus " + std::to_string(r.cover_genus) + ", chi " + std::to_string(chi) +
             " (Riemann-Hurwitz " + std::to_string(rh) + "), " + std::to_string(r.decomposition.loops.size()) +
             " loops, " + (pants ? "validator accepts" : "validator rejects");
  Json t = Json::array({r.cover_genus, r.decomposition.total_length});
  for (const auto& l : r.decomposition.loops) t.push_back(l.length);
  o.transcript = t;
  return o;
}

void print(int id, const char* name, const Outcome& o) {
  std::printf("criterion %2d %s: %s: %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "graph systole within BST bound", graph_bst},
      {2, "greedy systolic sequence", greedy_sequence},
      {3, "oracle equivalence and loop bounds", oracle_equivalence},
      {4, "fat torus", fat_torus_grid},
      {5, "capacity constant", capacity_constant},
      {6, "polygon solvers", polygon_solvers},
      {7, "construction arithmetic", construction_arithmetic},
      {8, "marked-sphere decomposition", marked_sphere_runs},
      {9, "full genus pipeline", full_pipeline},
      {10, "hyperelliptic lift", hyperelliptic_lift},
  };
  const auto t0 = std::chrono::steady_clock::now();
  auto guarded = [](const Criterion& c) {
    try {
      return c.run();
    } catch (const std::exception& e) {
      Outcome o;
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
      return o;
    }
  };
  int failed = 0;
  std::vector<std::string> first;
  for (const auto& c : criteria) {
    const Outcome o = guarded(c);
    print(c.id, c.name, o);
    failed += !o.pass;
    first.push_back(render_json(o.transcript));
  }
  // Determinism: every run again, compared byte for byte.
  int differing = 0;
  std::string which;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (render_json(guarded(criteria[i]).transcript) != first[i]) {
      ++differing;
      which += " " + std::to_string(criteria[i].id);
    }
  }
  Outcome det;
  det.pass = differing == 0;
  det.detail = std::to_string(criteria.size()) + " reruns, " + std::to_string(differing) + " differ" + which;
  print(11, "determinism", det);
  failed += !det.pass;
  std::printf("total %s, %d of 11 failed\n", fmt(seconds_since(t0), 3).c_str(), failed);
  return failed == 0 ? 0 : 1;
}
