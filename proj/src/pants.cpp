#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>

#include "syskit/dsu.hpp"
#include "syskit/error.hpp"
#include "syskit/geodesic.hpp"
#include "syskit/homology.hpp"
#include "syskit/pants.hpp"

namespace syskit {
namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

DerivedMesh identity(const TriMesh& m) {
  DerivedMesh d;
  d.mesh = m;
  d.vertex_origin.resize(at(m.vertex_count()));
  std::iota(d.vertex_origin.begin(), d.vertex_origin.end(), 0);
  d.edge_origin.resize(at(m.edge_count()));
  std::iota(d.edge_origin.begin(), d.edge_origin.end(), 0);
  return d;
}

std::vector<int> cap_marks(const DerivedMesh& d) {
  std::vector<int> out;
  for (int v : d.mesh.marks())
    if (d.vertex_origin[at(v)] < 0) out.push_back(v);
  return out;
}

// Marks and the closed caps around cap centers; loops stay off both.
std::vector<char> loop_barrier(const DerivedMesh& d) {
  std::vector<char> blocked(at(d.mesh.vertex_count()), 0);
  for (int v : d.mesh.marks()) blocked[at(v)] = 1;
  for (int c : cap_marks(d))
    for (int id : d.mesh.vertex_edges(c)) blocked[at(d.mesh.other_end(id, c))] = 1;
  return blocked;
}

std::vector<double> refine_values(const TriMesh& m, const std::vector<double>& f) {
  std::vector<double> out = f;
  for (const auto& e : m.edges()) out.push_back(0.5 * (f[at(e.u)] + f[at(e.v)]));
  return out;
}

// Provenance tags of the loops in `kept`, matched by edge sequence.
std::vector<std::string> match_provenance(const std::vector<MeshLoop>& all, const std::vector<std::string>& tags,
                                          const std::vector<MeshLoop>& kept) {
  std::vector<std::string> out;
  for (const auto& loop : kept) {
    std::string tag;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (all[i].edges == loop.edges) {
        tag = tags[i];
        break;
      }
    out.push_back(tag);
  }
  return out;
}

bool is_simple(const TriMesh& m, const MeshLoop& loop) {
  auto vs = loop.vertices(m);
  vs.pop_back();
  std::set<int> distinct(vs.begin(), vs.end());
  return distinct.size() == vs.size();
}

// Splits a closed walk at repeated vertices, keeping a nontrivial simple part.
std::optional<MeshLoop> simple_nontrivial_part(const TriMesh& m, const HomologyBasis& basis, MeshLoop loop) {
  while (!is_simple(m, loop)) {
    const auto vs = loop.vertices(m);
    std::size_t i = 0, j = 0;
    bool found = false;
    for (i = 0; i + 1 < vs.size() && !found; ++i)
      for (j = i + 1; j + 1 < vs.size(); ++j)
        if (vs[i] == vs[j]) {
          found = true;
          break;
        }
    --i;
    MeshLoop inner, outer;
    inner.start = vs[i];
    outer.start = vs[0];
    for (std::size_t k = 0; k < loop.edges.size(); ++k) {
      MeshLoop& part = (k >= i && k < j) ? inner : outer;
      part.edges.push_back(loop.edges[k]);
      part.length += m.edge(loop.edges[k]).length;
    }
    const bool inner_ok = !inner.edges.empty() && !homology_class(m, basis, inner).is_zero();
    const bool outer_ok = !outer.edges.empty() && !homology_class(m, basis, outer).is_zero();
    if (inner_ok && (!outer_ok || inner.length <= outer.length)) loop = inner;
    else if (outer_ok) loop = outer;
    else return std::nullopt;
  }
  return loop;
}

struct SideStats {
  int genus = 0;
  int marks = 0;
};

// Genus and marks on both sides of a simple loop, or nothing when the loop
// does not separate. Floods both sides in turn and stops with the smaller
// one; the other side follows from the totals.
class SideScanner {
 public:
  explicit SideScanner(const TriMesh& m)
      : m_(m), vstamp_(at(m.vertex_count()), 0), estamp_(at(m.edge_count()), 0), cut_(at(m.edge_count()), 0),
        side_(at(m.face_count()), 0), total_chi_(m.euler_characteristic()),
        total_marks_(static_cast<int>(m.marks().size())) {}

  std::optional<std::array<SideStats, 2>> split(const MeshLoop& loop) {
    const int base = ++round_ * 2;  // side stamps base + 1 and base + 2
    for (int id : loop.edges) cut_[at(id)] = round_;
    const auto& ef = m_.edge_faces(loop.edges.front());
    if (ef[0] < 0 || ef[1] < 0) return std::nullopt;
    std::array<std::vector<int>, 2> faces;
    std::array<std::size_t, 2> head{0, 0};
    for (int s = 0; s < 2; ++s) {
      side_[at(ef[at(s)])] = base + 1 + s;
      faces[at(s)].push_back(ef[at(s)]);
    }
    int done = -1;
    while (done < 0) {
      for (int s = 0; s < 2 && done < 0; ++s) {
        if (head[at(s)] == faces[at(s)].size()) {
          done = s;
          break;
        }
        const auto& F = m_.face(faces[at(s)][head[at(s)]++]);
        for (int c = 0; c < 3; ++c) {
          const int id = F.e[at(c)];
          if (cut_[at(id)] == round_) continue;
          const auto& adj = m_.edge_faces(id);
          for (int g : adj) {
            if (g < 0) continue;
            if (side_[at(g)] == base + 2 - s) return std::nullopt;
            if (side_[at(g)] == base + 1 + s) continue;
            side_[at(g)] = base + 1 + s;
            faces[at(s)].push_back(g);
          }
        }
      }
    }
    SideStats small;
    int vcount = 0, ecount = 0;
    for (int f : faces[at(done)]) {
      const auto& F = m_.face(f);
      for (int c = 0; c < 3; ++c) {
        const int v = F.v[at(c)], id = F.e[at(c)];
        if (vstamp_[at(v)] != round_) {
          vstamp_[at(v)] = round_;
          ++vcount;
          small.marks += m_.is_marked(v);
        }
        if (estamp_[at(id)] != round_) {
          estamp_[at(id)] = round_;
          ++ecount;
        }
      }
    }
    const int chi = vcount - ecount + static_cast<int>(faces[at(done)].size());
    small.genus = (1 - chi) / 2;
    SideStats large;
    large.genus = (1 - (total_chi_ - chi)) / 2;
    large.marks = total_marks_ - small.marks;
    std::array<SideStats, 2> out;
    out[at(done)] = small;
    out[at(1 - done)] = large;
    return out;
  }

 private:
  const TriMesh& m_;
  std::vector<int> vstamp_, estamp_, cut_, side_;
  int total_chi_, total_marks_;
  int round_ = 0;
};

bool admissible_side(const SideStats& s) { return s.genus >= 1 || s.marks >= 2; }

// Shortest simple loop of length < ell avoiding marks that neither bounds a
// disk with at most one mark nor is null-homologous without separating.
std::optional<MeshLoop> shortest_admissible_loop(const DerivedMesh& piece, double ell) {
  const TriMesh& m = piece.mesh;
  const std::vector<char> blocked = loop_barrier(piece);
  const HomologyBasis basis = tree_cotree_basis(m);
  std::optional<MeshLoop> best;
  if (basis.dim > 0) {
    LoopConstraints c;
    c.blocked_vertices = &blocked;
    if (auto res = shortest_loop_outside(m, basis, c); res && res->length < ell)
      if (auto simple = simple_nontrivial_part(m, basis, res->loop)) best = simple;
  }
  // Separating candidates: fundamental cycles of short shortest-path trees.
  std::vector<std::pair<double, std::vector<int>>> candidates;
  std::set<std::vector<int>> seen;
  SearchLimits lim;
  lim.blocked_vertices = &blocked;
  lim.max_distance = ell / 2.0;
  for (int s = 0; s < m.vertex_count(); ++s) {
    if (blocked[at(s)]) continue;
    const auto field = mesh_dijkstra(m, {s}, lim);
    for (int id = 0; id < m.edge_count(); ++id) {
      const auto& e = m.edge(id);
      if (field.owner[at(e.u)] < 0 || field.owner[at(e.v)] < 0) continue;
      if (field.pred_edge[at(e.u)] == id || field.pred_edge[at(e.v)] == id) continue;
      const double len = field.dist[at(e.u)] + e.length + field.dist[at(e.v)];
      if (len >= ell || (best && len >= best->length)) continue;
      std::vector<int> walk;
      for (int k : trace_path(m, field, e.u)) walk.push_back(k);
      walk.push_back(id);
      auto back = trace_path(m, field, e.v);
      for (auto it = back.rbegin(); it != back.rend(); ++it) walk.push_back(*it);
      MeshLoop loop;
      loop.start = s;
      loop.edges = walk;
      loop.length = len;
      loop = reduce_loop(m, loop);
      if (loop.edges.size() < 3 || !is_simple(m, loop)) continue;
      auto key = loop.edges;
      std::sort(key.begin(), key.end());
      if (!seen.insert(key).second) continue;
      candidates.emplace_back(loop.length, std::move(loop.edges));
      candidates.back().second.insert(candidates.back().second.begin(), loop.start);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  SideScanner scanner(m);
  for (const auto& [len, data] : candidates) {
    if (best && len >= best->length) break;
    MeshLoop loop;
    loop.start = data.front();
    loop.edges.assign(data.begin() + 1, data.end());
    loop.length = len;
    if (basis.dim > 0 && !homology_class(m, basis, loop).is_zero()) continue;
    const auto sides = scanner.split(loop);
    if (!sides) continue;
    if (admissible_side((*sides)[0]) && admissible_side((*sides)[1])) {
      best = loop;
      break;
    }
  }
  return best;
}

std::vector<DerivedMesh> split_components(const DerivedMesh& parent) {
  std::vector<DerivedMesh> out;
  const int count = parent.mesh.component_count();
  for (int c = 0; c < count; ++c) out.push_back(compose(parent, extract_component(parent.mesh, c)));
  return out;
}

}  // namespace

Audit make_audit(std::string name, std::string anchor, double lhs, double rhs) {
  Audit a;
  a.name = std::move(name);
  a.anchor = std::move(anchor);
  a.lhs = lhs;
  a.rhs = rhs;
  a.pass = lhs <= rhs;
  return a;
}

void finalize(PantsDecomposition& d) {
  d.validation = validate_decomposition(d.mesh, d.loops);
  d.total_length = 0.0;
  d.max_length = 0.0;
  for (const auto& l : d.loops) {
    d.total_length += l.length;
    d.max_length = std::max(d.max_length, l.length);
  }
}

void complete_decomposition(PantsDecomposition& d) {
  std::vector<int> cut;
  for (const auto& l : d.loops) cut.insert(cut.end(), l.edges.begin(), l.edges.end());
  std::sort(cut.begin(), cut.end());
  cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
  const DerivedMesh capped = cut_and_cap(d.mesh, cut, true);
  const auto stats = capped.mesh.component_stats();
  for (int c = 0; c < static_cast<int>(stats.size()); ++c) {
    if (stats[at(c)].genus != 0 || stats[at(c)].marks < 4) continue;
    const DerivedMesh piece = compose(capped, extract_component(capped.mesh, c));
    MarkedSphereOptions o;
    o.max_refinements = 0;
    o.caps = cap_marks(piece);
    const auto r = marked_sphere_decomposition(piece.mesh, o);
    for (const auto& loop : r.decomposition.loops) {
      d.loops.push_back(pull_back(piece, loop));
      d.provenance.push_back("completion of component " + std::to_string(c));
    }
  }
}

PantsDecomposition reeb_pants_decomposition(const TriMesh& m0, const std::vector<double>& f0) {
  const double width = sweep_width(m0, f0);
  TriMesh m = m0;
  std::vector<double> f = f0;
  for (int level = 0;; ++level) {
    try {
      const ReebGraph g = reeb_graph(m, f);
      std::vector<std::vector<LevelPoint>> levels;
      std::vector<std::string> tags;
      for (std::size_t a = 0; a < g.arcs.size(); ++a) {
        levels.push_back(g.arcs[a].loop);
        tags.push_back("level loop of arc " + std::to_string(a));
      }
      const LevelRefinement R = insert_level_loops(m, levels);
      PantsDecomposition d;
      d.mesh = R.mesh;
      d.loops = prune_decomposition(R.mesh, R.loops);
      d.provenance = match_provenance(R.loops, tags, d.loops);
      double level_max = 0.0;
      for (const auto& l : d.loops) level_max = std::max(level_max, l.length);
      complete_decomposition(d);
      d.refinements = level;
      finalize(d);
      // Level points tied with a vertex value are nudged off the vertex.
      constexpr double kLevelTol = 1e-6;
      Audit level_audit = make_audit("level loops", "level loop length <= sup_t length f^-1(t)", level_max, width);
      level_audit.pass = level_max <= width * (1.0 + kLevelTol);
      d.audits.push_back(level_audit);
      Audit max_audit = make_audit("max length", "decomposition max length <= sweep width", d.max_length, width);
      max_audit.pass = d.max_length <= width * (1.0 + kLevelTol);
      d.audits.push_back(max_audit);
      return d;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RefinementNeeded || level >= 3) throw;
      f = refine_values(m, f);
      m = refine_midpoint(m);
    }
  }
}

std::vector<MeshLoop> extract_independent_from_pants(const TriMesh& m, const std::vector<MeshLoop>& loops) {
  const int g = m.genus();
  if (g == 0) return {};
  const HomologyBasis basis = tree_cotree_basis(m);
  Z2Basis span(at(basis.dim));
  std::vector<MeshLoop> out;
  for (const auto& l : loops) {
    if (static_cast<int>(out.size()) == g) break;
    if (span.insert(homology_class(m, basis, l))) out.push_back(l);
  }
  if (static_cast<int>(out.size()) < g)
    fail(ErrorCode::RankDeficit, "decomposition loops span rank " + std::to_string(out.size()) + " < genus " +
                                     std::to_string(g));
  return out;
}

GenusReport genus_surface_decomposition(const TriMesh& m, const GenusOptions& opt) {
  if (!m.is_closed()) fail(ErrorCode::NotClosed, "genus pipeline needs a closed surface");
  if (m.component_count() != 1) fail(ErrorCode::Disconnected, "genus pipeline needs a connected surface");
  GenusReport r;
  r.genus = m.genus();
  r.marks = static_cast<int>(m.marks().size());
  const int g = r.genus, n = r.marks;
  PantsDecomposition& d = r.decomposition;

  if (2 - 2 * g - n >= 0) {
    d.mesh = m;
    if (g == 1) {
      const auto res = shortest_nontrivial_loop_oracle(m);
      d.loops.push_back(res.loop);
      d.provenance.push_back("handle loop");
    }
    finalize(d);
    return r;
  }

  r.scale = std::sqrt(4.0 * std::numbers::pi * (g + 0.5 * n - 1.0) / m.area());
  TriMesh work = m.scaled(r.scale);
  for (int level = 0;; ++level) {
    try {
      d = PantsDecomposition{};
      r.signatures.clear();
      r.steps = 0;
      std::deque<DerivedMesh> queue{identity(work)};
      while (!queue.empty()) {
        DerivedMesh piece = std::move(queue.front());
        queue.pop_front();
        const int gp = piece.mesh.genus();
        const int np = static_cast<int>(piece.mesh.marks().size());
        r.signatures.push_back("(" + std::to_string(gp) + "," + std::to_string(np) + ")");
        if (2 - 2 * gp - np >= 0) continue;
        if (++r.steps > 4 * g + 2 * n)
          fail(ErrorCode::InductionOverflow, "more than 4g + 2n splitting steps");

        if (auto alpha = shortest_admissible_loop(piece, opt.ell)) {
          d.loops.push_back(pull_back(piece, *alpha));
          d.provenance.push_back("short loop");
          const DerivedMesh capped = compose(piece, cut_and_cap(piece.mesh, alpha->edges, true));
          for (auto& part : split_components(capped)) queue.push_back(std::move(part));
          continue;
        }
        DerivedMesh running = piece;
        for (int i = 0; i < gp; ++i) {
          const std::vector<char> blocked = loop_barrier(running);
          const HomologyBasis basis = tree_cotree_basis(running.mesh);
          LoopConstraints c;
          c.blocked_vertices = &blocked;
          const auto res = shortest_loop_outside(running.mesh, basis, c);
          if (!res) fail(ErrorCode::NoNontrivialClass, "no handle loop avoiding the marks");
          const auto loop = simple_nontrivial_part(running.mesh, basis, res->loop);
          if (!loop) fail(ErrorCode::Internal, "handle loop has no simple nontrivial part");
          d.loops.push_back(pull_back(running, *loop));
          d.provenance.push_back("handle loop");
          running = compose(running, cut_and_cap(running.mesh, loop->edges, true));
        }
        if (running.mesh.marks().size() < 4) continue;
        MarkedSphereOptions o;
        o.max_refinements = 0;
        o.caps = cap_marks(running);
        const auto ms = marked_sphere_decomposition(running.mesh, o);
        for (const auto& loop : ms.decomposition.loops) {
          d.loops.push_back(pull_back(running, loop));
          d.provenance.push_back("sphere stage");
        }
      }
      d.mesh = work;
      d.refinements = level;
      finalize(d);
      const int expected = 3 * g - 3 + n;
      Audit count = make_audit("loop count", "3g - 3 + n", static_cast<double>(d.loops.size()), expected);
      count.pass = static_cast<int>(d.loops.size()) == expected;
      d.audits.push_back(count);
      Audit total = make_audit("total length", "total <= C_g n log(n + 1)", d.total_length,
                               opt.c_g * n * std::log(n + 1.0));
      total.applicable = opt.c_g > 0.0 && n >= 1;
      d.audits.push_back(total);
      return r;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RefinementNeeded || level >= opt.max_refinements) throw;
      work = refine_midpoint(work);
    }
  }
}

DoubleCover build_double_cover(const TriMesh& base, const std::vector<int>& cocycle) {
  if (!base.is_closed()) fail(ErrorCode::BadBranchData, "base surface must be closed");
  std::vector<int> label(at(base.edge_count()), 0);
  for (int id : cocycle) {
    if (id < 0 || id >= base.edge_count()) fail(ErrorCode::BadBranchData, "cocycle edge out of range");
    label[at(id)] ^= 1;
  }
  for (int v = 0; v < base.vertex_count(); ++v) {
    int parity = 0;
    for (int id : base.vertex_edges(v)) parity ^= label[at(id)];
    if (parity != (base.is_marked(v) ? 1 : 0))
      fail(ErrorCode::BadBranchData, "holonomy around vertex " + std::to_string(v) +
                                         (base.is_marked(v) ? " is trivial at a mark" : " is odd away from the marks"));
  }
  const int F = base.face_count();
  auto corner = [](int f, int s, int i) { return 3 * (2 * f + s) + i; };
  auto local = [&](int f, int v) {
    for (int i = 0; i < 3; ++i)
      if (base.face(f).v[at(i)] == v) return i;
    fail(ErrorCode::Internal, "vertex not on face");
  };
  DisjointSets sets(at(6 * F));
  for (int id = 0; id < base.edge_count(); ++id) {
    const auto& ef = base.edge_faces(id);
    for (int s = 0; s < 2; ++s)
      for (int v : {base.edge(id).u, base.edge(id).v})
        sets.unite(at(corner(ef[0], s, local(ef[0], v))), at(corner(ef[1], s ^ label[at(id)], local(ef[1], v))));
  }
  DoubleCover cover;
  std::vector<int> vid(at(6 * F), -1);
  auto vertex_of = [&](int c) {
    const std::size_t root = sets.find(at(c));
    if (vid[root] < 0) {
      vid[root] = static_cast<int>(cover.vertex_base.size());
      cover.vertex_base.push_back(base.face(c / 6).v[at(c % 3)]);
    }
    return vid[root];
  };
  std::vector<MeshFace> faces;
  for (int f = 0; f < F; ++f)
    for (int s = 0; s < 2; ++s) {
      MeshFace nf;
      for (int i = 0; i < 3; ++i) {
        nf.v[at(i)] = vertex_of(corner(f, s, i));
        const int id = base.face(f).e[at(i)];
        const int sheet = base.edge_faces(id)[0] == f ? s : s ^ label[at(id)];
        nf.e[at(i)] = 2 * id + sheet;
      }
      faces.push_back(nf);
    }
  std::vector<MeshEdge> edges(at(2 * base.edge_count()));
  for (int id = 0; id < base.edge_count(); ++id) {
    const int f = base.edge_faces(id)[0];
    const int i = [&] {
      for (int k = 0; k < 3; ++k)
        if (base.face(f).e[at(k)] == id) return k;
      return -1;
    }();
    for (int s = 0; s < 2; ++s) {
      const int a = vertex_of(corner(f, s, i)), b = vertex_of(corner(f, s, (i + 1) % 3));
      edges[at(2 * id + s)] = {a, b, base.edge(id).length, base.edge(id).length_text};
      cover.edge_base.push_back(id);
    }
  }
  cover.mesh = TriMesh::from_faces(static_cast<int>(cover.vertex_base.size()), std::move(edges), std::move(faces), {},
                                  {}, TriMesh::kDerivedSlack);
  return cover;
}

std::vector<MeshLoop> lift_loop(const DoubleCover& cover, const TriMesh& base, const MeshLoop& loop) {
  const auto vs = loop.vertices(base);
  for (int v : vs)
    if (base.is_marked(v)) fail(ErrorCode::BadParams, "lifted loops must avoid the branch points");
  std::vector<int> over;
  for (int x = 0; x < cover.mesh.vertex_count(); ++x)
    if (cover.vertex_base[at(x)] == loop.start) over.push_back(x);
  auto walk = [&](int x0) {
    MeshLoop out;
    out.start = x0;
    int x = x0;
    do {
      for (int id : loop.edges) {
        int next = -1;
        for (int s = 0; s < 2; ++s) {
          const auto& e = cover.mesh.edge(2 * id + s);
          if (e.u == x || e.v == x) {
            next = 2 * id + s;
            break;
          }
        }
        if (next < 0) fail(ErrorCode::Internal, "loop does not lift");
        out.edges.push_back(next);
        out.length += cover.mesh.edge(next).length;
        x = cover.mesh.other_end(next, x);
      }
    } while (x != x0);
    return out;
  };
  std::vector<MeshLoop> lifts{walk(over.front())};
  if (lifts.front().edges.size() == loop.edges.size()) lifts.push_back(walk(over.back()));
  return lifts;
}

LiftReport lift_through_double_cover(const TriMesh& sphere, const std::vector<int>& cocycle, const LiftOptions& opt) {
  build_double_cover(sphere, cocycle);
  if (sphere.genus() != 0) fail(ErrorCode::NotSphere, "quotient must be a sphere");
  const int g = static_cast<int>(sphere.marks().size()) / 2 - 1;
  TriMesh base = sphere;
  std::vector<int> coc = cocycle;
  for (int level = 0;; ++level) {
    try {
      LiftReport r;
      MarkedSphereOptions o;
      o.max_refinements = 0;
      r.base = marked_sphere_decomposition(base, o);
      r.base.decomposition.refinements = level;
      r.cover = build_double_cover(base, coc);
      r.cover_genus = r.cover.mesh.genus();
      PantsDecomposition& d = r.decomposition;
      d.mesh = r.cover.mesh;
      std::vector<MeshLoop> all;
      std::vector<std::string> tags;
      for (std::size_t i = 0; i < r.base.decomposition.loops.size(); ++i)
        for (auto& l : lift_loop(r.cover, base, r.base.decomposition.loops[i])) {
          all.push_back(l);
          tags.push_back("lift of base loop " + std::to_string(i));
        }
      r.lifted_count = static_cast<int>(all.size());
      d.loops = prune_decomposition(d.mesh, all);
      d.provenance = match_provenance(all, tags, d.loops);
      complete_decomposition(d);
      d.refinements = level;
      finalize(d);
      const int chi_cover = r.cover.mesh.euler_characteristic();
      const int chi_expected = 2 * base.euler_characteristic() - static_cast<int>(base.marks().size());
      Audit rh = make_audit("branched cover Euler characteristic", "chi(cover) = 2 chi(base) - branch points",
                            chi_cover, chi_expected);
      rh.pass = chi_cover == chi_expected;
      r.audits.push_back(rh);
      Audit total = make_audit("total length", "total <= C g log g", d.total_length,
                               opt.c * g * std::log(static_cast<double>(g)));
      total.applicable = g >= 2;
      r.audits.push_back(total);
      return r;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RefinementNeeded || level >= opt.max_refinements) throw;
      std::vector<int> refined;
      for (int id : coc) {
        refined.push_back(2 * id);
        refined.push_back(2 * id + 1);
      }
      coc = std::move(refined);
      base = refine_midpoint(base);
    }
  }
}

}  // namespace syskit
