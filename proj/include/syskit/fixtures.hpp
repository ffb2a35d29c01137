#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "syskit/mesh.hpp"

namespace syskit {

/// n x n unit grid torus, squares split along (i,j)-(i+1,j+1). Vertex (i,j)
/// has id i + n*j. Coordinates come from a standard torus of revolution.
TriMesh flat_torus(int n, double side = 1.0);

/// Icosahedron subdivided `level` times on the unit sphere, chord lengths.
TriMesh icosphere(int level);

/// Two n x n unit tori, each missing a hole x hole block of squares, glued
/// along the square boundary of the block.
TriMesh genus2_surface(int n = 8, int hole = 3);

/// Two 6 x 6 unit tori joined by a square tube whose middle ring has side
/// `pinch`.
TriMesh pinched_genus2(double pinch = 0.2);

/// 8 x 8 unit torus with `hairs` arched square tubes of perimeter `girth`,
/// each joining two unit-square holes. Genus 1 + hairs.
TriMesh hairy_torus(int hairs, double girth);

/// Farthest-point sample of k vertices starting from vertex 0.
std::vector<int> farthest_point_marks(const TriMesh& m, int k);

/// Icosphere with n farthest-point marks; finer for larger n.
TriMesh marked_sphere(int n);

struct HyperellipticFixture {
  TriMesh sphere;           ///< 2g+2 marks
  std::vector<int> cocycle; ///< edges carrying the sheet swap
};

/// Sphere with 2g+2 marks and the cocycle of shortest paths pairing marks
/// (0,1), (2,3), ...
HyperellipticFixture hyperelliptic_fixture(int g);

/// Z2COCYCLE text: `Z2COCYCLE k` followed by k edge ids.
std::vector<int> read_cocycle(const std::string& path);
void write_cocycle(const std::vector<int>& edges, const std::string& path);

/// Multiplies each edge length by a uniform factor in [1 - amp, 1 + amp],
/// redrawing until the triangle inequality holds. Deterministic per seed.
TriMesh jitter_lengths(const TriMesh& m, std::uint64_t seed, double amp);

/// Vertex with the given coordinates (within 1e-9), or -1.
int vertex_at(const TriMesh& m, double x, double y, double z);

/// The square waist of genus2_surface(n, hole) at z = 0.
MeshLoop genus2_waist(const TriMesh& m, int hole = 3);

}  // namespace syskit
