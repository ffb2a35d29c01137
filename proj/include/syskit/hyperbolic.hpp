#pragma once

#include <string>
#include <vector>

namespace syskit::hyp {

/// Theta-collar width w0 = arcsinh(1)/2 and theta0 = arcsin(1/cosh w0).
double collar_w0();
double collar_theta0();
/// Regularity constant of disks of radius sys/8 in regularized 2-complexes.
inline constexpr double kDiskRegularity = 1.0 / 128.0;

struct FatTorusParams {
  double eps = 0.0;
  double a = 0.0;
  double h = 0.0;
  /// h from the right-angled pentagon (eps/4, h, a, a, h): sinh h sinh(eps/4) = cosh a.
  double h_pentagon = 0.0;
  bool two_a_gt_eps = false;
  bool two_h_gt_two_a = false;
};

FatTorusParams fat_torus(double eps);

double collar_capacity_bound(double length);

struct HypPolygon {
  std::string kind;
  std::vector<double> sides;
  std::vector<double> angles;  ///< angles[i] sits between sides[i] and sides[i+1]
  double closure_residual = 0.0;
};

/// Closure of the boundary word T(side) R(pi - angle): max entry of
/// head -/+ tail^{-1} over the larger of 1 and the head's entries.
double closure_residual(const std::vector<double>& sides, const std::vector<double>& angles);

/// Right-angled pentagon with consecutive sides a, b; returns sides
/// (a, b, x, c, y) with cosh c = sinh a sinh b.
HypPolygon solve_right_pentagon(double a, double b);

/// Symmetric hexagon H_{theta,L}: base ell with angles theta, other angles
/// right, opposite side L. Sides (ell, s, t, L, t, s).
HypPolygon solve_hexagon(double theta, double ell, double L);

/// Right-angled hexagon H_L with alternate sides L. Sides (L, x, L, x, L, x).
HypPolygon solve_right_hexagon(double L);

/// Symmetric pentagon P_{L'}: angle 2pi/7 at the apex, other angles right,
/// side opposite the apex L'. Sides (u, v, L', v, u).
HypPolygon solve_pentagon_P(double L);

struct HoledPiece {
  std::string kind;  ///< "X3" or "X7"
  double ell = 0.0;
  double L = 0.0;
  int holes = 0;
  double boundary_length = 0.0;
  double collar_width = 0.0;
  double corner_angle = 0.0;
  HypPolygon outer;  ///< H_{pi/6,L} or H_{pi/3,L'}
  HypPolygon core;   ///< H_L or P_{L'}
  double max_residual = 0.0;
};

/// Width of the standard collar around a closed geodesic of length b.
double collar_width(double b);

HoledPiece assemble_X3(double ell, double L);
HoledPiece assemble_X7(double ell, double L);

/// Smallest L (to bisection tolerance) whose piece has collar width >= tau.
double find_L_for_collar(const std::string& kind, double ell, double tau);

struct PlanReading {
  std::string name;  ///< "stated" or "euler"
  long long triangles = 0;
  long long vertices = 0;
  long long edges = 0;
  long long small_triangles = 0;
  long long x3 = 0;
  long long x7 = 0;
  long long holes = 0;
  long long pairs = 0;
  long long euler_characteristic = 0;
  double genus_from_chi = 0.0;
  long long genus_from_pairs = 0;
  bool consistent = false;
};

struct ConstructionPlan {
  int h = 0;
  int m = 0;
  double ell = 0.0;
  double cosh_ell = 0.0;
  long long genus_formula = 0;  ///< h + 21 (h-1)(m^2-2)
  long long k_formula = 0;      ///< 21 (h-1)(m^2-2)
  double triangle_area = 0.0; ///< equilateral triangle with angles 2pi/7
  PlanReading stated;
  PlanReading euler;
};

ConstructionPlan construction_plan(int h, int m, double ell);

double logh_bound(double h, double m, double K);

struct CexParameters {
  double C = 0.0;
  double K = 0.0;
  double eps = 0.0;
  long long m = 0;
  long long h_min = 0;  ///< 21 (m^2 - 2); the proof also needs h >= g0
  bool eps_le_hundredth = false;
  bool m_ge_ratio = false;
  bool eps_m2_le_hundredth = false;
};

CexParameters cex_parameters(double C, double K = 1.0);

double bers_sqrtg_bound(double g, double C);
double bp09_bound(double g, double C);
/// bp09_bound(g, C) <= 46 C sqrt(g) log g.
bool bp09_simplification_holds(double g, double C);

struct SumOptimum {
  double lambda = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  ///< bound / (g^{3/4} sqrt(log g))
};

SumOptimum sum_shortest_optimize(double g, double c1 = 1.0, double c2 = 1.0);

struct GroupBounds {
  double lower = 0.0;
  double upper_even = 0.0;
  bool odd = false;
  double odd_genus = 0.0;
  double odd_sys = 0.0;
  double odd_area = 0.0;
  double odd_ratio = 0.0;
  double odd_upper = 0.0;
  bool odd_holds = false;
};

/// Lower bound C_low (b1+1)/log^2(b1+2) and the upper records c0 b/log^2 b;
/// for odd b1 = 2g+1 also the Moebius-band example with constant c.
GroupBounds group_bounds(long long b1, double c_low, double c0, double c = 1.0);

}  // namespace syskit::hyp
