#include "syskit/hyperbolic.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "syskit/error.hpp"

namespace syskit::hyp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-9;

// 2x2 real matrices acting on the upper half-plane; a frame sits at i
// facing up the imaginary axis.
using Mat = std::array<double, 4>;

Mat mul(const Mat& x, const Mat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

Mat inv(const Mat& x) { return {x[3], -x[1], -x[2], x[0]}; }

Mat translate(double d) { return {std::exp(d / 2), 0.0, 0.0, std::exp(-d / 2)}; }

Mat rotate(double phi) {
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  return {c, s, -s, c};
}

struct Turtle {
  Mat f{1.0, 0.0, 0.0, 1.0};
  Turtle& move(double d) {
    f = mul(f, translate(d));
    return *this;
  }
  Turtle& turn(double phi) {
    f = mul(f, rotate(phi));
    return *this;
  }
};

// Trace-zero generator of the geodesic through the frame along its heading.
Mat line(const Mat& f) { return mul(mul(f, Mat{1.0, 0.0, 0.0, -1.0}), inv(f)); }

Mat perp_line(const Mat& f) { return line(mul(f, rotate(kPi / 2))); }

// cosh of the distance between ultraparallel lines, |cos| of the angle otherwise.
double cosh_between(const Mat& x, const Mat& y) {
  const Mat p = mul(x, y);
  return std::abs(p[0] + p[3]) / 2;
}

// Signed distance along the frame's heading to the foot of the common
// perpendicular with line x; NaN when they meet.
double foot(const Mat& f, const Mat& x) {
  const Mat y = mul(mul(inv(f), x), f);
  const double ab = -y[1] / y[2];
  if (!(ab > 0.0) || !std::isfinite(ab)) return std::nan("");
  return 0.5 * std::log(ab);
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Brackets an increasing f from a small lower end; NO_SOLUTION otherwise.
std::pair<double, double> bracket_up(const std::function<double(double)>& f, double lo, const char* what) {
  if (!(f(lo) < 0.0)) fail(ErrorCode::NoSolution, std::string(what) + ": root not bracketed (side too short)");
  double hi = std::max(2 * lo, 1.0);
  while (!(f(hi) > 0.0)) {
    lo = hi;
    hi *= 2;
    if (hi > 1e3) fail(ErrorCode::NoSolution, std::string(what) + ": root not bracketed");
  }
  return {lo, hi};
}

void finish(HypPolygon& p) {
  p.closure_residual = closure_residual(p.sides, p.angles);
  if (!(p.closure_residual < kTol))
    fail(ErrorCode::NoSolution, p.kind + ": closure residual " + std::to_string(p.closure_residual));
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::BadParams, std::string(what) + " must be positive");
}

}  // namespace

double collar_w0() { return std::asinh(1.0) / 2; }

double collar_theta0() { return std::asin(1.0 / std::cosh(collar_w0())); }

FatTorusParams fat_torus(double eps) {
  const double eps_max = 2 * std::asinh(1.0);
  if (!(eps > 0.0) || eps > eps_max) fail(ErrorCode::EpsOutOfRange, "eps must lie in (0, 2 arcsinh 1]");
  FatTorusParams p;
  p.eps = eps;
  p.a = std::asinh(std::sqrt(std::cosh(eps / 4)));
  p.h = std::asinh(std::cosh(p.a) / std::sinh(eps / 2));
  p.h_pentagon = std::asinh(std::cosh(p.a) / std::sinh(eps / 4));
  p.two_a_gt_eps = 2 * p.a > eps;
  p.two_h_gt_two_a = 2 * p.h > 2 * p.a;
  return p;
}

double collar_capacity_bound(double length) {
  if (!(length > 0.0)) fail(ErrorCode::NonpositiveLength, "loop length must be positive");
  return length / (kPi - 2 * collar_theta0());
}

double closure_residual(const std::vector<double>& sides, const std::vector<double>& angles) {
  // Compare the first half of the word with the inverse of the second half,
  // relative to their size, so long sides do not inflate rounding error.
  const std::size_t n = sides.size(), half = n / 2;
  Turtle head, tail;
  for (std::size_t i = 0; i < half; ++i) head.move(sides[i]).turn(kPi - angles[i]);
  for (std::size_t i = n; i-- > half;) tail.turn(-(kPi - angles[i])).move(-sides[i]);
  double plus = 0.0, minus = 0.0, size = 1.0;
  for (int k = 0; k < 4; ++k) {
    plus = std::max(plus, std::abs(head.f[k] - tail.f[k]));
    minus = std::max(minus, std::abs(head.f[k] + tail.f[k]));
    size = std::max(size, std::abs(head.f[k]));
  }
  return std::min(plus, minus) / size;
}

HypPolygon solve_right_pentagon(double a, double b) {
  require_positive(a, "a");
  require_positive(b, "b");
  if (!(std::sinh(a) * std::sinh(b) > 1.0 + 1e-12))
    fail(ErrorCode::NoSolution, "sinh a sinh b <= 1: no right-angled pentagon");
  Turtle t;
  const Mat start = t.f;
  t.move(a).turn(kPi / 2).move(b).turn(kPi / 2);
  const Mat first = perp_line(start);
  const double c = std::acosh(cosh_between(line(t.f), first));
  const double x = foot(t.f, first);
  const double y = foot(mul(start, rotate(kPi / 2)), line(t.f));
  HypPolygon p{"right_pentagon", {a, b, x, c, y}, std::vector<double>(5, kPi / 2), 0.0};
  finish(p);
  return p;
}

HypPolygon solve_hexagon(double theta, double ell, double L) {
  require_positive(ell, "ell");
  require_positive(L, "L");
  if (!(theta > 0.0 && theta < kPi / 2)) fail(ErrorCode::BadParams, "theta must lie in (0, pi/2)");
  // The base and its two adjacent sides must not close up into a triangle.
  const double s2 = std::sin(theta) * std::sin(theta);
  if (!(std::cosh(ell) > (1 + std::cos(theta) * std::cos(theta)) / s2))
    fail(ErrorCode::BadEll, "a triangle with this base and base angles exists");
  const Mat axis = perp_line(Mat{1.0, 0.0, 0.0, 1.0});
  auto frame = [&](double s) {
    Turtle t;
    t.move(ell / 2).turn(kPi - theta).move(s).turn(kPi / 2);
    return t.f;
  };
  auto f = [&](double s) { return cosh_between(line(frame(s)), axis) - std::cosh(L / 2); };
  const auto [lo, hi] = bracket_up(f, 1e-12, "hexagon");
  const double s = bisect(f, lo, hi);
  const double t = foot(frame(s), axis);
  if (!(t > 0.0)) fail(ErrorCode::NoSolution, "hexagon: perpendicular falls behind the corner");
  HypPolygon p{theta < kPi / 4 ? "H_pi6" : "H_pi3",
               {ell, s, t, L, t, s},
               {theta, kPi / 2, kPi / 2, kPi / 2, kPi / 2, theta},
               0.0};
  finish(p);
  return p;
}

HypPolygon solve_right_hexagon(double L) {
  require_positive(L, "L");
  const Mat axis = perp_line(Mat{1.0, 0.0, 0.0, 1.0});
  auto frame = [&](double x) {
    Turtle t;
    t.move(L / 2).turn(kPi / 2).move(x).turn(kPi / 2);
    return t.f;
  };
  // The common perpendicular with the axis is half the opposite side x.
  auto f = [&](double x) { return cosh_between(line(frame(x)), axis) - std::cosh(x / 2); };
  const auto [lo, hi] = bracket_up(f, 1e-9, "right hexagon");
  const double x = bisect(f, lo, hi);
  HypPolygon p{"H_L", {L, x, L, x, L, x}, std::vector<double>(6, kPi / 2), 0.0};
  finish(p);
  return p;
}

HypPolygon solve_pentagon_P(double L) {
  require_positive(L, "L'");
  const double apex = 2 * kPi / 7;
  const Mat axis = line(rotate(apex / 2));
  auto frame = [&](double u) {
    Turtle t;
    t.move(u).turn(kPi / 2);
    return t.f;
  };
  auto f = [&](double u) { return cosh_between(line(frame(u)), axis) - std::cosh(L / 2); };
  const auto [lo, hi] = bracket_up(f, 1e-12, "pentagon");
  const double u = bisect(f, lo, hi);
  const double v = foot(frame(u), axis);
  if (!(v > 0.0)) fail(ErrorCode::NoSolution, "pentagon: perpendicular falls behind the corner");
  HypPolygon p{"P", {u, v, L, v, u}, {kPi / 2, kPi / 2, kPi / 2, kPi / 2, apex}, 0.0};
  finish(p);
  return p;
}

double collar_width(double b) {
  require_positive(b, "boundary length");
  return std::asinh(1.0 / std::sinh(b / 2));
}

namespace {

void require_ell(double ell) {
  if (!(std::cosh(ell) > 7.0)) fail(ErrorCode::BadEll, "need cosh(ell) > 7");
}

}  // namespace

HoledPiece assemble_X3(double ell, double L) {
  require_ell(ell);
  HoledPiece x;
  x.kind = "X3";
  x.ell = ell;
  x.L = L;
  x.holes = 3;
  x.corner_angle = kPi / 3;
  x.outer = solve_hexagon(kPi / 6, ell, L);
  x.core = solve_right_hexagon(L);
  // Each hole: the short core side plus the short hexagon sides on both ends.
  x.boundary_length = x.core.sides[1] + 2 * x.outer.sides[2];
  x.collar_width = collar_width(x.boundary_length);
  x.max_residual = std::max(x.outer.closure_residual, x.core.closure_residual);
  return x;
}

HoledPiece assemble_X7(double ell, double L) {
  require_ell(ell);
  HoledPiece x;
  x.kind = "X7";
  x.ell = ell;
  x.L = L;
  x.holes = 7;
  x.corner_angle = 2 * kPi / 3;
  x.outer = solve_hexagon(kPi / 3, ell, L);
  x.core = solve_pentagon_P(L);
  x.boundary_length = 2 * x.core.sides[1] + 2 * x.outer.sides[2];
  x.collar_width = collar_width(x.boundary_length);
  x.max_residual = std::max(x.outer.closure_residual, x.core.closure_residual);
  return x;
}

double find_L_for_collar(const std::string& kind, double ell, double tau) {
  require_positive(tau, "tau");
  if (kind != "X3" && kind != "X7") fail(ErrorCode::BadParams, "kind must be X3 or X7");
  auto width = [&](double L) {
    return kind == "X3" ? assemble_X3(ell, L).collar_width : assemble_X7(ell, L).collar_width;
  };
  // Smallest sampled L where the piece exists.
  double lo = 1.0 / 64;
  for (;; lo *= 2) {
    if (lo > 1e3) fail(ErrorCode::NoSolution, "no admissible L");
    try {
      if (width(lo) >= tau) return lo;
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSolution) throw;
    }
  }
  double hi = 2 * lo;
  while (width(hi) < tau) {
    lo = hi;
    hi *= 2;
    if (hi > 600) fail(ErrorCode::NoSolution, "collar width beyond double precision");
  }
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (width(mid) >= tau ? hi : lo) = mid;
  }
  return hi;
}

namespace {

PlanReading reading(const char* name, long long h, long long m, long long triangles, long long vertices) {
  PlanReading r;
  r.name = name;
  r.triangles = triangles;
  r.vertices = vertices;
  r.edges = 3 * triangles / 2;
  r.small_triangles = triangles * m * m;
  r.x7 = vertices;
  r.x3 = r.small_triangles - 7 * vertices;
  r.holes = 3 * r.x3 + 7 * r.x7;
  r.pairs = r.holes / 2;
  // Removing a disk per hole lowers chi by one; gluing circles keeps it.
  r.euler_characteristic = r.vertices - r.edges + r.triangles - r.holes;
  r.genus_from_chi = (2.0 - static_cast<double>(r.euler_characteristic)) / 2;
  r.genus_from_pairs = h + r.pairs;
  r.consistent = r.euler_characteristic % 2 == 0 && r.genus_from_chi == static_cast<double>(r.genus_from_pairs);
  return r;
}

}  // namespace

ConstructionPlan construction_plan(int h, int m, double ell) {
  if (h < 2 || m < 2) fail(ErrorCode::BadParams, "need h >= 2 and m >= 2");
  require_ell(ell);
  ConstructionPlan p;
  p.h = h;
  p.m = m;
  p.ell = ell;
  p.cosh_ell = std::cosh(ell);
  const long long hm = h - 1, mm = static_cast<long long>(m) * m;
  p.k_formula = 21 * hm * (mm - 2);
  p.genus_formula = h + p.k_formula;
  p.triangle_area = kPi - 3 * (2 * kPi / 7);
  p.stated = reading("stated", h, m, 14 * hm, 6 * hm);
  p.euler = reading("euler", h, m, 28 * hm, 12 * hm);
  return p;
}

double logh_bound(double h, double m, double K) {
  if (!(h >= 2) || !(m >= 1) || !(K > 0 && K < 1)) fail(ErrorCode::BadParams, "need h >= 2, m >= 1, 0 < K < 1");
  return 4.0 / 3.0 * K * m * std::log(h);
}

CexParameters cex_parameters(double C, double K) {
  if (!(C > 1.0) || !std::isfinite(C)) fail(ErrorCode::BadC, "C must exceed 1");
  if (!(K > 0.0 && K <= 1.0)) fail(ErrorCode::BadParams, "K must lie in (0, 1]");
  CexParameters p;
  p.C = C;
  p.K = K;
  const double ratio = 3 * C / (2 * K);
  p.eps = 1.0 / (100 * (ratio + 1) * (ratio + 1));
  p.m = static_cast<long long>(std::floor(1.0 / (10 * std::sqrt(p.eps))));
  p.h_min = 21 * (p.m * p.m - 2);
  p.eps_le_hundredth = p.eps <= 0.01;
  p.m_ge_ratio = static_cast<double>(p.m) >= ratio;
  p.eps_m2_le_hundredth = p.eps * static_cast<double>(p.m * p.m) <= 0.01;
  return p;
}

namespace {

void require_gc(double g, double C) {
  if (!(g >= 2) || !(C > 0)) fail(ErrorCode::BadParams, "need g >= 2 and C > 0");
}

}  // namespace

double bers_sqrtg_bound(double g, double C) {
  require_gc(g, C);
  return 46 * C * std::sqrt(g) * std::log(g);
}

double bp09_bound(double g, double C) {
  require_gc(g, C);
  const double q = C * std::log(g) / (2 * kPi);
  return 46 * std::sqrt(2 * kPi * (2 * g - 2)) * std::sqrt(q * q + 1);
}

bool bp09_simplification_holds(double g, double C) { return bp09_bound(g, C) <= bers_sqrtg_bound(g, C); }

SumOptimum sum_shortest_optimize(double g, double c1, double c2) {
  if (!(g >= 2) || !(c1 > 0) || !(c2 > 0)) fail(ErrorCode::BadParams, "need g >= 2 and positive constants");
  const double lg = std::log(g + 1) / std::sqrt(g);
  auto f = [&](double lam) {
    const double k = std::floor(lam * g);
    return c1 * k / (1 - lam) * lg + c2 * (g - k);
  };
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double a = 0.0, b = 1.0 - 1e-12;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-6) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  SumOptimum o;
  o.lambda = 0.5 * (a + b);
  o.bound = f(o.lambda);
  o.ratio = o.bound / (std::pow(g, 0.75) * std::sqrt(std::log(g)));
  return o;
}

GroupBounds group_bounds(long long b1, double c_low, double c0, double c) {
  if (b1 < 1) fail(ErrorCode::BadParams, "b1 must be at least 1");
  if (!(c_low > 0) || !(c0 > 0) || !(c > 0)) fail(ErrorCode::BadParams, "constants must be positive");
  GroupBounds r;
  const double b = static_cast<double>(b1);
  r.lower = c_low * (b + 1) / std::pow(std::log(b + 2), 2);
  r.upper_even = c0 * b / std::pow(std::log(b), 2);
  r.odd = b1 % 2 == 1;
  if (r.odd && b1 >= 5) {
    r.odd_genus = static_cast<double>((b1 - 1) / 2);
    const double lg = std::log(r.odd_genus);
    r.odd_sys = c / 4 * lg;
    r.odd_area = 4 * kPi * (r.odd_genus - 1) + c * c / 4 * lg * lg;
    r.odd_ratio = r.odd_area / (r.odd_sys * r.odd_sys);
    r.odd_upper = c0 * b / std::pow(std::log(b), 2);
    r.odd_holds = r.odd_ratio <= r.odd_upper;
  }
  return r;
}

}  // namespace syskit::hyp
