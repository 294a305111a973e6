#pragma once

// Discrete differential geometry of planar polylines.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace spoonflow {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr auto operator==(const Point2&, const Point2&) -> bool = default;
};

constexpr auto operator+(Point2 a, Point2 b) -> Point2 { return {a.x + b.x, a.y + b.y}; }
constexpr auto operator-(Point2 a, Point2 b) -> Point2 { return {a.x - b.x, a.y - b.y}; }
constexpr auto operator-(Point2 a) -> Point2 { return {-a.x, -a.y}; }
constexpr auto operator*(double s, Point2 a) -> Point2 { return {s * a.x, s * a.y}; }
constexpr auto operator*(Point2 a, double s) -> Point2 { return {s * a.x, s * a.y}; }
constexpr auto operator/(Point2 a, double s) -> Point2 { return {a.x / s, a.y / s}; }
constexpr auto operator+=(Point2& a, Point2 b) -> Point2& {
  a.x += b.x;
  a.y += b.y;
  return a;
}

constexpr auto dot(Point2 a, Point2 b) -> double { return a.x * b.x + a.y * b.y; }
constexpr auto cross(Point2 a, Point2 b) -> double { return a.x * b.y - a.y * b.x; }
inline auto norm(Point2 a) -> double { return std::hypot(a.x, a.y); }
constexpr auto norm2(Point2 a) -> double { return dot(a, a); }
inline auto distance(Point2 a, Point2 b) -> double { return norm(a - b); }
inline auto normalized(Point2 a) -> Point2 { return a / norm(a); }
/// Counterclockwise rotation by pi/2.
constexpr auto rot90(Point2 a) -> Point2 { return {-a.y, a.x}; }
inline auto rotated(Point2 a, double angle) -> Point2 {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline auto angle_of(Point2 a) -> double { return std::atan2(a.y, a.x); }

/// Ordered node sequence. A closed polyline stores each node once; the edge
/// from the last node back to the first is implicit.
struct Polyline {
  std::vector<Point2> points;
  bool closed = false;

  [[nodiscard]] auto size() const noexcept -> std::size_t { return points.size(); }
  [[nodiscard]] auto edge_count() const noexcept -> std::size_t {
    if (points.size() < 2) return 0;
    return closed ? points.size() : points.size() - 1;
  }
  [[nodiscard]] auto edge_start(std::size_t e) const -> Point2 { return points[e]; }
  [[nodiscard]] auto edge_end(std::size_t e) const -> Point2 {
    return points[(e + 1) % points.size()];
  }
};

struct CurveFrame {
  std::vector<double> s;    // cumulative arclength at each node
  std::vector<Point2> tau;  // unit tangent
  std::vector<Point2> nu;   // rot90(tau)
  std::vector<double> k;    // signed curvature, positive when turning left
  std::vector<double> ds;   // dual length: half of the adjacent edges
};

struct Segment {
  Point2 a;
  Point2 b;
};

struct IntersectingPair {
  std::size_t first;
  std::size_t second;
};

/// Tangent and curvature of the parabola through three nodes, evaluated at the
/// node `at` (0, 1 or 2).
struct ParabolaFit {
  Point2 tangent;
  double curvature = 0.0;
  Point2 first;   // d/ds at the evaluation node
  Point2 second;  // d2/ds2 (constant along the parabola)
};
auto parabola_fit(Point2 p0, Point2 p1, Point2 p2, int at) -> ParabolaFit;

/// Throws DegenerateEdge if an edge is shorter than 1e-14 of the total length.
auto frame(const Polyline& curve) -> CurveFrame;

auto length(const Polyline& curve) -> double;
auto edge_lengths(const Polyline& curve) -> std::vector<double>;

/// Shoelace sum over the ring `pts` (closing edge implied); positive when
/// counterclockwise.
auto signed_area(std::span<const Point2> pts) -> double;
auto centroid(std::span<const Point2> pts) -> Point2;

/// Absolute enclosed area of a simple closed polyline. Throws NotClosed or
/// SelfIntersecting.
auto enclosed_area(const Polyline& loop) -> double;

/// n nodes on the input polyline with equal chords between neighbours.
/// Open curves keep both endpoints bit-exactly; closed curves start at node 0.
auto resample(const Polyline& curve, std::size_t n) -> Polyline;

auto point_segment_distance(Point2 p, Point2 a, Point2 b) -> double;
auto segments(const Polyline& curve) -> std::vector<Segment>;

/// Symmetric Hausdorff distance between two segment sets, measured from the
/// vertices of each set to the segments of the other.
auto hausdorff_distance(std::span<const Segment> a, std::span<const Segment> b) -> double;
auto polyline_distance(const Polyline& a, const Polyline& b) -> double;

/// Sign of the orientation of (a, b, c): +1 counterclockwise, -1 clockwise,
/// 0 collinear. Exact for all finite double inputs.
auto orient2d(Point2 a, Point2 b, Point2 c) -> int;
auto segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) -> bool;

/// All intersecting pairs among `edges`, skipping pairs that share an endpoint.
auto segments_intersect_scan(std::span<const Segment> edges) -> std::vector<IntersectingPair>;
auto segments_intersect_scan(std::span<const Polyline> curves) -> std::vector<IntersectingPair>;

}  // namespace spoonflow
