#pragma once

// Spoon-shaped networks: a loop and a handle meeting at a triple junction,
// with the handle pinned on the boundary of a convex domain.

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "spoonflow/geometry.hpp"

namespace spoonflow {

struct Disc {
  Point2 center;
  double radius = 1.0;
};

struct ConvexPolygon {
  std::vector<Point2> vertices;  // counterclockwise after construction
};

class ConvexDomain {
 public:
  ConvexDomain() = default;
  explicit ConvexDomain(Disc disc);
  /// Throws InvalidArgument unless the vertices form a strictly convex polygon.
  explicit ConvexDomain(ConvexPolygon polygon);

  [[nodiscard]] auto is_disc() const -> bool { return std::holds_alternative<Disc>(shape_); }
  [[nodiscard]] auto disc() const -> const Disc& { return std::get<Disc>(shape_); }
  [[nodiscard]] auto polygon() const -> const ConvexPolygon& { return std::get<ConvexPolygon>(shape_); }

  /// Positive outside, negative inside, zero on the boundary.
  [[nodiscard]] auto signed_distance(Point2 p) const -> double;
  [[nodiscard]] auto diameter() const -> double;
  /// Membership in the closure, with a relative rounding allowance of 1e-12.
  [[nodiscard]] auto contains(Point2 p) const -> bool;
  /// Closed outline for rendering and containment plots.
  [[nodiscard]] auto outline(std::size_t samples = 256) const -> Polyline;

 private:
  std::variant<Disc, ConvexPolygon> shape_{Disc{}};
};

/// The loop is stored open, from the junction around and back to the
/// junction, so its first and last nodes both equal the junction. The handle
/// runs from the junction to the pinned endpoint.
struct SpoonNetwork {
  Polyline loop;
  Polyline handle;
  ConvexDomain domain;

  [[nodiscard]] auto junction() const -> Point2 { return loop.points.front(); }
  [[nodiscard]] auto endpoint() const -> Point2 { return handle.points.back(); }
  [[nodiscard]] auto curves() const -> std::array<Polyline, 2> { return {loop, handle}; }
  void set_junction(Point2 o) {
    loop.points.front() = o;
    loop.points.back()  = o;
    handle.points.front() = o;
  }
};

auto network_segments(const SpoonNetwork& net) -> std::vector<Segment>;
auto loop_area(const SpoonNetwork& net) -> double;
auto loop_centroid(const SpoonNetwork& net) -> Point2;

struct ValidationReport {
  std::vector<std::string> failures;
  [[nodiscard]] auto ok() const -> bool { return failures.empty(); }
};

/// Checks every structural invariant; the report names each failure.
auto validate(const SpoonNetwork& net) -> ValidationReport;
/// Throws InvalidNetwork with the joined failure list.
void require_valid(const SpoonNetwork& net);

// ---- junction algebra --------------------------------------------------------------------------

/// k1_0 = k^1(0), k1_1 = k^1(1), k2_0 = k^2(0).
struct EndCurvatures {
  double k1_0 = 0.0;
  double k1_1 = 0.0;
  double k2_0 = 0.0;
};

struct TangentialSpeeds {
  double lam1_0 = 0.0;
  double lam1_1 = 0.0;
  double lam2_0 = 0.0;
};

auto junction_speeds_from_curvatures(const EndCurvatures& k) -> TangentialSpeeds;
auto junction_curvatures_from_speeds(const TangentialSpeeds& lam) -> EndCurvatures;
/// Least-squares projection onto k1_0 - k1_1 + k2_0 = 0.
auto project_curvatures(const EndCurvatures& k) -> EndCurvatures;

struct JunctionState {
  EndCurvatures k;
  TangentialSpeeds lam;
  Point2 t1_0;  // loop tangent leaving the junction
  Point2 t1_1;  // loop tangent arriving at the junction
  Point2 t2_0;  // handle tangent leaving the junction
};

/// One-sided parabola estimates at the three curve ends; speeds from the raw
/// (unprojected) curvatures.
auto junction_state(const SpoonNetwork& net) -> JunctionState;

/// The velocity lam^i tau^i + k^i nu^i of each of the three curve ends.
auto end_velocities(const JunctionState& js) -> std::array<Point2, 3>;

// ---- validation of boundary conditions --------------------------------------------------------

struct AngleReport {
  double residual = 0.0;               // |t1_0 - t1_1 + t2_0|
  std::array<double, 3> angles{};      // pairwise angles between outgoing directions
  double max_deviation = 0.0;          // max |angle - 2pi/3|
  bool pass = false;
};

inline constexpr double kAngleAcceptTolerance = 1e-2;
inline constexpr double kAngleRuntimeAlarm    = 5e-2;

auto check_angle_condition(const SpoonNetwork& net, double tol = kAngleAcceptTolerance) -> AngleReport;

struct CompatibilityReport {
  double endpoint_residual = 0.0;  // |gamma_xx| / |gamma_x|^2 at the pinned endpoint
  double junction_residual = 0.0;  // max pairwise difference of the three end values of gamma_xx / |gamma_x|^2
  bool compatible = false;
};

auto check_compatibility_order2(const SpoonNetwork& net, double tol = 1e-6) -> CompatibilityReport;

auto check_containment(const SpoonNetwork& net) -> bool;

/// Rotates the three nodes adjacent to the junction about it (distances kept)
/// until the end tangents form the nearest exact 120 degree triple. Throws
/// JunctionDegenerate when adjacent nodes coincide.
void impose_junction_angles(SpoonNetwork& net);

}  // namespace spoonflow
