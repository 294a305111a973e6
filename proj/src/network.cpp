#include "spoonflow/network.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include <spdlog/spdlog.h>

#include "spoonflow/error.hpp"

namespace spoonflow {

namespace {
constexpr double kSqrt3       = std::numbers::sqrt3;
constexpr double kTwoThirdsPi = 2.0 * std::numbers::pi / 3.0;

auto wrap_angle(double a) -> double {
  a = std::fmod(a + std::numbers::pi, 2.0 * std::numbers::pi);
  if (a < 0) a += 2.0 * std::numbers::pi;
  return a - std::numbers::pi;
}

auto angle_between(Point2 a, Point2 b) -> double {
  return std::acos(std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0));
}
}  // namespace

// ---- domain ------------------------------------------------------------------------------------
ConvexDomain::ConvexDomain(Disc disc) : shape_(disc) {
  if (!(disc.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "disc radius must be positive");
}

ConvexDomain::ConvexDomain(ConvexPolygon polygon) {
  auto& v = polygon.vertices;
  if (v.size() < 3) throw Error(ErrorKind::InvalidArgument, "polygon domain needs at least 3 vertices");
  if (signed_area(v) < 0) std::reverse(v.begin(), v.end());
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e0 = v[(i + 1) % n] - v[i];
    const Point2 e1 = v[(i + 2) % n] - v[(i + 1) % n];
    if (!(cross(e0, e1) > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "polygon domain is not strictly convex");
    }
  }
  shape_ = std::move(polygon);
}

auto ConvexDomain::signed_distance(Point2 p) const -> double {
  if (const auto* d = std::get_if<Disc>(&shape_)) return distance(p, d->center) - d->radius;
  const auto& v = std::get<ConvexPolygon>(shape_).vertices;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % v.size()];
    const Point2 outward = rot90(b - a) * -1.0;  // ccw polygon: outward is clockwise normal
    worst = std::max(worst, dot(p - a, outward) / norm(outward));
  }
  return worst;
}

auto ConvexDomain::diameter() const -> double {
  if (const auto* d = std::get_if<Disc>(&shape_)) return 2.0 * d->radius;
  const auto& v = std::get<ConvexPolygon>(shape_).vertices;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, distance(v[i], v[j]));
  return best;
}

auto ConvexDomain::contains(Point2 p) const -> bool {
  return signed_distance(p) <= 1e-12 * diameter();
}

auto ConvexDomain::outline(std::size_t samples) const -> Polyline {
  Polyline out;
  out.closed = true;
  if (const auto* d = std::get_if<Disc>(&shape_)) {
    for (std::size_t i = 0; i < samples; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
      out.points.push_back(d->center + d->radius * Point2{std::cos(a), std::sin(a)});
    }
  } else {
    out.points = std::get<ConvexPolygon>(shape_).vertices;
  }
  return out;
}

// ---- network -----------------------------------------------------------------------------------
auto network_segments(const SpoonNetwork& net) -> std::vector<Segment> {
  auto out = segments(net.loop);
  const auto h = segments(net.handle);
  out.insert(out.end(), h.begin(), h.end());
  return out;
}

auto loop_area(const SpoonNetwork& net) -> double {
  return std::abs(signed_area(net.loop.points));
}

auto loop_centroid(const SpoonNetwork& net) -> Point2 {
  const auto& p = net.loop.points;
  return centroid(std::span<const Point2>(p.data(), p.size() - 1));
}

auto validate(const SpoonNetwork& net) -> ValidationReport {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.failures.push_back(std::move(msg)); };

  if (net.loop.closed) fail("loop must be stored open (junction repeated at both ends)");
  if (net.handle.closed) fail("handle must be an open polyline");
  if (net.loop.size() < 4) fail("loop needs at least 4 stored nodes");
  if (net.handle.size() < 3) fail("handle needs at least 3 nodes");
  if (!report.ok()) return report;

  const Point2 o = net.loop.points.front();
  if (!(net.loop.points.back() == o)) fail("loop does not end at the junction");
  if (!(net.handle.points.front() == o)) fail("handle does not start at the junction");

  for (const auto* curve : {&net.loop, &net.handle}) {
    const auto edges = edge_lengths(*curve);
    double total = 0.0;
    for (double e : edges) total += e;
    for (double e : edges) {
      if (!(e > 1e-14 * total)) {
        fail(std::string(curve == &net.loop ? "loop" : "handle") + " has a degenerate edge");
        break;
      }
    }
  }

  const double diam = net.domain.diameter();
  if (std::abs(net.domain.signed_distance(net.endpoint())) > 1e-9 * diam) {
    fail("endpoint is not on the domain boundary");
  }
  if (!(net.domain.signed_distance(o) < -1e-9 * diam)) fail("junction is not interior to the domain");
  if (!check_containment(net)) fail("network leaves the domain");
  if (!segments_intersect_scan(network_segments(net)).empty()) fail("network is not embedded");
  return report;
}

void require_valid(const SpoonNetwork& net) {
  const auto report = validate(net);
  if (report.ok()) return;
  std::ostringstream msg;
  msg << "invalid spoon network:";
  for (const auto& f : report.failures) msg << " [" << f << "]";
  throw Error(ErrorKind::InvalidNetwork, msg.str());
}

// ---- junction algebra --------------------------------------------------------------------------
auto junction_speeds_from_curvatures(const EndCurvatures& k) -> TangentialSpeeds {
  const double violation = k.k1_0 - k.k1_1 + k.k2_0;
  const double scale = std::max({1.0, std::abs(k.k1_0), std::abs(k.k1_1), std::abs(k.k2_0)});
  if (std::abs(violation) > 1e-8 * scale) {
    spdlog::debug("end curvatures violate k1_0 - k1_1 + k2_0 = 0 by {:.3e}", violation);
  }
  return {(k.k1_1 + k.k2_0) / kSqrt3, (k.k2_0 - k.k1_0) / kSqrt3, (-k.k1_0 - k.k1_1) / kSqrt3};
}

auto junction_curvatures_from_speeds(const TangentialSpeeds& lam) -> EndCurvatures {
  return {(-lam.lam1_1 - lam.lam2_0) / kSqrt3, (lam.lam1_0 - lam.lam2_0) / kSqrt3,
          (lam.lam1_0 + lam.lam1_1) / kSqrt3};
}

auto project_curvatures(const EndCurvatures& k) -> EndCurvatures {
  const double c = (k.k1_0 - k.k1_1 + k.k2_0) / 3.0;
  return {k.k1_0 - c, k.k1_1 + c, k.k2_0 - c};
}

auto junction_state(const SpoonNetwork& net) -> JunctionState {
  const auto& l = net.loop.points;
  const auto& h = net.handle.points;
  const std::size_t n = l.size();
  const auto start = parabola_fit(l[0], l[1], l[2], 0);
  const auto end   = parabola_fit(l[n - 3], l[n - 2], l[n - 1], 2);
  const auto hand  = parabola_fit(h[0], h[1], h[2], 0);
  JunctionState js;
  js.k    = {start.curvature, end.curvature, hand.curvature};
  js.t1_0 = start.tangent;
  js.t1_1 = end.tangent;
  js.t2_0 = hand.tangent;
  js.lam  = junction_speeds_from_curvatures(js.k);
  return js;
}

auto end_velocities(const JunctionState& js) -> std::array<Point2, 3> {
  return {js.lam.lam1_0 * js.t1_0 + js.k.k1_0 * rot90(js.t1_0),
          js.lam.lam1_1 * js.t1_1 + js.k.k1_1 * rot90(js.t1_1),
          js.lam.lam2_0 * js.t2_0 + js.k.k2_0 * rot90(js.t2_0)};
}

// ---- checks ------------------------------------------------------------------------------------
auto check_angle_condition(const SpoonNetwork& net, double tol) -> AngleReport {
  const auto js = junction_state(net);
  const std::array<Point2, 3> out{js.t1_0, -js.t1_1, js.t2_0};
  AngleReport r;
  r.residual = norm(js.t1_0 - js.t1_1 + js.t2_0);
  for (std::size_t i = 0; i < 3; ++i) {
    r.angles[i] = angle_between(out[i], out[(i + 1) % 3]);
    r.max_deviation = std::max(r.max_deviation, std::abs(r.angles[i] - kTwoThirdsPi));
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

namespace {
// One-sided gamma_xx / |gamma_x|^2 at an end, in the node-index parameter.
auto end_acceleration(Point2 end, Point2 next, Point2 after) -> Point2 {
  return (end - 2.0 * next + after) / norm2(next - end);
}
}  // namespace

auto check_compatibility_order2(const SpoonNetwork& net, double tol) -> CompatibilityReport {
  const auto& l = net.loop.points;
  const auto& h = net.handle.points;
  const std::size_t n = l.size();
  const std::size_t m = h.size();
  const std::array<Point2, 3> w{end_acceleration(l[0], l[1], l[2]), end_acceleration(l[n - 1], l[n - 2], l[n - 3]),
                                end_acceleration(h[0], h[1], h[2])};
  CompatibilityReport r;
  r.endpoint_residual = norm(end_acceleration(h[m - 1], h[m - 2], h[m - 3]));
  for (std::size_t i = 0; i < 3; ++i)
    r.junction_residual = std::max(r.junction_residual, distance(w[i], w[(i + 1) % 3]));
  r.compatible = r.endpoint_residual <= tol && r.junction_residual <= tol;
  if (!r.compatible) {
    spdlog::info("incompatible initial datum: endpoint residual {:.3e}, junction residual {:.3e}",
                 r.endpoint_residual, r.junction_residual);
  }
  return r;
}

auto check_containment(const SpoonNetwork& net) -> bool {
  for (const auto* curve : {&net.loop, &net.handle})
    for (const auto& p : curve->points)
      if (!net.domain.contains(p)) return false;
  return true;
}

// ---- angle restoration -------------------------------------------------------------------------
namespace {

struct EndHandle {
  Point2* adjacent;  // node rotated about the junction
  Point2* next;      // second node from the junction
  bool reversed;     // tangent measured against storage order
};

auto outgoing_tangent(Point2 o, Point2 adjacent, Point2 next) -> ParabolaFit {
  return parabola_fit(o, adjacent, next, 0);
}

}  // namespace

void impose_junction_angles(SpoonNetwork& net) {
  auto& l = net.loop.points;
  auto& h = net.handle.points;
  const std::size_t n = l.size();
  const Point2 o = l.front();

  std::array<EndHandle, 3> ends{EndHandle{&l[1], &l[2], false}, EndHandle{&l[n - 2], &l[n - 3], true},
                                EndHandle{&h[1], &h[2], false}};
  for (std::size_t i = 0; i < 3; ++i) {
    if (*ends[i].adjacent == o) throw Error(ErrorKind::JunctionDegenerate, "adjacent node coincides with the junction");
    for (std::size_t j = i + 1; j < 3; ++j)
      if (*ends[i].adjacent == *ends[j].adjacent)
        throw Error(ErrorKind::JunctionDegenerate, "two junction-adjacent nodes coincide");
  }

  std::array<double, 3> theta{};
  for (std::size_t i = 0; i < 3; ++i)
    theta[i] = angle_of(outgoing_tangent(o, *ends[i].adjacent, *ends[i].next).tangent);

  // Preserve the current cyclic order: end 1 sits either +120 or -120 degrees from end 0.
  const double rel1 = std::fmod(theta[1] - theta[0] + 4.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  const double rel2 = std::fmod(theta[2] - theta[0] + 4.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  const double sign = rel1 < rel2 ? 1.0 : -1.0;
  const std::array<double, 3> offset{0.0, sign * kTwoThirdsPi, -sign * kTwoThirdsPi};

  Point2 mean;
  for (std::size_t i = 0; i < 3; ++i) mean += Point2{std::cos(theta[i] - offset[i]), std::sin(theta[i] - offset[i])};
  const double phi = angle_of(mean);

  for (std::size_t i = 0; i < 3; ++i) {
    const double target = phi + offset[i];
    for (int iter = 0; iter < 50; ++iter) {
      const auto fit = outgoing_tangent(o, *ends[i].adjacent, *ends[i].next);
      const double miss = wrap_angle(target - angle_of(fit.tangent));
      if (std::abs(miss) < 1e-15) break;
      // Rotating the adjacent node by d turns the end tangent by about d * (h1 + h2) / h2.
      const double h1 = distance(o, *ends[i].adjacent);
      const double h2 = distance(*ends[i].adjacent, *ends[i].next);
      const double gain = (h1 + h2) / h2;
      *ends[i].adjacent = o + rotated(*ends[i].adjacent - o, miss / gain);
    }
  }
}

}  // namespace spoonflow
