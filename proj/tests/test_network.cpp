#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "spoonflow/error.hpp"
#include "spoonflow/flow.hpp"
#include "spoonflow/generators.hpp"
#include "spoonflow/network.hpp"
#include "support.hpp"

using namespace spoonflow;
using std::numbers::pi;

namespace {

const double s3 = std::sqrt(3.0);

// Loop with a right-angle corner at O opening toward +x, handle along -x.
auto square_corner_spoon() -> SpoonNetwork {
  SpoonNetwork net;
  const Point2 corners[] = {{0, 0}, {1, -1}, {2, 0}, {1, 1}, {0, 0}};
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 8; ++i) net.loop.points.push_back(corners[c] + (i / 8.0) * (corners[c + 1] - corners[c]));
  net.loop.points.push_back({0, 0});
  net.handle = test::straight({0, 0}, {-1, 0}, 8);
  net.domain = ConvexDomain(Disc{{3, 0}, 4});
  return net;
}

// Three straight arms at exact 120 degrees: a thin loop made of two
// straight arms closed far away, and a straight handle.
auto flat_y() -> SpoonNetwork {
  SpoonNetwork net;
  const Point2 up{0.5, s3 / 2};
  const Point2 down{0.5, -s3 / 2};
  for (int i = 0; i <= 10; ++i) net.loop.points.push_back((i / 10.0) * down);
  net.loop.points.push_back(down + Point2{0.5, 0});
  net.loop.points.push_back(up + Point2{0.5, 0});
  for (int i = 10; i >= 0; --i) net.loop.points.push_back((i / 10.0) * up);
  net.loop.points.back() = {0, 0};
  net.handle = test::straight({0, 0}, {-1, 0}, 10);
  net.domain = ConvexDomain(Disc{{2, 0}, 3});
  return net;
}

}  // namespace

TEST_CASE("tangential speeds from curvatures") {
  auto l = junction_speeds_from_curvatures({0, 0, 0});
  CHECK(l.lam1_0 == 0.0);
  CHECK(l.lam1_1 == 0.0);
  CHECK(l.lam2_0 == 0.0);

  l = junction_speeds_from_curvatures({1, 1, 0});
  CHECK(l.lam1_0 == doctest::Approx(1 / s3));
  CHECK(l.lam1_1 == doctest::Approx(-1 / s3));
  CHECK(l.lam2_0 == doctest::Approx(-2 / s3));

  l = junction_speeds_from_curvatures({1, 2, 1});
  CHECK(l.lam1_0 == doctest::Approx(s3));
  CHECK(l.lam1_1 == doctest::Approx(0.0));
  CHECK(l.lam2_0 == doctest::Approx(-s3));
  CHECK(std::abs(l.lam1_0 - l.lam1_1 + l.lam2_0) < 1e-15);
}

TEST_CASE("curvatures from tangential speeds") {
  auto k = junction_curvatures_from_speeds({0, 0, 0});
  CHECK(k.k1_0 == 0.0);
  k = junction_curvatures_from_speeds({1 / s3, -1 / s3, -2 / s3});
  CHECK(k.k1_0 == doctest::Approx(1.0));
  CHECK(k.k1_1 == doctest::Approx(1.0));
  CHECK(k.k2_0 == doctest::Approx(0.0));
}

TEST_CASE("junction algebra round trip and linear identities on random admissible triples") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    const EndCurvatures k{a, b, b - a};
    const auto lam = junction_speeds_from_curvatures(k);
    CHECK(std::abs(lam.lam1_0 - lam.lam1_1 + lam.lam2_0) < 1e-12);
    const auto back = junction_curvatures_from_speeds(lam);
    CHECK(std::abs(back.k1_0 - k.k1_0) < 1e-12);
    CHECK(std::abs(back.k1_1 - k.k1_1) < 1e-12);
    CHECK(std::abs(back.k2_0 - k.k2_0) < 1e-12);

    const TangentialSpeeds l{a, b, b - a};
    const auto kk = junction_curvatures_from_speeds(l);
    CHECK(std::abs(kk.k1_0 - kk.k1_1 + kk.k2_0) < 1e-12);
  }
}

TEST_CASE("projection lands on the admissible plane and fixes admissible triples") {
  const auto p = project_curvatures({1.0, 0.0, 2.0});
  CHECK(std::abs(p.k1_0 - p.k1_1 + p.k2_0) < 1e-15);
  const auto q = project_curvatures({1.0, 3.0, 2.0});
  CHECK(q.k1_0 == doctest::Approx(1.0));
  CHECK(q.k1_1 == doctest::Approx(3.0));
  CHECK(q.k2_0 == doctest::Approx(2.0));
}

TEST_CASE("angle condition") {
  const auto y = check_angle_condition(flat_y(), 1e-12);
  CHECK(y.pass);
  CHECK(y.residual < 1e-12);

  const auto corner = check_angle_condition(square_corner_spoon());
  CHECK_FALSE(corner.pass);
  CHECK(corner.max_deviation == doctest::Approx(pi / 6).epsilon(1e-12));
}

TEST_CASE("compatibility of order two") {
  auto net = generate_initial("circle_spoon", {});
  const auto r = check_compatibility_order2(net);
  CHECK(r.endpoint_residual < 1e-12);
  CHECK(r.junction_residual > 1e-3);
  CHECK_FALSE(r.compatible);

  // Parabolic smoothing reduces the junction mismatch.
  FlowConfig cfg;
  FlowState st{net, 0.0, 0, 0.0};
  regrid(st.net, cfg);
  const double before = check_compatibility_order2(st.net).junction_residual;
  for (int i = 0; i < 10; ++i) st = step(st, cfg);
  CHECK(check_compatibility_order2(st.net).junction_residual < before);
}

TEST_CASE("containment") {
  auto net = generate_initial("circle_spoon", {});
  CHECK(check_containment(net));
  CHECK(net.domain.signed_distance(net.endpoint()) == doctest::Approx(0.0).epsilon(1e-12));
  const auto& d = net.domain.disc();
  auto out = net;
  out.loop.points[5] = d.center + (d.radius + 1e-3) * normalized(out.loop.points[5] - d.center);
  CHECK_FALSE(check_containment(out));
}

TEST_CASE("convex domain") {
  CHECK_THROWS_AS(ConvexDomain(ConvexPolygon{{{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}}), Error);
  const ConvexDomain cw(ConvexPolygon{{{0, 0}, {0, 2}, {2, 2}, {2, 0}}});
  CHECK(cw.signed_distance({1, 1}) == doctest::Approx(-1.0));
  CHECK(cw.signed_distance({3, 1}) == doctest::Approx(1.0));
  CHECK(cw.contains({2, 1}));
  CHECK(cw.diameter() == doctest::Approx(std::sqrt(8.0)));
  const ConvexDomain disc(Disc{{1, 1}, 2});
  CHECK(disc.signed_distance({1, 1}) == doctest::Approx(-2.0));
  CHECK(disc.diameter() == doctest::Approx(4.0));
}

TEST_CASE("validation names each failure") {
  auto net = generate_initial("circle_spoon", {});
  CHECK(validate(net).ok());
  CHECK(segments_intersect_scan(network_segments(net)).empty());

  auto moved = net;
  moved.handle.points.back() = moved.handle.points.back() + Point2{0.1, 0.0};
  CHECK_FALSE(validate(moved).ok());

  auto crossing = net;
  crossing.handle.points[3] = crossing.loop.points[crossing.loop.size() / 2] + Point2{0.0, 0.3};
  const auto report = validate(crossing);
  CHECK_FALSE(report.ok());
  try {
    require_valid(crossing);
    FAIL("expected InvalidNetwork");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidNetwork);
  }
}

TEST_CASE("imposing the junction angles keeps distances and orders the tangents") {
  auto net = square_corner_spoon();
  const Point2 o = net.junction();
  const double d1 = distance(o, net.loop.points[1]);
  const double d2 = distance(o, net.loop.points[net.loop.size() - 2]);
  const double d3 = distance(o, net.handle.points[1]);
  impose_junction_angles(net);
  CHECK(distance(o, net.loop.points[1]) == doctest::Approx(d1).epsilon(1e-14));
  CHECK(distance(o, net.loop.points[net.loop.size() - 2]) == doctest::Approx(d2).epsilon(1e-14));
  CHECK(distance(o, net.handle.points[1]) == doctest::Approx(d3).epsilon(1e-14));
  CHECK(check_angle_condition(net, 1e-9).pass);
  // The loop still leaves downward and returns from above.
  CHECK(net.loop.points[1].y < 0.0);
  CHECK(net.loop.points[net.loop.size() - 2].y > 0.0);
}

TEST_CASE("junction velocity vanishes on a flat Y") {
  const auto net = flat_y();
  CHECK(norm(junction_velocity(net)) < 1e-12);
}

TEST_CASE("the three end velocities agree after projection on a smooth spoon") {
  // Arcs of three circles meeting at 120 degrees with admissible curvatures.
  const auto net = generate_initial("circle_spoon", {1.0, 1.0, 3.0, 1.5, 0.75, 1.5, 0.5, 1024, 256});
  const auto js = junction_state(net);
  EndCurvatures k = project_curvatures(js.k);
  JunctionState projected = js;
  projected.k = k;
  projected.lam = junction_speeds_from_curvatures(k);
  const auto w = end_velocities(projected);
  CHECK(distance(w[0], w[1]) < 1e-9);
  CHECK(distance(w[1], w[2]) < 1e-9);
}
