#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spoonflow/error.hpp"
#include "spoonflow/flow.hpp"
#include "spoonflow/generators.hpp"
#include "spoonflow/shrinker.hpp"
#include "support.hpp"

using namespace spoonflow;
using std::numbers::pi;

namespace {

auto mean_radius(const Polyline& c) -> double {
  double r = 0.0;
  for (const auto& p : c.points) r += norm(p);
  return r / static_cast<double>(c.size());
}

}  // namespace

TEST_CASE("shrinking circle follows sqrt(1 - 2t)") {
  auto c = test::regular_polygon(256, 1.0);
  double t = 0.0;
  double worst = 0.0;
  while (t < 0.45) {
    t += step_closed(c, 0.2);
    worst = std::max(worst, std::abs(mean_radius(c) - std::sqrt(1.0 - 2.0 * t)));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("straight curve with fixed ends is stationary") {
  auto c = test::straight({0, 0}, {1, 0.5}, 32);
  const auto before = c.points;
  for (int i = 0; i < 100; ++i) step_open_fixed(c, 0.2);
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(distance(c.points[i], before[i]) < 1e-12);
}

TEST_CASE("one spoon step moves the area at the rate -5pi/3") {
  FlowConfig cfg;
  cfg.n_loop = 512;
  cfg.n_handle = 128;
  FlowState st{generate_initial("circle_spoon", {}), 0.0, 0, 0.0};
  regrid(st.net, cfg);
  for (int i = 0; i < 200; ++i) st = step(st, cfg);
  const double a0 = loop_area(st.net);
  const auto next = step(st, cfg);
  CHECK(next.dt_last > 0.0);
  CHECK(next.t == doctest::Approx(st.t + next.dt_last));
  const double rate = (loop_area(next.net) - a0) / next.dt_last;
  CHECK(std::abs(rate / (-5.0 * pi / 3.0) - 1.0) < 0.1);
  CHECK(check_angle_condition(next.net, 1e-9).pass);
  CHECK(next.net.endpoint() == st.net.endpoint());
}

TEST_CASE("step respects the cap and rejects collapsing edges") {
  FlowConfig cfg;
  FlowState st{generate_initial("circle_spoon", {}), 0.0, 0, 0.0};
  const auto capped = step(st, cfg, 1e-9);
  CHECK(capped.dt_last == 1e-9);

  FlowConfig strict = cfg;
  strict.min_edge_factor = 0.999;
  FlowState rough{generate_initial("ellipse_spoon", {}), 0.0, 0, 0.0};
  CHECK_THROWS_AS(step(rough, strict), Error);
}

TEST_CASE("junction update keeps a flat Y in place") {
  SpoonNetwork net;
  const double s3 = std::sqrt(3.0);
  const Point2 up{0.5, s3 / 2};
  const Point2 down{0.5, -s3 / 2};
  for (int i = 0; i <= 10; ++i) net.loop.points.push_back((i / 10.0) * down);
  net.loop.points.push_back(down + Point2{0.5, 0});
  net.loop.points.push_back(up + Point2{0.5, 0});
  for (int i = 10; i >= 0; --i) net.loop.points.push_back((i / 10.0) * up);
  net.loop.points.back() = {0, 0};
  net.handle = test::straight({0, 0}, {-1, 0}, 10);
  net.domain = ConvexDomain(Disc{{2, 0}, 3});
  const Point2 o = junction_update(net, 1e-3);
  CHECK(norm(o) < 1e-12);
}

TEST_CASE("the shrinker junction stays on its symmetry axis") {
  const auto profile = shoot_brakke_spoon();
  auto net = profile_to_network(profile, 3.0, 64);
  FlowConfig cfg;
  FlowState st{net, 0.0, 0, 0.0};
  regrid(st.net, cfg);
  for (int i = 0; i < 500; ++i) st = step(st, cfg);
  CHECK(std::abs(st.net.junction().y) < 1e-4);
}

TEST_CASE("short run stops at the time limit with the area law") {
  FlowConfig cfg;
  cfg.t_max = 0.01;
  cfg.monitor.compute_E = false;
  const auto initial = generate_initial("circle_spoon", {});
  const auto r = run(initial, cfg);
  CHECK(r.stop.kind == StopKind::TimeLimit);
  CHECK(r.stop.t == doctest::Approx(0.01).epsilon(1e-12));
  const double drop = r.initial_area - r.stop.area;
  CHECK(drop == doctest::Approx(0.01 * 5.0 * pi / 3.0).epsilon(0.05));
  REQUIRE(r.monitors.size() >= 2);
  CHECK(r.monitors.front().t == 0.0);
  CHECK(r.monitors.back().t == r.stop.t);
  CHECK(r.snapshots.size() == r.monitors.size());
}

TEST_CASE("the reported stop reason matches the quantity that triggered it") {
  FlowConfig cfg;
  cfg.monitor.compute_E = false;
  cfg.monitor_every = 1000;
  GeneratorParams p;
  p.a = 0.6;
  p.b = 0.3;
  p.handle = 0.05;
  p.domain_radius = 2.0;
  const auto r = run(generate_initial("ellipse_spoon", p), cfg);
  switch (r.stop.kind) {
    case StopKind::AreaVanishing:
      CHECK(r.stop.value == r.stop.area);
      CHECK(r.stop.value < r.stop.threshold);
      break;
    case StopKind::HandleVanishing:
      CHECK(r.stop.value == r.stop.handle_length);
      CHECK(r.stop.value < r.stop.threshold);
      break;
    case StopKind::CurvatureBlowup: CHECK(r.stop.value >= 0.0); break;
    case StopKind::TimeLimit: CHECK(r.stop.t == cfg.t_max); break;
  }
}

TEST_CASE("run validates its inputs") {
  FlowConfig bad;
  bad.cfl = 0.7;
  CHECK_THROWS_AS(run(generate_initial("circle_spoon", {}), bad), Error);
  bad = {};
  bad.n_loop = 8;
  CHECK_THROWS_AS(bad.validate(), Error);

  auto broken = generate_initial("circle_spoon", {});
  broken.handle.points.back().x += 0.5;
  try {
    (void)run(broken, {});
    FAIL("expected InvalidNetwork");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidNetwork);
  }
}

TEST_CASE("stop kind names round trip") {
  for (auto k : {StopKind::AreaVanishing, StopKind::HandleVanishing, StopKind::CurvatureBlowup, StopKind::TimeLimit})
    CHECK(stop_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(stop_kind_from_string("Nope"), Error);
}
