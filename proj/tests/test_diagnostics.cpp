#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "spoonflow/diagnostics.hpp"
#include "spoonflow/error.hpp"
#include "spoonflow/flow.hpp"
#include "spoonflow/generators.hpp"
#include "spoonflow/shrinker.hpp"
#include "support.hpp"

using namespace spoonflow;
using std::numbers::pi;

namespace {

auto polygon_area(std::size_t n) -> double { return 0.5 * static_cast<double>(n) * std::sin(2.0 * pi / n); }

// n uniform nodes on a ray of length `len` from `from` in direction `dir`.
auto ray(Point2 from, Point2 dir, double len, std::size_t n) -> Polyline {
  return test::straight(from, from + len * dir, n);
}

}  // namespace

TEST_CASE("psi") {
  CHECK(psi(pi, pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(psi(2.0, 0.0) == 0.0);
  CHECK(psi(2.0, 0.5) == doctest::Approx(2.0 / pi * std::sin(pi / 4)).epsilon(1e-15));
  CHECK(psi(2.0, 0.5) == doctest::Approx(0.45016).epsilon(1e-5));
}

TEST_CASE("phi on a round loop") {
  const std::size_t n = 256;
  const auto net = test::plain_spoon(1.0, 1.0, n, 32);
  const double A = polygon_area(n);

  const auto self = phi_pair(net, 0, 0);
  CHECK(self.value == doctest::Approx(4.0 * std::sqrt(3.0)).epsilon(1e-15));
  CHECK(self.pair.kind == PairKind::JunctionSelf);
  CHECK(phi_pair(net, 7, 7).value == kInf);

  // Antipodal: the chord is a diameter, each side holds half the polygon.
  const auto anti = phi_pair(net, 32, 32 + n / 2);
  CHECK(anti.pair.kind == PairKind::BothOnLoop);
  CHECK(anti.value == doctest::Approx(4.0 / (A / pi)).epsilon(1e-12));
  CHECK(anti.value == doctest::Approx(4.0).epsilon(1e-3));

  // Quarter turn: the small side is n/4 fan triangles minus the central one.
  const double Ai = 0.25 * static_cast<double>(n) * 0.5 * std::sin(2.0 * pi / n) - 0.5;
  const auto quarter = phi_pair(net, 32, 32 + n / 4);
  CHECK(quarter.value == doctest::Approx(2.0 / psi(A, Ai)).epsilon(1e-12));
  CHECK(quarter.pair.areas.size() == 2);
}

TEST_CASE("phi on a mixed pair near the junction approaches the 120 degree corner value") {
  // The generator's collar is a kink a few nodes wide; a short evolution smooths it.
  FlowConfig cfg;
  cfg.n_loop = 1024;
  cfg.n_handle = 256;
  FlowState st{generate_initial("circle_spoon", {1.0, 1.0, 3.0, 1.5, 0.75, 1.5, 0.5, 1024, 256}), 0.0, 0, 0.0};
  regrid(st.net, cfg);
  while (st.t < 0.01) st = step(st, cfg, 0.01 - st.t);
  const auto& net = st.net;
  const std::size_t nl = net.loop.size() - 1;
  // p on the loop and q on the handle, each one node from O; the region is
  // the triangle O p q.
  const auto v = phi_pair(net, 1, nl);
  const Point2 o = net.junction();
  const Point2 p = net.loop.points[1];
  const Point2 q = net.handle.points[1];
  const double tri = 0.5 * std::abs(cross(p - o, q - o));
  CHECK(v.pair.kind == PairKind::Mixed);
  CHECK(v.value == doctest::Approx(norm2(p - q) / tri).epsilon(1e-9));
  // With legs a, b at 120 degrees: 4 (a^2 + b^2 + ab) / (sqrt(3) ab), equal to 4 sqrt(3) when a = b.
  const double a = distance(p, o);
  const double b = distance(q, o);
  const double corner = 4.0 * (a * a + b * b + a * b) / (std::sqrt(3.0) * a * b);
  CHECK(v.value == doctest::Approx(corner).epsilon(1e-2));
  CHECK(corner >= kFourSqrt3);
}

TEST_CASE("embeddedness measure bounds and similarity invariance") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& name : generator_names()) {
    const auto net = generate_initial(name, {});
    const auto e = embeddedness_measure(net);
    CHECK(e.value > 0.0);
    CHECK(e.value <= kFourSqrt3 + 1e-9);
    for (int trial = 0; trial < 3; ++trial) {
      const auto moved = test::transformed(net, std::exp(u(rng)), pi * u(rng), {5.0 * u(rng), 5.0 * u(rng)});
      CHECK(std::abs(embeddedness_measure(moved).value - e.value) < 1e-10);
    }
  }
}

TEST_CASE("embeddedness measure of a dumbbell shrinks with the neck") {
  GeneratorParams p;
  double previous = kInf;
  for (double neck : {0.5, 0.3, 0.2, 0.1}) {
    p.neck = neck;
    const auto net = generate_initial("dumbbell_spoon", p);
    const double e = embeddedness_measure(net).value;
    // The neck chord over the area is the scale of the minimum.
    const double w = 2.0 * p.b * neck;
    const double estimate = w * w / (loop_area(net) / pi);
    CHECK(e < previous);
    CHECK(e < 2.0 * estimate);
    previous = e;
  }
}

TEST_CASE("the minimizing pair across a narrow neck sees symmetric angles") {
  GeneratorParams p;
  p.neck = 0.15;
  const auto net = generate_initial("dumbbell_spoon", p);
  const auto e = embeddedness_measure(net);
  REQUIRE(e.value < 0.5);
  const auto a = chord_tangent_angles(net, e.p, e.q);
  CHECK(std::abs(a.at_p - (pi - a.at_q)) < 5e-2);
}

TEST_CASE("Gaussian densities of flat cones") {
  const double T = 1.0;
  const double t = 0.75;
  const double sigma = std::sqrt(T - t);
  const double reach = 20.0 * sigma;
  const Point2 x0{0.3, -0.2};
  const std::size_t n = 20000;

  const std::vector<Polyline> line{ray(x0 - Point2{reach, 0}, {1, 0}, 2 * reach, 2 * n)};
  CHECK(std::abs(gaussian_density(line, x0, t, T) - 1.0) < 1e-6);

  const std::vector<Polyline> half{ray(x0, normalized({1, 2}), reach, n)};
  CHECK(std::abs(gaussian_density(half, x0, t, T) - 0.5) < 1e-6);

  std::vector<Polyline> triod;
  for (int i = 0; i < 3; ++i) triod.push_back(ray(x0, rotated({1, 0}, 2 * pi * i / 3 + 0.1), reach, n));
  CHECK(std::abs(gaussian_density(triod, x0, t, T) - 1.5) < 1e-6);

  CHECK_THROWS_AS(gaussian_density(line, x0, T, T), Error);
}

TEST_CASE("the density of a shrinking circle is constant") {
  // Theta = sqrt(2 pi / e) for the circle of radius sqrt(2 (T - t)) about its center.
  auto c = test::regular_polygon(512, 1.0);
  const double T = 0.5;
  double t = 0.0;
  const double expected = std::sqrt(2.0 * pi / std::exp(1.0));
  while (t < 0.4) {
    const std::vector<Polyline> curves{c};
    CHECK(std::abs(gaussian_density(curves, {0, 0}, t, T) - expected) < 2e-3);
    for (int i = 0; i < 200; ++i) t += step_closed(c, 0.2);
  }
}

TEST_CASE("dL/dt of a shrinking circle matches the curvature integral") {
  auto c = test::regular_polygon(256, 0.8);
  const double L0 = length(c);
  const double k2 = curve_integrals(c).k2;
  const double dt = step_closed(c, 0.05);
  const double rate = (length(c) - L0) / dt;
  CHECK(std::abs(k2 - 2 * pi / 0.8) < 1e-3 * k2);
  CHECK(std::abs(rate + k2) < 1e-3 * k2);
}

TEST_CASE("dissipation vanishes on the shrinker") {
  const auto profile = shoot_brakke_spoon();
  const auto net = profile_to_network(profile, 4.0, 128);
  // At T - t = 1/2 the kernel about the origin is the rescaled one.
  CHECK(dissipation(net, {0, 0}, 0.0, 0.5) < 1e-5);
  CHECK(rescaled_dissipation(net) < 1e-5);
  const auto g = gaussian_density(net, {0, 0}, 0.0, 0.5);
  const auto curves = net.curves();
  CHECK(rescaled_density(curves) == doctest::Approx(g).epsilon(1e-12));
}

TEST_CASE("monotonicity residual along a self-similar evolution") {
  const auto profile = shoot_brakke_spoon();
  FlowConfig cfg;
  FlowState st{profile_to_network(profile, 4.0, 128), 0.0, 0, 0.0};
  regrid(st.net, cfg);
  std::vector<FlowState> states{st};
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 200; ++i) st = step(st, cfg);
    states.push_back(st);
  }
  std::vector<TimedNetwork> window;
  for (const auto& s : states) window.push_back({s.t, &s.net});
  const auto res = monotonicity_residual(window, {0, 0}, 0.5);
  REQUIRE(res.size() == 4);
  for (const auto& r : res) {
    CHECK(std::abs(r.dtheta_dt) < 1e-2);
    CHECK(std::abs(r.residual) < 1e-2);
  }
  const std::vector<TimedNetwork> shortw(window.begin(), window.begin() + 2);
  CHECK_THROWS_AS(monotonicity_residual(shortw, {0, 0}, 0.5), Error);
}

TEST_CASE("length law on a spoon run") {
  FlowConfig cfg;
  cfg.monitor.compute_E = false;
  cfg.t_max = 0.2;
  const auto r = run(generate_initial("circle_spoon", {}), cfg);
  std::vector<TimedNetwork> window;
  for (const auto& s : r.snapshots)
    if (s.t > 0.05) window.push_back({s.t, &s.net});
  const auto res = dL_residual(window);
  REQUIRE(!res.empty());
  for (const auto& x : res) CHECK(std::abs(x.residual) < 0.05 * x.k2);
}

TEST_CASE("monitor records") {
  const auto net = generate_initial("circle_spoon", {});
  const auto rec = monitor_record(net, 0.0, true, Point2{1.0, 0.0}, 0.6);
  CHECK(rec.L == doctest::Approx(rec.L1 + rec.L2).epsilon(1e-15));
  CHECK(rec.A == doctest::Approx(loop_area(net)));
  CHECK(rec.E <= kFourSqrt3);
  CHECK(std::isfinite(rec.theta_x0));
  CHECK(std::isnan(monitor_record(net, 0.0, false, std::nullopt, 0.6).E));

  auto copy = rec;
  copy.dL_residual = 0.1 + 0.2;
  const auto text = monitor_csv_header() + "\n" + monitor_csv_row(copy) + "\n";
  const auto back = parse_monitor_csv(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0].t == copy.t);
  CHECK(back[0].A == copy.A);
  CHECK(back[0].E == copy.E);
  CHECK(back[0].dL_residual == copy.dL_residual);
  CHECK(std::isnan(back[0].cond4_residual) == std::isnan(copy.cond4_residual));
}

TEST_CASE("singular time") {
  CHECK(singular_time(pi) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(singular_time(5 * pi / 3) == doctest::Approx(1.0).epsilon(1e-15));
}
