#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "spoonflow/error.hpp"
#include "spoonflow/generators.hpp"
#include "spoonflow/io.hpp"
#include "spoonflow/render.hpp"
#include "spoonflow/verify.hpp"

using namespace spoonflow;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

auto kind_of(auto&& fn) -> ErrorKind {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

auto scratch(const std::string& name) -> fs::path {
  const auto dir = fs::temp_directory_path() / ("spoonflow_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void same(const SpoonNetwork& a, const SpoonNetwork& b) {
  REQUIRE(a.loop.size() == b.loop.size());
  REQUIRE(a.handle.size() == b.handle.size());
  for (std::size_t i = 0; i < a.loop.size(); ++i) CHECK(a.loop.points[i] == b.loop.points[i]);
  for (std::size_t i = 0; i < a.handle.size(); ++i) CHECK(a.handle.points[i] == b.handle.points[i]);
}

}  // namespace

TEST_CASE("generators") {
  const auto net = generate_initial("circle_spoon", {});
  CHECK(validate(net).ok());
  CHECK(std::abs(loop_area(net) - pi) < 0.01 * pi);
  for (const auto& name : generator_names()) {
    const auto g = generate_initial(name, {});
    CHECK(validate(g).ok());
    CHECK(check_angle_condition(g, 1e-2).pass);
    CHECK(g.loop.size() == 257);
    CHECK(g.handle.size() == 65);
  }
  GeneratorParams tight;
  tight.domain_radius = 1.5;
  tight.handle = 2.0;
  CHECK(kind_of([&] { (void)generate_initial("circle_spoon", tight); }) == ErrorKind::GeometryInfeasible);
  CHECK(kind_of([&] { (void)generate_initial("teapot", {}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("network JSON round trip") {
  const auto net = generate_initial("ellipse_spoon", {});
  const auto back = io::network_from_json(io::network_to_json(net));
  same(net, back);
  CHECK(back.domain.disc().radius == net.domain.disc().radius);
}

TEST_CASE("network JSON accepts bare point arrays and names failures") {
  const auto net = generate_initial("circle_spoon", {});
  auto j = nlohmann::json::parse(io::network_to_json(net));
  nlohmann::json bare = j;
  bare["loop"] = j["loop"]["points"];
  bare["handle"] = j["handle"]["points"];
  same(net, io::network_from_json(bare.dump()));

  nlohmann::json broken = j;
  broken["handle"]["points"].back()[0] = 10.0;
  CHECK(kind_of([&] { (void)io::network_from_json(broken.dump()); }) == ErrorKind::InvalidNetwork);
}

TEST_CASE("run files round trip") {
  FlowConfig cfg;
  cfg.t_max = 0.02;
  cfg.monitor_every = 200;
  cfg.monitor.compute_E = false;
  const auto r = run(generate_initial("circle_spoon", {}), cfg);
  const auto dir = scratch("files");

  io::write_monitors(dir / "monitors.csv", r.monitors);
  const auto m = io::read_monitors(dir / "monitors.csv");
  REQUIRE(m.size() == r.monitors.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m[i].t == r.monitors[i].t);
    CHECK(m[i].k2_total == r.monitors[i].k2_total);
  }

  {
    std::ofstream f(dir / "snapshots.jsonl");
    for (const auto& s : r.snapshots) f << io::snapshot_to_jsonl(s) << '\n';
  }
  const auto snaps = io::read_snapshots(dir / "snapshots.jsonl");
  REQUIRE(snaps.size() == r.snapshots.size());
  CHECK(snaps.back().t == r.snapshots.back().t);
  same(snaps.back().net, r.snapshots.back().net);
  CHECK(io::snapshot_to_jsonl(r.snapshots.front()).rfind("{\"t\":", 0) == 0);

  io::write_text(dir / "stop.json", io::stop_to_json(r.stop, r.initial_area));
  const auto stop = io::read_stop(dir / "stop.json");
  CHECK(stop.stop.kind == StopKind::TimeLimit);
  CHECK(stop.stop.t == r.stop.t);
  CHECK(stop.initial_area == r.initial_area);
}

TEST_CASE("verify is read-only and reports each check") {
  FlowConfig cfg;
  cfg.monitor.compute_E = false;
  const auto r = run(generate_initial("circle_spoon", {}), cfg);
  const auto report = verify_run(r.monitors, r.snapshots, r.stop, r.initial_area);
  CHECK(report.ok());
  CHECK(report.checks.size() >= 6);
  CHECK(report.table().find("PASS") != std::string::npos);

  const auto dir = scratch("verify");
  io::write_monitors(dir / "monitors.csv", r.monitors);
  {
    std::ofstream f(dir / "snapshots.jsonl");
    for (const auto& s : r.snapshots) f << io::snapshot_to_jsonl(s) << '\n';
  }
  io::write_text(dir / "stop.json", io::stop_to_json(r.stop, r.initial_area));
  const auto before = io::read_text(dir / "monitors.csv");
  const auto stamp = fs::last_write_time(dir / "monitors.csv");
  const auto count = std::distance(fs::directory_iterator(dir), fs::directory_iterator{});
  CHECK(verify_directory(dir).ok());
  CHECK(io::read_text(dir / "monitors.csv") == before);
  CHECK(fs::last_write_time(dir / "monitors.csv") == stamp);
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == count);
}

TEST_CASE("area slope of exact data") {
  std::vector<MonitorRecord> m;
  for (int i = 0; i <= 10; ++i) {
    MonitorRecord r;
    r.t = 0.1 * i;
    r.A = 2.0 - 3.0 * r.t;
    m.push_back(r);
  }
  CHECK(area_slope(m, 0.2, 0.8) == doctest::Approx(-3.0));
}

TEST_CASE("SVG frames") {
  const auto net = generate_initial("circle_spoon", {});
  const auto svg = render_svg({0.0, net}, viewport_for(net.domain));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  const auto dir = scratch("frames");
  const std::vector<Snapshot> snaps{{0.0, net}, {0.1, net}};
  CHECK(render_frames(snaps, dir) == 2);
  CHECK(fs::exists(dir / "frame_00001.svg"));
}
