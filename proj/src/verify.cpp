#include "spoonflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spoonflow/error.hpp"
#include "spoonflow/io.hpp"

namespace spoonflow {

using std::numbers::pi;

auto VerifyReport::ok() const -> bool {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

auto VerifyReport::table() const -> std::string {
  std::ostringstream out;
  out << "check                 result  measured        limit\n";
  for (const auto& c : checks) {
    out.width(22);
    out << std::left << c.name << (c.pass ? "PASS    " : "FAIL    ");
    out.width(16);
    out << c.measured;
    out << c.limit;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << "\n";
  }
  return out.str();
}

auto area_slope(std::span<const MonitorRecord> monitors, double t0, double t1) -> double {
  double n = 0, st = 0, sa = 0, stt = 0, sta = 0;
  for (const auto& r : monitors) {
    if (r.t < t0 || r.t > t1) continue;
    n += 1;
    st += r.t;
    sa += r.A;
    stt += r.t * r.t;
    sta += r.t * r.A;
  }
  const double det = n * stt - st * st;
  if (n < 2 || det == 0.0) return kNaN;
  return (n * sta - st * sa) / det;
}

auto verify_run(std::span<const MonitorRecord> monitors, std::span<const Snapshot> snapshots, const StopReason& stop,
                double initial_area) -> VerifyReport {
  VerifyReport rep;
  if (monitors.empty()) throw Error(ErrorKind::InvalidArgument, "no monitor records to verify");
  const double t_end = monitors.back().t;

  {
    const double slope = area_slope(monitors, 0.2 * t_end, 0.8 * t_end);
    const double rel = std::abs(slope / kAreaRate - 1.0);
    rep.checks.push_back({"area_slope", rel <= 0.02, slope, kAreaRate, "relative error " + std::to_string(rel)});
  }
  {
    double worst = 0.0;
    for (const auto& r : monitors) worst = std::max(worst, std::abs(r.turning_loop / (5.0 * pi / 3.0) - 1.0));
    rep.checks.push_back({"loop_turning", worst <= 0.01, worst, 0.01, "max relative deviation from 5pi/3"});
  }
  {
    double worst = kInf;
    for (const auto& r : monitors) worst = std::min(worst, r.k2_loop / (25.0 * pi * pi / (9.0 * r.L1)));
    rep.checks.push_back({"hoelder_bound", worst >= 0.99, worst, 0.99, "min ratio to 25pi^2/(9 L1)"});
  }
  {
    std::size_t bad_embed = 0;
    std::size_t bad_contain = 0;
    for (const auto& s : snapshots) {
      if (!segments_intersect_scan(network_segments(s.net)).empty()) ++bad_embed;
      if (!check_containment(s.net)) ++bad_contain;
    }
    rep.checks.push_back({"embedded", bad_embed == 0, static_cast<double>(bad_embed), 0.0,
                          std::to_string(snapshots.size()) + " snapshots"});
    rep.checks.push_back({"contained", bad_contain == 0, static_cast<double>(bad_contain), 0.0,
                          std::to_string(snapshots.size()) + " snapshots"});
  }
  {
    double worst = -kInf;
    for (const auto& r : monitors)
      if (std::isfinite(r.E)) worst = std::max(worst, r.E);
    const bool have = std::isfinite(worst);
    rep.checks.push_back({"E_upper_bound", !have || worst <= kFourSqrt3 + 1e-9, have ? worst : kNaN, kFourSqrt3,
                          have ? "" : "E not recorded"});
  }
  if (stop.kind == StopKind::AreaVanishing) {
    const double bound = singular_time(initial_area) * 1.05;
    rep.checks.push_back({"stop_time_bound", stop.t <= bound, stop.t, bound, "AreaVanishing"});
  }
  return rep;
}

auto verify_directory(const std::filesystem::path& dir) -> VerifyReport {
  const auto monitors = io::read_monitors(dir / "monitors.csv");
  const auto snapshots = io::read_snapshots(dir / "snapshots.jsonl");
  const auto stop = io::read_stop(dir / "stop.json");
  return verify_run(monitors, snapshots, stop.stop, stop.initial_area);
}

}  // namespace spoonflow
