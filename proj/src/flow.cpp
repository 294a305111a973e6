#include "spoonflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>

#include "spoonflow/error.hpp"

namespace spoonflow {

namespace {

auto min_edge(const Polyline& c) -> double {
  double best = kInf;
  for (std::size_t e = 0; e < c.edge_count(); ++e) best = std::min(best, distance(c.edge_start(e), c.edge_end(e)));
  return best;
}

auto node_velocity(Point2 prev, Point2 x, Point2 next) -> Point2 {
  return 4.0 * (next - 2.0 * x + prev) / norm2(next - prev);
}

// Moves the interior nodes of an open polyline, leaving both ends in place.
void advance_interior(const std::vector<Point2>& from, std::vector<Point2>& to, double dt) {
  for (std::size_t i = 1; i + 1 < from.size(); ++i) {
    to[i] = from[i] + dt * node_velocity(from[i - 1], from[i], from[i + 1]);
  }
}

void check_edges_after_step(const Polyline& c, double factor, const char* name) {
  const auto edges = edge_lengths(c);
  const double mean = std::accumulate(edges.begin(), edges.end(), 0.0) / static_cast<double>(edges.size());
  const double shortest = *std::min_element(edges.begin(), edges.end());
  if (!(shortest >= factor * mean)) {
    throw Error(ErrorKind::StepRejected, std::string(name) + " edge collapsed to " + std::to_string(shortest) +
                                             " (mean " + std::to_string(mean) + ")");
  }
}

}  // namespace

void FlowConfig::validate() const {
  auto bad = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (n_loop < 16 || n_handle < 16) bad("node counts must be at least 16");
  if (!(cfl > 0.0 && cfl <= 0.5)) bad("cfl must lie in (0, 0.5]");
  if (regrid_every == 0) bad("regrid_every must be positive");
  if (monitor_every == 0) bad("monitor_every must be positive");
  if (monitor.e_every == 0) bad("e_every must be positive");
  if (!(t_max > 0.0)) bad("t_max must be positive");
  if (area_floor < 0.0) bad("area_floor must be nonnegative");
  if (!(min_edge_factor > 0.0 && min_edge_factor < 1.0)) bad("min_edge_factor must lie in (0, 1)");
  if (!(handle_floor_factor > 0.0 && handle_floor_factor < 1.0)) bad("handle_floor_factor must lie in (0, 1)");
  if (!(blowup_threshold > 0.0)) bad("blowup_threshold must be positive");
}

auto to_string(StopKind kind) -> std::string_view {
  switch (kind) {
    case StopKind::AreaVanishing: return "AreaVanishing";
    case StopKind::HandleVanishing: return "HandleVanishing";
    case StopKind::CurvatureBlowup: return "CurvatureBlowup";
    case StopKind::TimeLimit: return "TimeLimit";
  }
  return "TimeLimit";
}

auto stop_kind_from_string(std::string_view name) -> StopKind {
  for (auto k : {StopKind::AreaVanishing, StopKind::HandleVanishing, StopKind::CurvatureBlowup, StopKind::TimeLimit})
    if (to_string(k) == name) return k;
  throw Error(ErrorKind::InvalidArgument, "unknown stop reason " + std::string(name));
}

auto stable_dt(const SpoonNetwork& net, double cfl) -> double {
  const double h = std::min(min_edge(net.loop), min_edge(net.handle));
  return cfl * h * h;
}

auto junction_velocity(const SpoonNetwork& net) -> Point2 {
  const auto js = junction_state(net);
  const auto k = project_curvatures(js.k);
  const auto lam = junction_speeds_from_curvatures(k);
  return lam.lam1_0 * js.t1_0 + k.k1_0 * rot90(js.t1_0);
}

auto junction_update(SpoonNetwork& net, double dt) -> Point2 {
  const Point2 o = net.junction() + dt * junction_velocity(net);
  net.set_junction(o);
  impose_junction_angles(net);
  return o;
}

auto step(const FlowState& state, const FlowConfig& cfg, double dt_max) -> FlowState {
  const auto& old = state.net;
  const auto alarm = check_angle_condition(old, kAngleRuntimeAlarm);
  if (!alarm.pass) spdlog::warn("junction angles off by {:.3e} rad at t = {}", alarm.max_deviation, state.t);

  const double dt = std::min(stable_dt(old, cfg.cfl), dt_max);
  FlowState next = state;
  advance_interior(old.loop.points, next.net.loop.points, dt);
  advance_interior(old.handle.points, next.net.handle.points, dt);
  next.net.set_junction(old.junction() + dt * junction_velocity(old));
  impose_junction_angles(next.net);

  check_edges_after_step(next.net.loop, cfg.min_edge_factor, "loop");
  check_edges_after_step(next.net.handle, cfg.min_edge_factor, "handle");

  next.t = state.t + dt;
  next.step_index = state.step_index + 1;
  next.dt_last = dt;
  return next;
}

void regrid(SpoonNetwork& net, const FlowConfig& cfg) {
  net.loop = resample(net.loop, cfg.n_loop + 1);
  net.handle = resample(net.handle, cfg.n_handle + 1);
  impose_junction_angles(net);
}

auto blowup_indicator(const SpoonNetwork& net) -> double {
  const double h = std::min(min_edge(net.loop), min_edge(net.handle));
  double kmax = 0.0;
  for (const auto* c : {&net.loop, &net.handle}) {
    const auto& p = c->points;
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
      kmax = std::max(kmax, std::abs(parabola_fit(p[i - 1], p[i], p[i + 1], 1).curvature));
  }
  return kmax * h;
}

// ---- driver ------------------------------------------------------------------------------------
namespace {

struct Runner {
  const FlowConfig& cfg;
  const MonitorCallback& on_monitor;
  RunResult result;
  double T_density = 0.0;
  std::size_t records = 0;

  void monitor(const FlowState& st) {
    const bool with_E = cfg.monitor.compute_E && records % cfg.monitor.e_every == 0;
    ++records;
    auto rec = monitor_record(st.net, st.t, with_E, cfg.monitor.density_center, T_density);
    try {
      const FlowState probe = step(st, cfg);
      rec.dL_residual = (length(probe.net.loop) + length(probe.net.handle) - rec.L) / probe.dt_last + rec.k2_total;
    } catch (const Error&) {
      rec.dL_residual = kNaN;
    }
    Snapshot snap{st.t, st.net};
    if (on_monitor) on_monitor(rec, snap);
    result.monitors.push_back(rec);
    if (cfg.keep_snapshots) result.snapshots.push_back(std::move(snap));
  }
};

}  // namespace

auto run(const SpoonNetwork& initial, const FlowConfig& cfg, const MonitorCallback& on_monitor) -> RunResult {
  cfg.validate();
  require_valid(initial);
  Runner runner{cfg, on_monitor, {}, 0.0, 0};

  FlowState st{initial, 0.0, 0, 0.0};
  regrid(st.net, cfg);
  const double A0 = loop_area(st.net);
  const double L20 = length(st.net.handle);
  const double area_floor = cfg.area_floor > 0.0 ? cfg.area_floor : 1e-3 * A0;
  runner.result.initial_area = A0;
  runner.T_density = cfg.monitor.density_T.value_or(singular_time(A0));

  const auto compat = check_compatibility_order2(st.net);
  spdlog::debug("initial compatibility residuals: endpoint {:.3e}, junction {:.3e}", compat.endpoint_residual,
                compat.junction_residual);

  runner.monitor(st);
  StopReason stop;
  auto finish = [&](StopKind kind, double value, double threshold) {
    stop.kind = kind;
    stop.value = value;
    stop.threshold = threshold;
  };

  while (true) {
    if (st.t >= cfg.t_max) {
      finish(StopKind::TimeLimit, st.t, cfg.t_max);
      break;
    }
    const double remaining = cfg.t_max - st.t;
    bool blown = false;
    try {
      st = step(st, cfg, remaining);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::StepRejected) throw;
      spdlog::debug("step rejected at t = {} ({}); regridding", st.t, e.what());
      try {
        regrid(st.net, cfg);
        st = step(st, cfg, remaining);
      } catch (const Error& again) {
        if (again.kind() != ErrorKind::StepRejected && again.kind() != ErrorKind::DegenerateEdge) throw;
        blown = true;
      }
    }
    if (blown) {
      finish(StopKind::CurvatureBlowup, blowup_indicator(st.net), cfg.blowup_threshold);
      break;
    }
    if (st.step_index % cfg.regrid_every == 0) regrid(st.net, cfg);

    const double A = loop_area(st.net);
    const double L2 = length(st.net.handle);
    const double indicator = blowup_indicator(st.net);
    if (A < area_floor) {
      finish(StopKind::AreaVanishing, A, area_floor);
      break;
    }
    if (L2 < cfg.handle_floor_factor * L20) {
      finish(StopKind::HandleVanishing, L2, cfg.handle_floor_factor * L20);
      break;
    }
    if (indicator > cfg.blowup_threshold) {
      finish(StopKind::CurvatureBlowup, indicator, cfg.blowup_threshold);
      break;
    }
    if (st.step_index % cfg.monitor_every == 0) runner.monitor(st);
  }

  if (runner.result.monitors.empty() || runner.result.monitors.back().t != st.t) runner.monitor(st);
  stop.t = st.t;
  stop.steps = st.step_index;
  stop.area = loop_area(st.net);
  stop.handle_length = length(st.net.handle);
  stop.blowup_indicator = blowup_indicator(st.net);
  runner.result.stop = stop;
  spdlog::debug("run stopped: {} at t = {} after {} steps", to_string(stop.kind), stop.t, stop.steps);
  return std::move(runner.result);
}

// ---- single curves -----------------------------------------------------------------------------
auto step_closed(Polyline& curve, double cfl) -> double {
  const double h = min_edge(curve);
  const double dt = cfl * h * h;
  const auto& p = curve.points;
  const std::size_t n = p.size();
  std::vector<Point2> next(n);
  for (std::size_t i = 0; i < n; ++i)
    next[i] = p[i] + dt * node_velocity(p[(i + n - 1) % n], p[i], p[(i + 1) % n]);
  curve.points = std::move(next);
  return dt;
}

auto step_open_fixed(Polyline& curve, double cfl) -> double {
  const double h = min_edge(curve);
  const double dt = cfl * h * h;
  auto next = curve.points;
  advance_interior(curve.points, next, dt);
  curve.points = std::move(next);
  return dt;
}

}  // namespace spoonflow
