#pragma once

// Explicit time stepping of motion by curvature for spoon networks.

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "spoonflow/diagnostics.hpp"
#include "spoonflow/network.hpp"

namespace spoonflow {

struct FlowConfig {
  std::size_t n_loop = 256;        // loop edges
  std::size_t n_handle = 64;       // handle edges
  double cfl = 0.2;
  std::size_t regrid_every = 1000;
  double t_max = 10.0;
  double area_floor = 0.0;         // 0 selects 1e-3 of the initial area
  double min_edge_factor = 0.05;
  double handle_floor_factor = 1e-2;
  double blowup_threshold = 0.5;   // max |k| * min edge
  std::size_t monitor_every = 100;
  MonitorOptions monitor;
  bool keep_snapshots = true;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

struct FlowState {
  SpoonNetwork net;
  double t = 0.0;
  std::size_t step_index = 0;
  double dt_last = 0.0;
};

enum class StopKind { AreaVanishing, HandleVanishing, CurvatureBlowup, TimeLimit };

auto to_string(StopKind kind) -> std::string_view;
auto stop_kind_from_string(std::string_view name) -> StopKind;

struct StopReason {
  StopKind kind = StopKind::TimeLimit;
  double t = 0.0;
  std::size_t steps = 0;
  double value = 0.0;      // the quantity that triggered the stop
  double threshold = 0.0;  // the level it crossed
  double area = 0.0;
  double handle_length = 0.0;
  double blowup_indicator = 0.0;
};

struct Snapshot {
  double t = 0.0;
  SpoonNetwork net;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  std::vector<MonitorRecord> monitors;
  StopReason stop;
  double initial_area = 0.0;
};

/// Time step cfl * (min edge)^2 over both curves.
auto stable_dt(const SpoonNetwork& net, double cfl) -> double;

/// Velocity of the junction: the common value of the three end velocities
/// after projecting the measured end curvatures onto the admissible plane.
auto junction_velocity(const SpoonNetwork& net) -> Point2;

/// Moves the junction by dt times junction_velocity and restores the 120
/// degree condition. Returns the new junction position.
auto junction_update(SpoonNetwork& net, double dt) -> Point2;

/// One explicit Euler step, with dt capped at dt_max. Throws StepRejected if
/// an edge would fall below min_edge_factor times the mean edge of its curve.
auto step(const FlowState& state, const FlowConfig& cfg, double dt_max = kInf) -> FlowState;

/// Resamples both curves to the configured counts keeping O and P, then
/// restores the junction angles.
void regrid(SpoonNetwork& net, const FlowConfig& cfg);

/// max over both curves of |k| times the smallest edge.
auto blowup_indicator(const SpoonNetwork& net) -> double;

using MonitorCallback = std::function<void(const MonitorRecord&, const Snapshot&)>;

/// Integrates until a stop condition. The initial network is regridded to
/// the configured counts first. The callback, if set, sees each monitor.
auto run(const SpoonNetwork& initial, const FlowConfig& cfg, const MonitorCallback& on_monitor = {})
    -> RunResult;

// ---- single curves -----------------------------------------------------------------------------

/// Curve-shortening step of a closed polyline; returns dt.
auto step_closed(Polyline& curve, double cfl) -> double;

/// Step of an open polyline with both ends held fixed; returns dt.
auto step_open_fixed(Polyline& curve, double cfl) -> double;

}  // namespace spoonflow
