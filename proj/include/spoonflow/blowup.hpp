#pragma once

// Parabolic rescaling about a singular point and classification of the
// rescaled networks against the shrinker catalog.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spoonflow/diagnostics.hpp"
#include "spoonflow/flow.hpp"
#include "spoonflow/shrinker.hpp"

namespace spoonflow {

enum class LimitClass { HalfLine, Line, FlatTriod, BrakkeSpoon, Inconclusive };

auto to_string(LimitClass c) -> std::string_view;

struct SingularityEstimate {
  Point2 x0;
  double T_est = 0.0;
  double T_initial_area = 0.0;  // 3 A0 / (5 pi) from the first record
  std::size_t fit_records = 0;
};

/// T from the area law applied at the last record; x0 by fitting the loop
/// centroid as x0 + b sqrt(T - t) over the last 20% of the run. Throws
/// WrongStopReason unless the run ended by loop collapse.
auto estimate_singularity(std::span<const MonitorRecord> monitors, StopKind stop) -> SingularityEstimate;

/// -1/2 log(T - t).
auto frak_time(double t, double T) -> double;

/// (net - x0) / sqrt(2 tau), domain included.
auto rescale_network(const SpoonNetwork& net, Point2 x0, double tau) -> SpoonNetwork;

struct RescaledSnapshot {
  double frak_t = 0.0;
  double t = 0.0;
  SpoonNetwork net;
};

/// For each grid value picks the snapshot nearest in rescaled time, dropping
/// repeats. Throws InvalidTime if any snapshot is at or after T.
auto rescale_trajectory(std::span<const Snapshot> snapshots, Point2 x0, double T, std::span<const double> frak_grid)
    -> std::vector<RescaledSnapshot>;

struct ClassifyOptions {
  double window_radius = 5.0;
  double accept_distance = 0.1;
  std::size_t coarse_angles = 36;
  double angle_tolerance = 1e-9;
};

struct CandidateFit {
  LimitClass kind = LimitClass::Inconclusive;
  double distance = kInf;
  double rotation = 0.0;
};

struct BlowupReport {
  Point2 x0;
  double T_est = kNaN;
  LimitClass limit_class = LimitClass::Inconclusive;
  std::vector<double> frak_t;
  std::vector<double> distance_series;  // to the chosen class, or the best candidate when inconclusive
  std::vector<double> density_series;
  std::vector<double> dissipation_series;
  std::vector<CandidateFit> final_fits;  // all candidates at the last snapshot
  double final_distance = kInf;
  double spoon_density = kNaN;
  bool oscillating = false;
  bool empty_window = false;
  ClassifyOptions thresholds;
  std::string note;
};

/// Best fit of one candidate to the part of `net` inside the window.
auto fit_candidate(const SpoonNetwork& rescaled, LimitClass kind, const ShrinkerProfile& profile,
                   const ClassifyOptions& opts = {}) -> CandidateFit;

/// Needs at least 5 snapshots spanning 2 units of rescaled time for a
/// definite class.
auto classify_limit(std::span<const RescaledSnapshot> rescaled, const ShrinkerProfile& profile,
                    const ClassifyOptions& opts = {}) -> BlowupReport;

/// Segments of the polylines clipped to the disc of the given radius about the origin.
auto clip_to_disc(std::span<const Polyline> curves, double radius) -> std::vector<Segment>;

struct BlowupOptions {
  double grid_step = 0.25;
  std::optional<double> frak_begin;  // defaults to the first snapshot
  std::optional<double> frak_end;    // defaults to the last snapshot before T
  ClassifyOptions classify;
};

/// estimate_singularity, rescale_trajectory on a uniform grid, then
/// classify_limit; x0 and T_est are filled in.
auto analyze_blowup(std::span<const Snapshot> snapshots, std::span<const MonitorRecord> monitors, StopKind stop,
                    const ShrinkerProfile& profile, const BlowupOptions& opts = {}) -> BlowupReport;

/// Integral of the rescaled boundary term <P~, tau_P> e^{-|P~|^2/2} d(frak_t)
/// from each snapshot to the last, by the trapezoid rule in t.
auto accumulated_boundary_term(std::span<const Snapshot> snapshots, Point2 x0, double T, bool rescaled)
    -> std::vector<double>;

}  // namespace spoonflow
