#pragma once

// Invariant checks over a completed run, in memory or on disk.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "spoonflow/flow.hpp"

namespace spoonflow {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  [[nodiscard]] auto ok() const -> bool;
  [[nodiscard]] auto table() const -> std::string;
};

/// Least-squares slope of A(t) over records with t in [t0, t1].
auto area_slope(std::span<const MonitorRecord> monitors, double t0, double t1) -> double;

/// Area slope over the middle 60% of the run, turning, the Hoelder bound,
/// embeddedness and containment at every snapshot, and the stop time bound.
auto verify_run(std::span<const MonitorRecord> monitors, std::span<const Snapshot> snapshots, const StopReason& stop,
                double initial_area) -> VerifyReport;

/// Reads monitors.csv, snapshots.jsonl and stop.json; never writes.
auto verify_directory(const std::filesystem::path& dir) -> VerifyReport;

}  // namespace spoonflow
