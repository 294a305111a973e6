#pragma once

// JSON, JSON-lines and CSV encodings of networks, runs and reports.

#include <filesystem>
#include <string>
#include <vector>

#include "spoonflow/blowup.hpp"
#include "spoonflow/flow.hpp"
#include "spoonflow/shrinker.hpp"

namespace spoonflow::io {

auto polyline_to_json(const Polyline& p) -> std::string;
auto polyline_from_json(const std::string& text) -> Polyline;

auto network_to_json(const SpoonNetwork& net) -> std::string;
/// Accepts polylines as {"closed", "points"} objects or as bare point
/// arrays. Throws InvalidNetwork naming the violated invariants.
auto network_from_json(const std::string& text) -> SpoonNetwork;

auto load_network(const std::filesystem::path& path) -> SpoonNetwork;
void save_network(const std::filesystem::path& path, const SpoonNetwork& net);

/// One line: {"t": ..., "domain": ..., "loop": ..., "handle": ...}.
auto snapshot_to_jsonl(const Snapshot& s) -> std::string;
auto read_snapshots(const std::filesystem::path& path) -> std::vector<Snapshot>;

void write_monitors(const std::filesystem::path& path, const std::vector<MonitorRecord>& records);
auto read_monitors(const std::filesystem::path& path) -> std::vector<MonitorRecord>;

auto stop_to_json(const StopReason& stop, double initial_area) -> std::string;
struct StopFile {
  StopReason stop;
  double initial_area = 0.0;
};
auto read_stop(const std::filesystem::path& path) -> StopFile;

auto profile_to_json(const ShrinkerProfile& profile) -> std::string;
auto report_to_json(const BlowupReport& report) -> std::string;

auto read_text(const std::filesystem::path& path) -> std::string;
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace spoonflow::io
