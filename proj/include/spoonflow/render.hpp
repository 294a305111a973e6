#pragma once

// SVG frames of snapshots.

#include <filesystem>
#include <span>
#include <string>

#include "spoonflow/flow.hpp"

namespace spoonflow {

struct Viewport {
  Point2 lower;
  Point2 upper;
  int pixels = 600;
};

/// A square viewport around the domain with a small margin.
auto viewport_for(const ConvexDomain& domain) -> Viewport;

auto render_svg(const Snapshot& snapshot, const Viewport& view) -> std::string;

/// Writes frame_00000.svg, ... into `dir` with one fixed viewport; returns the count.
auto render_frames(std::span<const Snapshot> snapshots, const std::filesystem::path& dir) -> std::size_t;

}  // namespace spoonflow
