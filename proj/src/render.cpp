#include "spoonflow/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "spoonflow/io.hpp"

namespace spoonflow {

auto viewport_for(const ConvexDomain& domain) -> Viewport {
  const auto outline = domain.outline(128);
  Point2 lo = outline.points.front();
  Point2 hi = lo;
  for (const auto& p : outline.points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const double side = 1.05 * std::max(hi.x - lo.x, hi.y - lo.y);
  const Point2 mid = 0.5 * (lo + hi);
  return {mid - Point2{side / 2, side / 2}, mid + Point2{side / 2, side / 2}, 600};
}

namespace {
auto path_data(const Polyline& c, const Viewport& v) -> std::string {
  const double scale = v.pixels / (v.upper.x - v.lower.x);
  std::ostringstream d;
  d.precision(6);
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const Point2 p = c.points[i];
    d << (i == 0 ? "M" : " L") << (p.x - v.lower.x) * scale << "," << (v.upper.y - p.y) * scale;
  }
  if (c.closed) d << " Z";
  return d.str();
}
}  // namespace

auto render_svg(const Snapshot& s, const Viewport& v) -> std::string {
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << v.pixels << "\" height=\"" << v.pixels
      << "\" viewBox=\"0 0 " << v.pixels << " " << v.pixels << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<path d=\"" << path_data(s.net.domain.outline(256), v) << "\" fill=\"#f4f4f4\" stroke=\"#999\"/>\n";
  svg << "<path d=\"" << path_data(s.net.loop, v) << "\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"2\"/>\n";
  svg << "<path d=\"" << path_data(s.net.handle, v) << "\" fill=\"none\" stroke=\"#b0361e\" stroke-width=\"2\"/>\n";
  svg << "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"14\">t = " << s.t << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

auto render_frames(std::span<const Snapshot> snapshots, const std::filesystem::path& dir) -> std::size_t {
  if (snapshots.empty()) return 0;
  std::filesystem::create_directories(dir);
  const auto view = viewport_for(snapshots.front().net.domain);
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%05zu.svg", i);
    io::write_text(dir / name, render_svg(snapshots[i], view));
  }
  return snapshots.size();
}

}  // namespace spoonflow
