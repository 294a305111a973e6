#pragma once

// Test-side builders, independent of the library's generators.

#include <cmath>
#include <numbers>
#include <random>

#include "spoonflow/network.hpp"

namespace spoonflow::test {

inline auto regular_polygon(std::size_t n, double r, Point2 c = {}, double phase = 0.0) -> Polyline {
  Polyline p;
  p.closed = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    p.points.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return p;
}

inline auto straight(Point2 a, Point2 b, std::size_t edges) -> Polyline {
  Polyline p;
  for (std::size_t i = 0; i <= edges; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(edges);
    p.points.push_back(i == edges ? b : a + u * (b - a));
  }
  return p;
}

// Circle of radius r through the junction O = (0, 0), centered at (r, 0), with
// a straight handle along -x of the given length and a disc domain whose
// boundary passes through the handle end. Not collared: the angles are 90 deg.
inline auto plain_spoon(double r, double handle, std::size_t n_loop, std::size_t n_handle) -> SpoonNetwork {
  SpoonNetwork net;
  for (std::size_t i = 0; i <= n_loop; ++i) {
    const double a = std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_loop);
    net.loop.points.push_back({r + r * std::cos(a), r * std::sin(a)});
  }
  net.loop.points.front() = {0.0, 0.0};
  net.loop.points.back() = {0.0, 0.0};
  net.handle = straight({0.0, 0.0}, {-handle, 0.0}, n_handle);
  const double R = 3.0 * (r + handle);
  net.domain = ConvexDomain(Disc{{-handle + R, 0.0}, R});
  return net;
}

inline auto similarity(Point2 p, double scale, double angle, Point2 shift) -> Point2 {
  return scale * rotated(p, angle) + shift;
}

inline auto transformed(const SpoonNetwork& net, double scale, double angle, Point2 shift) -> SpoonNetwork {
  SpoonNetwork out = net;
  for (auto& p : out.loop.points) p = similarity(p, scale, angle, shift);
  for (auto& p : out.handle.points) p = similarity(p, scale, angle, shift);
  const auto& d = net.domain.disc();
  out.domain = ConvexDomain(Disc{similarity(d.center, scale, angle, shift), scale * d.radius});
  return out;
}

}  // namespace spoonflow::test
