#include "spoonflow/shrinker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <spdlog/spdlog.h>

#include "spoonflow/diagnostics.hpp"
#include "spoonflow/error.hpp"

namespace spoonflow {

using std::numbers::pi;

namespace {

struct State {
  double x, y, theta;
};

auto rhs(const State& s) -> State {
  const double c = std::cos(s.theta);
  const double n = std::sin(s.theta);
  return {c, n, s.x * n - s.y * c};
}

auto axpy(const State& s, double h, const State& d) -> State {
  return {s.x + h * d.x, s.y + h * d.y, s.theta + h * d.theta};
}

auto rk4(const State& s, double h) -> State {
  const State k1 = rhs(s);
  const State k2 = rhs(axpy(s, 0.5 * h, k1));
  const State k3 = rhs(axpy(s, 0.5 * h, k2));
  const State k4 = rhs(axpy(s, h, k3));
  return {s.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x), s.y + h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
          s.theta + h / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta)};
}

auto doubling_error(const State& s, double h) -> double {
  const State one = rk4(s, h);
  const State two = rk4(rk4(s, 0.5 * h), 0.5 * h);
  return std::max({std::abs(one.x - two.x), std::abs(one.y - two.y), std::abs(one.theta - two.theta)}) / 15.0;
}

constexpr double kJunctionAngle = pi / 3.0;
constexpr double kClosureAngle = -pi / 2.0;
constexpr double kShootSMax = 40.0;

struct Closure {
  double y = 0.0;
  double x = 0.0;
  double s = 0.0;  // arclength to the closing point
  bool reached = false;
};

// Integrates the upper arc until theta = -pi/2; the last step is shortened
// by bisection so the arc ends exactly there.
auto close_upper_arc(double d, double ds, std::vector<State>* samples) -> Closure {
  State s{-d, 0.0, kJunctionAngle};
  if (samples) samples->push_back(s);
  double arclength = 0.0;
  while (arclength < kShootSMax) {
    const State next = rk4(s, ds);
    if (next.theta <= kClosureAngle) {
      double lo = 0.0;
      double hi = ds;
      for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rk4(s, mid).theta > kClosureAngle ? lo : hi) = mid;
      }
      const State end = rk4(s, hi);
      if (samples) samples->push_back(end);
      return {end.y, end.x, arclength + hi, true};
    }
    s = next;
    arclength += ds;
    if (samples) samples->push_back(s);
  }
  return {s.y, s.x, arclength, false};
}

}  // namespace

// ---- arcs --------------------------------------------------------------------------------------
auto integrate_shrinker_arc(double k0, Point2 start, double theta0, double ds, double s_max) -> ShrinkerArc {
  if (!(ds > 0.0) || !(s_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "ds and s_max must be positive");
  const double size = std::max(1.0, norm(start));
  if (ds > 1e-3 * size) {
    throw Error(ErrorKind::StepTooLarge, "ds = " + std::to_string(ds) + " exceeds 1e-3 of the size " +
                                             std::to_string(size));
  }
  const Point2 nu0 = rot90(Point2{std::cos(theta0), std::sin(theta0)});
  const double implied = -dot(start, nu0);
  if (std::abs(k0 - implied) > 1e-9 * std::max(1.0, std::abs(implied))) {
    throw Error(ErrorKind::InvalidArgument, "k0 = " + std::to_string(k0) + " disagrees with -<x, nu> = " +
                                                std::to_string(implied));
  }

  const auto steps = static_cast<std::size_t>(std::ceil(s_max / ds - 1e-9));
  const double h = s_max / static_cast<double>(steps);
  ShrinkerArc arc;
  State st{start.x, start.y, theta0};
  for (std::size_t i = 0; i <= steps; ++i) {
    arc.points.push_back({st.x, st.y});
    arc.s.push_back(h * static_cast<double>(i));
    arc.theta.push_back(st.theta);
    if (i == steps) break;
    if (i % 64 == 0) {
      const double err = doubling_error(st, h);
      if (err > 1e-8) {
        throw Error(ErrorKind::StepTooLarge, "local truncation estimate " + std::to_string(err) + " at s = " +
                                                 std::to_string(arc.s.back()));
      }
    }
    st = rk4(st, h);
  }

  const std::size_t n = arc.points.size();
  arc.residual.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double k = 0.0;
    if (n < 3) {
      k = implied;
    } else if (i == 0) {
      k = (-3 * arc.theta[0] + 4 * arc.theta[1] - arc.theta[2]) / (2 * h);
    } else if (i == n - 1) {
      k = (3 * arc.theta[n - 1] - 4 * arc.theta[n - 2] + arc.theta[n - 3]) / (2 * h);
    } else {
      k = (arc.theta[i + 1] - arc.theta[i - 1]) / (2 * h);
    }
    const Point2 nu = rot90(Point2{std::cos(arc.theta[i]), std::sin(arc.theta[i])});
    arc.residual[i] = k + dot(arc.points[i], nu);
  }
  return arc;
}

auto shooting_closure(double d, double ds) -> double {
  const auto c = close_upper_arc(d, ds, nullptr);
  if (!c.reached) {
    spdlog::debug("shooting from d = {} never turned vertical within s = {}", d, kShootSMax);
    return 1.0;
  }
  return c.y;
}

// ---- shooting ----------------------------------------------------------------------------------
namespace {

auto build_profile(double d, double ds) -> ShrinkerProfile {
  // Re-integrate with a step that lands exactly on the closing point.
  const auto probe = close_upper_arc(d, ds, nullptr);
  const auto steps = static_cast<std::size_t>(std::ceil(probe.s / ds));
  const double h = probe.s / static_cast<double>(steps);
  std::vector<State> upper;
  const auto fine = close_upper_arc(d, h, &upper);
  // Rounding can leave a sliver step before the closing point; merge it.
  if (upper.size() >= 2) {
    const auto& a = upper[upper.size() - 2];
    const auto& b = upper.back();
    if (std::hypot(b.x - a.x, b.y - a.y) < 0.5 * h) upper.erase(upper.end() - 2);
  }

  ShrinkerProfile prof;
  prof.d = d;
  prof.junction = {-d, 0.0};
  prof.ds = h;
  prof.crossing_x = fine.x;
  prof.closure_residual = std::abs(fine.y);
  // Counterclockwise: along the mirrored lower arc, then back over the upper arc.
  prof.loop.closed = true;
  for (const auto& s : upper) prof.loop.points.push_back({s.x, -s.y});
  prof.loop.points.back().y = 0.0;
  for (std::size_t i = upper.size() - 1; i-- > 1;) prof.loop.points.push_back({upper[i].x, upper[i].y});
  prof.loop.points.front() = prof.junction;
  // Junction curvature in the counterclockwise orientation.
  prof.shoot_param = d * std::sin(kJunctionAngle);
  const std::array<std::size_t, 1> corner{0};
  prof.residual_max = shrinker_residual(prof.loop, corner).max;
  return prof;
}

auto bisect(double lo, double hi, double flo, double ds, double tol) -> double {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = shooting_closure(mid, ds);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

auto secant(double a, double b, double fa, double ds, double tol) -> double {
  // Start from the two midpoints of the bracket's halves.
  double x0 = a + 0.25 * (b - a);
  double x1 = a + 0.75 * (b - a);
  double f0 = shooting_closure(x0, ds);
  double f1 = shooting_closure(x1, ds);
  for (int it = 0; it < 100; ++it) {
    if (f1 == f0) break;
    double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 > a && x2 < b)) x2 = 0.5 * (x0 + x1);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = shooting_closure(x1, ds);
    if (std::abs(x1 - x0) < tol) return x1;
  }
  spdlog::debug("secant stalled; falling back to bisection");
  return bisect(a, b, fa, ds, tol);
}

}  // namespace

auto shoot_brakke_spoon(const ShootOptions& opts) -> ShrinkerProfile {
  if (!(opts.d_lo > 0.0 && opts.d_hi > opts.d_lo)) throw Error(ErrorKind::InvalidArgument, "bad shooting interval");
  const double flo = shooting_closure(opts.d_lo, opts.ds);
  const double fhi = shooting_closure(opts.d_hi, opts.ds);
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw Error(ErrorKind::NoBracket, "closure does not change sign on [" + std::to_string(opts.d_lo) + ", " +
                                          std::to_string(opts.d_hi) + "]: F = " + std::to_string(flo) + ", " +
                                          std::to_string(fhi));
  }
  const double d = opts.method == RootFinder::Bisection
                       ? bisect(opts.d_lo, opts.d_hi, flo, opts.ds, opts.tolerance)
                       : secant(opts.d_lo, opts.d_hi, flo, opts.ds, opts.tolerance);
  auto prof = build_profile(d, opts.ds);
  prof.method = opts.method;
  prof.bracket_width = opts.tolerance;
  spdlog::debug("brakke spoon: d = {:.12f}, closure {:.3e}, residual {:.3e}", d, prof.closure_residual,
                prof.residual_max);
  return prof;
}

// ---- residuals ---------------------------------------------------------------------------------
auto shrinker_residual(const Polyline& curve, std::span<const std::size_t> skip) -> ShrinkerResidual {
  const auto f = frame(curve);
  ShrinkerResidual out;
  double weight = 0.0;
  for (std::size_t i = 0; i < f.k.size(); ++i) {
    if (std::find(skip.begin(), skip.end(), i) != skip.end()) continue;
    const double r = f.k[i] + dot(curve.points[i], f.nu[i]);
    out.max = std::max(out.max, std::abs(r));
    out.l2 += r * r * f.ds[i];
    weight += f.ds[i];
  }
  out.l2 = weight > 0.0 ? std::sqrt(out.l2) : 0.0;
  return out;
}

auto shrinker_residual(const ShrinkerProfile& profile) -> ShrinkerResidual {
  const std::array<std::size_t, 1> corner{0};
  return shrinker_residual(profile.loop, corner);
}

auto shrinker_residual(const SpoonNetwork& net) -> ShrinkerResidual {
  const std::array<std::size_t, 2> loop_ends{0, net.loop.size() - 1};
  const std::array<std::size_t, 2> handle_ends{0, net.handle.size() - 1};
  const auto a = shrinker_residual(net.loop, loop_ends);
  const auto b = shrinker_residual(net.handle, handle_ends);
  return {std::max(a.max, b.max), std::hypot(a.l2, b.l2)};
}

auto profile_turning(const ShrinkerProfile& profile) -> double {
  Polyline open{profile.loop.points, false};
  open.points.push_back(profile.loop.points.front());
  const auto f = frame(open);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.k.size(); ++i) sum += f.k[i] * f.ds[i];
  return sum;
}

auto profile_junction_angles(const ShrinkerProfile& profile) -> std::array<double, 3> {
  const auto& p = profile.loop.points;
  const std::size_t n = p.size();
  const Point2 out1 = parabola_fit(p[0], p[1], p[2], 0).tangent;
  const Point2 out2 = parabola_fit(p[0], p[n - 1], p[n - 2], 0).tangent;
  const Point2 out3 = profile.halfline_dir;
  auto ang = [](Point2 a, Point2 b) { return std::acos(std::clamp(dot(a, b), -1.0, 1.0)); };
  return {ang(out1, out2), ang(out2, out3), ang(out3, out1)};
}

auto spoon_gaussian_density(const ShrinkerProfile& profile) -> double {
  const std::array<Polyline, 1> loop{profile.loop};
  // The half-line {junction + u * dir, u >= 0} lies on a line through the origin.
  const double tail = 0.5 * std::erfc(profile.d / std::numbers::sqrt2);
  return rescaled_density(loop) + tail;
}

auto profile_to_network(const ShrinkerProfile& profile, double handle_length, std::size_t n_handle)
    -> SpoonNetwork {
  if (!(handle_length > 0.0) || n_handle < 2) throw Error(ErrorKind::InvalidArgument, "bad handle for export");
  SpoonNetwork net;
  net.loop.closed = false;
  net.loop.points = profile.loop.points;
  net.loop.points.push_back(profile.junction);
  net.handle.closed = false;
  for (std::size_t i = 0; i <= n_handle; ++i) {
    const double u = handle_length * static_cast<double>(i) / static_cast<double>(n_handle);
    net.handle.points.push_back(profile.junction + u * profile.halfline_dir);
  }
  net.handle.points.front() = profile.junction;
  net.domain = ConvexDomain(Disc{{0.0, 0.0}, norm(net.handle.points.back())});
  return net;
}

auto profile_polylines(const ShrinkerProfile& profile, double radius, double spacing) -> std::vector<Polyline> {
  std::vector<Polyline> out{profile.loop};
  const double len = radius - profile.d;
  if (len > 0.0) {
    const auto n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(len / spacing)));
    Polyline half;
    for (std::size_t i = 0; i <= n; ++i)
      half.points.push_back(profile.junction + (len * static_cast<double>(i) / static_cast<double>(n)) *
                                                   profile.halfline_dir);
    out.push_back(std::move(half));
  }
  return out;
}

// ---- flat cones --------------------------------------------------------------------------------
auto to_string(FlatKind kind) -> std::string_view {
  switch (kind) {
    case FlatKind::Line: return "Line";
    case FlatKind::HalfLine: return "HalfLine";
    case FlatKind::FlatTriod: return "FlatTriod";
  }
  return "Line";
}

auto flat_polylines(FlatKind kind, double radius, double direction, double spacing) -> std::vector<Polyline> {
  const auto n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(radius / spacing)));
  auto ray = [&](double angle) {
    Polyline r;
    const Point2 dir{std::cos(angle), std::sin(angle)};
    for (std::size_t i = 0; i <= n; ++i)
      r.points.push_back((radius * static_cast<double>(i) / static_cast<double>(n)) * dir);
    return r;
  };
  switch (kind) {
    case FlatKind::HalfLine: return {ray(direction)};
    case FlatKind::Line: return {ray(direction), ray(direction + pi)};
    case FlatKind::FlatTriod: return {ray(direction), ray(direction + 2 * pi / 3), ray(direction - 2 * pi / 3)};
  }
  return {};
}

auto flat_density(FlatKind kind) -> double {
  return rescaled_density(flat_polylines(kind, 20.0, 0.0, 0.005));
}

}  // namespace spoonflow
