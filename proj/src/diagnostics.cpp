#include "spoonflow/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spoonflow/error.hpp"

namespace spoonflow {

using std::numbers::pi;

// ---- curvature integrals -----------------------------------------------------------------------
auto curve_integrals(const Polyline& curve) -> CurveIntegrals {
  const auto f = frame(curve);
  CurveIntegrals out;
  out.length = length(curve);
  for (std::size_t i = 0; i < f.k.size(); ++i) {
    out.k2 += f.k[i] * f.k[i] * f.ds[i];
    out.turning += f.k[i] * f.ds[i];
    out.max_abs_k = std::max(out.max_abs_k, std::abs(f.k[i]));
  }
  return out;
}

namespace {

// Derivative at s[0] of the parabola through three (s, k) samples.
auto end_slope(std::array<double, 3> s, std::array<double, 3> k) -> double {
  const double u1 = s[1] - s[0];
  const double u2 = s[2] - s[0];
  const double e1 = k[1] - k[0];
  const double e2 = k[2] - k[0];
  return (u2 * u2 * e1 - u1 * u1 * e2) / (u1 * u2 * (u2 - u1));
}

}  // namespace

auto cond4_residual(const SpoonNetwork& net) -> double {
  const auto lf = frame(net.loop);
  const auto hf = frame(net.handle);
  const std::size_t n = lf.k.size();
  const auto js = junction_state(net);
  const auto k = project_curvatures(js.k);
  const auto lam = junction_speeds_from_curvatures(k);

  const double ks1_0 = end_slope({lf.s[0], lf.s[1], lf.s[2]}, {lf.k[0], lf.k[1], lf.k[2]});
  // Slope in the storage direction at the loop's far end: measured backwards, then negated.
  const double L = lf.s[n - 1];
  const double ks1_1 = -end_slope({L - lf.s[n - 1], L - lf.s[n - 2], L - lf.s[n - 3]},
                                  {lf.k[n - 1], lf.k[n - 2], lf.k[n - 3]});
  const double ks2_0 = end_slope({hf.s[0], hf.s[1], hf.s[2]}, {hf.k[0], hf.k[1], hf.k[2]});

  const std::array<double, 3> q{ks1_0 + lam.lam1_0 * k.k1_0, ks1_1 + lam.lam1_1 * k.k1_1,
                                ks2_0 + lam.lam2_0 * k.k2_0};
  return std::max({std::abs(q[0] - q[1]), std::abs(q[1] - q[2]), std::abs(q[0] - q[2])});
}

// ---- embeddedness measure ----------------------------------------------------------------------
auto psi(double A_total, double A_i) -> double {
  return A_total / pi * std::sin(pi * A_i / A_total);
}

auto network_node_count(const SpoonNetwork& net) -> std::size_t {
  return (net.loop.size() - 1) + (net.handle.size() - 1);
}

auto network_node(const SpoonNetwork& net, std::size_t index) -> Point2 {
  const std::size_t n = net.loop.size() - 1;
  if (index < n) return net.loop.points[index];
  return net.handle.points.at(index - n + 1);
}

namespace {

// A run of consecutive nodes of one array, walked from `from` to `to` inclusive.
struct Run {
  const std::vector<Point2>* pts = nullptr;
  std::size_t from = 0;
  std::size_t to = 0;
};

// Network paths between two nodes: at most two runs that meet at the junction.
struct Path {
  std::array<Run, 2> runs;
  std::size_t run_count = 1;

  [[nodiscard]] auto nodes() const -> std::vector<Point2> {
    std::vector<Point2> out;
    std::size_t total = 0;
    for (std::size_t r = 0; r < run_count; ++r)
      total += (runs[r].to >= runs[r].from ? runs[r].to - runs[r].from : runs[r].from - runs[r].to) + 1;
    out.reserve(total);
    bool skip = false;
    for (std::size_t r = 0; r < run_count; ++r) {
      const auto& run = runs[r];
      const long step = run.to >= run.from ? 1 : -1;
      for (long i = static_cast<long>(run.from);; i += step) {
        if (!skip) out.push_back((*run.pts)[static_cast<std::size_t>(i)]);
        skip = false;
        if (i == static_cast<long>(run.to)) break;
      }
      skip = true;  // the next run starts at the junction already stored
    }
    return out;
  }
};

struct Crossing {
  double chord_param;
  double path_pos;  // edge index plus fraction along it
  Point2 point;
};

// Area of the region bounded by the path and the chord joining its ends; when
// the chord crosses the path, the sum of the areas of the pieces between
// consecutive crossings.
auto region_area(const Path& path, double signed_twice_area) -> double {
  const auto pts = path.nodes();
  const std::size_t m = pts.size();
  const Point2 a = pts.front();
  const Point2 b = pts.back();
  if (m < 3) return 0.0;
  const double bx0 = std::min(a.x, b.x), bx1 = std::max(a.x, b.x);
  const double by0 = std::min(a.y, b.y), by1 = std::max(a.y, b.y);

  // Side of each node relative to the chord line; only sign changes can cross.
  std::vector<double> side(m);
  for (std::size_t i = 0; i < m; ++i) side[i] = cross(b - a, pts[i] - a);
  std::vector<Crossing> hits;
  for (std::size_t e = 1; e + 2 < m; ++e) {
    if ((side[e] > 0.0 && side[e + 1] > 0.0) || (side[e] < 0.0 && side[e + 1] < 0.0)) continue;
    const Point2 u = pts[e];
    const Point2 v = pts[e + 1];
    if (std::max(u.x, v.x) < bx0 || std::min(u.x, v.x) > bx1 || std::max(u.y, v.y) < by0 ||
        std::min(u.y, v.y) > by1)
      continue;
    if (!segments_intersect(a, b, u, v)) continue;
    const Point2 d = b - a;
    const Point2 w = v - u;
    const double den = cross(d, w);
    double tc = 0.0;
    double tw = 0.0;
    if (den != 0.0) {
      tc = cross(u - a, w) / den;
      tw = cross(u - a, d) / den;
    } else {
      tc = std::clamp(dot(u - a, d) / norm2(d), 0.0, 1.0);
    }
    tc = std::clamp(tc, 0.0, 1.0);
    tw = std::clamp(tw, 0.0, 1.0);
    hits.push_back({tc, static_cast<double>(e) + tw, a + tc * d});
  }
  if (hits.empty()) return 0.5 * std::abs(signed_twice_area);

  std::sort(hits.begin(), hits.end(), [](const Crossing& l, const Crossing& r) { return l.chord_param < r.chord_param; });
  std::vector<Crossing> stops;
  stops.push_back({0.0, 0.0, a});
  stops.insert(stops.end(), hits.begin(), hits.end());
  stops.push_back({1.0, static_cast<double>(m - 1), b});

  double total = 0.0;
  std::vector<Point2> piece;
  for (std::size_t c = 0; c + 1 < stops.size(); ++c) {
    const auto& s0 = stops[c];
    const auto& s1 = stops[c + 1];
    piece.clear();
    piece.push_back(s0.point);
    // Walk the path from s0 to s1 in whichever direction they are ordered.
    if (s0.path_pos <= s1.path_pos) {
      for (std::size_t i = static_cast<std::size_t>(std::floor(s0.path_pos)) + 1;
           static_cast<double>(i) < s1.path_pos; ++i)
        piece.push_back(pts[i]);
    } else {
      for (std::size_t i = static_cast<std::size_t>(std::ceil(s0.path_pos)) - 1;
           static_cast<double>(i) > s1.path_pos; --i)
        piece.push_back(pts[i]);
    }
    piece.push_back(s1.point);
    total += std::abs(signed_area(piece));
  }
  return total;
}

struct Workspace {
  std::vector<Point2> loop;    // local coordinates, l[0] == l[n] == O
  std::vector<Point2> handle;  // local coordinates, h[0] == O
  std::vector<double> SL;      // prefix sums of cross products along the loop
  std::vector<double> SH;
  std::vector<double> LL;  // prefix arclengths
  std::vector<double> LH;
  double loop_twice = 0.0;
  double area = 0.0;

  explicit Workspace(const SpoonNetwork& net) {
    const Point2 origin = loop_centroid(net);
    for (const auto& p : net.loop.points) loop.push_back(p - origin);
    for (const auto& p : net.handle.points) handle.push_back(p - origin);
    SL.assign(loop.size(), 0.0);
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) SL[i + 1] = SL[i] + cross(loop[i], loop[i + 1]);
    SH.assign(handle.size(), 0.0);
    for (std::size_t i = 0; i + 1 < handle.size(); ++i) SH[i + 1] = SH[i] + cross(handle[i], handle[i + 1]);
    LL.assign(loop.size(), 0.0);
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) LL[i + 1] = LL[i] + distance(loop[i], loop[i + 1]);
    LH.assign(handle.size(), 0.0);
    for (std::size_t i = 0; i + 1 < handle.size(); ++i) LH[i + 1] = LH[i] + distance(handle[i], handle[i + 1]);
    loop_twice = SL.back();
    area = 0.5 * std::abs(loop_twice);
  }

  // Lower bound for phi(p, q), p < q: every candidate region, split or not,
  // has area at most (path + chord)^2 / (4 pi), and psi(A, x) <= min(x, A / pi).
  [[nodiscard]] auto phi_lower_bound(std::size_t p, std::size_t q) const -> double {
    const std::size_t nl = n();
    const double chord = distance(node(p), node(q));
    const double c2 = chord * chord;
    auto iso = [&](double path) { return (path + chord) * (path + chord) / (4.0 * pi); };
    if (q < nl) {
      const double arc = LL[q] - LL[p];
      return c2 / std::min(area / pi, iso(std::min(arc, LL.back() - arc)));
    }
    const std::size_t jq = q - nl + 1;
    if (p >= nl) return c2 / iso(LH[jq] - LH[p - nl + 1]);
    return c2 / iso(LH[jq] + std::min(LL[p], LL.back() - LL[p]));
  }

  [[nodiscard]] auto n() const -> std::size_t { return loop.size() - 1; }

  [[nodiscard]] auto node(std::size_t index) const -> Point2 {
    return index < n() ? loop[index] : handle[index - n() + 1];
  }

  [[nodiscard]] auto candidate(const Path& path, double twice) const -> double {
    const double a = region_area(path, twice);
    return a < 1e-14 * area ? 0.0 : a;
  }

  [[nodiscard]] auto phi(std::size_t p, std::size_t q) const -> PhiValue {
    PhiValue out;
    if (p == q) {
      out.pair.kind = p == 0 ? PairKind::JunctionSelf : PairKind::Coincident;
      out.value = p == 0 ? kFourSqrt3 : kInf;
      return out;
    }
    if (p > q) std::swap(p, q);
    const Point2 a = node(p);
    const Point2 b = node(q);
    const double chord2 = norm2(a - b);
    out.pair.chord = std::sqrt(chord2);
    const std::size_t nl = n();

    if (q < nl) {
      // Both on the loop: the two arcs between them.
      out.pair.kind = PairKind::BothOnLoop;
      const double arc1 = SL[q] - SL[p] + cross(loop[q], loop[p]);
      const double arc2 = loop_twice - arc1;
      Path first{{Run{&loop, p, q}}, 1};
      Path second{{Run{&loop, q, nl}, Run{&loop, 0, p}}, 2};
      if (p == 0) second = Path{{Run{&loop, q, nl}}, 1};
      out.pair.areas = {candidate(first, arc1), candidate(second, arc2)};
      const double Ai = std::min(out.pair.areas[0], out.pair.areas[1]);
      if (Ai == 0.0) return out;
      out.value = chord2 / psi(area, std::min(Ai, 0.5 * area));
      return out;
    }

    out.pair.kind = PairKind::Mixed;
    const std::size_t jq = q - nl + 1;  // handle index of q
    if (p >= nl) {
      const std::size_t jp = p - nl + 1;
      const double twice = SH[jq] - SH[jp] + cross(handle[jq], handle[jp]);
      out.pair.areas = {candidate(Path{{Run{&handle, jp, jq}}, 1}, twice)};
    } else if (p == 0) {
      const double twice = SH[jq] + cross(handle[jq], handle[0]);
      out.pair.areas = {candidate(Path{{Run{&handle, 0, jq}}, 1}, twice)};
    } else {
      // Handle back to the junction, then around either side of the loop.
      const double forward = -SH[jq] + SL[p] + cross(loop[p], handle[jq]);
      const double backward = -SH[jq] - (loop_twice - SL[p]) + cross(loop[p], handle[jq]);
      out.pair.areas = {candidate(Path{{Run{&handle, jq, 0}, Run{&loop, 0, p}}, 2}, forward),
                        candidate(Path{{Run{&handle, jq, 0}, Run{&loop, nl, p}}, 2}, backward)};
    }
    const double Apq = *std::min_element(out.pair.areas.begin(), out.pair.areas.end());
    if (Apq > 0.0) out.value = chord2 / Apq;
    return out;
  }
};

}  // namespace

auto phi_pair(const SpoonNetwork& net, std::size_t p, std::size_t q) -> PhiValue {
  const std::size_t count = network_node_count(net);
  if (p >= count || q >= count) throw Error(ErrorKind::InvalidArgument, "node index out of range");
  return Workspace(net).phi(p, q);
}

auto embeddedness_measure(const SpoonNetwork& net) -> Embeddedness {
  const Workspace ws(net);
  const std::size_t count = network_node_count(net);
  Embeddedness best;  // the junction self-pair
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t q = p + 1; q < count; ++q) {
      if (ws.phi_lower_bound(p, q) >= best.value) continue;
      const double v = ws.phi(p, q).value;
      if (v < best.value) best = {v, p, q};
    }
  }
  return best;
}

auto chord_tangent_angles(const SpoonNetwork& net, std::size_t p, std::size_t q) -> PairAngles {
  const std::size_t nl = net.loop.size() - 1;
  auto tangent = [&](std::size_t index) {
    if (index < nl) return frame(net.loop).tau[index];
    return frame(net.handle).tau[index - nl + 1];
  };
  const Point2 chord = network_node(net, q) - network_node(net, p);
  auto angle = [&](Point2 t) { return std::acos(std::clamp(dot(normalized(chord), t), -1.0, 1.0)); };
  return {angle(tangent(p)), angle(tangent(q))};
}

// ---- Gaussian density --------------------------------------------------------------------------
auto heat_kernel(Point2 x, Point2 x0, double tau) -> double {
  return std::exp(-norm2(x - x0) / (4.0 * tau)) / std::sqrt(4.0 * pi * tau);
}

auto gaussian_density(std::span<const Polyline> curves, Point2 x0, double t, double T) -> double {
  if (!(t < T)) throw Error(ErrorKind::InvalidTime, "density requested at t >= T");
  const double tau = T - t;
  double sum = 0.0;
  for (const auto& c : curves)
    for (std::size_t e = 0; e < c.edge_count(); ++e) {
      const Point2 a = c.edge_start(e);
      const Point2 b = c.edge_end(e);
      sum += 0.5 * (heat_kernel(a, x0, tau) + heat_kernel(b, x0, tau)) * distance(a, b);
    }
  return sum;
}

auto gaussian_density(const SpoonNetwork& net, Point2 x0, double t, double T) -> double {
  const std::array<Polyline, 2> curves{net.loop, net.handle};
  return gaussian_density(curves, x0, t, T);
}

auto rescaled_density(std::span<const Polyline> curves) -> double {
  // The rescaled kernel is the backward kernel with 4 tau = 2.
  return gaussian_density(curves, Point2{}, 0.0, 0.5);
}

auto boundary_term(const SpoonNetwork& net, Point2 x0, double t, double T) -> double {
  if (!(t < T)) throw Error(ErrorKind::InvalidTime, "boundary term requested at t >= T");
  const double tau = T - t;
  const auto& h = net.handle.points;
  const std::size_t m = h.size();
  const Point2 tP = parabola_fit(h[m - 3], h[m - 2], h[m - 1], 2).tangent;
  const Point2 P = h.back();
  return dot((P - x0) / (2.0 * tau), tP) * heat_kernel(P, x0, tau);
}

namespace {
template <class Weight>
auto weighted_dissipation(const SpoonNetwork& net, Weight&& w) -> double {
  double sum = 0.0;
  for (const auto* c : {&net.loop, &net.handle}) {
    const auto f = frame(*c);
    for (std::size_t i = 0; i < f.k.size(); ++i) sum += w(c->points[i], f.k[i], f.nu[i]) * f.ds[i];
  }
  return sum;
}
}  // namespace

auto dissipation(const SpoonNetwork& net, Point2 x0, double t, double T) -> double {
  if (!(t < T)) throw Error(ErrorKind::InvalidTime, "dissipation requested at t >= T");
  const double tau = T - t;
  return weighted_dissipation(net, [&](Point2 x, double k, Point2 nu) {
    const double v = k + dot(x - x0, nu) / (2.0 * tau);
    return v * v * heat_kernel(x, x0, tau);
  });
}

auto rescaled_dissipation(const SpoonNetwork& rescaled) -> double {
  return weighted_dissipation(rescaled, [](Point2 x, double k, Point2 nu) {
    const double v = k + dot(x, nu);
    return v * v * std::exp(-0.5 * norm2(x));
  });
}

auto monotonicity_residual(std::span<const TimedNetwork> window, Point2 x0, double T)
    -> std::vector<MonotonicityInterval> {
  if (window.size() < 3) throw Error(ErrorKind::InvalidArgument, "monotonicity window needs at least 3 snapshots");
  for (const auto& w : window)
    if (!(w.t < T)) throw Error(ErrorKind::InvalidTime, "snapshot at or after T");

  std::vector<double> theta, rhs, bnd;
  for (const auto& w : window) {
    theta.push_back(gaussian_density(*w.net, x0, w.t, T));
    const double b = boundary_term(*w.net, x0, w.t, T);
    bnd.push_back(b);
    rhs.push_back(-dissipation(*w.net, x0, w.t, T) + b);
  }
  std::vector<MonotonicityInterval> out;
  for (std::size_t i = 0; i + 1 < window.size(); ++i) {
    MonotonicityInterval iv;
    iv.t0 = window[i].t;
    iv.t1 = window[i + 1].t;
    iv.dtheta_dt = (theta[i + 1] - theta[i]) / (iv.t1 - iv.t0);
    iv.rhs = 0.5 * (rhs[i] + rhs[i + 1]);
    iv.boundary = 0.5 * (bnd[i] + bnd[i + 1]);
    iv.residual = iv.dtheta_dt - iv.rhs;
    out.push_back(iv);
  }
  return out;
}

auto dL_residual(std::span<const TimedNetwork> window) -> std::vector<LengthLawInterval> {
  std::vector<double> L, k2;
  for (const auto& w : window) {
    L.push_back(length(w.net->loop) + length(w.net->handle));
    k2.push_back(curve_integrals(w.net->loop).k2 + curve_integrals(w.net->handle).k2);
  }
  std::vector<LengthLawInterval> out;
  for (std::size_t i = 0; i + 1 < window.size(); ++i) {
    LengthLawInterval iv;
    iv.t0 = window[i].t;
    iv.t1 = window[i + 1].t;
    iv.dL_dt = (L[i + 1] - L[i]) / (iv.t1 - iv.t0);
    iv.k2 = 0.5 * (k2[i] + k2[i + 1]);
    iv.residual = iv.dL_dt + iv.k2;
    out.push_back(iv);
  }
  return out;
}

// ---- monitor records ---------------------------------------------------------------------------
auto monitor_record(const SpoonNetwork& net, double t, bool with_E, const std::optional<Point2>& center,
                    double T) -> MonitorRecord {
  MonitorRecord r;
  r.t = t;
  const auto loop = curve_integrals(net.loop);
  const auto handle = curve_integrals(net.handle);
  r.L1 = loop.length;
  r.L2 = handle.length;
  r.L = r.L1 + r.L2;
  r.A = loop_area(net);
  r.k2_loop = loop.k2;
  r.k2_total = loop.k2 + handle.k2;
  r.turning_loop = loop.turning;
  if (with_E) r.E = embeddedness_measure(net).value;
  if (center && t < T) r.theta_x0 = gaussian_density(net, *center, t, T);
  r.cond4_residual = cond4_residual(net);
  const Point2 c = loop_centroid(net);
  r.cx = c.x;
  r.cy = c.y;
  return r;
}

namespace {
constexpr std::array<const char*, 14> kColumns{"t",  "L1", "L2",       "L",          "A",           "k2_loop",
                                               "k2_total", "turning_loop", "E", "theta_x0", "dL_residual",
                                               "cond4_residual", "cx", "cy"};

auto fields(MonitorRecord& r) -> std::array<double*, 14> {
  return {&r.t,      &r.L1,       &r.L2,          &r.L,  &r.A,  &r.k2_loop, &r.k2_total, &r.turning_loop,
          &r.E,      &r.theta_x0, &r.dL_residual, &r.cond4_residual, &r.cx, &r.cy};
}

auto format_double(double v) -> std::string {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}
}  // namespace

auto monitor_csv_header() -> std::string {
  std::string out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i) out += ',';
    out += kColumns[i];
  }
  return out;
}

auto monitor_csv_row(const MonitorRecord& r) -> std::string {
  auto copy = r;
  std::string out;
  const auto f = fields(copy);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += ',';
    out += format_double(*f[i]);
  }
  return out;
}

auto parse_monitor_csv(const std::string& text) -> std::vector<MonitorRecord> {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != monitor_csv_header())
    throw Error(ErrorKind::IoError, "monitors.csv header mismatch");
  std::vector<MonitorRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    MonitorRecord r;
    const auto f = fields(r);
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto res = std::from_chars(p, end, *f[i]);
      if (res.ec != std::errc{}) throw Error(ErrorKind::IoError, "bad number in monitors.csv: " + line);
      p = res.ptr;
      if (i + 1 < f.size()) {
        if (p == end || *p != ',') throw Error(ErrorKind::IoError, "short row in monitors.csv: " + line);
        ++p;
      }
    }
    out.push_back(r);
  }
  return out;
}

auto singular_time(double area) -> double { return 3.0 * area / (5.0 * pi); }

}  // namespace spoonflow
