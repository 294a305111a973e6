#include "spoonflow/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <string>

#include "spoonflow/error.hpp"

namespace spoonflow {

namespace {

constexpr double kDegenerateRelative = 1e-14;

// ---- exact orientation -------------------------------------------------------------------------
// Shewchuk-style expansion arithmetic: every difference and product is split into an exact
// head/tail pair, and the sixteen resulting terms are accumulated without rounding.

struct TwoTerm {
  double head;
  double tail;
};

auto two_sum(double a, double b) -> TwoTerm {
  const double x  = a + b;
  const double bv = x - a;
  const double av = x - bv;
  return {x, (a - av) + (b - bv)};
}

auto two_product(double a, double b) -> TwoTerm {
  const double x = a * b;
  return {x, std::fma(a, b, -x)};
}

void grow_expansion(std::vector<double>& e, double b) {
  double q = b;
  std::size_t out = 0;
  for (double component : e) {
    const auto [sum, err] = two_sum(q, component);
    q = sum;
    if (err != 0.0) e[out++] = err;
  }
  e.resize(out);
  if (q != 0.0) e.push_back(q);
}

auto orient2d_exact(Point2 a, Point2 b, Point2 c) -> int {
  const TwoTerm acx = two_sum(a.x, -c.x);
  const TwoTerm bcy = two_sum(b.y, -c.y);
  const TwoTerm acy = two_sum(a.y, -c.y);
  const TwoTerm bcx = two_sum(b.x, -c.x);
  const std::array<double, 2> l1{acx.head, acx.tail};
  const std::array<double, 2> l2{bcy.head, bcy.tail};
  const std::array<double, 2> r1{acy.head, acy.tail};
  const std::array<double, 2> r2{bcx.head, bcx.tail};

  std::vector<double> expansion;
  expansion.reserve(17);
  for (double u : l1) {
    for (double v : l2) {
      const auto [p, e] = two_product(u, v);
      grow_expansion(expansion, e);
      grow_expansion(expansion, p);
    }
  }
  for (double u : r1) {
    for (double v : r2) {
      const auto [p, e] = two_product(u, v);
      grow_expansion(expansion, -e);
      grow_expansion(expansion, -p);
    }
  }
  if (expansion.empty()) return 0;
  return expansion.back() > 0.0 ? 1 : -1;
}

auto on_segment(Point2 p, Point2 q, Point2 r) -> bool {
  // q collinear with p, r: inside the bounding box means on the segment.
  return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
         q.y <= std::max(p.y, r.y);
}

auto shares_endpoint(const Segment& s, const Segment& t) -> bool {
  return s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b;
}

void check_edges(const Polyline& curve, std::span<const double> edges) {
  const double total = std::accumulate(edges.begin(), edges.end(), 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!(edges[e] > kDegenerateRelative * total)) {
      throw Error(ErrorKind::DegenerateEdge,
                  "edge " + std::to_string(e) + " of a " + std::to_string(curve.size()) +
                      "-node polyline has length " + std::to_string(edges[e]));
    }
  }
}

}  // namespace

// -------------------------------------------------------------------------------------------------
auto parabola_fit(Point2 p0, Point2 p1, Point2 p2, int at) -> ParabolaFit {
  const double h1 = distance(p0, p1);
  const double h2 = distance(p1, p2);
  Point2 first;
  Point2 second;
  if (at == 1) {
    const Point2 dp = p2 - p1;
    const Point2 dm = p1 - p0;
    const double denom = h1 * h2 * (h1 + h2);
    first  = (h1 * h1 * dp + h2 * h2 * dm) / denom;
    second = 2.0 * (h1 * dp - h2 * dm) / denom;
  } else {
    // Nodes at arclength 0, u1, u2 measured from the evaluation end.
    const bool from_start = (at == 0);
    const Point2 base = from_start ? p0 : p2;
    const Point2 near = p1;
    const Point2 far  = from_start ? p2 : p0;
    const double u1 = from_start ? h1 : h2;
    const double u2 = h1 + h2;
    const Point2 e1 = near - base;
    const Point2 e2 = far - base;
    const double det = u1 * u2 * (u2 - u1);
    first  = (u2 * u2 * e1 - u1 * u1 * e2) / det;
    second = 2.0 * (u1 * e2 - u2 * e1) / det;
    if (!from_start) first = -first;
  }
  const double speed = norm(first);
  return {first / speed, cross(first, second) / (speed * speed * speed), first, second};
}

auto edge_lengths(const Polyline& curve) -> std::vector<double> {
  std::vector<double> out(curve.edge_count());
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = distance(curve.edge_start(e), curve.edge_end(e));
  return out;
}

auto length(const Polyline& curve) -> double {
  const auto edges = edge_lengths(curve);
  return std::accumulate(edges.begin(), edges.end(), 0.0);
}

auto frame(const Polyline& curve) -> CurveFrame {
  const std::size_t n = curve.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "frame needs at least 3 nodes");
  const auto edges = edge_lengths(curve);
  check_edges(curve, edges);

  CurveFrame f;
  f.s.resize(n);
  f.tau.resize(n);
  f.nu.resize(n);
  f.k.resize(n);
  f.ds.resize(n);
  f.s[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) f.s[i] = f.s[i - 1] + edges[i - 1];

  const auto& p = curve.points;
  for (std::size_t i = 0; i < n; ++i) {
    ParabolaFit fit;
    if (curve.closed) {
      fit = parabola_fit(p[(i + n - 1) % n], p[i], p[(i + 1) % n], 1);
      f.ds[i] = 0.5 * (edges[(i + n - 1) % n] + edges[i]);
    } else if (i == 0) {
      fit = parabola_fit(p[0], p[1], p[2], 0);
      f.ds[i] = 0.5 * edges[0];
    } else if (i == n - 1) {
      fit = parabola_fit(p[n - 3], p[n - 2], p[n - 1], 2);
      f.ds[i] = 0.5 * edges[n - 2];
    } else {
      fit = parabola_fit(p[i - 1], p[i], p[i + 1], 1);
      f.ds[i] = 0.5 * (edges[i - 1] + edges[i]);
    }
    f.tau[i] = fit.tangent;
    f.nu[i]  = rot90(fit.tangent);
    f.k[i]   = fit.curvature;
  }
  return f;
}

// -------------------------------------------------------------------------------------------------
auto signed_area(std::span<const Point2> pts) -> double {
  if (pts.size() < 3) return 0.0;
  // Relative to the first node to limit cancellation for far-away polygons.
  const Point2 origin = pts.front();
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) twice += cross(pts[i] - origin, pts[i + 1] - origin);
  return 0.5 * twice;
}

auto centroid(std::span<const Point2> pts) -> Point2 {
  if (pts.empty()) return {};
  const Point2 origin = pts.front();
  double twice_area = 0.0;
  Point2 acc;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Point2 a = pts[i] - origin;
    const Point2 b = pts[i + 1] - origin;
    const double c = cross(a, b);
    twice_area += c;
    acc += c * (a + b);
  }
  if (std::abs(twice_area) < 1e-300) {
    Point2 mean;
    for (const auto& q : pts) mean += q;
    return mean / static_cast<double>(pts.size());
  }
  return origin + acc / (3.0 * twice_area);
}

auto enclosed_area(const Polyline& loop) -> double {
  if (!loop.closed) throw Error(ErrorKind::NotClosed, "enclosed_area requires a closed polyline");
  const auto segs = segments(loop);
  if (!segments_intersect_scan(segs).empty()) {
    throw Error(ErrorKind::SelfIntersecting, "enclosed_area requires a simple polyline");
  }
  return std::abs(signed_area(loop.points));
}

// -------------------------------------------------------------------------------------------------
namespace {

struct Cursor {
  std::size_t edge = 0;
  Point2 at;
};

// Advances to the first point further along the curve at distance h from the
// cursor. Returns false when the curve ends first.
auto march(const Polyline& curve, Cursor& cur, double h) -> bool {
  const Point2 from = cur.at;
  Point2 a = from;
  for (std::size_t e = cur.edge; e < curve.edge_count(); ++e) {
    const Point2 b = curve.edge_end(e);
    if (distance(from, b) >= h) {
      const Point2 d = b - a;
      const Point2 f = a - from;
      const double qa = norm2(d);
      const double qb = 2.0 * dot(f, d);
      const double qc = norm2(f) - h * h;
      const double u = std::clamp((-qb + std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc))) / (2.0 * qa), 0.0, 1.0);
      cur = {e, a + u * d};
      return true;
    }
    a = b;
  }
  return false;
}

}  // namespace

auto resample(const Polyline& curve, std::size_t n) -> Polyline {
  if (n < (curve.closed ? 3u : 2u)) throw Error(ErrorKind::InvalidArgument, "resample needs more nodes");
  if (curve.size() < 2) throw Error(ErrorKind::InvalidArgument, "resample needs at least 2 nodes");
  const auto edges = edge_lengths(curve);
  check_edges(curve, edges);
  const double total = std::accumulate(edges.begin(), edges.end(), 0.0);

  // Equal chords: bisection on the chord h so that the last chord closes
  // exactly on the end (open) or the start (closed).
  const std::size_t chords = curve.closed ? n : n - 1;
  const Point2 target = curve.closed ? curve.points.front() : curve.points.back();
  std::vector<Point2> nodes;
  auto place = [&](double h) -> double {
    nodes.assign(1, curve.points.front());
    Cursor cur{0, curve.points.front()};
    for (std::size_t j = 1; j < chords; ++j) {
      if (!march(curve, cur, h)) return -1.0;
      nodes.push_back(cur.at);
    }
    return distance(cur.at, target) - h;
  };
  double lo = 0.0;
  double hi = total / static_cast<double>(chords);
  if (place(hi) > 0.0) hi *= 1.0 + 1e-12;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (place(mid) > 0.0 ? lo : hi) = mid;
  }
  if (place(lo) < 0.0) throw Error(ErrorKind::DegenerateEdge, "resample failed to place the nodes");

  Polyline out;
  out.closed = curve.closed;
  out.points = std::move(nodes);
  if (!curve.closed) out.points.push_back(curve.points.back());
  return out;
}

// -------------------------------------------------------------------------------------------------
auto point_segment_distance(Point2 p, Point2 a, Point2 b) -> double {
  const Point2 ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return distance(p, a);
  const double u = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + u * ab);
}

auto segments(const Polyline& curve) -> std::vector<Segment> {
  std::vector<Segment> out(curve.edge_count());
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = {curve.edge_start(e), curve.edge_end(e)};
  return out;
}

namespace {
auto directed_distance(std::span<const Segment> from, std::span<const Segment> to) -> double {
  double worst = 0.0;
  auto probe = [&](Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : to) {
      best = std::min(best, point_segment_distance(p, s.a, s.b));
      if (best <= worst) return;  // cannot raise the maximum
    }
    worst = std::max(worst, best);
  };
  for (const auto& s : from) {
    probe(s.a);
    probe(s.b);
  }
  return worst;
}
}  // namespace

auto hausdorff_distance(std::span<const Segment> a, std::span<const Segment> b) -> double {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed_distance(a, b), directed_distance(b, a));
}

auto polyline_distance(const Polyline& a, const Polyline& b) -> double {
  auto sa = segments(a);
  auto sb = segments(b);
  // Single-node polylines still contribute their vertex.
  if (sa.empty() && !a.points.empty()) sa.push_back({a.points[0], a.points[0]});
  if (sb.empty() && !b.points.empty()) sb.push_back({b.points[0], b.points[0]});
  return hausdorff_distance(sa, sb);
}

// -------------------------------------------------------------------------------------------------
auto orient2d(Point2 a, Point2 b, Point2 c) -> int {
  const double left  = (a.x - c.x) * (b.y - c.y);
  const double right = (a.y - c.y) * (b.x - c.x);
  const double det   = left - right;
  const double bound = 3.3306690738754716e-16 * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return orient2d_exact(a, b, c);
}

auto segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) -> bool {
  const int o1 = orient2d(p1, p2, q1);
  const int o2 = orient2d(p1, p2, q2);
  const int o3 = orient2d(q1, q2, p1);
  const int o4 = orient2d(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, q1, p2)) return true;
  if (o2 == 0 && on_segment(p1, q2, p2)) return true;
  if (o3 == 0 && on_segment(q1, p1, q2)) return true;
  if (o4 == 0 && on_segment(q1, p2, q2)) return true;
  return false;
}

auto segments_intersect_scan(std::span<const Segment> edges) -> std::vector<IntersectingPair> {
  // Sweep over x-intervals; only overlapping boxes reach the exact test.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  auto xmin = [&](std::size_t i) { return std::min(edges[i].a.x, edges[i].b.x); };
  auto xmax = [&](std::size_t i) { return std::max(edges[i].a.x, edges[i].b.x); };
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xmin(i) < xmin(j); });

  std::vector<IntersectingPair> hits;
  for (std::size_t u = 0; u < order.size(); ++u) {
    const std::size_t i = order[u];
    const double right = xmax(i);
    const double ylo = std::min(edges[i].a.y, edges[i].b.y);
    const double yhi = std::max(edges[i].a.y, edges[i].b.y);
    for (std::size_t v = u + 1; v < order.size() && xmin(order[v]) <= right; ++v) {
      const std::size_t j = order[v];
      if (std::max(edges[j].a.y, edges[j].b.y) < ylo || std::min(edges[j].a.y, edges[j].b.y) > yhi) continue;
      if (shares_endpoint(edges[i], edges[j])) continue;
      if (segments_intersect(edges[i].a, edges[i].b, edges[j].a, edges[j].b)) {
        hits.push_back({std::min(i, j), std::max(i, j)});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const IntersectingPair& l, const IntersectingPair& r) {
    return l.first != r.first ? l.first < r.first : l.second < r.second;
  });
  return hits;
}

auto segments_intersect_scan(std::span<const Polyline> curves) -> std::vector<IntersectingPair> {
  std::vector<Segment> all;
  for (const auto& c : curves) {
    const auto s = segments(c);
    all.insert(all.end(), s.begin(), s.end());
  }
  return segments_intersect_scan(all);
}

}  // namespace spoonflow
