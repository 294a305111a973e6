#include "spoonflow/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spoonflow/error.hpp"

namespace spoonflow {

using std::numbers::pi;

auto to_string(LimitClass c) -> std::string_view {
  switch (c) {
    case LimitClass::HalfLine: return "HalfLine";
    case LimitClass::Line: return "Line";
    case LimitClass::FlatTriod: return "FlatTriod";
    case LimitClass::BrakkeSpoon: return "BrakkeSpoon";
    case LimitClass::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

// ---- singular point ----------------------------------------------------------------------------
auto estimate_singularity(std::span<const MonitorRecord> monitors, StopKind stop) -> SingularityEstimate {
  if (stop != StopKind::AreaVanishing) {
    throw Error(ErrorKind::WrongStopReason,
                "singularity estimate needs a run ended by AreaVanishing, got " + std::string(to_string(stop)));
  }
  if (monitors.empty()) throw Error(ErrorKind::InvalidArgument, "no monitor records");

  SingularityEstimate est;
  const auto& last = monitors.back();
  est.T_initial_area = monitors.front().t + singular_time(monitors.front().A);
  est.T_est = last.t + singular_time(last.A);

  const double t_from = last.t - 0.2 * (last.t - monitors.front().t);
  // Least squares of c = x0 + b * sqrt(T - t) per coordinate.
  double s1 = 0, sw = 0, sww = 0, sx = 0, swx = 0, sy = 0, swy = 0;
  for (const auto& r : monitors) {
    if (r.t < t_from) continue;
    const double w = std::sqrt(std::max(0.0, est.T_est - r.t));
    s1 += 1;
    sw += w;
    sww += w * w;
    sx += r.cx;
    swx += w * r.cx;
    sy += r.cy;
    swy += w * r.cy;
  }
  est.fit_records = static_cast<std::size_t>(s1);
  const double det = s1 * sww - sw * sw;
  if (s1 < 2 || std::abs(det) < 1e-300) {
    est.x0 = {last.cx, last.cy};
    return est;
  }
  est.x0 = {(sww * sx - sw * swx) / det, (sww * sy - sw * swy) / det};
  return est;
}

auto frak_time(double t, double T) -> double {
  if (!(t < T)) throw Error(ErrorKind::InvalidTime, "rescaled time needs t < T");
  return -0.5 * std::log(T - t);
}

auto rescale_network(const SpoonNetwork& net, Point2 x0, double tau) -> SpoonNetwork {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidTime, "rescaling needs T - t > 0");
  const double s = 1.0 / std::sqrt(2.0 * tau);
  auto map = [&](Point2 p) { return s * (p - x0); };
  SpoonNetwork out = net;
  for (auto& p : out.loop.points) p = map(p);
  for (auto& p : out.handle.points) p = map(p);
  if (net.domain.is_disc()) {
    out.domain = ConvexDomain(Disc{map(net.domain.disc().center), s * net.domain.disc().radius});
  } else {
    ConvexPolygon poly = net.domain.polygon();
    for (auto& v : poly.vertices) v = map(v);
    out.domain = ConvexDomain(std::move(poly));
  }
  return out;
}

auto rescale_trajectory(std::span<const Snapshot> snapshots, Point2 x0, double T, std::span<const double> frak_grid)
    -> std::vector<RescaledSnapshot> {
  std::vector<double> frak;
  for (const auto& s : snapshots) {
    if (!(s.t < T)) {
      std::ostringstream msg;
      msg << "snapshot at t = " << s.t << " is not before T = " << T;
      throw Error(ErrorKind::InvalidTime, msg.str());
    }
    frak.push_back(frak_time(s.t, T));
  }
  std::vector<RescaledSnapshot> out;
  if (snapshots.empty()) return out;
  std::size_t previous = snapshots.size();
  for (double g : frak_grid) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < frak.size(); ++i)
      if (std::abs(frak[i] - g) < std::abs(frak[best] - g)) best = i;
    if (best == previous) continue;
    if (!out.empty() && frak[best] <= out.back().frak_t) continue;
    previous = best;
    out.push_back({frak[best], snapshots[best].t, rescale_network(snapshots[best].net, x0, T - snapshots[best].t)});
  }
  return out;
}

// ---- clipping and fitting ----------------------------------------------------------------------
auto clip_to_disc(std::span<const Polyline> curves, double radius) -> std::vector<Segment> {
  std::vector<Segment> out;
  const double r2 = radius * radius;
  for (const auto& c : curves) {
    for (std::size_t e = 0; e < c.edge_count(); ++e) {
      const Point2 a = c.edge_start(e);
      const Point2 b = c.edge_end(e);
      const bool ia = norm2(a) <= r2;
      const bool ib = norm2(b) <= r2;
      if (ia && ib) {
        out.push_back({a, b});
        continue;
      }
      // |a + u (b - a)|^2 = r^2
      const Point2 d = b - a;
      const double qa = norm2(d);
      if (qa == 0.0) continue;
      const double qb = 2.0 * dot(a, d);
      const double qc = norm2(a) - r2;
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc <= 0.0) continue;
      const double root = std::sqrt(disc);
      const double u0 = std::max(0.0, (-qb - root) / (2.0 * qa));
      const double u1 = std::min(1.0, (-qb + root) / (2.0 * qa));
      if (u0 >= u1) continue;
      out.push_back({a + u0 * d, a + u1 * d});
    }
  }
  return out;
}

namespace {

auto rotate_all(std::span<const Segment> segs, double angle) -> std::vector<Segment> {
  std::vector<Segment> out(segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) out[i] = {rotated(segs[i].a, angle), rotated(segs[i].b, angle)};
  return out;
}

// Candidate geometry before rotation, already clipped to the window.
auto candidate_segments(LimitClass kind, const ShrinkerProfile& profile, double radius) -> std::vector<Segment> {
  std::vector<Polyline> curves;
  switch (kind) {
    case LimitClass::Line: curves = flat_polylines(FlatKind::Line, radius, 0.0, radius / 40.0); break;
    case LimitClass::HalfLine: curves = flat_polylines(FlatKind::HalfLine, radius, 0.0, radius / 40.0); break;
    case LimitClass::FlatTriod: curves = flat_polylines(FlatKind::FlatTriod, radius, 0.0, radius / 40.0); break;
    case LimitClass::BrakkeSpoon: {
      curves = profile_polylines(profile, radius, radius / 40.0);
      // A coarser copy of the loop keeps the fit cheap.
      const std::size_t n = std::min<std::size_t>(curves[0].size(), 400);
      curves[0] = resample(curves[0], n);
      break;
    }
    case LimitClass::Inconclusive: break;
  }
  return clip_to_disc(curves, radius);
}

// Angle of the candidate's reference direction in its own frame.
auto candidate_reference(LimitClass kind) -> double { return kind == LimitClass::BrakkeSpoon ? pi : 0.0; }

// Direction of the handle of the data, from the junction toward the endpoint.
auto data_reference(const SpoonNetwork& net) -> double {
  return angle_of(net.handle.points.back() - net.handle.points.front());
}

}  // namespace

auto fit_candidate(const SpoonNetwork& rescaled, LimitClass kind, const ShrinkerProfile& profile,
                   const ClassifyOptions& opts) -> CandidateFit {
  CandidateFit fit{kind, kInf, 0.0};
  // Very fine data is thinned to a resolution far below the fit thresholds.
  constexpr std::size_t kMaxFitNodes = 1000;
  auto thin = [](const Polyline& c) { return c.size() > kMaxFitNodes ? resample(c, kMaxFitNodes) : c; };
  const std::array<Polyline, 2> curves{thin(rescaled.loop), thin(rescaled.handle)};
  const auto data = clip_to_disc(curves, opts.window_radius);
  const auto base = candidate_segments(kind, profile, opts.window_radius);
  if (data.empty() || base.empty()) return fit;

  auto cost = [&](double angle) { return hausdorff_distance(data, rotate_all(base, angle)); };
  const double ref = data_reference(rescaled) - candidate_reference(kind);
  const double step = 2.0 * pi / static_cast<double>(opts.coarse_angles);
  std::size_t best_i = 0;
  double best = kInf;
  for (std::size_t i = 0; i < opts.coarse_angles; ++i) {
    const double c = cost(ref + step * static_cast<double>(i));
    if (c < best) {
      best = c;
      best_i = i;
    }
  }
  // Golden-section refinement on the bracket around the best coarse angle.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = ref + step * (static_cast<double>(best_i) - 1.0);
  double b = ref + step * (static_cast<double>(best_i) + 1.0);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = cost(c);
  double fd = cost(d);
  while (b - a > opts.angle_tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = cost(d);
    }
  }
  const double angle = 0.5 * (a + b);
  const double refined = cost(angle);
  if (refined < best) {
    fit.distance = refined;
    fit.rotation = angle;
  } else {
    fit.distance = best;
    fit.rotation = ref + step * static_cast<double>(best_i);
  }
  return fit;
}

auto classify_limit(std::span<const RescaledSnapshot> rescaled, const ShrinkerProfile& profile,
                    const ClassifyOptions& opts) -> BlowupReport {
  BlowupReport rep;
  rep.thresholds = opts;
  rep.spoon_density = spoon_gaussian_density(profile);
  if (rescaled.empty()) {
    rep.note = "no rescaled snapshots";
    return rep;
  }
  constexpr std::array<LimitClass, 4> kinds{LimitClass::HalfLine, LimitClass::Line, LimitClass::FlatTriod,
                                            LimitClass::BrakkeSpoon};

  std::vector<std::array<double, 4>> per_kind;
  for (const auto& snap : rescaled) {
    const std::array<Polyline, 2> curves{snap.net.loop, snap.net.handle};
    rep.frak_t.push_back(snap.frak_t);
    rep.density_series.push_back(rescaled_density(curves));
    rep.dissipation_series.push_back(rescaled_dissipation(snap.net));
    std::array<double, 4> d{};
    for (std::size_t k = 0; k < kinds.size(); ++k) d[k] = fit_candidate(snap.net, kinds[k], profile, opts).distance;
    per_kind.push_back(d);
  }
  for (auto kind : kinds) rep.final_fits.push_back(fit_candidate(rescaled.back().net, kind, profile, opts));

  const auto best_it = std::min_element(rep.final_fits.begin(), rep.final_fits.end(),
                                        [](const CandidateFit& l, const CandidateFit& r) { return l.distance < r.distance; });
  const auto best_k = static_cast<std::size_t>(best_it - rep.final_fits.begin());
  rep.final_distance = best_it->distance;
  for (const auto& d : per_kind) rep.distance_series.push_back(d[best_k]);

  const std::array<Polyline, 2> last{rescaled.back().net.loop, rescaled.back().net.handle};
  rep.empty_window = clip_to_disc(last, opts.window_radius).empty();

  // Oscillation: repeated reversals of a sizeable amplitude over the second half.
  const std::size_t half = rep.distance_series.size() / 2;
  int reversals = 0;
  double lo = kInf, hi = -kInf;
  for (std::size_t i = half; i < rep.distance_series.size(); ++i) {
    lo = std::min(lo, rep.distance_series[i]);
    hi = std::max(hi, rep.distance_series[i]);
    if (i >= half + 2) {
      const double d1 = rep.distance_series[i - 1] - rep.distance_series[i - 2];
      const double d2 = rep.distance_series[i] - rep.distance_series[i - 1];
      if (d1 * d2 < 0.0) ++reversals;
    }
  }
  rep.oscillating = reversals >= 3 && (hi - lo) > 0.5 * opts.accept_distance;

  const double span = rep.frak_t.back() - rep.frak_t.front();
  std::ostringstream note;
  if (rep.empty_window) {
    note << "window of radius " << opts.window_radius << " is empty";
  } else if (!(rep.final_distance < opts.accept_distance)) {
    note << "no candidate within " << opts.accept_distance;
  } else if (rep.oscillating) {
    note << "distance series oscillates";
  } else if (rescaled.size() < 5 || span < 2.0) {
    note << "needs at least 5 snapshots over 2 units of rescaled time (have " << rescaled.size() << " over "
         << span << ")";
  } else {
    rep.limit_class = kinds[best_k];
    note << "best fit " << to_string(rep.limit_class) << " at distance " << rep.final_distance;
  }
  rep.note = note.str();
  return rep;
}

auto analyze_blowup(std::span<const Snapshot> snapshots, std::span<const MonitorRecord> monitors, StopKind stop,
                    const ShrinkerProfile& profile, const BlowupOptions& opts) -> BlowupReport {
  const auto est = estimate_singularity(monitors, stop);
  std::vector<Snapshot> before;
  for (const auto& s : snapshots)
    if (s.t < est.T_est) before.push_back(s);
  BlowupReport rep;
  if (!before.empty()) {
    const double begin = opts.frak_begin.value_or(frak_time(before.front().t, est.T_est));
    const double end = opts.frak_end.value_or(frak_time(before.back().t, est.T_est));
    std::vector<double> grid;
    for (double g = begin; g <= end + 1e-12; g += opts.grid_step) grid.push_back(g);
    const auto rescaled = rescale_trajectory(before, est.x0, est.T_est, grid);
    rep = classify_limit(rescaled, profile, opts.classify);
  } else {
    rep = classify_limit({}, profile, opts.classify);
  }
  rep.x0 = est.x0;
  rep.T_est = est.T_est;
  return rep;
}

auto accumulated_boundary_term(std::span<const Snapshot> snapshots, Point2 x0, double T, bool rescaled)
    -> std::vector<double> {
  const std::size_t n = snapshots.size();
  std::vector<double> var(n), value(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = snapshots[i];
    if (!(s.t < T)) throw Error(ErrorKind::InvalidTime, "snapshot at or after T");
    if (rescaled) {
      const double tau = T - s.t;
      const auto& h = s.net.handle.points;
      const std::size_t m = h.size();
      const Point2 tP = parabola_fit(h[m - 3], h[m - 2], h[m - 1], 2).tangent;
      const Point2 Pt = (h.back() - x0) / std::sqrt(2.0 * tau);
      var[i] = frak_time(s.t, T);
      value[i] = dot(Pt, tP) * std::exp(-0.5 * norm2(Pt));
    } else {
      var[i] = s.t;
      value[i] = boundary_term(s.net, x0, s.t, T);
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) out[i] = out[i + 1] + 0.5 * (value[i] + value[i + 1]) * (var[i + 1] - var[i]);
  return out;
}

}  // namespace spoonflow
