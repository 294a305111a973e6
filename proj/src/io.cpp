#include "spoonflow/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "spoonflow/error.hpp"

namespace spoonflow::io {

using json = nlohmann::ordered_json;

namespace {

auto point_json(Point2 p) -> json { return json::array({p.x, p.y}); }

auto number(const json& j) -> double {
  if (j.is_null()) return kNaN;
  if (!j.is_number()) throw Error(ErrorKind::IoError, "expected a number, got " + j.dump());
  return j.get<double>();
}

auto point_from(const json& j) -> Point2 {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::IoError, "expected [x, y], got " + j.dump());
  return {number(j[0]), number(j[1])};
}

auto polyline_json(const Polyline& p) -> json {
  json pts = json::array();
  for (const auto& q : p.points) pts.push_back(point_json(q));
  return json{{"closed", p.closed}, {"points", std::move(pts)}};
}

auto polyline_from(const json& j) -> Polyline {
  Polyline out;
  const json* pts = &j;
  if (j.is_object()) {
    out.closed = j.value("closed", false);
    if (!j.contains("points")) throw Error(ErrorKind::IoError, "polyline object without points");
    pts = &j.at("points");
  }
  if (!pts->is_array()) throw Error(ErrorKind::IoError, "polyline points must be an array");
  for (const auto& q : *pts) out.points.push_back(point_from(q));
  return out;
}

auto domain_json(const ConvexDomain& d) -> json {
  if (d.is_disc()) return json{{"type", "disc"}, {"center", point_json(d.disc().center)}, {"radius", d.disc().radius}};
  json verts = json::array();
  for (const auto& v : d.polygon().vertices) verts.push_back(point_json(v));
  return json{{"type", "polygon"}, {"vertices", std::move(verts)}};
}

auto domain_from(const json& j) -> ConvexDomain {
  const std::string type = j.value("type", "");
  if (type == "disc") return ConvexDomain(Disc{point_from(j.at("center")), number(j.at("radius"))});
  if (type == "polygon") {
    ConvexPolygon poly;
    for (const auto& v : j.at("vertices")) poly.vertices.push_back(point_from(v));
    return ConvexDomain(std::move(poly));
  }
  throw Error(ErrorKind::IoError, "domain type must be 'disc' or 'polygon'");
}

auto network_json(const SpoonNetwork& net) -> json {
  return json{{"domain", domain_json(net.domain)}, {"loop", polyline_json(net.loop)}, {"handle", polyline_json(net.handle)}};
}

auto parse(const std::string& text) -> json {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("malformed JSON: ") + e.what());
  }
}

auto network_from(const json& j) -> SpoonNetwork {
  SpoonNetwork net;
  try {
    net.domain = domain_from(j.at("domain"));
    net.loop = polyline_from(j.at("loop"));
    net.handle = polyline_from(j.at("handle"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("bad network JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw Error(ErrorKind::InvalidNetwork, e.what());
    throw;
  }
  require_valid(net);
  return net;
}

auto nullable(double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

auto read_text(const std::filesystem::path& path) -> std::string {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
}

auto polyline_to_json(const Polyline& p) -> std::string { return polyline_json(p).dump(); }
auto polyline_from_json(const std::string& text) -> Polyline { return polyline_from(parse(text)); }

auto network_to_json(const SpoonNetwork& net) -> std::string { return network_json(net).dump(); }
auto network_from_json(const std::string& text) -> SpoonNetwork { return network_from(parse(text)); }

auto load_network(const std::filesystem::path& path) -> SpoonNetwork { return network_from_json(read_text(path)); }
void save_network(const std::filesystem::path& path, const SpoonNetwork& net) {
  write_text(path, network_json(net).dump(2) + "\n");
}

auto snapshot_to_jsonl(const Snapshot& s) -> std::string {
  json j{{"t", s.t}};
  const json body = network_json(s.net);
  for (const auto& [key, value] : body.items()) j[key] = value;
  return j.dump();
}

auto read_snapshots(const std::filesystem::path& path) -> std::vector<Snapshot> {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  std::vector<Snapshot> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = parse(line);
    Snapshot s;
    s.t = number(j.at("t"));
    s.net.domain = domain_from(j.at("domain"));
    s.net.loop = polyline_from(j.at("loop"));
    s.net.handle = polyline_from(j.at("handle"));
    out.push_back(std::move(s));
  }
  return out;
}

void write_monitors(const std::filesystem::path& path, const std::vector<MonitorRecord>& records) {
  std::string text = monitor_csv_header() + "\n";
  for (const auto& r : records) text += monitor_csv_row(r) + "\n";
  write_text(path, text);
}

auto read_monitors(const std::filesystem::path& path) -> std::vector<MonitorRecord> {
  return parse_monitor_csv(read_text(path));
}

auto stop_to_json(const StopReason& stop, double initial_area) -> std::string {
  const json j{{"reason", std::string(to_string(stop.kind))},
               {"t", stop.t},
               {"steps", stop.steps},
               {"value", nullable(stop.value)},
               {"threshold", nullable(stop.threshold)},
               {"area", stop.area},
               {"handle_length", stop.handle_length},
               {"blowup_indicator", stop.blowup_indicator},
               {"initial_area", initial_area},
               {"singular_time_estimate", singular_time(initial_area)}};
  return j.dump(2) + "\n";
}

auto read_stop(const std::filesystem::path& path) -> StopFile {
  const auto j = parse(read_text(path));
  StopFile f;
  try {
    f.stop.kind = stop_kind_from_string(j.at("reason").get<std::string>());
    f.stop.t = number(j.at("t"));
    f.stop.steps = j.at("steps").get<std::size_t>();
    f.stop.value = number(j.at("value"));
    f.stop.threshold = number(j.at("threshold"));
    f.stop.area = number(j.at("area"));
    f.stop.handle_length = number(j.at("handle_length"));
    f.stop.blowup_indicator = number(j.at("blowup_indicator"));
    f.initial_area = number(j.at("initial_area"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("bad stop.json: ") + e.what());
  }
  return f;
}

auto profile_to_json(const ShrinkerProfile& profile) -> std::string {
  const auto residual = shrinker_residual(profile);
  const auto angles = profile_junction_angles(profile);
  const json j{{"d", profile.d},
               {"junction", point_json(profile.junction)},
               {"halfline_dir", point_json(profile.halfline_dir)},
               {"shoot_param", profile.shoot_param},
               {"closure_residual", profile.closure_residual},
               {"bracket_width", profile.bracket_width},
               {"residual_max", profile.residual_max},
               {"residual_l2", residual.l2},
               {"crossing_x", profile.crossing_x},
               {"ds", profile.ds},
               {"root_finder", profile.method == RootFinder::Bisection ? "bisection" : "secant"},
               {"turning", profile_turning(profile)},
               {"junction_angles", json::array({angles[0], angles[1], angles[2]})},
               {"area", std::abs(signed_area(profile.loop.points))},
               {"densities",
                json{{"HalfLine", flat_density(FlatKind::HalfLine)},
                     {"Line", flat_density(FlatKind::Line)},
                     {"FlatTriod", flat_density(FlatKind::FlatTriod)},
                     {"BrakkeSpoon", spoon_gaussian_density(profile)}}},
               {"loop", polyline_json(profile.loop)}};
  return j.dump(2) + "\n";
}

auto report_to_json(const BlowupReport& r) -> std::string {
  auto series = [](const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(nullable(x));
    return a;
  };
  json fits = json::array();
  for (const auto& f : r.final_fits)
    fits.push_back(json{{"class", std::string(to_string(f.kind))}, {"distance", nullable(f.distance)}, {"rotation", f.rotation}});
  const json j{{"x0", point_json(r.x0)},
               {"T_est", nullable(r.T_est)},
               {"limit_class", std::string(to_string(r.limit_class))},
               {"final_distance", nullable(r.final_distance)},
               {"spoon_density", nullable(r.spoon_density)},
               {"oscillating", r.oscillating},
               {"empty_window", r.empty_window},
               {"note", r.note},
               {"thresholds",
                json{{"window_radius", r.thresholds.window_radius},
                     {"accept_distance", r.thresholds.accept_distance},
                     {"min_snapshots", 5},
                     {"min_frak_t_span", 2.0}}},
               {"frak_t", series(r.frak_t)},
               {"distance_series", series(r.distance_series)},
               {"density_series", series(r.density_series)},
               {"dissipation_series", series(r.dissipation_series)},
               {"final_fits", std::move(fits)}};
  return j.dump(2) + "\n";
}

}  // namespace spoonflow::io
