#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "spoonflow/blowup.hpp"
#include "spoonflow/diagnostics.hpp"
#include "spoonflow/error.hpp"
#include "spoonflow/flow.hpp"
#include "spoonflow/generators.hpp"
#include "spoonflow/io.hpp"
#include "spoonflow/shrinker.hpp"

namespace py = pybind11;
using namespace spoonflow;

namespace {

auto points(const Polyline& p) -> std::vector<std::pair<double, double>> {
  std::vector<std::pair<double, double>> out;
  out.reserve(p.size());
  for (const auto& q : p.points) out.emplace_back(q.x, q.y);
  return out;
}

auto record_dict(const MonitorRecord& r) -> py::dict {
  py::dict d;
  d["t"] = r.t;
  d["L1"] = r.L1;
  d["L2"] = r.L2;
  d["L"] = r.L;
  d["A"] = r.A;
  d["k2_loop"] = r.k2_loop;
  d["k2_total"] = r.k2_total;
  d["turning_loop"] = r.turning_loop;
  d["E"] = r.E;
  d["theta_x0"] = r.theta_x0;
  d["dL_residual"] = r.dL_residual;
  d["cond4_residual"] = r.cond4_residual;
  d["cx"] = r.cx;
  d["cy"] = r.cy;
  return d;
}

auto stop_dict(const StopReason& s) -> py::dict {
  py::dict d;
  d["reason"] = std::string(to_string(s.kind));
  d["t"] = s.t;
  d["steps"] = s.steps;
  d["value"] = s.value;
  d["threshold"] = s.threshold;
  d["area"] = s.area;
  d["handle_length"] = s.handle_length;
  return d;
}

auto flat_kind(const std::string& name) -> FlatKind {
  if (name == "Line") return FlatKind::Line;
  if (name == "HalfLine") return FlatKind::HalfLine;
  if (name == "FlatTriod") return FlatKind::FlatTriod;
  throw Error(ErrorKind::InvalidArgument, "unknown flat cone " + name);
}

}  // namespace

PYBIND11_MODULE(_spoonflow, m) {
  m.doc() = "Curvature flow of spoon-shaped networks";

  static py::exception<Error> error(m, "SpoonflowError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error((std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<SpoonNetwork>(m, "Network")
      .def_static("from_json", &io::network_from_json)
      .def("to_json", &io::network_to_json)
      .def_property_readonly("loop", [](const SpoonNetwork& n) { return points(n.loop); })
      .def_property_readonly("handle", [](const SpoonNetwork& n) { return points(n.handle); })
      .def_property_readonly("junction", [](const SpoonNetwork& n) { return std::pair{n.junction().x, n.junction().y}; })
      .def_property_readonly("endpoint", [](const SpoonNetwork& n) { return std::pair{n.endpoint().x, n.endpoint().y}; })
      .def("area", &loop_area)
      .def("validate", [](const SpoonNetwork& n) { return validate(n).failures; })
      .def("embeddedness", [](const SpoonNetwork& n) { return embeddedness_measure(n).value; })
      .def("max_angle_deviation", [](const SpoonNetwork& n) { return check_angle_condition(n, 0.0).max_deviation; });

  m.def("generator_names", &generator_names);
  m.def(
      "generate",
      [](const std::string& name, double r, double handle, double domain_radius, std::size_t n_loop,
         std::size_t n_handle) {
        GeneratorParams p;
        p.r = r;
        p.handle = handle;
        p.domain_radius = domain_radius;
        p.n_loop = n_loop;
        p.n_handle = n_handle;
        return generate_initial(name, p);
      },
      py::arg("name"), py::arg("r") = 1.0, py::arg("handle") = 1.0, py::arg("domain_radius") = 3.0,
      py::arg("n_loop") = 256, py::arg("n_handle") = 64);

  py::class_<FlowConfig>(m, "FlowConfig")
      .def(py::init<>())
      .def_readwrite("n_loop", &FlowConfig::n_loop)
      .def_readwrite("n_handle", &FlowConfig::n_handle)
      .def_readwrite("cfl", &FlowConfig::cfl)
      .def_readwrite("regrid_every", &FlowConfig::regrid_every)
      .def_readwrite("t_max", &FlowConfig::t_max)
      .def_readwrite("monitor_every", &FlowConfig::monitor_every)
      .def_readwrite("keep_snapshots", &FlowConfig::keep_snapshots)
      .def_property(
          "compute_E", [](const FlowConfig& c) { return c.monitor.compute_E; },
          [](FlowConfig& c, bool v) { c.monitor.compute_E = v; });

  m.def(
      "run",
      [](const SpoonNetwork& net, const FlowConfig& cfg) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(net, cfg);
        }
        py::dict out;
        py::list monitors;
        for (const auto& rec : r.monitors) monitors.append(record_dict(rec));
        py::list snapshots;
        for (const auto& s : r.snapshots) snapshots.append(py::make_tuple(s.t, s.net));
        out["monitors"] = monitors;
        out["snapshots"] = snapshots;
        out["stop"] = stop_dict(r.stop);
        out["initial_area"] = r.initial_area;
        return out;
      },
      py::arg("network"), py::arg("config") = FlowConfig{});

  m.def(
      "shoot_brakke_spoon",
      [](double ds, const std::string& method) {
        if (method != "bisection" && method != "secant")
          throw Error(ErrorKind::InvalidArgument, "method must be bisection or secant");
        ShootOptions o;
        o.ds = ds;
        o.method = method == "secant" ? RootFinder::Secant : RootFinder::Bisection;
        const auto p = shoot_brakke_spoon(o);
        py::dict out;
        out["d"] = p.d;
        out["shoot_param"] = p.shoot_param;
        out["closure_residual"] = p.closure_residual;
        out["residual_max"] = p.residual_max;
        out["turning"] = profile_turning(p);
        out["junction_angles"] = profile_junction_angles(p);
        out["density"] = spoon_gaussian_density(p);
        out["loop"] = points(p.loop);
        return out;
      },
      py::arg("ds") = 1e-4, py::arg("method") = "bisection");

  m.def("flat_density", [](const std::string& kind) { return flat_density(flat_kind(kind)); });
  m.def("singular_time", &singular_time);
}
