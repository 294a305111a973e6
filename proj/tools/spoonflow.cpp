// Command line driver: run, shrinker, blowup, verify, render.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "spoonflow/blowup.hpp"
#include "spoonflow/error.hpp"
#include "spoonflow/flow.hpp"
#include "spoonflow/generators.hpp"
#include "spoonflow/io.hpp"
#include "spoonflow/render.hpp"
#include "spoonflow/shrinker.hpp"
#include "spoonflow/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace spoonflow;

namespace {

struct RunOptions {
  std::string generator = "circle_spoon";
  std::string input;
  GeneratorParams gen;
  FlowConfig flow;
  std::vector<double> density_center;
  std::optional<double> density_T;
  bool no_E = false;
  std::size_t e_every = 1;
  bool blowup = false;
  bool frames = false;
  std::string config;
  std::string out = "out";
};

// Fills every option not given on the command line from the JSON config.
void apply_config(CLI::App& cmd, RunOptions& o) {
  if (o.config.empty()) return;
  const auto j = json::parse(io::read_text(o.config));
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "config must be a JSON object");
  auto given = [&](const char* flag) { return cmd.count(flag) > 0; };
  auto take = [&](const char* key, const char* flag, auto& target) {
    if (j.contains(key) && !given(flag)) j.at(key).get_to(target);
  };
  take("generator", "--generator", o.generator);
  take("input", "--input", o.input);
  take("r", "--r", o.gen.r);
  take("handle", "--handle", o.gen.handle);
  take("domain_radius", "--domain-radius", o.gen.domain_radius);
  take("a", "--a", o.gen.a);
  take("b", "--b", o.gen.b);
  take("half_length", "--half-length", o.gen.half_length);
  take("neck", "--neck", o.gen.neck);
  take("n_loop", "--n-loop", o.flow.n_loop);
  take("n_handle", "--n-handle", o.flow.n_handle);
  take("cfl", "--cfl", o.flow.cfl);
  take("t_max", "--t-max", o.flow.t_max);
  take("monitor_every", "--monitor-every", o.flow.monitor_every);
  take("regrid_every", "--regrid-every", o.flow.regrid_every);
  take("e_every", "--e-every", o.e_every);
  take("density_center", "--density-center", o.density_center);
  take("blowup", "--blowup", o.blowup);
  take("frames", "--frames", o.frames);
  take("out", "--out", o.out);
  if (j.contains("compute_E") && !given("--no-E")) o.no_E = !j.at("compute_E").get<bool>();
  if (j.contains("density_T") && !given("--density-T")) o.density_T = j.at("density_T").get<double>();
}

void write_lines(const fs::path& path, const std::vector<Snapshot>& snapshots) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  for (const auto& s : snapshots) f << io::snapshot_to_jsonl(s) << '\n';
}

auto blowup_for_directory(const fs::path& dir, const BlowupOptions& opts) -> BlowupReport {
  const auto monitors = io::read_monitors(dir / "monitors.csv");
  const auto snapshots = io::read_snapshots(dir / "snapshots.jsonl");
  const auto stop = io::read_stop(dir / "stop.json");
  const auto profile = shoot_brakke_spoon();
  return analyze_blowup(snapshots, monitors, stop.stop.kind, profile, opts);
}

void command_run(CLI::App& cmd, RunOptions o) {
  apply_config(cmd, o);
  o.gen.n_loop = o.flow.n_loop;
  o.gen.n_handle = o.flow.n_handle;
  o.flow.monitor.compute_E = !o.no_E;
  o.flow.monitor.e_every = o.e_every;
  o.flow.monitor.density_T = o.density_T;
  if (!o.density_center.empty()) {
    if (o.density_center.size() != 2) throw Error(ErrorKind::InvalidArgument, "--density-center needs x,y");
    o.flow.monitor.density_center = Point2{o.density_center[0], o.density_center[1]};
  }
  const SpoonNetwork initial = o.input.empty() ? generate_initial(o.generator, o.gen) : io::load_network(o.input);

  const fs::path out = o.out;
  fs::create_directories(out);
  const auto result = run(initial, o.flow);
  io::write_monitors(out / "monitors.csv", result.monitors);
  write_lines(out / "snapshots.jsonl", result.snapshots);
  io::write_text(out / "stop.json", io::stop_to_json(result.stop, result.initial_area));
  if (o.frames) render_frames(result.snapshots, out / "frames");
  if (o.blowup) io::write_text(out / "blowup_report.json", io::report_to_json(blowup_for_directory(out, {})));
  std::cout << "stopped: " << to_string(result.stop.kind) << " at t = " << result.stop.t << " after "
            << result.stop.steps << " steps\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* level = std::getenv("SPOONFLOW_LOG")) spdlog::set_level(spdlog::level::from_str(level));
  else spdlog::set_level(spdlog::level::warn);

  CLI::App app{"Curvature flow of spoon-shaped networks"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "Evolve a network and write monitors, snapshots and the stop reason");
  auto* src = run_cmd->add_option("--generator", ro.generator, "Built-in initial network")
                  ->check(CLI::IsMember(generator_names()));
  run_cmd->add_option("--input", ro.input, "Initial network JSON")->check(CLI::ExistingFile)->excludes(src);
  run_cmd->add_option("--r", ro.gen.r, "Circle radius");
  run_cmd->add_option("--handle", ro.gen.handle, "Handle length");
  run_cmd->add_option("--domain-radius", ro.gen.domain_radius, "Radius of the disc domain");
  run_cmd->add_option("--a", ro.gen.a, "Ellipse semi-axis along the handle");
  run_cmd->add_option("--b", ro.gen.b, "Ellipse or lobe semi-axis across the handle");
  run_cmd->add_option("--half-length", ro.gen.half_length, "Dumbbell half-length");
  run_cmd->add_option("--neck", ro.gen.neck, "Dumbbell neck fraction");
  run_cmd->add_option("--n-loop", ro.flow.n_loop, "Loop edges");
  run_cmd->add_option("--n-handle", ro.flow.n_handle, "Handle edges");
  run_cmd->add_option("--cfl", ro.flow.cfl, "dt = cfl * h_min^2");
  run_cmd->add_option("--t-max", ro.flow.t_max, "Time limit");
  run_cmd->add_option("--monitor-every", ro.flow.monitor_every, "Steps between monitor records");
  run_cmd->add_option("--regrid-every", ro.flow.regrid_every, "Steps between regrids");
  run_cmd->add_option("--e-every", ro.e_every, "Compute E on every k-th record");
  run_cmd->add_flag("--no-E", ro.no_E, "Skip the embeddedness measure");
  run_cmd->add_option("--density-center", ro.density_center, "Gaussian density center x,y")->delimiter(',');
  run_cmd->add_option("--density-T", ro.density_T, "Time used by the Gaussian density");
  run_cmd->add_flag("--blowup", ro.blowup, "Also write blowup_report.json");
  run_cmd->add_flag("--frames", ro.frames, "Also write frames/*.svg");
  run_cmd->add_option("--config", ro.config, "JSON config; command line flags win")->check(CLI::ExistingFile);
  run_cmd->add_option("--out", ro.out, "Output directory");

  std::string shrinker_out = "out";
  ShootOptions shoot;
  std::string method = "bisection";
  double handle_length = 5.0;
  auto* shrinker_cmd = app.add_subcommand("shrinker", "Compute the spoon-shaped shrinker and its densities");
  shrinker_cmd->add_option("--out", shrinker_out, "Output directory");
  shrinker_cmd->add_option("--ds", shoot.ds, "Arclength step");
  shrinker_cmd->add_option("--method", method, "Root finder")->check(CLI::IsMember({"bisection", "secant"}));
  shrinker_cmd->add_option("--handle-length", handle_length, "Half-line length in spoon_network.json");

  std::string blowup_dir;
  std::string blowup_out;
  BlowupOptions bo;
  auto* blowup_cmd = app.add_subcommand("blowup", "Rescale a completed run about its singular point and classify");
  blowup_cmd->add_option("dir", blowup_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  blowup_cmd->add_option("--out", blowup_out, "Report path (default dir/blowup_report.json)");
  blowup_cmd->add_option("--grid-step", bo.grid_step, "Rescaled time step of the grid");
  blowup_cmd->add_option("--window", bo.classify.window_radius, "Comparison window radius");

  std::string verify_dir;
  auto* verify_cmd = app.add_subcommand("verify", "Check the invariants of a completed run");
  verify_cmd->add_option("dir", verify_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  std::string render_dir;
  std::string render_out;
  auto* render_cmd = app.add_subcommand("render", "Write SVG frames of the snapshots");
  render_cmd->add_option("dir", render_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  render_cmd->add_option("--out", render_out, "Frame directory (default dir/frames)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      command_run(*run_cmd, ro);
    } else if (*shrinker_cmd) {
      shoot.method = method == "secant" ? RootFinder::Secant : RootFinder::Bisection;
      const auto profile = shoot_brakke_spoon(shoot);
      const fs::path out = shrinker_out;
      fs::create_directories(out);
      io::write_text(out / "spoon_profile.json", io::profile_to_json(profile));
      io::save_network(out / "spoon_network.json", profile_to_network(profile, handle_length, 64));
      std::cout << "d = " << profile.d << ", density = " << spoon_gaussian_density(profile) << "\n";
    } else if (*blowup_cmd) {
      const fs::path dir = blowup_dir;
      const auto report = blowup_for_directory(dir, bo);
      io::write_text(blowup_out.empty() ? dir / "blowup_report.json" : fs::path(blowup_out), io::report_to_json(report));
      std::cout << "limit: " << to_string(report.limit_class) << ", distance " << report.final_distance << "\n";
    } else if (*verify_cmd) {
      const auto report = verify_directory(verify_dir);
      std::cout << report.table();
      return report.ok() ? 0 : 1;
    } else if (*render_cmd) {
      const fs::path dir = render_dir;
      const auto snapshots = io::read_snapshots(dir / "snapshots.jsonl");
      const auto n = render_frames(snapshots, render_out.empty() ? dir / "frames" : fs::path(render_out));
      std::cout << n << " frames\n";
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << json{{"error", "InvalidArgument"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}
