#include "spoonflow/generators.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "spoonflow/error.hpp"

namespace spoonflow {

using std::numbers::pi;

namespace {

auto wrap(double a) -> double { return std::remainder(a, 2.0 * pi); }

// Loop through the parametrized curve starting and ending at t = pi, the
// handle straight along -x from there, and a disc of the given radius whose
// boundary passes through the handle's far end.
auto assemble(const std::function<Point2(double)>& curve, double handle, double domain_radius, std::size_t n_loop,
              std::size_t n_handle) -> SpoonNetwork {
  if (!(handle > 0.0) || !(domain_radius > 0.0) || n_loop < 16 || n_handle < 2) {
    throw Error(ErrorKind::InvalidArgument, "generator parameters must be positive with n_loop >= 16");
  }
  SpoonNetwork net;
  net.loop.closed = false;
  for (std::size_t i = 0; i <= n_loop; ++i) {
    net.loop.points.push_back(curve(pi + 2.0 * pi * static_cast<double>(i) / static_cast<double>(n_loop)));
  }
  const Point2 o = net.loop.points.front();
  net.loop.points.back() = o;
  for (std::size_t i = 0; i <= n_handle; ++i) {
    net.handle.points.push_back(o + Point2{-handle * static_cast<double>(i) / static_cast<double>(n_handle), 0.0});
  }
  const Point2 p = net.handle.points.back();
  net.domain = ConvexDomain(Disc{p + Point2{domain_radius, 0.0}, domain_radius});

  if (!check_containment(net) || !(net.domain.signed_distance(o) < 0.0)) {
    std::ostringstream msg;
    msg << "network does not fit in the disc of radius " << domain_radius << " through the handle end";
    throw Error(ErrorKind::GeometryInfeasible, msg.str());
  }
  apply_junction_collar(net);
  const auto report = validate(net);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "generated network is invalid:";
    for (const auto& f : report.failures) msg << " [" << f << "]";
    throw Error(ErrorKind::GeometryInfeasible, msg.str());
  }
  return net;
}

}  // namespace

void apply_junction_collar(SpoonNetwork& net) {
  auto& l = net.loop.points;
  const std::size_t n = l.size();
  const Point2 o = l.front();
  const double handle_dir = angle_of(parabola_fit(o, net.handle.points[1], net.handle.points[2], 0).tangent);
  const double out_start = angle_of(parabola_fit(o, l[1], l[2], 0).tangent);
  const double out_end = angle_of(parabola_fit(o, l[n - 2], l[n - 3], 0).tangent);

  // Each loop end goes to whichever of handle_dir +- 120 degrees lies on its side.
  const double side = wrap(out_start - handle_dir) < wrap(out_end - handle_dir) ? 1.0 : -1.0;
  const double target_start = handle_dir - side * 2.0 * pi / 3.0;
  const double target_end = handle_dir + side * 2.0 * pi / 3.0;
  const double turn_start = wrap(target_start - out_start);
  const double turn_end = wrap(target_end - out_end);

  constexpr std::array<double, 3> weights{1.0, 2.0 / 3.0, 1.0 / 3.0};
  for (std::size_t j = 0; j < weights.size(); ++j) {
    l[1 + j] = o + rotated(l[1 + j] - o, weights[j] * turn_start);
    l[n - 2 - j] = o + rotated(l[n - 2 - j] - o, weights[j] * turn_end);
  }
  impose_junction_angles(net);
}

auto circle_spoon(double r, double handle, double domain_radius, std::size_t n_loop, std::size_t n_handle)
    -> SpoonNetwork {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "circle radius must be positive");
  return assemble([r](double t) { return Point2{r * std::cos(t), r * std::sin(t)}; }, handle, domain_radius, n_loop,
                  n_handle);
}

auto ellipse_spoon(double a, double b, double handle, double domain_radius, std::size_t n_loop,
                   std::size_t n_handle) -> SpoonNetwork {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorKind::InvalidArgument, "ellipse semi-axes must be positive");
  return assemble([a, b](double t) { return Point2{a * std::cos(t), b * std::sin(t)}; }, handle, domain_radius,
                  n_loop, n_handle);
}

auto dumbbell_spoon(double half_length, double b, double neck, double handle, double domain_radius,
                    std::size_t n_loop, std::size_t n_handle) -> SpoonNetwork {
  if (!(half_length > 0.0 && b > 0.0 && neck > 0.0 && neck <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "dumbbell needs positive sizes and neck in (0, 1]");
  }
  return assemble(
      [=](double t) {
        const double c = std::cos(t);
        return Point2{half_length * c, b * std::sin(t) * (neck + (1.0 - neck) * c * c)};
      },
      handle, domain_radius, n_loop, n_handle);
}

auto generator_names() -> std::vector<std::string> { return {"circle_spoon", "ellipse_spoon", "dumbbell_spoon"}; }

auto generate_initial(const std::string& name, const GeneratorParams& p) -> SpoonNetwork {
  if (name == "circle_spoon") return circle_spoon(p.r, p.handle, p.domain_radius, p.n_loop, p.n_handle);
  if (name == "ellipse_spoon") return ellipse_spoon(p.a, p.b, p.handle, p.domain_radius, p.n_loop, p.n_handle);
  if (name == "dumbbell_spoon")
    return dumbbell_spoon(p.half_length, p.b, p.neck, p.handle, p.domain_radius, p.n_loop, p.n_handle);
  throw Error(ErrorKind::InvalidArgument, "unknown generator '" + name + "'");
}

}  // namespace spoonflow
