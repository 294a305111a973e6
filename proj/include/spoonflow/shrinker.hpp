#pragma once

// Self-similarly shrinking curves: solutions of k + <x, nu> = 0, the Brakke
// spoon found by shooting, and the flat cones with their Gaussian densities.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "spoonflow/network.hpp"

namespace spoonflow {

struct ShrinkerArc {
  std::vector<Point2> points;
  std::vector<double> s;
  std::vector<double> theta;     // tangent angle
  std::vector<double> residual;  // k + <x, nu>, with k = dtheta/ds by differences
};

/// RK4 integration of x' = (cos theta, sin theta), theta' = -<x, nu>. The
/// supplied k0 must agree with -<start, nu0>. Throws StepTooLarge when ds
/// exceeds 1e-3 of the characteristic size or the step-doubling error
/// estimate exceeds 1e-8, and InvalidArgument for an inconsistent k0.
auto integrate_shrinker_arc(double k0, Point2 start, double theta0, double ds, double s_max) -> ShrinkerArc;

enum class RootFinder { Bisection, Secant };

struct ShootOptions {
  double ds = 1e-4;
  double tolerance = 1e-12;  // on the junction distance d
  double d_lo = 0.05;
  double d_hi = 3.0;
  RootFinder method = RootFinder::Bisection;
};

/// Closure function of the shooting: y where the upper arc started at
/// (-d, 0) with angle pi/3 first has a downward vertical tangent.
auto shooting_closure(double d, double ds) -> double;

struct ShrinkerProfile {
  Polyline loop;  // closed, counterclockwise, junction at node 0
  Point2 halfline_dir{-1.0, 0.0};
  Point2 junction;
  double shoot_param = 0.0;  // curvature of the loop at the junction
  double d = 0.0;            // distance of the junction from the origin
  double closure_residual = 0.0;
  double bracket_width = 0.0;
  double residual_max = 0.0;
  double crossing_x = 0.0;   // where the loop meets the positive x-axis
  double ds = 0.0;
  RootFinder method = RootFinder::Bisection;
};

/// Throws NoBracket if the closure does not change sign on [d_lo, d_hi].
auto shoot_brakke_spoon(const ShootOptions& opts = {}) -> ShrinkerProfile;

struct ShrinkerResidual {
  double max = 0.0;
  double l2 = 0.0;
};

/// Statistics of k + <x, nu> over the nodes of a polyline; `skip` lists
/// node indices (corners) left out.
auto shrinker_residual(const Polyline& curve, std::span<const std::size_t> skip = {}) -> ShrinkerResidual;
auto shrinker_residual(const ShrinkerProfile& profile) -> ShrinkerResidual;
/// Both curves of a network, junction and endpoint excluded.
auto shrinker_residual(const SpoonNetwork& net) -> ShrinkerResidual;

/// Sum of k ds along the loop from the junction back to it.
auto profile_turning(const ShrinkerProfile& profile) -> double;

/// Pairwise angles between the three directions leaving the junction.
auto profile_junction_angles(const ShrinkerProfile& profile) -> std::array<double, 3>;

auto spoon_gaussian_density(const ShrinkerProfile& profile) -> double;

/// The loop stored open from the junction, a straight handle of the given
/// length along the half-line, and the disc about the origin through its end.
auto profile_to_network(const ShrinkerProfile& profile, double handle_length, std::size_t n_handle = 64)
    -> SpoonNetwork;

/// Profile polylines with the half-line truncated at `radius` from the origin.
auto profile_polylines(const ShrinkerProfile& profile, double radius, double spacing = 0.01)
    -> std::vector<Polyline>;

// ---- flat cones --------------------------------------------------------------------------------

enum class FlatKind { Line, HalfLine, FlatTriod };

auto to_string(FlatKind kind) -> std::string_view;

/// Half-lines from the origin truncated at `radius`, the first pointing at
/// angle `direction`.
auto flat_polylines(FlatKind kind, double radius, double direction = 0.0, double spacing = 0.01)
    -> std::vector<Polyline>;

/// Quadrature of the rescaled density over the cone truncated at 20 units.
auto flat_density(FlatKind kind) -> double;

}  // namespace spoonflow
