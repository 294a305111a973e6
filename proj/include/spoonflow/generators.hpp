#pragma once

// Built-in initial spoon networks.

#include <cstddef>
#include <string>
#include <vector>

#include "spoonflow/network.hpp"

namespace spoonflow {

struct GeneratorParams {
  double r = 1.0;              // circle radius
  double handle = 1.0;         // handle length
  double domain_radius = 3.0;  // the disc touches the handle's end on its far side
  double a = 1.5;              // ellipse semi-axis along the handle
  double b = 0.75;             // ellipse semi-axis across, dumbbell lobe half-width
  double half_length = 1.5;    // dumbbell half-length
  double neck = 0.5;           // dumbbell neck width as a fraction of the lobes
  std::size_t n_loop = 256;
  std::size_t n_handle = 64;
};

auto generator_names() -> std::vector<std::string>;

/// Throws InvalidArgument for an unknown name and GeometryInfeasible when
/// the network does not fit in its domain.
auto generate_initial(const std::string& name, const GeneratorParams& params) -> SpoonNetwork;

auto circle_spoon(double r, double handle, double domain_radius, std::size_t n_loop = 256,
                  std::size_t n_handle = 64) -> SpoonNetwork;
auto ellipse_spoon(double a, double b, double handle, double domain_radius, std::size_t n_loop = 256,
                   std::size_t n_handle = 64) -> SpoonNetwork;
/// x = L cos t, y = b sin t (w + (1 - w) cos^2 t): two lobes joined by a neck
/// of width 2 b w at x = 0; junction at (-L, 0).
auto dumbbell_spoon(double half_length, double b, double neck, double handle, double domain_radius,
                    std::size_t n_loop = 256, std::size_t n_handle = 64) -> SpoonNetwork;

/// Bends the three nodes nearest the junction on each side of the loop so
/// the loop leaves at 120 degrees to the handle, then restores the angles exactly.
void apply_junction_collar(SpoonNetwork& net);

}  // namespace spoonflow
