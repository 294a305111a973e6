#pragma once

// Monitored quantities of a spoon network: lengths, area, curvature
// integrals, the embeddedness measure and Gaussian densities.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spoonflow/network.hpp"

namespace spoonflow {

inline constexpr double kFourSqrt3 = 6.928203230275509;  // 4 * sqrt(3)
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- curvature integrals -----------------------------------------------------------------------

struct CurveIntegrals {
  double length = 0.0;
  double k2 = 0.0;       // sum k^2 ds
  double turning = 0.0;  // sum k ds
  double max_abs_k = 0.0;
};

auto curve_integrals(const Polyline& curve) -> CurveIntegrals;

/// Pointwise |k_s + lambda k| differences between the three ends; k_s is
/// taken along each curve leaving the junction.
auto cond4_residual(const SpoonNetwork& net) -> double;

// ---- embeddedness measure ----------------------------------------------------------------------

/// (A / pi) sin(pi A_i / A).
auto psi(double A_total, double A_i) -> double;

enum class PairKind { BothOnLoop, Mixed, JunctionSelf, Coincident };

struct PairClassification {
  PairKind kind = PairKind::BothOnLoop;
  double chord = 0.0;
  std::vector<double> areas;  // candidate region areas; a degenerate one (zero) makes Phi infinite
};

struct PhiValue {
  double value = kInf;
  PairClassification pair;
};

/// Nodes are numbered over the whole network: 0 is the junction, 1..n-1 the
/// loop interior in storage order, then the handle nodes after the junction.
auto network_node_count(const SpoonNetwork& net) -> std::size_t;
auto network_node(const SpoonNetwork& net, std::size_t index) -> Point2;

auto phi_pair(const SpoonNetwork& net, std::size_t p, std::size_t q) -> PhiValue;

struct Embeddedness {
  double value = kFourSqrt3;
  std::size_t p = 0;
  std::size_t q = 0;
};

/// Minimum of phi_pair over all node pairs, the junction self-pair included.
auto embeddedness_measure(const SpoonNetwork& net) -> Embeddedness;

/// Angles between the chord and the tangent at each point of a pair, each in [0, pi].
struct PairAngles {
  double at_p = 0.0;
  double at_q = 0.0;
};
auto chord_tangent_angles(const SpoonNetwork& net, std::size_t p, std::size_t q) -> PairAngles;

// ---- Gaussian density --------------------------------------------------------------------------

/// e^{-|x-x0|^2 / 4tau} / sqrt(4 pi tau) with tau = T - t.
auto heat_kernel(Point2 x, Point2 x0, double tau) -> double;

/// Trapezoidal quadrature of the backward heat kernel over the polylines.
auto gaussian_density(std::span<const Polyline> curves, Point2 x0, double t, double T) -> double;
auto gaussian_density(const SpoonNetwork& net, Point2 x0, double t, double T) -> double;

/// (1 / sqrt(2 pi)) * integral of e^{-|x|^2/2} over the polylines.
auto rescaled_density(std::span<const Polyline> curves) -> double;

/// <(P - x0) / 2tau, tau_P> rho(P) with tau_P the handle tangent at P.
auto boundary_term(const SpoonNetwork& net, Point2 x0, double t, double T) -> double;

/// Integral of |k nu + (x - x0)^perp / 2tau|^2 rho ds over the network.
auto dissipation(const SpoonNetwork& net, Point2 x0, double t, double T) -> double;

/// Rescaled dissipation: integral of |k nu + x^perp|^2 e^{-|x|^2/2} over an
/// already rescaled network.
auto rescaled_dissipation(const SpoonNetwork& rescaled) -> double;

struct TimedNetwork {
  double t = 0.0;
  const SpoonNetwork* net = nullptr;
};

struct MonotonicityInterval {
  double t0 = 0.0;
  double t1 = 0.0;
  double dtheta_dt = 0.0;  // finite difference
  double rhs = 0.0;        // trapezoidal mean of -dissipation + boundary term
  double residual = 0.0;   // dtheta_dt - rhs
  double boundary = 0.0;   // trapezoidal mean of the boundary term
};

/// Needs at least 3 snapshots, all before T. Throws InvalidTime otherwise.
auto monotonicity_residual(std::span<const TimedNetwork> window, Point2 x0, double T)
    -> std::vector<MonotonicityInterval>;

struct LengthLawInterval {
  double t0 = 0.0;
  double t1 = 0.0;
  double dL_dt = 0.0;
  double k2 = 0.0;        // mean of sum k^2 ds at the two ends
  double residual = 0.0;  // dL_dt + k2
};

auto dL_residual(std::span<const TimedNetwork> window) -> std::vector<LengthLawInterval>;

// ---- monitor records ---------------------------------------------------------------------------

struct MonitorOptions {
  bool compute_E = true;
  std::size_t e_every = 1;  // E on every e_every-th record, NaN otherwise
  std::optional<Point2> density_center;
  std::optional<double> density_T;  // defaults to 3 A0 / (5 pi)
};

struct MonitorRecord {
  double t = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
  double L = 0.0;
  double A = 0.0;
  double k2_loop = 0.0;
  double k2_total = 0.0;
  double turning_loop = 0.0;
  double E = kNaN;
  double theta_x0 = kNaN;
  double dL_residual = kNaN;
  double cond4_residual = kNaN;
  double cx = 0.0;  // loop centroid
  double cy = 0.0;
};

/// Everything except dL_residual, which needs the following time step.
auto monitor_record(const SpoonNetwork& net, double t, bool with_E, const std::optional<Point2>& center,
                    double T) -> MonitorRecord;

auto monitor_csv_header() -> std::string;
auto monitor_csv_row(const MonitorRecord& r) -> std::string;
auto parse_monitor_csv(const std::string& text) -> std::vector<MonitorRecord>;

/// 3 A / (5 pi): the lifetime of a loop of area A under the area law.
auto singular_time(double area) -> double;

inline constexpr double kAreaRate = -5.0 * 3.14159265358979323846 / 3.0;

}  // namespace spoonflow
