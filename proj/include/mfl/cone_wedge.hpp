#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mfl/flow_maps.hpp"
#include "mfl/thermal_context.hpp"

namespace mfl {

/// Point of 2D Minkowski space; x0 is time, x1 space.
struct SpacetimePoint {
  double x0 = 0.0;
  double x1 = 0.0;

  [[nodiscard]] double xR() const { return x0 + x1; }
  [[nodiscard]] double xL() const { return x0 - x1; }

  static SpacetimePoint from_lightcone(double xL, double xR) {
    return {0.5 * (xR + xL), 0.5 * (xR - xL)};
  }
};

enum class Region { ForwardCone, RightWedge };

/// (x0, x1) -> (-x0, -x1): maps the backward cone onto the forward cone.
inline SpacetimePoint point_reflection(const SpacetimePoint& p) { return {-p.x0, -p.x1}; }
/// (x0, x1) -> (x0, -x1): maps the left wedge onto the right wedge.
inline SpacetimePoint space_reflection(const SpacetimePoint& p) { return {p.x0, -p.x1}; }
enum class FlowKind { modular, gamma };

std::string to_string(Region r);
std::string to_string(FlowKind f);
Region region_from_string(const std::string& s);
FlowKind flow_from_string(const std::string& s);

/// Open region membership: cone xR > 0, xL > 0; wedge xR > 0, xL < 0.
bool contains(Region region, const SpacetimePoint& p);

/// Ray directions acting on (xL, xR): cone (plus, plus), wedge (minus, plus).
std::pair<RayDirection, RayDirection> lightcone_directions(Region region);

/// Modular flow of the region algebra acting on the apex/edge p.
/// Throws DomainError naming the failing light-cone component.
SpacetimePoint modular_flow_2d(const ThermalContext& ctx, Region region, double u,
                               const SpacetimePoint& p);

/// Admissible tau-interval of the Gamma flow at p (open interval).
std::pair<double, double> gamma_parameter_range(const ThermalContext& ctx, Region region,
                                                const SpacetimePoint& p);

/// Interval of tau for which the Gamma-image of the translated region lies
/// inside the region itself.
std::pair<double, double> gamma_inclusion_range(const ThermalContext& ctx, Region region,
                                                const SpacetimePoint& p);

SpacetimePoint gamma_flow_2d(const ThermalContext& ctx, Region region, double tau,
                             const SpacetimePoint& p);

struct Remainder {
  double r0 = 0.0;
  double r1 = 0.0;
};

/// Corrections to a pure time shift: modular_flow_2d(u, p) = (x0 - beta u + r0, x1 + r1).
Remainder remainder_terms(const ThermalContext& ctx, Region region, double u,
                          const SpacetimePoint& p);

/// dx1/dx0 along the Gamma flow through p: -tanh(2pi x1/beta) (cone), -tanh(2pi x0/beta) (wedge).
double velocity_field(const ThermalContext& ctx, Region region, const SpacetimePoint& p);

/// Tangent (dx0/dtau, dx1/dtau) of the Gamma flow at p.
SpacetimePoint gamma_tangent(const ThermalContext& ctx, Region region, const SpacetimePoint& p);

struct FlowSample {
  double param = 0.0;
  SpacetimePoint point;
};

using Polyline = std::vector<FlowSample>;

/// Flow line through `seed` sampled at n equally spaced parameters in [lo, hi].
/// A DomainError carries the first parameter value that leaves the domain.
Polyline flow_line(const ThermalContext& ctx, Region region, FlowKind flow,
                   const SpacetimePoint& seed, double lo, double hi, int n);

/// Constant C of the closed-form Gamma line through p:
///   cone:  x0 = -(beta/2pi) log|sinh(2pi x1/beta)| + C
///   wedge: x1 = -(beta/2pi) log cosh(2pi x0/beta) + C
double gamma_line_constant(const ThermalContext& ctx, Region region, const SpacetimePoint& p);

/// First-order distance from p to the Gamma line with constant C:
/// |C(p) - C| / |grad C(p)|. Well conditioned also where the line is nearly
/// parallel to a coordinate axis.
double gamma_line_residual(const ThermalContext& ctx, Region region, const SpacetimePoint& p,
                           double C);

enum class Calibration { t_of_tau, tau_of_t, tau_of_proper, proper_of_tau };

/// Relation between tau and time (or proper time) along the Gamma path through the origin.
double time_calibration(const ThermalContext& ctx, Region region, double value,
                        Calibration direction);

/// d tau / d t_p on the wedge path through the origin.
double wedge_dtau_dproper(const ThermalContext& ctx, double proper_time);

/// Glued chart (xi~L, xi~R) built from the sign of each light-cone coordinate.
std::pair<double, double> causal_chart(const ThermalContext& ctx, const SpacetimePoint& p);

/// One component of the glued chart.
double causal_chart_component(const ThermalContext& ctx, double x);

} // namespace mfl
