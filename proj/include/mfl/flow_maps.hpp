#pragma once

#include <span>
#include <utility>

#include "mfl/thermal_context.hpp"

namespace mfl {

/// Selects the algebra of the positive (plus) or negative (minus) half line.
enum class RayDirection { plus, minus };

/// Linearizing chart xi_+ = (beta/2pi)(e^{2pi x/beta} - 1), xi_-(x) = -xi_+(-x).
///
/// In this chart the modular flow is a scaling and the Gamma flow a
/// translation. At beta = inf the chart is the identity.
double xi_chart(const ThermalContext& ctx, RayDirection dir, double x);

/// Inverse chart; throws DomainError when xi is outside the open chart range.
double xi_inverse(const ThermalContext& ctx, RayDirection dir, double xi);

/// Open range of the chart: (-beta/2pi, inf) for plus, (-inf, beta/2pi) for minus.
std::pair<double, double> xi_range(const ThermalContext& ctx, RayDirection dir);

/// True when phi_dir(u, x) is defined.
bool modular_domain(const ThermalContext& ctx, RayDirection dir, double u, double x);
/// True when psi_dir(tau, x) is defined.
bool gamma_domain(const ThermalContext& ctx, RayDirection dir, double tau, double x);

/// phi_+(u, x) = (beta/2pi) log{1 + e^{-2pi u}(e^{2pi x/beta} - 1)}, phi_-(u, x) = -phi_+(-u, -x).
double modular_flow_ray(const ThermalContext& ctx, RayDirection dir, double u, double x);

/// psi_+(tau, x) = x + (beta/2pi) log{1 + (2pi tau/beta) e^{-2pi x/beta}}, psi_-(tau, x) = -psi_+(-tau, -x).
double gamma_flow_ray(const ThermalContext& ctx, RayDirection dir, double tau, double x);

/// Max over the grid of |phi(u, phi(-u, x) + t) - phi(v, x) - phi(u, t)|, v = (phi(u, t) - t)/beta.
double check_translation_commutation(const ThermalContext& ctx, double u, double t,
                                     std::span<const double> xs);

/// Max over the grid of |psi(tau, x - t) + t - psi(e^{2pi t/beta} tau, x)|.
double check_gamma_translation(const ThermalContext& ctx, double tau, double t,
                               std::span<const double> xs);

} // namespace mfl
