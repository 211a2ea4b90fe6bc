#include "mfl/cone_wedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mfl/errors.hpp"

namespace mfl {
namespace {

double log_abs_sinh(double z) {
  const double a = std::fabs(z);
  if (a < 1.0) return std::log(std::fabs(std::sinh(z)));
  return a + std::log1p(-std::exp(-2.0 * a)) - std::numbers::ln2;
}

double log_cosh(double z) {
  const double a = std::fabs(z);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// log(1 + e^{-y}(e^{c} - 1)), the correction carried by a plus-ray component.
double log_correction(double y, double c) {
  const double w = std::exp(-y) * std::expm1(c);
  if (!(w > -1.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log1p(w);
}

void require_finite_beta(const ThermalContext& ctx, const char* what) {
  if (ctx.vacuum()) throw std::invalid_argument(std::string(what) + " needs a finite beta");
}

} // namespace

std::string to_string(Region r) { return r == Region::ForwardCone ? "cone" : "wedge"; }

std::string to_string(FlowKind f) { return f == FlowKind::modular ? "modular" : "gamma"; }

Region region_from_string(const std::string& s) {
  if (s == "cone" || s == "forward-cone" || s == "ForwardCone") return Region::ForwardCone;
  if (s == "wedge" || s == "right-wedge" || s == "RightWedge") return Region::RightWedge;
  throw std::invalid_argument("unknown region '" + s + "'");
}

FlowKind flow_from_string(const std::string& s) {
  if (s == "modular") return FlowKind::modular;
  if (s == "gamma") return FlowKind::gamma;
  throw std::invalid_argument("unknown flow '" + s + "'");
}

bool contains(Region region, const SpacetimePoint& p) {
  if (region == Region::ForwardCone) return p.xR() > 0.0 && p.xL() > 0.0;
  return p.xR() > 0.0 && p.xL() < 0.0;
}

std::pair<RayDirection, RayDirection> lightcone_directions(Region region) {
  if (region == Region::ForwardCone) return {RayDirection::plus, RayDirection::plus};
  return {RayDirection::minus, RayDirection::plus};
}

SpacetimePoint modular_flow_2d(const ThermalContext& ctx, Region region, double u,
                               const SpacetimePoint& p) {
  if (u == 0.0) return p;
  const auto [dl, dr] = lightcone_directions(region);
  double xl = 0.0;
  double xr = 0.0;
  try {
    xl = modular_flow_ray(ctx, dl, u, p.xL());
  } catch (const DomainError& e) {
    throw DomainError(std::string("xL component: ") + e.what());
  }
  try {
    xr = modular_flow_ray(ctx, dr, u, p.xR());
  } catch (const DomainError& e) {
    throw DomainError(std::string("xR component: ") + e.what());
  }
  return SpacetimePoint::from_lightcone(xl, xr);
}

std::pair<double, double> gamma_parameter_range(const ThermalContext& ctx, Region region,
                                                const SpacetimePoint& p) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (ctx.vacuum()) return {-inf, inf};
  const double s = ctx.scale();
  const double lo_r = -s * std::exp(p.xR() / s);
  if (region == Region::ForwardCone) {
    return {std::max(lo_r, -s * std::exp(p.xL() / s)), inf};
  }
  return {lo_r, s * std::exp(-p.xL() / s)};
}

std::pair<double, double> gamma_inclusion_range(const ThermalContext& ctx, Region region,
                                                const SpacetimePoint& p) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (ctx.vacuum()) {
    if (region == Region::ForwardCone) return {-std::min(p.xL(), p.xR()), inf};
    return {-p.xR(), -p.xL()};
  }
  const double s = ctx.scale();
  const double lo_r = -s * std::expm1(p.xR() / s);
  if (region == Region::ForwardCone) {
    return {std::max(lo_r, -s * std::expm1(p.xL() / s)), inf};
  }
  return {lo_r, s * std::expm1(-p.xL() / s)};
}

SpacetimePoint gamma_flow_2d(const ThermalContext& ctx, Region region, double tau,
                             const SpacetimePoint& p) {
  if (tau == 0.0) return p;
  const auto [lo, hi] = gamma_parameter_range(ctx, region, p);
  if (!(tau > lo)) {
    throw DomainError(region == Region::ForwardCone
                          ? "gamma flow: tau > -(beta/2pi) min{exp(2pi xL/beta), exp(2pi xR/beta)} "
                            "violated (tau=" + std::to_string(tau) + ", bound=" +
                                std::to_string(lo) + ")"
                          : "gamma flow: tau > -(beta/2pi) exp(2pi xR/beta) violated (tau=" +
                                std::to_string(tau) + ", bound=" + std::to_string(lo) + ")");
  }
  if (!(tau < hi)) {
    throw DomainError("gamma flow: tau < (beta/2pi) exp(-2pi xL/beta) violated (tau=" +
                      std::to_string(tau) + ", bound=" + std::to_string(hi) + ")");
  }
  const auto [dl, dr] = lightcone_directions(region);
  const double xl = gamma_flow_ray(ctx, dl, tau, p.xL());
  const double xr = gamma_flow_ray(ctx, dr, tau, p.xR());
  return SpacetimePoint::from_lightcone(xl, xr);
}

Remainder remainder_terms(const ThermalContext& ctx, Region region, double u,
                          const SpacetimePoint& p) {
  if (ctx.vacuum()) {
    // No thermal time shift: the flow is a pure dilation about the apex/edge.
    const SpacetimePoint q = modular_flow_2d(ctx, region, u, p);
    return {q.x0 - p.x0, q.x1 - p.x1};
  }
  if (u == 0.0) return {0.0, 0.0};
  const double s = ctx.scale();
  const double c = two_pi * u;
  const double log_br = log_correction(p.xR() / s, c);
  if (std::isnan(log_br)) {
    throw DomainError("xR component: 1 + exp(-2pi u)[exp(2pi x/beta) - 1] > 0 violated");
  }
  const double k = s / 2.0;
  if (region == Region::ForwardCone) {
    const double log_bl = log_correction(p.xL() / s, c);
    if (std::isnan(log_bl)) {
      throw DomainError("xL component: 1 + exp(-2pi u)[exp(2pi x/beta) - 1] > 0 violated");
    }
    return {k * (log_br + log_bl), k * (log_br - log_bl)};
  }
  const double log_cl = log_correction(-p.xL() / s, -c);
  if (std::isnan(log_cl)) {
    throw DomainError("xL component: 1 + exp(2pi u)[exp(-2pi x/beta) - 1] > 0 violated");
  }
  return {k * (log_br - log_cl), k * (log_br + log_cl)};
}

double velocity_field(const ThermalContext& ctx, Region region, const SpacetimePoint& p) {
  if (ctx.vacuum()) return 0.0;
  const double z = region == Region::ForwardCone ? p.x1 : p.x0;
  return -std::tanh(z / ctx.scale());
}

SpacetimePoint gamma_tangent(const ThermalContext& ctx, Region region, const SpacetimePoint& p) {
  if (ctx.vacuum()) return {1.0, 0.0};
  const double s = ctx.scale();
  const double dr = std::exp(-p.xR() / s);
  const double dl = region == Region::ForwardCone ? std::exp(-p.xL() / s) : std::exp(p.xL() / s);
  return {0.5 * (dr + dl), 0.5 * (dr - dl)};
}

Polyline flow_line(const ThermalContext& ctx, Region region, FlowKind flow,
                   const SpacetimePoint& seed, double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("flow_line needs at least two samples");
  if (!(hi >= lo)) throw std::invalid_argument("flow_line parameter range is empty");
  Polyline out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    try {
      const SpacetimePoint q = flow == FlowKind::modular ? modular_flow_2d(ctx, region, t, seed)
                                                         : gamma_flow_2d(ctx, region, t, seed);
      out.push_back({t, q});
    } catch (const DomainError& e) {
      throw DomainError("flow line leaves the domain at parameter " + std::to_string(t) + ": " +
                        e.what());
    }
  }
  return out;
}

double gamma_line_constant(const ThermalContext& ctx, Region region, const SpacetimePoint& p) {
  require_finite_beta(ctx, "gamma_line_constant");
  const double s = ctx.scale();
  if (region == Region::ForwardCone) return p.x0 + s * log_abs_sinh(p.x1 / s);
  return p.x1 + s * log_cosh(p.x0 / s);
}

double gamma_line_residual(const ThermalContext& ctx, Region region, const SpacetimePoint& p,
                           double C) {
  const double s = ctx.scale();
  const double d = std::fabs(gamma_line_constant(ctx, region, p) - C);
  if (region == Region::ForwardCone) {
    // grad C = (1, coth(x1/s)); divide by |grad C| = sqrt(1 + coth^2) = sqrt(1 + tanh^2)/|tanh|.
    const double th = std::fabs(std::tanh(p.x1 / s));
    return d * th / std::sqrt(1.0 + th * th);
  }
  const double th = std::tanh(p.x0 / s);
  return d / std::sqrt(1.0 + th * th);
}

double time_calibration(const ThermalContext& ctx, Region region, double value,
                        Calibration direction) {
  require_finite_beta(ctx, "time_calibration");
  const double s = ctx.scale();
  const double z = value / s;
  auto range_error = [&](const char* what) {
    throw DomainError(std::string("time calibration: ") + what + " (value=" +
                      std::to_string(value) + ")");
  };
  if (region == Region::ForwardCone) {
    // The through-origin path lies on the time axis, so proper time equals t.
    switch (direction) {
      case Calibration::t_of_tau:
      case Calibration::proper_of_tau:
        if (!(z > -1.0)) range_error("tau > -beta/2pi required");
        return s * std::log1p(z);
      case Calibration::tau_of_t:
      case Calibration::tau_of_proper:
        return s * std::expm1(z);
    }
  }
  switch (direction) {
    case Calibration::t_of_tau:
      if (!(std::fabs(z) < 1.0)) range_error("|2pi tau/beta| < 1 required");
      return s * std::atanh(z);
    case Calibration::tau_of_t:
      return s * std::tanh(z);
    case Calibration::tau_of_proper:
      if (!(std::fabs(z) <= std::numbers::pi / 2.0)) range_error("|2pi t_p/beta| <= pi/2 required");
      return s * std::sin(z);
    case Calibration::proper_of_tau:
      if (!(std::fabs(z) <= 1.0)) range_error("|2pi tau/beta| <= 1 required");
      return s * std::asin(z);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double wedge_dtau_dproper(const ThermalContext& ctx, double proper_time) {
  require_finite_beta(ctx, "wedge_dtau_dproper");
  return std::cos(proper_time / ctx.scale());
}

double causal_chart_component(const ThermalContext& ctx, double x) {
  if (ctx.vacuum()) return x;
  const double s = ctx.scale();
  return x >= 0.0 ? s * std::expm1(x / s) : -s * std::expm1(-x / s);
}

std::pair<double, double> causal_chart(const ThermalContext& ctx, const SpacetimePoint& p) {
  return {causal_chart_component(ctx, p.xL()), causal_chart_component(ctx, p.xR())};
}

} // namespace mfl
