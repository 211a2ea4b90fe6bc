#include "mfl/flow_maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfl/errors.hpp"

namespace mfl {
namespace {

// Past this value of 2 pi x/beta the chart is evaluated in the factored form
// x + (beta/2pi) log(...) to avoid overflowing e^{2 pi x/beta}.
constexpr double kLargeArg = 30.0;

// Chart image of the scaled point, relative to the chart unit:
//   w = 2pi xi'/beta  with xi' = e^{-2pi u} xi_+(x).
double modular_w(double y, double u) { return std::exp(-two_pi * u) * std::expm1(y); }

double modular_plus(const ThermalContext& ctx, double u, double x) {
  if (ctx.vacuum()) return std::exp(-two_pi * u) * x;
  if (u == 0.0 || x == 0.0) return x;
  const double s = ctx.scale();
  const double y = x / s;
  if (y > kLargeArg) {
    return x - ctx.beta * u + s * std::log1p(std::exp(-y) * std::expm1(two_pi * u));
  }
  const double a = std::exp(-two_pi * u);
  const double w = modular_w(y, u);
  if (!(w > -1.0)) {
    throw DomainError("modular flow: 1 + exp(-2pi u)[exp(2pi x/beta) - 1] > 0 violated (u=" +
                      std::to_string(u) + ", x=" + std::to_string(x) + ")");
  }
  if (w > -0.5 || a > 2.0) return s * std::log1p(w);
  // Far tail on the negative side: 1 + w = a e^y + (1 - a) without cancellation.
  return s * std::log(std::exp(y - two_pi * u) - std::expm1(-two_pi * u));
}

double gamma_plus(const ThermalContext& ctx, double tau, double x) {
  if (ctx.vacuum()) return x + tau;
  if (tau == 0.0) return x;
  const double s = ctx.scale();
  const double y = x / s;
  const double k = tau / s;
  if (y > kLargeArg) {
    const double q = k * std::exp(-y);
    if (!(q > -1.0)) {
      throw DomainError("gamma flow: 1 + (2pi tau/beta) exp(-2pi x/beta) > 0 violated");
    }
    return x + s * std::log1p(q);
  }
  // For y < 0 and k >= 1/2, k - 1 is exact and keeps the small e^y term.
  const double w = (y < 0.0 && k >= 0.5) ? (k - 1.0) + std::exp(y) : std::expm1(y) + k;
  if (!(w > -1.0)) {
    throw DomainError("gamma flow: 1 + (2pi tau/beta) exp(-2pi x/beta) > 0 violated (tau=" +
                      std::to_string(tau) + ", x=" + std::to_string(x) + ")");
  }
  if (w > -0.5) return s * std::log1p(w);
  return s * std::log(std::exp(y) + k);
}

} // namespace

double xi_chart(const ThermalContext& ctx, RayDirection dir, double x) {
  if (ctx.vacuum()) return x;
  const double s = ctx.scale();
  if (dir == RayDirection::plus) return s * std::expm1(x / s);
  return -s * std::expm1(-x / s);
}

std::pair<double, double> xi_range(const ThermalContext& ctx, RayDirection dir) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (ctx.vacuum()) return {-inf, inf};
  if (dir == RayDirection::plus) return {-ctx.scale(), inf};
  return {-inf, ctx.scale()};
}

double xi_inverse(const ThermalContext& ctx, RayDirection dir, double xi) {
  if (ctx.vacuum()) return xi;
  const double s = ctx.scale();
  if (dir == RayDirection::plus) {
    if (!(xi > -s)) throw DomainError("xi_inverse: xi_+ must exceed -beta/2pi");
    return s * std::log1p(xi / s);
  }
  if (!(xi < s)) throw DomainError("xi_inverse: xi_- must be below beta/2pi");
  return -s * std::log1p(-xi / s);
}

bool modular_domain(const ThermalContext& ctx, RayDirection dir, double u, double x) {
  if (ctx.vacuum()) return true;
  if (dir == RayDirection::minus) {
    u = -u;
    x = -x;
  }
  const double y = x / ctx.scale();
  if (y > kLargeArg || u == 0.0 || x == 0.0) return true;
  return modular_w(y, u) > -1.0;
}

bool gamma_domain(const ThermalContext& ctx, RayDirection dir, double tau, double x) {
  if (ctx.vacuum()) return true;
  if (dir == RayDirection::minus) {
    tau = -tau;
    x = -x;
  }
  const double s = ctx.scale();
  const double y = x / s;
  if (y > kLargeArg) return tau / s * std::exp(-y) > -1.0;
  return std::expm1(y) + tau / s > -1.0;
}

double modular_flow_ray(const ThermalContext& ctx, RayDirection dir, double u, double x) {
  if (dir == RayDirection::plus) return modular_plus(ctx, u, x);
  return -modular_plus(ctx, -u, -x);
}

double gamma_flow_ray(const ThermalContext& ctx, RayDirection dir, double tau, double x) {
  if (dir == RayDirection::plus) return gamma_plus(ctx, tau, x);
  return -gamma_plus(ctx, -tau, -x);
}

double check_translation_commutation(const ThermalContext& ctx, double u, double t,
                                     std::span<const double> xs) {
  constexpr auto plus = RayDirection::plus;
  const double phi_ut = modular_flow_ray(ctx, plus, u, t);
  const double v = ctx.vacuum() ? 0.0 : (phi_ut - t) / ctx.beta;
  double dev = 0.0;
  for (double x : xs) {
    const double lhs = modular_flow_ray(ctx, plus, u, modular_flow_ray(ctx, plus, -u, x) + t);
    const double rhs = modular_flow_ray(ctx, plus, v, x) + phi_ut;
    dev = std::max(dev, std::abs(lhs - rhs));
  }
  return dev;
}

double check_gamma_translation(const ThermalContext& ctx, double tau, double t,
                               std::span<const double> xs) {
  constexpr auto plus = RayDirection::plus;
  const double scaled = ctx.vacuum() ? tau : std::exp(t / ctx.scale()) * tau;
  double dev = 0.0;
  for (double x : xs) {
    const double lhs = gamma_flow_ray(ctx, plus, tau, x - t) + t;
    const double rhs = gamma_flow_ray(ctx, plus, scaled, x);
    dev = std::max(dev, std::abs(lhs - rhs));
  }
  return dev;
}

} // namespace mfl
