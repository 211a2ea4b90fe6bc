#include "mfl/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfl/errors.hpp"
#include "mfl/flow_maps.hpp"

namespace mfl {

namespace {

constexpr RayDirection kPlus = RayDirection::plus;

int support_cells(const TestFunction& f) {
  return std::max(8, static_cast<int>(std::lround((f.support_hi - f.support_lo) / f.dx)));
}

// Cells across the image support so that the most compressed part of f keeps
// the original spacing (at most 32 times the original count).
int image_cells(const ThermalContext& ctx, TransformKind kind, double param, const TestFunction& f,
                double lo, double hi);

int leading_pad(const TestFunction& f) {
  return std::max(0, static_cast<int>(std::floor((f.support_lo - f.x0) / f.dx + 1e-9)));
}

// Preimage of x under the n = 0 action, false where it is undefined.
bool preimage(const ThermalContext& ctx, TransformKind kind, double param, double x, double& y) {
  if (kind == TransformKind::modular) {
    if (!modular_domain(ctx, kPlus, -param, x)) return false;
    y = modular_flow_ray(ctx, kPlus, -param, x);
  } else {
    if (!gamma_domain(ctx, kPlus, -param, x)) return false;
    y = gamma_flow_ray(ctx, kPlus, -param, x);
  }
  return std::isfinite(y);
}

double forward(const ThermalContext& ctx, TransformKind kind, double param, double x) {
  return kind == TransformKind::modular ? modular_flow_ray(ctx, kPlus, param, x)
                                        : gamma_flow_ray(ctx, kPlus, param, x);
}

// Fill g with f(preimage) strictly inside (lo, hi); zero elsewhere.
void pull_back(const ThermalContext& ctx, TransformKind kind, double param, const TestFunction& f,
               double lo, double hi, TestFunction& g) {
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    double y = 0.0;
    g.samples[j] = (x > lo && x < hi && preimage(ctx, kind, param, x, y)) ? f(y) : 0.0;
  }
}

int image_cells(const ThermalContext& ctx, TransformKind kind, double param, const TestFunction& f,
                double lo, double hi) {
  const int cells = support_cells(f);
  const double h = (f.support_hi - f.support_lo) / cells;
  double min_jac = std::numeric_limits<double>::infinity();
  double prev = lo;
  for (int k = 1; k <= cells; ++k) {
    const double next = k == cells ? hi : forward(ctx, kind, param, f.support_lo + k * h);
    min_jac = std::min(min_jac, (next - prev) / h);
    prev = next;
  }
  const double want = std::ceil((hi - lo) / (h * min_jac));
  return static_cast<int>(std::clamp(want, static_cast<double>(cells), 32.0 * cells));
}

void check_param(TransformKind kind, double param) {
  if (!std::isfinite(param)) throw std::invalid_argument("transform parameter must be finite");
  if (kind == TransformKind::gamma && param < 0.0)
    throw DomainError("gamma transform needs tau >= 0 (tau = " + std::to_string(param) + ")");
}

} // namespace

std::string to_string(TransformKind k) { return k == TransformKind::modular ? "modular" : "gamma"; }

TransformKind transform_kind_from_string(const std::string& s) {
  if (s == "modular" || s == "delta") return TransformKind::modular;
  if (s == "gamma") return TransformKind::gamma;
  throw std::invalid_argument("unknown transform kind: " + s);
}

TestFunction base_transform(const ThermalContext& ctx, TransformKind kind, double param,
                            const TestFunction& f) {
  ctx.validate();
  f.validate();
  check_param(kind, param);
  if (param == 0.0) return f;
  if (!f.compact_support) throw std::invalid_argument("the n = 0 action needs a compactly supported f");

  const double lo = forward(ctx, kind, param, f.support_lo);
  const double hi = forward(ctx, kind, param, f.support_hi);
  TestFunction g = make_grid(lo, hi, image_cells(ctx, kind, param, f, lo, hi), leading_pad(f));
  pull_back(ctx, kind, param, f, lo, hi, g);
  g.support_lo = lo;
  g.support_hi = hi;
  return g;
}

TestFunction modular_transform(const ThermalContext& ctx, double u, const TestFunction& f, bool clip) {
  if (clip && u < 0.0)
    throw DomainError("clipped modular transform needs u >= 0 (u = " + std::to_string(u) + ")");
  if (!clip && !modular_domain(ctx, kPlus, u, f.support_lo))
    throw DomainError("modular transform: 1 + exp(-2pi u)[exp(2pi x/beta) - 1] > 0 fails on supp f (u = " +
                      std::to_string(u) + ", x = " + std::to_string(f.support_lo) + ")");
  return base_transform(ctx, TransformKind::modular, u, f);
}

TestFunction gamma_transform(const ThermalContext& ctx, double tau, const TestFunction& f) {
  return base_transform(ctx, TransformKind::gamma, tau, f);
}

TestFunction higher_transform(const ThermalContext& ctx, int n, TransformKind kind, double param,
                              const TestFunction& f, double x_max) {
  if (n < 0) throw std::invalid_argument("field index n must be non-negative");
  if (n == 0) {
    return kind == TransformKind::modular ? modular_transform(ctx, param, f)
                                          : gamma_transform(ctx, param, f);
  }
  ctx.validate();
  f.validate();
  check_param(kind, param);
  if (kind == TransformKind::modular && f.support_lo < 0.0)
    throw DomainError("higher modular transform needs supp f in [0, inf)");
  if (kind == TransformKind::modular && !modular_domain(ctx, kPlus, param, f.support_lo))
    throw DomainError("modular transform undefined on supp f");

  const TestFunction d = derivative(f, n);
  const double lo = forward(ctx, kind, param, f.support_lo);
  const double hi = forward(ctx, kind, param, f.support_hi);
  const double dx = (hi - lo) / image_cells(ctx, kind, param, f, lo, hi);
  const double top = x_max > 0.0 ? x_max : std::max(2.0 * hi, lo + 1.0);
  if (!(top > hi)) throw std::invalid_argument("x_max must exceed the image support");

  // grid with 0 as a node
  const long jlo = static_cast<long>(std::floor(std::min(0.0, lo) / dx)) - 4;
  const long jhi = static_cast<long>(std::ceil(top / dx));
  TestFunction g;
  g.dx = dx;
  g.x0 = static_cast<double>(jlo) * dx;
  g.samples.assign(static_cast<std::size_t>(jhi - jlo + 1), 0.0);
  pull_back(ctx, kind, param, d, lo, hi, g);
  for (int k = 0; k < n; ++k) g.samples = cumulative_from_zero(g.samples, g.x0, g.dx);
  g.compact_support = false;
  g.support_lo = g.x0;
  g.support_hi = g.x_end();
  return g;
}

double localization_defect(const ThermalContext& ctx, int n, double u, const TestFunction& f,
                           std::pair<double, double> interval) {
  if (n < 0) throw std::invalid_argument("field index n must be non-negative");
  if (f.support_lo < 0.0) throw DomainError("localization defect needs supp f in [0, inf)");
  if (n == 0) return integrate(derivative(modular_transform(ctx, u, f), 1), interval.first, interval.second);
  return integrate(modular_transform(ctx, u, derivative(f, n)), interval.first, interval.second);
}

} // namespace mfl
