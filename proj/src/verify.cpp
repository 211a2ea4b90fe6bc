#include "mfl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mfl/errors.hpp"
#include "mfl/flow_maps.hpp"
#include "mfl/transforms.hpp"

namespace mfl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr RayDirection kPlus = RayDirection::plus;
// Below this shift the defect is expanded to 4th order in Delta.
constexpr double kTaylorShift = 1e-3;

// f~ for f(. - a).
Spectrum shifted(const Spectrum& s, double a) {
  Spectrum out = s;
  for (int k = 0; k <= s.np; ++k) out.values[k] *= std::polar(1.0, -s.p(k) * a);
  return out;
}

// delta_u fh(x) = fh(x + beta u + Delta(x)); accurate for tiny Delta.
double shift_delta(const ThermalContext& ctx, double u, double x) {
  if (ctx.vacuum()) return std::expm1(two_pi * u) * x;
  const double s = ctx.scale();
  return s * std::log1p(std::exp(-x / s) * std::expm1(-two_pi * u));
}

struct Defect {
  Spectrum h2;  // T(-beta u) fh
  Spectrum d;   // delta_u fh - h2
};

// fh = f(. - t). Spectra of h2 and of the difference d, computed without
// cancellation when the two smearing functions nearly agree.
Defect defect(const ThermalContext& ctx, const TestFunction& f, double u, double t) {
  const double bu = ctx.vacuum() ? 0.0 : ctx.beta * u;
  const TestFunction fh = translate(f, t);
  Defect out;
  out.h2 = shifted(fourier(ctx, f), t - bu);
  if (u == 0.0) {
    out.d = out.h2;
    for (auto& v : out.d.values) v = 0.0;
    return out;
  }

  double dmax = 0.0;
  bool defined = true;
  for (std::size_t j = 0; j < fh.size(); ++j) {
    if (fh.samples[j] == 0.0) continue;
    const double x = fh.x(j) - bu;
    const double dl = ctx.vacuum() ? 0.0 : std::exp(-x / ctx.scale()) * std::expm1(-two_pi * u);
    if (!(dl > -1.0)) {
      defined = false;
      break;
    }
    dmax = std::max(dmax, std::fabs(shift_delta(ctx, u, x)));
  }

  if (ctx.vacuum() || !defined || dmax >= kTaylorShift) {
    out.d = fourier(ctx, modular_transform(ctx, u, fh)) - out.h2;
    return out;
  }

  // d(x) = sum_k Delta^k/k! fh^(k)(x + beta u) on the grid of h2, whose nodes
  // x + beta u are exactly the nodes of fh
  std::vector<TestFunction> der;
  for (int k = 1; k <= 4; ++k) der.push_back(derivative(fh, k));
  TestFunction d = translate(fh, -bu);
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double dl = shift_delta(ctx, u, d.x(j));
    double acc = 0.0, pw = 1.0, fact = 1.0;
    for (int k = 1; k <= 4; ++k) {
      pw *= dl;
      fact *= k;
      acc += pw / fact * der[k - 1].samples[j];
    }
    d.samples[j] = acc;
  }
  out.d = fourier(ctx, d);
  return out;
}

void require_positive_support(const TestFunction& f, const char* what) {
  if (f.support_lo < 0.0) throw DomainError(std::string(what) + ": supp f must lie in [0, inf)");
}

} // namespace

double translation_defect(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
                          double u, double t, const StateNormalization& norm) {
  norm.validate();
  require_positive_support(f, "translation_defect");
  if (!(t >= 0.0)) throw std::invalid_argument("translation_defect needs t >= 0");
  const Defect df = defect(ctx, f, u, t);
  if (u == 0.0) return 0.0;
  const double a = norm.c * omega2(ctx, spec, df.d, df.d).real();
  const double kappa = 0.5 * symplectic_K(ctx, spec, df.h2, df.d).imag();
  const double sk = std::sin(0.5 * kappa);
  const double d2 = 2.0 * (-std::expm1(-a) + 2.0 * std::exp(-a) * sk * sk);
  return std::sqrt(std::max(d2, 0.0));
}

namespace {

// beta^2 [W2(xi - delta) - W2(xi)] for the n = 0 kernel, written so that tiny
// delta keeps full relative accuracy.
double kernel_shift_difference(double beta, double xi, double delta) {
  const double a = kPi * xi / beta, b = kPi * delta / beta;
  if (std::fabs(a) > 300.0 || std::fabs(a - b) > 300.0) {
    // sinh^-2 z ~ 4 e^{-2|z|}
    const double sg = a > 0.0 ? 1.0 : -1.0;
    return 4.0 * std::exp(-2.0 * std::fabs(a)) * std::expm1(2.0 * sg * b);
  }
  const double sa = std::sinh(a), sab = std::sinh(a - b);
  return std::sinh(2.0 * a - b) * std::sinh(b) / (sab * sab * sa * sa);
}

double kernel_n0(double beta, double xi) {
  const double a = kPi * xi / beta;
  if (std::fabs(a) > 300.0) return 4.0 * std::exp(-2.0 * std::fabs(a)) / (beta * beta);
  const double sa = std::sinh(a);
  return 1.0 / (beta * beta * sa * sa);
}

} // namespace

BoundReport thm22_bound_check(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
                              const TestFunction& g, double u, double t,
                              const StateNormalization& norm) {
  norm.validate();
  if (!(t > 0.0)) throw std::invalid_argument("bound check needs t > 0");
  require_positive_support(f, "thm22_bound_check");
  if (g.support_hi > 0.0) throw DomainError("thm22_bound_check: supp g must lie in (-inf, 0]");

  BoundReport r;
  r.u = u;
  r.t = t;

  const Spectrum gs = fourier(ctx, g);
  const Spectrum a = shifted(fourier(ctx, f), t);
  const Spectrum minus_a = -1.0 * a, minus_g = -1.0 * gs;
  auto norm_of = [&](const Spectrum& s) { return std::sqrt(std::abs(weyl_inner(ctx, spec, norm, s, s))); };
  r.M = std::max(norm_of(a) * norm_of(gs), norm_of(minus_a) * norm_of(minus_g));

  const double q = ctx.vacuum() ? 0.0 : std::fabs(std::expm1(two_pi * u)) / std::expm1(two_pi * t / ctx.beta);
  r.rhs = 2.0 * r.M * std::min(q, 1.0);

  if (u == 0.0) {
    r.lhs = 0.0;
  } else if (spec.n == 0 && !ctx.vacuum()) {
    // supp g and supp h are disjoint, so K(g,h) = 0 and omega2(g,h) = omega2(h,g) = P(h) is
    // the smooth position-space pairing; omega2(h,h) = omega2(fh,fh) for both h. Then
    //   (W(g)O, W(h)O) = exp(-c [omega2(fh,fh) + omega2(g,g) - 2 P(h)]).
    // P(delta_u fh) is taken in the variable y of fh, so no compressed grid is formed.
    const double b = ctx.beta, s = ctx.scale();
    const double bu = b * u;
    const double m = std::expm1(two_pi * u);
    double p2 = 0.0, dp = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (f.samples[j] == 0.0) continue;
      const double y = f.x(j) + t;
      const double e = std::exp(-y / s) * m;
      const double delta = s * std::log1p(e);   // phi_+(u, y) - (y - beta u)
      const double ddelta = -e / (1.0 + e);     // d delta/dy
      double row2 = 0.0, rowd = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.samples[i] == 0.0) continue;
        const double xi = g.x(i) - y + bu;
        const double w = kernel_n0(b, xi);
        row2 += g.samples[i] * w;
        rowd += g.samples[i] * (kernel_shift_difference(b, xi, delta) / (b * b) * (1.0 + ddelta) + w * ddelta);
      }
      p2 += f.samples[j] * row2;
      dp += f.samples[j] * rowd;
    }
    const double scale = kFourierPairConstant * f.dx * g.dx;
    p2 *= scale;
    dp *= scale;
    const double wff = omega2(ctx, spec, f, f).real();
    const double wgg = omega2(ctx, spec, gs, gs).real();
    const double base = std::exp(-norm.c * (wff + wgg - 2.0 * p2));
    r.lhs = base * std::fabs(std::expm1(2.0 * norm.c * dp));
  } else {
    // momentum route: needs delta_u fh resolved on the momentum grid
    const Defect df = defect(ctx, f, u, t);
    const Spectrum e = df.h2 - gs;
    const cplx z = 0.5 * symplectic_K(ctx, spec, gs, df.d) -
                   norm.c * (omega2(ctx, spec, df.d, e) + omega2(ctx, spec, e, df.d) +
                             omega2(ctx, spec, df.d, df.d));
    const double base = std::exp(-norm.c * omega2(ctx, spec, e, e).real());
    // e^z - 1 = expm1(x) e^{iy} + (e^{iy} - 1) without cancellation
    const double sh = std::sin(0.5 * z.imag());
    const cplx em1 = std::expm1(z.real()) * std::polar(1.0, z.imag()) +
                     cplx(-2.0 * sh * sh, std::sin(z.imag()));
    r.lhs = base * std::abs(em1);
  }
  r.margin = r.rhs - r.lhs;
  return r;
}

RateReport convergence_rate(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
                            double u, const std::vector<double>& ts, const StateNormalization& norm) {
  if (ts.size() < 2) throw std::invalid_argument("convergence_rate needs at least two t values");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1])) throw std::invalid_argument("t values must be increasing");
  RateReport r;
  r.t_values = ts;
  r.expected_slope = ctx.vacuum() ? 0.0 : -two_pi / ctx.beta;
  for (double t : ts) r.deviations.push_back(translation_defect(ctx, spec, f, u, t, norm));
  for (double d : r.deviations)
    if (!(d > 0.0)) throw std::domain_error("convergence_rate: D(t) is not positive");

  const double n = static_cast<double>(ts.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double y = std::log(r.deviations[i]);
    st += ts[i];
    sy += y;
    stt += ts[i] * ts[i];
    sty += ts[i] * y;
  }
  r.slope = (n * sty - st * sy) / (n * stt - st * st);
  r.intercept = (sy - r.slope * st) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double e = std::log(r.deviations[i]) - (r.intercept + r.slope * ts[i]);
    ss += e * e;
  }
  r.residual = std::sqrt(ss / n);
  return r;
}

double operator_relation_2_20(const ThermalContext& ctx, const TestFunction& f, double u, double t) {
  const double phi = modular_flow_ray(ctx, kPlus, u, t);
  const double v = ctx.vacuum() ? -u : (phi - t) / ctx.beta;
  const TestFunction left = modular_transform(ctx, u, translate(f, t));
  const TestFunction right = translate(modular_transform(ctx, u + v, f), phi);
  return sup_distance(left, right);
}

double gamma_relation_2_31(const ThermalContext& ctx, const TestFunction& f, double tau, double t) {
  const double scale = ctx.vacuum() ? 1.0 : std::exp(two_pi * t / ctx.beta);
  const TestFunction left = translate(gamma_transform(ctx, tau, translate(f, -t)), t);
  const TestFunction right = gamma_transform(ctx, scale * tau, f);
  return sup_distance(left, right);
}

double kms_L(const ThermalContext& ctx, double u, double x) {
  return modular_flow_ray(ctx, kPlus, -u, x);
}

cplx kms_final_line(const ThermalContext& ctx, cplx u, double x, double y, double eps) {
  if (ctx.vacuum()) throw std::invalid_argument("KMS closed forms need finite beta");
  const double b = ctx.beta;
  const double ey = std::exp(2.0 * kPi * y / b);
  const double c = std::cosh(kPi * x / b), s = std::sinh(kPi * x / b);
  const cplx bracket = std::exp(-kPi * u) * (ey - 1.0) * (c - s) - std::exp(kPi * u) * 2.0 * s + cplx(0.0, eps);
  return 4.0 * ey / (b * b) / (bracket * bracket);
}

cplx kms_boundary_value(const ThermalContext& ctx, double u, double x, double y, double eps) {
  if (ctx.vacuum()) throw std::invalid_argument("KMS closed forms need finite beta");
  const double b = ctx.beta;
  const double ey = std::exp(2.0 * kPi * y / b);
  const double c = std::cosh(kPi * x / b), s = std::sinh(kPi * x / b);
  const cplx bracket = std::exp(kPi * u) * 2.0 * s - std::exp(-kPi * u) * (ey - 1.0) * (c - s) + cplx(0.0, eps);
  return 4.0 * ey / (b * b) / (bracket * bracket);
}

cplx kms_direct(const ThermalContext& ctx, double u, double x, double y, double eps, int sign) {
  if (ctx.vacuum()) throw std::invalid_argument("KMS closed forms need finite beta");
  const double b = ctx.beta;
  const double ey = std::exp(2.0 * kPi * y / b);
  const double a = 1.0 + std::exp(-2.0 * kPi * u) * (ey - 1.0);
  const double l = kms_L(ctx, -u, y);
  const double dl = std::exp(-2.0 * kPi * u) * ey / a;
  const double reg = eps * std::exp(-kPi * u) / (2.0 * std::sqrt(a));
  const cplx sh = std::sinh(kPi * sign * (l - x) / b) + cplx(0.0, reg);
  return dl / (b * b) / (sh * sh);
}

KmsReport kms_boundary_check(const ThermalContext& ctx, const TestFunction& f, const TestFunction& g,
                             const std::vector<double>& us, double eps) {
  if (ctx.vacuum()) throw std::invalid_argument("KMS check needs finite beta");
  require_positive_support(f, "kms_boundary_check");
  require_positive_support(g, "kms_boundary_check");
  if (eps <= 0.0) eps = 1e-4 * ctx.beta;
  const FieldSpec n0{0};
  KmsReport rep;

  auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::abs(b); };
  for (double u : us) {
    const double ilo = kms_L(ctx, -u, g.support_lo), ihi = kms_L(ctx, -u, g.support_hi);
    const double gap = std::max(f.support_lo - ihi, ilo - f.support_hi);
    if (gap < 0.25 * ctx.beta)
      throw QuadratureError("kms_boundary_check: supp f and supp delta_u g closer than beta/4 (u = " +
                            std::to_string(u) + ")");

    for (int i = 1; i < 10; ++i)
      for (int j = 1; j < 10; ++j) {
        const double x = f.support_lo + (f.support_hi - f.support_lo) * i / 10.0;
        const double y = g.support_lo + (g.support_hi - g.support_lo) * j / 10.0;
        const cplx bv = kms_boundary_value(ctx, u, x, y, eps);
        rep.pointwise = std::max(rep.pointwise, rel(kms_final_line(ctx, cplx(u, -1.0), x, y, eps), bv));
        rep.pointwise = std::max(rep.pointwise, rel(bv, kms_direct(ctx, u, x, y, eps, -1)));
        rep.pointwise = std::max(rep.pointwise, rel(kms_final_line(ctx, cplx(u, 0.0), x, y, eps),
                                                    kms_direct(ctx, u, x, y, eps, +1)));
      }

    cplx sm(0.0, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.samples[i] == 0.0) continue;
      cplx row(0.0, 0.0);
      for (std::size_t j = 0; j < g.size(); ++j)
        if (g.samples[j] != 0.0) row += g.samples[j] * kms_boundary_value(ctx, u, f.x(i), g.x(j), eps);
      sm += f.samples[i] * row;
    }
    sm *= kFourierPairConstant * f.dx * g.dx;
    const cplx mom = omega2(ctx, n0, f, modular_transform(ctx, u, g));
    rep.smeared = std::max(rep.smeared, rel(sm, mom));
  }
  return rep;
}

} // namespace mfl
