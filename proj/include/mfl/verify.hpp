#pragma once

#include <complex>
#include <vector>

#include "mfl/test_function.hpp"
#include "mfl/thermal_context.hpp"
#include "mfl/weyl_field.hpp"

namespace mfl {

struct BoundReport {
  double u = 0.0;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double M = 0.0;       // max{|A O| |B O|, |A* O| |B* O|}
};

struct RateReport {
  std::vector<double> t_values;
  std::vector<double> deviations;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of the log-linear fit
  double expected_slope = 0.0;
  [[nodiscard]] double relative_slope_error() const {
    return std::abs(slope - expected_slope) / std::abs(expected_slope);
  }
};

struct KmsReport {
  double pointwise = 0.0;  // max relative deviation of the closed forms
  double smeared = 0.0;    // max relative deviation of the smeared boundary value
};

/// |(W(g)O, W(delta_u fh)O) - (W(g)O, W(fh(. + beta u))O)| against
/// 2M min{|e^{2pi u} - 1|/(e^{2pi t/beta} - 1), 1}, fh = f(. - t).
/// Requires supp f in [0, inf), supp g in (-inf, 0], t > 0.
BoundReport thm22_bound_check(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
                              const TestFunction& g, double u, double t,
                              const StateNormalization& norm = {});

/// D(t) = |delta_u A(t) O - T(-beta u) A(t) O| for A = W(f) and a log-linear fit of D against t.
RateReport convergence_rate(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
                            double u, const std::vector<double>& ts, const StateNormalization& norm = {});

/// D(t) for a single t (see convergence_rate).
double translation_defect(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
                          double u, double t, const StateNormalization& norm = {});

/// Sup-norm distance between delta_u(f(. - t)) and delta_{u + v} f translated by phi_+(u, t),
/// v = (phi_+(u, t) - t)/beta.
double operator_relation_2_20(const ThermalContext& ctx, const TestFunction& f, double u, double t);

/// Sup-norm distance between T(t) gamma_tau T(-t) f and gamma_{exp(2pi t/beta) tau} f.
double gamma_relation_2_31(const ThermalContext& ctx, const TestFunction& f, double tau, double t);

/// L(u, x) = (beta/2pi) log{1 + e^{2pi u}(e^{2pi x/beta} - 1)}.
double kms_L(const ThermalContext& ctx, double u, double x);

/// Final closed form of W2(L(-u,y) - x) dL(-u,y)/dy, valid for complex u:
///   (4/beta^2) e^{2pi y/beta} [e^{-pi u}(e^{2pi y/beta} - 1)(cosh - sinh)(pi x/beta)
///                              - 2 e^{pi u} sinh(pi x/beta) + i eps]^{-2}.
cplx kms_final_line(const ThermalContext& ctx, cplx u, double x, double y, double eps);

/// The displayed boundary value of the final line at u - i.
cplx kms_boundary_value(const ThermalContext& ctx, double u, double x, double y, double eps);

/// beta^{-2}[sinh(pi sign (L(-u,y) - x)/beta) + i eps']^{-2} dL(-u,y)/dy, with the
/// regulator eps' = eps e^{-pi u}/(2 sqrt(1 + e^{-2pi u}(e^{2pi y/beta} - 1))) that the
/// algebra of the final line produces. sign = +1 is the real-u integrand, -1 the
/// kernel with reversed argument W2(x - L(-u,y)).
cplx kms_direct(const ThermalContext& ctx, double u, double x, double y, double eps, int sign);

/// Pointwise chain on an (x, y) grid inside supp f x supp g for every u, and
/// the smeared boundary value -1/4 int int [boundary] f g compared with the
/// momentum-space omega2(f, delta_u g). Supports must lie in [0, inf) and the
/// images must stay apart (QuadratureError otherwise).
KmsReport kms_boundary_check(const ThermalContext& ctx, const TestFunction& f, const TestFunction& g,
                             const std::vector<double>& us, double eps = 0.0);

} // namespace mfl
