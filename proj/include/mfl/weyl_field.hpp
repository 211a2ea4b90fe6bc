#pragma once

#include <complex>
#include <vector>

#include "mfl/test_function.hpp"
#include "mfl/thermal_context.hpp"

namespace mfl {

using cplx = std::complex<double>;

/// Field of scaling dimension n+1, Q(p^2) = p^{2n}.
struct FieldSpec {
  int n = 0;
  void validate() const;
};

/// c in omega(W(f)) = exp(-c omega2(f, f)).
struct StateNormalization {
  double c = 1.0;
  void validate() const;
};

/// f~(p) = (1/2pi) int e^{-ipx} f(x) dx on the symmetric grid p_k = -pmax + k (2 pmax/np), k = 0..np.
struct Spectrum {
  double pmax = 0.0;
  int np = 0;
  std::vector<cplx> values;

  [[nodiscard]] double p(int k) const { return -pmax + 2.0 * pmax * k / np; }
  [[nodiscard]] double dp() const { return 2.0 * pmax / np; }
  /// Value at -p_k, i.e. at index np - k.
  [[nodiscard]] const cplx& at_minus(int k) const { return values[static_cast<std::size_t>(np - k)]; }

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator-=(const Spectrum& o);
  Spectrum& operator*=(double a);
};

Spectrum operator+(Spectrum a, const Spectrum& b);
Spectrum operator-(Spectrum a, const Spectrum& b);
Spectrum operator*(double a, Spectrum b);

/// Transform by direct summation over the samples (trapezoid rule, exact for the padded grid).
Spectrum fourier(const ThermalContext& ctx, const TestFunction& f);
/// Single-frequency transform.
cplx fourier_at(const TestFunction& f, double p);

/// W~2(p) = p^{2n+1}/(1 - e^{-beta p}); limits 1/beta (n = 0) and 0 (n >= 1) at p = 0.
double two_point_momentum(const ThermalContext& ctx, const FieldSpec& spec, double p);

/// W2(xi + i eps) = beta^{-2} sinh^{-2}(pi (xi + i eps)/beta), the n = 0 position kernel.
/// Only n = 0 is available in closed form; other n throw std::invalid_argument.
cplx two_point_position(const ThermalContext& ctx, const FieldSpec& spec, double xi, double eps);

/// K(f, g) = int p^{2n+1} f~(-p) g~(p) dp. Throws QuadratureError if the
/// integrand has not decayed at the cutoff.
cplx symplectic_K(const ThermalContext& ctx, const FieldSpec& spec, const Spectrum& f, const Spectrum& g);
cplx symplectic_K(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
                  const TestFunction& g);

/// omega2(f, g) = int W~2(p) e^{-eps p} f~(-p) g~(p) dp. eps = 0 is the
/// two-point function itself; eps > 0 is the regularization matching
/// two_point_position at the same eps.
cplx omega2(const ThermalContext& ctx, const FieldSpec& spec, const Spectrum& f, const Spectrum& g,
            double eps = 0.0);
cplx omega2(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
            const TestFunction& g, double eps = 0.0);

/// Constant relating the two kernels:
///   omega2(f, g; eps) = kFourierPairConstant * int int W2(x - y + i eps) f(x) g(y) dx dy.
inline constexpr double kFourierPairConstant = -0.25;

/// int int W2(x - y + i eps) f(x) g(y) dx dy by a Toeplitz double sum. Both
/// grids must share dx, and dx <= eps/6 (else ResolutionError).
cplx position_smeared(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
                      const TestFunction& g, double eps);

/// (W(g) Omega, W(f) Omega) = e^{K(g,f)/2} exp(-c omega2(f-g, f-g)).
cplx weyl_inner(const ThermalContext& ctx, const FieldSpec& spec, const StateNormalization& norm,
                const Spectrum& g, const Spectrum& f);
cplx weyl_inner(const ThermalContext& ctx, const FieldSpec& spec, const StateNormalization& norm,
                const TestFunction& g, const TestFunction& f);

/// Gram matrix G_ij = (W(f_i) Omega, W(f_j) Omega).
std::vector<std::vector<cplx>> gram_matrix(const ThermalContext& ctx, const FieldSpec& spec,
                                           const StateNormalization& norm,
                                           const std::vector<TestFunction>& fs);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const std::vector<std::vector<cplx>>& m);

} // namespace mfl
