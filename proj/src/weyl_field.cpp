#include "mfl/weyl_field.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mfl/errors.hpp"

namespace mfl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPhaseRefresh = 256;

void check_compatible(const Spectrum& a, const Spectrum& b) {
  if (a.np != b.np || a.pmax != b.pmax || a.values.size() != b.values.size())
    throw std::invalid_argument("spectra live on different momentum grids");
}

void check_grid(const ThermalContext& ctx, const Spectrum& a) {
  if (a.np != ctx.np || a.pmax != ctx.pmax)
    throw std::invalid_argument("spectrum does not match the context's momentum grid");
}

std::string format_ratio(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

double odd_power(double p, int n) {
  double r = p;
  const double p2 = p * p;
  for (int i = 0; i < n; ++i) r *= p2;
  return r;
}

// sum_k w_k F(k) with trapezoid weights, summed in +-p pairs so odd
// integrands cancel exactly; QuadratureError when the edge has not decayed.
template <class F>
cplx momentum_quadrature(const ThermalContext& ctx, const Spectrum& a, F&& integrand,
                         const char* what) {
  const int np = a.np;
  std::vector<cplx> vals(static_cast<std::size_t>(np) + 1);
  double peak = 0.0, edge = 0.0;
  const double cut = 0.95 * a.pmax;
  for (int k = 0; k <= np; ++k) {
    vals[k] = integrand(k);
    const double m = std::abs(vals[k]);
    if (!std::isfinite(m)) throw QuadratureError(std::string(what) + ": non-finite integrand");
    peak = std::max(peak, m);
    if (std::abs(a.p(k)) >= cut) edge = std::max(edge, m);
  }
  if (edge > ctx.tail_tol * peak)
    throw QuadratureError(std::string(what) + ": integrand not decayed at pmax (edge/peak = " +
                          format_ratio(edge / peak) + ")");
  const int half = np / 2;
  cplx sum = vals[half];
  for (int k = half - 1; k >= 1; --k) sum += vals[k] + vals[np - k];
  sum += 0.5 * (vals[0] + vals[np]);
  return sum * a.dp();
}

} // namespace

void FieldSpec::validate() const {
  if (n < 0) throw std::invalid_argument("field index n must be non-negative");
}

void StateNormalization::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("state normalization c must be positive");
}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  check_compatible(*this, o);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] += o.values[k];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& o) {
  check_compatible(*this, o);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] -= o.values[k];
  return *this;
}

Spectrum& Spectrum::operator*=(double a) {
  for (auto& v : values) v *= a;
  return *this;
}

Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
Spectrum operator*(double a, Spectrum b) { return b *= a; }

Spectrum fourier(const ThermalContext& ctx, const TestFunction& f) {
  ctx.validate();
  Spectrum s;
  s.pmax = ctx.pmax;
  s.np = ctx.np;
  s.values.assign(static_cast<std::size_t>(ctx.np) + 1, cplx(0.0, 0.0));

  std::size_t j0 = f.size(), j1 = 0;
  for (std::size_t j = 0; j < f.size(); ++j)
    if (f.samples[j] != 0.0) {
      j0 = std::min(j0, j);
      j1 = j;
    }
  if (j0 > j1) return s;

  const int half = ctx.np / 2;
  const double norm = f.dx / (2.0 * kPi);
  for (int k = half; k <= ctx.np; ++k) {
    const double p = s.p(k);
    const cplx step = std::polar(1.0, -p * f.dx);
    cplx phase;
    cplx acc(0.0, 0.0);
    for (std::size_t j = j0; j <= j1; ++j) {
      if ((j - j0) % kPhaseRefresh == 0) phase = std::polar(1.0, -p * f.x(j));
      acc += f.samples[j] * phase;
      phase *= step;
    }
    s.values[k] = acc * norm;
    s.values[ctx.np - k] = std::conj(s.values[k]);
  }
  s.values[half] = cplx(s.values[half].real(), 0.0);
  return s;
}

cplx fourier_at(const TestFunction& f, double p) {
  cplx acc(0.0, 0.0);
  for (std::size_t j = 0; j < f.size(); ++j)
    if (f.samples[j] != 0.0) acc += f.samples[j] * std::polar(1.0, -p * f.x(j));
  return acc * (f.dx / (2.0 * kPi));
}

double two_point_momentum(const ThermalContext& ctx, const FieldSpec& spec, double p) {
  spec.validate();
  if (ctx.vacuum()) return p > 0.0 ? odd_power(p, spec.n) : 0.0;
  const double b = ctx.beta;
  if (p == 0.0) return spec.n == 0 ? 1.0 / b : 0.0;
  const double q = odd_power(p, spec.n);
  if (p > 0.0) return q / (-std::expm1(-b * p));
  return q * std::exp(b * p) / std::expm1(b * p);
}

cplx two_point_position(const ThermalContext& ctx, const FieldSpec& spec, double xi, double eps) {
  spec.validate();
  if (spec.n != 0) throw std::invalid_argument("position kernel is only available for n = 0");
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const cplx w(xi, eps);
  if (ctx.vacuum()) return 1.0 / (kPi * kPi * w * w);
  const cplx z = kPi * w / ctx.beta;
  const double b2 = ctx.beta * ctx.beta;
  // sinh^-2 z ~ 4 e^{-2|z|} once cosh overflows
  if (std::abs(z.real()) > 300.0) {
    const cplx e = z.real() > 0.0 ? std::exp(-2.0 * z) : std::exp(2.0 * z);
    return 4.0 * e / b2;
  }
  const cplx s = std::sinh(z);
  return 1.0 / (b2 * s * s);
}

cplx symplectic_K(const ThermalContext& ctx, const FieldSpec& spec, const Spectrum& f,
                  const Spectrum& g) {
  spec.validate();
  check_compatible(f, g);
  check_grid(ctx, f);
  return momentum_quadrature(ctx, f, [&](int k) {
    return odd_power(f.p(k), spec.n) * (f.at_minus(k) * g.values[k]);
  }, "symplectic_K");
}

cplx symplectic_K(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
                  const TestFunction& g) {
  return symplectic_K(ctx, spec, fourier(ctx, f), fourier(ctx, g));
}

cplx omega2(const ThermalContext& ctx, const FieldSpec& spec, const Spectrum& f, const Spectrum& g,
            double eps) {
  spec.validate();
  check_compatible(f, g);
  check_grid(ctx, f);
  if (eps < 0.0) throw std::invalid_argument("regulator eps must be non-negative");
  return momentum_quadrature(ctx, f, [&](int k) {
    const double p = f.p(k);
    double w = two_point_momentum(ctx, spec, p);
    if (eps > 0.0) w *= std::exp(-eps * p);
    return w * (f.at_minus(k) * g.values[k]);
  }, "omega2");
}

cplx omega2(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
            const TestFunction& g, double eps) {
  return omega2(ctx, spec, fourier(ctx, f), fourier(ctx, g), eps);
}

cplx position_smeared(const ThermalContext& ctx, const FieldSpec& spec, const TestFunction& f,
                      const TestFunction& g, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (std::abs(f.dx - g.dx) > 1e-12 * f.dx)
    throw std::invalid_argument("position smearing needs a common grid spacing");
  if (f.dx > eps / 6.0)
    throw ResolutionError("grid spacing " + std::to_string(f.dx) + " too coarse for eps " +
                          std::to_string(eps) + " (need dx <= eps/6)");

  auto range = [](const TestFunction& h) {
    long lo = static_cast<long>(h.size()), hi = -1;
    for (std::size_t j = 0; j < h.size(); ++j)
      if (h.samples[j] != 0.0) {
        lo = std::min(lo, static_cast<long>(j));
        hi = static_cast<long>(j);
      }
    return std::pair<long, long>{lo, hi};
  };
  const auto [i0, i1] = range(f);
  const auto [j0, j1] = range(g);
  if (i0 > i1 || j0 > j1) return {0.0, 0.0};

  // x_i - y_j depends on i - j only
  const long dmin = i0 - j1, dmax = i1 - j0;
  const double offset = f.x0 - g.x0;
  std::vector<cplx> kern(static_cast<std::size_t>(dmax - dmin + 1));
  for (long d = dmin; d <= dmax; ++d)
    kern[d - dmin] = two_point_position(ctx, spec, offset + static_cast<double>(d) * f.dx, eps);

  cplx total(0.0, 0.0);
  for (long i = i0; i <= i1; ++i) {
    const double fi = f.samples[i];
    if (fi == 0.0) continue;
    cplx row(0.0, 0.0);
    for (long j = j0; j <= j1; ++j) row += g.samples[j] * kern[i - j - dmin];
    total += fi * row;
  }
  return total * (f.dx * g.dx);
}

cplx weyl_inner(const ThermalContext& ctx, const FieldSpec& spec, const StateNormalization& norm,
                const Spectrum& g, const Spectrum& f) {
  norm.validate();
  const Spectrum h = f - g;
  const cplx k = symplectic_K(ctx, spec, g, f);
  bool zero = std::all_of(h.values.begin(), h.values.end(), [](const cplx& v) { return v == 0.0; });
  const cplx w = zero ? cplx(0.0, 0.0) : omega2(ctx, spec, h, h);
  return std::exp(0.5 * k - norm.c * w);
}

cplx weyl_inner(const ThermalContext& ctx, const FieldSpec& spec, const StateNormalization& norm,
                const TestFunction& g, const TestFunction& f) {
  return weyl_inner(ctx, spec, norm, fourier(ctx, g), fourier(ctx, f));
}

std::vector<std::vector<cplx>> gram_matrix(const ThermalContext& ctx, const FieldSpec& spec,
                                           const StateNormalization& norm,
                                           const std::vector<TestFunction>& fs) {
  std::vector<Spectrum> sp;
  sp.reserve(fs.size());
  for (const auto& f : fs) sp.push_back(fourier(ctx, f));
  const std::size_t m = fs.size();
  std::vector<std::vector<cplx>> g(m, std::vector<cplx>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g[i][j] = weyl_inner(ctx, spec, norm, sp[i], sp[j]);
  return g;
}

double min_eigenvalue(const std::vector<std::vector<cplx>>& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  if (n == 0) throw std::invalid_argument("empty matrix");
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(m[i].size()) != n) throw std::invalid_argument("matrix not square");
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m[i][j];
  }
  // symmetrize away rounding before the Hermitian solver
  const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

} // namespace mfl
