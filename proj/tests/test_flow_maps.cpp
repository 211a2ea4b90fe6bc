#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "mfl/errors.hpp"
#include "mfl/flow_maps.hpp"

using namespace mfl;

namespace {

constexpr double pi = std::numbers::pi;
constexpr auto P = RayDirection::plus;
constexpr auto M = RayDirection::minus;

// Literal log expressions, evaluated in long double, as an independent path.
long double phi_plus_literal(long double beta, long double u, long double x) {
  const long double s = beta / (2 * std::numbers::pi_v<long double>);
  return s * std::log(1 + std::exp(-2 * std::numbers::pi_v<long double> * u) *
                              (std::exp(x / s) - 1));
}

long double psi_plus_literal(long double beta, long double tau, long double x) {
  const long double s = beta / (2 * std::numbers::pi_v<long double>);
  return x + s * std::log(1 + (tau / s) * std::exp(-x / s));
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

} // namespace

TEST(XiChart, Examples) {
  const auto ctx = ThermalContext::with_beta(2 * pi);
  EXPECT_EQ(xi_chart(ctx, P, 0.0), 0.0);
  EXPECT_EQ(xi_chart(ctx, M, 0.0), 0.0);
  EXPECT_NEAR(xi_chart(ctx, P, std::log(3.0)), 2.0, 1e-15);
  EXPECT_NEAR(xi_inverse(ctx, P, 2.0), std::log(3.0), 1e-15);
  EXPECT_NEAR(xi_chart(ctx, M, -std::log(2.0)), -1.0, 1e-15);
  EXPECT_NEAR(xi_inverse(ctx, M, -1.0), -std::log(2.0), 1e-15);
}

TEST(XiInverse, Examples) {
  const auto ctx = ThermalContext::with_beta(2 * pi);
  EXPECT_EQ(xi_inverse(ctx, P, 0.0), 0.0);
  EXPECT_NEAR(xi_inverse(ctx, P, 1.0), std::log(2.0), 1e-15);
  EXPECT_THROW(xi_inverse(ctx, P, -1.0), DomainError);
  EXPECT_THROW(xi_inverse(ctx, M, 1.0), DomainError);
}

TEST(XiChart, RangeAndVacuum) {
  const auto ctx = ThermalContext::with_beta(3.0);
  const auto [lo, hi] = xi_range(ctx, P);
  EXPECT_DOUBLE_EQ(lo, -3.0 / (2 * pi));
  EXPECT_TRUE(std::isinf(hi));
  const auto vac = ThermalContext::vacuum_state();
  EXPECT_EQ(xi_chart(vac, P, 1.7), 1.7);
  EXPECT_EQ(xi_inverse(vac, M, -4.2), -4.2);
}

TEST(XiChart, RoundTrip) {
  for (double beta : {0.5, 1.0, 2 * pi, 40.0}) {
    const auto ctx = ThermalContext::with_beta(beta);
    for (double x : linspace(-beta, 3 * beta, 61)) {
      EXPECT_NEAR(xi_inverse(ctx, P, xi_chart(ctx, P, x)), x, 1e-12 * std::max(1.0, std::fabs(x)));
      EXPECT_NEAR(xi_inverse(ctx, M, xi_chart(ctx, M, -x)), -x, 1e-12 * std::max(1.0, std::fabs(x)));
    }
  }
}

TEST(ModularFlowRay, Examples) {
  const auto ctx = ThermalContext::with_beta(2 * pi);
  for (double x : {-0.3, 0.0, 2.0}) EXPECT_EQ(modular_flow_ray(ctx, P, 0.0, x), x);
  for (double u : {-1.0, 0.5, 3.0}) EXPECT_EQ(modular_flow_ray(ctx, P, u, 0.0), 0.0);
  const double u = std::log(2.0) / (2 * pi);
  EXPECT_NEAR(modular_flow_ray(ctx, P, u, std::log(3.0)), std::log(2.0), 1e-15);
}

TEST(ModularFlowRay, MatchesLiteralFormula) {
  for (double beta : {0.7, 1.0, 5.0}) {
    const auto ctx = ThermalContext::with_beta(beta);
    for (double u : {-0.4, -0.05, 0.1, 0.6}) {
      for (double x : linspace(-2 * beta, 4 * beta, 41)) {
        if (!modular_domain(ctx, P, u, x)) continue;
        const double ref = static_cast<double>(phi_plus_literal(beta, u, x));
        EXPECT_NEAR(modular_flow_ray(ctx, P, u, x), ref, 1e-12 * std::max(1.0, std::fabs(ref)));
        const double refm = -static_cast<double>(phi_plus_literal(beta, -u, -x));
        if (modular_domain(ctx, M, u, x)) {
          EXPECT_NEAR(modular_flow_ray(ctx, M, u, x), refm, 1e-12 * std::max(1.0, std::fabs(refm)));
        }
      }
    }
  }
}

TEST(ModularFlowRay, DomainViolationThrows) {
  const auto ctx = ThermalContext::with_beta(1.0);
  // e^{-2pi u} = 2 with x far negative makes the brace 1 + 2(e^{y}-1) < 0.
  const double u = -std::log(2.0) / (2 * pi);
  EXPECT_FALSE(modular_domain(ctx, P, u, -1.0));
  EXPECT_THROW(modular_flow_ray(ctx, P, u, -1.0), DomainError);
  EXPECT_THROW(modular_flow_ray(ctx, M, -u, 1.0), DomainError);
}

TEST(GammaFlowRay, Examples) {
  const auto ctx = ThermalContext::with_beta(2 * pi);
  EXPECT_EQ(gamma_flow_ray(ctx, P, 0.0, 1.3), 1.3);
  EXPECT_NEAR(gamma_flow_ray(ctx, P, 1.0, 0.0), std::log(2.0), 1e-15);
}

TEST(GammaFlowRay, FarNegativeLineIsCarriedToPositiveAxis) {
  const auto ctx = ThermalContext::with_beta(2 * pi);
  const double s = ctx.scale();
  // The exact image e^{-|x|} is representable down to x = -700.
  for (double x : {-1.0, -50.0, -300.0, -700.0}) {
    const double y = gamma_flow_ray(ctx, P, s, x);
    EXPECT_GT(y, 0.0) << x;
    EXPECT_NEAR(y, std::log1p(std::exp(x)), 1e-15 * std::log1p(std::exp(x)));
  }
  // At x = -1e6 the exact image e^{-1e6} underflows; the result stays non-negative.
  EXPECT_GE(gamma_flow_ray(ctx, P, s, -1e6), 0.0);
}

TEST(GammaFlowRay, MatchesLiteralFormulaAndChart) {
  for (double beta : {0.7, 1.0, 5.0}) {
    const auto ctx = ThermalContext::with_beta(beta);
    for (double tau : {-0.1, 0.05, 0.3, 2.0}) {
      for (double x : linspace(-2 * beta, 4 * beta, 41)) {
        if (!gamma_domain(ctx, P, tau, x)) {
          EXPECT_THROW(gamma_flow_ray(ctx, P, tau, x), DomainError);
          continue;
        }
        const double ref = static_cast<double>(psi_plus_literal(beta, tau, x));
        const double got = gamma_flow_ray(ctx, P, tau, x);
        EXPECT_NEAR(got, ref, 1e-12 * std::max(1.0, std::fabs(ref)));
        EXPECT_NEAR(got, xi_inverse(ctx, P, xi_chart(ctx, P, x) + tau),
                    1e-12 * std::max(1.0, std::fabs(ref)));
      }
    }
  }
}

TEST(GammaFlowRay, MinusDirectionDomain) {
  const auto ctx = ThermalContext::with_beta(1.0);
  const double s = ctx.scale();
  // 1 - (2pi tau/beta) e^{2pi x/beta} > 0
  EXPECT_TRUE(gamma_domain(ctx, M, 0.9 * s, 0.0));
  EXPECT_FALSE(gamma_domain(ctx, M, 1.1 * s, 0.0));
  EXPECT_THROW(gamma_flow_ray(ctx, M, 1.1 * s, 0.0), DomainError);
}

TEST(FlowMaps, GroupLawsAndInverses) {
  for (double beta : {0.5, 1.0, 2 * pi}) {
    const auto ctx = ThermalContext::with_beta(beta);
    for (RayDirection d : {P, M}) {
      for (double x : linspace(-beta, 2 * beta, 31)) {
        const double xx = d == P ? x : -x;
        for (double u1 : {-0.08, 0.2, 0.7}) {
          for (double u2 : {-0.05, 0.3}) {
            if (!modular_domain(ctx, d, u2, xx) || !modular_domain(ctx, d, u1 + u2, xx)) continue;
            const double a = modular_flow_ray(ctx, d, u1, modular_flow_ray(ctx, d, u2, xx));
            const double b = modular_flow_ray(ctx, d, u1 + u2, xx);
            EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::fabs(b)));
          }
          if (modular_domain(ctx, d, u1, xx)) {
            EXPECT_NEAR(modular_flow_ray(ctx, d, -u1, modular_flow_ray(ctx, d, u1, xx)), xx,
                        1e-12 * std::max(1.0, std::fabs(xx)));
          }
        }
        for (double t1 : {0.05, 0.4, 3.0}) {
          const double t1d = d == P ? t1 : -t1;
          for (double t2 : {0.1, 1.0}) {
            const double t2d = d == P ? t2 : -t2;
            const double a = gamma_flow_ray(ctx, d, t1d, gamma_flow_ray(ctx, d, t2d, xx));
            const double b = gamma_flow_ray(ctx, d, t1d + t2d, xx);
            EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::fabs(b)));
          }
          EXPECT_NEAR(gamma_flow_ray(ctx, d, -t1d, gamma_flow_ray(ctx, d, t1d, xx)), xx,
                      1e-12 * std::max(1.0, std::fabs(xx)));
        }
      }
    }
  }
}

TEST(FlowMaps, ChartConjugacy) {
  const auto ctx = ThermalContext::with_beta(1.3);
  for (double x : linspace(-1.0, 3.0, 41)) {
    for (double u : {-0.05, 0.25, 1.0}) {
      if (!modular_domain(ctx, P, u, x)) continue;
      const double xi = xi_chart(ctx, P, modular_flow_ray(ctx, P, u, x));
      const double ref = std::exp(-2 * pi * u) * xi_chart(ctx, P, x);
      EXPECT_NEAR(xi, ref, 1e-12 * std::max(1.0, std::fabs(ref)));
      if (!modular_domain(ctx, M, u, -x)) continue;
      const double xim = xi_chart(ctx, M, modular_flow_ray(ctx, M, u, -x));
      const double refm = std::exp(2 * pi * u) * xi_chart(ctx, M, -x);
      EXPECT_NEAR(xim, refm, 1e-12 * std::max(1.0, std::fabs(refm)));
    }
    for (double tau : {0.2, 1.5}) {
      const double xi = xi_chart(ctx, P, gamma_flow_ray(ctx, P, tau, x));
      EXPECT_NEAR(xi, xi_chart(ctx, P, x) + tau, 1e-12 * std::max(1.0, std::fabs(xi)));
    }
  }
}

TEST(FlowMaps, Monotonicity) {
  const auto ctx = ThermalContext::with_beta(1.0);
  const auto xs = linspace(-0.5, 4.0, 200);
  for (double u : {-0.05, 0.3, 2.0}) {
    double prev = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
      if (!modular_domain(ctx, P, u, x)) continue;
      const double y = modular_flow_ray(ctx, P, u, x);
      EXPECT_GT(y, prev);
      prev = y;
    }
  }
  for (double tau : {-0.1, 0.5}) {
    double prev = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
      if (!gamma_domain(ctx, P, tau, x)) continue;
      const double y = gamma_flow_ray(ctx, P, tau, x);
      EXPECT_GT(y, prev);
      prev = y;
    }
  }
}

TEST(FlowMaps, HalfLineIsInvariant) {
  const auto ctx = ThermalContext::with_beta(2.0);
  for (double x : {1e-9, 1e-3, 0.5, 10.0, 500.0}) {
    for (double u : {0.0, 0.4, 5.0}) EXPECT_GT(modular_flow_ray(ctx, P, u, x), 0.0);
    for (double tau : {0.0, 0.4, 50.0}) EXPECT_GT(gamma_flow_ray(ctx, P, tau, x), 0.0);
  }
}

TEST(FlowMaps, OriginIsAttractor) {
  const auto ctx = ThermalContext::with_beta(1.0);
  for (double x : {-0.1, 0.5, 3.0, 40.0}) {
    double prev = std::fabs(x);
    for (double u : {1.0, 2.0, 4.0, 8.0, 16.0, 64.0}) {
      const double y = std::fabs(modular_flow_ray(ctx, P, u, x));
      EXPECT_LT(y, prev);
      prev = y;
    }
    EXPECT_LT(prev, 1e-12);
  }
}

TEST(FlowMaps, VacuumLimit) {
  const double x = 0.8;
  const auto ctx = ThermalContext::with_beta(1e6 * x);
  for (double u : {-0.2, 0.1, 0.5}) {
    const double ref = std::exp(-2 * pi * u) * x;
    EXPECT_LT(std::fabs(modular_flow_ray(ctx, P, u, x) - ref) / std::fabs(ref), 1e-5);
  }
  const auto vac = ThermalContext::vacuum_state();
  EXPECT_DOUBLE_EQ(modular_flow_ray(vac, P, 0.3, x), std::exp(-2 * pi * 0.3) * x);
  EXPECT_DOUBLE_EQ(modular_flow_ray(vac, M, 0.3, x), std::exp(2 * pi * 0.3) * x);
  EXPECT_DOUBLE_EQ(gamma_flow_ray(vac, P, 0.3, x), x + 0.3);
}

TEST(FlowMaps, GammaShiftMapsLineOntoHalfLine) {
  const auto ctx = ThermalContext::with_beta(1.0);
  const double s = ctx.scale();
  // xi_+ ranges over (-s, inf); translating by s gives (0, inf), the chart image of (0, inf).
  EXPECT_EQ(xi_range(ctx, P).first + s, 0.0);
  EXPECT_NEAR(gamma_flow_ray(ctx, P, s, -40.0), 0.0, 1e-15);
  EXPECT_GT(gamma_flow_ray(ctx, P, s, 1.0), 1.0);
}

TEST(TranslationCommutation, Examples) {
  const auto ctx = ThermalContext::with_beta(1.0);
  const auto xs = linspace(0.01, 5.0, 200);
  EXPECT_EQ(check_translation_commutation(ctx, 0.0, 0.7, xs), 0.0);
  EXPECT_LT(check_translation_commutation(ctx, 0.4, 0.0, xs), 1e-14);
  EXPECT_LT(check_translation_commutation(ctx, 0.3, 0.4, xs), 1e-10);
}

TEST(TranslationCommutation, Sweep) {
  for (double beta : {0.5, 2.0, std::numeric_limits<double>::infinity()}) {
    const auto ctx = ThermalContext::with_beta(beta);
    const auto xs = linspace(0.01, 5.0, 100);
    for (double u : {-0.02, 0.1, 0.8}) {
      for (double t : {0.05, 0.5, 2.0}) {
        EXPECT_LT(check_translation_commutation(ctx, u, t, xs), 1e-10) << beta << ' ' << u << ' ' << t;
      }
    }
  }
}

TEST(GammaTranslation, Sweep) {
  for (double beta : {0.5, 2.0, std::numeric_limits<double>::infinity()}) {
    const auto ctx = ThermalContext::with_beta(beta);
    const auto xs = linspace(0.0, 5.0, 100);
    for (double tau : {0.0, 0.1, 1.0}) {
      for (double t : {-0.3, 0.0, 0.6}) {
        EXPECT_LT(check_gamma_translation(ctx, tau, t, xs), 1e-10);
      }
    }
  }
}
