#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mfl/errors.hpp"
#include "mfl/test_function.hpp"

using namespace mfl;

namespace {

double bump_d1(double x, double m, double w) {
  const double t = (x - m) / w;
  if (std::fabs(t) >= 1.0) return 0.0;
  const double q = 1.0 - t * t;
  return bump_profile(x, m, w) * (-2.0 * t / (q * q)) / w;
}

} // namespace

TEST(TestFunction, BumpVanishesOutsideAndPeaksAtCentre) {
  EXPECT_EQ(bump_profile(3.0, 1.5, 0.5), 0.0);
  EXPECT_EQ(bump_profile(1.0, 1.5, 0.5), 0.0);
  EXPECT_NEAR(bump_profile(1.5, 1.5, 0.5), std::exp(-1.0), 1e-15);
  const auto f = make_bump(1.5, 0.5);
  EXPECT_NO_THROW(f.validate());
  EXPECT_DOUBLE_EQ(f.support_lo, 1.0);
  EXPECT_DOUBLE_EQ(f.support_hi, 2.0);
  EXPECT_EQ(f.size(), 2048u + 1 + 32);
  EXPECT_EQ(f(0.9), 0.0);
  EXPECT_EQ(f(2.1), 0.0);
  EXPECT_EQ(f(-10.0), 0.0);
}

TEST(TestFunction, InterpolationIsAccurateBetweenNodes) {
  const auto f = make_bump(0.0, 1.0);
  double err = 0.0;
  for (int k = 0; k < 997; ++k) {
    const double x = -0.99 + 1.98 * (k + 0.37) / 997.0;
    err = std::max(err, std::fabs(f(x) - bump_profile(x, 0.0, 1.0)));
  }
  EXPECT_LT(err, 1e-10);
  // nodes are reproduced exactly
  EXPECT_EQ(f(f.x(700)), f.samples[700]);
}

TEST(TestFunction, ValidationRejectsBrokenInvariants) {
  auto f = make_bump(0.0, 1.0);
  auto bad = f;
  bad.dx = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = f;
  bad.samples.front() = 1e-3;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = f;
  bad.support_hi = 100.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = make_bump(0.0, 1.0, 8, 2);
  bad.support_lo = 0.0;
  bad.support_hi = 0.2;
  std::fill(bad.samples.begin(), bad.samples.end(), 0.0);
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_THROW(make_bump(0.0, -1.0), std::invalid_argument);
}

TEST(TestFunction, JsonRoundTripIsExact) {
  const auto f = make_bump(2.0, 0.75, 256, 4);
  const auto g = test_function_from_json(to_json(f));
  EXPECT_EQ(g.x0, f.x0);
  EXPECT_EQ(g.dx, f.dx);
  EXPECT_EQ(g.support_lo, f.support_lo);
  EXPECT_EQ(g.support_hi, f.support_hi);
  EXPECT_EQ(g.samples, f.samples);
  EXPECT_THROW(test_function_from_json("{\"x0\": 0}"), std::invalid_argument);
  EXPECT_THROW(test_function_from_json("not json"), std::invalid_argument);
}

TEST(TestFunction, TranslateAndScale) {
  const auto f = make_bump(1.0, 0.5);
  const auto g = translate(f, 2.5);
  EXPECT_DOUBLE_EQ(g.support_lo, 3.0);
  for (double x : {2.7, 3.3, 3.5, 3.9}) EXPECT_NEAR(g(x), f(x - 2.5), 1e-14);
  const auto h = scale(f, -2.0);
  EXPECT_NEAR(h(1.2), -2.0 * f(1.2), 1e-15);
}

TEST(TestFunction, SpectralDerivativeMatchesAnalytic) {
  const double m = 1.0, w = 1.0;
  const auto f = make_bump(m, w);
  const auto d = derivative(f, 1);
  double err = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    err = std::max(err, std::fabs(d.samples[j] - bump_d1(d.x(j), m, w)));
    peak = std::max(peak, std::fabs(bump_d1(d.x(j), m, w)));
  }
  EXPECT_LT(err / peak, 1e-8);
  EXPECT_EQ(derivative(f, 0).samples, f.samples);
}

TEST(TestFunction, SecondDerivativeIntegratesToZero) {
  const auto f = make_bump(0.0, 1.0);
  const auto d2 = derivative(f, 2);
  EXPECT_NEAR(integrate(d2, -2.0, 2.0), 0.0, 1e-10);
}

TEST(TestFunction, FiniteDifferencePathOnNonCompactData) {
  // sin on a grid without compact support: falls back to 4th-order differences
  auto f = make_grid(-1.0, 1.0, 400, 0);
  f.compact_support = false;
  f.support_lo = f.x0;
  f.support_hi = f.x_end();
  for (std::size_t j = 0; j < f.size(); ++j) f.samples[j] = std::sin(f.x(j));
  const auto d = derivative(f, 1);
  for (std::size_t j = 4; j + 4 < d.size(); ++j) EXPECT_NEAR(d.samples[j], std::cos(d.x(j)), 1e-9);
}

TEST(TestFunction, CoarseGridIsAResolutionError) {
  // a narrow bump resolved by a handful of nodes
  const auto f = make_bump(0.0, 1.0, 10, 4);
  EXPECT_THROW(derivative(f, 3), ResolutionError);
}

TEST(TestFunction, CumulativeIntegralFourthOrder) {
  auto err_for = [](int nodes) {
    auto f = make_grid(0.0, 2.0, nodes, 0);
    for (std::size_t j = 0; j < f.size(); ++j) f.samples[j] = std::cos(3.0 * f.x(j));
    const auto c = cumulative_from_zero(f.samples, f.x0, f.dx);
    double e = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j)
      e = std::max(e, std::fabs(c[j] - std::sin(3.0 * f.x(j)) / 3.0));
    return e;
  };
  const double e1 = err_for(64), e2 = err_for(128);
  EXPECT_LT(e2, 1e-6);
  EXPECT_GT(e1 / e2, 12.0);
  EXPECT_THROW(cumulative_from_zero({1, 2, 3, 4, 5}, 0.3, 1.0), std::invalid_argument);
}

TEST(TestFunction, CumulativeFromZeroAnchorsAtZero) {
  auto f = make_grid(-1.0, 1.0, 200, 0);
  for (std::size_t j = 0; j < f.size(); ++j) f.samples[j] = f.x(j) * f.x(j);
  const auto c = cumulative_from_zero(f.samples, f.x0, f.dx);
  EXPECT_EQ(c[100], 0.0);
  EXPECT_NEAR(c.front(), -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(c.back(), 1.0 / 3.0, 1e-12);
}

TEST(TestFunction, IntegrateMatchesQuadratureOfProfile) {
  // int exp(-1/(1-t^2)) dt over (-1, 1)
  const double ref = 0.44399381616807943;
  const auto f = make_bump(3.0, 2.0);
  EXPECT_NEAR(integrate(f, 0.0, 6.0), 2.0 * ref, 1e-10);
  EXPECT_NEAR(integrate(f, 3.0, 6.0), ref, 1e-10);
  EXPECT_NEAR(integrate(f, 6.0, 3.0), -ref, 1e-10);
}

TEST(TestFunction, SupDistance) {
  const auto f = make_bump(0.0, 1.0);
  EXPECT_EQ(sup_distance(f, f), 0.0);
  EXPECT_NEAR(sup_distance(f, scale(f, 0.5)), 0.5 * std::exp(-1.0), 1e-12);
}
