#include "mfl/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "mfl/axb_group.hpp"
#include "mfl/cone_wedge.hpp"
#include "mfl/errors.hpp"
#include "mfl/figure.hpp"
#include "mfl/flow_maps.hpp"
#include "mfl/transforms.hpp"
#include "mfl/verify.hpp"
#include "mfl/weyl_field.hpp"

namespace mfl {

namespace {

using Params = std::vector<std::pair<std::string, double>>;

class Recorder {
public:
  // pass iff dev <= tol; a NaN deviation fails
  void tol(std::string check, Params params, double dev, double tolerance) {
    out.push_back({std::move(check), std::move(params), dev, tolerance, dev <= tolerance});
  }
  void bound(std::string check, Params params, double lhs, double rhs, bool pass) {
    out.push_back({std::move(check), std::move(params), lhs, rhs, pass});
  }
  std::vector<CheckResult> out;
};

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

ThermalContext quad_ctx(const ThermalContext& base, double pmax_beta, int np) {
  ThermalContext c = base;
  c.pmax = pmax_beta / base.beta;
  c.np = np;
  c.validate();
  return c;
}

void require_finite(const ThermalContext& ctx, const std::string& suite) {
  if (ctx.vacuum()) throw std::invalid_argument("suite " + suite + " needs a finite beta");
}

// ---------------------------------------------------------------- group laws

double elem_dev(const axb::GroupElement& a, const axb::GroupElement& b) {
  return std::max(rel(a.lambda, b.lambda), rel(a.tau, b.tau));
}

void group_laws(Recorder& r) {
  using namespace axb;
  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ul(0.1, 3.0), ut(-5.0, 5.0);
    double m = 0.0;
    for (int i = 0; i < 500; ++i) {
      const GroupElement a{ul(rng), ut(rng)}, b{ul(rng), ut(rng)}, c{ul(rng), ut(rng)};
      m = std::max(m, elem_dev(compose(compose(a, b), c), compose(a, compose(b, c))));
      m = std::max(m, elem_dev(compose(a, inverse(a)), GroupElement::identity()));
    }
    r.tol("associativity", {{"triples", 500}}, m, 1e-12);
  }
  const struct { const char* name; SubgroupParams p; } subs[] = {
      {"modular_N", modular_N}, {"positive", positive}, {"modular_M", modular_M}};
  for (int k = 0; k < 3; ++k) {
    double m = 0.0;
    for (double r1 : linspace(-1.0, 1.0, 9))
      for (double r2 : linspace(-1.0, 1.0, 9))
        m = std::max(m, elem_dev(compose(subgroup_element(subs[k].p, r1), subgroup_element(subs[k].p, r2)),
                                 subgroup_element(subs[k].p, r1 + r2)));
    r.tol(std::string("subgroup_additivity_") + subs[k].name, {{"subgroup", k}}, m, 1e-12);
  }
  {
    double m = 0.0;
    int cases = 0;
    for (double u : linspace(-0.5, 1.0, 11))
      for (double s : linspace(-0.5, 1.0, 11)) {
        if (!(std::exp(-two_pi * u) * std::expm1(-two_pi * s) > -1.0 + 1e-3)) continue;
        const double F = exchange_F(u, s);
        m = std::max(m, elem_dev(compose(g_N(u), g_M(s)), compose(g_M(F), g_N(-F + s + u))));
        ++cases;
      }
    r.tol("exchange", {{"cases", cases}}, m, 1e-12);
  }
  for (PosBranch br : {PosBranch::first, PosBranch::second}) {
    double m = 0.0;
    const double sign = br == PosBranch::first ? 1.0 : -1.0;
    for (double tau : linspace(-0.15, 0.15, 13)) m = std::max(m, elem_dev(decompose_pos(tau, br).recompose(), g_pos(tau)));
    for (double tau : {1.0, 3.0, 10.0}) m = std::max(m, elem_dev(decompose_pos(sign * tau, br).recompose(), g_pos(sign * tau)));
    r.tol(br == PosBranch::first ? "decomposition_first" : "decomposition_second", {}, m, 1e-12);
  }
  for (int k = 0; k < 3; ++k) {
    double m = 0.0;
    for (double rr : linspace(-0.7, 0.7, 8))
      for (double tau : linspace(-2.0, 3.0, 6)) {
        const GroupElement h = subgroup_element(subs[k].p, rr);
        const GroupElement c = compose(compose(h, g_pos(tau)), inverse(h));
        m = std::max(m, elem_dev(c, g_pos(conjugate_pos(subs[k].p, rr, tau))));
      }
    r.tol(std::string("conjugation_") + subs[k].name, {{"subgroup", k}}, m, 1e-12);
  }
}

// ---------------------------------------------------------------- flows

void flows(Recorder& r, const ThermalContext& ctx) {
  const auto P = RayDirection::plus, M = RayDirection::minus;
  const double b = ctx.vacuum() ? 1.0 : ctx.beta;
  const auto xs = linspace(-b, 2.0 * b, 31);
  for (RayDirection d : {P, M}) {
    const double sg = d == P ? 1.0 : -1.0;
    double comp = 0.0, inv = 0.0, gcomp = 0.0, ginv = 0.0;
    for (double x0 : xs) {
      const double x = sg * x0;
      for (double u1 : {-0.08, 0.2, 0.7}) {
        for (double u2 : {-0.05, 0.3}) {
          if (!modular_domain(ctx, d, u2, x) || !modular_domain(ctx, d, u1 + u2, x)) continue;
          comp = std::max(comp, rel(modular_flow_ray(ctx, d, u1, modular_flow_ray(ctx, d, u2, x)),
                                    modular_flow_ray(ctx, d, u1 + u2, x)));
        }
        if (modular_domain(ctx, d, u1, x))
          inv = std::max(inv, rel(modular_flow_ray(ctx, d, -u1, modular_flow_ray(ctx, d, u1, x)), x));
      }
      for (double t1 : {0.05, 0.4, 3.0}) {
        for (double t2 : {0.1, 1.0}) {
          gcomp = std::max(gcomp, rel(gamma_flow_ray(ctx, d, sg * t1 * b, gamma_flow_ray(ctx, d, sg * t2 * b, x)),
                                      gamma_flow_ray(ctx, d, sg * (t1 + t2) * b, x)));
        }
        ginv = std::max(ginv, rel(gamma_flow_ray(ctx, d, -sg * t1 * b, gamma_flow_ray(ctx, d, sg * t1 * b, x)), x));
      }
    }
    const double dir = sg;
    r.tol("modular_composition", {{"direction", dir}}, comp, 1e-12);
    r.tol("modular_inverse", {{"direction", dir}}, inv, 1e-12);
    r.tol("gamma_composition", {{"direction", dir}}, gcomp, 1e-12);
    r.tol("gamma_inverse", {{"direction", dir}}, ginv, 1e-12);
  }
  {
    double m = 0.0;
    for (double x : linspace(-b, 3.0 * b, 41)) {
      for (double u : {-0.05, 0.25, 1.0}) {
        if (modular_domain(ctx, P, u, x))
          m = std::max(m, rel(xi_chart(ctx, P, modular_flow_ray(ctx, P, u, x)),
                              std::exp(-two_pi * u) * xi_chart(ctx, P, x)));
        if (modular_domain(ctx, M, u, -x))
          m = std::max(m, rel(xi_chart(ctx, M, modular_flow_ray(ctx, M, u, -x)),
                              std::exp(two_pi * u) * xi_chart(ctx, M, -x)));
      }
      for (double tau : {0.2, 1.5}) {
        m = std::max(m, rel(xi_chart(ctx, P, gamma_flow_ray(ctx, P, tau * b, x)), xi_chart(ctx, P, x) + tau * b));
        m = std::max(m, rel(xi_chart(ctx, M, gamma_flow_ray(ctx, M, -tau * b, -x)), xi_chart(ctx, M, -x) - tau * b));
      }
    }
    r.tol("xi_conjugacy", {}, m, 1e-12);
  }
  {
    const auto grid = linspace(0.01 * b, 5.0 * b, 100);
    double m = 0.0, g = 0.0;
    for (double u : {-0.02, 0.1, 0.3, 0.8})
      for (double t : {0.05, 0.4, 0.5, 2.0}) {
        m = std::max(m, check_translation_commutation(ctx, u, t * b, grid));
        g = std::max(g, check_gamma_translation(ctx, t * b, t * b, grid));
      }
    r.tol("point_map_translation_relation", {}, m, 1e-10);
    r.tol("point_map_gamma_relation", {}, g, 1e-10);
  }
  {
    double m = 0.0;
    for (double x : {0.3, 0.8, 2.5}) {
      const auto hot = ThermalContext::with_beta(1e6 * x);
      for (double u : {-0.2, 0.1, 0.5}) {
        const double ref = std::exp(-two_pi * u) * x;
        m = std::max(m, std::fabs(modular_flow_ray(hot, P, u, x) - ref) / std::fabs(ref));
      }
    }
    r.tol("vacuum_limit", {{"beta_over_x", 1e6}}, m, 1e-5);
  }
  if (!ctx.vacuum()) {
    const double s = ctx.scale();
    // image of the chart range (-s, inf) under xi -> xi + s is (0, inf)
    r.tol("gamma_shift_lower_endpoint", {}, std::fabs(xi_range(ctx, P).first + s), 0.0);
    double bad = 0.0, prev = 0.0;
    for (double x : linspace(-60.0 * b, 60.0 * b, 481)) {
      const double y = gamma_flow_ray(ctx, P, s, x);
      if (!(y > 0.0) || y <= prev) bad += 1.0;
      prev = y;
    }
    r.tol("gamma_shift_onto_half_line", {}, bad, 0.0);
    double stab = 0.0;
    for (double x : {1e-9 * b, 1e-3 * b, 0.5 * b, 10.0 * b}) {
      for (double u : {0.0, 0.4, 5.0})
        if (!(modular_flow_ray(ctx, P, u, x) > 0.0)) stab += 1.0;
      for (double tau : {0.0, 0.4, 50.0})
        if (!(gamma_flow_ray(ctx, P, tau * b, x) > 0.0)) stab += 1.0;
    }
    r.tol("half_line_stability", {}, stab, 0.0);
  }
}

// ---------------------------------------------------------------- geometry

// max pointwise distance between line a shifted by (d0, d1) and line b over common sweep values
double shifted_distance(const FigureLine& a, const FigureLine& b, double d0, double d1) {
  double m = 0.0;
  std::size_t common = 0;
  for (std::size_t i = 0, k = 0; i < a.points.size() && k < b.points.size();) {
    if (a.sweep[i] < b.sweep[k]) { ++i; continue; }
    if (b.sweep[k] < a.sweep[i]) { ++k; continue; }
    m = std::max(m, std::fabs(a.points[i].point.x0 + d0 - b.points[k].point.x0));
    m = std::max(m, std::fabs(a.points[i].point.x1 + d1 - b.points[k].point.x1));
    ++common, ++i, ++k;
  }
  return common < 20 ? std::numeric_limits<double>::infinity() : m;
}

void geometry(Recorder& r, const ThermalContext& ctx) {
  const double b = ctx.beta;
  const auto Cone = Region::ForwardCone, Wedge = Region::RightWedge;
  {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pos(0.01, 3.0), uu(-1.0, 1.5);
    double m = 0.0;
    for (int i = 0; i < 300; ++i) {
      const double a = pos(rng) * b, c = pos(rng) * b, u = uu(rng);
      for (Region reg : {Cone, Wedge}) {
        const auto p = reg == Cone ? SpacetimePoint::from_lightcone(a, c) : SpacetimePoint::from_lightcone(-a, c);
        const auto q = modular_flow_2d(ctx, reg, u, p);
        const auto rm = remainder_terms(ctx, reg, u, p);
        const double sc = std::max({b, std::fabs(q.x0), std::fabs(p.x0), b * std::fabs(u)});
        m = std::max(m, std::fabs(q.x0 - (p.x0 - b * u + rm.r0)) / sc);
        m = std::max(m, std::fabs(q.x1 - (p.x1 + rm.r1)) / sc);
      }
    }
    r.tol("remainder_reconstruction", {{"points", 300}}, m, 1e-12);
  }
  {
    double m = 0.0;
    for (double u : {-1.0, -0.3, 0.4, 1.0})
      for (double a : {8.0, 12.0})
        for (double c : {8.5, 15.0}) {
          const double up = b * std::max(u, 0.0), dn = b * std::max(-u, 0.0);
          const auto p = SpacetimePoint::from_lightcone(a * b + up, c * b + up);
          const auto q = modular_flow_2d(ctx, Cone, u, p);
          m = std::max(m, std::hypot(q.x0 - (p.x0 - b * u), q.x1 - p.x1));
          const auto pw = SpacetimePoint::from_lightcone(-a * b - dn, c * b + up);
          const auto qw = modular_flow_2d(ctx, Wedge, u, pw);
          m = std::max(m, std::hypot(qw.x0 - (pw.x0 - b * u), qw.x1 - pw.x1));
        }
    r.tol("deep_interior_time_translation", {{"distance_over_beta", 8}}, m / b, 1e-6);
  }
  {
    // near the apex: dilation by e^{-2 pi u}, relative error first order in |x|/beta
    double m = 0.0, ratio = 0.0;
    auto apex_err = [&](double u, const SpacetimePoint& p) {
      const double lam = std::exp(-two_pi * u);
      const auto q = modular_flow_2d(ctx, Cone, u, p);
      return std::hypot(q.x0 - lam * p.x0, q.x1 - lam * p.x1) / (lam * std::hypot(p.x0, p.x1));
    };
    for (double u : {-0.1, 0.3, 1.0})
      for (const auto& p0 : {SpacetimePoint{1e-3, 2e-4}, SpacetimePoint{5e-4, -4e-4}}) {
        const SpacetimePoint p{p0.x0 * b, p0.x1 * b};
        m = std::max(m, apex_err(u, p));
        ratio = std::max(ratio, std::fabs(apex_err(u, p) / apex_err(u, {p.x0 / 10, p.x1 / 10}) - 10.0));
      }
    r.tol("near_apex_dilation", {{"x_over_beta", 1e-3}}, m, 1e-2);
    r.tol("near_apex_first_order", {}, ratio, 0.1);
    double e = 0.0;
    const auto p = SpacetimePoint::from_lightcone(-2e-4 * b, 3e-4 * b);
    for (double u : {-0.2, 0.1, 0.3}) {
      const auto q = modular_flow_2d(ctx, Wedge, u, p);
      e = std::max(e, std::fabs(q.xR() / (std::exp(-two_pi * u) * p.xR()) - 1.0));
      e = std::max(e, std::fabs(q.xL() / (std::exp(two_pi * u) * p.xL()) - 1.0));
    }
    r.tol("near_edge_boost", {{"x_over_beta", 3e-4}}, e, 1e-2);
  }
  {
    const double h = 1e-5 * b;
    double m = 0.0;
    for (Region reg : {Cone, Wedge})
      for (double a : {0.1, 0.7, 1.5})
        for (double c : {0.2, 1.1}) {
          const auto p = reg == Cone ? SpacetimePoint::from_lightcone(a * b, c * b)
                                     : SpacetimePoint::from_lightcone(-a * b, c * b);
          const auto q1 = gamma_flow_2d(ctx, reg, h, p);
          const auto q0 = gamma_flow_2d(ctx, reg, -h, p);
          m = std::max(m, std::fabs((q1.x1 - q0.x1) / (q1.x0 - q0.x0) - velocity_field(ctx, reg, p)));
        }
    r.tol("velocity_field", {}, m, 1e-6);
  }
  {
    double m = 0.0;
    const SpacetimePoint seeds[] = {{0.3, 0.4}, {-0.2, 1.1}, {1.0, -0.6}};
    for (const auto& s0 : seeds) {
      const SpacetimePoint seed{s0.x0 * b, s0.x1 * b};
      const auto line = flow_line(ctx, Cone, FlowKind::gamma, seed, 0.0, 5.0 * b, 101);
      const double C = gamma_line_constant(ctx, Cone, line.front().point);
      for (const auto& smp : line) m = std::max(m, gamma_line_residual(ctx, Cone, smp.point, C));
    }
    for (double x1 : {0.8, 1.5}) {
      const SpacetimePoint seed{0.0, x1 * b};
      const auto rng = gamma_parameter_range(ctx, Wedge, seed);
      const double lo = 0.9 * rng.first, hi = 0.9 * rng.second;
      const auto line = flow_line(ctx, Wedge, FlowKind::gamma, seed, lo, hi, 101);
      const double C = gamma_line_constant(ctx, Wedge, line.front().point);
      for (const auto& smp : line) m = std::max(m, gamma_line_residual(ctx, Wedge, smp.point, C));
    }
    r.tol("gamma_line_single_constant", {}, m / b, 1e-8);
  }
  {
    double m3 = 0.0, m4 = 0.0;
    FigureSpec s3 = default_figure(ctx, 3);
    for (double x1 : {-1.3, 0.0, 0.7})
      for (double delta : {-0.8, 0.35, 1.5}) {
        s3.seeds = {{0.2 * b, x1 * b}, {(0.2 + delta) * b, x1 * b}};
        const auto lines = compute_figure(ctx, s3);
        m3 = std::max(m3, shifted_distance(lines[0], lines[1], delta * b, 0.0));
      }
    FigureSpec s4 = default_figure(ctx, 4);
    for (double x0 : {-0.4, 0.0, 0.3})
      for (double delta : {-1.1, 0.25, 2.0}) {
        s4.seeds = {{x0 * b, 0.5 * b}, {x0 * b, (0.5 + delta) * b}};
        const auto lines = compute_figure(ctx, s4);
        m4 = std::max(m4, shifted_distance(lines[0], lines[1], 0.0, delta * b));
      }
    r.tol("figure3_time_translation_invariance", {}, m3 / b, 1e-10);
    r.tol("figure4_space_translation_invariance", {}, m4 / b, 1e-10);
  }
}

// ---------------------------------------------------------------- kernels

// Sum of three bumps on [lo, hi] (units of beta), half-widths at least wmin.
TestFunction random_function(std::mt19937_64& rng, double b, double lo, double hi, int nodes, double wmin) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0), pos(0.0, 1.0);
  struct B { double a, m, w; };
  std::vector<B> bs;
  for (int k = 0; k < 3; ++k) {
    const double w = wmin + 0.5 * pos(rng) * ((hi - lo) / 2.0 - wmin);
    const double m = lo + w + pos(rng) * std::max(0.0, (hi - lo) - 2.0 * w);
    bs.push_back({coef(rng), m * b, std::min(w, (hi - lo) / 2.0) * b});
  }
  return sample_function([&](double x) {
    double s = 0.0;
    for (const auto& q : bs) s += q.a * bump_profile(x, q.m, q.w);
    return s;
  }, lo * b, hi * b, nodes, 8);
}

void kernels(Recorder& r, const ThermalContext& ctx) {
  const double b = ctx.beta;
  for (int n : {0, 1, 2}) {
    double m = 0.0;
    for (double pb : linspace(0.01, 30.0, 61)) {
      const double p = pb / b;
      const double lhs = two_point_momentum(ctx, FieldSpec{n}, -p);
      const double rhs = std::exp(-b * p) * two_point_momentum(ctx, FieldSpec{n}, p);
      m = std::max(m, std::fabs(lhs - rhs) / std::fabs(rhs));
    }
    r.tol("momentum_kms", {{"n", n}}, m, 1e-14);
  }
  {
    const auto q = quad_ctx(ctx, 400.0, 4096);
    std::mt19937_64 rng(11);
    double m = 0.0;
    for (int t = 0; t < 4; ++t) {
      const auto f = random_function(rng, b, -2.0, 2.0, 1024, 1.0);
      const auto g = random_function(rng, b, 0.0, 3.0, 1024, 1.0);
      for (int n : {0, 1}) {
        const FieldSpec spec{n};
        const cplx lhs = omega2(q, spec, f, g) - omega2(q, spec, g, f);
        m = std::max(m, std::abs(lhs - symplectic_K(q, spec, f, g)));
      }
    }
    r.tol("commutator", {}, m, 1e-10);
  }
  {
    const double eps = 1e-3 * b;
    const auto q = quad_ctx(ctx, 4000.0, 16000);
    const FieldSpec n0{0};
    const auto f = make_bump(0.25 * b, 0.25 * b, 4096, 8);
    const auto g = make_bump(0.45 * b, 0.25 * b, 4096, 8);
    const auto h = make_bump(1.35 * b, 0.25 * b, 4096, 8);
    int k = 0;
    for (const auto& [x, y] : {std::pair{&f, &g}, std::pair{&g, &f}, std::pair{&f, &f}, std::pair{&f, &h}}) {
      const cplx mom = omega2(q, n0, *x, *y, eps);
      const cplx pos = kFourierPairConstant * position_smeared(q, n0, *x, *y, eps);
      r.tol("fourier_pair", {{"pair", k++}, {"eps_over_beta", 1e-3}}, std::abs(mom - pos) / std::abs(pos), 1e-4);
    }
  }
  {
    const auto q = quad_ctx(ctx, 400.0, 16384);
    std::mt19937_64 rng(3);
    for (int n : {0, 1})
      for (int t = 0; t < 3; ++t) {
        std::vector<TestFunction> fs;
        for (int i = 0; i < 8; ++i) fs.push_back(scale(random_function(rng, b, -2.0, 2.0, 1024, 1.0), 0.7));
        const auto gm = gram_matrix(q, FieldSpec{n}, StateNormalization{}, fs);
        const double ev = min_eigenvalue(gm);
        r.bound("gram_psd", {{"n", n}, {"trial", t}, {"vectors", 8}}, ev, -1e-8, ev >= -1e-8);
      }
  }
}

// ---------------------------------------------------------------- modular action

void modular(Recorder& r, const ThermalContext& ctx) {
  const double b = ctx.beta;
  const auto q = quad_ctx(ctx, 400.0, 16384);
  {
    const auto f = make_bump(1.0 * b, 0.6 * b);
    double m = 0.0;
    for (auto [u1, u2] : {std::pair{0.1, 0.2}, std::pair{-0.05, 0.3}, std::pair{0.25, -0.1}})
      m = std::max(m, sup_distance(modular_transform(q, u1, modular_transform(q, u2, f)), modular_transform(q, u1 + u2, f)));
    r.tol("delta_group_law", {}, m, 1e-8);
    const auto g = make_bump(-0.3 * b, 0.6 * b, 4096);
    double a = 0.0;
    for (auto [t1, t2] : {std::pair{0.1, 0.2}, std::pair{0.5, 0.05}, std::pair{1.0, 2.0}})
      a = std::max(a, sup_distance(gamma_transform(q, t1 * b, gamma_transform(q, t2 * b, g)), gamma_transform(q, (t1 + t2) * b, g)));
    r.tol("gamma_additivity", {}, a, 1e-8);
  }
  {
    const FieldSpec n0{0};
    const auto f = make_bump(1.5 * b, 1.0 * b);
    const auto g = make_bump(2.2 * b, 1.2 * b);
    const cplx w = omega2(q, n0, f, g);
    const cplx k = symplectic_K(q, n0, f, g);
    for (double u : {-0.08, 0.05, 0.1}) {
      const auto df = modular_transform(q, u, f);
      const auto dg = modular_transform(q, u, g);
      r.tol("delta_unitarity", {{"u", u}}, std::abs(omega2(q, n0, df, dg) - w) / std::abs(w), 1e-6);
      r.tol("delta_symplectic", {{"u", u}}, std::abs(symplectic_K(q, n0, df, dg) - k) / std::abs(k), 1e-6);
    }
  }
  {
    const auto kq = quad_ctx(ctx, 800.0, 32768);
    const auto rep = kms_boundary_check(kq, make_bump(3.5 * b, 0.5 * b, 512), make_bump(0.75 * b, 0.25 * b, 512),
                                        {-0.3, 0.0, 0.25, 0.5});
    r.tol("kms_boundary_smeared", {{"eps_over_beta", 1e-4}}, rep.smeared, 1e-6);
  }
  {
    // support edges through the chart: xi -> e^{-2 pi u} xi
    const double s = ctx.scale();
    auto image = [&](double u, double x) { return s * std::log1p(std::exp(-two_pi * u) * std::expm1(x / s)); };
    double m = 0.0;
    for (double u : {-0.1, 0.11, 0.4})
      for (double c : {0.8, 1.5}) {
        const auto f = make_bump(c * b, 0.5 * b);
        const auto g = modular_transform(q, u, f);
        m = std::max(m, rel(g.support_lo, image(u, f.support_lo)));
        m = std::max(m, rel(g.support_hi, image(u, f.support_hi)));
      }
    r.tol("support_mapping", {}, m, 1e-12);
  }
  {
    const auto f = make_bump(1.5 * b, 0.5 * b);
    const double a = localization_defect(q, 1, 0.2, f, {0.0, 50.0 * b});
    const double c = localization_defect(q, 1, 0.2, f, {0.0, 100.0 * b});
    const double z = localization_defect(q, 0, 0.2, f, {0.0, 50.0 * b});
    r.bound("localization_defect_nonzero", {{"n", 1}, {"u", 0.2}}, std::fabs(a), 1e-4, std::fabs(a) > 1e-4);
    r.tol("localization_defect_stable", {{"n", 1}, {"u", 0.2}}, std::fabs(a - c), 1e-8);
    r.tol("localization_defect_n0", {{"n", 0}, {"u", 0.2}}, std::fabs(z), 1e-12);
  }
  {
    const auto f = make_bump(1.0 * b, 0.5 * b);
    const auto g = make_bump(0.5 * b, 0.5 * b);
    double m = 0.0, mg = 0.0;
    for (double u : linspace(-0.1, 0.3, 5))
      for (double t : linspace(0.1, 1.5, 5)) m = std::max(m, operator_relation_2_20(q, f, u, t * b));
    for (double tau : linspace(0.05, 0.4, 5))
      for (double t : linspace(-0.1, 0.2, 5)) mg = std::max(mg, gamma_relation_2_31(q, g, tau * b, t * b));
    r.tol("translation_relation", {{"grid", 25}}, m, 1e-8);
    r.tol("gamma_translation_relation", {{"grid", 25}}, mg, 1e-8);
  }
}

// ---------------------------------------------------------------- operator bounds

void thm22(Recorder& r, const ThermalContext& ctx) {
  const double b = ctx.beta;
  const auto q = quad_ctx(ctx, 800.0, 32768);
  const auto f = make_bump(0.5 * b, 0.5 * b, 512);
  const auto g = make_bump(-1.0 * b, 0.5 * b, 512);
  for (double u : linspace(-1.0, 1.0, 21))
    for (double t : linspace(0.5, 6.0, 12)) {
      const auto rep = thm22_bound_check(q, FieldSpec{0}, f, g, u, t * b);
      const bool ok = rep.margin >= -1e-9 && rep.M == 1.0;
      r.bound("operator_bound", {{"u", u}, {"t", t * b}, {"M", rep.M}}, rep.lhs, rep.rhs, ok);
    }
}

void rates(Recorder& r, const ThermalContext& ctx) {
  const double b = ctx.beta;
  const auto q = quad_ctx(ctx, 800.0, 32768);
  const TestFunction shapes[] = {
      make_bump(0.5 * b, 0.5 * b),
      make_bump(0.7 * b, 0.7 * b),
      sample_function([&](double x) { return bump_profile(x, 0.5 * b, 0.5 * b) - 0.6 * bump_profile(x, 1.2 * b, 0.6 * b); },
                      0.0, 1.8 * b, 2048, 16),
  };
  const std::vector<double> ts{3.0 * b, 4.0 * b, 5.0 * b, 6.0 * b};
  for (int k = 0; k < 3; ++k) {
    const auto rep = convergence_rate(q, FieldSpec{0}, shapes[k], 0.3, ts);
    bool mono = true;
    for (std::size_t i = 0; i < rep.deviations.size(); ++i)
      mono = mono && rep.deviations[i] > 0.0 && (i == 0 || rep.deviations[i] < rep.deviations[i - 1]);
    const double err = rep.relative_slope_error();
    r.bound("rate_slope", {{"shape", k}, {"u", 0.3}, {"slope", rep.slope}, {"expected", rep.expected_slope}},
            err, 0.05, mono && err <= 0.05);
  }
}

void kms(Recorder& r, const ThermalContext& ctx) {
  const double b = ctx.beta;
  const auto q = quad_ctx(ctx, 800.0, 32768);
  double lg = 0.0;
  for (double u : {-0.7, 0.2, 1.1})
    for (double y : {0.1, 1.0, 3.0}) lg = std::max(lg, rel(kms_L(q, u, kms_L(q, -u, y * b)), y * b));
  r.tol("kms_L_group", {}, lg, 1e-12);
  const double eps = 1e-4 * b;
  const double x = 1.0 * b, y = 2.0 * b, u = 0.3;
  const cplx bv = kms_boundary_value(q, u, x, y, eps);
  r.tol("kms_closed_forms", {{"u", u}, {"x", x}, {"y", y}},
        std::abs(kms_final_line(q, cplx(u, -1.0), x, y, eps) - bv) / std::abs(bv), 1e-10);
  const auto f = make_bump(3.5 * b, 0.5 * b, 512);
  const auto g = make_bump(0.75 * b, 0.25 * b, 512);
  const auto rep = kms_boundary_check(q, f, g, {-0.3, 0.0, 0.25, 0.5});
  r.tol("kms_pointwise", {{"eps_over_beta", 1e-4}}, rep.pointwise, 1e-10);
  r.tol("kms_smeared", {{"eps_over_beta", 1e-4}}, rep.smeared, 1e-6);
}

} // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"group-laws", "flows", "geometry", "kernels", "modular",
                                              "thm22",      "rates", "kms",      "all"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name, const ThermalContext& ctx) {
  ctx.validate();
  Recorder r;
  if (name == "all") {
    for (const auto& n : suite_names()) {
      if (n == "all") continue;
      if (ctx.vacuum() && n != "group-laws" && n != "flows") continue;
      auto part = run_suite(n, ctx);
      for (auto& c : part) c.check = n + "/" + c.check;
      r.out.insert(r.out.end(), part.begin(), part.end());
    }
    return r.out;
  }
  if (name == "group-laws") group_laws(r);
  else if (name == "flows") flows(r, ctx);
  else {
    if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
      throw std::invalid_argument("unknown suite '" + name + "'");
    require_finite(ctx, name);
    if (name == "geometry") geometry(r, ctx);
    else if (name == "kernels") kernels(r, ctx);
    else if (name == "modular") modular(r, ctx);
    else if (name == "thm22") thm22(r, ctx);
    else if (name == "rates") rates(r, ctx);
    else kms(r, ctx);
  }
  return r.out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return !results.empty() &&
         std::all_of(results.begin(), results.end(), [](const CheckResult& c) { return c.pass; });
}

std::string report_json(const std::string& suite, const ThermalContext& ctx,
                        const std::vector<CheckResult>& results) {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  if (ctx.vacuum()) j["beta"] = "inf";
  else j["beta"] = ctx.beta;
  j["pass"] = all_passed(results);
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : results) {
    nlohmann::ordered_json e;
    e["check"] = c.check;
    e["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.params) e["params"][k] = v;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["pass"] = c.pass;
    j["checks"].push_back(std::move(e));
  }
  return j.dump(1) + "\n";
}

} // namespace mfl
