#include "mfl/axb_group.hpp"

#include <stdexcept>

#include "mfl/errors.hpp"
#include "mfl/thermal_context.hpp"

namespace mfl::axb {

GroupElement::GroupElement(double lambda_, double tau_) : lambda(lambda_), tau(tau_) {
  if (!(lambda > 0.0)) throw std::invalid_argument("group element needs lambda > 0");
}

GroupElement GroupElement::from_u(double u, double tau) { return {std::exp(-two_pi * u), tau}; }

double GroupElement::u() const { return -std::log(lambda) / two_pi; }

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
  return {g1.lambda * g2.lambda, g1.tau + g1.lambda * g2.tau};
}

GroupElement inverse(const GroupElement& g) { return {1.0 / g.lambda, -g.tau / g.lambda}; }

GroupElement subgroup_element(SubgroupParams p, double r) {
  const double ar = p.a * r;
  double shift;
  if (std::abs(ar) < 1e-8) {
    // (e^{ar} - 1)/a = r (1 + ar/2 + (ar)^2/6 + ...)
    shift = p.b * r * (1.0 + ar / 2.0 + ar * ar / 6.0);
  } else {
    shift = p.b / p.a * std::expm1(ar);
  }
  return {std::exp(ar), shift};
}

double exchange_F(double u, double s) {
  const double w = std::exp(-two_pi * u) * std::expm1(-two_pi * s);
  if (!(w > -1.0)) {
    throw DomainError("exchange_F: 1 + e^{-2 pi u}(e^{-2 pi s} - 1) > 0 violated");
  }
  return -std::log1p(w) / two_pi;
}

GroupElement PosDecomposition::recompose() const {
  return branch == PosBranch::first ? compose(g_M(s), g_N(u)) : compose(g_N(u), g_M(s));
}

PosDecomposition decompose_pos(double tau, PosBranch branch) {
  if (branch == PosBranch::first) {
    if (!(tau > -1.0 / two_pi)) throw DomainError("decompose_pos(first): tau > -1/(2 pi) required");
    const double l = std::log1p(two_pi * tau) / two_pi;
    return {branch, -l, l};
  }
  if (!(tau < 1.0 / two_pi)) throw DomainError("decompose_pos(second): tau < 1/(2 pi) required");
  const double l = std::log1p(-two_pi * tau) / two_pi;
  return {branch, l, -l};
}

double conjugate_pos(SubgroupParams p, double r, double tau) { return std::exp(p.a * r) * tau; }

} // namespace mfl::axb
