#pragma once

#include <cmath>

#include "mfl/thermal_context.hpp"

namespace mfl::axb {

/// Element of the ax+b group, realized as the matrix ((lambda, tau), (0, 1)).
///
/// lambda = exp(-2 pi u) is stored instead of u so that long products do not
/// overflow or lose the scale factor.
struct GroupElement {
  double lambda = 1.0;
  double tau = 0.0;

  GroupElement() = default;
  GroupElement(double lambda_, double tau_);

  static GroupElement identity() { return {}; }
  /// Element with scale exp(-2 pi u) and translation tau.
  static GroupElement from_u(double u, double tau);

  [[nodiscard]] double u() const;
  /// Apply the affine map x -> lambda x + tau.
  [[nodiscard]] double apply(double x) const { return lambda * x + tau; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// Generator (a, b) of the one-parameter subgroup r -> ((e^{ar}, b(e^{ar}-1)/a), (0, 1)).
struct SubgroupParams {
  double a = 0.0;
  double b = 0.0;

  [[nodiscard]] bool trivial() const { return a == 0.0 && b == 0.0; }
};

inline constexpr SubgroupParams modular_N{-two_pi, 0.0};
inline constexpr SubgroupParams positive{0.0, 1.0};
inline constexpr SubgroupParams modular_M{-two_pi, -1.0};

GroupElement compose(const GroupElement& g1, const GroupElement& g2);
GroupElement inverse(const GroupElement& g);

GroupElement subgroup_element(SubgroupParams p, double r);

inline GroupElement g_N(double u) { return subgroup_element(modular_N, u); }
inline GroupElement g_pos(double tau) { return subgroup_element(positive, tau); }
inline GroupElement g_M(double s) { return subgroup_element(modular_M, s); }

/// F(u, s) of the exchange relation g_N(u) g_M(s) = g_M(F) g_N(-F + s + u).
/// Throws DomainError unless 1 + e^{-2 pi u}(e^{-2 pi s} - 1) > 0.
double exchange_F(double u, double s);

enum class PosBranch { first, second };

/// Exponents (s, u) writing g_pos(tau) through the two modular subgroups.
///
/// first:  g_pos(tau) = g_M(s) g_N(u), valid for tau > -1/(2 pi)
/// second: g_pos(tau) = g_N(u) g_M(s), valid for tau <  1/(2 pi)
struct PosDecomposition {
  PosBranch branch;
  double s;
  double u;

  [[nodiscard]] GroupElement recompose() const;
};

PosDecomposition decompose_pos(double tau, PosBranch branch);

/// Parameter of g_pos after conjugation by subgroup_element(p, r): e^{ar} tau.
double conjugate_pos(SubgroupParams p, double r, double tau);

} // namespace mfl::axb
