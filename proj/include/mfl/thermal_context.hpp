#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mfl {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Inverse temperature plus the numerical settings shared by flows and fields.
///
/// `beta == +inf` encodes the vacuum. The momentum grid used by the field
/// quadratures is the symmetric uniform grid of `np + 1` nodes on
/// [-pmax, pmax].
struct ThermalContext {
  double beta = 1.0;
  double tol = 1e-12;
  double pmax = 200.0;
  int np = 8192;
  /// Relative size of the integrand near the cutoff above which a momentum
  /// quadrature is rejected.
  double tail_tol = 1e-9;

  [[nodiscard]] bool vacuum() const { return std::isinf(beta); }

  /// The length scale beta/(2 pi) that appears in every chart.
  [[nodiscard]] double scale() const { return beta / two_pi; }

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive or +inf");
    if (!(pmax > 0.0)) throw std::invalid_argument("pmax must be positive");
    if (np < 16) throw std::invalid_argument("np must be at least 16");
    if (np % 2 != 0) throw std::invalid_argument("np must be even");
  }

  static ThermalContext with_beta(double b) {
    ThermalContext ctx;
    ctx.beta = b;
    ctx.validate();
    return ctx;
  }

  static ThermalContext vacuum_state() {
    return with_beta(std::numeric_limits<double>::infinity());
  }
};

} // namespace mfl
