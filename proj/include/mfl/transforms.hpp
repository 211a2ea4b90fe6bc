#pragma once

#include <string>
#include <utility>

#include "mfl/test_function.hpp"
#include "mfl/thermal_context.hpp"

namespace mfl {

enum class TransformKind { modular, gamma };

std::string to_string(TransformKind k);
TransformKind transform_kind_from_string(const std::string& s);

/// delta_u f(x) = f(phi_+(-u, x)), phi_+ the modular flow on the positive ray.
///
/// The result lives on a new grid with the same number of cells across the
/// image support phi_+(u, supp f). Where phi_+(-u, x) is undefined the value
/// is 0. clip = true requires u >= 0; clip = false requires phi_+(u, .) to be
/// defined on all of supp f. Violations throw DomainError.
TestFunction modular_transform(const ThermalContext& ctx, double u, const TestFunction& f,
                               bool clip = false);

/// gamma_tau f(x) = f(psi_+(-tau, x)), 0 where psi_+(-tau, x) is undefined.
/// Support maps to psi_+(tau, supp f). tau < 0 throws DomainError.
TestFunction gamma_transform(const ThermalContext& ctx, double tau, const TestFunction& f);

/// n = 0 action of either kind.
TestFunction base_transform(const ThermalContext& ctx, TransformKind kind, double param,
                            const TestFunction& f);

/// Action on the field of index n: the n-fold iterated integral from 0 of the
/// n = 0 action applied to f^(n). The result is sampled on [min(0, lo), x_max]
/// (default x_max = 2 * upper edge of the image support, at least lo + 1) and is
/// flagged compact_support = false. The modular kind requires supp f in [0, inf).
TestFunction higher_transform(const ThermalContext& ctx, int n, TransformKind kind, double param,
                              const TestFunction& f, double x_max = 0.0);

/// int_I delta_u (f^(n)) dx for n >= 1. For n = 0 returns int_I (delta_u f)' dx,
/// the compact-support counterpart, which vanishes once I covers the image support.
double localization_defect(const ThermalContext& ctx, int n, double u, const TestFunction& f,
                           std::pair<double, double> interval);

} // namespace mfl
