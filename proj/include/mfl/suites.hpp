#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mfl/thermal_context.hpp"

namespace mfl {

/// One row of a verification report. For tolerance checks lhs is the measured
/// deviation and rhs the tolerance; for bound checks they are the two sides.
struct CheckResult {
  std::string check;
  std::vector<std::pair<std::string, double>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// group-laws, flows, geometry, kernels, modular, thm22, rates, kms, all.
const std::vector<std::string>& suite_names();

/// Runs a named suite at ctx.beta. Lengths inside the suites are measured in
/// units of beta and the momentum quadrature is chosen per check, so only
/// beta is taken from ctx. Throws std::invalid_argument for unknown names and
/// for beta = inf outside group-laws and flows.
std::vector<CheckResult> run_suite(const std::string& name, const ThermalContext& ctx);

bool all_passed(const std::vector<CheckResult>& results);

/// {"suite": ..., "beta": ..., "pass": ..., "checks": [{"check", "params", "lhs", "rhs", "pass"}]}
std::string report_json(const std::string& suite, const ThermalContext& ctx,
                        const std::vector<CheckResult>& results);

} // namespace mfl
