#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mfl/cone_wedge.hpp"

namespace mfl {

enum class FigureFormat { csv, json, svg };

FigureFormat figure_format_from_string(const std::string& s);
std::string to_string(FigureFormat f);

/// Family of flow lines to draw.
///
/// Modular lines are sampled uniformly in u on [lo, hi]. Gamma lines are
/// sampled uniformly in zeta on [lo*beta, hi*beta] and use
///   tau = sigma(zeta) * exp(2pi c/beta),
/// with c the seed's x0 (cone) or x1 (wedge), so that translated seeds give
/// translated lines. Samples outside the flow domain or farther than
/// `clip * beta` from the origin are dropped.
struct FigureSpec {
  Region region = Region::ForwardCone;
  FlowKind flow = FlowKind::modular;
  std::vector<SpacetimePoint> seeds;
  double lo = -4.0;
  double hi = 4.0;
  int samples = 321;
  double clip = 4.0;
};

/// Figures 1-4: cone modular, wedge modular, cone gamma, wedge gamma, on a 3 beta window.
FigureSpec default_figure(const ThermalContext& ctx, int number, int n_seeds = 12);

struct FigureLine {
  int id = 0;
  SpacetimePoint seed;
  Polyline points;
  /// Sweep value (u, or zeta/beta) of each kept point.
  std::vector<double> sweep;
};

std::vector<FigureLine> compute_figure(const ThermalContext& ctx, const FigureSpec& spec);

std::string render_figure(const ThermalContext& ctx, const FigureSpec& spec,
                          const std::vector<FigureLine>& lines, FigureFormat format);

/// Computes, renders and writes the figure; throws IoError on write failure.
void emit_flow_figure(const ThermalContext& ctx, const FigureSpec& spec, FigureFormat format,
                      const std::filesystem::path& path);

} // namespace mfl
