#include "mfl/figure.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "mfl/errors.hpp"
#include "mfl/io.hpp"

namespace mfl {
namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// log(a + e^{lb}) for a >= 0.
double log_add(double a, double lb) {
  if (a <= 0.0) return lb;
  const double la = std::log(a);
  return la > lb ? la + std::log1p(std::exp(lb - la)) : lb + std::log1p(std::exp(la - lb));
}

// Gamma-flow sample for sweep value zeta with tau = sigma(zeta) exp(2pi c/beta).
//
// The chart argument 1 + (2pi tau/beta) e^{-2pi x/beta} of each component is
// expanded in closed form, so samples close to the ends of the admissible tau
// interval (far out on the null directions) keep full relative accuracy.
FlowSample gamma_sample(const ThermalContext& ctx, Region region, const SpacetimePoint& seed,
                        double zeta) {
  const double s = ctx.scale();
  const double z = zeta / s;
  double xr = 0.0;
  double xl = 0.0;
  double tau = 0.0;
  if (region == Region::ForwardCone) {
    // sigma = -s e^{-|x1|/s} + s e^{zeta/s}
    const double a1 = std::fabs(seed.x1) / s;
    const double y1 = seed.x1 / s;
    xr = seed.xR() + s * log_add(-std::expm1(-(a1 + y1)), z - y1);
    xl = seed.xL() + s * log_add(-std::expm1(-(a1 - y1)), z + y1);
    tau = s * (std::exp(z) - std::exp(-a1)) * std::exp(seed.x0 / s);
  } else {
    // sigma = -s e^{x0/s} + (s e^{-x0/s} + s e^{x0/s}) / (1 + e^{-2 zeta/s})
    const double y0 = seed.x0 / s;
    xr = seed.xR() + s * (softplus(-2.0 * y0) - softplus(-2.0 * z));
    xl = seed.xL() - s * (softplus(2.0 * y0) - softplus(2.0 * z));
    const double w = 1.0 / (1.0 + std::exp(-2.0 * z));
    tau = s * (-std::exp(y0) + (std::exp(-y0) + std::exp(y0)) * w) * std::exp(seed.x1 / s);
  }
  return {tau, SpacetimePoint::from_lightcone(xl, xr)};
}

std::vector<SpacetimePoint> seed_row(double fixed, bool fixed_is_time, double from, double to, int n) {
  std::vector<SpacetimePoint> seeds;
  for (int i = 0; i < n; ++i) {
    const double v = n == 1 ? 0.5 * (from + to) : from + (to - from) * i / (n - 1);
    seeds.push_back(fixed_is_time ? SpacetimePoint{fixed, v} : SpacetimePoint{v, fixed});
  }
  return seeds;
}

} // namespace

FigureFormat figure_format_from_string(const std::string& s) {
  if (s == "csv") return FigureFormat::csv;
  if (s == "json") return FigureFormat::json;
  if (s == "svg") return FigureFormat::svg;
  throw std::invalid_argument("unknown figure format '" + s + "'");
}

std::string to_string(FigureFormat f) {
  switch (f) {
    case FigureFormat::csv: return "csv";
    case FigureFormat::json: return "json";
    case FigureFormat::svg: return "svg";
  }
  return "";
}

FigureSpec default_figure(const ThermalContext& ctx, int number, int n_seeds) {
  if (ctx.vacuum()) throw std::invalid_argument("figures are drawn in units of a finite beta");
  if (n_seeds < 1) throw std::invalid_argument("need at least one seed");
  const double b = ctx.beta;
  FigureSpec spec;
  switch (number) {
    case 1:
      spec.region = Region::ForwardCone;
      spec.flow = FlowKind::modular;
      spec.seeds = seed_row(2.0 * b, true, -1.9 * b, 1.9 * b, n_seeds);
      break;
    case 2:
      spec.region = Region::RightWedge;
      spec.flow = FlowKind::modular;
      spec.seeds = seed_row(0.0, true, 0.25 * b, 2.9 * b, n_seeds);
      break;
    case 3:
      spec.region = Region::ForwardCone;
      spec.flow = FlowKind::gamma;
      spec.seeds = seed_row(0.0, true, -2.75 * b, 2.75 * b, n_seeds);
      break;
    case 4:
      spec.region = Region::RightWedge;
      spec.flow = FlowKind::gamma;
      spec.seeds = seed_row(0.0, true, -2.75 * b, 2.75 * b, n_seeds);
      break;
    default:
      throw std::invalid_argument("figure number must be 1, 2, 3 or 4");
  }
  return spec;
}

std::vector<FigureLine> compute_figure(const ThermalContext& ctx, const FigureSpec& spec) {
  if (ctx.vacuum()) throw std::invalid_argument("figures are drawn in units of a finite beta");
  if (spec.samples < 2) throw std::invalid_argument("need at least two samples per line");
  const double limit = spec.clip * ctx.beta;
  std::vector<FigureLine> lines;
  int id = 0;
  for (const SpacetimePoint& seed : spec.seeds) {
    FigureLine line{id++, seed, {}, {}};
    for (int i = 0; i < spec.samples; ++i) {
      const double r = spec.lo + (spec.hi - spec.lo) * i / (spec.samples - 1);
      try {
        FlowSample smp;
        if (spec.flow == FlowKind::modular) {
          smp = {r, modular_flow_2d(ctx, spec.region, r, seed)};
        } else {
          smp = gamma_sample(ctx, spec.region, seed, r * ctx.beta);
        }
        if (!std::isfinite(smp.point.x0) || !std::isfinite(smp.point.x1)) continue;
        if (std::fabs(smp.point.x0) > limit || std::fabs(smp.point.x1) > limit) continue;
        line.points.push_back(smp);
        line.sweep.push_back(r);
      } catch (const DomainError&) {
        // Sweep ends can round onto the open domain boundary.
      }
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string render_figure(const ThermalContext& ctx, const FigureSpec& spec,
                          const std::vector<FigureLine>& lines, FigureFormat format) {
  const auto fd = format_double;
  std::ostringstream out;
  switch (format) {
    case FigureFormat::csv: {
      out << "line_id,param,x0,x1,xR,xL\n";
      for (const auto& line : lines) {
        for (const auto& smp : line.points) {
          out << line.id << ',' << fd(smp.param) << ',' << fd(smp.point.x0) << ','
              << fd(smp.point.x1) << ',' << fd(smp.point.xR()) << ',' << fd(smp.point.xL())
              << '\n';
        }
      }
      break;
    }
    case FigureFormat::json: {
      nlohmann::ordered_json j;
      j["region"] = to_string(spec.region);
      j["flow"] = to_string(spec.flow);
      j["beta"] = ctx.beta;
      j["lines"] = nlohmann::ordered_json::array();
      for (const auto& line : lines) {
        nlohmann::ordered_json l;
        l["id"] = line.id;
        l["seed"] = {line.seed.x0, line.seed.x1};
        l["points"] = nlohmann::ordered_json::array();
        for (const auto& smp : line.points) l["points"].push_back({smp.point.x0, smp.point.x1});
        j["lines"].push_back(std::move(l));
      }
      out << j.dump(1) << '\n';
      break;
    }
    case FigureFormat::svg: {
      const double b = ctx.beta;
      out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fd(-3 * b) << ' '
          << fd(-3 * b) << ' ' << fd(6 * b) << ' ' << fd(6 * b) << "\">\n";
      const double w = 0.01 * b;
      out << "<g stroke=\"#999\" stroke-width=\"" << fd(w) << "\" stroke-dasharray=\""
          << fd(4 * w) << "\">\n";
      out << "<line x1=\"" << fd(-3 * b) << "\" y1=\"" << fd(3 * b) << "\" x2=\"" << fd(3 * b)
          << "\" y2=\"" << fd(-3 * b) << "\"/>\n";
      out << "<line x1=\"" << fd(-3 * b) << "\" y1=\"" << fd(-3 * b) << "\" x2=\"" << fd(3 * b)
          << "\" y2=\"" << fd(3 * b) << "\"/>\n";
      out << "</g>\n";
      out << "<g fill=\"none\" stroke=\"black\" stroke-width=\"" << fd(w) << "\">\n";
      for (const auto& line : lines) {
        out << "<polyline id=\"line" << line.id << "\" points=\"";
        bool first = true;
        for (const auto& smp : line.points) {
          if (!first) out << ' ';
          first = false;
          // Time runs upward.
          out << fd(smp.point.x1) << ',' << fd(-smp.point.x0);
        }
        out << "\"/>\n";
      }
      out << "</g>\n</svg>\n";
      break;
    }
  }
  return out.str();
}

void emit_flow_figure(const ThermalContext& ctx, const FigureSpec& spec, FigureFormat format,
                      const std::filesystem::path& path) {
  const auto lines = compute_figure(ctx, spec);
  write_file_atomic(path, render_figure(ctx, spec, lines, format));
}

} // namespace mfl
