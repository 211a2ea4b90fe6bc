// mfl: flows, kernels, test-function transforms, figures and verification suites.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mfl/cone_wedge.hpp"
#include "mfl/errors.hpp"
#include "mfl/figure.hpp"
#include "mfl/flow_maps.hpp"
#include "mfl/io.hpp"
#include "mfl/suites.hpp"
#include "mfl/transforms.hpp"
#include "mfl/weyl_field.hpp"

using namespace mfl;

namespace {

enum Exit { ok = 0, verify_failed = 1, domain = 2, io = 3, resolution = 4 };

struct RunConfig {
  double beta = 1.0;
  double epsilon = 1e-4;
  double xmin = 0.0;
  double xmax = 4.0;
  int n = 2048;
  std::optional<double> pmax;  // default 200 / beta
  int np = 8192;
  std::string output;
  std::string format = "csv";

  [[nodiscard]] ThermalContext context() const {
    ThermalContext ctx;
    ctx.beta = beta;
    ctx.pmax = pmax ? *pmax : (std::isinf(beta) ? 200.0 : 200.0 / beta);
    ctx.np = np;
    ctx.validate();
    return ctx;
  }

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("config: beta must be positive or \"inf\"");
    if (!(epsilon > 0.0) || std::isinf(epsilon)) throw std::invalid_argument("config: epsilon must be positive");
    if (!(xmax > xmin)) throw std::invalid_argument("config: grid needs xmin < xmax");
    if (n < 2) throw std::invalid_argument("config: grid n must be at least 2");
    if (pmax && !(*pmax > 0.0)) throw std::invalid_argument("config: pmax must be positive");
    figure_format_from_string(format);
  }
};

double parse_beta(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || !(v > 0.0)) throw std::invalid_argument("beta must be a positive number or \"inf\"");
  return v;
}

// {"beta": 1 | "inf", "epsilon": .., "grid": {"xmin", "xmax", "n"},
//  "quadrature": {"pmax", "np"}, "output": .., "format": ..}
void apply_config_file(RunConfig& c, const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config " + path + ": expected an object");
  auto reject_unknown = [&](const nlohmann::json& o, std::initializer_list<const char*> keys, const std::string& where) {
    for (const auto& [k, v] : o.items()) {
      bool known = false;
      for (const char* kk : keys) known = known || k == kk;
      if (!known) throw std::invalid_argument("config " + path + ": unknown key '" + where + k + "'");
    }
  };
  reject_unknown(j, {"beta", "epsilon", "grid", "quadrature", "output", "format"}, "");
  try {
    if (j.contains("beta")) c.beta = j["beta"].is_string() ? parse_beta(j["beta"].get<std::string>()) : j["beta"].get<double>();
    if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      reject_unknown(g, {"xmin", "xmax", "n"}, "grid.");
      if (g.contains("xmin")) c.xmin = g["xmin"].get<double>();
      if (g.contains("xmax")) c.xmax = g["xmax"].get<double>();
      if (g.contains("n")) c.n = g["n"].get<int>();
    }
    if (j.contains("quadrature")) {
      const auto& q = j["quadrature"];
      reject_unknown(q, {"pmax", "np"}, "quadrature.");
      if (q.contains("pmax")) c.pmax = q["pmax"].get<double>();
      if (q.contains("np")) c.np = q["np"].get<int>();
    }
    if (j.contains("output")) c.output = j["output"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
}

SpacetimePoint parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("point must be x0,x1");
  std::size_t p0 = 0, p1 = 0;
  const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
  SpacetimePoint p;
  try {
    p.x0 = std::stod(a, &p0);
    p.x1 = std::stod(b, &p1);
  } catch (const std::exception&) {
    throw std::invalid_argument("point must be x0,x1");
  }
  if (p0 != a.size() || p1 != b.size()) throw std::invalid_argument("point must be x0,x1");
  return p;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") std::cout << text << std::flush;
  else write_file_atomic(path, text);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal modular flows, Weyl field kernels and verification suites"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig flags;
  std::string config_path, beta_text;
  app.add_option("--config", config_path, "JSON config file (default: $MFL_CONFIG)");
  auto* o_beta = app.add_option("--beta", beta_text, "inverse temperature, or inf");
  auto* o_eps = app.add_option("--epsilon", flags.epsilon, "position-space regulator");
  auto* o_xmin = app.add_option("--xmin", flags.xmin, "grid lower end");
  auto* o_xmax = app.add_option("--xmax", flags.xmax, "grid upper end");
  auto* o_n = app.add_option("--grid-n", flags.n, "grid points");
  double pmax_flag = 0.0;
  auto* o_pmax = app.add_option("--pmax", pmax_flag, "momentum cutoff (default 200/beta)");
  auto* o_np = app.add_option("--np", flags.np, "momentum cells");
  auto* o_out = app.add_option("-o,--output", flags.output, "output file (default stdout)");
  auto* o_fmt = app.add_option("--format", flags.format, "csv, json or svg");

  // flow
  auto* flow = app.add_subcommand("flow", "images of points under the modular or Gamma flow");
  std::string region = "wedge", flow_kind = "modular", direction = "plus";
  double u = 0.0, tau = 0.0;
  std::vector<std::string> points;
  std::string interval;
  bool ray_grid = false;
  flow->add_option("--region", region, "cone or wedge")->check(CLI::IsMember({"cone", "wedge"}));
  flow->add_option("--flow", flow_kind, "modular or gamma")->check(CLI::IsMember({"modular", "gamma"}));
  auto* f_u = flow->add_option("--u", u, "modular parameter");
  auto* f_tau = flow->add_option("--tau", tau, "Gamma parameter");
  flow->add_option("--point", points, "spacetime point x0,x1 (repeatable)");
  flow->add_option("--interval", interval, "light-ray interval a,b mapped by the ray flow");
  flow->add_flag("--grid", ray_grid, "tabulate the ray flow on the configured grid");
  flow->add_option("--direction", direction, "ray direction for --interval/--grid")
      ->check(CLI::IsMember({"plus", "minus"}));
  f_u->excludes(f_tau);

  // figure
  auto* fig = app.add_subcommand("figure", "flow-line data for the four figures");
  int which = 1, seeds = 12;
  fig->add_option("--which", which, "1: cone modular, 2: wedge modular, 3: cone gamma, 4: wedge gamma")
      ->check(CLI::Range(1, 4));
  fig->add_option("--seeds", seeds, "number of flow lines")->check(CLI::PositiveNumber);

  // transform
  auto* tr = app.add_subcommand("transform", "apply delta_u or gamma_tau of field index n to a test function");
  std::string input;
  int n_index = 0;
  double tu = 0.0, ttau = 0.0;
  bool clip = false;
  tr->add_option("input", input, "test function JSON")->required();
  tr->add_option("--n", n_index, "field index")->check(CLI::NonNegativeNumber);
  auto* t_u = tr->add_option("--u", tu, "modular parameter");
  auto* t_tau = tr->add_option("--tau", ttau, "Gamma parameter");
  tr->add_flag("--clip", clip, "drop the part of the image outside the flow domain (delta, n = 0)");
  t_u->excludes(t_tau);

  // kernel
  auto* ker = app.add_subcommand("kernel", "two-point function in momentum or position space");
  std::vector<double> ps, xis;
  int k_index = 0;
  ker->add_option("--p", ps, "momenta for the density W2~(p)");
  ker->add_option("--xi", xis, "separations for the regulated W2(xi + i eps)");
  ker->add_option("--n", k_index, "field index")->check(CLI::NonNegativeNumber);

  // verify
  auto* ver = app.add_subcommand("verify", "run a verification suite and write its JSON report");
  std::string suite;
  ver->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::domain;
  }

  try {
    RunConfig cfg;
    if (config_path.empty()) {
      if (const char* env = std::getenv("MFL_CONFIG"); env && *env) config_path = env;
    }
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (o_beta->count()) cfg.beta = parse_beta(beta_text);
    if (o_eps->count()) cfg.epsilon = flags.epsilon;
    if (o_xmin->count()) cfg.xmin = flags.xmin;
    if (o_xmax->count()) cfg.xmax = flags.xmax;
    if (o_n->count()) cfg.n = flags.n;
    if (o_pmax->count()) cfg.pmax = pmax_flag;
    if (o_np->count()) cfg.np = flags.np;
    if (o_out->count()) cfg.output = flags.output;
    if (o_fmt->count()) cfg.format = flags.format;
    cfg.validate();
    const ThermalContext ctx = cfg.context();

    if (flow->parsed()) {
      const bool gamma = flow_kind == "gamma";
      if ((gamma && f_u->count()) || (!gamma && f_tau->count()))
        throw std::invalid_argument(gamma ? "the gamma flow takes --tau" : "the modular flow takes --u");
      const double param = gamma ? tau : u;
      std::ostringstream out;
      if (!points.empty()) {
        const Region reg = region_from_string(region);
        for (const auto& s : points) {
          const SpacetimePoint p = parse_point(s);
          const SpacetimePoint q = gamma ? gamma_flow_2d(ctx, reg, param, p) : modular_flow_2d(ctx, reg, param, p);
          out << format_double(q.x0) << ',' << format_double(q.x1) << '\n';
        }
      }
      const RayDirection dir = direction == "plus" ? RayDirection::plus : RayDirection::minus;
      auto ray = [&](double x) {
        return gamma ? gamma_flow_ray(ctx, dir, param, x) : modular_flow_ray(ctx, dir, param, x);
      };
      if (!interval.empty()) {
        const SpacetimePoint ab = parse_point(interval);
        out << format_double(ray(ab.x0)) << ',' << format_double(ray(ab.x1)) << '\n';
      }
      if (ray_grid) {
        out << "x,image\n";
        for (int i = 0; i < cfg.n; ++i) {
          const double x = cfg.xmin + (cfg.xmax - cfg.xmin) * i / (cfg.n - 1);
          out << format_double(x) << ',' << format_double(ray(x)) << '\n';
        }
      }
      if (points.empty() && interval.empty() && !ray_grid)
        throw std::invalid_argument("flow needs --point, --interval or --grid");
      emit(out.str(), cfg.output);
      return Exit::ok;
    }

    if (fig->parsed()) {
      const FigureFormat fmt = figure_format_from_string(cfg.format);
      const FigureSpec spec = default_figure(ctx, which, seeds);
      const std::string path = cfg.output.empty() ? "figure" + std::to_string(which) + "." + to_string(fmt) : cfg.output;
      if (path == "-") std::cout << render_figure(ctx, spec, compute_figure(ctx, spec), fmt);
      else emit_flow_figure(ctx, spec, fmt, path);
      return Exit::ok;
    }

    if (tr->parsed()) {
      if (t_u->count() + t_tau->count() != 1) throw std::invalid_argument("transform needs exactly one of --u, --tau");
      const TestFunction f = test_function_from_json(read_file(input));
      const bool gamma = t_tau->count() > 0;
      if (clip && (gamma || n_index != 0)) throw std::invalid_argument("--clip applies to delta_u with n = 0");
      TestFunction g;
      if (clip) g = modular_transform(ctx, tu, f, true);
      else g = higher_transform(ctx, n_index, gamma ? TransformKind::gamma : TransformKind::modular,
                                gamma ? ttau : tu, f);
      emit(to_json(g), cfg.output);
      return Exit::ok;
    }

    if (ker->parsed()) {
      if (ps.empty() && xis.empty()) throw std::invalid_argument("kernel needs --p or --xi");
      const FieldSpec spec{k_index};
      spec.validate();
      std::ostringstream out;
      if (!ps.empty()) {
        out << "p,w2\n";
        for (double p : ps) out << format_double(p) << ',' << format_double(two_point_momentum(ctx, spec, p)) << '\n';
      }
      if (!xis.empty()) {
        out << "xi,re,im\n";
        for (double xi : xis) {
          const cplx w = two_point_position(ctx, spec, xi, cfg.epsilon);
          out << format_double(xi) << ',' << format_double(w.real()) << ',' << format_double(w.imag()) << '\n';
        }
      }
      emit(out.str(), cfg.output);
      return Exit::ok;
    }

    if (ver->parsed()) {
      const auto results = run_suite(suite, ctx);
      emit(report_json(suite, ctx, results), cfg.output);
      std::size_t failed = 0;
      for (const auto& r : results) failed += r.pass ? 0 : 1;
      std::cerr << suite << ": " << results.size() - failed << "/" << results.size() << " checks passed\n";
      return failed == 0 && !results.empty() ? Exit::ok : Exit::verify_failed;
    }
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return Exit::domain;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return Exit::io;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << '\n';
    return Exit::resolution;
  } catch (const QuadratureError& e) {
    std::cerr << "quadrature error: " << e.what() << '\n';
    return Exit::resolution;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return Exit::domain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::domain;
  }
  return Exit::ok;
}
