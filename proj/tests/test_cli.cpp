#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <string>

#include "json.hpp"
#include "mfl/io.hpp"
#include "mfl/test_function.hpp"

using namespace mfl;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(MFL_BIN) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::filesystem::path tmp(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / "mfl_cli_test";
  std::filesystem::create_directories(d);
  return d / name;
}

std::string write_bump(const std::string& name, double m, double w, int nodes = 2048) {
  const auto p = tmp(name);
  write_file_atomic(p, to_json(make_bump(m, w, nodes)));
  return p.string();
}

} // namespace

TEST(CliFlow, IdentityAtZeroU) {
  const CliRun r = run("flow --region cone --flow modular --u 0 --point 1,0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1,0\n");
}

TEST(CliFlow, GammaThroughOrigin) {
  const CliRun r = run("flow --beta 6.283185307179586 --region cone --flow gamma --tau 1 --point 0,0");
  ASSERT_EQ(r.code, 0);
  const auto comma = r.out.find(',');
  EXPECT_NEAR(std::stod(r.out.substr(0, comma)), std::log(2.0), 1e-15);
  EXPECT_EQ(r.out.substr(comma), ",0\n");
}

TEST(CliFlow, DomainViolationExitsTwo) {
  EXPECT_EQ(run("flow --u 5 --point 0.5,0").code, 2);
}

TEST(CliFlow, IntervalAndGridUseTheRayFlow) {
  const CliRun r = run("flow --beta 6.283185307179586 --u 0.11031780007632579 --interval 1,2");
  ASSERT_EQ(r.code, 0);
  const auto comma = r.out.find(',');
  EXPECT_NEAR(std::stod(r.out.substr(0, comma)), std::log(1.0 + std::expm1(1.0) / 2.0), 1e-12);
  EXPECT_NEAR(std::stod(r.out.substr(comma + 1)), std::log(1.0 + std::expm1(2.0) / 2.0), 1e-12);
  const CliRun g = run("flow --u 0.3 --grid --grid-n 5");
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(g.out.rfind("x,image\n0,0\n", 0), 0u);
}

TEST(CliKernel, MomentumAndPosition) {
  const CliRun r = run("kernel --p 1 --p -1 --p 0");
  ASSERT_EQ(r.code, 0);
  const double w = 1.0 / (-std::expm1(-1.0));
  EXPECT_NE(r.out.find("1," + format_double(w)), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\n0,1\n"), std::string::npos);
  const CliRun x = run("kernel --xi 0.5 --epsilon 1e-3");
  ASSERT_EQ(x.code, 0);
  EXPECT_EQ(x.out.rfind("xi,re,im\n0.5,", 0), 0u);
  // W2 at beta = 1 and xi = 1/2: 1/sinh^2(pi/2)
  const double re = std::stod(x.out.substr(x.out.find("0.5,") + 4));
  EXPECT_NEAR(re, 1.0 / std::pow(std::sinh(std::numbers::pi / 2.0), 2), 1e-5);
  EXPECT_EQ(run("kernel --xi 0.5 --n 1").code, 2);
}

TEST(CliConfig, FileEnvironmentAndFlagPrecedence) {
  const auto cfg = tmp("cfg.json");
  write_file_atomic(cfg, R"({"beta": 6.283185307179586, "quadrature": {"pmax": 100, "np": 1024}})");
  const std::string args = "flow --region cone --flow gamma --tau 1 --point 0,0";
  const CliRun a = run("--config " + cfg.string() + " " + args);
  ASSERT_EQ(a.code, 0);
  EXPECT_NEAR(std::stod(a.out), std::log(2.0), 1e-15);
  const CliRun b = run(args, "MFL_CONFIG=" + cfg.string());
  EXPECT_EQ(b.out, a.out);
  // flags win over the file
  const CliRun c = run(args + " --beta 1", "MFL_CONFIG=" + cfg.string());
  EXPECT_NEAR(std::stod(c.out), std::log1p(2.0 * std::numbers::pi) / (2.0 * std::numbers::pi), 1e-15);
  const CliRun inf = run(args + " --beta inf");
  EXPECT_EQ(inf.out, "1,0\n");
}

TEST(CliConfig, InvalidAndMissingFiles) {
  const auto bad = tmp("bad.json");
  write_file_atomic(bad, R"({"beta": 1, "colour": "red"})");
  EXPECT_EQ(run("--config " + bad.string() + " kernel --p 1").code, 2);
  write_file_atomic(bad, R"({"beta": -1})");
  EXPECT_EQ(run("--config " + bad.string() + " kernel --p 1").code, 2);
  EXPECT_EQ(run("--config /nonexistent/mfl.json kernel --p 1").code, 3);
  EXPECT_EQ(run("kernel --p 1 --beta zero").code, 2);
}

TEST(CliTransform, IdentityReproducesInput) {
  const auto in = write_bump("f.json", 1.5, 0.5);
  const auto out = tmp("g.json");
  ASSERT_EQ(run("transform --u 0 --n 0 " + in + " -o " + out.string()).code, 0);
  const auto f = test_function_from_json(read_file(in));
  const auto g = test_function_from_json(read_file(out));
  EXPECT_LT(sup_distance(f, g), 1e-10);
  EXPECT_TRUE(g.compact_support);
}

TEST(CliTransform, GammaShiftMovesSupportIntoHalfLine) {
  const auto in = write_bump("fneg.json", -2.0, 0.7);
  const CliRun r = run("transform --tau 0.15915494309189535 --n 0 " + in);
  ASSERT_EQ(r.code, 0);
  EXPECT_GE(test_function_from_json(r.out).support_lo, 0.0);
}

TEST(CliTransform, HigherIndexIsFlaggedNonCompact) {
  const auto in = write_bump("f1.json", 1.5, 0.5);
  const CliRun r = run("transform --u 0.2 --n 1 " + in);
  ASSERT_EQ(r.code, 0);
  EXPECT_FALSE(nlohmann::json::parse(r.out).at("compact_support").get<bool>());
}

TEST(CliTransform, ErrorExitCodes) {
  const auto in = write_bump("f2.json", 1.0, 0.5);
  EXPECT_EQ(run("transform --tau -0.1 " + in).code, 2);
  EXPECT_EQ(run("transform --u -0.1 --clip " + in).code, 2);
  EXPECT_EQ(run("transform --u 0.1 --tau 0.1 " + in).code, 2);
  const auto coarse = write_bump("coarse.json", 1.0, 0.5, 10);
  EXPECT_EQ(run("transform --u 0.2 --n 3 " + coarse).code, 4);
  EXPECT_EQ(run("transform --u 0.2 /nonexistent/f.json").code, 3);
  // unwritable output: exit 3 and no partial file
  EXPECT_EQ(run("transform --u 0.2 " + in + " -o /nonexistent/dir/out.json").code, 3);
  EXPECT_FALSE(std::filesystem::exists("/nonexistent/dir/out.json.tmp"));
}

TEST(CliFigure, WritesFilesDeterministically) {
  const auto a = tmp("fig1.csv"), b = tmp("fig1b.csv");
  ASSERT_EQ(run("figure --which 1 -o " + a.string()).code, 0);
  ASSERT_EQ(run("figure --which 1 -o " + b.string()).code, 0);
  const std::string ta = read_file(a);
  EXPECT_EQ(ta, read_file(b));
  EXPECT_EQ(ta.rfind("line_id,param,x0,x1,xR,xL\n", 0), 0u) << ta.substr(0, 40);
  for (int which : {3, 4}) {
    const auto s = tmp("fig" + std::to_string(which) + ".svg");
    ASSERT_EQ(run("figure --which " + std::to_string(which) + " --format svg -o " + s.string()).code, 0);
    EXPECT_NE(read_file(s).find("<polyline"), std::string::npos);
  }
  const CliRun j = run("figure --which 2 --format json -o -");
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out).at("lines").size(), 12u);
  EXPECT_EQ(run("figure --which 5").code, 2);
  EXPECT_EQ(run("figure --which 1 -o /nonexistent/dir/f.csv").code, 3);
}

TEST(CliVerify, GroupLawsPassQuickly) {
  const auto t0 = std::chrono::steady_clock::now();
  const CliRun r = run("verify group-laws");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ASSERT_EQ(r.code, 0);
  EXPECT_LT(secs, 1.0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("pass").get<bool>());
  for (const auto& c : j.at("checks")) {
    EXPECT_TRUE(c.contains("check") && c.contains("params") && c.contains("lhs") && c.contains("rhs"));
    EXPECT_TRUE(c.at("pass").get<bool>());
  }
  EXPECT_EQ(run("verify no-such-suite").code, 2);
}

TEST(CliVerify, AllIsDeterministicAtBetaTwo) {
  const auto a = tmp("all_a.json"), b = tmp("all_b.json");
  ASSERT_EQ(run("verify all --beta 2.0 -o " + a.string()).code, 0);
  ASSERT_EQ(run("verify all --beta 2.0 -o " + b.string()).code, 0);
  const std::string ta = read_file(a);
  EXPECT_EQ(ta, read_file(b));
  const auto j = nlohmann::json::parse(ta);
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_EQ(j.at("beta").get<double>(), 2.0);
  std::size_t bounds = 0;
  for (const auto& c : j.at("checks"))
    if (c.at("check").get<std::string>() == "thm22/operator_bound") {
      ++bounds;
      EXPECT_GE(c.at("rhs").get<double>() - c.at("lhs").get<double>(), -1e-9);
    }
  EXPECT_EQ(bounds, 21u * 12u);
}
