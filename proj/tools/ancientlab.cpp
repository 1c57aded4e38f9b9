// ancientlab: build, flow, verify and render glued Grim Reaper scenarios.

#include "ancient/lab.hpp"
#include "ancient/scenario.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

using namespace ancient;

namespace {

void print(const Artifacts &a) {
  for (const auto &line : a.log) std::cout << line << '\n';
  for (const auto &f : a.files) std::cout << "wrote " << f.string() << '\n';
}

int report(const VerifyReport &r) {
  for (const auto &c : r.checks) {
    const char *status = !c.applicable ? "SKIP" : c.pass ? "PASS" : "FAIL";
    std::cout << status << "  " << c.name;
    if (c.applicable) {
      std::cout << std::setprecision(6) << "  value=" << c.value << " bound=" << c.bound
                << " tol=" << c.tolerance;
    }
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
    std::cout << '\n';
  }
  return r.pass() ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Glued Grim Reaper curves under curve shortening"};
  app.require_subcommand(1);
  app.fallthrough();

  LabOptions opts;
  std::string out, scenario_path, suite = "all";
  double h = 0.0, dt = 0.0;
  app.add_option("--out", out, "Output root (default: $" + std::string(kOutputEnv) + " or ./ancientlab-out)");
  app.add_option("--resolution", h, "Spatial resolution h")->check(CLI::PositiveNumber);
  app.add_option("--dt", dt, "Time step")->check(CLI::PositiveNumber);
  app.add_option("--workers", opts.workers, "Concurrent runs (0: hardware threads)");

  auto *build = app.add_subcommand("build", "Write the initial curves for every start time");
  auto *flow = app.add_subcommand("flow", "Flow the start-time ladder and write diagnostics");
  auto *verify = app.add_subcommand("verify", "Run a verification suite");
  auto *render = app.add_subcommand("render", "Render SVG frames from flow artifacts");
  for (auto *sub : {build, flow, verify, render})
    sub->add_option("scenario", scenario_path, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  verify->add_option("--suite", suite, "angle-decay, area-rate, cauchy, strip, crossings or all");

  CLI11_PARSE(app, argc, argv);
  opts.out_root = out;
  if (h > 0) opts.h = h;
  if (dt > 0) opts.dt = dt;

  try {
    const ScenarioConfig s = apply_overrides(load_scenario(scenario_path), opts);
    if (*build) print(cmd_build(s, opts));
    else if (*flow) print(cmd_flow(s, opts));
    else if (*render) print(cmd_render(s, opts));
    else if (*verify) return report(cmd_verify(s, suite, opts));
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError &e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return 2;
  } catch (const LabError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
