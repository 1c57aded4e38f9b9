#pragma once

#include "ancient/flow.hpp"
#include "ancient/io.hpp"
#include "ancient/reaper.hpp"
#include "ancient/scenario.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ancient {

class MissingArtifacts : public LabError {
public:
  using LabError::LabError;
};

/// Environment variable naming the default output root.
inline constexpr const char *kOutputEnv = "ANCIENTLAB_OUT";

struct LabOptions {
  std::filesystem::path out_root;  ///< overrides the scenario and the environment
  std::optional<double> h;
  std::optional<double> dt;
  unsigned workers = 0;  ///< 0: one per hardware thread
};

/// Scenario with command-line overrides applied and re-validated. A new h
/// without a new dt rescales dt to 0.4 h^2 for the explicit scheme.
ScenarioConfig apply_overrides(ScenarioConfig s, const LabOptions &opts);

/// <root>/<scenario name>/<command>, root from --out, then the scenario,
/// then the environment, then ./ancientlab-out.
std::filesystem::path output_dir(const ScenarioConfig &s, const LabOptions &opts, const std::string &command);

/// Velocities of the two ends of an open approximate curve: each end rides
/// along the arm of the soliton it belongs to.
OpenEnds open_end_motion(const PolyCurve &c, const ChainSpec &spec, double t);

/// Initial polyline for run j (corners rounded for convex data). Embedded
/// chains use the graph instead; see initial_graph.
PolyCurve initial_curve(const ScenarioConfig &s, double j);
GraphCurve initial_graph(const ScenarioConfig &s, double j);

/// t, length, total_curvature, max_curvature, area, predicted_rate,
/// strip_distance, crossings, vertical_tangents.
const std::vector<std::string> &diagnostic_columns();

struct RunResult {
  double j = 0.0;
  std::vector<CurveFrame> frames;           ///< every frame_every steps plus the last
  std::vector<std::vector<double>> rows;    ///< same cadence as frames
  std::size_t steps = 0;
  bool completed = false;
  std::string stop_reason;
};

RunResult run_member(const ScenarioConfig &s, double j);
std::vector<RunResult> run_ladder(const ScenarioConfig &s, unsigned workers = 0);

struct Artifacts {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> log;
};

Artifacts cmd_build(const ScenarioConfig &s, const LabOptions &opts);
Artifacts cmd_flow(const ScenarioConfig &s, const LabOptions &opts);
Artifacts cmd_render(const ScenarioConfig &s, const LabOptions &opts);

struct Check {
  std::string name;
  bool applicable = true;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool pass() const;
};

/// `suite` is one of suite_names() or "all"; disabled suites are skipped.
VerifyReport cmd_verify(const ScenarioConfig &s, const std::string &suite, const LabOptions &opts);

} // namespace ancient
