#pragma once

#include "ancient/chain.hpp"
#include "ancient/flow.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ancient {

/// Malformed scenario file. `field` names the offending key, `line` is 0
/// when unknown.
class ParseError : public LabError {
public:
  ParseError(const std::string &what, std::string field, std::size_t line = 0)
      : LabError(what), field_(std::move(field)), line_(line) {}
  const std::string &field() const { return field_; }
  std::size_t line() const { return line_; }

private:
  std::string field_;
  std::size_t line_;
};

/// Well-formed file describing an impossible configuration.
class ValidationError : public LabError {
public:
  explicit ValidationError(const std::string &what, std::optional<ChainErrc> code = std::nullopt)
      : LabError(what), code_(code) {}
  std::optional<ChainErrc> code() const { return code_; }

private:
  std::optional<ChainErrc> code_;
};

struct ScenarioConfig {
  std::string name;
  ChainSpec chain;
  std::vector<double> start_times;  ///< j values; run j starts at t = -j
  double end_time = 0.0;
  FlowParams flow;                  ///< start and end time filled per run
  std::size_t frame_every = 100;    ///< steps between diagnostics rows and stored frames
  std::filesystem::path output;     ///< empty: use the lab's default root
  std::map<std::string, bool> verify;
};

/// Suite names understood by cmd_verify.
const std::vector<std::string> &suite_names();

ScenarioConfig parse_scenario(const std::string &text, const std::string &origin = "<string>");
ScenarioConfig load_scenario(const std::filesystem::path &path);

/// Checks the chain and the time ladder; throws ValidationError.
void validate(const ScenarioConfig &s);

} // namespace ancient
