#include "ancient/scenario.hpp"

#include "ancient/glue.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ancient {

using nlohmann::json;

namespace {

const json &require(const json &obj, const char *key, const std::string &path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing key '" + path + "'", path);
  return *it;
}

double number(const json &v, const std::string &path) {
  if (!v.is_number()) throw ParseError("'" + path + "' must be a number", path);
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError("'" + path + "' must be finite", path);
  return d;
}

std::vector<double> numbers(const json &v, const std::string &path) {
  if (!v.is_array()) throw ParseError("'" + path + "' must be an array of numbers", path);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::string text(const json &v, const std::string &path) {
  if (!v.is_string()) throw ParseError("'" + path + "' must be a string", path);
  return v.get<std::string>();
}

bool flag(const json &v, const std::string &path) {
  if (!v.is_boolean()) throw ParseError("'" + path + "' must be true or false", path);
  return v.get<bool>();
}

std::size_t line_of(const std::string &s, std::size_t byte) {
  byte = std::min(byte, s.size());
  return 1 + static_cast<std::size_t>(std::count(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void parse_solver(const json &j, ScenarioConfig &s) {
  if (!j.is_object()) throw ParseError("'solver' must be an object", "solver");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = it.key();
    const std::string path = "solver." + key;
    if (key == "h") s.flow.h = number(*it, path);
    else if (key == "dt") s.flow.dt = number(*it, path);
    else if (key == "mollify_radius") s.flow.mollify_radius = number(*it, path);
    else if (key == "frame_every") {
      const double f = number(*it, path);
      if (f < 1 || f != std::floor(f)) throw ParseError("'" + path + "' must be a positive integer", path);
      s.frame_every = static_cast<std::size_t>(f);
    } else if (key == "scheme") {
      const auto v = text(*it, path);
      if (v == "explicit") s.flow.scheme = Scheme::Explicit;
      else if (v == "semi-implicit") s.flow.scheme = Scheme::SemiImplicit;
      else throw ParseError("unknown scheme '" + v + "'", path);
    } else if (key == "redistribution") {
      const auto v = text(*it, path);
      if (v == "every-step") s.flow.redistribution = Redistribution::EveryStep;
      else if (v == "when-distorted") s.flow.redistribution = Redistribution::WhenDistorted;
      else if (v == "never") s.flow.redistribution = Redistribution::Never;
      else throw ParseError("unknown redistribution '" + v + "'", path);
    } else {
      throw ParseError("unknown key '" + path + "'", path);
    }
  }
}

} // namespace

const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names = {"angle-decay", "area-rate", "cauchy", "strip", "crossings"};
  return names;
}

ScenarioConfig parse_scenario(const std::string &src, const std::string &origin) {
  json root;
  try {
    root = json::parse(src);
  } catch (const json::parse_error &e) {
    const std::size_t line = line_of(src, e.byte);
    std::ostringstream os;
    os << origin << ":" << line << ": " << e.what();
    throw ParseError(os.str(), "", line);
  }
  if (!root.is_object()) throw ParseError(origin + ": top level must be an object", "");

  ScenarioConfig s;
  s.flow.h = 1e-2;
  bool dt_given = false;
  s.name = text(require(root, "name", "name"), "name");
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
    throw ParseError("'name' must be a non-empty file name", "name");

  const json &chain = require(root, "chain", "chain");
  if (!chain.is_object()) throw ParseError("'chain' must be an object", "chain");
  s.chain.heights = numbers(require(chain, "heights", "chain.heights"), "chain.heights");
  s.chain.shifts = numbers(require(chain, "shifts", "chain.shifts"), "chain.shifts");
  if (auto it = chain.find("compact"); it != chain.end()) s.chain.compact = flag(*it, "chain.compact");

  s.start_times = numbers(require(root, "start_times", "start_times"), "start_times");
  s.end_time = number(require(root, "end_time", "end_time"), "end_time");

  if (auto it = root.find("solver"); it != root.end()) {
    parse_solver(*it, s);
    dt_given = it->contains("dt");
  }
  if (!dt_given) s.flow.dt = 0.4 * s.flow.h * s.flow.h;

  if (auto it = root.find("verify"); it != root.end()) {
    if (!it->is_object()) throw ParseError("'verify' must be an object", "verify");
    for (auto v = it->begin(); v != it->end(); ++v) {
      const auto &names = suite_names();
      if (std::find(names.begin(), names.end(), v.key()) == names.end())
        throw ParseError("unknown suite '" + v.key() + "'", "verify." + v.key());
      s.verify[v.key()] = flag(*v, "verify." + v.key());
    }
  }
  for (const auto &n : suite_names()) s.verify.emplace(n, true);

  if (auto it = root.find("output"); it != root.end()) s.output = text(*it, "output");
  for (auto it = root.begin(); it != root.end(); ++it) {
    static const std::vector<std::string> known = {"name", "chain", "start_times", "end_time",
                                                   "solver", "verify", "output"};
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ParseError("unknown key '" + it.key() + "'", it.key());
  }

  validate(s);
  return s;
}

ScenarioConfig load_scenario(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string(), "");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

void validate(const ScenarioConfig &s) {
  if (auto err = check(s.chain)) throw ValidationError(err->what(), err->code());
  try {
    check_params(s.flow);
  } catch (const LabError &e) {
    throw ValidationError(e.what());
  }
  if (s.start_times.empty()) throw ValidationError("start_times is empty");
  double t0 = 0.0;
  try {
    t0 = find_t0(s.chain);
  } catch (const LabError &e) {
    throw ValidationError(std::string("no construction time: ") + e.what());
  }
  for (double j : s.start_times) {
    std::ostringstream os;
    if (!(j > 0)) {
      os << "start time j = " << j << " must be positive";
      throw ValidationError(os.str());
    }
    if (!(-j < s.end_time)) {
      os << "run j = " << j << " starts at or after end_time " << s.end_time;
      throw ValidationError(os.str());
    }
    if (!(-j < t0)) {
      os << "initial curve for j = " << j << " needs -j below " << t0;
      throw ValidationError(os.str());
    }
  }
  if (!(s.end_time <= t0)) {
    std::ostringstream os;
    os << "end_time " << s.end_time << " exceeds the construction threshold " << t0;
    throw ValidationError(os.str());
  }
}

} // namespace ancient
