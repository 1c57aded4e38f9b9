#include "ancient/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ancient {

std::string_view to_string(ChainErrc e) {
  switch (e) {
  case ChainErrc::TooShort: return "TooShort";
  case ChainErrc::LengthMismatch: return "LengthMismatch";
  case ChainErrc::DuplicateAdjacentHeight: return "DuplicateAdjacentHeight";
  case ChainErrc::OddCompactChain: return "OddCompactChain";
  }
  return "Unknown";
}

std::string_view to_string(Scenario s) {
  switch (s) {
  case Scenario::Convex: return "convex";
  case Scenario::Embedded: return "embedded";
  case Scenario::General: return "general";
  }
  return "unknown";
}

ChainError::ChainError(ChainErrc code, const std::string &detail)
    : LabError(std::string(to_string(code)) + ": " + detail), code_(code) {}

bool closes_explicitly(const ChainSpec &spec) {
  return spec.compact && spec.heights.size() >= 2 && spec.heights.front() == spec.heights.back();
}

std::size_t soliton_count(const ChainSpec &spec) {
  const std::size_t n = spec.n();
  return spec.compact && !closes_explicitly(spec) ? n + 1 : n;
}

std::optional<ChainError> check(const ChainSpec &spec) {
  const auto &a = spec.heights;
  if (a.size() < 2)
    return ChainError(ChainErrc::TooShort, "need at least two heights");
  for (double h : a)
    if (!std::isfinite(h)) return ChainError(ChainErrc::TooShort, "heights must be finite");
  if (spec.shifts.size() != a.size() - 1) {
    std::ostringstream os;
    os << "expected " << a.size() - 1 << " shifts, got " << spec.shifts.size();
    return ChainError(ChainErrc::LengthMismatch, os.str());
  }
  for (std::size_t k = 1; k < a.size(); ++k) {
    if (a[k] == a[k - 1]) {
      std::ostringstream os;
      os << "a_" << k - 1 << " = a_" << k << " = " << a[k];
      return ChainError(ChainErrc::DuplicateAdjacentHeight, os.str());
    }
  }
  if (spec.compact) {
    const std::size_t crossings = soliton_count(spec);
    if (crossings % 2 != 0) {
      std::ostringstream os;
      os << "compact chain crosses a line " << crossings << " times";
      return ChainError(ChainErrc::OddCompactChain, os.str());
    }
  }
  return std::nullopt;
}

void validate(const ChainSpec &spec) {
  if (auto err = check(spec)) throw *err;
}

std::vector<double> velocities(const ChainSpec &spec) {
  validate(spec);
  const auto &a = spec.heights;
  std::vector<double> v;
  for (std::size_t k = 1; k < a.size(); ++k) v.push_back(kPi / std::abs(a[k] - a[k - 1]));
  if (spec.compact) {
    v.push_back(closes_explicitly(spec) ? v.front() : kPi / std::abs(a.front() - a.back()));
  }
  return v;
}

std::vector<ReaperSpec> solitons(const ChainSpec &spec) {
  validate(spec);
  const auto &a = spec.heights;
  std::vector<ReaperSpec> out;
  for (std::size_t k = 1; k < a.size(); ++k) {
    const int parity = k % 2 == 0 ? 1 : -1;
    out.push_back(make_reaper(a[k - 1], a[k], spec.shifts[k - 1], parity));
  }
  if (spec.compact && !closes_explicitly(spec)) {
    const std::size_t k = a.size();
    out.push_back(make_reaper(a.back(), a.front(), 0.0, k % 2 == 0 ? 1 : -1));
  }
  return out;
}

namespace {

// Heights around the closed cycle; a_0 is not repeated.
std::vector<double> cycle(const ChainSpec &spec) {
  std::vector<double> c = spec.heights;
  if (closes_explicitly(spec)) c.pop_back();
  return c;
}

} // namespace

std::vector<Junction> junctions(const ChainSpec &spec) {
  validate(spec);
  std::vector<Junction> out;
  if (!spec.compact) {
    const auto &a = spec.heights;
    for (std::size_t k = 1; k + 1 < a.size(); ++k)
      out.push_back({k, k - 1, k, a[k], alternates(a[k - 1], a[k], a[k + 1])});
    return out;
  }
  const auto c = cycle(spec);
  const std::size_t m = c.size();  // == soliton count
  for (std::size_t k = 1; k <= m; ++k) {
    const std::size_t here = k % m;
    const double prev = c[(k + m - 1) % m];
    const double next = c[(k + 1) % m];
    out.push_back({k, k - 1, k % m, c[here], alternates(prev, c[here], next)});
  }
  return out;
}

RunDecomposition decompose_runs(const ChainSpec &spec) {
  validate(spec);
  const auto &a = spec.heights;
  const std::size_t n = spec.n();
  RunDecomposition d;
  if (spec.compact) {
    const auto js = junctions(spec);
    const bool all = std::all_of(js.begin(), js.end(), [](const Junction &j) { return j.alternating; });
    if (all) {
      d.breakpoints = {0, n};
      return d;
    }
  }
  d.breakpoints.push_back(0);
  for (std::size_t k = 1; k < n; ++k)
    if (!alternates(a[k - 1], a[k], a[k + 1])) d.breakpoints.push_back(k);
  d.breakpoints.push_back(n);
  return d;
}

ScenarioClass classify(const ChainSpec &spec) {
  const auto runs = decompose_runs(spec);
  ScenarioClass c;
  c.compact = spec.compact;
  if (!spec.compact && runs.run_count() == spec.n()) c.kind = Scenario::Embedded;
  else if (runs.run_count() == 1) c.kind = Scenario::Convex;
  else c.kind = Scenario::General;
  return c;
}

} // namespace ancient
