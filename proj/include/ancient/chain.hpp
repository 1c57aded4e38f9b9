#pragma once

#include "ancient/geometry.hpp"
#include "ancient/reaper.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace ancient {

/// Seed data of a construction: asymptote heights a_0..a_n and horizontal
/// shifts C_1..C_n, one per soliton.
///
/// A compact chain closes up. If the last height repeats the first, the
/// final listed soliton is the closing arc and there are n solitons.
/// Otherwise a closing soliton runs from a_n back to a_0 with zero shift,
/// giving n + 1 solitons. Either way the soliton count equals the number of
/// y-axis crossings and must be even.
struct ChainSpec {
  std::vector<double> heights;
  std::vector<double> shifts;
  bool compact = false;

  std::size_t n() const { return heights.empty() ? 0 : heights.size() - 1; }
};

enum class ChainErrc { TooShort, LengthMismatch, DuplicateAdjacentHeight, OddCompactChain };

std::string_view to_string(ChainErrc e);

class ChainError : public LabError {
public:
  ChainError(ChainErrc code, const std::string &detail);
  ChainErrc code() const { return code_; }

private:
  ChainErrc code_;
};

/// Returns the first violated invariant, if any.
std::optional<ChainError> check(const ChainSpec &spec);

/// Throws ChainError on the first violated invariant.
void validate(const ChainSpec &spec);

/// True when a compact chain lists its closing height explicitly.
bool closes_explicitly(const ChainSpec &spec);

/// Number of solitons in the assembled curve.
std::size_t soliton_count(const ChainSpec &spec);

/// v_k = pi / |a_k - a_{k-1}| for k = 1..n. For compact chains one more
/// entry follows: the velocity of the soliton entered after arc n (the
/// implicit closing soliton, or soliton 1 when the closing height is listed).
std::vector<double> velocities(const ChainSpec &spec);

/// Soliton k (1-based) spans heights a_{k-1}, a_k with parity (-1)^k.
std::vector<ReaperSpec> solitons(const ChainSpec &spec);

/// Alternation test: `mid` lies strictly below or strictly above both
/// neighbours.
inline bool alternates(double prev, double mid, double next) {
  return (mid < prev && mid < next) || (mid > prev && mid > next);
}

/// Breakpoints 0 = l_0 < l_1 < ... < l_m = n of the maximal alternating runs.
struct RunDecomposition {
  std::vector<std::size_t> breakpoints;

  std::size_t run_count() const { return breakpoints.empty() ? 0 : breakpoints.size() - 1; }
};

RunDecomposition decompose_runs(const ChainSpec &spec);

enum class Scenario { Convex, Embedded, General };

struct ScenarioClass {
  Scenario kind = Scenario::Convex;
  bool compact = false;
};

std::string_view to_string(Scenario s);

/// Strictly monotone noncompact chains (including n = 1) are Embedded;
/// otherwise a single run is Convex and anything else is General.
ScenarioClass classify(const ChainSpec &spec);

/// A point where two consecutive solitons share an asymptote.
struct Junction {
  std::size_t index = 0;  ///< k, so the shared asymptote is a_k
  std::size_t left = 0;   ///< soliton k (0-based position in solitons())
  std::size_t right = 0;  ///< soliton k+1, wrapping for compact chains
  double height = 0.0;
  bool alternating = false;  ///< heights alternate here, so the solitons meet at a corner
};

/// Junctions in traversal order: 1..n-1 for noncompact chains, every
/// soliton boundary for compact ones (the last wraps to soliton 1).
std::vector<Junction> junctions(const ChainSpec &spec);

} // namespace ancient
