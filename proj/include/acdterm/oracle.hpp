#pragma once

// Brute-force reference semantics for small goals. Redexes are found by
// materialising every binary arrangement of the candidate subterm and
// matching the binarised rule head syntactically, so none of the AC
// matcher's enumeration is reused.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acdterm/engine.hpp"

namespace acd {

class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  /// Goals with more stored nodes are refused.
  std::size_t max_nodes = 40;
  /// Goals with a wider AC node are refused.
  std::size_t max_ac_arity = 5;
  /// Binary arrangements materialised while enumerating one state.
  std::size_t max_arrangements = 200000;
  /// Rearrange the whole goal instead of one candidate subterm at a time.
  /// Exponentially slower; used to cross-check the default mode.
  bool whole_goal = false;
};

/// Every successor state, deduplicated up to renaming of identifiers.
/// Throws OracleLimitError beyond the limits.
std::vector<std::pair<EngineState, TraceStep>> enumerate_transitions(
    const EngineState& state, const Program& program, const OracleLimits& limits = {});

struct SearchResult {
  std::set<Term, TermLess> normal_forms;  // canonical, unannotated
  std::size_t explored = 0;
  bool truncated = false;
};

/// Breadth-first search over enumerate_transitions. States beyond the limits
/// are skipped and mark the result truncated. States are keyed by the
/// canonical goal and history with identifiers renumbered.
SearchResult search_normal_forms(const Program& program, const Term& goal,
                                 std::size_t depth, std::size_t width,
                                 const OracleLimits& limits = {});

struct TraceVerdict {
  bool ok = true;
  std::size_t failed_step = 0;  // 1-based; 0 when ok
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Replays a trace: each step must be some oracle successor of a state the
/// previous steps can reach, with the same rule, kind and goal (modulo AC,
/// ignoring identifiers).
TraceVerdict verify_trace(const Program& program, const Term& goal,
                          const std::vector<TraceStep>& trace,
                          const OracleLimits& limits = {});

/// Canonical key of a state: goal and live history entries with
/// identifiers renumbered in order of appearance.
std::string state_key(const EngineState& state);

}  // namespace acd
