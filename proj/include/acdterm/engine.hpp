#pragma once

// Execution states, the Simplify / Propagate / Simpagate transitions,
// propagation histories, and the bottom-up normalisation strategy.

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "acdterm/matcher.hpp"
#include "acdterm/syntax.hpp"
#include "acdterm/term.hpp"

namespace acd {

struct HistoryEntry {
  std::string rule;
  std::vector<Id> ids;

  auto operator<=>(const HistoryEntry&) const = default;
  /// "(rule @ (3 1 2))"
  std::string to_string() const;
};

using History = std::set<HistoryEntry>;

/// Identifier string of an annotated term: AC nodes contribute only their
/// children's strings (in stored order), other nodes their own id followed
/// by their children's strings.
HistoryEntry entry_of(std::string_view rule, const Term& instance);

/// Every identifier string the matched instance can have across the AC
/// rearrangements that keep it an instance of head: children of AC nodes
/// inside variable bindings may appear in any order. The first element is
/// the entry of the instance as stored. Capped at limit strings.
std::vector<std::vector<Id>> entry_variants(const Term& head, const Term& instance,
                                            std::size_t limit = 4096);

/// Minimal history containing h0 and, for every head variable position p
/// and body occurrence q of the same variable, rho(E) for each E in h0,
/// where rho maps the identifiers of head_inst|p onto body_inst|q.
/// head_inst and body_inst must mirror the shapes of head and body.
History update_history(const Term& head, const Term& head_inst, const Term& body,
                       const Term& body_inst, const History& h0);

struct EngineState {
  Term goal = Term::atom("true");
  History history;
  std::set<std::string> initial_vars;
  IdAllocator ids;  // every id below ids.peek() is used
};

EngineState initial_state(const Term& goal);

enum class StepKind { Simplify, Propagate, Simpagate };
std::string_view to_string(StepKind kind);
std::optional<StepKind> step_kind_from_string(std::string_view s);
StepKind step_kind_of(RuleKind kind);

struct TraceStep {
  std::size_t index = 0;
  std::string rule;
  StepKind kind = StepKind::Simplify;
  Position focus;
  std::vector<std::size_t> selection;  // 0-based, empty = whole node
  std::vector<Id> entry;               // propagation entry, else empty
  Term goal_after = Term::atom("true");  // annotated
};

/// An applicable transition: rule, redex, full substitution (head plus
/// context) and, for propagation, the history entry it records.
struct Firing {
  const Rule* rule = nullptr;
  Redex redex;
  Substitution theta;
  std::vector<Id> entry;
};

using FiringSink = std::function<bool(const Firing&)>;

/// Rules in program order, redexes in enumeration order.
bool find_firings_at(const EngineState& state, const Program& program,
                     const Position& at, const FiringSink& sink);
/// All positions in pre-order.
bool find_firings(const EngineState& state, const Program& program,
                  const FiringSink& sink);

struct FireResult {
  TraceStep step;
  /// The replacement was merged into the parent AC node as `count`
  /// children starting at 0-based index `first`.
  bool spliced = false;
  std::size_t first = 0;
  std::size_t count = 1;
  /// The rule body instance sits exactly at the focus.
  bool body_at_focus = false;
  Substitution body_theta;
};

/// Applies one transition to state.
FireResult fire(EngineState& state, const Firing& firing, std::size_t index);

/// First applicable transition anywhere, applied. Absent in a final state.
std::optional<TraceStep> step(EngineState& state, const Program& program,
                              std::size_t index = 1);

/// Every successor of state (one per firing).
std::vector<std::pair<EngineState, TraceStep>> successors(const EngineState& state,
                                                          const Program& program);

/// Bottom-up normalisation. The conjunctive context of a subterm is read
/// from the current goal on demand. Conjunctions renormalise their
/// children until a pass changes nothing; other nodes normalise their
/// children once, then try a rule at the top. After a rule fires the body
/// is normalised with changed = false, so subterms bound to head variables
/// are taken as already normal.
class Normaliser {
 public:
  Normaliser(const Program& program, EngineState& state, std::vector<TraceStep>& trace,
             std::size_t max_steps);

  void normalise_goal();
  /// Normalises the subterm at `at`. tmpl/theta describe the rule body the
  /// subterm was instantiated from (both null for goal terms). Returns the
  /// number of sibling slots the subterm occupies afterwards.
  std::size_t normalise(const Position& at, const Term* tmpl,
                        const Substitution* theta, bool changed);

  bool exhausted() const { return trace_.size() >= max_steps_; }

 private:
  const Program& program_;
  EngineState& state_;
  std::vector<TraceStep>& trace_;
  std::size_t max_steps_;
};

enum class RunStatus { NormalForm, BudgetExhausted };

struct RunOptions {
  std::size_t max_steps = 10000;
};

struct RunResult {
  EngineState final_state;
  std::vector<TraceStep> trace;
  RunStatus status = RunStatus::NormalForm;
};

/// Normalises from the initial state, then keeps applying the first
/// remaining transition (and renormalising) until none applies or the
/// budget is spent.
RunResult run(const Program& program, const Term& goal, RunOptions options = {});

}  // namespace acd
