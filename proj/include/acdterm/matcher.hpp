#pragma once

// One-sided matching modulo AC, redex enumeration, conjunctive-context
// matching and guard evaluation.
//
// Enumeration is callback driven: a sink returns true to stop. Sequences are
// deterministic: subject children are visited in stored order and pattern
// children are assigned left to right with backtracking.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acdterm/term.hpp"

namespace acd {

/// Pattern variable -> (annotated) subject term.
class Substitution {
 public:
  const Term* find(const std::string& var) const;
  bool contains(const std::string& var) const { return bindings_.contains(var); }
  void bind(const std::string& var, Term value);
  void unbind(const std::string& var) { bindings_.erase(var); }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  /// Bindings compared modulo AC and ignoring identifiers.
  bool equivalent(const Substitution& other) const;
  std::string to_string() const;

 private:
  std::map<std::string, Term> bindings_;
};

/// Replaces bound variables; unbound ones are left in place. The result is
/// flattened.
Term apply(const Substitution& theta, const Term& pattern);

/// One match: theta, plus the matched subject rebuilt in pattern shape
/// (children of AC pattern nodes in pattern order; a variable that took a
/// group of AC children holds that group as an unannotated AC node).
struct Match {
  Substitution theta;
  Term instance;
};

using MatchSink = std::function<bool(const Match&)>;

/// Enumerates every theta extending theta0 with theta(pattern) equal to the
/// subject modulo AC. Pattern AC nodes partition the subject's children.
/// Returns true if the sink stopped the enumeration.
bool match(const Term& pattern, const Term& subject, const Substitution& theta0,
           const MatchSink& sink);
std::vector<Match> match_all(const Term& pattern, const Term& subject,
                             const Substitution& theta0 = {});

struct Redex {
  Position focus;
  /// 0-based indices of the selected children of the AC node at focus;
  /// empty when the whole node is the redex.
  std::vector<std::size_t> selection;
  Match match;
  std::vector<Term> residual;

  /// The matched subterm as it sits in the goal (selected children
  /// regrouped under an unannotated AC node).
  Term focus_term(const Term& goal) const;
};

using RedexSink = std::function<bool(const Redex&)>;

/// Redexes rooted at one position. For an AC node whose functor is the
/// head's root (or when the head is a bare variable) every submultiset of
/// children is tried, smallest first, in lexicographic index order.
bool find_redexes_at(const Term& goal, const Position& at, const Term& head,
                     const RedexSink& sink);
/// All positions in pre-order.
bool find_redexes(const Term& goal, const Term& head, const RedexSink& sink);
std::vector<Redex> find_all_redexes(const Term& goal, const Term& head);

/// Extends theta0 so that theta(context)'s conjuncts form a submultiset of
/// cc plus the implicit trailing "true", leaving a non-empty remainder.
bool match_context(const Term& context, const std::vector<Term>& cc,
                   const Substitution& theta0, const MatchSink& sink);
std::vector<Substitution> match_context_all(const Term& context,
                                            const std::vector<Term>& cc,
                                            const Substitution& theta0);

/// Guard evaluation over a fixed guard language: true, conjunction,
/// var/1, nonvar/1, !== (syntactic non-identity), and integer comparisons
/// over +, * and size/1. Anything else does not hold.
bool guard_holds(const Term& guard, const Substitution& theta);

/// Arithmetic value of a guard expression, if it has one.
std::optional<Integer> evaluate(const Term& expr, const Substitution& theta);

}  // namespace acd
