#pragma once

// Terms over function symbols and variables, optionally annotated with a
// per-node integer identifier. Nodes are immutable and shared.
//
// Associative-commutative operators (/\, \/, +, *) are stored as flattened
// n-ary nodes: no child of an AC node carries the same functor, and every
// AC node has at least two children.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acd {

/// Node identifier. Zero means "not annotated".
using Id = std::uint64_t;
using Integer = std::int64_t;

inline constexpr std::string_view kAnd = "/\\";
inline constexpr std::string_view kOr = "\\/";
inline constexpr std::string_view kPlus = "+";
inline constexpr std::string_view kTimes = "*";

bool is_ac_functor(std::string_view functor);

class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Number, Compound };

  static Term variable(std::string name, Id id = 0);
  static Term number(Integer value, Id id = 0);
  static Term atom(std::string name, Id id = 0);
  /// Builds a compound; AC functors are flattened. An AC node left with a
  /// single child collapses to that child.
  static Term compound(std::string functor, std::vector<Term> args, Id id = 0);
  /// Builds a compound exactly as given, without flattening. Used for
  /// binary AC views and for head instances that mirror a rule pattern.
  static Term compound_exact(std::string functor, std::vector<Term> args,
                             Id id = 0);

  Kind kind() const;
  bool is_variable() const { return kind() == Kind::Variable; }
  bool is_number() const { return kind() == Kind::Number; }
  bool is_compound() const { return kind() == Kind::Compound; }
  bool is_atom(std::string_view name) const;
  /// True for compounds whose functor is AC.
  bool is_ac() const;
  bool has_functor(std::string_view functor) const;

  /// Variable name or functor symbol (empty for numbers).
  const std::string& name() const;
  Integer value() const;
  std::span<const Term> args() const;
  const Term& arg(std::size_t i) const;  // 0-based
  std::size_t arity() const;
  Id id() const;

  Term with_id(Id id) const;
  Term with_args(std::vector<Term> args) const;  // re-flattens

  /// Same node object (cheap identity test).
  bool same_node(const Term& other) const { return node_ == other.node_; }

  /// Structural equality ignoring identifiers. No AC normalisation.
  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Total order on terms: kind (variable < number < compound), then name or
/// value, then arity, then children left to right. Identifiers ignored.
std::strong_ordering compare(const Term& a, const Term& b);

struct TermLess {
  bool operator()(const Term& a, const Term& b) const {
    return compare(a, b) < 0;
  }
};

/// Structural equality including identifiers.
bool identical(const Term& a, const Term& b);

/// A path of 1-based child indices; the empty path is the root.
class Position {
 public:
  Position() = default;
  Position(std::initializer_list<std::size_t> path) : path_(path) {}
  explicit Position(std::vector<std::size_t> path) : path_(std::move(path)) {}

  bool is_root() const { return path_.empty(); }
  std::size_t depth() const { return path_.size(); }
  std::span<const std::size_t> steps() const { return path_; }
  std::size_t back() const { return path_.back(); }
  Position child(std::size_t index) const;
  Position parent() const;
  /// "ε" for the root, otherwise dot-separated indices such as "2.1".
  std::string to_string() const;

  auto operator<=>(const Position&) const = default;

 private:
  std::vector<std::size_t> path_;
};

class PositionError : public std::out_of_range {
 public:
  PositionError(const Position& pos, std::size_t failing_step);
  std::size_t failing_step() const { return failing_step_; }

 private:
  std::size_t failing_step_;
};

const Term& subterm_at(const Term& t, const Position& p);
/// Replaces the subterm at p; ancestors are rebuilt (and re-flattened)
/// keeping their identifiers.
Term replace_at(const Term& t, const Term& s, const Position& p);
/// Pre-order, root first.
std::vector<Position> positions(const Term& t);
std::set<std::string> vars_of(const Term& t);
/// Number of symbols in the binary form: an AC node with k children counts
/// as k-1 operator symbols.
std::size_t size(const Term& t);
/// Number of nodes in the stored (flattened) form.
std::size_t node_count(const Term& t);

/// Flatten nested AC nodes and sort AC children by the total order.
Term canonical(const Term& t);
bool ac_equal(const Term& a, const Term& b);
/// Re-flattens a term built with compound_exact.
Term flatten(const Term& t);

/// Removes all identifiers.
Term strip(const Term& t);
bool is_annotated(const Term& t);
/// Identifiers in pre-order (annotated nodes only).
std::vector<Id> ids(const Term& t);

/// High-water-mark source of fresh identifiers.
class IdAllocator {
 public:
  explicit IdAllocator(Id next = 1) : next_(next) {}
  Id fresh() { return next_++; }
  Id peek() const { return next_; }
  /// Every id below peek() counts as used.
  bool is_used(Id id) const { return id != 0 && id < next_; }

 private:
  Id next_;
};

/// Annotates every node with a fresh identifier, keeping the exact shape.
/// Non-AC nodes are numbered after their children; an AC node with k
/// children takes the identifier between its first and second child and
/// burns k-2 more between the remaining children.
Term annotate(IdAllocator& ids, const Term& t);
/// Annotates avoiding every identifier in used.
Term annotate(const std::set<Id>& used, const Term& t);

/// Conjuncts alongside the subterm at p: at every /\ node on the way down
/// all sibling children are collected. The root context is the empty
/// multiset (that is, true).
std::vector<Term> conjunctive_context(const Term& g, const Position& p);

}  // namespace acd
