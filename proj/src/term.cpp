#include "acdterm/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace acd {

struct Term::Node {
  Kind kind;
  std::string name;
  Integer value = 0;
  std::vector<Term> args;
  Id id = 0;
};

bool is_ac_functor(std::string_view functor) {
  return functor == kAnd || functor == kOr || functor == kPlus ||
         functor == kTimes;
}

Term Term::variable(std::string name, Id id) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  return Term(std::make_shared<const Node>(
      Node{Kind::Variable, std::move(name), 0, {}, id}));
}

Term Term::number(Integer value, Id id) {
  return Term(std::make_shared<const Node>(Node{Kind::Number, {}, value, {}, id}));
}

Term Term::atom(std::string name, Id id) {
  return compound_exact(std::move(name), {}, id);
}

Term Term::compound_exact(std::string functor, std::vector<Term> args, Id id) {
  if (functor.empty()) throw std::invalid_argument("empty functor symbol");
  return Term(std::make_shared<const Node>(
      Node{Kind::Compound, std::move(functor), 0, std::move(args), id}));
}

Term Term::compound(std::string functor, std::vector<Term> args, Id id) {
  if (!is_ac_functor(functor)) return compound_exact(std::move(functor), std::move(args), id);
  std::vector<Term> flat;
  flat.reserve(args.size());
  for (auto& a : args) {
    if (a.has_functor(functor)) {
      flat.insert(flat.end(), a.args().begin(), a.args().end());
    } else {
      flat.push_back(std::move(a));
    }
  }
  if (flat.empty()) throw std::invalid_argument("AC node '" + functor + "' without children");
  if (flat.size() == 1) return flat.front();
  return compound_exact(std::move(functor), std::move(flat), id);
}

Term::Kind Term::kind() const { return node_->kind; }

bool Term::is_atom(std::string_view name) const {
  return is_compound() && node_->args.empty() && node_->name == name;
}

bool Term::is_ac() const { return is_compound() && is_ac_functor(node_->name); }

bool Term::has_functor(std::string_view functor) const {
  return is_compound() && node_->name == functor;
}

const std::string& Term::name() const { return node_->name; }
Integer Term::value() const { return node_->value; }
std::span<const Term> Term::args() const { return node_->args; }
const Term& Term::arg(std::size_t i) const { return node_->args.at(i); }
std::size_t Term::arity() const { return node_->args.size(); }
Id Term::id() const { return node_->id; }

Term Term::with_id(Id id) const {
  if (id == node_->id) return *this;
  auto copy = std::make_shared<Node>(*node_);
  copy->id = id;
  return Term(std::move(copy));
}

Term Term::with_args(std::vector<Term> args) const {
  return compound(node_->name, std::move(args), node_->id);
}

bool operator==(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Variable:
      return a.name() == b.name();
    case Term::Kind::Number:
      return a.value() == b.value();
    case Term::Kind::Compound:
      if (a.name() != b.name() || a.arity() != b.arity()) return false;
      for (std::size_t i = 0; i < a.arity(); ++i) {
        if (!(a.arg(i) == b.arg(i))) return false;
      }
      return true;
  }
  return false;
}

std::strong_ordering compare(const Term& a, const Term& b) {
  if (a.same_node(b)) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Term::Kind::Variable:
      return a.name().compare(b.name()) <=> 0;
    case Term::Kind::Number:
      return a.value() <=> b.value();
    case Term::Kind::Compound: {
      if (auto c = a.name().compare(b.name()) <=> 0; c != 0) return c;
      if (auto c = a.arity() <=> b.arity(); c != 0) return c;
      for (std::size_t i = 0; i < a.arity(); ++i) {
        if (auto c = compare(a.arg(i), b.arg(i)); c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

bool identical(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (a.id() != b.id() || a.kind() != b.kind()) return false;
  if (!a.is_compound()) return a == b;
  if (a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!identical(a.arg(i), b.arg(i))) return false;
  }
  return true;
}

// --- positions -------------------------------------------------------------

Position Position::child(std::size_t index) const {
  auto path = path_;
  path.push_back(index);
  return Position(std::move(path));
}

Position Position::parent() const {
  if (path_.empty()) throw std::logic_error("root position has no parent");
  return Position(std::vector<std::size_t>(path_.begin(), path_.end() - 1));
}

std::string Position::to_string() const {
  if (path_.empty()) return "ε";
  std::ostringstream os;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i) os << '.';
    os << path_[i];
  }
  return os.str();
}

static std::string position_message(const Position& pos, std::size_t step) {
  std::ostringstream os;
  os << "invalid position " << pos.to_string() << ": index "
     << pos.steps()[step] << " at step " << step + 1
     << " does not address a child";
  return os.str();
}

PositionError::PositionError(const Position& pos, std::size_t failing_step)
    : std::out_of_range(position_message(pos, failing_step)),
      failing_step_(failing_step) {}

const Term& subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  auto steps = p.steps();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] == 0 || steps[i] > cur->arity()) throw PositionError(p, i);
    cur = &cur->arg(steps[i] - 1);
  }
  return *cur;
}

static Term replace_rec(const Term& t, const Term& s, const Position& p,
                        std::size_t depth) {
  auto steps = p.steps();
  if (depth == steps.size()) return s;
  std::size_t idx = steps[depth];
  if (idx == 0 || idx > t.arity()) throw PositionError(p, depth);
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[idx - 1] = replace_rec(args[idx - 1], s, p, depth + 1);
  return t.with_args(std::move(args));
}

Term replace_at(const Term& t, const Term& s, const Position& p) {
  return replace_rec(t, s, p, 0);
}

static void positions_rec(const Term& t, std::vector<std::size_t>& path,
                          std::vector<Position>& out) {
  out.emplace_back(path);
  for (std::size_t i = 0; i < t.arity(); ++i) {
    path.push_back(i + 1);
    positions_rec(t.arg(i), path, out);
    path.pop_back();
  }
}

std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  std::vector<std::size_t> path;
  positions_rec(t, path, out);
  return out;
}

static void vars_rec(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) vars_rec(a, out);
}

std::set<std::string> vars_of(const Term& t) {
  std::set<std::string> out;
  vars_rec(t, out);
  return out;
}

std::size_t size(const Term& t) {
  std::size_t n = t.is_ac() ? t.arity() - 1 : 1;
  for (const auto& a : t.args()) n += size(a);
  return n;
}

std::size_t node_count(const Term& t) {
  std::size_t n = 1;
  for (const auto& a : t.args()) n += node_count(a);
  return n;
}

// --- AC canonical form -----------------------------------------------------

Term flatten(const Term& t) {
  if (!t.is_compound() || t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(flatten(a));
  return Term::compound(t.name(), std::move(args), t.id());
}

Term canonical(const Term& t) {
  if (!t.is_compound() || t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(canonical(a));
  Term r = Term::compound(t.name(), std::move(args), t.id());
  if (!r.is_ac()) return r;
  std::vector<Term> sorted(r.args().begin(), r.args().end());
  std::stable_sort(sorted.begin(), sorted.end(), TermLess{});
  return Term::compound_exact(r.name(), std::move(sorted), r.id());
}

bool ac_equal(const Term& a, const Term& b) {
  return canonical(a) == canonical(b);
}

// --- annotations -----------------------------------------------------------

Term strip(const Term& t) {
  if (!t.is_compound() || t.arity() == 0) return t.with_id(0);
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(strip(a));
  return Term::compound_exact(t.name(), std::move(args), 0);
}

bool is_annotated(const Term& t) {
  if (t.id() == 0) return false;
  return std::all_of(t.args().begin(), t.args().end(),
                     [](const Term& a) { return is_annotated(a); });
}

static void ids_rec(const Term& t, std::vector<Id>& out) {
  if (t.id() != 0) out.push_back(t.id());
  for (const auto& a : t.args()) ids_rec(a, out);
}

std::vector<Id> ids(const Term& t) {
  std::vector<Id> out;
  ids_rec(t, out);
  return out;
}

Term annotate(IdAllocator& alloc, const Term& t) {
  if (!t.is_compound()) return t.with_id(alloc.fresh());
  if (t.arity() == 0) return t.with_id(alloc.fresh());
  std::vector<Term> args;
  args.reserve(t.arity());
  if (t.is_ac()) {
    Id own = 0;
    for (std::size_t i = 0; i < t.arity(); ++i) {
      if (i == 1) own = alloc.fresh();
      if (i > 1) alloc.fresh();
      args.push_back(annotate(alloc, t.arg(i)));
    }
    return Term::compound_exact(t.name(), std::move(args), own);
  }
  for (const auto& a : t.args()) args.push_back(annotate(alloc, a));
  return Term::compound_exact(t.name(), std::move(args), alloc.fresh());
}

Term annotate(const std::set<Id>& used, const Term& t) {
  IdAllocator alloc(used.empty() ? 1 : *used.rbegin() + 1);
  return annotate(alloc, t);
}

// --- conjunctive context ---------------------------------------------------

std::vector<Term> conjunctive_context(const Term& g, const Position& p) {
  std::vector<Term> out;
  const Term* cur = &g;
  auto steps = p.steps();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::size_t idx = steps[i];
    if (idx == 0 || idx > cur->arity()) throw PositionError(p, i);
    if (cur->has_functor(kAnd)) {
      for (std::size_t j = 0; j < cur->arity(); ++j) {
        if (j + 1 != idx) out.push_back(cur->arg(j));
      }
    }
    cur = &cur->arg(idx - 1);
  }
  return out;
}

}  // namespace acd
