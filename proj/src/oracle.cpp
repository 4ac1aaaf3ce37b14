#include "acdterm/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_set>

namespace acd {
namespace {

class Arranger {
 public:
  Arranger(std::size_t& made, std::size_t cap) : made_(made), cap_(cap) {}

  // Every binary tree the term can be written as. The root keeps its id,
  // the extra binary AC nodes get id 0.
  std::vector<Term> all(const Term& t) {
    if (!t.is_compound() || t.arity() == 0) return {t};
    std::vector<std::vector<Term>> kids;
    for (const auto& a : t.args()) kids.push_back(all(a));
    if (!t.is_ac()) {
      std::vector<Term> out;
      std::vector<Term> pick;
      product(t, kids, 0, pick, out);
      return out;
    }
    std::map<unsigned, std::vector<Term>> memo;
    unsigned full = (1u << kids.size()) - 1;
    auto out = trees(t.name(), kids, full, memo);
    for (auto& tree : out) tree = tree.with_id(t.id());
    return out;
  }

  // Arrangements of the children of an AC node selected by mask, sharing
  // work across masks. The root gets id 0.
  const std::vector<Term>& subset(const Term& node, unsigned mask) {
    if (!node_ || !node_->same_node(node)) {
      node_ = node;
      kids_.clear();
      memo_.clear();
      for (const auto& a : node.args()) kids_.push_back(all(a));
    }
    return trees(node.name(), kids_, mask, memo_);
  }

 private:
  void product(const Term& t, const std::vector<std::vector<Term>>& kids, std::size_t i,
               std::vector<Term>& pick, std::vector<Term>& out) {
    if (i == kids.size()) {
      out.push_back(Term::compound_exact(t.name(), pick, t.id()));
      count();
      return;
    }
    for (const auto& k : kids[i]) {
      pick.push_back(k);
      product(t, kids, i + 1, pick, out);
      pick.pop_back();
    }
  }

  const std::vector<Term>& trees(const std::string& f,
                                 const std::vector<std::vector<Term>>& kids, unsigned mask,
                                 std::map<unsigned, std::vector<Term>>& memo) {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::vector<Term> out;
    if ((mask & (mask - 1)) == 0) {
      unsigned i = 0;
      while (!(mask >> i & 1u)) ++i;
      out = kids[i];
    } else {
      for (unsigned left = (mask - 1) & mask; left != 0; left = (left - 1) & mask) {
        unsigned right = mask & ~left;
        const auto& ls = trees(f, kids, left, memo);
        const auto& rs = trees(f, kids, right, memo);
        for (const auto& l : ls) {
          for (const auto& r : rs) {
            out.push_back(Term::compound_exact(f, {l, r}));
            count();
          }
        }
      }
    }
    return memo.emplace(mask, std::move(out)).first->second;
  }

  void count() {
    if (++made_ > cap_) throw OracleLimitError("oracle: too many AC arrangements");
  }

  std::size_t& made_;
  std::size_t cap_;
  std::optional<Term> node_;
  std::vector<std::vector<Term>> kids_;
  std::map<unsigned, std::vector<Term>> memo_;
};

Term binarise(const Term& p) {
  if (!p.is_compound() || p.arity() == 0) return p;
  std::vector<Term> kids;
  for (const auto& a : p.args()) kids.push_back(binarise(a));
  if (!p.is_ac()) return Term::compound_exact(p.name(), std::move(kids));
  Term acc = kids.back();
  for (std::size_t i = kids.size() - 1; i-- > 0;) {
    acc = Term::compound_exact(p.name(), {kids[i], acc});
  }
  return acc;
}

// Syntactic matching; repeated variables need plain equality.
bool syntactic(const Term& p, const Term& s, Substitution& th) {
  if (p.is_variable()) {
    if (const Term* b = th.find(p.name())) return *b == s;
    th.bind(p.name(), s);
    return true;
  }
  if (p.is_number()) return s.is_number() && s.value() == p.value();
  if (!s.is_compound() || s.name() != p.name() || s.arity() != p.arity()) return false;
  for (std::size_t i = 0; i < p.arity(); ++i) {
    if (!syntactic(p.arg(i), s.arg(i), th)) return false;
  }
  return true;
}

// Whether a binary arrangement of n elements under AC functor f can match
// pattern p at all, judged from the top of p alone: each non-variable
// argument of a flattened f-pattern takes exactly one element.
bool may_match(const Term& p, const std::string& f, std::size_t n) {
  if (p.is_variable()) return true;
  if (!p.has_functor(f)) return n == 1;
  bool open = false;
  for (const auto& a : p.args()) open |= a.is_variable();
  return open ? n >= p.arity() : n == p.arity();
}

void entry_ids(const Term& t, std::vector<Id>& out) {
  if (!(t.is_compound() && is_ac_functor(t.name()))) out.push_back(t.id());
  for (const auto& a : t.args()) entry_ids(a, out);
}

void occurrences(const Term& p, const Term& s, std::multimap<std::string, Term>& out) {
  if (p.is_variable()) {
    out.emplace(p.name(), s);
    return;
  }
  for (std::size_t i = 0; i < p.arity(); ++i) occurrences(p.arg(i), s.arg(i), out);
}

void rename_map(const Term& from, const Term& to, std::map<Id, Id>& rho) {
  if (from.id() != 0) rho.emplace(from.id(), to.id());
  for (std::size_t i = 0; i < from.arity(); ++i) rename_map(from.arg(i), to.arg(i), rho);
}

Term instantiate(const Term& body, Substitution& th, IdAllocator& ids) {
  if (body.is_variable()) {
    if (const Term* b = th.find(body.name())) return strip(*b);
    Term v = Term::variable("_G" + std::to_string(ids.fresh()));
    th.bind(body.name(), v);
    return v;
  }
  if (!body.is_compound() || body.arity() == 0) return body;
  std::vector<Term> kids;
  for (const auto& a : body.args()) kids.push_back(instantiate(a, th, ids));
  return Term::compound_exact(body.name(), std::move(kids));
}

void conjuncts(const Term& t, std::vector<Term>& out) {
  if (t.has_functor(kAnd)) {
    for (const auto& a : t.args()) conjuncts(a, out);
  } else {
    out.push_back(t);
  }
}

// One place in some arrangement of the goal where a head may match.
struct Candidate {
  Term subject;                   // binary
  std::vector<Term> cc;           // conjuncts, without the trailing true
  std::function<Term(const Term&)> rebuild;  // goal with the subject replaced
  Position focus;
  std::vector<std::size_t> selection;
};

class Enumerator {
 public:
  Enumerator(const EngineState& state, const Program& program, const OracleLimits& limits)
      : state_(state), program_(program), limits_(limits) {
    for (const auto& rule : program.rules) {
      heads_.push_back(binarise(rule.head));
      contexts_.push_back(rule.context ? binarise(*rule.context) : Term::atom("true"));
    }
  }

  std::vector<std::pair<EngineState, TraceStep>> run() {
    if (node_count(state_.goal) > limits_.max_nodes) {
      throw OracleLimitError("oracle: goal exceeds " + std::to_string(limits_.max_nodes) +
                             " nodes");
    }
    check_arity(state_.goal);
    if (limits_.whole_goal) {
      whole_goal();
    } else {
      local();
    }
    return std::move(out_);
  }

 private:
  void local() {
    for (const auto& p : positions(state_.goal)) {
      const Term node = subterm_at(state_.goal, p);
      std::vector<Term> cc;
      collect_cc(state_.goal, p, cc);
      auto whole = [this, p](const Term& r) { return flatten(replace_at(state_.goal, r, p)); };
      if (!node.is_ac()) {
        Arranger arr(made_, limits_.max_arrangements);
        for (const auto& s : arr.all(node)) try_rules(Candidate{s, cc, whole, p, {}});
        continue;
      }
      const std::size_t n = node.arity();
      const unsigned full = (1u << n) - 1;
      Arranger arr(made_, limits_.max_arrangements);
      if (any_head_fits(node.name(), n)) {
        for (const auto& s : arr.subset(node, full)) {
          try_rules(Candidate{s.with_id(node.id()), cc, whole, p, {}});
        }
      }
      for (unsigned mask = 1; mask < full; ++mask) {
        std::vector<std::size_t> sel;
        std::vector<Term> rest;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask >> i & 1u) {
            sel.push_back(i);
          } else {
            rest.push_back(node.arg(i));
          }
        }
        if (sel.size() < 2 || !any_head_fits(node.name(), sel.size())) continue;
        std::vector<Term> local_cc = cc;
        if (node.has_functor(kAnd)) local_cc.insert(local_cc.end(), rest.begin(), rest.end());
        auto rebuild = [this, p, node, rest](const Term& r) {
          std::vector<Term> kids = rest;
          kids.push_back(r);
          return flatten(replace_at(state_.goal, Term::compound(node.name(), kids, node.id()), p));
        };
        for (const auto& s : arr.subset(node, mask)) {
          try_rules(Candidate{s, local_cc, rebuild, p, sel});
        }
      }
    }
  }

  void whole_goal() {
    Arranger arr(made_, limits_.max_arrangements);
    for (const auto& g : arr.all(state_.goal)) {
      for (const auto& p : positions(g)) {
        std::vector<Term> cc;
        collect_cc(g, p, cc);
        auto rebuild = [g, p](const Term& r) { return flatten(replace_at(g, r, p)); };
        try_rules(Candidate{subterm_at(g, p), cc, rebuild, p, {}});
      }
    }
  }

  bool any_head_fits(const std::string& f, std::size_t n) const {
    for (const auto& rule : program_.rules) {
      if (may_match(rule.head, f, n)) return true;
    }
    return false;
  }

  void check_arity(const Term& t) const {
    if (t.is_ac() && t.arity() > limits_.max_ac_arity) {
      throw OracleLimitError("oracle: AC node with more than " +
                             std::to_string(limits_.max_ac_arity) + " arguments");
    }
    for (const auto& a : t.args()) check_arity(a);
  }

  // cc(A /\ B, 1p) = B /\ cc(A, p), and symmetrically; other functors pass
  // through.
  static void collect_cc(const Term& g, const Position& p, std::vector<Term>& out) {
    const Term* cur = &g;
    for (auto step : p.steps()) {
      if (cur->has_functor(kAnd)) {
        for (std::size_t j = 0; j < cur->arity(); ++j) {
          if (j + 1 != step) conjuncts(cur->arg(j), out);
        }
      }
      cur = &cur->arg(step - 1);
    }
  }

  void try_rules(const Candidate& c) {
    for (std::size_t k = 0; k < program_.rules.size(); ++k) {
      const Rule& rule = program_.rules[k];
      Substitution th;
      if (!syntactic(heads_[k], c.subject, th)) continue;
      if (rule.kind != RuleKind::Simpagation) {
        finish(rule, c, th);
        continue;
      }
      std::vector<Term> pool = c.cc;
      pool.push_back(Term::atom("true"));
      if (pool.size() > 16) throw OracleLimitError("oracle: conjunctive context too large");
      const Term& ctx = contexts_[k];
      for (unsigned mask = 1; mask + 1 < (1u << pool.size()); ++mask) {
        std::vector<Term> picked;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          if (mask >> i & 1u) picked.push_back(pool[i]);
        }
        if (!limits_.whole_goal && !may_match(*rule.context, std::string(kAnd), picked.size())) {
          continue;
        }
        Arranger arr(made_, limits_.max_arrangements);
        for (const auto& s : arr.all(Term::compound(std::string(kAnd), picked))) {
          Substitution th2 = th;
          if (syntactic(ctx, s, th2)) finish(rule, c, th2);
        }
      }
    }
  }

  void finish(const Rule& rule, const Candidate& c, Substitution th) {
    if (!guard_holds(rule.guard, th)) return;
    std::vector<Id> entry;
    const bool propagate = rule.kind == RuleKind::Propagation;
    if (propagate) {
      entry_ids(c.subject, entry);
      if (state_.history.contains(HistoryEntry{rule.name, entry})) return;
    }
    // Arrangements that differ only inside bindings give the same successor
    // up to renaming; build it once.
    std::ostringstream fk;
    fk << rule.name << '@' << c.focus.to_string() << '/';
    for (auto i : c.selection) fk << i << ',';
    auto subject_ids = ids(c.subject);
    std::sort(subject_ids.begin(), subject_ids.end());
    for (Id id : subject_ids) fk << id << ' ';
    for (Id id : entry) fk << id << ' ';
    for (const auto& [var, val] : th) fk << '|' << var << '=' << pretty(canonical(val), {true});
    if (!fired_.insert(fk.str()).second) return;
    EngineState next = state_;
    Term body = annotate(next.ids, instantiate(rule.body, th, next.ids));

    std::multimap<std::string, Term> in_head;
    std::multimap<std::string, Term> in_body;
    occurrences(heads_[&rule - program_.rules.data()], c.subject, in_head);
    occurrences(rule.body, body, in_body);
    for (const auto& [var, h] : in_head) {
      auto [lo, hi] = in_body.equal_range(var);
      for (auto it = lo; it != hi; ++it) {
        std::map<Id, Id> rho;
        rename_map(h, it->second, rho);
        for (const auto& e : state_.history) {
          HistoryEntry r = e;
          bool hit = false;
          for (auto& id : r.ids) {
            if (auto m = rho.find(id); m != rho.end()) {
              id = m->second;
              hit = true;
            }
          }
          if (hit) next.history.insert(r);
        }
      }
    }
    Term replacement = body;
    if (propagate) {
      next.history.insert(HistoryEntry{rule.name, entry});
      Term focus = c.subject;
      if (focus.id() == 0) focus = focus.with_id(next.ids.fresh());
      replacement = Term::compound_exact(std::string(kAnd), {focus, body}, next.ids.fresh());
    }
    next.goal = c.rebuild(replacement);
    // Identifiers are never reused, so entries naming a removed node are dead.
    auto live_ids = ids(next.goal);
    std::unordered_set<Id> live(live_ids.begin(), live_ids.end());
    std::erase_if(next.history, [&](const HistoryEntry& e) {
      return std::any_of(e.ids.begin(), e.ids.end(), [&](Id id) { return !live.contains(id); });
    });

    TraceStep s;
    s.index = 1;
    s.rule = rule.name;
    s.kind = step_kind_of(rule.kind);
    s.focus = c.focus;
    s.selection = c.selection;
    s.entry = entry;
    s.goal_after = next.goal;
    std::string key = s.rule + '|' + std::string(to_string(s.kind)) + '|' + state_key(next);
    if (seen_.insert(key).second) out_.emplace_back(std::move(next), std::move(s));
  }

  const EngineState& state_;
  const Program& program_;
  const OracleLimits& limits_;
  std::size_t made_ = 0;  // arrangements materialised so far
  std::vector<Term> heads_;     // binarised, one per rule
  std::vector<Term> contexts_;  // binarised; true for rules without one
  std::unordered_set<std::string> seen_;
  std::unordered_set<std::string> fired_;
  std::vector<std::pair<EngineState, TraceStep>> out_;
};

Term plain(const Term& t) { return canonical(strip(t)); }

}  // namespace

std::string state_key(const EngineState& state) {
  Term g = canonical(state.goal);
  std::map<Id, Id> renum;
  for (Id id : ids(g)) renum.emplace(id, renum.size() + 1);
  std::ostringstream os;
  std::function<void(const Term&)> print = [&](const Term& t) {
    os << (t.is_variable() ? "V:" : t.is_number() ? "N:" : "F:");
    if (t.is_number()) {
      os << t.value();
    } else {
      os << t.name();
    }
    if (t.id() != 0) os << '#' << renum[t.id()];
    if (t.is_compound() && t.arity() > 0) {
      os << '(';
      for (const auto& a : t.args()) {
        print(a);
        os << ',';
      }
      os << ')';
    }
  };
  print(g);
  std::set<std::string> live;
  for (const auto& e : state.history) {
    std::ostringstream es;
    es << e.rule;
    bool alive = true;
    for (Id id : e.ids) {
      auto it = renum.find(id);
      if (it == renum.end()) {
        alive = false;
        break;
      }
      es << ' ' << it->second;
    }
    if (alive) live.insert(es.str());
  }
  for (const auto& e : live) os << " | " << e;
  return os.str();
}

std::vector<std::pair<EngineState, TraceStep>> enumerate_transitions(
    const EngineState& state, const Program& program, const OracleLimits& limits) {
  return Enumerator(state, program, limits).run();
}

SearchResult search_normal_forms(const Program& program, const Term& goal,
                                 std::size_t depth, std::size_t width,
                                 const OracleLimits& limits) {
  SearchResult res;
  std::unordered_set<std::string> visited;
  std::deque<std::pair<EngineState, std::size_t>> queue;
  EngineState init = initial_state(goal);
  visited.insert(state_key(init));
  queue.emplace_back(std::move(init), 0);
  while (!queue.empty()) {
    auto [st, d] = std::move(queue.front());
    queue.pop_front();
    ++res.explored;
    std::vector<std::pair<EngineState, TraceStep>> next;
    try {
      next = enumerate_transitions(st, program, limits);
    } catch (const OracleLimitError&) {
      // States beyond the limits are left unexplored.
      res.truncated = true;
      continue;
    }
    if (next.empty()) {
      res.normal_forms.insert(plain(st.goal));
      continue;
    }
    if (d >= depth) {
      res.truncated = true;
      continue;
    }
    for (auto& [s, _] : next) {
      if (visited.size() >= width) {
        res.truncated = true;
        break;
      }
      if (visited.insert(state_key(s)).second) queue.emplace_back(std::move(s), d + 1);
    }
  }
  return res;
}

TraceVerdict verify_trace(const Program& program, const Term& goal,
                          const std::vector<TraceStep>& trace, const OracleLimits& limits) {
  std::vector<EngineState> frontier{initial_state(goal)};
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const TraceStep& step = trace[k];
    if (!program.find(step.rule)) {
      return {false, k + 1, "rule '" + step.rule + "' is not in the program"};
    }
    Term want = plain(step.goal_after);
    std::vector<EngineState> next;
    std::unordered_set<std::string> seen;
    for (const auto& st : frontier) {
      for (auto& [s, t] : enumerate_transitions(st, program, limits)) {
        if (t.rule != step.rule || t.kind != step.kind || plain(s.goal) != want) continue;
        if (seen.insert(state_key(s)).second) next.push_back(std::move(s));
      }
    }
    if (next.empty()) {
      return {false, k + 1,
              "no " + std::string(to_string(step.kind)) + " transition by '" + step.rule +
                  "' yields " + pretty(want)};
    }
    frontier = std::move(next);
  }
  return {};
}

}  // namespace acd
