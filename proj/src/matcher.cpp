#include "acdterm/matcher.hpp"

#include <sstream>

#include "acdterm/syntax.hpp"

namespace acd {

const Term* Substitution::find(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

void Substitution::bind(const std::string& var, Term value) {
  bindings_.insert_or_assign(var, std::move(value));
}

bool Substitution::equivalent(const Substitution& other) const {
  if (size() != other.size()) return false;
  for (const auto& [var, value] : bindings_) {
    const Term* o = other.find(var);
    if (!o || !ac_equal(value, *o)) return false;
  }
  return true;
}

std::string Substitution::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [var, value] : bindings_) {
    if (!first) os << ", ";
    first = false;
    os << var << " -> " << pretty(value);
  }
  os << '}';
  return os.str();
}

Term apply(const Substitution& theta, const Term& pattern) {
  if (pattern.is_variable()) {
    const Term* b = theta.find(pattern.name());
    return b ? *b : pattern;
  }
  if (!pattern.is_compound() || pattern.arity() == 0) return pattern;
  std::vector<Term> args;
  args.reserve(pattern.arity());
  for (const auto& a : pattern.args()) args.push_back(apply(theta, a));
  return Term::compound(pattern.name(), std::move(args), pattern.id());
}

namespace {

// Continuation receives the instance of the pattern node just matched; the
// substitution is shared and restored on backtracking.
using Cont = std::function<bool(const Term&)>;

bool match_rec(const Term& p, const Term& s, Substitution& th, const Cont& k);

bool match_args(const Term& p, const Term& s, std::size_t i, Substitution& th,
                std::vector<Term>& inst, const Cont& k) {
  if (i == p.arity()) return k(Term::compound_exact(s.name(), inst, s.id()));
  return match_rec(p.arg(i), s.arg(i), th, [&](const Term& ci) {
    inst.push_back(ci);
    bool stop = match_args(p, s, i + 1, th, inst, k);
    inst.pop_back();
    return stop;
  });
}

class AcMatcher {
 public:
  AcMatcher(const Term& p, const Term& s, Substitution& th, const Cont& k)
      : p_(p), s_(s), th_(th), k_(k), used_(s.arity(), false), inst_(p.arity(), p) {
    for (std::size_t i = 0; i < p.arity(); ++i) {
      (p.arg(i).is_variable() ? vars_ : fixed_).push_back(i);
    }
  }

  bool run() {
    if (s_.arity() < p_.arity()) return false;
    if (vars_.empty() && s_.arity() != p_.arity()) return false;
    return assign_fixed(0);
  }

 private:
  bool assign_fixed(std::size_t j) {
    if (j == fixed_.size()) {
      rest_.clear();
      for (std::size_t c = 0; c < s_.arity(); ++c) {
        if (!used_[c]) rest_.push_back(c);
      }
      if (rest_.size() < vars_.size()) return false;
      owner_.assign(rest_.size(), 0);
      return distribute(0);
    }
    for (std::size_t c = 0; c < s_.arity(); ++c) {
      if (used_[c]) continue;
      used_[c] = true;
      bool stop = match_rec(p_.arg(fixed_[j]), s_.arg(c), th_, [&](const Term& ci) {
        inst_[fixed_[j]] = ci;
        return assign_fixed(j + 1);
      });
      used_[c] = false;
      if (stop) return true;
    }
    return false;
  }

  bool distribute(std::size_t r) {
    if (r < rest_.size()) {
      for (std::size_t v = 0; v < vars_.size(); ++v) {
        owner_[r] = v;
        if (distribute(r + 1)) return true;
      }
      return false;
    }
    std::vector<std::vector<Term>> groups(vars_.size());
    for (std::size_t r2 = 0; r2 < rest_.size(); ++r2) {
      groups[owner_[r2]].push_back(s_.arg(rest_[r2]));
    }
    for (const auto& g : groups) {
      if (g.empty()) return false;
    }
    std::vector<std::string> bound_here;
    bool ok = true;
    for (std::size_t v = 0; v < vars_.size() && ok; ++v) {
      const std::string& name = p_.arg(vars_[v]).name();
      Term group = groups[v].size() == 1 ? groups[v].front()
                                         : Term::compound(s_.name(), groups[v]);
      if (const Term* b = th_.find(name)) {
        ok = ac_equal(*b, group);
      } else {
        th_.bind(name, group);
        bound_here.push_back(name);
      }
      inst_[vars_[v]] = group;
    }
    bool stop = ok && k_(Term::compound_exact(s_.name(), inst_, s_.id()));
    for (const auto& name : bound_here) th_.unbind(name);
    return stop;
  }

  const Term& p_;
  const Term& s_;
  Substitution& th_;
  const Cont& k_;
  std::vector<std::size_t> fixed_;
  std::vector<std::size_t> vars_;
  std::vector<bool> used_;
  std::vector<std::size_t> rest_;
  std::vector<std::size_t> owner_;
  std::vector<Term> inst_;
};

bool match_rec(const Term& p, const Term& s, Substitution& th, const Cont& k) {
  switch (p.kind()) {
    case Term::Kind::Variable: {
      if (const Term* b = th.find(p.name())) {
        return ac_equal(*b, s) && k(s);
      }
      th.bind(p.name(), s);
      bool stop = k(s);
      th.unbind(p.name());
      return stop;
    }
    case Term::Kind::Number:
      return s.is_number() && s.value() == p.value() && k(s);
    case Term::Kind::Compound: {
      if (!s.is_compound() || s.name() != p.name()) return false;
      if (p.is_ac()) return AcMatcher(p, s, th, k).run();
      if (s.arity() != p.arity()) return false;
      if (p.arity() == 0) return k(s);
      std::vector<Term> inst;
      inst.reserve(p.arity());
      return match_args(p, s, 0, th, inst, k);
    }
  }
  return false;
}

// Calls visit(indices) for every k-combination of {0..n-1} in lexicographic
// order; stops when visit returns true.
template <typename Visit>
bool for_each_combination(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n || k == 0) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (visit(idx)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Term select(const Term& node, const std::vector<std::size_t>& sel) {
  if (sel.size() == 1) return node.arg(sel.front());
  std::vector<Term> kids;
  kids.reserve(sel.size());
  for (auto i : sel) kids.push_back(node.arg(i));
  return Term::compound(node.name(), std::move(kids));
}

}  // namespace

bool match(const Term& pattern, const Term& subject, const Substitution& theta0,
           const MatchSink& sink) {
  Substitution th = theta0;
  return match_rec(pattern, subject, th,
                   [&](const Term& inst) { return sink(Match{th, inst}); });
}

std::vector<Match> match_all(const Term& pattern, const Term& subject,
                             const Substitution& theta0) {
  std::vector<Match> out;
  match(pattern, subject, theta0, [&](const Match& m) {
    out.push_back(m);
    return false;
  });
  return out;
}

Term Redex::focus_term(const Term& goal) const {
  const Term& node = subterm_at(goal, focus);
  return selection.empty() ? node : select(node, selection);
}

bool find_redexes_at(const Term& goal, const Position& at, const Term& head,
                     const RedexSink& sink) {
  const Term& node = subterm_at(goal, at);
  bool by_selection = node.is_ac() && (head.is_variable() || head.has_functor(node.name()));
  if (!by_selection) {
    return match(head, node, {}, [&](const Match& m) {
      return sink(Redex{at, {}, m, {}});
    });
  }
  const std::size_t n = node.arity();
  std::size_t lo = 2;
  std::size_t hi = n;
  if (!head.is_variable()) {
    lo = head.arity();
    bool has_var = false;
    for (const auto& a : head.args()) has_var |= a.is_variable();
    if (!has_var) hi = std::min(hi, lo);
  }
  for (std::size_t k = lo; k <= hi; ++k) {
    bool stop = for_each_combination(n, k, [&](const std::vector<std::size_t>& sel) {
      if (k == n) {
        return match(head, node, {}, [&](const Match& m) {
          return sink(Redex{at, {}, m, {}});
        });
      }
      std::vector<Term> residual;
      for (std::size_t i = 0, j = 0; i < n; ++i) {
        if (j < sel.size() && sel[j] == i) {
          ++j;
        } else {
          residual.push_back(node.arg(i));
        }
      }
      return match(head, select(node, sel), {}, [&](const Match& m) {
        return sink(Redex{at, sel, m, residual});
      });
    });
    if (stop) return true;
  }
  return false;
}

bool find_redexes(const Term& goal, const Term& head, const RedexSink& sink) {
  for (const auto& p : positions(goal)) {
    if (find_redexes_at(goal, p, head, sink)) return true;
  }
  return false;
}

std::vector<Redex> find_all_redexes(const Term& goal, const Term& head) {
  std::vector<Redex> out;
  find_redexes(goal, head, [&](const Redex& r) {
    out.push_back(r);
    return false;
  });
  return out;
}

bool match_context(const Term& context, const std::vector<Term>& cc,
                   const Substitution& theta0, const MatchSink& sink) {
  std::vector<Term> pool = cc;
  pool.push_back(Term::atom("true"));
  const std::size_t n = pool.size();
  std::size_t lo = 1;
  std::size_t hi = n - 1;  // the remainder D must be non-empty
  if (context.has_functor(kAnd)) {
    lo = context.arity();
    bool has_var = false;
    for (const auto& a : context.args()) has_var |= a.is_variable();
    if (!has_var) hi = std::min(hi, lo);
  } else if (!context.is_variable()) {
    hi = std::min<std::size_t>(hi, 1);
  }
  for (std::size_t k = lo; k <= hi; ++k) {
    bool stop = for_each_combination(n, k, [&](const std::vector<std::size_t>& sel) {
      std::vector<Term> kids;
      for (auto i : sel) kids.push_back(pool[i]);
      Term subject = kids.size() == 1 ? kids.front() : Term::compound(std::string(kAnd), kids);
      return match(context, subject, theta0, sink);
    });
    if (stop) return true;
  }
  return false;
}

std::vector<Substitution> match_context_all(const Term& context,
                                            const std::vector<Term>& cc,
                                            const Substitution& theta0) {
  std::vector<Substitution> out;
  match_context(context, cc, theta0, [&](const Match& m) {
    out.push_back(m.theta);
    return false;
  });
  return out;
}

}  // namespace acd
