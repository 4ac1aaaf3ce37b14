#include <algorithm>

#include "acdterm/engine.hpp"

namespace acd {

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Simplify:
      return "simplify";
    case StepKind::Propagate:
      return "propagate";
    case StepKind::Simpagate:
      return "simpagate";
  }
  return "?";
}

std::optional<StepKind> step_kind_from_string(std::string_view s) {
  for (auto k : {StepKind::Simplify, StepKind::Propagate, StepKind::Simpagate}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

StepKind step_kind_of(RuleKind kind) {
  switch (kind) {
    case RuleKind::Simplification:
      return StepKind::Simplify;
    case RuleKind::Propagation:
      return StepKind::Propagate;
    case RuleKind::Simpagation:
      return StepKind::Simpagate;
  }
  return StepKind::Simplify;
}

EngineState initial_state(const Term& goal) {
  EngineState st{flatten(goal), {}, vars_of(goal), IdAllocator{}};
  if (is_annotated(st.goal)) {
    auto used = ids(st.goal);
    st.ids = IdAllocator(*std::max_element(used.begin(), used.end()) + 1);
  } else {
    st.goal = annotate(st.ids, strip(st.goal));
  }
  return st;
}

namespace {

// Instantiates a rule body without flattening so that it mirrors the
// body's shape; body-only variables get fresh names.
Term instantiate_exact(const Term& body, Substitution& theta, IdAllocator& ids) {
  if (body.is_variable()) {
    if (const Term* b = theta.find(body.name())) return strip(*b);
    Term fresh = Term::variable("_G" + std::to_string(ids.fresh()));
    theta.bind(body.name(), fresh);
    return fresh;
  }
  if (!body.is_compound() || body.arity() == 0) return body;
  std::vector<Term> args;
  args.reserve(body.arity());
  for (const auto& a : body.args()) args.push_back(instantiate_exact(a, theta, ids));
  return Term::compound_exact(body.name(), std::move(args));
}

}  // namespace

bool find_firings_at(const EngineState& state, const Program& program,
                     const Position& at, const FiringSink& sink) {
  const Term& goal = state.goal;
  for (const auto& rule : program.rules) {
    bool stop = find_redexes_at(goal, at, rule.head, [&](const Redex& redex) {
      auto check = [&](const Substitution& theta) {
        if (!guard_holds(rule.guard, theta)) return false;
        Firing f{&rule, redex, theta, {}};
        if (rule.kind == RuleKind::Propagation) {
          bool fresh = false;
          for (auto& v : entry_variants(rule.head, redex.match.instance)) {
            if (!state.history.contains(HistoryEntry{rule.name, v})) {
              f.entry = std::move(v);
              fresh = true;
              break;
            }
          }
          if (!fresh) return false;
        }
        return sink(f);
      };
      if (rule.kind != RuleKind::Simpagation) return check(redex.match.theta);
      auto cc = conjunctive_context(goal, at);
      if (!redex.selection.empty() && subterm_at(goal, at).has_functor(kAnd)) {
        cc.insert(cc.end(), redex.residual.begin(), redex.residual.end());
      }
      return match_context(*rule.context, cc, redex.match.theta,
                           [&](const Match& m) { return check(m.theta); });
    });
    if (stop) return true;
  }
  return false;
}

bool find_firings(const EngineState& state, const Program& program,
                  const FiringSink& sink) {
  for (const auto& p : positions(state.goal)) {
    if (find_firings_at(state, program, p, sink)) return true;
  }
  return false;
}

FireResult fire(EngineState& state, const Firing& firing, std::size_t index) {
  const Rule& rule = *firing.rule;
  const Redex& redex = firing.redex;
  FireResult res;
  res.body_theta = firing.theta;
  Term body_exact = instantiate_exact(rule.body, res.body_theta, state.ids);
  Term body_ann = annotate(state.ids, body_exact);
  state.history = update_history(rule.head, redex.match.instance, rule.body, body_ann,
                                 state.history);
  const bool propagate = rule.kind == RuleKind::Propagation;
  if (propagate) state.history.insert(HistoryEntry{rule.name, firing.entry});

  Term r = flatten(body_ann);
  if (propagate) {
    Term focus = redex.focus_term(state.goal);
    if (focus.id() == 0) focus = focus.with_id(state.ids.fresh());
    r = Term::compound(std::string(kAnd), {focus, r}, state.ids.fresh());
  }

  const Term node = subterm_at(state.goal, redex.focus);
  if (redex.selection.empty()) {
    state.goal = replace_at(state.goal, r, redex.focus);
    if (!redex.focus.is_root() && r.is_ac() &&
        subterm_at(state.goal, redex.focus.parent()).has_functor(r.name())) {
      res.spliced = true;
      res.first = redex.focus.back() - 1;
      res.count = r.arity();
    } else {
      res.body_at_focus = !propagate;
    }
  } else {
    std::vector<Term> kids;
    const auto& sel = redex.selection;
    for (std::size_t i = 0; i < node.arity(); ++i) {
      if (i == sel.front()) kids.push_back(r);
      if (std::find(sel.begin(), sel.end(), i) == sel.end()) kids.push_back(node.arg(i));
    }
    state.goal = replace_at(state.goal, Term::compound(node.name(), std::move(kids), node.id()),
                            redex.focus);
  }

  TraceStep& s = res.step;
  s.index = index;
  s.rule = rule.name;
  s.kind = step_kind_of(rule.kind);
  s.focus = redex.focus;
  s.selection = redex.selection;
  s.entry = firing.entry;
  s.goal_after = state.goal;
  return res;
}

std::optional<TraceStep> step(EngineState& state, const Program& program,
                              std::size_t index) {
  std::optional<Firing> first;
  find_firings(state, program, [&](const Firing& f) {
    first = f;
    return true;
  });
  if (!first) return std::nullopt;
  return fire(state, *first, index).step;
}

std::vector<std::pair<EngineState, TraceStep>> successors(const EngineState& state,
                                                          const Program& program) {
  std::vector<std::pair<EngineState, TraceStep>> out;
  find_firings(state, program, [&](const Firing& f) {
    EngineState next = state;
    TraceStep s = fire(next, f, 1).step;
    out.emplace_back(std::move(next), std::move(s));
    return false;
  });
  return out;
}

Normaliser::Normaliser(const Program& program, EngineState& state,
                       std::vector<TraceStep>& trace, std::size_t max_steps)
    : program_(program), state_(state), trace_(trace), max_steps_(max_steps) {}

void Normaliser::normalise_goal() { normalise(Position{}, nullptr, nullptr, false); }

std::size_t Normaliser::normalise(const Position& at, const Term* tmpl,
                                  const Substitution* theta, bool changed) {
  // Copies that outlive a firing: the template and its substitution.
  Term body_tmpl = Term::atom("true");
  Substitution body_theta;
  for (;;) {
    if (exhausted()) return 1;
    if (tmpl && theta && tmpl->is_variable() && theta->contains(tmpl->name())) {
      if (!changed) return 1;
      tmpl = nullptr;
      theta = nullptr;
    }
    const Term node = subterm_at(state_.goal, at);
    if (node.has_functor(kAnd)) {
      std::size_t before;
      do {
        before = trace_.size();
        for (std::size_t i = 0; !exhausted() && i < subterm_at(state_.goal, at).arity();) {
          i += normalise(at.child(i + 1), nullptr, nullptr, true);
        }
      } while (!exhausted() && trace_.size() != before);
    } else if (node.is_compound() && node.arity() > 0) {
      bool aligned = tmpl && tmpl->is_compound() && tmpl->name() == node.name() &&
                     tmpl->arity() == node.arity();
      for (std::size_t i = 0, ti = 0; !exhausted() && i < subterm_at(state_.goal, at).arity();
           ++ti) {
        std::size_t span = normalise(at.child(i + 1), aligned ? &tmpl->arg(ti) : nullptr,
                                     aligned ? theta : nullptr, changed);
        if (span != 1) aligned = false;
        i += span;
      }
    }
    if (exhausted()) return 1;

    std::optional<Firing> firing;
    find_firings_at(state_, program_, at, [&](const Firing& f) {
      firing = f;
      return true;
    });
    if (!firing) return 1;
    FireResult res = fire(state_, *firing, trace_.size() + 1);
    trace_.push_back(res.step);

    if (res.spliced) {
      const Position parent = at.parent();
      const Term& body = firing->rule->body;
      bool aligned = firing->rule->kind != RuleKind::Propagation && body.is_compound() &&
                     body.name() == subterm_at(state_.goal, parent).name() &&
                     body.arity() == res.count;
      body_tmpl = body;
      body_theta = res.body_theta;
      std::size_t end = res.first + res.count;
      for (std::size_t i = res.first, ti = 0; !exhausted() && i < end; ++ti) {
        bool use = aligned && ti < body_tmpl.arity();
        std::size_t span = normalise(parent.child(i + 1), use ? &body_tmpl.arg(ti) : nullptr,
                                     use ? &body_theta : nullptr, false);
        end += span - 1;
        i += span;
      }
      return end - res.first;
    }
    if (res.body_at_focus) {
      body_tmpl = firing->rule->body;
      body_theta = std::move(res.body_theta);
      tmpl = &body_tmpl;
      theta = &body_theta;
    } else {
      tmpl = nullptr;
      theta = nullptr;
    }
    changed = false;
  }
}

RunResult run(const Program& program, const Term& goal, RunOptions options) {
  RunResult out;
  out.final_state = initial_state(goal);
  Normaliser nz(program, out.final_state, out.trace, options.max_steps);
  for (;;) {
    nz.normalise_goal();
    std::optional<Firing> next;
    find_firings(out.final_state, program, [&](const Firing& f) {
      next = f;
      return true;
    });
    if (!next) {
      out.status = RunStatus::NormalForm;
      return out;
    }
    if (nz.exhausted()) {
      out.status = RunStatus::BudgetExhausted;
      return out;
    }
    out.trace.push_back(fire(out.final_state, *next, out.trace.size() + 1).step);
  }
}

}  // namespace acd
