#include <algorithm>
#include <map>
#include <random>

#include "gtest/gtest.h"
#include "support.hpp"

using namespace acd;
using acd::testing::load_corpus;
using acd::testing::T;

namespace {

std::vector<std::string> rule_names(const std::vector<TraceStep>& trace) {
  std::vector<std::string> out;
  for (const auto& s : trace) out.push_back(s.rule);
  return out;
}

std::vector<StepKind> kinds(const std::vector<TraceStep>& trace) {
  std::vector<StepKind> out;
  for (const auto& s : trace) out.push_back(s.kind);
  return out;
}

// True if some bijection on identifiers maps history a onto history b.
bool isomorphic(const History& a, const History& b) {
  if (a.size() != b.size()) return false;
  std::vector<HistoryEntry> av(a.begin(), a.end());
  std::vector<HistoryEntry> bv(b.begin(), b.end());
  std::vector<bool> used(bv.size(), false);
  std::map<Id, Id> fwd, back;
  auto unify = [&](const HistoryEntry& x, const HistoryEntry& y, std::map<Id, Id>& f,
                   std::map<Id, Id>& r) {
    if (x.rule != y.rule || x.ids.size() != y.ids.size()) return false;
    for (std::size_t i = 0; i < x.ids.size(); ++i) {
      auto [it, fresh] = f.emplace(x.ids[i], y.ids[i]);
      if (!fresh && it->second != y.ids[i]) return false;
      auto [jt, fresh2] = r.emplace(y.ids[i], x.ids[i]);
      if (!fresh2 && jt->second != x.ids[i]) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == av.size()) return true;
    for (std::size_t j = 0; j < bv.size(); ++j) {
      if (used[j]) continue;
      auto f = fwd;
      auto r = back;
      if (!unify(av[i], bv[j], f, r)) continue;
      std::swap(f, fwd);
      std::swap(r, back);
      used[j] = true;
      if (go(i + 1)) return true;
      used[j] = false;
      std::swap(f, fwd);
      std::swap(r, back);
    }
    return false;
  };
  return go(0);
}

}  // namespace

TEST(Entry, CommutativitySensitive) {
  Term t = T("f((a#1 /\\ b#2)#3)#4");
  EXPECT_EQ(entry_of("r", t).ids, (std::vector<Id>{4, 1, 2}));
  Term t2 = Term::compound_exact("f", {Term::compound_exact("/\\", {T("b#2"), T("a#1")}, 3)}, 4);
  EXPECT_EQ(entry_of("r", t2).ids, (std::vector<Id>{4, 2, 1}));
  EXPECT_EQ(entry_of("r", t).to_string(), "(r @ (4 1 2))");
}

TEST(Entry, AssociativityInsensitive) {
  Term nested = Term::compound_exact(
      "/\\", {T("p#1"), Term::compound_exact("/\\", {T("q#2"), T("r#3")}, 9)}, 8);
  Term flat = T("(p#1 /\\ q#2 /\\ r#3)#8");
  EXPECT_EQ(entry_of("x", nested).ids, entry_of("x", flat).ids);
}

TEST(Entry, TransitivityHead) {
  Term inst = Term::compound_exact("/\\", {T("leq(A#1,B#2)#3"), T("leq(B#5,A#6)#7")}, 4);
  EXPECT_EQ(entry_of("trans", inst).ids, (std::vector<Id>{3, 1, 2, 7, 5, 6}));
  Term flipped = Term::compound_exact("/\\", {T("leq(B#6,A#5)#7"), T("leq(A#1,B#2)#3")}, 4);
  EXPECT_EQ(entry_of("trans", flipped).ids, (std::vector<Id>{7, 6, 5, 3, 1, 2}));
}

TEST(Entry, VariantsCoverBindingOrders) {
  Term head = T("f(X)");
  Term inst = T("f((a#1 /\\ b#2)#3)#4");
  auto vs = entry_variants(head, inst);
  ASSERT_EQ(vs.size(), 2u);
  EXPECT_EQ(vs[0], (std::vector<Id>{4, 1, 2}));
  EXPECT_EQ(vs[1], (std::vector<Id>{4, 2, 1}));
}

TEST(History, CloningBodyCopiesEntries) {
  History h0{{"r", {1, 2}}};
  Term head_inst = T("f((a#1 /\\ b#2)#3)#4");
  Term body_inst = T("g((a#5 /\\ b#6)#7, (a#8 /\\ b#9)#10)#11");
  History h1 = update_history(T("f(X)"), head_inst, T("g(X,X)"), body_inst, h0);
  EXPECT_EQ(h1, (History{{"r", {1, 2}}, {"r", {5, 6}}, {"r", {8, 9}}}));
}

TEST(History, NoHeadVariablesLeavesHistory) {
  History h0{{"r", {1, 2}}};
  EXPECT_EQ(update_history(T("f(a)"), T("f(a#1)#2"), T("g(b)"), T("g(b#3)#4"), h0), h0);
}

TEST(History, IdempotenceAddsOneRenamedEntry) {
  History h0{{"trans", {3, 1, 2, 7, 5, 6}}};
  Term head_inst = Term::compound_exact("/\\", {T("leq(A#5,A#6)#7"), T("leq(A#9,A#10)#11")});
  History h1 = update_history(T("X /\\ X"), head_inst, T("X"), T("leq(A#16,A#17)#18"), h0);
  EXPECT_EQ(h1, (History{{"trans", {3, 1, 2, 7, 5, 6}}, {"trans", {3, 1, 2, 18, 16, 17}}}));
}

TEST(History, EngineCloningIsIsomorphic) {
  Program p = parse_program("r @ f(X) <=> g(X, X).");
  EngineState st = initial_state(T("f(a /\\ b)"));
  // Seed the history with the entry for the pair a, b.
  Id a = st.goal.arg(0).arg(0).id();
  Id b = st.goal.arg(0).arg(1).id();
  st.history.insert({"r", {a, b}});
  ASSERT_TRUE(step(st, p).has_value());
  History expected{{"r", {1, 2}}, {"r", {5, 6}}, {"r", {8, 9}}};
  EXPECT_TRUE(isomorphic(st.history, expected));
  EXPECT_EQ(strip(st.goal), T("g(a /\\ b, a /\\ b)"));
}

TEST(History, EngineIdempotenceRenamesOnce) {
  Program p = parse_program("idem @ X /\\ X <=> X.");
  EngineState st =
      initial_state(T("(leq(A#1,A#2)#3 /\\ leq(A#5,A#6)#7 /\\ leq(A#9,A#10)#11)#4"));
  st.history.insert({"trans", {3, 1, 2, 7, 5, 6}});
  // Fire on the copies with identifiers 7 and 11.
  std::optional<Firing> chosen;
  find_firings(st, p, [&](const Firing& f) {
    if (f.redex.selection == std::vector<std::size_t>{1, 2}) {
      chosen = f;
      return true;
    }
    return false;
  });
  ASSERT_TRUE(chosen);
  fire(st, *chosen, 1);
  ASSERT_EQ(st.history.size(), 2u);
  History expected{{"trans", {3, 1, 2, 7, 5, 6}}, {"trans", {3, 1, 2, 18, 16, 17}}};
  EXPECT_TRUE(isomorphic(st.history, expected));
}

TEST(Step, NoRules) {
  EngineState st = initial_state(T("a"));
  EXPECT_FALSE(step(st, Program{}).has_value());
}

TEST(Step, FirstPropagationOfLeqGoal) {
  Program p = load_corpus("leq.acd");
  EngineState st = initial_state(T("leq(X,Y) /\\ leq(Y,Z) /\\ ~leq(X,Z)"));
  auto s = step(st, p);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->rule, "transitivity");
  EXPECT_EQ(s->kind, StepKind::Propagate);
  EXPECT_TRUE(ac_equal(strip(s->goal_after),
                       T("leq(X,Y) /\\ leq(Y,Z) /\\ leq(X,Z) /\\ ~leq(X,Z)")));
  ASSERT_EQ(st.history.size(), 1u);
  EXPECT_EQ(st.history.begin()->ids.size(), 6u);
}

TEST(Step, AntisymmetryViaContext) {
  Program p = parse_program("antisymmetry @ leq(X,Y) \\ leq(Y,X) <=> X = Y.");
  EngineState st = initial_state(T("leq(A,B) /\\ leq(B,A)"));
  auto next = successors(st, p);
  bool found = false;
  for (const auto& [s, t] : next) {
    EXPECT_EQ(t.kind, StepKind::Simpagate);
    found |= ac_equal(strip(s.goal), T("leq(A,B) /\\ A = B"));
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(next.size(), 2u);
}

TEST(Run, EmptyProgram) {
  RunResult r = run(Program{}, T("a"));
  EXPECT_EQ(r.status, RunStatus::NormalForm);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(strip(r.final_state.goal), T("a"));
  EXPECT_TRUE(is_annotated(r.final_state.goal));
}

TEST(Run, LeqDerivation) {
  RunResult r = run(load_corpus("leq.acd"), T("leq(X,Y) /\\ leq(Y,Z) /\\ ~leq(X,Z)"));
  EXPECT_EQ(r.status, RunStatus::NormalForm);
  EXPECT_EQ(strip(r.final_state.goal), T("false"));
  EXPECT_EQ(kinds(r.trace), (std::vector<StepKind>{StepKind::Propagate, StepKind::Simpagate,
                                                   StepKind::Simplify, StepKind::Simplify,
                                                   StepKind::Simplify, StepKind::Simplify}));
  EXPECT_EQ(r.trace[1].rule, "idempotence");
}

TEST(Run, Unification) {
  RunResult r = run(load_corpus("unify.acd"), T("X = Y /\\ f(f(X)) = X /\\ Y = f(f(f(Y)))"));
  EXPECT_EQ(r.status, RunStatus::NormalForm);
  EXPECT_TRUE(ac_equal(strip(r.final_state.goal), T("X = Y /\\ Y = f(Y) /\\ true")));
  auto names = rule_names(r.trace);
  for (auto& n : names) {
    if (n.starts_with("split")) n = "split";
  }
  std::vector<std::string> want{"flip", "vsubs", "vsubs", "tsubs", "split", "split",
                                 "tsubs", "split", "tsubs", "split", "id"};
  std::sort(names.begin(), names.end());
  std::sort(want.begin(), want.end());
  EXPECT_EQ(names, want);
}

TEST(Run, Golfers) {
  RunResult r = run(load_corpus("golfers.acd"),
                    T("maxOverlap(g1,g2,0) /\\ maximise(holds(maxOverlap(g1,g2,1)))"));
  EXPECT_TRUE(ac_equal(strip(r.final_state.goal), T("maxOverlap(g1,g2,0) /\\ maximise(1)")));
}

TEST(Run, ContextChangeRenormalises) {
  Program p = load_corpus("subst.acd");
  RunResult r = run(p, T("not_one(A) /\\ one(A)"));
  EXPECT_TRUE(ac_equal(strip(r.final_state.goal), T("(A = 1) /\\ false")));
  p.rules.push_back(parse_program("false_and @ false /\\ X <=> false.").rules[0]);
  RunResult r2 = run(p, T("not_one(A) /\\ one(A)"));
  EXPECT_EQ(strip(r2.final_state.goal), T("false"));
}

TEST(Run, GuardedTransitivityStopsAfterTwoPropagations) {
  Program p = parse_program("trans @ leq(X,Y) /\\ leq(Y,Z) ==> X !== Y /\\ Y !== Z | leq(X,Z).");
  RunResult r = run(p, T("leq(A,B) /\\ leq(B,A)"));
  EXPECT_EQ(r.status, RunStatus::NormalForm);
  ASSERT_EQ(r.trace.size(), 2u);
  for (const auto& s : r.trace) EXPECT_EQ(s.kind, StepKind::Propagate);
  EXPECT_EQ(r.trace[0].entry, (std::vector<Id>{3, 1, 2, 7, 5, 6}));
  EXPECT_EQ(r.trace[1].entry, (std::vector<Id>{7, 5, 6, 3, 1, 2}));
  EXPECT_TRUE(ac_equal(strip(r.final_state.goal),
                       T("leq(A,B) /\\ leq(B,A) /\\ leq(A,A) /\\ leq(B,B)")));
}

TEST(Run, BudgetExhaustion) {
  Program p = parse_program("grow @ p(X) <=> p(f(X)).");
  RunResult r = run(p, T("p(a)"), {25});
  EXPECT_EQ(r.status, RunStatus::BudgetExhausted);
  EXPECT_EQ(r.trace.size(), 25u);
  RunResult none = run(p, T("q"), {0});
  EXPECT_EQ(none.status, RunStatus::NormalForm);
}

TEST(Run, BodyOnlyVariablesAreFresh) {
  Program p = parse_program("intro @ p(X) <=> q(X, Y) /\\ r(Y).");
  RunResult r = run(p, T("p(a) /\\ p(b)"));
  auto vars = vars_of(r.final_state.goal);
  EXPECT_EQ(vars.size(), 2u);
  for (const auto& v : vars) EXPECT_TRUE(v.starts_with("_G"));
}

// Invariants over random goals of every corpus program.
TEST(Run, CorpusInvariants) {
  std::mt19937 rng(31);
  for (const auto& file : acd::testing::kCorpus) {
    Program p = load_corpus(file);
    auto sig = acd::testing::signature_for(file);
    for (int i = 0; i < 40; ++i) {
      Term goal = acd::testing::random_goal(sig, rng);
      RunResult r = run(p, goal, {500});
      ASSERT_EQ(r.status, RunStatus::NormalForm) << file << ": " << pretty(goal);
      std::set<HistoryEntry> fired;
      Id high = initial_state(goal).ids.peek();
      for (const auto& s : r.trace) {
        if (s.kind == StepKind::Propagate) {
          EXPECT_TRUE(fired.insert({s.rule, s.entry}).second) << "propagation fired twice";
        }
        auto got = ids(s.goal_after);
        std::set<Id> distinct(got.begin(), got.end());
        EXPECT_EQ(distinct.size(), got.size()) << "duplicate identifiers";
        EXPECT_EQ(got.size(), node_count(s.goal_after)) << "unannotated node";
        Id max_now = *std::max_element(got.begin(), got.end());
        high = std::max(high, max_now + 1);
      }
      EXPECT_LE(high, r.final_state.ids.peek());
      auto initial = vars_of(goal);
      for (const auto& v : vars_of(r.final_state.goal)) {
        EXPECT_TRUE(initial.contains(v) || v.starts_with("_G")) << v;
      }
      // No transition applies to the final goal.
      EXPECT_TRUE(successors(r.final_state, p).empty()) << file << ": " << pretty(goal);
    }
  }
}

// New identifiers always come from above every identifier used so far.
TEST(Run, FreshIdentifiersNeverReused) {
  std::mt19937 rng(37);
  for (const auto& file : {"leq.acd", "unify.acd", "idem.acd"}) {
    Program p = load_corpus(file);
    auto sig = acd::testing::signature_for(file);
    for (int i = 0; i < 30; ++i) {
      EngineState st = initial_state(acd::testing::random_goal(sig, rng));
      std::set<Id> seen;
      for (Id id : ids(st.goal)) seen.insert(id);
      for (int k = 0; k < 50; ++k) {
        Id before = st.ids.peek();
        auto s = step(st, p);
        if (!s) break;
        for (Id id : ids(st.goal)) {
          if (!seen.contains(id)) EXPECT_GE(id, before);
          seen.insert(id);
        }
      }
    }
  }
}
