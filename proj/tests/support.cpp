#include "support.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

namespace acd::testing {

std::string corpus_path(const std::string& file) {
  return std::string(ACDTERM_CORPUS_DIR) + "/" + file;
}

Program load_corpus(const std::string& file) {
  std::ifstream in(corpus_path(file));
  if (!in) throw std::runtime_error("missing corpus file " + file);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_program(os.str());
}

Term T(std::string_view text) { return parse_term(text); }

Signature signature_for(const std::string& file) {
  if (file == "leq.acd") return {{{"leq", "tt"}, {"~", "a"}}, {}, {}, {"A", "B", "C"}, 3};
  if (file == "unify.acd") {
    return {{{"=", "tt"}}, {}, {{"f", "t"}, {"g", "tt"}}, {"a", "b", "X", "Y", "Z"}, 3};
  }
  if (file == "subst.acd") {
    return {{{"one", "t"}, {"not_one", "t"}, {"=", "tt"}}, {}, {}, {"A", "B", "1", "2"}, 3};
  }
  if (file == "golfers.acd") {
    return {{{"maxOverlap", "ttt"}, {"maximise", "t"}},
            {"true", "false"},
            {{"holds", "a"}},
            {"g1", "g2", "0", "1", "2"},
            2};
  }
  if (file == "bool.acd") {
    return {{{"/\\", "aa"}, {"\\/", "aa"}, {"~", "a"}}, {"true", "false", "p", "q"}, {}, {}, 1};
  }
  if (file == "idem.acd") {
    return {{{"/\\", "aa"}, {"\\/", "aa"}, {"~", "a"}}, {"p", "q", "r"}, {}, {}, 1};
  }
  if (file == "units.acd") {
    return {{{"+", "aa"}, {"*", "aa"}}, {"0", "1", "2", "a", "b"}, {}, {}, 1};
  }
  return {{{"p", "t"}, {"q", "tt"}}, {}, {}, {"a", "X"}, 3};
}

namespace {

class Generator {
 public:
  Generator(const Signature& sig, std::mt19937& rng) : sig_(sig), rng_(rng) {}

  Term atom(int budget) {
    bool leaf = !sig_.atom_leaves.empty() && (budget <= 1 || coin(0.3));
    if (leaf || sig_.atoms.empty()) return pick_leaf(sig_.atom_leaves);
    return build(pick(sig_.atoms), budget);
  }

  Term term(int budget) {
    if (sig_.funcs.empty() || budget <= 1 || coin(0.5)) return pick_leaf(sig_.leaves);
    return build(pick(sig_.funcs), budget);
  }

  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

 private:
  Term build(const Symbol& s, int budget) {
    std::vector<Term> args;
    int share = std::max(1, (budget - 1) / static_cast<int>(s.args.size()));
    for (char k : s.args) args.push_back(k == 'a' ? atom(share) : term(share));
    return Term::compound(s.name, std::move(args));
  }
  const Symbol& pick(const std::vector<Symbol>& v) { return v[below(v.size())]; }
  Term pick_leaf(const std::vector<std::string>& v) { return parse_term(v[below(v.size())]); }

  const Signature& sig_;
  std::mt19937& rng_;
};

}  // namespace

Term random_goal(const Signature& sig, std::mt19937& rng, std::size_t max_nodes) {
  Generator gen(sig, rng);
  for (;;) {
    std::size_t k = 1 + gen.below(sig.max_conjuncts);
    int budget = static_cast<int>(max_nodes / k);
    std::vector<Term> conj;
    for (std::size_t i = 0; i < k; ++i) conj.push_back(gen.atom(budget));
    Term g = Term::compound(std::string(kAnd), std::move(conj));
    if (node_count(g) <= max_nodes) return g;
  }
}

namespace {

// Normalises children first, flattening AC children of the same functor.
std::vector<Term> normalised_kids(const Term& t, Term (*norm)(const Term&)) {
  std::vector<Term> out;
  for (const auto& a : t.args()) {
    Term n = norm(a);
    if (t.is_ac() && n.is_compound() && n.name() == t.name() && n.arity() > 0) {
      for (const auto& b : n.args()) out.push_back(b);
    } else {
      out.push_back(n);
    }
  }
  return out;
}

Term rebuild(const std::string& f, std::vector<Term> kids, const Term& empty) {
  if (kids.empty()) return empty;
  if (kids.size() == 1) return kids.front();
  return Term::compound(f, std::move(kids));
}

bool is(const Term& t, std::string_view atom) { return t.is_atom(atom); }

}  // namespace

Term reference_bool(const Term& t0) {
  Term t = strip(t0);
  if (!t.is_compound() || t.arity() == 0) return t;
  auto kids = normalised_kids(t, reference_bool);
  if (t.name() == "~") {
    if (is(kids[0], "true")) return Term::atom("false");
    if (is(kids[0], "false")) return Term::atom("true");
    return Term::compound("~", kids);
  }
  bool conj = t.name() == "/\\";
  bool disj = t.name() == "\\/";
  if (!conj && !disj) return Term::compound(t.name(), kids);
  std::string_view absorbing = conj ? "false" : "true";
  std::string_view unit = conj ? "true" : "false";
  std::vector<Term> keep;
  for (const auto& k : kids) {
    if (is(k, absorbing)) return Term::atom(std::string(absorbing));
    if (!is(k, unit)) keep.push_back(k);
  }
  return rebuild(t.name(), keep, Term::atom(std::string(unit)));
}

Term reference_idem(const Term& t0) {
  Term t = strip(t0);
  if (!t.is_compound() || t.arity() == 0) return t;
  auto kids = normalised_kids(t, reference_idem);
  if (t.name() == "~") {
    if (kids[0].has_functor("~") && kids[0].arity() == 1) return kids[0].arg(0);
    return Term::compound("~", kids);
  }
  if (!t.is_ac()) return Term::compound(t.name(), kids);
  std::vector<Term> keep;
  for (const auto& k : kids) {
    bool dup = false;
    for (const auto& s : keep) dup |= ac_equal(s, k);
    if (!dup) keep.push_back(k);
  }
  return rebuild(t.name(), keep, Term::atom("true"));
}

Term reference_units(const Term& t0) {
  Term t = strip(t0);
  if (!t.is_compound() || t.arity() == 0) return t;
  auto kids = normalised_kids(t, reference_units);
  bool plus = t.name() == "+";
  bool times = t.name() == "*";
  if (!plus && !times) return Term::compound(t.name(), kids);
  auto is_num = [](const Term& k, Integer v) { return k.is_number() && k.value() == v; };
  std::vector<Term> keep;
  for (const auto& k : kids) {
    if (times && is_num(k, 0)) return Term::number(0);
    if (!is_num(k, plus ? 0 : 1)) keep.push_back(k);
  }
  return rebuild(t.name(), keep, Term::number(plus ? 0 : 1));
}

std::string run_command(const std::string& cmd, int& rc) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

}  // namespace acd::testing
