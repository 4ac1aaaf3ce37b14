#pragma once

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "acdterm/engine.hpp"
#include "acdterm/syntax.hpp"

namespace acd::testing {

inline const std::vector<std::string> kCorpus = {
    "leq.acd",  "unify.acd", "subst.acd", "golfers.acd",
    "empty.acd", "bool.acd", "idem.acd",      "units.acd"};

std::string corpus_path(const std::string& file);
Program load_corpus(const std::string& file);
Term T(std::string_view text);

// Symbol with one character per argument: 'a' for an atom-level argument,
// 't' for a term-level one.
struct Symbol {
  std::string name;
  std::string args;
};

struct Signature {
  std::vector<Symbol> atoms;
  std::vector<std::string> atom_leaves;
  std::vector<Symbol> funcs;
  std::vector<std::string> leaves;
  std::size_t max_conjuncts = 3;
};

Signature signature_for(const std::string& corpus_file);

/// Conjunction of 1..max_conjuncts random atoms, at most max_nodes stored
/// nodes.
Term random_goal(const Signature& sig, std::mt19937& rng, std::size_t max_nodes = 10);

// Direct normalisers for the three ground ACTRS corpus programs.
Term reference_bool(const Term& t);
Term reference_idem(const Term& t);
Term reference_units(const Term& t);

/// Runs a shell command; returns stdout and sets rc to the exit status.
std::string run_command(const std::string& cmd, int& rc);

}  // namespace acd::testing
