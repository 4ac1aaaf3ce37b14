#pragma once

// Concrete syntax for terms and rule programs.
//
//   name @ Head <=> Guard | Body.          simplification
//   name @ Head ==> Guard | Body.          propagation
//   name @ Ctx \ Head <=> Guard | Body.    simpagation
//
// "name @" and "Guard |" are optional; '%' starts a line comment.
// Operators, loosest first: \/ (100), /\ (200), = != !== <= < >= >
// (300, non-associative), + (400), * (500), prefix ~ (600).
// A primary may carry an identifier suffix "#<n>" (annotated terms).

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acdterm/term.hpp"

namespace acd {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// The message without the "line:column:" prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

enum class RuleKind { Simplification, Propagation, Simpagation };

std::string_view to_string(RuleKind kind);

struct Rule {
  std::string name;
  RuleKind kind = RuleKind::Simplification;
  std::optional<Term> context;  // simpagation only
  Term head = Term::atom("true");
  Term guard = Term::atom("true");
  Term body = Term::atom("true");
  std::size_t line = 0;
};

struct Program {
  std::vector<Rule> rules;

  const Rule* find(std::string_view name) const;
};

Term parse_term(std::string_view src);
Program parse_program(std::string_view src);

/// Checks the rule invariants (guard scope, context presence, unique
/// names). parse_program already calls this; exposed for hand-built rules.
void validate(const Program& program);

struct PrettyOptions {
  bool print_ids = false;
};

/// Minimal-parenthesis rendering that parse_term reads back.
std::string pretty(const Term& t, PrettyOptions options = {});
std::string pretty(const Rule& rule);

}  // namespace acd
