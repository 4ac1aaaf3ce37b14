#include <sstream>

#include "acdterm/syntax.hpp"
#include "operators.hpp"

namespace acd {
namespace {

bool is_infix(const Term& t) {
  if (!t.is_compound()) return false;
  const OperatorInfo* op = binary_operator(t.name());
  if (!op) return false;
  return op->ac ? t.arity() >= 2 : t.arity() == 2;
}

bool is_prefix(const Term& t) { return t.has_functor("~") && t.arity() == 1; }

int precedence_of(const Term& t) {
  if (is_infix(t)) return binary_operator(t.name())->precedence;
  if (is_prefix(t)) return kPrefixPrecedence;
  return kPrimaryPrecedence;
}

class Printer {
 public:
  explicit Printer(PrettyOptions options) : opt_(options) {}

  void print(std::ostream& os, const Term& t, int required) {
    bool op_node = is_infix(t) || is_prefix(t);
    bool with_id = opt_.print_ids && t.id() != 0;
    bool parens = precedence_of(t) < required || (with_id && op_node);
    if (parens) os << '(';
    body(os, t);
    if (parens) os << ')';
    if (with_id) os << '#' << t.id();
  }

 private:
  void body(std::ostream& os, const Term& t) {
    if (t.is_variable()) {
      os << t.name();
      return;
    }
    if (t.is_number()) {
      os << t.value();
      return;
    }
    if (is_infix(t)) {
      int prec = binary_operator(t.name())->precedence;
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ' ' << t.name() << ' ';
        print(os, t.arg(i), prec + 1);
      }
      return;
    }
    if (is_prefix(t)) {
      os << '~';
      print(os, t.arg(0), kPrefixPrecedence);
      return;
    }
    os << t.name();
    if (t.arity() == 0) return;
    os << '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
      if (i) os << ',';
      print(os, t.arg(i), 0);
    }
    os << ')';
  }

  PrettyOptions opt_;
};

}  // namespace

std::string pretty(const Term& t, PrettyOptions options) {
  std::ostringstream os;
  Printer(options).print(os, t, 0);
  return os.str();
}

std::string pretty(const Rule& rule) {
  std::ostringstream os;
  os << rule.name << " @ ";
  if (rule.context) os << pretty(*rule.context) << " \\ ";
  os << pretty(rule.head)
     << (rule.kind == RuleKind::Propagation ? " ==> " : " <=> ");
  if (!rule.guard.is_atom("true")) os << pretty(rule.guard) << " | ";
  os << pretty(rule.body) << '.';
  return os.str();
}

}  // namespace acd
