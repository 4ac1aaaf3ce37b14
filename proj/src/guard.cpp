#include "acdterm/matcher.hpp"

namespace acd {

std::optional<Integer> evaluate(const Term& expr, const Substitution& theta) {
  switch (expr.kind()) {
    case Term::Kind::Number:
      return expr.value();
    case Term::Kind::Variable: {
      const Term* b = theta.find(expr.name());
      if (!b || b->is_variable()) return std::nullopt;
      return evaluate(*b, {});
    }
    case Term::Kind::Compound:
      break;
  }
  if (expr.has_functor("size") && expr.arity() == 1) {
    return static_cast<Integer>(size(apply(theta, expr.arg(0))));
  }
  bool plus = expr.has_functor(kPlus);
  if (!plus && !expr.has_functor(kTimes)) return std::nullopt;
  Integer acc = plus ? 0 : 1;
  for (const auto& a : expr.args()) {
    auto v = evaluate(a, theta);
    if (!v) return std::nullopt;
    bool overflow = plus ? __builtin_add_overflow(acc, *v, &acc)
                         : __builtin_mul_overflow(acc, *v, &acc);
    if (overflow) return std::nullopt;
  }
  return acc;
}

bool guard_holds(const Term& guard, const Substitution& theta) {
  if (!guard.is_compound()) return false;
  if (guard.is_atom("true")) return true;
  if (guard.has_functor(kAnd)) {
    for (const auto& g : guard.args()) {
      if (!guard_holds(g, theta)) return false;
    }
    return true;
  }
  const std::string& f = guard.name();
  if (guard.arity() == 1 && (f == "var" || f == "nonvar")) {
    bool is_var = apply(theta, guard.arg(0)).is_variable();
    return f == "var" ? is_var : !is_var;
  }
  if (guard.arity() != 2) return false;
  if (f == "!==") {
    return !ac_equal(apply(theta, guard.arg(0)), apply(theta, guard.arg(1)));
  }
  if (f != "=" && f != "<=" && f != "<" && f != ">=" && f != ">") return false;
  auto lhs = evaluate(guard.arg(0), theta);
  auto rhs = evaluate(guard.arg(1), theta);
  if (!lhs || !rhs) return false;
  if (f == "=") return *lhs == *rhs;
  if (f == "<=") return *lhs <= *rhs;
  if (f == "<") return *lhs < *rhs;
  if (f == ">=") return *lhs >= *rhs;
  return *lhs > *rhs;
}

}  // namespace acd
