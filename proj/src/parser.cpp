#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

#include "acdterm/syntax.hpp"
#include "operators.hpp"

namespace acd {

static std::string located(const std::string& message, std::size_t line,
                           std::size_t column) {
  std::ostringstream os;
  os << line << ':' << column << ": " << message;
  return os.str();
}

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : std::runtime_error(located(message, line, column)),
      line_(line),
      column_(column),
      detail_(message) {}

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::Simplification:
      return "simplification";
    case RuleKind::Propagation:
      return "propagation";
    case RuleKind::Simpagation:
      return "simpagation";
  }
  return "?";
}

const Rule* Program::find(std::string_view name) const {
  auto it = std::find_if(rules.begin(), rules.end(),
                         [&](const Rule& r) { return r.name == name; });
  return it == rules.end() ? nullptr : &*it;
}

namespace {

enum class Tok { Ident, Var, Int, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

// Longest match first.
constexpr std::array<std::string_view, 22> kSymbols = {
    "<=>", "==>", "!==", "!=", "<=", ">=", "\\/", "/\\", "<", ">", "=", "+",
    "*",   "~",   "\\",  "(",  ")",  ",",  ".",   "@",   "|", "#"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  Token next() {
    std::size_t line = line_, col = col_;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
        ++end;
      }
      std::string text(src_.substr(pos_, end - pos_));
      advance(end - pos_);
      bool is_var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      return {is_var ? Tok::Var : Tok::Ident, std::move(text), line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
      std::string text(src_.substr(pos_, end - pos_));
      advance(end - pos_);
      return {Tok::Int, std::move(text), line, col};
    }
    for (auto sym : kSymbols) {
      if (src_.substr(pos_, sym.size()) == sym) {
        advance(sym.size());
        return {Tok::Symbol, std::string(sym), line, col};
      }
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Term term_only() {
    Term t = expr(0);
    expect_end();
    return t;
  }

  Program program() {
    Program prog;
    while (peek().kind != Tok::End) prog.rules.push_back(rule(prog.rules.size() + 1));
    return prog;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(i_ + ahead, toks_.size() - 1)];
  }
  const Token& take() { return toks_[std::min(i_++, toks_.size() - 1)]; }
  bool at_symbol(std::string_view s) const {
    return peek().kind == Tok::Symbol && peek().text == s;
  }
  [[noreturn]] void fail(const std::string& what, const Token& at) const {
    std::string found = at.kind == Tok::End ? "end of input" : "'" + at.text + "'";
    throw ParseError(what + ", found " + found, at.line, at.column);
  }
  void expect(std::string_view s) {
    if (!at_symbol(s)) fail("expected '" + std::string(s) + "'", peek());
    take();
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("expected end of term", peek());
  }

  Rule rule(std::size_t index) {
    Rule r;
    r.line = peek().line;
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Symbol && peek(1).text == "@") {
      r.name = take().text;
      take();
    } else {
      r.name = "rule_" + std::to_string(index);
    }
    Term first = expr(0);
    if (at_symbol("\\")) {
      take();
      r.kind = RuleKind::Simpagation;
      r.context = first;
      r.head = expr(0);
      if (!at_symbol("<=>")) fail("expected '<=>' after simpagation head", peek());
      take();
    } else {
      r.head = first;
      if (at_symbol("<=>")) {
        r.kind = RuleKind::Simplification;
      } else if (at_symbol("==>")) {
        r.kind = RuleKind::Propagation;
      } else {
        fail("expected '<=>', '==>' or '\\'", peek());
      }
      take();
    }
    Term second = expr(0);
    if (at_symbol("|")) {
      take();
      r.guard = second;
      r.body = expr(0);
    } else {
      r.body = second;
    }
    expect(".");
    return r;
  }

  Term expr(int min_prec) {
    Term left = unary();
    for (;;) {
      const Token& t = peek();
      if (t.kind != Tok::Symbol) break;
      const OperatorInfo* op = binary_operator(t.text);
      if (!op || op->precedence < min_prec) break;
      Token op_tok = take();
      Term right = expr(op->precedence + 1);
      if (op->ac) {
        left = Term::compound(op_tok.text, {left, right});
      } else {
        left = Term::compound_exact(op_tok.text, {left, right});
        const Token& nt = peek();
        if (nt.kind == Tok::Symbol) {
          const OperatorInfo* next = binary_operator(nt.text);
          if (next && next->precedence == op->precedence) {
            fail("operator '" + op_tok.text + "' is non-associative; add parentheses", nt);
          }
        }
      }
    }
    return left;
  }

  Term unary() {
    if (at_symbol("~")) {
      take();
      Term operand = unary();
      return Term::compound_exact("~", {operand});
    }
    return primary();
  }

  Term primary() {
    Token t = take();
    Term out = Term::atom("true");
    switch (t.kind) {
      case Tok::Var:
        if (t.text == "_") {
          out = Term::variable("_" + std::to_string(++anon_));
        } else {
          out = Term::variable(t.text);
        }
        break;
      case Tok::Int: {
        Integer v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) throw ParseError("integer out of range", t.line, t.column);
        out = Term::number(v);
        break;
      }
      case Tok::Ident: {
        std::vector<Term> args;
        if (at_symbol("(")) {
          take();
          if (at_symbol(")")) fail("expected an argument", peek());
          args.push_back(expr(0));
          while (at_symbol(",")) {
            take();
            args.push_back(expr(0));
          }
          expect(")");
        }
        out = Term::compound_exact(t.text, std::move(args));
        break;
      }
      case Tok::Symbol:
        if (t.text == "(") {
          out = expr(0);
          expect(")");
          break;
        }
        fail("expected a term", t);
      case Tok::End:
        fail("expected a term", t);
    }
    if (at_symbol("#")) {
      take();
      const Token& n = peek();
      if (n.kind != Tok::Int) fail("expected an identifier number after '#'", n);
      Id id = 0;
      std::from_chars(n.text.data(), n.text.data() + n.text.size(), id);
      take();
      out = out.with_id(id);
    }
    return out;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::size_t anon_ = 0;
};

}  // namespace

Term parse_term(std::string_view src) { return Parser(src).term_only(); }

void validate(const Program& program) {
  std::map<std::string, std::size_t> seen;
  for (const auto& r : program.rules) {
    if (auto [it, fresh] = seen.emplace(r.name, r.line); !fresh) {
      throw ParseError("duplicate rule name '" + r.name + "' (first defined on line " +
                           std::to_string(it->second) + ")",
                       r.line, 1);
    }
    if (r.context.has_value() != (r.kind == RuleKind::Simpagation)) {
      throw ParseError("rule '" + r.name + "': context head only allowed in simpagation",
                       r.line, 1);
    }
    auto scope = vars_of(r.head);
    if (r.context) scope.merge(vars_of(*r.context));
    for (const auto& v : vars_of(r.guard)) {
      if (!scope.contains(v)) {
        throw ParseError("rule '" + r.name + "': guard variable " + v +
                             " does not occur in the head",
                         r.line, 1);
      }
    }
  }
}

Program parse_program(std::string_view src) {
  Program p = Parser(src).program();
  validate(p);
  return p;
}

}  // namespace acd
