#include "catdel/syntax.hpp"

#include <cctype>
#include <set>
#include <vector>

#include "catdel/error.hpp"

namespace catdel {

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LAngle,
  RAngle,
  Bang,
  Comma,
  Dot,
  Tilde,
  Amp,
  Bar,
  Arrow,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

const std::set<std::string, std::less<>> kKeywords = {"true", "false", "forall", "exists",
                                                       "ctx"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(src.substr(i, len)), line, col});
    i += len;
    col += len;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      push(Tok::Ident, j - i);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      push(Tok::Arrow, 2);
      continue;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBrack; break;
      case ']': k = Tok::RBrack; break;
      case '<': k = Tok::LAngle; break;
      case '>': k = Tok::RAngle; break;
      case '!': k = Tok::Bang; break;
      case ',': k = Tok::Comma; break;
      case '.': k = Tok::Dot; break;
      case '~': k = Tok::Tilde; break;
      case '&': k = Tok::Amp; break;
      case '|': k = Tok::Bar; break;
      default: throw ParseError(line, col, "a formula token", std::string(1, c));
    }
    push(k, 1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  bool at_context_prefix() const { return is_keyword("ctx"); }

  FormulaInContext context_formula() {
    expect_keyword("ctx");
    std::vector<std::string> vars;
    if (peek().kind != Tok::Bar) {
      vars.push_back(variable_name());
      while (accept(Tok::Comma)) vars.push_back(variable_name());
    }
    expect(Tok::Bar, "'|'");
    Formula body = implication();
    return FormulaInContext{std::move(vars), std::move(body)};
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept(Tok::Arrow)) return Formula::imp(lhs, implication());
    return lhs;
  }

  Term term() {
    std::string name = identifier("a term");
    if (!accept(Tok::LParen)) return Term::var(std::move(name));
    return Term::apply(std::move(name), term_list());
  }

  void finish() {
    if (peek().kind != Tok::End) error("end of input");
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  bool is_keyword(std::string_view kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  [[noreturn]] void error(const std::string& expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, expected, t.text);
  }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  void expect(Tok k, const std::string& what) {
    if (!accept(k)) error(what);
  }

  void expect_keyword(std::string_view kw) {
    if (!is_keyword(kw)) error("'" + std::string(kw) + "'");
    ++pos_;
  }

  std::string identifier(const std::string& what) {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) error(what);
    return next().text;
  }

  std::string variable_name() { return identifier("a variable"); }

  std::vector<Term> term_list() {
    std::vector<Term> args;
    if (accept(Tok::RParen)) return args;
    args.push_back(term());
    while (accept(Tok::Comma)) args.push_back(term());
    expect(Tok::RParen, "',' or ')'");
    return args;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (accept(Tok::Bar)) lhs = Formula::disj(lhs, conjunction());
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (accept(Tok::Amp)) lhs = Formula::conj(lhs, unary());
    return lhs;
  }

  Formula unary() {
    if (accept(Tok::Tilde)) return Formula::neg(unary());
    if (accept(Tok::LBrack)) {
      if (accept(Tok::Bang)) {
        Formula sigma = implication();
        expect(Tok::RBrack, "']'");
        return Formula::pal_box(sigma, unary());
      }
      std::string first = identifier("an agent or event model");
      if (accept(Tok::Comma)) {
        std::string event = identifier("an event");
        expect(Tok::RBrack, "']'");
        return Formula::del_box(first, event, unary());
      }
      expect(Tok::RBrack, "']' or ','");
      return Formula::box(first, unary());
    }
    if (accept(Tok::LAngle)) {
      if (accept(Tok::Bang)) {
        Formula sigma = implication();
        expect(Tok::RAngle, "'>'");
        return Formula::pal_dia(sigma, unary());
      }
      std::string first = identifier("an agent or event model");
      if (accept(Tok::Comma)) {
        std::string event = identifier("an event");
        expect(Tok::RAngle, "'>'");
        return Formula::del_dia(first, event, unary());
      }
      expect(Tok::RAngle, "'>' or ','");
      return Formula::dia(first, unary());
    }
    if (is_keyword("forall") || is_keyword("exists")) {
      const bool universal = next().text == "forall";
      std::string var = variable_name();
      expect(Tok::Dot, "'.'");
      Formula body = implication();
      return universal ? Formula::forall(var, body) : Formula::exists(var, body);
    }
    return primary();
  }

  Formula primary() {
    if (accept(Tok::LParen)) {
      Formula f = implication();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (is_keyword("true")) {
      ++pos_;
      return Formula::top();
    }
    if (is_keyword("false")) {
      ++pos_;
      return Formula::bot();
    }
    std::string name = identifier("a formula");
    if (accept(Tok::LParen)) return Formula::pred(std::move(name), term_list());
    return Formula::atom(std::move(name));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(Op op) {
  switch (op) {
    case Op::Forall:
    case Op::Exists: return 0;
    case Op::Imp: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    default: return 4;
  }
}

std::string print(const Formula& f);

std::string wrap(const Formula& f, int min_prec) {
  std::string s = print(f);
  return precedence(f.op()) < min_prec ? "(" + s + ")" : s;
}

std::string print(const Formula& f) {
  switch (f.op()) {
    case Op::Top: return "true";
    case Op::Bot: return "false";
    case Op::Atom: return f.name();
    case Op::Pred: {
      std::string out = f.name() + "(";
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) out += ",";
        out += print_term(f.terms()[i]);
      }
      return out + ")";
    }
    case Op::Not: return "~" + wrap(f.body(), 4);
    case Op::And: return wrap(f.kid(0), 3) + " & " + wrap(f.kid(1), 4);
    case Op::Or: return wrap(f.kid(0), 2) + " | " + wrap(f.kid(1), 3);
    case Op::Imp: return wrap(f.kid(0), 2) + " -> " + wrap(f.kid(1), 1);
    case Op::Box: return "[" + f.name() + "]" + wrap(f.body(), 4);
    case Op::Dia: return "<" + f.name() + ">" + wrap(f.body(), 4);
    case Op::PalBox: return "[!" + print(f.announcement()) + "]" + wrap(f.body(), 4);
    case Op::PalDia: return "<!" + print(f.announcement()) + ">" + wrap(f.body(), 4);
    case Op::DelBox: return "[" + f.name() + "," + f.event() + "]" + wrap(f.body(), 4);
    case Op::DelDia: return "<" + f.name() + "," + f.event() + ">" + wrap(f.body(), 4);
    case Op::Forall: return "forall " + f.name() + " . " + print(f.body());
    case Op::Exists: return "exists " + f.name() + " . " + print(f.body());
  }
  return {};
}

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Formula f = p.implication();
  p.finish();
  return f;
}

Term parse_term(std::string_view text) {
  Parser p(text);
  Term t = p.term();
  p.finish();
  return t;
}

FormulaInContext parse_in_context(std::string_view text) {
  Parser p(text);
  FormulaInContext f = p.context_formula();
  p.finish();
  return f;
}

std::variant<Formula, FormulaInContext> parse_any(std::string_view text) {
  Parser p(text);
  if (p.at_context_prefix()) {
    FormulaInContext f = p.context_formula();
    p.finish();
    return f;
  }
  Formula f = p.implication();
  p.finish();
  return f;
}

std::string print_term(const Term& t) {
  if (t.is_variable()) return t.name();
  std::string out = t.name() + "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ",";
    out += print_term(t.args()[i]);
  }
  return out + ")";
}

std::string print_formula(const Formula& f) { return print(f); }

std::string print_formula(const FormulaInContext& f) {
  std::string out = "ctx";
  for (std::size_t i = 0; i < f.context.size(); ++i) out += (i ? ", " : " ") + f.context[i];
  return out + " | " + print(f.body);
}

}  // namespace catdel
