#include "fractlang/parser.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "fractlang/error.hpp"

namespace fractlang {

namespace {

enum class Tok { kIdent, kMu, kDot, kPlus, kLParen, kRParen, kLBracket, kRBracket, kNumber, kEnd };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd:
      return "end of input";
    case Tok::kIdent:
      return "identifier '" + t.text + "'";
    case Tok::kNumber:
      return "number '" + t.text + "'";
    default:
      return "'" + t.text + "'";
  }
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const SourcePos start = pos;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word(src.substr(i, j - i));
      advance(j - i);
      out.push_back({word == "mu" ? Tok::kMu : Tok::kIdent, std::move(word), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      std::size_t j = i + 1;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '/' ||
                                src[j] == '.')) {
        ++j;
      }
      std::string lit(src.substr(i, j - i));
      advance(j - i);
      out.push_back({Tok::kNumber, std::move(lit), start});
      continue;
    }
    Tok kind;
    switch (c) {
      case '.': kind = Tok::kDot; break;
      case '+': kind = Tok::kPlus; break;
      case '(': kind = Tok::kLParen; break;
      case ')': kind = Tok::kRParen; break;
      case '[': kind = Tok::kLBracket; break;
      case ']': kind = Tok::kRBracket; break;
      default:
        throw SyntaxError(start, {"a term"}, "character '" + std::string(1, c) + "'");
    }
    out.push_back({kind, std::string(1, c), start});
    advance(1);
  }
  out.push_back({Tok::kEnd, "", pos});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, Flavor flavor, const ParseOptions& options)
      : toks_(std::move(tokens)), flavor_(flavor), options_(options) {}

  Expr parse() {
    Expr e = term();
    if (peek().kind != Tok::kEnd) fail({plus_name(), "end of input"});
    // Syntax and range errors anywhere in the input take precedence.
    if (violation_) throw *violation_;
    return e;
  }

 private:
  struct Binder {
    std::string name;
    std::size_t prefixes;
  };

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(peek().pos, std::move(expected), describe(peek()));
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail({what});
    return take();
  }

  std::string plus_name() const { return flavor_ == Flavor::kClassic ? "'+'" : "'+[r]'"; }

  Expr term() {
    if (peek().kind == Tok::kMu) return mu();
    return sum();
  }

  Expr mu() {
    expect(Tok::kMu, "'mu'");
    const Token& var = expect(Tok::kIdent, "variable");
    std::string name = var.text;
    expect(Tok::kDot, "'.'");
    scope_.push_back({name, prefixes_});
    Expr body = term();
    scope_.pop_back();
    return Expr::mu_abstracted(std::move(name), std::move(body));
  }

  Expr sum() {
    Expr acc = summand();
    while (peek().kind == Tok::kPlus) {
      take();
      if (flavor_ == Flavor::kClassic) {
        if (peek().kind == Tok::kLBracket) fail({"a summand (probabilities belong in probabilistic terms)"});
        acc = Expr::sum(std::move(acc), summand());
      } else {
        Rational p = probability();
        acc = Expr::choice(std::move(acc), std::move(p), summand());
      }
    }
    return acc;
  }

  Rational probability() {
    expect(Tok::kLBracket, "'[' opening a probability");
    const Token& lit = expect(Tok::kNumber, "probability literal");
    Rational p;
    if (!parse_rational(lit.text, p)) {
      throw SyntaxError(lit.pos, {"probability literal p/q or decimal"}, describe(lit));
    }
    if (p < 0 || p > 1) throw ProbabilityRangeError(lit.text, lit.pos);
    expect(Tok::kRBracket, "']'");
    return p;
  }

  Expr summand() { return body(); }

  Expr body() {
    const Token& t = peek();
    if (t.kind == Tok::kMu) return mu();
    if (t.kind == Tok::kIdent && peek(1).kind == Tok::kDot) {
      const Token& action = take();
      if (!is_action_label(action.text)) {
        throw SyntaxError(action.pos, {"action label (lowercase alphanumeric)"}, describe(action));
      }
      take();  // '.'
      ++prefixes_;
      Expr b = body();
      --prefixes_;
      return Expr::prefix(action.text, std::move(b));
    }
    return atom();
  }

  Expr atom() {
    const Token& t = peek();
    if (t.kind == Tok::kLParen) {
      take();
      Expr inner = term();
      expect(Tok::kRParen, "')'");
      return inner;
    }
    if (t.kind == Tok::kIdent) {
      take();
      return variable(t);
    }
    fail({"action prefix", "variable", "'('", "'mu'"});
  }

  Expr variable(const Token& t) {
    for (std::size_t k = scope_.size(); k-- > 0;) {
      if (scope_[k].name != t.text) continue;
      if (options_.require_guarded && prefixes_ <= scope_[k].prefixes) {
        note(WellFormednessError(WellFormedness::kUnguarded, t.text, t.pos));
      }
      return Expr::bound_var(scope_.size() - 1 - k);
    }
    if (options_.require_closed) note(WellFormednessError(WellFormedness::kFreeVariable, t.text, t.pos));
    return Expr::free_var(t.text);
  }

  void note(WellFormednessError e) {
    if (!violation_) violation_.emplace(std::move(e));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Flavor flavor_;
  ParseOptions options_;
  std::vector<Binder> scope_;
  std::size_t prefixes_ = 0;
  std::optional<WellFormednessError> violation_;
};

}  // namespace

bool is_action_label(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) return false;
  for (char c : s) {
    if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)))) {
      return false;
    }
  }
  return true;
}

Expr parse_expr(std::string_view text, Flavor flavor, const ParseOptions& options) {
  return Parser(lex(text), flavor, options).parse();
}

Term parse_term(std::string_view text, const ParseOptions& options) {
  return Term(parse_expr(text, Flavor::kClassic, options));
}

PTerm parse_pterm(std::string_view text, const ParseOptions& options) {
  return PTerm(parse_expr(text, Flavor::kProbabilistic, options));
}

}  // namespace fractlang
