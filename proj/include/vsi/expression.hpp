#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "vsi/rational_function.hpp"

namespace vsi {

// ---------------------------------------------------------------------------
// Parsing.  Grammar (no implicit multiplication, no function symbols):
//   expr     := term (("+" | "-") term)*
//   term     := factor (("*" | "/") factor)*
//   factor   := base ("^" uint)?
//   base     := rational | identifier | "(" expr ")" | "-" base
//   rational := uint ("/" uint)?
// A '/' between integer literals is handled by the term rule; the result is
// identical to lexing a rational literal because '^' binds to the base only.
// Note "-v^2" parses as (-v)^2 per the grammar; the printer never emits that
// shape for a negative monomial.
// ---------------------------------------------------------------------------

namespace detail {

struct ExprToken {
  enum Type { Int, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Type type;
  std::string text;
  std::size_t offset;
};

inline std::vector<ExprToken> lex_expression(const std::string& src) {
  std::vector<ExprToken> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      out.push_back({ExprToken::Int, src.substr(start, i - start), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      out.push_back({ExprToken::Ident, src.substr(start, i - start), start});
      continue;
    }
    ExprToken::Type t;
    switch (c) {
      case '+': t = ExprToken::Plus; break;
      case '-': t = ExprToken::Minus; break;
      case '*': t = ExprToken::Star; break;
      case '/': t = ExprToken::Slash; break;
      case '^': t = ExprToken::Caret; break;
      case '(': t = ExprToken::LParen; break;
      case ')': t = ExprToken::RParen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({t, src.substr(start, 1), start});
    ++i;
  }
  out.push_back({ExprToken::End, "", src.size()});
  return out;
}

class ExprParser {
 public:
  ExprParser(ContextPtr ctx, const std::string& src)
      : ctx_(std::move(ctx)), tokens_(lex_expression(src)) {}

  RationalFunction parse() {
    RationalFunction r = parse_expr();
    expect(ExprToken::End, "unexpected trailing input");
    return r;
  }

 private:
  const ExprToken& peek() const { return tokens_[pos_]; }
  const ExprToken& advance() { return tokens_[pos_++]; }
  void expect(ExprToken::Type t, const std::string& msg) {
    if (peek().type != t) throw ParseError(msg, peek().offset);
    ++pos_;
  }

  RationalFunction parse_expr() {
    RationalFunction acc = parse_term();
    while (peek().type == ExprToken::Plus || peek().type == ExprToken::Minus) {
      bool plus = advance().type == ExprToken::Plus;
      RationalFunction rhs = parse_term();
      acc = plus ? acc + rhs : acc - rhs;
    }
    return acc;
  }

  RationalFunction parse_term() {
    RationalFunction acc = parse_factor();
    while (peek().type == ExprToken::Star || peek().type == ExprToken::Slash) {
      const ExprToken& op = advance();
      RationalFunction rhs = parse_factor();
      if (op.type == ExprToken::Slash) {
        if (rhs.is_zero()) throw ParseError("division by zero", op.offset);
        acc = acc / rhs;
      } else {
        acc = acc * rhs;
      }
    }
    return acc;
  }

  RationalFunction parse_factor() {
    RationalFunction b = parse_base();
    if (peek().type == ExprToken::Caret) {
      std::size_t caret = advance().offset;
      if (peek().type != ExprToken::Int)
        throw ParseError("exponent must be an unsigned integer", peek().offset);
      const std::string& digits = advance().text;
      if (digits.size() > 6) throw ResourceLimitError("exponent exceeds degree cap");
      unsigned long e = std::stoul(digits);
      if (e > static_cast<unsigned long>(kMaxExponent))
        throw ResourceLimitError("exponent exceeds degree cap");
      (void)caret;
      b = b.pow(static_cast<unsigned>(e));
    }
    return b;
  }

  RationalFunction parse_base() {
    const ExprToken& t = peek();
    switch (t.type) {
      case ExprToken::Int: {
        advance();
        return RationalFunction::constant(ctx_, Rational(Integer(t.text)));
      }
      case ExprToken::Ident: {
        advance();
        if (!ctx_->has(t.text))
          throw ParseError("unknown identifier '" + t.text + "'", t.offset);
        return RationalFunction::variable(ctx_, t.text);
      }
      case ExprToken::LParen: {
        advance();
        RationalFunction inner = parse_expr();
        expect(ExprToken::RParen, "expected ')'");
        return inner;
      }
      case ExprToken::Minus: {
        advance();
        return -parse_base();
      }
      default:
        throw ParseError("expected a number, identifier, '(' or '-'", t.offset);
    }
  }

  ContextPtr ctx_;
  std::vector<ExprToken> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an expression against the context's symbols.  Errors carry the
/// byte offset of the offending token.
inline RationalFunction parse_expression(const ContextPtr& ctx, const std::string& src) {
  return detail::ExprParser(ctx, src).parse();
}

// ---------------------------------------------------------------------------
// Printing.  The emitted string re-parses to the identical canonical value.
// A leading negative term whose coefficient is -1 and whose first variable
// carries an exponent >= 2 is printed with an explicit "1*" so that the unary
// minus cannot capture the exponent ("-1*v^2", never "-v^2").
// ---------------------------------------------------------------------------

namespace detail {

inline std::string rational_literal(const Rational& q) {
  // q > 0; grammar rationals are unsigned.
  std::string s = q.get_num().get_str();
  if (q.get_den() != 1) s += "/" + q.get_den().get_str();
  return s;
}

/// Magnitude part of one term, sign stripped.  `guard_leading_minus` injects
/// the explicit "1*" when the caller will prefix a unary '-'.
inline std::string term_body(const ContextPtr& ctx, const Term& t, bool guard_leading_minus) {
  Rational mag = abs(t.coeff);
  std::vector<std::string> factors;
  if (mag != 1 || t.monomial.is_unit()) factors.push_back(rational_literal(mag));
  bool first_var = true;
  for (std::size_t i = 0; i < t.monomial.size(); ++i) {
    int e = t.monomial.exp(i);
    if (e == 0) continue;
    if (first_var && factors.empty() && guard_leading_minus && e >= 2)
      factors.push_back("1");
    first_var = false;
    std::string f = ctx->symbol(i).name;
    if (e > 1) f += "^" + std::to_string(e);
    factors.push_back(std::move(f));
  }
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out += "*";
    out += factors[i];
  }
  return out;
}

inline std::string poly_to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  const ContextPtr& ctx = p.context();
  for (std::size_t i = 0; i < p.terms().size(); ++i) {
    const Term& t = p.terms()[i];
    bool neg = t.coeff < 0;
    if (i == 0) {
      if (neg) out += "-";
      out += term_body(ctx, t, neg);
    } else {
      out += neg ? " - " : " + ";
      out += term_body(ctx, t, false);
    }
  }
  return out;
}

/// True when the polynomial prints as a single '/'-free factor chain that can
/// stand unparenthesized as a numerator.
inline bool single_term(const Polynomial& p) { return p.terms().size() == 1; }

/// True when a monic denominator may stand unparenthesized: one term, unit
/// coefficient, exactly one variable (with any exponent).
inline bool simple_denominator(const Polynomial& p) {
  if (p.terms().size() != 1) return false;
  const Term& t = p.terms()[0];
  if (t.coeff != 1) return false;
  int vars = 0;
  for (std::size_t i = 0; i < t.monomial.size(); ++i)
    if (t.monomial.exp(i) > 0) ++vars;
  return vars == 1;
}

}  // namespace detail

/// Canonical textual form; parse_expression(ctx, to_expression_string(f)) == f.
inline std::string to_expression_string(const RationalFunction& f) {
  using namespace detail;
  if (f.is_polynomial()) return poly_to_string(f.num());
  std::string num;
  if (single_term(f.num())) {
    const Term& t = f.num().terms()[0];
    bool neg = t.coeff < 0;
    num = (neg ? "-" : "") + term_body(f.context(), t, neg);
  } else {
    num = "(" + poly_to_string(f.num()) + ")";
  }
  std::string den = simple_denominator(f.den())
                        ? term_body(f.context(), f.den().terms()[0], false)
                        : "(" + poly_to_string(f.den()) + ")";
  return num + "/" + den;
}

inline std::string to_expression_string(const Polynomial& p) {
  return detail::poly_to_string(p);
}

}  // namespace vsi
