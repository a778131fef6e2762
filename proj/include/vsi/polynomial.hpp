#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vsi/errors.hpp"
#include "vsi/symbol.hpp"

namespace vsi {

using Rational = mpq_class;
using Integer = mpz_class;

/// Canonicalizing constructor for p/q; GMP's two-argument mpq constructor
/// does not reduce the fraction on its own.
inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Largest exponent a single symbol may carry.  Degrees beyond this are
/// treated as a resource-cap violation rather than silently accepted.
inline constexpr int kMaxExponent = 200;

/// Exponent vector, one byte per context symbol.  The canonical term order
/// is descending lexicographic order on this byte string (symbol 0 most
/// significant), which std::string's unsigned byte compare implements.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t n_symbols) : exps_(n_symbols, '\0') {}

  static Monomial unit(std::size_t n_symbols) { return Monomial(n_symbols); }
  static Monomial variable(std::size_t n_symbols, std::size_t index, int power = 1) {
    Monomial m(n_symbols);
    m.set(index, power);
    return m;
  }

  std::size_t size() const { return exps_.size(); }
  int exp(std::size_t i) const { return static_cast<unsigned char>(exps_[i]); }
  void set(std::size_t i, int e) {
    if (e < 0 || e > kMaxExponent) throw ResourceLimitError("monomial exponent cap exceeded");
    exps_[i] = static_cast<char>(e);
  }

  bool is_unit() const {
    return exps_.find_first_not_of('\0') == std::string::npos;
  }

  int total_degree() const {
    int d = 0;
    for (char c : exps_) d += static_cast<unsigned char>(c);
    return d;
  }

  Monomial operator*(const Monomial& o) const {
    internal_check(size() == o.size(), "monomial arity mismatch");
    Monomial r(size());
    for (std::size_t i = 0; i < size(); ++i) {
      int e = exp(i) + o.exp(i);
      if (e > kMaxExponent) throw ResourceLimitError("monomial exponent cap exceeded");
      r.exps_[i] = static_cast<char>(e);
    }
    return r;
  }

  /// Exact quotient; caller must know divisibility holds.
  Monomial operator/(const Monomial& o) const {
    internal_check(size() == o.size(), "monomial arity mismatch");
    Monomial r(size());
    for (std::size_t i = 0; i < size(); ++i) {
      int e = exp(i) - o.exp(i);
      internal_check(e >= 0, "monomial division not exact");
      r.exps_[i] = static_cast<char>(e);
    }
    return r;
  }

  bool divides(const Monomial& o) const {
    if (size() != o.size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (exp(i) > o.exp(i)) return false;
    return true;
  }

  bool operator==(const Monomial& o) const { return exps_ == o.exps_; }
  bool operator!=(const Monomial& o) const { return exps_ != o.exps_; }
  /// "Greater" means earlier in the canonical descending order.
  bool operator>(const Monomial& o) const { return exps_ > o.exps_; }
  bool operator<(const Monomial& o) const { return exps_ < o.exps_; }

 private:
  std::string exps_;
};

struct Term {
  Monomial monomial;
  Rational coeff;
};

/// Immutable-in-spirit multivariate polynomial with rational coefficients.
/// Invariants: terms sorted in strictly descending monomial order, no zero
/// coefficients, all monomials sized to the context's symbol count.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static Polynomial zero(ContextPtr ctx) { return Polynomial(std::move(ctx)); }

  static Polynomial constant(ContextPtr ctx, const Rational& c) {
    Polynomial p(std::move(ctx));
    if (c != 0) p.terms_.push_back({Monomial::unit(p.ctx_->size()), c});
    return p;
  }

  static Polynomial variable(ContextPtr ctx, std::size_t index, int power = 1) {
    Polynomial p(std::move(ctx));
    if (index >= p.ctx_->size()) throw ValidationError("symbol index out of range");
    if (power == 0) return constant(p.ctx_, 1);
    p.terms_.push_back({Monomial::variable(p.ctx_->size(), index, power), Rational(1)});
    return p;
  }

  static Polynomial variable(const ContextPtr& ctx, const std::string& name, int power = 1) {
    return variable(ctx, ctx->index_of(name), power);
  }

  /// Builds a polynomial from arbitrary (monomial, coefficient) pairs.
  static Polynomial from_terms(ContextPtr ctx, std::vector<Term> terms) {
    Polynomial p(std::move(ctx));
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }

  const ContextPtr& context() const { return ctx_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_unit());
  }
  bool is_one() const {
    return terms_.size() == 1 && terms_[0].monomial.is_unit() && terms_[0].coeff == 1;
  }

  /// Value of a constant polynomial (zero for the empty sum).
  Rational constant_value() const {
    if (is_zero()) return Rational(0);
    internal_check(is_constant(), "constant_value on non-constant polynomial");
    return terms_[0].coeff;
  }

  /// Leading term w.r.t. the canonical order; polynomial must be non-zero.
  const Term& leading_term() const {
    internal_check(!terms_.empty(), "leading_term of zero polynomial");
    return terms_[0];
  }

  int degree_in(std::size_t var) const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.monomial.exp(var));
    return d;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.monomial.total_degree());
    return d;
  }

  /// Indices of symbols that actually occur.
  std::vector<std::size_t> used_symbols() const {
    std::vector<std::size_t> out;
    if (!ctx_) return out;
    for (std::size_t i = 0; i < ctx_->size(); ++i)
      if (degree_in(i) > 0) out.push_back(i);
    return out;
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  Polynomial operator+(const Polynomial& o) const {
    require_same_context(ctx_, o.ctx_);
    Polynomial r(ctx_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
      if (terms_[i].monomial > o.terms_[j].monomial) {
        r.terms_.push_back(terms_[i++]);
      } else if (o.terms_[j].monomial > terms_[i].monomial) {
        r.terms_.push_back(o.terms_[j++]);
      } else {
        Rational c = terms_[i].coeff + o.terms_[j].coeff;
        if (c != 0) r.terms_.push_back({terms_[i].monomial, std::move(c)});
        ++i, ++j;
      }
    }
    for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
    for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
    return r;
  }

  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

  Polynomial operator*(const Polynomial& o) const {
    require_same_context(ctx_, o.ctx_);
    Polynomial r(ctx_);
    if (is_zero() || o.is_zero()) return r;
    std::vector<Term> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
      for (const auto& b : o.terms_)
        prod.push_back({a.monomial * b.monomial, a.coeff * b.coeff});
    r.terms_ = std::move(prod);
    r.normalize();
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const Rational& c) const {
    if (c == 0) return zero(ctx_);
    Polynomial r(*this);
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }

  Polynomial pow(unsigned e) const {
    Polynomial acc = constant(ctx_, 1);
    Polynomial base = *this;
    while (e) {
      if (e & 1u) acc = acc * base;
      e >>= 1u;
      if (e) base = base * base;
    }
    return acc;
  }

  /// Partial derivative by context symbol index (power rule per term).
  Polynomial derivative(std::size_t var) const {
    Polynomial r(ctx_);
    for (const auto& t : terms_) {
      int e = t.monomial.exp(var);
      if (e == 0) continue;
      Monomial m = t.monomial;
      m.set(var, e - 1);
      r.terms_.push_back({std::move(m), t.coeff * e});
    }
    // Dropping variables preserves descending order, but equal monomials can
    // appear only if the source had them (it cannot); still normalize defensively.
    r.normalize();
    return r;
  }

  /// Full evaluation; `values[i]` is the value of context symbol i.
  Rational evaluate(const std::vector<Rational>& values) const {
    internal_check(!ctx_ || values.size() == ctx_->size(), "evaluation point arity mismatch");
    Rational acc(0);
    for (const auto& t : terms_) {
      Rational m = t.coeff;
      for (std::size_t i = 0; i < t.monomial.size(); ++i) {
        int e = t.monomial.exp(i);
        for (int r = 0; r < e; ++r) m *= values[i];
      }
      acc += m;
    }
    return acc;
  }

  /// Substitutes rational values for a subset of symbols, returning a
  /// polynomial in the remaining ones (used by the modular GCD fast path).
  Polynomial substitute(const std::map<std::size_t, Rational>& values) const {
    Polynomial r(ctx_);
    std::vector<Term> acc;
    acc.reserve(terms_.size());
    for (const auto& t : terms_) {
      Rational c = t.coeff;
      Monomial m = t.monomial;
      for (const auto& [idx, val] : values) {
        int e = t.monomial.exp(idx);
        if (e > 0) {
          for (int q = 0; q < e; ++q) c *= val;
          m.set(idx, 0);
        }
      }
      if (c != 0) acc.push_back({std::move(m), std::move(c)});
    }
    r.terms_ = std::move(acc);
    r.normalize();
    return r;
  }

  /// Coefficient of x^d when the polynomial is read as univariate in symbol
  /// `var` with polynomial coefficients in the remaining symbols.
  Polynomial coefficient_in(std::size_t var, int d) const {
    Polynomial r(ctx_);
    for (const auto& t : terms_) {
      if (t.monomial.exp(var) != d) continue;
      Monomial m = t.monomial;
      m.set(var, 0);
      r.terms_.push_back({std::move(m), t.coeff});
    }
    r.normalize();
    return r;
  }

  /// Multiplies by a single term (cheap: order is preserved).
  Polynomial times_term(const Monomial& m, const Rational& c) const {
    Polynomial r(ctx_);
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.monomial * m, t.coeff * c});
    return r;
  }

  bool operator==(const Polynomial& o) const {
    if (ctx_ != o.ctx_ && !(ctx_ && o.ctx_ && *ctx_ == *o.ctx_)) return false;
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      if (terms_[i].monomial != o.terms_[i].monomial || terms_[i].coeff != o.terms_[i].coeff)
        return false;
    return true;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

 private:
  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.monomial > b.monomial; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().monomial == t.monomial) {
        out.back().coeff += t.coeff;
        if (out.back().coeff == 0) out.pop_back();
      } else if (t.coeff != 0) {
        out.push_back(std::move(t));
      }
    }
    terms_ = std::move(out);
  }

  ContextPtr ctx_;
  std::vector<Term> terms_;
};

}  // namespace vsi
