#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vsi/poly_gcd.hpp"
#include "vsi/polynomial.hpp"

namespace vsi {

/// Exact quotient of two polynomials.  Canonical form: numerator and
/// denominator coprime, denominator non-zero with leading coefficient 1.
/// Every constructor and operator re-establishes the canonical form, so
/// structural equality is mathematical equality.
class RationalFunction {
 public:
  explicit RationalFunction(Polynomial num)
      : num_(std::move(num)), den_(Polynomial::constant(num_.context(), 1)) {}

  RationalFunction(Polynomial num, Polynomial den)
      : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  static RationalFunction zero(const ContextPtr& ctx) {
    return RationalFunction(Polynomial::zero(ctx));
  }
  static RationalFunction one(const ContextPtr& ctx) {
    return RationalFunction(Polynomial::constant(ctx, 1));
  }
  static RationalFunction constant(const ContextPtr& ctx, const Rational& c) {
    return RationalFunction(Polynomial::constant(ctx, c));
  }
  static RationalFunction variable(const ContextPtr& ctx, const std::string& name) {
    return RationalFunction(Polynomial::variable(ctx, name));
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  const ContextPtr& context() const { return num_.context(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  Rational constant_value() const {
    internal_check(is_constant(), "constant_value of non-constant");
    return num_.constant_value();
  }

  RationalFunction operator-() const {
    RationalFunction r(*this);
    r.num_ = -r.num_;
    return r;
  }

  RationalFunction operator+(const RationalFunction& o) const {
    if (den_.is_one() && o.den_.is_one()) return RationalFunction(num_ + o.num_);
    if (den_ == o.den_) return RationalFunction(num_ + o.num_, den_);
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }

  RationalFunction operator-(const RationalFunction& o) const { return *this + (-o); }

  RationalFunction operator*(const RationalFunction& o) const {
    if (is_zero() || o.is_zero()) return zero(context());
    if (den_.is_one() && o.den_.is_one()) return RationalFunction(num_ * o.num_);
    return RationalFunction(num_ * o.num_, den_ * o.den_);
  }

  RationalFunction operator/(const RationalFunction& o) const {
    if (o.is_zero()) throw ValidationError("division by zero rational function");
    if (is_zero()) return zero(context());
    return RationalFunction(num_ * o.den_, den_ * o.num_);
  }

  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

  RationalFunction scaled(const Rational& c) const {
    if (c == 0) return zero(context());
    RationalFunction r(*this);
    r.num_ = r.num_.scaled(c);
    return r;
  }

  RationalFunction pow(unsigned e) const {
    RationalFunction acc = one(context());
    RationalFunction base = *this;
    while (e) {
      if (e & 1u) acc *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return acc;
  }

  /// Partial derivative by context symbol index (quotient rule).
  RationalFunction derivative(std::size_t var) const {
    if (den_.is_one()) return RationalFunction(num_.derivative(var));
    return RationalFunction(num_.derivative(var) * den_ - num_ * den_.derivative(var),
                            den_ * den_);
  }

  /// Exact value at a point; throws PoleError when the denominator vanishes.
  Rational evaluate(const std::vector<Rational>& values) const {
    Rational d = den_.evaluate(values);
    if (d == 0) throw PoleError("denominator vanishes at evaluation point");
    return num_.evaluate(values) / d;
  }

  bool operator==(const RationalFunction& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }

 private:
  void normalize() {
    require_same_context(num_.context(), den_.context());
    if (den_.is_zero()) throw ValidationError("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Polynomial::constant(num_.context(), 1);
      return;
    }
    if (!den_.is_one()) {
      Polynomial g = poly_gcd(num_, den_);
      if (!g.is_one()) {
        num_ = exact_div(num_, g);
        den_ = exact_div(den_, g);
      }
      Rational lead = den_.leading_term().coeff;
      if (lead != 1) {
        Rational inv = 1 / lead;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
      }
    }
  }

  Polynomial num_;
  Polynomial den_;
};

/// Derivative by coordinate name; differentiating by a parameter is an error.
inline RationalFunction differentiate(const RationalFunction& f, const std::string& var) {
  const ContextPtr& ctx = f.context();
  std::size_t idx = ctx->index_of(var);
  if (ctx->symbol(idx).kind != SymbolKind::Coordinate)
    throw ValidationError("cannot differentiate by parameter '" + var + "'");
  return f.derivative(idx);
}

/// Point given as symbol-name -> value; every context symbol needs a value.
inline std::vector<Rational> point_to_values(const ContextPtr& ctx,
                                             const std::map<std::string, Rational>& point) {
  std::vector<Rational> values(ctx->size(), Rational(0));
  std::vector<bool> seen(ctx->size(), false);
  for (const auto& [name, value] : point) {
    if (!ctx->has(name)) throw ValidationError("assignment for unknown symbol '" + name + "'");
    std::size_t i = ctx->index_of(name);
    values[i] = value;
    seen[i] = true;
  }
  for (std::size_t i = 0; i < ctx->size(); ++i)
    if (!seen[i])
      throw ValidationError("missing assignment for symbol '" + ctx->symbol(i).name + "'");
  return values;
}

inline Rational evaluate(const RationalFunction& f,
                         const std::map<std::string, Rational>& point) {
  return f.evaluate(point_to_values(f.context(), point));
}

}  // namespace vsi
