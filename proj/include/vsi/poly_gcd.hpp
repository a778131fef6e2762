#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "vsi/polynomial.hpp"

namespace vsi {

/// Exact multivariate division: returns q with a == b * q, or throws
/// InternalError when b does not divide a (callers pass known divisors).
inline Polynomial exact_div(const Polynomial& a, const Polynomial& b) {
  require_same_context(a.context(), b.context());
  if (b.is_zero()) throw ValidationError("division by zero polynomial");
  if (a.is_zero()) return Polynomial::zero(a.context());
  if (b.is_one()) return a;
  Polynomial q = Polynomial::zero(a.context());
  Polynomial r = a;
  const Term& lb = b.leading_term();
  while (!r.is_zero()) {
    const Term& lr = r.leading_term();
    if (!lb.monomial.divides(lr.monomial))
      throw InternalError("exact_div: division is not exact");
    Monomial m = lr.monomial / lb.monomial;
    Rational c = lr.coeff / lb.coeff;
    q += Polynomial::from_terms(a.context(), {{m, c}});
    r -= b.times_term(m, c);
  }
  return q;
}

namespace detail {

/// Strips rational content: result has coprime integer coefficients and a
/// positive leading coefficient.  Zero maps to zero.
inline Polynomial int_primitive(const Polynomial& p) {
  if (p.is_zero()) return p;
  Integer den_lcm = 1;
  for (const auto& t : p.terms()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                                          t.coeff.get_den().get_mpz_t());
  Integer num_gcd = 0;
  std::vector<Integer> scaled;
  scaled.reserve(p.terms().size());
  for (const auto& t : p.terms()) {
    Integer c = t.coeff.get_num() * (den_lcm / t.coeff.get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_mpz_t());
    scaled.push_back(std::move(c));
  }
  if (scaled.front() < 0) num_gcd = -num_gcd;
  std::vector<Term> terms;
  terms.reserve(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i)
    terms.push_back({p.terms()[i].monomial, Rational(scaled[i] / num_gcd)});
  return Polynomial::from_terms(p.context(), std::move(terms));
}

/// Greatest monomial dividing every term of p.
inline Monomial common_monomial(const Polynomial& p) {
  internal_check(!p.is_zero(), "common_monomial of zero");
  Monomial m = p.terms().front().monomial;
  for (const auto& t : p.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i)
      if (t.monomial.exp(i) < m.exp(i)) m.set(i, t.monomial.exp(i));
    if (m.is_unit()) break;
  }
  return m;
}

/// p as a coefficient vector in symbol `x` (index = power of x).
inline std::vector<Polynomial> to_coeffs(const Polynomial& p, std::size_t x) {
  std::vector<Polynomial> out(static_cast<std::size_t>(p.degree_in(x)) + 1,
                              Polynomial::zero(p.context()));
  for (int d = 0; d <= p.degree_in(x); ++d) out[d] = p.coefficient_in(x, d);
  while (out.size() > 1 && out.back().is_zero()) out.pop_back();
  return out;
}

inline Polynomial from_coeffs(const ContextPtr& ctx, const std::vector<Polynomial>& coeffs,
                              std::size_t x) {
  Polynomial acc = Polynomial::zero(ctx);
  for (std::size_t d = 0; d < coeffs.size(); ++d) {
    if (coeffs[d].is_zero()) continue;
    acc += coeffs[d].times_term(Monomial::variable(ctx->size(), x, static_cast<int>(d)),
                                Rational(1));
  }
  return acc;
}

/// Univariate gcd over the rationals by plain Euclid; inputs are polynomials
/// in which only symbol `x` occurs.  Returns a monic gcd (1 when coprime).
inline Polynomial univariate_gcd(const Polynomial& a, const Polynomial& b, std::size_t x) {
  std::vector<Rational> f, g;
  for (const auto& p : to_coeffs(a, x)) f.push_back(p.constant_value());
  for (const auto& p : to_coeffs(b, x)) g.push_back(p.constant_value());
  auto deg = [](const std::vector<Rational>& v) { return static_cast<int>(v.size()) - 1; };
  auto trim = [](std::vector<Rational>& v) {
    while (v.size() > 1 && v.back() == 0) v.pop_back();
    if (v.size() == 1 && v[0] == 0) v.clear();
  };
  trim(f);
  trim(g);
  while (!g.empty()) {
    // f mod g
    while (deg(f) >= deg(g) && !f.empty()) {
      Rational q = f.back() / g.back();
      int shift = deg(f) - deg(g);
      for (int i = 0; i <= deg(g); ++i) f[i + shift] -= q * g[i];
      f.pop_back();
      trim(f);
    }
    std::swap(f, g);
  }
  if (f.empty()) return Polynomial::zero(a.context());
  Polynomial out = Polynomial::zero(a.context());
  for (std::size_t d = 0; d < f.size(); ++d) {
    if (f[d] == 0) continue;
    out += Polynomial::from_terms(
        a.context(), {{Monomial::variable(a.context()->size(), x, static_cast<int>(d)),
                       f[d] / f.back()}});
  }
  return out;
}

/// Tries to prove gcd(a, b) constant by substituting random-ish rational
/// values for all symbols but one and computing a univariate gcd.  The
/// substitution is accepted only when it preserves deg_x(a); then any factor
/// common to a and b keeps its x-degree under the substitution, so a constant
/// univariate gcd proves the true gcd free of x.  Returns true only on proof.
inline bool fast_coprime(const Polynomial& a, const Polynomial& b,
                         const std::vector<std::size_t>& vars) {
  static const int kSeeds[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::size_t x : vars) {
    bool eliminated = false;
    for (int attempt = 0; attempt < 4 && !eliminated; ++attempt) {
      std::map<std::size_t, Rational> sigma;
      for (std::size_t y : vars)
        if (y != x)
          sigma[y] = Rational(kSeeds[(y * 7 + attempt * 3 + x) % 12] + attempt);
      Polynomial as = a.substitute(sigma);
      if (as.degree_in(x) != a.degree_in(x)) continue;
      Polynomial bs = b.substitute(sigma);
      if (bs.is_zero()) continue;
      Polynomial g = univariate_gcd(as, bs, x);
      if (g.degree_in(x) == 0) eliminated = true;
    }
    if (!eliminated) return false;
  }
  return true;
}

inline Polynomial gcd_impl(const Polynomial& a, const Polynomial& b);

/// gcd of the coefficients of p read as univariate in x.
inline Polynomial content_wrt(const Polynomial& p, std::size_t x) {
  Polynomial c = Polynomial::zero(p.context());
  for (int d = 0; d <= p.degree_in(x); ++d) {
    Polynomial cd = p.coefficient_in(x, d);
    if (cd.is_zero()) continue;
    c = c.is_zero() ? int_primitive(cd) : gcd_impl(c, cd);
    if (c.is_one()) break;
  }
  return c;
}

inline Polynomial primitive_wrt(const Polynomial& p, std::size_t x) {
  Polynomial c = content_wrt(p, x);
  return int_primitive(c.is_one() ? p : exact_div(p, c));
}

/// Pseudo-remainder of f by g w.r.t. x (operands as coefficient vectors).
inline std::vector<Polynomial> pseudo_rem(std::vector<Polynomial> f,
                                          const std::vector<Polynomial>& g,
                                          const ContextPtr& ctx) {
  auto trim = [](std::vector<Polynomial>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
  };
  trim(f);
  const Polynomial& lg = g.back();
  while (f.size() >= g.size()) {
    Polynomial lf = f.back();
    std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = f[i] * lg;
    for (std::size_t i = 0; i < g.size(); ++i) f[i + shift] -= lf * g[i];
    internal_check(f.back().is_zero(), "pseudo_rem: leading term did not cancel");
    trim(f);
    (void)ctx;
  }
  return f;
}

/// Primitive pseudo-remainder-sequence gcd of two x-primitive polynomials.
inline Polynomial prs_gcd(Polynomial f, Polynomial g, std::size_t x) {
  if (f.degree_in(x) < g.degree_in(x)) std::swap(f, g);
  while (true) {
    std::vector<Polynomial> r =
        pseudo_rem(to_coeffs(f, x), to_coeffs(g, x), f.context());
    if (r.empty()) return primitive_wrt(g, x);
    Polynomial rp = from_coeffs(f.context(), r, x);
    if (rp.degree_in(x) == 0)
      return Polynomial::constant(f.context(), 1);  // x-free remainder: pp-gcd is 1
    f = std::move(g);
    g = primitive_wrt(rp, x);
  }
}

inline Polynomial gcd_impl(const Polynomial& a, const Polynomial& b) {
  const ContextPtr& ctx = a.context();
  if (a.is_zero()) return int_primitive(b);
  if (b.is_zero()) return int_primitive(a);
  Polynomial a0 = int_primitive(a);
  Polynomial b0 = int_primitive(b);
  if (a0.is_constant() || b0.is_constant()) return Polynomial::constant(ctx, 1);

  // Single-term operands: the gcd is the largest common monomial.
  if (a0.terms().size() == 1 || b0.terms().size() == 1) {
    Monomial ma = common_monomial(a0);
    Monomial mb = common_monomial(b0);
    Monomial m(ma.size());
    for (std::size_t i = 0; i < m.size(); ++i) m.set(i, std::min(ma.exp(i), mb.exp(i)));
    return Polynomial::from_terms(ctx, {{m, Rational(1)}});
  }

  std::vector<std::size_t> vars;
  {
    auto va = a0.used_symbols();
    auto vb = b0.used_symbols();
    std::set_union(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(vars));
  }
  if (vars.empty()) return Polynomial::constant(ctx, 1);

  if (vars.size() == 1) {
    Polynomial g = univariate_gcd(a0, b0, vars[0]);
    return int_primitive(g);
  }
  if (fast_coprime(a0, b0, vars)) return Polynomial::constant(ctx, 1);

  // Main variable: smallest combined degree keeps the remainder sequence short.
  std::size_t x = vars[0];
  int best = a0.degree_in(x) + b0.degree_in(x);
  for (std::size_t v : vars) {
    int d = a0.degree_in(v) + b0.degree_in(v);
    if (d < best) best = d, x = v;
  }
  if (a0.degree_in(x) == 0 || b0.degree_in(x) == 0) {
    // x occurs in only one operand: gcd cannot involve x; recurse on contents.
    Polynomial ca = content_wrt(a0, x);
    Polynomial cb = content_wrt(b0, x);
    return int_primitive(gcd_impl(ca, cb));
  }

  Polynomial ca = content_wrt(a0, x);
  Polynomial cb = content_wrt(b0, x);
  Polynomial g_content = gcd_impl(ca, cb);
  Polynomial g_pp = prs_gcd(ca.is_one() ? a0 : exact_div(a0, ca),
                            cb.is_one() ? b0 : exact_div(b0, cb), x);
  return int_primitive(g_content * g_pp);
}

}  // namespace detail

/// Polynomial gcd over the rationals, returned with coprime integer
/// coefficients and positive leading coefficient (unique up to that unit).
inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  require_same_context(a.context(), b.context());
  return detail::gcd_impl(a, b);
}

/// Cancels the common factor of a numerator/denominator pair and scales the
/// result so both parts have coprime integer coefficients jointly, with a
/// positive leading denominator coefficient.  (6v^2, 4v) -> (3v, 2).
inline std::pair<Polynomial, Polynomial> gcd_normalize(const Polynomial& p,
                                                       const Polynomial& q) {
  require_same_context(p.context(), q.context());
  if (q.is_zero()) throw ValidationError("gcd_normalize: zero denominator");
  const ContextPtr& ctx = p.context();
  if (p.is_zero()) return {Polynomial::zero(ctx), Polynomial::constant(ctx, 1)};
  Polynomial g = poly_gcd(p, q);
  Polynomial n = g.is_one() ? p : exact_div(p, g);
  Polynomial d = g.is_one() ? q : exact_div(q, g);
  // Joint integer normalization across both parts.
  Integer den_lcm = 1;
  for (const Polynomial* pp : {&n, &d})
    for (const auto& t : pp->terms())
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den().get_mpz_t());
  Integer num_gcd = 0;
  for (const Polynomial* pp : {&n, &d})
    for (const auto& t : pp->terms()) {
      Integer c = t.coeff.get_num() * (den_lcm / t.coeff.get_den());
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_mpz_t());
    }
  Rational scale = make_rational(den_lcm, num_gcd);
  if (d.leading_term().coeff * scale < 0) scale = -scale;
  return {n.scaled(scale), d.scaled(scale)};
}

/// Exact square root of a polynomial (positive leading coefficient), or
/// nullopt when p is not a perfect square.
inline std::optional<Polynomial> poly_sqrt(const Polynomial& p) {
  const ContextPtr& ctx = p.context();
  if (p.is_zero()) return Polynomial::zero(ctx);
  // sqrt of the leading term.
  const Term& lt = p.leading_term();
  if (lt.coeff < 0) return std::nullopt;
  Monomial half(lt.monomial.size());
  for (std::size_t i = 0; i < half.size(); ++i) {
    if (lt.monomial.exp(i) % 2 != 0) return std::nullopt;
    half.set(i, lt.monomial.exp(i) / 2);
  }
  Integer num = lt.coeff.get_num(), den = lt.coeff.get_den(), rnum, rden;
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_sqrt(rnum.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rden.get_mpz_t(), den.get_mpz_t());
  Polynomial s = Polynomial::from_terms(ctx, {{half, make_rational(rnum, rden)}});
  // Peel further terms: each step the next term of s is lt(p - s^2) / (2 lt(s)).
  const Term ls = s.leading_term();
  for (int guard = 0; guard < 4096; ++guard) {
    Polynomial r = p - s * s;
    if (r.is_zero()) return s;
    const Term& lr = r.leading_term();
    if (!ls.monomial.divides(lr.monomial)) return std::nullopt;
    Monomial m = lr.monomial / ls.monomial;
    Rational c = lr.coeff / (2 * ls.coeff);
    Polynomial t = Polynomial::from_terms(ctx, {{m, c}});
    if (!(t.leading_term().monomial < ls.monomial))
      return std::nullopt;  // no progress: not a square
    s += t;
  }
  return std::nullopt;
}

}  // namespace vsi
