#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vsi/curvature.hpp"
#include "vsi/expression.hpp"
#include "vsi/frame.hpp"

namespace vsi {

using SupportSet = std::set<BoostWeight>;

inline SupportSet support_of(const BWDecomposition& dec) { return dec.support(); }

/// Orientation flip b -> -b (a lattice automorphism; feasibility questions are
/// invariant under it, the literal B-conditions are not).
inline SupportSet negated(const SupportSet& s) {
  SupportSet out;
  for (const auto& b : s) {
    BoostWeight nb(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) nb[i] = -b[i];
    out.insert(std::move(nb));
  }
  return out;
}

inline std::string weight_to_string(const BoostWeight& b) {
  std::string s = "(";
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(b[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// Literal B-conditions on a support set:
//   Bi holds iff no weight with b_1 = ... = b_{i-1} = 0 and b_i > 0 occurs;
//   N holds iff B1..Bk hold and the zero weight does not occur.
// ---------------------------------------------------------------------------

struct BConditionReport {
  std::vector<bool> B;  ///< B[i-1] = condition Bi
  bool all_B = true;
  bool N = false;
  int s_index = 0;  ///< largest i such that B1..Bi all hold (0 if B1 fails)
};

inline BConditionReport check_B_conditions(const SupportSet& s, int k) {
  if (k < 0) throw ValidationError("negative k");
  BConditionReport rep;
  rep.B.assign(static_cast<std::size_t>(k), true);
  bool zero_present = false;
  for (const auto& b : s) {
    if (static_cast<int>(b.size()) != k)
      throw ValidationError("support weight has wrong length");
    bool prefix_zero = true;
    bool all_zero = true;
    for (int i = 0; i < k; ++i) {
      if (prefix_zero && b[i] > 0) rep.B[i] = false;
      if (b[i] != 0) {
        prefix_zero = false;
        all_zero = false;
      }
    }
    if (all_zero) zero_present = true;
  }
  rep.all_B = true;
  rep.s_index = 0;
  for (int i = 0; i < k; ++i) {
    if (!rep.B[i]) {
      rep.all_B = false;
      break;
    }
    rep.s_index = i + 1;
  }
  rep.N = rep.all_B && !zero_present;
  return rep;
}

// ---------------------------------------------------------------------------
// Separating directions.
//
// Strict: lambda in Q^k with b . lambda < 0 for every b in S.
// Weak:   lambda != 0 with b . lambda <= 0 for every b in S.
// Both questions are decided exactly by Fourier-Motzkin elimination over Q
// (sound and complete for rational inequality systems); candidate-enumeration
// shortcuts are not complete and are not used.
// ---------------------------------------------------------------------------

enum class Strictness { Strict, Weak };

struct SeparatingDirection {
  std::vector<Rational> lambda;
  Strictness strictness = Strictness::Weak;
};

namespace detail {

/// One row of a rational inequality system: a . x <= c.
struct FMRow {
  std::vector<Rational> a;
  Rational c;
};

inline void fm_normalize(FMRow& row) {
  Integer den_lcm = 1;
  auto fold = [&](const Rational& q) {
    den_lcm = lcm(den_lcm, q.get_den());
  };
  for (const auto& q : row.a) fold(q);
  fold(row.c);
  Integer num_gcd = 0;
  auto fold2 = [&](const Rational& q) {
    Rational scaled = q * Rational(den_lcm);
    num_gcd = gcd(num_gcd, scaled.get_num());
  };
  for (const auto& q : row.a) fold2(q);
  fold2(row.c);
  if (num_gcd == 0) num_gcd = 1;
  Rational f = Rational(den_lcm) / Rational(num_gcd);
  for (auto& q : row.a) q *= f;
  row.c *= f;
}

/// Drops tautologies (0 <= c, c >= 0), keeps only the tightest bound among
/// rows sharing the same normalized a, and returns false on a contradiction
/// row (0 <= c with c < 0).
inline bool fm_compact(std::vector<FMRow>& rows) {
  std::vector<FMRow> out;
  out.reserve(rows.size());
  for (auto& r : rows) {
    bool zero = true;
    for (const auto& q : r.a)
      if (q != 0) {
        zero = false;
        break;
      }
    if (zero) {
      if (r.c < 0) return false;
      continue;
    }
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const FMRow& x, const FMRow& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.c < y.c;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const FMRow& x, const FMRow& y) { return x.a == y.a; }),
            out.end());
  rows = std::move(out);
  return true;
}

/// Decides feasibility of {rows : a . x <= c} over Q^k and produces a witness.
/// Variables are eliminated from the back; the final single-variable system is
/// an interval check.  The combination count per level is guarded so that
/// adversarial systems fail loudly instead of exhausting memory.
inline std::optional<std::vector<Rational>> fm_solve(std::vector<FMRow> rows, int k,
                                                     std::size_t row_cap = 200000) {
  for (auto& r : rows) fm_normalize(r);
  if (!fm_compact(rows)) return std::nullopt;
  std::vector<std::vector<FMRow>> levels;  // rows alive before eliminating var t
  for (int t = k - 1; t >= 1; --t) {
    levels.push_back(rows);
    std::vector<FMRow> zero, pos, neg;
    for (auto& r : rows) {
      const Rational& at = r.a[static_cast<std::size_t>(t)];
      if (at == 0) zero.push_back(std::move(r));
      else if (at > 0) pos.push_back(std::move(r));
      else neg.push_back(std::move(r));
    }
    if (!neg.empty() && pos.size() > row_cap / neg.size())
      throw ResourceLimitError("separating-direction elimination exceeded the row cap");
    std::vector<FMRow> next = std::move(zero);
    for (const auto& p : pos)
      for (const auto& n : neg) {
        // at_p * n - at_n * p has zero t-coefficient and is a positive
        // combination, hence implied.
        FMRow comb;
        comb.a.resize(static_cast<std::size_t>(k));
        const Rational& ap = p.a[static_cast<std::size_t>(t)];
        const Rational& an = n.a[static_cast<std::size_t>(t)];
        for (int i = 0; i < k; ++i)
          comb.a[static_cast<std::size_t>(i)] =
              ap * n.a[static_cast<std::size_t>(i)] - an * p.a[static_cast<std::size_t>(i)];
        comb.c = ap * n.c - an * p.c;
        fm_normalize(comb);
        next.push_back(std::move(comb));
      }
    if (!fm_compact(next)) return std::nullopt;
    rows = std::move(next);
  }
  std::vector<Rational> x(static_cast<std::size_t>(k), Rational(0));
  auto pick = [](bool has_lo, bool has_hi, const Rational& lo, const Rational& hi) {
    if (has_lo && has_hi) return Rational((lo + hi) / 2);
    if (has_lo) return lo;
    if (has_hi) return hi;
    return Rational(0);
  };
  {  // Only variable 0 remains; its rows all have a[0] != 0 after compaction.
    bool has_lo = false, has_hi = false;
    Rational lo(0), hi(0);
    for (const auto& r : rows) {
      Rational bound = r.c / r.a[0];
      if (r.a[0] > 0) {
        if (!has_hi || bound < hi) { hi = bound; has_hi = true; }
      } else {
        if (!has_lo || bound > lo) { lo = bound; has_lo = true; }
      }
    }
    if (has_lo && has_hi && lo > hi) return std::nullopt;
    x[0] = pick(has_lo, has_hi, lo, hi);
  }
  // Back-substitute x_t for t = 1..k-1 from the rows saved before var t was
  // eliminated; those rows involve the already-assigned x_0..x_{t-1} and x_t.
  for (int t = 1; t < k; ++t) {
    const std::vector<FMRow>& live = levels[static_cast<std::size_t>(k - 1 - t)];
    bool has_lo = false, has_hi = false;
    Rational lo(0), hi(0);
    for (const auto& r : live) {
      const Rational& at = r.a[static_cast<std::size_t>(t)];
      if (at == 0) continue;
      Rational rest = r.c;
      for (int i = 0; i < t; ++i)
        rest -= r.a[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      Rational bound = rest / at;
      if (at > 0) {  // x_t <= bound
        if (!has_hi || bound < hi) { hi = bound; has_hi = true; }
      } else {  // x_t >= bound
        if (!has_lo || bound > lo) { lo = bound; has_lo = true; }
      }
    }
    internal_check(!(has_lo && has_hi && lo > hi),
                   "empty interval during Fourier-Motzkin back-substitution");
    x[static_cast<std::size_t>(t)] = pick(has_lo, has_hi, lo, hi);
  }
  return x;
}

/// Positive rescaling of a rational vector to coprime integers (for readable
/// certificates); the zero vector is returned unchanged.
inline std::vector<Rational> scale_to_integers(const std::vector<Rational>& x) {
  Integer den_lcm = 1;
  for (const auto& q : x) den_lcm = lcm(den_lcm, Integer(q.get_den()));
  Integer num_gcd = 0;
  for (const auto& q : x)
    num_gcd = gcd(num_gcd, Integer(q.get_num() * (den_lcm / q.get_den())));
  if (num_gcd == 0) return x;
  std::vector<Rational> out;
  out.reserve(x.size());
  for (const auto& q : x) out.push_back(q * Rational(den_lcm) / Rational(num_gcd));
  return out;
}

inline std::optional<SeparatingDirection> fm_find(const SupportSet& s, bool strict,
                                                  int k) {
  if (s.empty()) {  // vacuous: any direction separates strictly
    SeparatingDirection d;
    d.strictness = Strictness::Strict;
    d.lambda.assign(static_cast<std::size_t>(k), Rational(0));
    d.lambda[0] = 1;
    return d;
  }
  auto rows_for = [&](void) {
    std::vector<FMRow> rows;
    for (const auto& b : s) {
      FMRow r;
      for (int i = 0; i < k; ++i) r.a.push_back(Rational(b[static_cast<std::size_t>(i)]));
      r.c = Rational(0);
      rows.push_back(std::move(r));
    }
    return rows;
  };
  if (strict) {
    // A strict direction exists iff {b . x <= -1} is feasible (scaling).
    std::vector<FMRow> rows = rows_for();
    for (auto& r : rows) r.c = Rational(-1);
    auto x = fm_solve(std::move(rows), k);
    if (!x) return std::nullopt;
    SeparatingDirection d;
    d.strictness = Strictness::Strict;
    d.lambda = scale_to_integers(*x);
    return d;
  }
  // Weak: try pinning each coordinate to +1 / -1 in turn; any nonzero
  // direction can be scaled so that some coordinate is +-1, so this is
  // complete.
  for (int pin = 0; pin < k; ++pin)
    for (int sign : {1, -1}) {
      std::vector<FMRow> rows = rows_for();
      FMRow up, dn;  // x_pin <= sign and -x_pin <= -sign
      up.a.assign(static_cast<std::size_t>(k), Rational(0));
      dn.a.assign(static_cast<std::size_t>(k), Rational(0));
      up.a[static_cast<std::size_t>(pin)] = 1;
      up.c = Rational(sign);
      dn.a[static_cast<std::size_t>(pin)] = -1;
      dn.c = Rational(-sign);
      rows.push_back(up);
      rows.push_back(dn);
      auto x = fm_solve(std::move(rows), k);
      if (x) {
        SeparatingDirection d;
        d.lambda = scale_to_integers(*x);
        bool is_strict = true;
        for (const auto& b : s) {
          Rational dot(0);
          for (int i = 0; i < k; ++i)
            dot += Rational(b[static_cast<std::size_t>(i)]) *
                   d.lambda[static_cast<std::size_t>(i)];
          if (dot >= 0) { is_strict = false; break; }
        }
        d.strictness = is_strict ? Strictness::Strict : Strictness::Weak;
        return d;
      }
    }
  return std::nullopt;
}

}  // namespace detail

/// Validates a claimed direction against a support set.
inline bool direction_separates(const SupportSet& s, const std::vector<Rational>& lambda,
                                bool strict) {
  bool nonzero = false;
  for (const auto& q : lambda)
    if (q != 0) nonzero = true;
  if (!nonzero) return false;
  for (const auto& b : s) {
    Rational dot(0);
    for (std::size_t i = 0; i < b.size() && i < lambda.size(); ++i)
      dot += Rational(b[i]) * lambda[i];
    if (strict ? !(dot < 0) : !(dot <= 0)) return false;
  }
  return true;
}

/// Exact decision: strict mode finds lambda with b . lambda < 0 for all b in
/// S, weak mode finds lambda != 0 with b . lambda <= 0; nullopt iff none
/// exists. A zero weight in S makes the strict problem infeasible outright.
inline std::optional<SeparatingDirection> find_separating_direction(
    const SupportSet& s, bool strict, int k) {
  for (const auto& b : s)
    if (static_cast<int>(b.size()) != k)
      throw ValidationError("support weight has wrong length");
  if (k == 0) return std::nullopt;
  if (strict) {
    BoostWeight zero(static_cast<std::size_t>(k), 0);
    if (s.count(zero)) return std::nullopt;
  }
  std::optional<SeparatingDirection> d = detail::fm_find(s, strict, k);
  if (d)
    internal_check(direction_separates(s, d->lambda, d->strictness == Strictness::Strict),
                   "separating direction fails validation");
  return d;
}

// ---------------------------------------------------------------------------
// Operator nilpotency: M^d = 0 decided by repeated squaring (exact).
// ---------------------------------------------------------------------------

inline bool nilpotency_check(const RfMatrix& m) {
  const std::size_t d = m.size();
  for (const auto& row : m)
    if (row.size() != d) throw ValidationError("nilpotency_check expects a square matrix");
  if (d == 0) return true;
  RfMatrix power = m;
  std::size_t e = 1;
  while (true) {
    if (rf_mat_is_zero(power)) return true;
    if (e >= d) return false;
    power = rf_mat_mult(power, power);
    e *= 2;
  }
}

// ---------------------------------------------------------------------------
// Combined VSI verdict.
// ---------------------------------------------------------------------------

enum class OrderStatus { Certified, Refuted, Inconclusive };

struct OrderVerdict {
  int order = 0;
  OrderStatus status = OrderStatus::Inconclusive;
  std::optional<SeparatingDirection> direction;  ///< set when Certified (may be
                                                 ///< absent for vacuous support)
  bool vacuous = false;                          ///< empty joint support
  std::string witness_id;                        ///< set when Refuted
  std::string witness_value;                     ///< printed nonzero invariant
};

struct VSIVerdict {
  int K = 0;
  std::vector<OrderVerdict> orders;
  std::string convention;
  std::vector<std::string> caveats;
  std::vector<SupportSet> per_order_support;  ///< support of nabla^j Riem alone
};

/// Witness invariants of differential order <= j, in deterministic order:
/// the self-norms <nabla^i Riem, nabla^i Riem> for i = 0..j and, at order 0,
/// the traces of powers of the Ricci and bivector operators.
inline std::vector<NamedInvariant> witness_invariants(const CurvatureStack& stack,
                                                      int up_to_order) {
  std::vector<NamedInvariant> ws;
  int p_max = stack.metric.dim;
  std::vector<NamedInvariant> ops = operator_invariants(stack, p_max);
  for (int i = 0; i <= up_to_order && i <= stack.order; ++i) {
    ws.push_back({"self_norm_" + std::to_string(i), self_norm_invariant(stack, i)});
    if (i == 0)
      for (auto& w : ops) ws.push_back(std::move(w));
  }
  return ws;
}

inline VSIVerdict vsi_verdict(const Metric& metric, const NullFrame& frame, int K,
                              std::size_t component_cap = default_component_cap()) {
  if (K < 0) throw ValidationError("derivative order must be non-negative");
  FrameValidation fv = validate_frame(frame, metric);
  if (!fv.ok)
    throw ValidationError("frame does not satisfy the null-frame pairings: " +
                          fv.violations.front());
  CurvatureStack stack = build_stack(metric, K, component_cap);
  const int k = frame.k;

  VSIVerdict verdict;
  verdict.K = K;
  verdict.convention = boost_weight_convention();

  std::vector<SupportSet> supports;
  for (int j = 0; j <= K; ++j) {
    supports.push_back(
        support_of(bw_decompose(stack.nabla_riem[static_cast<std::size_t>(j)], frame)));
  }
  verdict.per_order_support = supports;

  bool refuted_before = false;
  std::string refuted_id, refuted_value;
  for (int j = 0; j <= K; ++j) {
    OrderVerdict ov;
    ov.order = j;
    SupportSet joint;
    for (int i = 0; i <= j; ++i)
      joint.insert(supports[static_cast<std::size_t>(i)].begin(),
                   supports[static_cast<std::size_t>(i)].end());
    if (joint.empty()) {
      ov.status = OrderStatus::Certified;
      ov.vacuous = true;
      if (k > 0) {
        SeparatingDirection d;
        d.strictness = Strictness::Strict;
        d.lambda.assign(static_cast<std::size_t>(k), Rational(0));
        d.lambda[0] = 1;
        ov.direction = std::move(d);
      }
      verdict.orders.push_back(std::move(ov));
      continue;
    }
    auto dir = find_separating_direction(joint, /*strict=*/true, k);
    if (dir) {
      ov.status = OrderStatus::Certified;
      ov.direction = std::move(dir);
      verdict.orders.push_back(std::move(ov));
      continue;
    }
    if (!refuted_before) {
      for (const NamedInvariant& w : witness_invariants(stack, j)) {
        if (!w.value.is_zero()) {
          refuted_before = true;
          refuted_id = w.name;
          refuted_value = to_expression_string(w.value);
          break;
        }
      }
    }
    if (refuted_before) {
      ov.status = OrderStatus::Refuted;
      ov.witness_id = refuted_id;
      ov.witness_value = refuted_value;
    } else {
      ov.status = OrderStatus::Inconclusive;
    }
    verdict.orders.push_back(std::move(ov));
  }

  bool any_inconclusive = false;
  for (const auto& ov : verdict.orders)
    if (ov.status == OrderStatus::Inconclusive) any_inconclusive = true;
  if (any_inconclusive) {
    verdict.caveats.push_back(
        "inconclusive orders: the finite witness family found no nonzero invariant, "
        "and no strict direction exists in the supplied frame; a different frame "
        "could still certify");
    BoostWeight zero(static_cast<std::size_t>(k), 0);
    for (int j = 0; j <= K; ++j) {
      SupportSet joint;
      for (int i = 0; i <= j; ++i)
        joint.insert(supports[static_cast<std::size_t>(i)].begin(),
                     supports[static_cast<std::size_t>(i)].end());
      if (joint.count(zero) &&
          verdict.orders[static_cast<std::size_t>(j)].status == OrderStatus::Inconclusive) {
        verdict.caveats.push_back(
            "order " + std::to_string(j) +
            ": the zero boost weight occurs, so no strict direction can exist in "
            "this frame");
        break;
      }
    }
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Tensor-product property checks in a fixed frame.
// ---------------------------------------------------------------------------

struct ProductPropertyReport {
  int s_T = 0, s_S = 0, s_TS = 0;  ///< in-frame s-indices (0 = B1 fails)
  bool N_T = false, N_S = false, N_TS = false;
  bool contraction_N = false;      ///< N-condition on one metric contraction of the product
  bool item1_ok = false;           ///< s(T (x) S) >= min(s_T, s_S)
  bool item2_ok = false;           ///< S has N => s(T (x) S) >= s_T; equality case at k
  bool item3_ok = false;           ///< both N => product and contraction have N
};

inline ProductPropertyReport tensor_product_property_check(const Tensor& t,
                                                           const Tensor& s,
                                                           const NullFrame& frame,
                                                           const Metric& metric) {
  const int k = frame.k;
  BConditionReport bt = check_B_conditions(support_of(bw_decompose(t, frame)), k);
  BConditionReport bs = check_B_conditions(support_of(bw_decompose(s, frame)), k);
  Tensor prod = tensor_product(t, s);
  BConditionReport bp = check_B_conditions(support_of(bw_decompose(prod, frame)), k);

  ProductPropertyReport rep;
  rep.s_T = bt.s_index;
  rep.s_S = bs.s_index;
  rep.s_TS = bp.s_index;
  rep.N_T = bt.N;
  rep.N_S = bs.N;
  rep.N_TS = bp.N;

  // One metric contraction of the product: raise the first slot of t, then
  // contract it against the first slot of s inside the product.
  if (t.rank() >= 1 && s.rank() >= 1) {
    Tensor raised = raise_slot(prod, 0, metric);
    Tensor contracted = contract(raised, 0, t.rank());
    if (contracted.rank() == 0) {
      rep.contraction_N = contracted.is_zero();
    } else {
      BConditionReport bc =
          check_B_conditions(support_of(bw_decompose(contracted, frame)), k);
      rep.contraction_N = bc.N;
    }
  }

  int guaranteed = std::min(rep.s_T, rep.s_S);
  rep.item1_ok = (guaranteed == 0) || (rep.s_TS >= guaranteed);
  rep.item2_ok = !rep.N_S || ((rep.s_TS >= rep.s_T) && (rep.s_T < k || rep.N_TS));
  rep.item3_ok = !(rep.N_T && rep.N_S) || (rep.N_TS && rep.contraction_N);
  return rep;
}

}  // namespace vsi
