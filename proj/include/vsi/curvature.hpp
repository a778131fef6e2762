#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vsi/poly_gcd.hpp"
#include "vsi/tensor.hpp"

namespace vsi {

/// Levi-Civita connection coefficients Gamma^a_{bc} (symmetric in b, c).
struct Connection {
  ContextPtr ctx;
  int dim = 0;
  Tensor gamma;  ///< valence Up, Down, Down
  std::vector<std::size_t> coord_syms;  ///< coordinate index -> context symbol index
};

inline Connection christoffel(const Metric& metric) {
  const ContextPtr& ctx = metric.ctx;
  const int dim = metric.dim;
  Connection conn{ctx, dim,
                  Tensor::zeros(ctx, dim,
                                Valence{SlotVariance::Up, SlotVariance::Down,
                                        SlotVariance::Down}),
                  ctx->coordinate_indices()};
  // Partials dg[(a,b,c)] = g_{ab,c}.
  std::vector<RationalFunction> dg;
  dg.reserve(static_cast<std::size_t>(dim) * dim * dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        dg.push_back(metric.g.comp[a * dim + b].derivative(conn.coord_syms[c]));
  auto dgv = [&](int a, int b, int c) -> const RationalFunction& {
    return dg[(static_cast<std::size_t>(a) * dim + b) * dim + c];
  };
  const Rational half(1, 2);
  for (int b = 0; b < dim; ++b) {
    for (int c = b; c < dim; ++c) {
      for (int a = 0; a < dim; ++a) {
        RationalFunction acc = RationalFunction::zero(ctx);
        for (int d = 0; d < dim; ++d) {
          const RationalFunction& gi = metric.g_inv.comp[a * dim + d];
          if (gi.is_zero()) continue;
          RationalFunction bracket = dgv(d, b, c) + dgv(d, c, b) - dgv(b, c, d);
          if (bracket.is_zero()) continue;
          acc += gi * bracket;
        }
        acc = acc.scaled(half);
        conn.gamma.comp[(static_cast<std::size_t>(a) * dim + b) * dim + c] = acc;
        conn.gamma.comp[(static_cast<std::size_t>(a) * dim + c) * dim + b] = std::move(acc);
      }
    }
  }
  return conn;
}

/// Riemann tensor, fully lowered:
///   R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
///             + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb},
///   R_{abcd} = g_{ae} R^e_{bcd}.
inline Tensor riemann(const Metric& metric, const Connection& conn) {
  const ContextPtr& ctx = metric.ctx;
  const int dim = metric.dim;
  auto gam = [&](int a, int b, int c) -> const RationalFunction& {
    return conn.gamma.comp[(static_cast<std::size_t>(a) * dim + b) * dim + c];
  };
  Tensor r_up = Tensor::zeros(
      ctx, dim,
      Valence{SlotVariance::Up, SlotVariance::Down, SlotVariance::Down, SlotVariance::Down});
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      for (int c = 0; c < dim; ++c) {
        for (int d = c + 1; d < dim; ++d) {
          RationalFunction acc = gam(a, d, b).derivative(conn.coord_syms[c]) -
                                 gam(a, c, b).derivative(conn.coord_syms[d]);
          for (int e = 0; e < dim; ++e) {
            const RationalFunction& g1 = gam(a, c, e);
            const RationalFunction& g2 = gam(e, d, b);
            if (!g1.is_zero() && !g2.is_zero()) acc += g1 * g2;
            const RationalFunction& g3 = gam(a, d, e);
            const RationalFunction& g4 = gam(e, c, b);
            if (!g3.is_zero() && !g4.is_zero()) acc -= g3 * g4;
          }
          std::size_t f1 = ((static_cast<std::size_t>(a) * dim + b) * dim + c) * dim + d;
          std::size_t f2 = ((static_cast<std::size_t>(a) * dim + b) * dim + d) * dim + c;
          r_up.comp[f2] = -acc;
          r_up.comp[f1] = std::move(acc);
        }
      }
    }
  }
  Tensor lowered = lower_slot(r_up, 0, metric);
  lowered.symmetry = SymmetryTag::RiemannLike;
  return lowered;
}

/// Covariant derivative of a fully covariant tensor; the derivative slot is
/// appended as the LAST index:
///   (nabla T)_{c1..cp e} = d_e T_{c1..cp} - sum_i Gamma^d_{e c_i} T_{c1..d..cp}.
inline Tensor covariant_derivative(const Tensor& t, const Connection& conn) {
  const int dim = t.dim;
  const int p = t.rank();
  for (auto v : t.valence)
    if (v != SlotVariance::Down)
      throw ValidationError("covariant_derivative expects a fully covariant tensor");
  Tensor out = Tensor::zeros(t.ctx, dim, down_valence(p + 1));
  auto gam = [&](int d, int e, int c) -> const RationalFunction& {
    return conn.gamma.comp[(static_cast<std::size_t>(d) * dim + e) * dim + c];
  };
  std::vector<std::size_t> stride(p);
  {
    std::size_t s = 1;
    for (int i = p - 1; i >= 0; --i) {
      stride[i] = s;
      s *= dim;
    }
  }
  std::vector<int> idx(p, 0);
  for (std::size_t base = 0; base < t.comp.size(); ++base) {
    const RationalFunction& tv = t.comp[base];
    for (int e = 0; e < dim; ++e) {
      RationalFunction acc = tv.is_zero()
                                 ? RationalFunction::zero(t.ctx)
                                 : tv.derivative(conn.coord_syms[e]);
      for (int i = 0; i < p; ++i) {
        const int ci = idx[i];
        for (int d = 0; d < dim; ++d) {
          const RationalFunction& g = gam(d, e, ci);
          if (g.is_zero()) continue;
          const std::size_t neighbour =
              base + static_cast<std::size_t>(
                         (static_cast<std::ptrdiff_t>(d) - ci) *
                         static_cast<std::ptrdiff_t>(stride[i]));
          const RationalFunction& tw = t.comp[neighbour];
          if (tw.is_zero()) continue;
          acc -= g * tw;
        }
      }
      out.comp[base * dim + e] = std::move(acc);
    }
    for (int s = p - 1; s >= 0; --s) {  // odometer
      if (++idx[s] < dim) break;
      idx[s] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Curvature stack.
// ---------------------------------------------------------------------------

struct CurvatureStack {
  Metric metric;
  Connection conn;
  int order = 0;                    ///< highest derivative order K
  std::vector<Tensor> nabla_riem;   ///< [j] = nabla^j Riem (rank 4+j, covariant)
  Tensor ricci;                     ///< R_{bd} = R^a_{bad}
  RationalFunction scalar;          ///< g^{bd} R_{bd}
  Tensor traceless_ricci;           ///< S = Ricci - (R/n) g
  std::optional<Tensor> weyl;       ///< dim >= 4
  std::optional<Tensor> weyl_plus;  ///< neutral 4D self-dual part
  std::optional<Tensor> weyl_minus;
  long long components_built = 0;
};

namespace detail {

inline int levi_civita_sign(const std::vector<int>& p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  return sign;
}

/// Exact square root of the metric determinant, if it exists as a rational
/// function (true for the neutral-signature families shipped in the catalog).
inline std::optional<RationalFunction> volume_scale(const Metric& metric) {
  auto ns = poly_sqrt(metric.det.num());
  if (!ns) return std::nullopt;
  auto ds = poly_sqrt(metric.det.den());
  if (!ds) return std::nullopt;
  return RationalFunction(std::move(*ns), std::move(*ds));
}

}  // namespace detail

/// Hodge dual on the first index pair: (*C)_{abcd} = 1/2 eta_{abef} C^{ef}_{cd}.
inline Tensor left_dual(const Tensor& c_lowered, const Metric& metric,
                        const RationalFunction& vol_scale) {
  const int dim = metric.dim;
  internal_check(dim == 4, "left_dual requires dimension 4");
  const ContextPtr& ctx = metric.ctx;
  Tensor c_up2 = raise_slot(raise_slot(c_lowered, 0, metric), 1, metric);
  Tensor out = Tensor::zeros(ctx, dim, down_valence(4));
  const Rational half(1, 2);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      if (a == b) continue;
      for (int cc = 0; cc < dim; ++cc)
        for (int d = 0; d < dim; ++d) {
          RationalFunction acc = RationalFunction::zero(ctx);
          for (int e = 0; e < dim; ++e)
            for (int f = 0; f < dim; ++f) {
              int sign = detail::levi_civita_sign({a, b, e, f});
              if (sign == 0) continue;
              const RationalFunction& cv =
                  c_up2.comp[((static_cast<std::size_t>(e) * dim + f) * dim + cc) * dim + d];
              if (cv.is_zero()) continue;
              acc += sign > 0 ? cv : -cv;
            }
          if (!acc.is_zero())
            out.comp[((static_cast<std::size_t>(a) * dim + b) * dim + cc) * dim + d] =
                acc.scaled(half) * vol_scale;
        }
    }
  return out;
}

/// Builds metric -> connection -> Riemann -> nabla^j Riem (j <= order), plus
/// Ricci data and the Weyl tensor.  Aborts with ResourceLimitError when the
/// running component count would exceed `component_cap`.
inline CurvatureStack build_stack(const Metric& metric, int order,
                                  long long component_cap = default_component_cap()) {
  if (order < 0) throw ValidationError("derivative order must be non-negative");
  const ContextPtr& ctx = metric.ctx;
  const int dim = metric.dim;
  Connection conn = christoffel(metric);
  CurvatureStack stack{metric,
                       conn,
                       order,
                       {},
                       Tensor::zeros(ctx, dim, down_valence(2), SymmetryTag::SymmetricPair),
                       RationalFunction::zero(ctx),
                       Tensor::zeros(ctx, dim, down_valence(2), SymmetryTag::SymmetricPair),
                       std::nullopt,
                       std::nullopt,
                       std::nullopt,
                       0};

  auto charge = [&](long long n) {
    stack.components_built += n;
    if (stack.components_built > component_cap)
      throw ResourceLimitError(
          "component cap exceeded: " + std::to_string(stack.components_built) + " > " +
          std::to_string(component_cap) + " (set VSI_COMPONENT_CAP to raise)");
  };

  long long rank_size = 1;
  for (int s = 0; s < 4; ++s) rank_size *= dim;
  charge(rank_size);
  stack.nabla_riem.push_back(riemann(metric, conn));
  for (int j = 1; j <= order; ++j) {
    rank_size *= dim;
    charge(rank_size);
    stack.nabla_riem.push_back(covariant_derivative(stack.nabla_riem.back(), conn));
  }

  // Ricci: contract the first (raised) slot with the third.
  {
    Tensor r_up = raise_slot(stack.nabla_riem[0], 0, metric);
    Tensor ric = contract(r_up, 0, 2);
    ric.symmetry = SymmetryTag::SymmetricPair;
    stack.ricci = std::move(ric);
    RationalFunction scal = RationalFunction::zero(ctx);
    for (int b = 0; b < dim; ++b)
      for (int d = 0; d < dim; ++d) {
        const RationalFunction& gi = metric.g_inv.comp[b * dim + d];
        const RationalFunction& rc = stack.ricci.comp[b * dim + d];
        if (gi.is_zero() || rc.is_zero()) continue;
        scal += gi * rc;
      }
    stack.scalar = std::move(scal);
    stack.traceless_ricci =
        stack.ricci - metric.g.scaled(stack.scalar.scaled(Rational(1, dim)));
    stack.traceless_ricci.symmetry = SymmetryTag::SymmetricPair;
  }

  // Weyl tensor for dim >= 4:
  // C = R - 1/(n-2) (g_ac R_db - g_ad R_cb - g_bc R_da + g_bd R_ca)
  //       + R/((n-1)(n-2)) (g_ac g_db - g_ad g_cb).
  if (dim >= 4) {
    const Rational c1(1, dim - 2);
    RationalFunction c2 = stack.scalar.scaled(Rational(1, (dim - 1) * (dim - 2)));
    Tensor weyl = stack.nabla_riem[0];
    weyl.symmetry = SymmetryTag::RiemannLike;
    auto gv = [&](int a, int b) -> const RationalFunction& {
      return metric.g.comp[a * dim + b];
    };
    auto rv = [&](int a, int b) -> const RationalFunction& {
      return stack.ricci.comp[a * dim + b];
    };
    std::size_t f = 0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        for (int c = 0; c < dim; ++c)
          for (int d = 0; d < dim; ++d, ++f) {
            auto fma = [](RationalFunction& dst, const RationalFunction& x,
                          const RationalFunction& y, bool neg) {
              if (x.is_zero() || y.is_zero()) return;
              if (neg)
                dst -= x * y;
              else
                dst += x * y;
            };
            RationalFunction corr = RationalFunction::zero(ctx);
            fma(corr, gv(a, c), rv(d, b), false);
            fma(corr, gv(a, d), rv(c, b), true);
            fma(corr, gv(b, c), rv(d, a), true);
            fma(corr, gv(b, d), rv(c, a), false);
            if (!corr.is_zero()) weyl.comp[f] -= corr.scaled(c1);
            if (!c2.is_zero()) {
              RationalFunction gg = RationalFunction::zero(ctx);
              fma(gg, gv(a, c), gv(d, b), false);
              fma(gg, gv(a, d), gv(c, b), true);
              if (!gg.is_zero()) weyl.comp[f] += gg * c2;
            }
          }
    stack.weyl = std::move(weyl);
  }

  // Self-dual / anti-self-dual split: neutral signature (2,2) only, and only
  // when sqrt(det g) is an exact rational function.
  if (dim == 4 && ctx->k() == 2 && ctx->m() == 0) {
    if (auto vol = detail::volume_scale(metric)) {
      Tensor dual = left_dual(*stack.weyl, metric, *vol);
      Tensor plus = *stack.weyl + dual;
      Tensor minus = *stack.weyl - dual;
      const Rational half(1, 2);
      for (auto& cmp : plus.comp) cmp = cmp.scaled(half);
      for (auto& cmp : minus.comp) cmp = cmp.scaled(half);
      stack.weyl_plus = std::move(plus);
      stack.weyl_minus = std::move(minus);
    }
  }
  return stack;
}

/// Full metric self-contraction of nabla^j Riem over all 4+j index pairs.
inline RationalFunction self_norm_invariant(const CurvatureStack& stack, int j) {
  if (j < 0 || j > stack.order)
    throw ValidationError("self_norm_invariant: order out of range");
  const Tensor& t = stack.nabla_riem[j];
  return full_contraction(t, t, stack.metric);
}

// ---------------------------------------------------------------------------
// Curvature operators and their traces.
// ---------------------------------------------------------------------------

inline RfMatrix rf_identity(const ContextPtr& ctx, std::size_t n) {
  RfMatrix m(n, std::vector<RationalFunction>(n, RationalFunction::zero(ctx)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = RationalFunction::one(ctx);
  return m;
}

inline RfMatrix rf_mat_mult(const RfMatrix& a, const RfMatrix& b) {
  const std::size_t n = a.size();
  const ContextPtr& ctx = a[0][0].context();
  RfMatrix r(n, std::vector<RationalFunction>(n, RationalFunction::zero(ctx)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t kk = 0; kk < n; ++kk) {
      if (a[i][kk].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b[kk][j].is_zero()) continue;
        r[i][j] += a[i][kk] * b[kk][j];
      }
    }
  return r;
}

inline RationalFunction rf_mat_trace(const RfMatrix& m) {
  RationalFunction acc = RationalFunction::zero(m[0][0].context());
  for (std::size_t i = 0; i < m.size(); ++i) acc += m[i][i];
  return acc;
}

inline bool rf_mat_is_zero(const RfMatrix& m) {
  for (const auto& row : m)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

/// Ricci operator R^a_b as a dim x dim matrix.
inline RfMatrix ricci_operator(const CurvatureStack& stack) {
  const int dim = stack.metric.dim;
  Tensor up = raise_slot(stack.ricci, 0, stack.metric);
  RfMatrix m(dim, std::vector<RationalFunction>(dim, RationalFunction::zero(stack.metric.ctx)));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) m[a][b] = up.comp[a * dim + b];
  return m;
}

/// Curvature operator on bivectors, R^{ab}_{cd} over ordered pairs a<b, c<d.
inline RfMatrix bivector_operator(const CurvatureStack& stack) {
  const int dim = stack.metric.dim;
  Tensor r2 = raise_slot(raise_slot(stack.nabla_riem[0], 0, stack.metric), 1, stack.metric);
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b) pairs.emplace_back(a, b);
  const std::size_t D = pairs.size();
  RfMatrix m(D, std::vector<RationalFunction>(D, RationalFunction::zero(stack.metric.ctx)));
  for (std::size_t p = 0; p < D; ++p)
    for (std::size_t q = 0; q < D; ++q) {
      auto [a, b] = pairs[p];
      auto [c, d] = pairs[q];
      m[p][q] =
          r2.comp[((static_cast<std::size_t>(a) * dim + b) * dim + c) * dim + d];
    }
  return m;
}

struct NamedInvariant {
  std::string name;
  RationalFunction value;
};

/// Traces tr(M^p), p = 1..p_max, of the Ricci and bivector curvature operators.
inline std::vector<NamedInvariant> operator_invariants(const CurvatureStack& stack,
                                                       int p_max) {
  std::vector<NamedInvariant> out;
  if (p_max < 1) return out;
  const RfMatrix ric = ricci_operator(stack);
  RfMatrix acc = ric;
  for (int p = 1; p <= p_max; ++p) {
    if (p > 1) acc = rf_mat_mult(acc, ric);
    out.push_back({"tr(Ricci^" + std::to_string(p) + ")", rf_mat_trace(acc)});
  }
  const RfMatrix biv = bivector_operator(stack);
  RfMatrix bacc = biv;
  for (int p = 1; p <= p_max; ++p) {
    if (p > 1) bacc = rf_mat_mult(bacc, biv);
    out.push_back({"tr(Bivector^" + std::to_string(p) + ")", rf_mat_trace(bacc)});
  }
  return out;
}

/// The (W+, W-) pair; requires a neutral 4D stack with an exact volume form.
inline std::pair<Tensor, Tensor> weyl_split(const CurvatureStack& stack) {
  if (!stack.weyl_plus || !stack.weyl_minus)
    throw ValidationError(
        "weyl_split requires signature (2,2) in dimension 4 with an exact volume form");
  return {*stack.weyl_plus, *stack.weyl_minus};
}

}  // namespace vsi
