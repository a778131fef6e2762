#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vsi/curvature.hpp"
#include "vsi/tensor.hpp"

namespace vsi {

/// Human-readable statement of the implemented boost-weight counting rule.
inline const char* boost_weight_convention() {
  return "boost weights count frame-vector slots of fully covariant components: "
         "+1 per l^I slot, -1 per n^I slot, 0 per m^i slot; the weight-b part "
         "scales by prod_I s_I^{b_I} under the boost l^I -> s_I l^I, n^I -> n^I/s_I";
}

struct FrameRole {
  enum Kind { L, N, M } kind = L;
  int index = 0;  ///< null-pair index I (for L/N) or spacelike index i (for M)

  std::string name() const {
    switch (kind) {
      case L: return "l" + std::to_string(index + 1);
      case N: return "n" + std::to_string(index + 1);
      default: return "m" + std::to_string(index + 1);
    }
  }
};

/// Null frame: k pairs (l^I, n^I) with g(l^I, n^I) = 1 and m spacelike unit
/// vectors m^i, all other pairings zero.
struct NullFrame {
  ContextPtr ctx;
  int dim = 0;
  int k = 0, m = 0;
  std::vector<Tensor> vectors;      ///< rank-1 contravariant, frame order
  std::vector<FrameRole> roles;

  const Tensor& vector_of(FrameRole::Kind kind, int index) const {
    for (std::size_t a = 0; a < roles.size(); ++a)
      if (roles[a].kind == kind && roles[a].index == index) return vectors[a];
    throw ValidationError("frame lacks a vector with role " +
                          FrameRole{kind, index}.name());
  }
};

struct FrameValidation {
  bool ok = true;
  std::vector<std::string> violations;
};

namespace detail {

inline RationalFunction pairing(const Metric& metric, const Tensor& x, const Tensor& y) {
  const int dim = metric.dim;
  RationalFunction acc = RationalFunction::zero(metric.ctx);
  for (int a = 0; a < dim; ++a) {
    if (x.comp[a].is_zero()) continue;
    for (int b = 0; b < dim; ++b) {
      const RationalFunction& g = metric.g.comp[a * dim + b];
      if (g.is_zero() || y.comp[b].is_zero()) continue;
      acc += x.comp[a] * g * y.comp[b];
    }
  }
  return acc;
}

}  // namespace detail

/// Checks completeness of the role assignment and all symbolic pairings
/// g(E_a, E_b) against the null-frame normal form.
inline FrameValidation validate_frame(const NullFrame& frame, const Metric& metric) {
  FrameValidation v;
  auto fail = [&](const std::string& s) {
    v.ok = false;
    v.violations.push_back(s);
  };
  if (frame.dim != metric.dim || static_cast<int>(frame.vectors.size()) != frame.dim)
    fail("frame has " + std::to_string(frame.vectors.size()) + " vectors, expected " +
         std::to_string(metric.dim));
  if (frame.k != metric.ctx->k() || frame.m != metric.ctx->m())
    fail("frame signature (" + std::to_string(frame.k) + "," + std::to_string(frame.m) +
         ") differs from context");
  std::set<std::pair<int, int>> seen;
  for (const auto& r : frame.roles) {
    int lim = r.kind == FrameRole::M ? frame.m : frame.k;
    if (r.index < 0 || r.index >= lim) fail("role index out of range for " + r.name());
    if (!seen.insert({static_cast<int>(r.kind), r.index}).second)
      fail("duplicate role " + r.name());
  }
  if (!v.ok) return v;
  for (std::size_t a = 0; a < frame.vectors.size(); ++a) {
    for (std::size_t b = a; b < frame.vectors.size(); ++b) {
      RationalFunction p = detail::pairing(metric, frame.vectors[a], frame.vectors[b]);
      const FrameRole& ra = frame.roles[a];
      const FrameRole& rb = frame.roles[b];
      bool unit_pair =
          (ra.kind == FrameRole::L && rb.kind == FrameRole::N && ra.index == rb.index) ||
          (ra.kind == FrameRole::N && rb.kind == FrameRole::L && ra.index == rb.index) ||
          (ra.kind == FrameRole::M && rb.kind == FrameRole::M && ra.index == rb.index);
      RationalFunction expected = unit_pair ? RationalFunction::one(metric.ctx)
                                            : RationalFunction::zero(metric.ctx);
      if (!(p == expected))
        fail("g(" + ra.name() + "," + rb.name() + ") = " + "(" +
             (p.is_zero() ? std::string("0") : std::string("nonzero")) + ") != " +
             (unit_pair ? "1" : "0"));
    }
  }
  return v;
}

/// Components of a fully covariant tensor in a frame basis.
struct FrameComponents {
  ContextPtr ctx;
  int dim = 0;
  int rank = 0;
  std::vector<RationalFunction> comp;

  std::vector<int> unflat(std::size_t f) const {
    std::vector<int> idx(rank);
    for (int s = rank; s-- > 0;) {
      idx[s] = static_cast<int>(f % dim);
      f /= dim;
    }
    return idx;
  }
  std::size_t flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * dim + static_cast<std::size_t>(i);
    return f;
  }
  const RationalFunction& at(const std::vector<int>& idx) const { return comp[flat(idx)]; }
};

/// T(E_{mu_1}, ..., E_{mu_p}) for every frame multi-index; T must be fully
/// covariant (lower first with fully_lower if needed).
inline FrameComponents frame_components(const Tensor& t, const NullFrame& frame) {
  require_same_context(t.ctx, frame.ctx);
  for (auto v : t.valence)
    if (v != SlotVariance::Down)
      throw ValidationError("frame_components expects a fully covariant tensor");
  const int dim = t.dim;
  if (dim != frame.dim) throw ValidationError("frame/tensor dimension mismatch");
  const int p = t.rank();
  // Per coordinate value a: list of (mu, coefficient E_mu^a != 0).
  std::vector<std::vector<std::pair<int, const RationalFunction*>>> cols(dim);
  for (int mu = 0; mu < dim; ++mu)
    for (int a = 0; a < dim; ++a)
      if (!frame.vectors[mu].comp[a].is_zero())
        cols[a].push_back({mu, &frame.vectors[mu].comp[a]});
  std::vector<RationalFunction> cur = t.comp;
  std::size_t total = cur.size();
  for (int s = 0; s < p; ++s) {
    std::size_t stride = 1;
    for (int r = p - 1; r > s; --r) stride *= dim;
    std::vector<RationalFunction> next(total, RationalFunction::zero(t.ctx));
    const std::size_t block = stride * dim;
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        for (int a = 0; a < dim; ++a) {
          const RationalFunction& src = cur[base + inner + a * stride];
          if (src.is_zero()) continue;
          for (auto [mu, coef] : cols[a])
            next[base + inner + static_cast<std::size_t>(mu) * stride] += *coef * src;
        }
      }
    }
    cur = std::move(next);
  }
  return FrameComponents{t.ctx, dim, p, std::move(cur)};
}

using BoostWeight = std::vector<int>;

/// Weight of one frame multi-index under the counting rule of
/// boost_weight_convention().
inline BoostWeight boost_weight_of(const std::vector<int>& frame_index,
                                   const NullFrame& frame) {
  BoostWeight b(frame.k, 0);
  for (int mu : frame_index) {
    const FrameRole& r = frame.roles.at(mu);
    if (r.kind == FrameRole::L) b[r.index] += 1;
    else if (r.kind == FrameRole::N) b[r.index] -= 1;
  }
  return b;
}

/// Frame components of one tensor grouped by boost weight (zeros dropped).
struct BWDecomposition {
  int k = 0;
  int rank = 0;
  std::map<BoostWeight, std::vector<std::pair<std::vector<int>, RationalFunction>>> parts;

  std::set<BoostWeight> support() const {
    std::set<BoostWeight> s;
    for (const auto& [b, _] : parts) s.insert(b);
    return s;
  }
  std::size_t component_count(const BoostWeight& b) const {
    auto it = parts.find(b);
    return it == parts.end() ? 0 : it->second.size();
  }
};

inline BWDecomposition bw_decompose(const Tensor& t, const NullFrame& frame) {
  FrameComponents fc = frame_components(t, frame);
  BWDecomposition dec;
  dec.k = frame.k;
  dec.rank = fc.rank;
  for (std::size_t f = 0; f < fc.comp.size(); ++f) {
    if (fc.comp[f].is_zero()) continue;
    std::vector<int> idx = fc.unflat(f);
    dec.parts[boost_weight_of(idx, frame)].push_back({std::move(idx), fc.comp[f]});
  }
  return dec;
}

// ---------------------------------------------------------------------------
// Spin coefficients (dimension 4, signature (2,2)) and geometry flags.
//
// Writing l = l^1, n = n^1, m = l^2, mt = -n^2 (so ds^2 = 2 l n - 2 m mt on
// the frame), the derivative of l decomposes as
//   nabla_X l = (P) l + (Q) m + (R) mt,
// and the twelve quantities are read off at X in {l, mt, m, n}:
//   X = l : P = eps + eps~,  Q = kappa~, R = kappa
//   X = mt: P = alpha+beta~, Q = sigma~, R = rho
//   X = m : P = alpha~+beta, Q = rho~,  R = sigma
//   X = n : P = gamma+gamma~,Q = tau~,  R = tau
// with P = g(nabla_X l, n), Q = -g(nabla_X l, mt), R = -g(nabla_X l, m).
// ---------------------------------------------------------------------------

struct SpinCoefficients {
  RationalFunction kappa, kappa_tilde, rho, rho_tilde, sigma, sigma_tilde, tau, tau_tilde;
  RationalFunction eps_sum;          ///< eps + eps~
  RationalFunction alpha_beta_tilde; ///< alpha + beta~
  RationalFunction alpha_tilde_beta; ///< alpha~ + beta
  RationalFunction gamma_sum;        ///< gamma + gamma~

  std::vector<std::pair<std::string, const RationalFunction*>> named() const {
    return {{"kappa", &kappa},
            {"kappa~", &kappa_tilde},
            {"rho", &rho},
            {"rho~", &rho_tilde},
            {"sigma", &sigma},
            {"sigma~", &sigma_tilde},
            {"tau", &tau},
            {"tau~", &tau_tilde},
            {"eps+eps~", &eps_sum},
            {"alpha+beta~", &alpha_beta_tilde},
            {"alpha~+beta", &alpha_tilde_beta},
            {"gamma+gamma~", &gamma_sum}};
  }
};

namespace detail {

/// (nabla l)_{a;b} X^b Y^a, i.e. g(Y, nabla_X l), from the lowered bilinear
/// form dl[a*dim+b] = nabla_b l_a.
inline RationalFunction dl_value(const std::vector<RationalFunction>& dl, int dim,
                                 const Tensor& y, const Tensor& x,
                                 const ContextPtr& ctx) {
  RationalFunction acc = RationalFunction::zero(ctx);
  for (int a = 0; a < dim; ++a) {
    if (y.comp[a].is_zero()) continue;
    for (int b = 0; b < dim; ++b) {
      const RationalFunction& d = dl[static_cast<std::size_t>(a) * dim + b];
      if (d.is_zero() || x.comp[b].is_zero()) continue;
      acc += y.comp[a] * d * x.comp[b];
    }
  }
  return acc;
}

inline Tensor negate_vector(const Tensor& t) {
  Tensor r = t;
  for (auto& c : r.comp)
    if (!c.is_zero()) c = -c;
  return r;
}

}  // namespace detail

/// Covariant derivative of the lowered l^1, as dl[a*dim+b] = nabla_b l_a.
inline std::vector<RationalFunction> lowered_l_derivative(const Metric& metric,
                                                          const Connection& conn,
                                                          const NullFrame& frame) {
  const Tensor& l = frame.vector_of(FrameRole::L, 0);
  Tensor l_low = lower_slot(l, 0, metric);
  Tensor dl = covariant_derivative(l_low, conn);
  return dl.comp;  // layout [a*dim + b] = nabla_b l_a
}

inline SpinCoefficients spin_coefficients(const Metric& metric, const Connection& conn,
                                          const NullFrame& frame) {
  if (frame.k != 2 || frame.m != 0 || frame.dim != 4)
    throw ValidationError("spin_coefficients requires a (2,2) frame in dimension 4");
  const ContextPtr& ctx = metric.ctx;
  const int dim = 4;
  std::vector<RationalFunction> dl = lowered_l_derivative(metric, conn, frame);
  const Tensor& l = frame.vector_of(FrameRole::L, 0);
  const Tensor& n = frame.vector_of(FrameRole::N, 0);
  const Tensor& m = frame.vector_of(FrameRole::L, 1);
  Tensor mt = detail::negate_vector(frame.vector_of(FrameRole::N, 1));
  auto val = [&](const Tensor& y, const Tensor& x) {
    return detail::dl_value(dl, dim, y, x, ctx);
  };
  SpinCoefficients s{
      /*kappa*/ -val(m, l),
      /*kappa_tilde*/ -val(mt, l),
      /*rho*/ -val(m, mt),
      /*rho_tilde*/ -val(mt, m),
      /*sigma*/ -val(m, m),
      /*sigma_tilde*/ -val(mt, mt),
      /*tau*/ -val(m, n),
      /*tau_tilde*/ -val(mt, n),
      /*eps_sum*/ val(n, l),
      /*alpha_beta_tilde*/ val(n, mt),
      /*alpha_tilde_beta*/ val(n, m),
      /*gamma_sum*/ val(n, n)};
  return s;
}

/// Exact check that nabla_X l = P l + Q m + R mt reconstructs nabla l for
/// all four frame directions X; true for any valid frame by completeness.
inline bool spin_reconstruction_ok(const Metric& metric, const Connection& conn,
                                   const NullFrame& frame, const SpinCoefficients& s) {
  const int dim = 4;
  std::vector<RationalFunction> dl = lowered_l_derivative(metric, conn, frame);
  const Tensor& l = frame.vector_of(FrameRole::L, 0);
  const Tensor& n = frame.vector_of(FrameRole::N, 0);
  const Tensor& m = frame.vector_of(FrameRole::L, 1);
  Tensor mt = detail::negate_vector(frame.vector_of(FrameRole::N, 1));
  struct Row {
    const Tensor* x;
    const RationalFunction *p, *q, *r;
  };
  const Row rows[4] = {{&l, &s.eps_sum, &s.kappa_tilde, &s.kappa},
                       {&mt, &s.alpha_beta_tilde, &s.sigma_tilde, &s.rho},
                       {&m, &s.alpha_tilde_beta, &s.rho_tilde, &s.sigma},
                       {&n, &s.gamma_sum, &s.tau_tilde, &s.tau}};
  for (const Row& row : rows) {
    // nabla_X l (vector) has lowered components sum_b dl[a*dim+b] X^b.
    for (int a = 0; a < dim; ++a) {
      RationalFunction lhs = RationalFunction::zero(metric.ctx);
      for (int b = 0; b < dim; ++b) {
        const RationalFunction& d = dl[static_cast<std::size_t>(a) * dim + b];
        if (d.is_zero() || row.x->comp[b].is_zero()) continue;
        lhs += d * row.x->comp[b];
      }
      // Lowered components of P l + Q m + R mt.
      Tensor l_low = lower_slot(l, 0, metric);
      Tensor m_low = lower_slot(m, 0, metric);
      Tensor mt_low = lower_slot(mt, 0, metric);
      RationalFunction rhs = (*row.p) * l_low.comp[a] + (*row.q) * m_low.comp[a] +
                             (*row.r) * mt_low.comp[a];
      if (!(lhs == rhs)) return false;
    }
  }
  return true;
}

struct GeometryFlags {
  bool walker_plane = false;          ///< span(l^1..l^k) invariant under nabla
  bool kundt = false;                 ///< l^1 geodesic, expansion/shear/twist free
  bool recurrent = false;             ///< nabla l^1 = l^1 (x) (one-form)
  bool covariantly_constant = false;  ///< nabla l^1 = 0
  std::optional<SpinCoefficients> spins;  ///< populated in neutral dimension 4
  bool spin_reconstruction = true;
};

/// Decides the geometry flags exactly from nabla of the frame's l-vectors.
inline GeometryFlags classify_geometry(const Metric& metric, const NullFrame& frame) {
  Connection conn = christoffel(metric);
  const int dim = metric.dim;
  GeometryFlags flags;

  // nabla of every lowered l^I.
  std::vector<std::vector<RationalFunction>> dls;
  for (int I = 0; I < frame.k; ++I) {
    Tensor low = lower_slot(frame.vector_of(FrameRole::L, I), 0, metric);
    dls.push_back(covariant_derivative(low, conn).comp);
  }
  auto value = [&](const std::vector<RationalFunction>& dl, const Tensor& y,
                   const Tensor& x) {
    return detail::dl_value(dl, dim, y, x, metric.ctx);
  };

  // Walker: for all frame X, all I, g(nabla_X l^I, w) = 0 for w among the
  // l's and m's (the orthogonal complement of the candidate plane).
  std::vector<const Tensor*> plane_perp;
  for (int I = 0; I < frame.k; ++I) plane_perp.push_back(&frame.vector_of(FrameRole::L, I));
  for (int i = 0; i < frame.m; ++i) plane_perp.push_back(&frame.vector_of(FrameRole::M, i));
  flags.walker_plane = true;
  for (int I = 0; I < frame.k && flags.walker_plane; ++I)
    for (const Tensor& x : frame.vectors) {
      for (const Tensor* w : plane_perp)
        if (!value(dls[I], *w, x).is_zero()) {
          flags.walker_plane = false;
          break;
        }
      if (!flags.walker_plane) break;
    }

  // Kundt for the l^1 congruence: screen basis S = everything except l^1, n^1;
  // require g(nabla_X l^1, Y) = 0 for Y in S and X in {l^1} union S.
  {
    const Tensor& l1 = frame.vector_of(FrameRole::L, 0);
    std::vector<const Tensor*> screen;
    for (std::size_t a = 0; a < frame.vectors.size(); ++a) {
      if (frame.roles[a].index == 0 &&
          (frame.roles[a].kind == FrameRole::L || frame.roles[a].kind == FrameRole::N))
        continue;
      screen.push_back(&frame.vectors[a]);
    }
    flags.kundt = true;
    std::vector<const Tensor*> xs = screen;
    xs.push_back(&l1);
    for (const Tensor* y : screen) {
      for (const Tensor* x : xs)
        if (!value(dls[0], *y, *x).is_zero()) {
          flags.kundt = false;
          break;
        }
      if (!flags.kundt) break;
    }
  }

  // Recurrence and constancy of lowered l^1.
  {
    const std::vector<RationalFunction>& dl = dls[0];
    Tensor l_low = lower_slot(frame.vector_of(FrameRole::L, 0), 0, metric);
    flags.covariantly_constant = true;
    for (const auto& c : dl)
      if (!c.is_zero()) {
        flags.covariantly_constant = false;
        break;
      }
    flags.recurrent = true;
    for (int a = 0; a < dim && flags.recurrent; ++a)
      for (int b = 0; b < dim && flags.recurrent; ++b)
        for (int c = 0; c < dim; ++c) {
          // column proportionality: dl[a][b] l_c == dl[c][b] l_a
          RationalFunction lhs = dl[static_cast<std::size_t>(a) * dim + b] * l_low.comp[c];
          RationalFunction rhs = dl[static_cast<std::size_t>(c) * dim + b] * l_low.comp[a];
          if (!(lhs == rhs)) {
            flags.recurrent = false;
            break;
          }
        }
  }

  if (dim == 4 && frame.k == 2 && frame.m == 0) {
    SpinCoefficients s = spin_coefficients(metric, conn, frame);
    flags.spin_reconstruction = spin_reconstruction_ok(metric, conn, frame, s);
    flags.spins = std::move(s);
  }
  return flags;
}

/// Applies a rational boost to a frame: l^I -> s_I l^I, n^I -> n^I / s_I.
inline NullFrame boost_frame(const NullFrame& frame, const std::vector<Rational>& s) {
  if (static_cast<int>(s.size()) != frame.k)
    throw ValidationError("boost parameter count must equal k");
  for (const auto& si : s)
    if (si == 0) throw ValidationError("boost parameters must be non-zero");
  NullFrame out = frame;
  for (std::size_t a = 0; a < out.vectors.size(); ++a) {
    const FrameRole& r = out.roles[a];
    if (r.kind == FrameRole::L)
      out.vectors[a] = out.vectors[a].scaled(
          RationalFunction::constant(frame.ctx, s[r.index]));
    else if (r.kind == FrameRole::N)
      out.vectors[a] = out.vectors[a].scaled(
          RationalFunction::constant(frame.ctx, 1 / s[r.index]));
  }
  return out;
}

}  // namespace vsi
