#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vsi/rational_function.hpp"

namespace vsi {

enum class SlotVariance : char { Up = 'u', Down = 'd' };

using Valence = std::vector<SlotVariance>;

inline Valence down_valence(int rank) { return Valence(rank, SlotVariance::Down); }

/// Advisory symmetry marker; audited by tests, never assumed by algorithms.
enum class SymmetryTag { None, SymmetricPair, RiemannLike };

/// Dense tensor with exact rational-function components over one context.
/// Component layout is row-major with slot 0 most significant.
struct Tensor {
  ContextPtr ctx;
  int dim = 0;
  Valence valence;
  std::vector<RationalFunction> comp;
  SymmetryTag symmetry = SymmetryTag::None;

  static Tensor zeros(ContextPtr ctx, int dim, Valence valence,
                      SymmetryTag tag = SymmetryTag::None) {
    Tensor t;
    t.ctx = std::move(ctx);
    t.dim = dim;
    t.valence = std::move(valence);
    t.symmetry = tag;
    std::size_t total = 1;
    for (std::size_t s = 0; s < t.valence.size(); ++s) {
      total *= static_cast<std::size_t>(dim);
      if (total > (1ull << 40)) throw ResourceLimitError("tensor component count overflow");
    }
    t.comp.assign(total, RationalFunction::zero(t.ctx));
    return t;
  }

  int rank() const { return static_cast<int>(valence.size()); }
  std::size_t size() const { return comp.size(); }

  std::size_t flat(const std::vector<int>& idx) const {
    internal_check(idx.size() == valence.size(), "index rank mismatch");
    std::size_t f = 0;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      internal_check(idx[s] >= 0 && idx[s] < dim, "index out of range");
      f = f * dim + static_cast<std::size_t>(idx[s]);
    }
    return f;
  }

  std::vector<int> unflat(std::size_t f) const {
    std::vector<int> idx(valence.size());
    for (std::size_t s = valence.size(); s-- > 0;) {
      idx[s] = static_cast<int>(f % dim);
      f /= dim;
    }
    return idx;
  }

  const RationalFunction& at(const std::vector<int>& idx) const { return comp[flat(idx)]; }
  RationalFunction& at(const std::vector<int>& idx) { return comp[flat(idx)]; }

  bool is_zero() const {
    for (const auto& c : comp)
      if (!c.is_zero()) return false;
    return true;
  }

  Tensor operator+(const Tensor& o) const {
    require_compatible(o);
    Tensor r = *this;
    for (std::size_t i = 0; i < comp.size(); ++i)
      if (!o.comp[i].is_zero()) r.comp[i] += o.comp[i];
    r.symmetry = SymmetryTag::None;
    return r;
  }

  Tensor operator-(const Tensor& o) const {
    require_compatible(o);
    Tensor r = *this;
    for (std::size_t i = 0; i < comp.size(); ++i)
      if (!o.comp[i].is_zero()) r.comp[i] -= o.comp[i];
    r.symmetry = SymmetryTag::None;
    return r;
  }

  Tensor scaled(const RationalFunction& f) const {
    Tensor r = *this;
    for (auto& c : r.comp)
      if (!c.is_zero()) c *= f;
    return r;
  }

 private:
  void require_compatible(const Tensor& o) const {
    require_same_context(ctx, o.ctx);
    if (dim != o.dim || valence != o.valence)
      throw ValidationError("tensor shape mismatch");
  }
};

/// Outer product; the right factor's slots follow the left factor's.
inline Tensor tensor_product(const Tensor& a, const Tensor& b) {
  require_same_context(a.ctx, b.ctx);
  if (a.dim != b.dim) throw ValidationError("tensor_product: dimension mismatch");
  Valence v = a.valence;
  v.insert(v.end(), b.valence.begin(), b.valence.end());
  Tensor r = Tensor::zeros(a.ctx, a.dim, std::move(v));
  for (std::size_t i = 0; i < a.comp.size(); ++i) {
    if (a.comp[i].is_zero()) continue;
    std::size_t base = i * b.comp.size();
    for (std::size_t j = 0; j < b.comp.size(); ++j) {
      if (b.comp[j].is_zero()) continue;
      r.comp[base + j] = a.comp[i] * b.comp[j];
    }
  }
  return r;
}

/// Natural-pairing contraction of one Up slot against one Down slot.
inline Tensor contract(const Tensor& t, int slot_a, int slot_b) {
  int rank = t.rank();
  if (slot_a == slot_b || slot_a < 0 || slot_b < 0 || slot_a >= rank || slot_b >= rank)
    throw ValidationError("contract: invalid slot pair");
  if (t.valence[slot_a] == t.valence[slot_b])
    throw ValidationError("contract: slots must have opposite variance");
  Valence v;
  for (int s = 0; s < rank; ++s)
    if (s != slot_a && s != slot_b) v.push_back(t.valence[s]);
  Tensor r = Tensor::zeros(t.ctx, t.dim, std::move(v));
  std::vector<int> idx(rank, 0);
  for (std::size_t f = 0; f < t.comp.size(); ++f) {
    if (!t.comp[f].is_zero() && idx[slot_a] == idx[slot_b]) {
      std::size_t rf = 0;
      for (int s = 0; s < rank; ++s)
        if (s != slot_a && s != slot_b) rf = rf * t.dim + static_cast<std::size_t>(idx[s]);
      r.comp[rf] += t.comp[f];
    }
    for (int s = rank - 1; s >= 0; --s) {  // odometer increment
      if (++idx[s] < t.dim) break;
      idx[s] = 0;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Exact linear algebra on small matrices of rational functions.
// ---------------------------------------------------------------------------

using RfMatrix = std::vector<std::vector<RationalFunction>>;

/// Determinant by Laplace expansion with column-mask memoization (n <= ~8).
inline RationalFunction rf_det(const RfMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw ValidationError("determinant of empty matrix");
  const ContextPtr& ctx = m[0][0].context();
  std::vector<std::vector<std::optional<RationalFunction>>> memo(
      n + 1, std::vector<std::optional<RationalFunction>>(1u << n));
  // det of the submatrix formed by rows r..n-1 and the columns in mask.
  auto rec = [&](auto&& self, std::size_t r, unsigned mask) -> RationalFunction {
    if (r == n) return RationalFunction::one(ctx);
    if (memo[r][mask]) return *memo[r][mask];
    RationalFunction acc = RationalFunction::zero(ctx);
    int pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask & (1u << j))) continue;
      if (!m[r][j].is_zero()) {
        RationalFunction sub = self(self, r + 1, mask & ~(1u << j));
        if (!sub.is_zero()) {
          RationalFunction term = m[r][j] * sub;
          acc = (pos % 2 == 0) ? acc + term : acc - term;
        }
      }
      ++pos;
    }
    memo[r][mask] = acc;
    return acc;
  };
  return rec(rec, 0, (1u << n) - 1);
}

/// Inverse via the adjugate (fraction-free in the minors, one division by
/// det); throws ValidationError when the matrix is singular as a matrix of
/// rational functions.
inline RfMatrix rf_inverse(const RfMatrix& m) {
  const std::size_t n = m.size();
  const ContextPtr& ctx = m[0][0].context();
  RationalFunction det = rf_det(m);
  if (det.is_zero()) throw ValidationError("matrix is singular");
  RfMatrix inv(n, std::vector<RationalFunction>(n, RationalFunction::zero(ctx)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Cofactor C_ji for the adjugate.
      RfMatrix minor;
      minor.reserve(n - 1);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<RationalFunction> row;
        row.reserve(n - 1);
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      RationalFunction cof =
          n == 1 ? RationalFunction::one(ctx) : rf_det(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      inv[i][j] = cof / det;
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Metric.
// ---------------------------------------------------------------------------

struct Metric {
  ContextPtr ctx;
  int dim = 0;
  Tensor g;           ///< Down-Down, symmetric
  Tensor g_inv;       ///< Up-Up
  RationalFunction det;

  Metric(ContextPtr c, Tensor metric_tensor)
      : ctx(std::move(c)),
        dim(metric_tensor.dim),
        g(std::move(metric_tensor)),
        g_inv(Tensor::zeros(ctx, dim, Valence{SlotVariance::Up, SlotVariance::Up},
                            SymmetryTag::SymmetricPair)),
        det(RationalFunction::zero(ctx)) {
    if (g.rank() != 2 || g.valence != down_valence(2))
      throw ValidationError("metric must be a rank-2 covariant tensor");
    if (dim != ctx->dimension())
      throw ValidationError("metric dimension differs from coordinate count");
    RfMatrix gm(dim, std::vector<RationalFunction>(dim, RationalFunction::zero(ctx)));
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        if (g.comp[a * dim + b] != g.comp[b * dim + a])
          throw ValidationError("metric is not symmetric");
        gm[a][b] = g.comp[a * dim + b];
      }
    det = rf_det(gm);
    if (det.is_zero()) throw ValidationError("metric is degenerate");
    RfMatrix inv = rf_inverse(gm);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) g_inv.comp[a * dim + b] = inv[a][b];
    g.symmetry = SymmetryTag::SymmetricPair;
  }
};

/// Builds the metric pair (g, g^{-1}, det) from a covariant rank-2 tensor.
inline Metric metric_inverse(Tensor g) {
  ContextPtr ctx = g.ctx;
  return Metric(std::move(ctx), std::move(g));
}

/// Flips one slot's variance by contracting with g (Up -> Down) or g^{-1}
/// (Down -> Up).
inline Tensor raise_lower(const Tensor& t, int slot, const Metric& metric) {
  if (slot < 0 || slot >= t.rank()) throw ValidationError("raise_lower: slot out of range");
  const Tensor& m =
      t.valence[slot] == SlotVariance::Down ? metric.g_inv : metric.g;
  Tensor r = Tensor::zeros(t.ctx, t.dim, t.valence);
  r.valence[slot] = t.valence[slot] == SlotVariance::Down ? SlotVariance::Up
                                                          : SlotVariance::Down;
  const int dim = t.dim;
  std::size_t stride = 1;
  for (int s = t.rank() - 1; s > slot; --s) stride *= dim;
  const std::size_t outer_step = stride * dim;
  std::vector<const RationalFunction*> vals(dim);
  for (std::size_t base = 0; base < t.comp.size(); base += outer_step) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      bool any = false;
      for (int a = 0; a < dim; ++a) {
        vals[a] = &t.comp[base + inner + a * stride];
        any = any || !vals[a]->is_zero();
      }
      if (!any) continue;
      for (int b = 0; b < dim; ++b) {
        RationalFunction acc = RationalFunction::zero(t.ctx);
        for (int a = 0; a < dim; ++a) {
          const RationalFunction& me = m.comp[b * dim + a];
          if (me.is_zero() || vals[a]->is_zero()) continue;
          acc += me * (*vals[a]);
        }
        r.comp[base + inner + b * stride] = std::move(acc);
      }
    }
  }
  return r;
}

inline Tensor raise_slot(const Tensor& t, int slot, const Metric& metric) {
  if (t.valence[slot] != SlotVariance::Down)
    throw ValidationError("raise_slot: slot already contravariant");
  return raise_lower(t, slot, metric);
}

inline Tensor lower_slot(const Tensor& t, int slot, const Metric& metric) {
  if (t.valence[slot] != SlotVariance::Up)
    throw ValidationError("lower_slot: slot already covariant");
  return raise_lower(t, slot, metric);
}

inline Tensor fully_lower(const Tensor& t, const Metric& metric) {
  Tensor r = t;
  for (int s = 0; s < r.rank(); ++s)
    if (r.valence[s] == SlotVariance::Up) r = lower_slot(r, s, metric);
  return r;
}

inline Tensor fully_raise(const Tensor& t, const Metric& metric) {
  Tensor r = t;
  for (int s = 0; s < r.rank(); ++s)
    if (r.valence[s] == SlotVariance::Down) r = raise_slot(r, s, metric);
  return r;
}

/// Full metric contraction <a, b> of two equal-shape covariant tensors.
inline RationalFunction full_contraction(const Tensor& a, const Tensor& b,
                                         const Metric& metric) {
  require_same_context(a.ctx, b.ctx);
  if (a.valence != b.valence || a.dim != b.dim)
    throw ValidationError("full_contraction: shape mismatch");
  Tensor braised = fully_raise(b, metric);
  RationalFunction acc = RationalFunction::zero(a.ctx);
  for (std::size_t f = 0; f < a.comp.size(); ++f) {
    if (a.comp[f].is_zero() || braised.comp[f].is_zero()) continue;
    acc += a.comp[f] * braised.comp[f];
  }
  return acc;
}

/// Audits an advisory pair symmetry: T[..i..j..] == sign * T[..j..i..].
inline bool audit_pair_symmetry(const Tensor& t, int slot_a, int slot_b, int sign) {
  std::vector<int> idx(t.rank(), 0);
  for (std::size_t f = 0; f < t.comp.size(); ++f) {
    std::vector<int> jdx = t.unflat(f);
    std::swap(jdx[slot_a], jdx[slot_b]);
    const RationalFunction& other = t.comp[t.flat(jdx)];
    const RationalFunction& mine = t.comp[f];
    if (sign > 0 ? !(mine == other) : !(mine == -other)) return false;
  }
  (void)idx;
  return true;
}

}  // namespace vsi
