#pragma once

/// Numeric cross-checking of the symbolic curvature pipeline.
///
/// Every quantity the engine produces symbolically is recomputed here by an
/// independent route: draw a random rational point, evaluate the metric
/// component functions (and their coordinate partials) at that point, and
/// rebuild the inverse metric, connection, curvature, covariant derivatives,
/// and scalar invariants by plain numeric linear algebra over exact
/// rationals.  The two routes share only the expression evaluator, so a bug
/// in index bookkeeping, contraction order, or sign conventions shows up as
/// an exact mismatch at some sample point.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vsi/catalog.hpp"
#include "vsi/curvature.hpp"
#include "vsi/errors.hpp"
#include "vsi/tensor.hpp"

namespace vsi {

/// How to sample points for a cross-check run.
struct SamplePlan {
  std::uint64_t seed = 20260825;
  int points = 20;        ///< number of sample points to check
  int num_range = 6;      ///< numerators drawn from [-num_range, num_range]
  int den_range = 4;      ///< denominators drawn from [1, den_range]
  int retry_limit = 60;   ///< fresh draws per point before giving up on it
};

/// One exact disagreement between the symbolic and numeric routes.
struct OracleMismatch {
  std::string quantity;  ///< e.g. "christoffel", "nabla^2 riemann"
  std::string location;  ///< index tuple, or invariant name
  std::string symbolic;  ///< value of the evaluated symbolic expression
  std::string numeric;   ///< value rebuilt numerically at the point
  std::string point;     ///< the sample point, as name=value pairs
};

struct OracleReport {
  int points_requested = 0;
  int points_checked = 0;
  int points_skipped = 0;  ///< point slots whose retry budget ran out
  int retries_used = 0;
  long long comparisons = 0;
  std::vector<OracleMismatch> mismatches;
  bool truncated = false;  ///< true if further mismatches were dropped

  bool ok() const { return mismatches.empty() && points_checked > 0; }
};

namespace detail {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;

/// Exact Gauss-Jordan inverse; nullopt when the matrix is singular.
inline std::optional<QMat> q_inverse(QMat m) {
  const std::size_t n = m.size();
  QMat inv(n, QVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    Rational p = m[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline std::string q_str(const Rational& q) { return q.get_str(); }

inline std::string point_string(const ContextPtr& ctx, const QVec& values) {
  std::string out;
  for (std::size_t i = 0; i < ctx->size(); ++i) {
    if (!out.empty()) out += ", ";
    out += ctx->symbol(i).name + "=" + q_str(values[i]);
  }
  return out;
}

inline std::string index_string(const std::vector<int>& idx) {
  std::string out = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(idx[i] + 1);
  }
  return out + ")";
}

/// Evaluate every component of a tensor at a point (flat layout).
inline QVec eval_tensor(const Tensor& t, const QVec& values) {
  QVec out(t.comp.size(), Rational(0));
  for (std::size_t f = 0; f < t.comp.size(); ++f)
    if (!t.comp[f].is_zero()) out[f] = t.comp[f].evaluate(values);
  return out;
}

/// Coordinate partials of every component, hoisted once per run so the
/// per-point work is evaluation only.  dt[e][flat] = d(comp[flat]) / dx_e.
inline std::vector<std::vector<RationalFunction>> tensor_partials(
    const Tensor& t, const std::vector<std::size_t>& coord_syms) {
  std::vector<std::vector<RationalFunction>> dt;
  dt.reserve(coord_syms.size());
  for (std::size_t e = 0; e < coord_syms.size(); ++e) {
    std::vector<RationalFunction> row;
    row.reserve(t.comp.size());
    for (const RationalFunction& f : t.comp) row.push_back(f.derivative(coord_syms[e]));
    dt.push_back(std::move(row));
  }
  return dt;
}

/// Raise every slot of a point-evaluated covariant tensor with the numeric
/// inverse metric, one slot at a time.
inline QVec raise_all_numeric(const QVec& vals, int rank, int dim, const QMat& ginv) {
  QVec cur = vals;
  std::size_t total = cur.size();
  for (int s = 0; s < rank; ++s) {
    QVec next(total, Rational(0));
    // stride of slot s in the flat layout (row-major, last index fastest)
    std::size_t stride = 1;
    for (int t = rank - 1; t > s; --t) stride *= static_cast<std::size_t>(dim);
    std::size_t block = stride * static_cast<std::size_t>(dim);
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (int a = 0; a < dim; ++a) {
          Rational acc(0);
          for (int b = 0; b < dim; ++b) {
            const Rational& v = cur[base + static_cast<std::size_t>(b) * stride + off];
            if (v != 0 && ginv[a][b] != 0) acc += ginv[a][b] * v;
          }
          next[base + static_cast<std::size_t>(a) * stride + off] = std::move(acc);
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

inline Rational dot(const QVec& a, const QVec& b) {
  Rational acc(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) acc += a[i] * b[i];
  return acc;
}

}  // namespace detail

/// Cross-check a curvature stack against independent numeric recomputation
/// at randomly drawn rational points.  Mismatch list is capped to keep
/// reports readable; `truncated` flags the cap.
inline OracleReport cross_check(const CurvatureStack& stack, const SamplePlan& plan) {
  if (plan.points <= 0) throw ValidationError("cross_check: points must be positive");
  if (plan.num_range < 1 || plan.den_range < 1)
    throw ValidationError("cross_check: sample ranges must be positive");

  const ContextPtr& ctx = stack.metric.ctx;
  const int dim = stack.metric.dim;
  const std::vector<std::size_t>& coords = stack.conn.coord_syms;
  const std::size_t ncoord = coords.size();
  constexpr std::size_t kMismatchCap = 16;

  OracleReport report;
  report.points_requested = plan.points;

  // ---- hoisted symbolic data (derivatives taken once) ----
  const Tensor& g = stack.metric.g;
  // dg[e][a*dim+b] = g_{ab,e}
  auto dg = detail::tensor_partials(g, coords);
  // ddg[e][f][a*dim+b] = g_{ab,ef} for e <= f
  std::vector<std::vector<std::vector<RationalFunction>>> ddg(ncoord);
  for (std::size_t e = 0; e < ncoord; ++e) {
    ddg[e].resize(ncoord);
    for (std::size_t f = e; f < ncoord; ++f) {
      ddg[e][f].reserve(dg[e].size());
      for (const RationalFunction& h : dg[e]) ddg[e][f].push_back(h.derivative(coords[f]));
    }
  }
  // dprev[j][e][flat] = partials of nabla^(j-1) Riem, feeding the numeric
  // covariant derivative at level j
  std::vector<std::vector<std::vector<RationalFunction>>> dprev(
      static_cast<std::size_t>(stack.order) + 1);
  for (int j = 1; j <= stack.order; ++j)
    dprev[static_cast<std::size_t>(j)] =
        detail::tensor_partials(stack.nabla_riem[static_cast<std::size_t>(j) - 1], coords);

  // symbolic scalar invariants, computed once
  std::vector<std::pair<std::string, RationalFunction>> invariants;
  for (int j = 0; j <= stack.order; ++j)
    invariants.emplace_back("self_norm_" + std::to_string(j), self_norm_invariant(stack, j));
  std::vector<NamedInvariant> ops = operator_invariants(stack, 3);
  for (auto& w : ops) invariants.emplace_back(w.name, std::move(w.value));

  auto record = [&](const std::string& quantity, const std::string& location,
                    const Rational& sym, const Rational& num, const std::string& pt) {
    ++report.comparisons;
    if (sym == num) return;
    if (report.mismatches.size() >= kMismatchCap) {
      report.truncated = true;
      return;
    }
    report.mismatches.push_back(
        {quantity, location, detail::q_str(sym), detail::q_str(num), pt});
  };

  std::mt19937_64 rng(plan.seed);
  std::uniform_int_distribution<int> num_dist(-plan.num_range, plan.num_range);
  std::uniform_int_distribution<int> den_dist(1, plan.den_range);

  for (int slot = 0; slot < plan.points; ++slot) {
    bool done = false;
    for (int attempt = 0; attempt < plan.retry_limit && !done; ++attempt) {
      if (attempt > 0) ++report.retries_used;
      detail::QVec values(ctx->size(), Rational(0));
      for (std::size_t i = 0; i < ctx->size(); ++i) {
        values[i] = Rational(num_dist(rng), den_dist(rng));
        values[i].canonicalize();
      }
      try {
        const std::string pt = detail::point_string(ctx, values);

        // metric and its inverse
        detail::QVec gval = detail::eval_tensor(g, values);
        detail::QMat gm(dim, detail::QVec(dim, Rational(0)));
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            gm[a][b] = gval[static_cast<std::size_t>(a) * dim + b];
        auto ginv_opt = detail::q_inverse(gm);
        if (!ginv_opt) continue;  // degenerate at this point: redraw
        const detail::QMat& G = *ginv_opt;
        detail::QVec ginv_sym = detail::eval_tensor(stack.metric.g_inv, values);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            record("metric_inverse", detail::index_string({a, b}),
                   ginv_sym[static_cast<std::size_t>(a) * dim + b], G[a][b], pt);

        // first partials of g at the point
        std::vector<detail::QVec> dgval(ncoord);
        for (std::size_t e = 0; e < ncoord; ++e) {
          dgval[e].resize(dg[e].size(), Rational(0));
          for (std::size_t f = 0; f < dg[e].size(); ++f)
            if (!dg[e][f].is_zero()) dgval[e][f] = dg[e][f].evaluate(values);
        }
        auto dg_at = [&](int a, int b, int c) -> const Rational& {
          return dgval[static_cast<std::size_t>(c)][static_cast<std::size_t>(a) * dim + b];
        };

        // Christoffel, rebuilt numerically
        std::vector<Rational> gamma_num(static_cast<std::size_t>(dim) * dim * dim, Rational(0));
        auto gamma_at = [&](int a, int b, int c) -> Rational& {
          return gamma_num[(static_cast<std::size_t>(a) * dim + b) * dim + c];
        };
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            for (int c = b; c < dim; ++c) {
              Rational acc(0);
              for (int d = 0; d < dim; ++d) {
                if (G[a][d] == 0) continue;
                acc += G[a][d] * (dg_at(d, b, c) + dg_at(d, c, b) - dg_at(b, c, d));
              }
              acc /= 2;
              gamma_at(a, b, c) = acc;
              gamma_at(a, c, b) = acc;
            }
        detail::QVec gamma_sym = detail::eval_tensor(stack.conn.gamma, values);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c)
              record("christoffel", detail::index_string({a, b, c}),
                     gamma_sym[(static_cast<std::size_t>(a) * dim + b) * dim + c],
                     gamma_at(a, b, c), pt);

        // Riemann (all indices down), rebuilt from second partials of g:
        // R_abcd = (g_ad,bc + g_bc,ad - g_ac,bd - g_bd,ac)/2
        //          + g_ef (G^e_bc G^f_ad - G^e_bd G^f_ac)
        auto ddg_at = [&](int a, int b, int c, int d) {
          std::size_t e = static_cast<std::size_t>(std::min(c, d));
          std::size_t f = static_cast<std::size_t>(std::max(c, d));
          const RationalFunction& h = ddg[e][f][static_cast<std::size_t>(a) * dim + b];
          return h.is_zero() ? Rational(0) : h.evaluate(values);
        };
        auto gamma_sq = [&](int b, int c, int a, int d) {
          Rational acc(0);
          for (int e = 0; e < dim; ++e) {
            if (gamma_at(e, b, c) == 0) continue;
            for (int f = 0; f < dim; ++f) {
              if (gamma_at(f, a, d) == 0 || gm[e][f] == 0) continue;
              acc += gm[e][f] * gamma_at(e, b, c) * gamma_at(f, a, d);
            }
          }
          return acc;
        };
        const Tensor& riem = stack.nabla_riem[0];
        detail::QVec riem_sym = detail::eval_tensor(riem, values);
        detail::QVec riem_num(riem_sym.size(), Rational(0));
        for (std::size_t fidx = 0; fidx < riem_sym.size(); ++fidx) {
          std::vector<int> idx = riem.unflat(fidx);
          int a = idx[0], b = idx[1], c = idx[2], d = idx[3];
          Rational val = (ddg_at(a, d, b, c) + ddg_at(b, c, a, d) - ddg_at(a, c, b, d) -
                          ddg_at(b, d, a, c)) /
                         2;
          val += gamma_sq(b, c, a, d) - gamma_sq(b, d, a, c);
          riem_num[fidx] = val;
          record("riemann", detail::index_string(idx), riem_sym[fidx], riem_num[fidx], pt);
        }

        // covariant derivatives: (nabla^j R)_{...e} =
        //   d_e (nabla^(j-1) R)_{...} - sum over slots of Gamma corrections
        detail::QVec prev_val = riem_num;
        for (int j = 1; j <= stack.order; ++j) {
          const Tensor& cur = stack.nabla_riem[static_cast<std::size_t>(j)];
          const Tensor& prev = stack.nabla_riem[static_cast<std::size_t>(j) - 1];
          const int prank = prev.rank();
          detail::QVec cur_sym = detail::eval_tensor(cur, values);
          detail::QVec cur_num(cur_sym.size(), Rational(0));
          const auto& dp = dprev[static_cast<std::size_t>(j)];
          for (std::size_t fidx = 0; fidx < cur_sym.size(); ++fidx) {
            std::vector<int> idx = cur.unflat(fidx);
            const int e = idx.back();
            std::vector<int> pidx(idx.begin(), idx.end() - 1);
            const std::size_t pflat = prev.flat(pidx);
            const RationalFunction& pd = dp[static_cast<std::size_t>(e)][pflat];
            Rational val = pd.is_zero() ? Rational(0) : pd.evaluate(values);
            for (int s = 0; s < prank; ++s) {
              std::vector<int> mut = pidx;
              for (int c = 0; c < dim; ++c) {
                const Rational& gam = gamma_at(c, e, pidx[static_cast<std::size_t>(s)]);
                if (gam == 0) continue;
                mut[static_cast<std::size_t>(s)] = c;
                const Rational& pv = prev_val[prev.flat(mut)];
                if (pv != 0) val -= gam * pv;
              }
              mut[static_cast<std::size_t>(s)] = pidx[static_cast<std::size_t>(s)];
            }
            cur_num[fidx] = std::move(val);
            record("nabla^" + std::to_string(j) + " riemann", detail::index_string(idx),
                   cur_sym[fidx], cur_num[fidx], pt);
          }
          prev_val = std::move(cur_num);
        }

        // Ricci, scalar curvature
        detail::QVec ricci_num(static_cast<std::size_t>(dim) * dim, Rational(0));
        detail::QVec ricci_sym = detail::eval_tensor(stack.ricci, values);
        for (int b = 0; b < dim; ++b)
          for (int d = 0; d < dim; ++d) {
            Rational acc(0);
            for (int a = 0; a < dim; ++a)
              for (int c = 0; c < dim; ++c) {
                const Rational& r =
                    riem_num[((static_cast<std::size_t>(a) * dim + b) * dim + c) * dim + d];
                if (r != 0 && G[a][c] != 0) acc += G[a][c] * r;
              }
            ricci_num[static_cast<std::size_t>(b) * dim + d] = acc;
            record("ricci", detail::index_string({b, d}),
                   ricci_sym[static_cast<std::size_t>(b) * dim + d],
                   ricci_num[static_cast<std::size_t>(b) * dim + d], pt);
          }
        Rational scalar_num(0);
        for (int b = 0; b < dim; ++b)
          for (int d = 0; d < dim; ++d)
            if (G[b][d] != 0 && ricci_num[static_cast<std::size_t>(b) * dim + d] != 0)
              scalar_num += G[b][d] * ricci_num[static_cast<std::size_t>(b) * dim + d];
        record("scalar", "()", stack.scalar.is_zero() ? Rational(0) : stack.scalar.evaluate(values),
               scalar_num, pt);

        // scalar invariants: numeric contraction vs the evaluated symbolic value
        prev_val = riem_num;  // reuse: recompute per order from stored tensors
        for (int j = 0; j <= stack.order; ++j) {
          const Tensor& t = stack.nabla_riem[static_cast<std::size_t>(j)];
          detail::QVec tval = detail::eval_tensor(t, values);
          detail::QVec raised = detail::raise_all_numeric(tval, t.rank(), dim, G);
          Rational inv_num = detail::dot(tval, raised);
          const RationalFunction& sym = invariants[static_cast<std::size_t>(j)].second;
          record(invariants[static_cast<std::size_t>(j)].first, "()",
                 sym.is_zero() ? Rational(0) : sym.evaluate(values), inv_num, pt);
        }
        // operator traces tr((Ric)^p): numeric matrix powers of G * Ricci
        {
          detail::QMat ric_op(dim, detail::QVec(dim, Rational(0)));
          for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) {
              Rational acc(0);
              for (int c = 0; c < dim; ++c)
                if (G[a][c] != 0 &&
                    ricci_num[static_cast<std::size_t>(c) * dim + b] != 0)
                  acc += G[a][c] * ricci_num[static_cast<std::size_t>(c) * dim + b];
              ric_op[a][b] = acc;
            }
          detail::QMat acc_m = ric_op;
          for (int p = 1; p <= 3; ++p) {
            Rational tr(0);
            for (int a = 0; a < dim; ++a) tr += acc_m[a][a];
            const auto& entry = invariants[static_cast<std::size_t>(stack.order) + p];
            record(entry.first, "()",
                   entry.second.is_zero() ? Rational(0) : entry.second.evaluate(values), tr, pt);
            if (p < 3) {
              detail::QMat next(dim, detail::QVec(dim, Rational(0)));
              for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) {
                  Rational s(0);
                  for (int c = 0; c < dim; ++c)
                    if (acc_m[a][c] != 0 && ric_op[c][b] != 0) s += acc_m[a][c] * ric_op[c][b];
                  next[a][b] = s;
                }
              acc_m = std::move(next);
            }
          }
        }

        ++report.points_checked;
        done = true;
      } catch (const PoleError&) {
        continue;  // a denominator vanished at this point: redraw
      }
    }
    if (!done) ++report.points_skipped;
  }
  return report;
}

/// Cross-check a catalog instance: validates that the stack was built for
/// this instance's metric, then runs the point-wise comparison.
inline OracleReport cross_check(const FamilyInstance& inst, const CurvatureStack& stack,
                                const SamplePlan& plan) {
  if (!(*inst.metric.ctx == *stack.metric.ctx) || inst.metric.g.comp != stack.metric.g.comp)
    throw ValidationError("cross_check: stack was not built for this instance");
  return cross_check(stack, plan);
}

/// Evaluate one symbolic invariant and its numeric contraction at a single
/// named point; used for spot checks with hand-picked coordinates.
inline std::pair<Rational, Rational> invariant_both_ways(
    const CurvatureStack& stack, int j, const std::map<std::string, Rational>& point) {
  if (j < 0 || j > stack.order) throw ValidationError("invariant_both_ways: order out of range");
  const ContextPtr& ctx = stack.metric.ctx;
  detail::QVec values = point_to_values(ctx, point);
  const int dim = stack.metric.dim;
  RationalFunction sym = self_norm_invariant(stack, j);
  Rational sym_val = sym.is_zero() ? Rational(0) : sym.evaluate(values);
  detail::QVec gval = detail::eval_tensor(stack.metric.g, values);
  detail::QMat gm(dim, detail::QVec(dim, Rational(0)));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) gm[a][b] = gval[static_cast<std::size_t>(a) * dim + b];
  auto ginv = detail::q_inverse(gm);
  if (!ginv) throw ValidationError("invariant_both_ways: metric degenerate at point");
  const Tensor& t = stack.nabla_riem[static_cast<std::size_t>(j)];
  detail::QVec tval = detail::eval_tensor(t, values);
  detail::QVec raised = detail::raise_all_numeric(tval, t.rank(), dim, *ginv);
  return {sym_val, detail::dot(tval, raised)};
}

}  // namespace vsi
