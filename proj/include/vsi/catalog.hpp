#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vsi/curvature.hpp"
#include "vsi/expression.hpp"
#include "vsi/frame.hpp"

namespace vsi {

/// Sentinel for "expected to certify at every order that is checked".
inline constexpr int kCertifiedAllOrders = 1'000'000;

/// A ready-made metric together with its adapted null frame and the
/// classification the construction guarantees.
struct FamilyInstance {
  std::string family;
  std::vector<std::pair<std::string, std::string>> bindings;  ///< key -> canonical expr
  std::map<std::string, RationalFunction> binding_values;
  Metric metric;
  NullFrame frame;
  std::optional<bool> expect_walker;
  std::optional<bool> expect_kundt;
  int expected_certified_order = -1;  ///< certify at least through this order (-1: no claim)
  int expected_refuted_order = -1;    ///< expected first refuted order (-1: no claim)
};

namespace detail {

inline Metric make_metric(const ContextPtr& ctx, int dim,
                          const std::vector<std::tuple<int, int, RationalFunction>>& entries) {
  Tensor g = Tensor::zeros(ctx, dim, down_valence(2));
  for (const auto& [a, b, f] : entries) {
    g.comp[static_cast<std::size_t>(a) * dim + b] = f;
    if (a != b) g.comp[static_cast<std::size_t>(b) * dim + a] = f;
  }
  return metric_inverse(g);
}

/// Frame vector a = sharp of the a-th coframe row (components indexed by
/// coordinates); roles supplied by the caller. Validates the pairings.
inline NullFrame frame_from_coframe(const Metric& metric,
                                    const std::vector<std::vector<RationalFunction>>& coframe,
                                    const std::vector<FrameRole>& roles, int k, int m) {
  const int dim = metric.dim;
  NullFrame frame;
  frame.ctx = metric.ctx;
  frame.dim = dim;
  frame.k = k;
  frame.m = m;
  frame.roles = roles;
  for (const auto& row : coframe) {
    Tensor vec = Tensor::zeros(metric.ctx, dim, {SlotVariance::Up});
    for (int i = 0; i < dim; ++i) {
      RationalFunction acc = RationalFunction::zero(metric.ctx);
      for (int b = 0; b < dim; ++b) {
        const RationalFunction& gi = metric.g_inv.comp[static_cast<std::size_t>(i) * dim + b];
        if (gi.is_zero() || row[static_cast<std::size_t>(b)].is_zero()) continue;
        acc += gi * row[static_cast<std::size_t>(b)];
      }
      vec.comp[static_cast<std::size_t>(i)] = std::move(acc);
    }
    frame.vectors.push_back(std::move(vec));
  }
  FrameValidation fv = validate_frame(frame, metric);
  if (!fv.ok)
    throw InternalError("constructed frame fails validation: " + fv.violations.front());
  return frame;
}

inline void require_depends_only(const RationalFunction& f,
                                 const std::set<std::string>& allowed_coords,
                                 const std::string& slot) {
  const ContextPtr& ctx = f.context();
  std::set<std::size_t> used;
  for (std::size_t s : f.num().used_symbols()) used.insert(s);
  for (std::size_t s : f.den().used_symbols()) used.insert(s);
  for (std::size_t s : used) {
    const Symbol& sym = ctx->symbol(s);
    if (sym.kind == SymbolKind::Coordinate && !allowed_coords.count(sym.name))
      throw ValidationError("binding " + slot + " may not depend on coordinate " +
                            sym.name);
  }
}

inline RationalFunction coord_rf(const ContextPtr& ctx, const std::string& name) {
  return RationalFunction::variable(ctx, name);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Contexts. Coordinates come first and in metric order; parameters follow.
// ---------------------------------------------------------------------------

inline ContextPtr walker_context(const std::vector<std::string>& params = {}) {
  return make_context({"u", "v", "U", "V"}, params, /*k=*/2, /*m=*/0);
}

inline ContextPtr kundt_null_context(const std::vector<std::string>& params = {}) {
  return walker_context(params);
}

inline ContextPtr kundt_st_context(const std::vector<std::string>& params = {}) {
  return make_context({"u", "v", "T", "X"}, params, /*k=*/2, /*m=*/0);
}

inline ContextPtr six_d_context(const std::vector<std::string>& params = {}) {
  return make_context({"u", "v", "U", "V", "U2", "V2"}, params, /*k=*/3, /*m=*/0);
}

// ---------------------------------------------------------------------------
// Walker family: ds^2 = 2du(dv + A du + C dU) + 2dU(dV + B dU).
// ---------------------------------------------------------------------------

inline FamilyInstance walker_general(const RationalFunction& A, const RationalFunction& B,
                                     const RationalFunction& C) {
  const ContextPtr& ctx = A.context();
  require_same_context(ctx, B.context());
  require_same_context(ctx, C.context());
  for (const std::string c : {"u", "v", "U", "V"})
    if (!ctx->has(c)) throw ValidationError("walker_general context lacks coordinate " + c);
  const int u = static_cast<int>(ctx->index_of("u"));
  const int v = static_cast<int>(ctx->index_of("v"));
  const int U = static_cast<int>(ctx->index_of("U"));
  const int V = static_cast<int>(ctx->index_of("V"));
  RationalFunction one = RationalFunction::one(ctx);
  Metric metric = detail::make_metric(
      ctx, 4,
      {{u, v, one}, {u, u, A.scaled(2)}, {u, U, C}, {U, V, one}, {U, U, B.scaled(2)}});
  // Coframe rows: du, dv + A du + C dU, dU, dV + B dU.
  RationalFunction zero = RationalFunction::zero(ctx);
  std::vector<std::vector<RationalFunction>> coframe(4,
                                                     std::vector<RationalFunction>(4, zero));
  coframe[0][static_cast<std::size_t>(u)] = one;
  coframe[1][static_cast<std::size_t>(v)] = one;
  coframe[1][static_cast<std::size_t>(u)] = A;
  coframe[1][static_cast<std::size_t>(U)] = C;
  coframe[2][static_cast<std::size_t>(U)] = one;
  coframe[3][static_cast<std::size_t>(V)] = one;
  coframe[3][static_cast<std::size_t>(U)] = B;
  std::vector<FrameRole> roles = {{FrameRole::L, 0}, {FrameRole::N, 0},
                                  {FrameRole::L, 1}, {FrameRole::N, 1}};
  FamilyInstance inst{.family = "walker-general",
                      .bindings = {},
                      .binding_values = {},
                      .metric = metric,
                      .frame = detail::frame_from_coframe(metric, coframe, roles, 2, 0),
                      .expect_walker = true,
                      .expect_kundt = std::nullopt,
                      .expected_certified_order = -1,
                      .expected_refuted_order = -1};
  inst.binding_values = {{"A", A}, {"B", B}, {"C", C}};
  for (const auto& key : {"A", "B", "C"})
    inst.bindings.push_back({key, to_expression_string(inst.binding_values.at(key))});
  return inst;
}

/// Assembled defining functions for a walker_cond instance.
struct WalkerCondFunctions {
  RationalFunction A, B, C;
  RationalFunction A2, B1, C1, B0;  ///< sub-functions used by obstruction formulas
};

inline WalkerCondFunctions walker_cond_functions(int tier, const ContextPtr& ctx,
                                                 const std::map<std::string, RationalFunction>& b) {
  auto get = [&](const std::string& key) {
    auto it = b.find(key);
    return it == b.end() ? RationalFunction::zero(ctx) : it->second;
  };
  const std::set<std::string> uU = {"u", "U"};
  const std::set<std::string> uvU = {"u", "v", "U"};
  std::set<std::string> allowed_keys;
  if (tier == 1)
    allowed_keys = {"A1", "A2", "A0", "B1", "B0", "C1", "C2", "C0"};
  else if (tier == 2)
    allowed_keys = {"A1", "A2", "A0", "B11", "B10", "B0", "C12", "C11", "C10", "C2", "C0"};
  else if (tier == 3)
    allowed_keys = {"A1", "A2", "A0", "B11", "B10", "B03", "B02", "B01", "B00",
                    "C12", "C11", "C10", "C2", "C0"};
  else
    throw ValidationError("walker_cond tier must be 1, 2 or 3");
  for (const auto& [key, val] : b) {
    if (!allowed_keys.count(key))
      throw ValidationError("binding " + key + " is not a tier-" + std::to_string(tier) +
                            " sub-function");
    require_same_context(ctx, val.context());
  }
  RationalFunction vv = detail::coord_rf(ctx, "v");
  RationalFunction VV = detail::coord_rf(ctx, "V");

  for (const std::string key : {"A1", "A2", "A0", "C2", "C0"})
    if (b.count(key)) detail::require_depends_only(b.at(key), uU, key);

  WalkerCondFunctions f{RationalFunction::zero(ctx), RationalFunction::zero(ctx),
                        RationalFunction::zero(ctx), RationalFunction::zero(ctx),
                        RationalFunction::zero(ctx), RationalFunction::zero(ctx),
                        RationalFunction::zero(ctx)};
  f.A2 = get("A2");
  f.A = vv * get("A1") + VV * f.A2 + get("A0");

  if (tier == 1) {
    for (const std::string key : {"B1", "B0", "C1"})
      if (b.count(key)) detail::require_depends_only(b.at(key), uvU, key);
    f.B1 = get("B1");
    f.B0 = get("B0");
    f.C1 = get("C1");
  } else {
    for (const std::string key : {"B11", "B10", "C12", "C11", "C10"})
      if (b.count(key)) detail::require_depends_only(b.at(key), uU, key);
    f.B1 = vv * get("B11") + get("B10");
    f.C1 = vv * vv * get("C12") + vv * get("C11") + get("C10");
    if (tier == 2) {
      if (b.count("B0")) detail::require_depends_only(b.at("B0"), uvU, "B0");
      f.B0 = get("B0");
    } else {
      for (const std::string key : {"B03", "B02", "B01", "B00"})
        if (b.count(key)) detail::require_depends_only(b.at(key), uU, key);
      f.B0 = vv * vv * vv * get("B03") + vv * vv * get("B02") + vv * get("B01") + get("B00");
    }
  }
  f.B = VV * f.B1 + f.B0;
  f.C = f.C1 + VV * get("C2") + get("C0");
  return f;
}

inline FamilyInstance walker_cond(int tier, const ContextPtr& ctx,
                                  const std::map<std::string, RationalFunction>& b) {
  WalkerCondFunctions f = walker_cond_functions(tier, ctx, b);
  FamilyInstance inst = walker_general(f.A, f.B, f.C);
  inst.family = "walker-cond";
  inst.bindings.clear();
  inst.binding_values.clear();
  inst.bindings.push_back({"tier", std::to_string(tier)});
  for (const auto& [key, val] : b) {
    inst.bindings.push_back({key, to_expression_string(val)});
    inst.binding_values.emplace(key, val);
  }
  inst.expected_certified_order = tier == 1 ? 1 : tier == 2 ? 3 : kCertifiedAllOrders;
  return inst;
}

// ---------------------------------------------------------------------------
// Kundt VSI families (4D neutral, flat transverse space).
// ---------------------------------------------------------------------------

enum class KundtCase { Null, SpacelikeTimelike };

inline FamilyInstance kundt_vsi(KundtCase kc, const ContextPtr& ctx,
                                const std::map<std::string, RationalFunction>& b) {
  auto get = [&](const std::string& key) {
    auto it = b.find(key);
    return it == b.end() ? RationalFunction::zero(ctx) : it->second;
  };
  std::set<std::string> allowed_keys = kc == KundtCase::Null
                                           ? std::set<std::string>{"W1U", "W0U", "W0V", "H1", "H0"}
                                           : std::set<std::string>{"eps", "W0T", "W0X", "H1", "H0"};
  for (const auto& [key, val] : b) {
    if (!allowed_keys.count(key))
      throw ValidationError("binding " + key + " is not a Kundt sub-function");
    require_same_context(ctx, val.context());
  }
  const int u = static_cast<int>(ctx->index_of("u"));
  const int v = static_cast<int>(ctx->index_of("v"));
  RationalFunction one = RationalFunction::one(ctx);
  RationalFunction zero = RationalFunction::zero(ctx);
  RationalFunction vv = detail::coord_rf(ctx, "v");

  std::string family;
  Metric metric = [&] {
    if (kc == KundtCase::Null) {
      family = "kundt-null";
      for (const std::string key : {"W1U"})
        if (b.count(key)) detail::require_depends_only(b.at(key), {"u", "U"}, key);
      for (const std::string key : {"W0U", "W0V", "H1", "H0"})
        if (b.count(key)) detail::require_depends_only(b.at(key), {"u", "U", "V"}, key);
      const int U = static_cast<int>(ctx->index_of("U"));
      const int V = static_cast<int>(ctx->index_of("V"));
      RationalFunction W_U = vv * get("W1U") + get("W0U");
      RationalFunction W_V = get("W0V");
      RationalFunction H = vv * get("H1") + get("H0");
      return detail::make_metric(ctx, 4,
                                 {{u, v, one},
                                  {u, u, H.scaled(2)},
                                  {u, U, W_U},
                                  {u, V, W_V},
                                  {U, V, one}});
    }
    family = "kundt-st";
    RationalFunction eps = get("eps");
    if (!(eps.is_zero() || eps.is_one()))
      throw ValidationError("binding eps must be 0 or 1");
    for (const std::string key : {"W0T", "W0X", "H1", "H0"})
      if (b.count(key)) detail::require_depends_only(b.at(key), {"u", "T", "X"}, key);
    const int T = static_cast<int>(ctx->index_of("T"));
    const int X = static_cast<int>(ctx->index_of("X"));
    RationalFunction W1 = eps.is_zero()
                              ? zero
                              : RationalFunction::constant(ctx, Rational(-2)) /
                                    detail::coord_rf(ctx, "X");
    RationalFunction W_T = get("W0T");
    RationalFunction W_X = vv * W1 + get("W0X");
    RationalFunction H =
        (vv * vv * W1 * W1).scaled(Rational(1, 8)) + vv * get("H1") + get("H0");
    return detail::make_metric(ctx, 4,
                               {{u, v, one},
                                {u, u, H.scaled(2)},
                                {u, T, W_T},
                                {u, X, W_X},
                                {T, T, -one},
                                {X, X, one}});
  }();

  // Coframe: du; dv + H du + W_A dx^A; transverse null pair.
  std::vector<std::vector<RationalFunction>> coframe(4,
                                                     std::vector<RationalFunction>(4, zero));
  coframe[0][static_cast<std::size_t>(u)] = one;
  for (int i = 0; i < 4; ++i) {
    // omega^2_i = g_{u i} except the uu slot, which carries H (not 2H).
    if (i == u)
      coframe[1][static_cast<std::size_t>(i)] =
          metric.g.comp[static_cast<std::size_t>(u) * 4 + u].scaled(Rational(1, 2));
    else
      coframe[1][static_cast<std::size_t>(i)] = metric.g.comp[static_cast<std::size_t>(u) * 4 + i];
  }
  if (kc == KundtCase::Null) {
    const int U = static_cast<int>(ctx->index_of("U"));
    const int V = static_cast<int>(ctx->index_of("V"));
    coframe[2][static_cast<std::size_t>(U)] = one;
    coframe[3][static_cast<std::size_t>(V)] = one;
  } else {
    const int T = static_cast<int>(ctx->index_of("T"));
    const int X = static_cast<int>(ctx->index_of("X"));
    coframe[2][static_cast<std::size_t>(X)] = one;   // dX - dT
    coframe[2][static_cast<std::size_t>(T)] = -one;
    coframe[3][static_cast<std::size_t>(X)] = RationalFunction::constant(ctx, Rational(1, 2));
    coframe[3][static_cast<std::size_t>(T)] = RationalFunction::constant(ctx, Rational(1, 2));
  }
  std::vector<FrameRole> roles = {{FrameRole::L, 0}, {FrameRole::N, 0},
                                  {FrameRole::L, 1}, {FrameRole::N, 1}};
  FamilyInstance inst{.family = family,
                      .bindings = {},
                      .binding_values = {},
                      .metric = metric,
                      .frame = detail::frame_from_coframe(metric, coframe, roles, 2, 0),
                      .expect_walker = std::nullopt,
                      .expect_kundt = true,
                      .expected_certified_order = kCertifiedAllOrders,
                      .expected_refuted_order = -1};
  for (const auto& [key, val] : b) {
    inst.bindings.push_back({key, to_expression_string(val)});
    inst.binding_values.emplace(key, val);
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Six-dimensional neutral example and the flat baseline.
// ---------------------------------------------------------------------------

inline FamilyInstance six_d_example() {
  ContextPtr ctx = six_d_context();
  RationalFunction one = RationalFunction::one(ctx);
  RationalFunction zero = RationalFunction::zero(ctx);
  RationalFunction vv = detail::coord_rf(ctx, "v");
  RationalFunction VV = detail::coord_rf(ctx, "V");
  RationalFunction V2 = detail::coord_rf(ctx, "V2");
  RationalFunction v7 = vv.pow(7);
  const int u = 0, v = 1, U = 2, V = 3, U2 = 4, W2 = 5;
  Metric metric = detail::make_metric(ctx, 6,
                                      {{u, v, one},
                                       {u, u, VV.scaled(2)},
                                       {U, V, one},
                                       {U, U, V2.scaled(2)},
                                       {U2, W2, one},
                                       {U2, U2, v7.scaled(2)}});
  std::vector<std::vector<RationalFunction>> coframe(6,
                                                     std::vector<RationalFunction>(6, zero));
  coframe[0][u] = one;
  coframe[1][v] = one;
  coframe[1][u] = VV;
  coframe[2][U] = one;
  coframe[3][V] = one;
  coframe[3][U] = V2;
  coframe[4][U2] = one;
  coframe[5][W2] = one;
  coframe[5][U2] = v7;
  std::vector<FrameRole> roles = {{FrameRole::L, 0}, {FrameRole::N, 0}, {FrameRole::L, 1},
                                  {FrameRole::N, 1}, {FrameRole::L, 2}, {FrameRole::N, 2}};
  FamilyInstance inst{.family = "sixd",
                      .bindings = {},
                      .binding_values = {},
                      .metric = metric,
                      .frame = detail::frame_from_coframe(metric, coframe, roles, 3, 0),
                      .expect_walker = true,
                      .expect_kundt = std::nullopt,
                      .expected_certified_order = kCertifiedAllOrders,
                      .expected_refuted_order = -1};
  return inst;
}

inline FamilyInstance flat4() {
  ContextPtr ctx = walker_context();
  RationalFunction zero = RationalFunction::zero(ctx);
  FamilyInstance inst = walker_general(zero, zero, zero);
  inst.family = "flat4";
  inst.bindings.clear();
  inst.binding_values.clear();
  inst.expect_walker = true;
  inst.expect_kundt = true;
  inst.expected_certified_order = kCertifiedAllOrders;
  return inst;
}

// ---------------------------------------------------------------------------
// String-driven builtin registry (CLI entry point).
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "flat4",        "vsi3",      "vsi1not2", "walker-general",
      "walker-cond",  "kundt-null", "kundt-st", "sixd"};
  return names;
}

/// Default test sweep of (u,U)-dependent slot expressions.
inline const std::vector<std::string>& default_sweep() {
  static const std::vector<std::string> sweep = {"0", "1", "u", "U", "u*U", "u^2+U"};
  return sweep;
}

namespace detail {

/// Parses every value against a context that offers parameters a, b, c, then
/// rebuilds with exactly the parameters actually used (deterministic order).
template <typename MakeCtx>
inline std::pair<ContextPtr, std::map<std::string, RationalFunction>> parse_bindings(
    MakeCtx&& make_ctx, const std::map<std::string, std::string>& sets,
    const std::set<std::string>& skip = {}) {
  ContextPtr probe = make_ctx(std::vector<std::string>{"a", "b", "c"});
  std::set<std::string> used_params;
  for (const auto& [key, text] : sets) {
    if (skip.count(key)) continue;
    RationalFunction f = parse_expression(probe, text);
    std::set<std::size_t> used;
    for (std::size_t s : f.num().used_symbols()) used.insert(s);
    for (std::size_t s : f.den().used_symbols()) used.insert(s);
    for (std::size_t s : used)
      if (probe->symbol(s).kind == SymbolKind::Parameter)
        used_params.insert(probe->symbol(s).name);
  }
  std::vector<std::string> params(used_params.begin(), used_params.end());
  ContextPtr ctx = make_ctx(params);
  std::map<std::string, RationalFunction> out;
  for (const auto& [key, text] : sets) {
    if (skip.count(key)) continue;
    out.emplace(key, parse_expression(ctx, text));
  }
  return {ctx, std::move(out)};
}

}  // namespace detail

inline FamilyInstance make_builtin(const std::string& name,
                                   const std::map<std::string, std::string>& sets = {}) {
  auto reject_unknown = [&](const std::set<std::string>& allowed) {
    for (const auto& [key, _] : sets)
      if (!allowed.count(key))
        throw ValidationError("builtin " + name + " does not accept --set " + key);
  };
  if (name == "flat4") {
    reject_unknown({});
    return flat4();
  }
  if (name == "sixd") {
    reject_unknown({});
    return six_d_example();
  }
  if (name == "vsi3") {
    reject_unknown({"a"});
    std::map<std::string, std::string> defaults = {{"a", "a"}};
    for (const auto& [key, val] : sets) defaults[key] = val;
    auto [ctx, vals] = detail::parse_bindings(
        [](const std::vector<std::string>& p) { return walker_context(p); }, defaults);
    RationalFunction A = detail::coord_rf(ctx, "V");
    RationalFunction B = vals.at("a") * detail::coord_rf(ctx, "v").pow(4);
    FamilyInstance inst = walker_general(A, B, RationalFunction::zero(ctx));
    inst.family = "vsi3";
    inst.bindings = {{"a", to_expression_string(vals.at("a"))}};
    inst.binding_values = {{"a", vals.at("a")}};
    inst.expected_certified_order = 3;
    inst.expected_refuted_order = vals.at("a").is_zero() ? -1 : 4;
    if (vals.at("a").is_zero()) inst.expected_certified_order = kCertifiedAllOrders;
    return inst;
  }
  if (name == "vsi1not2") {
    reject_unknown({"a", "b"});
    std::map<std::string, std::string> defaults = {{"a", "a"}, {"b", "b"}};
    for (const auto& [key, val] : sets) defaults[key] = val;
    auto [ctx, vals] = detail::parse_bindings(
        [](const std::vector<std::string>& p) { return walker_context(p); }, defaults);
    RationalFunction vv = detail::coord_rf(ctx, "v");
    RationalFunction A = detail::coord_rf(ctx, "V");
    RationalFunction B = vals.at("a") * detail::coord_rf(ctx, "V") * vv.pow(2);
    RationalFunction C = vals.at("b") * vv.pow(3);
    FamilyInstance inst = walker_general(A, B, C);
    inst.family = "vsi1not2";
    inst.bindings = {{"a", to_expression_string(vals.at("a"))},
                     {"b", to_expression_string(vals.at("b"))}};
    inst.binding_values = {{"a", vals.at("a")}, {"b", vals.at("b")}};
    bool both_zero = vals.at("a").is_zero() && vals.at("b").is_zero();
    inst.expected_certified_order = both_zero ? kCertifiedAllOrders : 1;
    inst.expected_refuted_order = both_zero ? -1 : 2;
    return inst;
  }
  if (name == "walker-general") {
    reject_unknown({"A", "B", "C"});
    std::map<std::string, std::string> defaults = {{"A", "0"}, {"B", "0"}, {"C", "0"}};
    for (const auto& [key, val] : sets) defaults[key] = val;
    auto [ctx, vals] = detail::parse_bindings(
        [](const std::vector<std::string>& p) { return walker_context(p); }, defaults);
    FamilyInstance inst = walker_general(vals.at("A"), vals.at("B"), vals.at("C"));
    return inst;
  }
  if (name == "walker-cond") {
    auto it = sets.find("tier");
    int tier = 1;
    if (it != sets.end()) {
      if (it->second == "1") tier = 1;
      else if (it->second == "2") tier = 2;
      else if (it->second == "3") tier = 3;
      else throw ValidationError("tier must be 1, 2 or 3");
    }
    auto [ctx, vals] = detail::parse_bindings(
        [](const std::vector<std::string>& p) { return walker_context(p); }, sets, {"tier"});
    return walker_cond(tier, ctx, vals);
  }
  if (name == "kundt-null") {
    auto [ctx, vals] = detail::parse_bindings(
        [](const std::vector<std::string>& p) { return kundt_null_context(p); }, sets);
    return kundt_vsi(KundtCase::Null, ctx, vals);
  }
  if (name == "kundt-st") {
    auto [ctx, vals] = detail::parse_bindings(
        [](const std::vector<std::string>& p) { return kundt_st_context(p); }, sets);
    return kundt_vsi(KundtCase::SpacelikeTimelike, ctx, vals);
  }
  throw ValidationError("unknown builtin family: " + name +
                        " (known: flat4, vsi3, vsi1not2, walker-general, walker-cond, "
                        "kundt-null, kundt-st, sixd)");
}

}  // namespace vsi
