#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsi/catalog.hpp"
#include "vsi/expression.hpp"
#include "vsi/frame.hpp"
#include "vsi/tensor.hpp"

namespace vsi {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json require_field(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw ValidationError("missing field \"" + key + "\"");
  return j.at(key);
}

inline std::vector<std::string> string_list(const Json& j, const std::string& key) {
  Json arr = require_field(j, key);
  if (!arr.is_array()) throw ValidationError("field \"" + key + "\" must be an array");
  std::vector<std::string> out;
  for (const auto& e : arr) {
    if (!e.is_string()) throw ValidationError("field \"" + key + "\" must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Metric files.
// ---------------------------------------------------------------------------

/// Shared header fields of the metric and frame files.
inline Json context_to_json(const ContextPtr& ctx) {
  Json j;
  Json coords = Json::array(), params = Json::array();
  for (const auto& s : ctx->symbols()) {
    if (s.kind == SymbolKind::Coordinate) coords.push_back(s.name);
    else params.push_back(s.name);
  }
  j["coordinates"] = std::move(coords);
  j["parameters"] = std::move(params);
  j["signature"] = Json::array({ctx->k(), ctx->m()});
  return j;
}

inline ContextPtr context_from_json(const Json& j) {
  std::vector<std::string> coords = detail::string_list(j, "coordinates");
  std::vector<std::string> params = detail::string_list(j, "parameters");
  Json sig = detail::require_field(j, "signature");
  if (!sig.is_array() || sig.size() != 2 || !sig[0].is_number_integer() ||
      !sig[1].is_number_integer())
    throw ValidationError("field \"signature\" must be [k, m]");
  return make_context(coords, params, sig[0].get<int>(), sig[1].get<int>());
}

inline Json metric_to_json(const Metric& metric) {
  Json j = context_to_json(metric.ctx);
  Json rows = Json::array();
  for (int a = 0; a < metric.dim; ++a) {
    Json row = Json::array();
    for (int b = 0; b < metric.dim; ++b)
      row.push_back(to_expression_string(metric.g.comp[static_cast<std::size_t>(a) * metric.dim + b]));
    rows.push_back(std::move(row));
  }
  j["metric"] = std::move(rows);
  return j;
}

/// Accepts a full symmetric matrix or a lower-triangular one (entries above
/// the diagonal either absent via short rows or equal to the mirror entry).
inline Metric metric_from_json(const Json& j) {
  ContextPtr ctx = context_from_json(j);
  const int dim = ctx->dimension();
  Json rows = detail::require_field(j, "metric");
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
    throw ValidationError("field \"metric\" must have " + std::to_string(dim) + " rows");
  std::vector<std::vector<std::optional<RationalFunction>>> raw(
      static_cast<std::size_t>(dim),
      std::vector<std::optional<RationalFunction>>(static_cast<std::size_t>(dim)));
  for (int a = 0; a < dim; ++a) {
    const Json& row = rows[static_cast<std::size_t>(a)];
    if (!row.is_array() ||
        (static_cast<int>(row.size()) != dim && static_cast<int>(row.size()) != a + 1))
      throw ValidationError("metric row " + std::to_string(a) +
                            " must have full or lower-triangular length");
    for (int b = 0; b < static_cast<int>(row.size()); ++b) {
      if (!row[static_cast<std::size_t>(b)].is_string())
        throw ValidationError("metric entries must be expression strings");
      raw[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          parse_expression(ctx, row[static_cast<std::size_t>(b)].get<std::string>());
    }
  }
  Tensor g = Tensor::zeros(ctx, dim, down_valence(2));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b <= a; ++b) {
      const auto& lower = raw[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      const auto& upper = raw[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
      if (!lower.has_value())
        throw ValidationError("metric entry (" + std::to_string(a) + "," +
                              std::to_string(b) + ") is missing");
      if (a != b && upper.has_value() && *upper != *lower)
        throw ValidationError("metric entry (" + std::to_string(b) + "," +
                              std::to_string(a) + ") conflicts with its mirror");
      g.comp[static_cast<std::size_t>(a) * dim + b] = *lower;
      g.comp[static_cast<std::size_t>(b) * dim + a] = *lower;
    }
  return metric_inverse(std::move(g));
}

// ---------------------------------------------------------------------------
// Frame files.
// ---------------------------------------------------------------------------

inline Json frame_to_json(const NullFrame& frame) {
  Json j = context_to_json(frame.ctx);
  Json roles = Json::array();
  for (const auto& r : frame.roles) roles.push_back(r.name());
  j["roles"] = std::move(roles);
  j["frame_kind"] = "vectors";
  Json rows = Json::array();
  for (const auto& vec : frame.vectors) {
    Json row = Json::array();
    for (const auto& c : vec.comp) row.push_back(to_expression_string(c));
    rows.push_back(std::move(row));
  }
  j["frame"] = std::move(rows);
  return j;
}

inline FrameRole role_from_name(const std::string& s) {
  if (s.size() < 2) throw ValidationError("bad frame role \"" + s + "\"");
  FrameRole r;
  switch (s[0]) {
    case 'l': r.kind = FrameRole::L; break;
    case 'n': r.kind = FrameRole::N; break;
    case 'm': r.kind = FrameRole::M; break;
    default: throw ValidationError("bad frame role \"" + s + "\"");
  }
  try {
    r.index = std::stoi(s.substr(1)) - 1;
  } catch (const std::exception&) {
    throw ValidationError("bad frame role \"" + s + "\"");
  }
  if (r.index < 0) throw ValidationError("bad frame role \"" + s + "\"");
  return r;
}

/// Loads a frame against an already-loaded metric; "covectors" rows are
/// sharped with the inverse metric.  The result is validated.
inline NullFrame frame_from_json(const Json& j, const Metric& metric) {
  ContextPtr ctx = context_from_json(j);
  if (!(*ctx == *metric.ctx))
    throw ValidationError("frame file context differs from the metric file context");
  const int dim = metric.dim;
  std::vector<std::string> role_names = detail::string_list(j, "roles");
  Json kind = detail::require_field(j, "frame_kind");
  if (!kind.is_string() ||
      (kind.get<std::string>() != "vectors" && kind.get<std::string>() != "covectors"))
    throw ValidationError("field \"frame_kind\" must be \"vectors\" or \"covectors\"");
  bool covectors = kind.get<std::string>() == "covectors";
  Json rows = detail::require_field(j, "frame");
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
    throw ValidationError("field \"frame\" must have " + std::to_string(dim) + " rows");
  if (static_cast<int>(role_names.size()) != dim)
    throw ValidationError("field \"roles\" must have " + std::to_string(dim) + " entries");

  std::vector<std::vector<RationalFunction>> comp_rows;
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw ValidationError("frame rows must have " + std::to_string(dim) + " entries");
    std::vector<RationalFunction> r;
    for (const auto& e : row) {
      if (!e.is_string()) throw ValidationError("frame entries must be expression strings");
      r.push_back(parse_expression(metric.ctx, e.get<std::string>()));
    }
    comp_rows.push_back(std::move(r));
  }
  std::vector<FrameRole> roles;
  for (const auto& s : role_names) roles.push_back(role_from_name(s));

  NullFrame frame;
  if (covectors) {
    frame = detail::frame_from_coframe(metric, comp_rows, roles, ctx->k(), ctx->m());
  } else {
    frame.ctx = metric.ctx;
    frame.dim = dim;
    frame.k = ctx->k();
    frame.m = ctx->m();
    frame.roles = std::move(roles);
    for (auto& r : comp_rows) {
      Tensor vec = Tensor::zeros(metric.ctx, dim, {SlotVariance::Up});
      for (int i = 0; i < dim; ++i) vec.comp[static_cast<std::size_t>(i)] = std::move(r[static_cast<std::size_t>(i)]);
      frame.vectors.push_back(std::move(vec));
    }
  }
  FrameValidation fv = validate_frame(frame, metric);
  if (!fv.ok) {
    std::string msg = "frame fails validation:";
    for (const auto& v : fv.violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  return frame;
}

// ---------------------------------------------------------------------------
// Expected-results manifest for emitted catalog instances.
// ---------------------------------------------------------------------------

inline Json manifest_to_json(const FamilyInstance& inst) {
  Json j;
  j["family"] = inst.family;
  Json b = Json::object();
  for (const auto& [key, val] : inst.bindings) b[key] = val;
  j["bindings"] = std::move(b);
  j["expect_walker"] = inst.expect_walker ? Json(*inst.expect_walker) : Json(nullptr);
  j["expect_kundt"] = inst.expect_kundt ? Json(*inst.expect_kundt) : Json(nullptr);
  j["expected_certified_order"] =
      inst.expected_certified_order < 0 ? Json(nullptr) : Json(inst.expected_certified_order);
  j["expected_refuted_order"] =
      inst.expected_refuted_order < 0 ? Json(nullptr) : Json(inst.expected_refuted_order);
  j["convention"] = boost_weight_convention();
  return j;
}

// ---------------------------------------------------------------------------
// Disk plumbing.
// ---------------------------------------------------------------------------

inline std::string json_to_text(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw ValidationError("write to " + path + " failed");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON: ") + e.what(),
                     e.byte > 0 ? e.byte - 1 : 0);
  }
}

inline Metric load_metric_file(const std::string& path) {
  return metric_from_json(parse_json_text(read_text_file(path)));
}

inline NullFrame load_frame_file(const std::string& path, const Metric& metric) {
  return frame_from_json(parse_json_text(read_text_file(path)), metric);
}

/// Writes metric.json, frame.json and expected.json for a catalog instance.
inline void write_instance_files(const std::string& dir, const FamilyInstance& inst) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create directory " + dir + ": " + ec.message());
  write_text_file(dir + "/metric.json", json_to_text(metric_to_json(inst.metric)));
  write_text_file(dir + "/frame.json", json_to_text(frame_to_json(inst.frame)));
  write_text_file(dir + "/expected.json", json_to_text(manifest_to_json(inst)));
}

}  // namespace vsi
