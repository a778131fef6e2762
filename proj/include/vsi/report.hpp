#pragma once

#include <string>
#include <vector>

#include "vsi/degeneracy.hpp"
#include "vsi/file_io.hpp"

namespace vsi {

/// Report skeleton shared by all commands: command echo first, then the
/// stated component convention, then command-specific results.
inline Json report_header(const std::string& command,
                          const std::vector<std::string>& args) {
  Json j;
  j["command"] = command;
  Json a = Json::array();
  for (const auto& s : args) a.push_back(s);
  j["arguments"] = std::move(a);
  j["convention"] = boost_weight_convention();
  return j;
}

inline Json named_invariants_json(const std::vector<NamedInvariant>& invs) {
  Json j = Json::object();
  for (const auto& inv : invs) j[inv.name] = to_expression_string(inv.value);
  return j;
}

inline const char* strictness_name(Strictness s) {
  return s == Strictness::Strict ? "strict" : "weak";
}

inline Json direction_json(const SeparatingDirection& d) {
  Json j;
  Json lam = Json::array();
  for (const auto& q : d.lambda) {
    Rational c = q;
    c.canonicalize();
    if (c.get_den() == 1) lam.push_back(c.get_num().get_str());
    else lam.push_back(c.get_num().get_str() + "/" + c.get_den().get_str());
  }
  j["lambda"] = std::move(lam);
  j["strictness"] = strictness_name(d.strictness);
  return j;
}

inline const char* order_status_name(OrderStatus s) {
  switch (s) {
    case OrderStatus::Certified: return "certified";
    case OrderStatus::Refuted: return "refuted";
    default: return "inconclusive";
  }
}

inline Json verdict_json(const VSIVerdict& v) {
  Json j;
  j["max_order"] = v.K;
  Json orders = Json::array();
  int certified_through = -1;
  int refuted_at = -1;
  bool chain = true;
  for (const auto& ov : v.orders) {
    Json o;
    o["order"] = ov.order;
    o["status"] = order_status_name(ov.status);
    if (ov.direction) o["certificate"] = direction_json(*ov.direction);
    if (ov.vacuous) o["vacuous"] = true;
    if (!ov.witness_id.empty()) {
      o["witness"] = ov.witness_id;
      o["witness_value"] = ov.witness_value;
    }
    if (ov.status == OrderStatus::Certified && chain) certified_through = ov.order;
    else chain = false;
    if (ov.status == OrderStatus::Refuted && refuted_at < 0) refuted_at = ov.order;
    orders.push_back(std::move(o));
  }
  j["orders"] = std::move(orders);
  j["certified_through"] = certified_through < 0 ? Json(nullptr) : Json(certified_through);
  j["refuted_at"] = refuted_at < 0 ? Json(nullptr) : Json(refuted_at);
  std::string summary;
  if (certified_through >= 0) summary = "VSI_" + std::to_string(certified_through) + " certified";
  if (refuted_at >= 0)
    summary += std::string(summary.empty() ? "" : "; ") + "refuted at order " +
               std::to_string(refuted_at);
  if (summary.empty()) summary = "inconclusive";
  j["summary"] = summary;
  Json caveats = Json::array();
  for (const auto& c : v.caveats) caveats.push_back(c);
  j["caveats"] = std::move(caveats);
  return j;
}

inline Json geometry_flags_json(const GeometryFlags& flags) {
  Json j;
  j["walker"] = flags.walker_plane;
  j["kundt"] = flags.kundt;
  j["recurrent"] = flags.recurrent;
  j["covariantly_constant"] = flags.covariantly_constant;
  if (flags.spins) {
    Json s = Json::object();
    for (const auto& [name, value] : flags.spins->named())
      s[name] = to_expression_string(*value);
    j["spin_coefficients"] = std::move(s);
    j["spin_reconstruction_ok"] = flags.spin_reconstruction;
  }
  return j;
}

/// Text diagram of occurring boost weights: one line per weight with the
/// component count, sorted lexicographically (descending first axis).
inline std::string bw_diagram_text(const BWDecomposition& dec) {
  std::string out;
  if (dec.parts.empty()) return "(empty: tensor vanishes)\n";
  for (auto it = dec.parts.rbegin(); it != dec.parts.rend(); ++it) {
    out += weight_to_string(it->first);
    out += ": ";
    out += std::to_string(it->second.size());
    out += it->second.size() == 1 ? " component" : " components";
    out += "\n";
  }
  return out;
}

inline Json bw_json(const BWDecomposition& dec) {
  Json j;
  Json cells = Json::array();
  for (auto it = dec.parts.rbegin(); it != dec.parts.rend(); ++it) {
    Json cell;
    cell["weight"] = Json::array();
    for (int w : it->first) cell["weight"].push_back(w);
    cell["count"] = it->second.size();
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  j["diagram"] = bw_diagram_text(dec);
  return j;
}

inline Json resource_stats_json(long long components_built) {
  Json j;
  j["components_built"] = components_built;
  j["component_cap"] = default_component_cap();
  return j;
}

}  // namespace vsi
