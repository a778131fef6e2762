#pragma once

/// Command-line front end.  Subcommands:
///
///   vsi invariants <metric.json> [--order K]            scalar invariants
///   vsi classify   <metric.json> --frame f.json         geometry flags
///   vsi vsi        <metric.json> --frame f.json [--order K]
///   vsi bw         <metric.json> --frame f.json [--tensor riemann|nabla^j|metric]
///   vsi builtin    <name> [--set key=expr ...] [--out dir]
///   vsi oracle     <metric.json> [--order K] [--seed S] [--points N]
///
/// All commands accept --json (machine-readable report to stdout) and, except
/// builtin, --out FILE (write the JSON report to FILE).  For builtin, --out
/// names the output directory.  Exit codes: 0 success, 2 parse/validation
/// error, 3 resource cap exceeded, 4 internal invariant violation.

#include <exception>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "vsi/catalog.hpp"
#include "vsi/degeneracy.hpp"
#include "vsi/file_io.hpp"
#include "vsi/oracle.hpp"
#include "vsi/report.hpp"

namespace vsi {
namespace cli {

namespace detail {

inline std::map<std::string, std::string> set_map(const std::vector<std::string>& kvs) {
  std::map<std::string, std::string> out;
  for (const std::string& kv : kvs) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("--set expects key=expr, got '" + kv + "'");
    std::string key = kv.substr(0, eq);
    if (out.count(key)) throw ValidationError("--set " + key + " given twice");
    out.emplace(std::move(key), kv.substr(eq + 1));
  }
  return out;
}

/// Emit a report: JSON to --out when given; JSON or the human rendering to
/// stdout depending on --json.
inline void deliver(const Json& report, bool as_json, const std::string& out_path,
                    const std::string& human, std::ostream& os) {
  if (!out_path.empty()) write_text_file(out_path, json_to_text(report));
  if (as_json)
    os << json_to_text(report);
  else
    os << human;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string human_invariants(const Json& rep) {
  std::ostringstream os;
  os << "scalar curvature invariants (normalized):\n";
  for (const auto& [name, value] : rep.at("invariants").items())
    os << "  " << name << " = " << value.get<std::string>() << "\n";
  return os.str();
}

inline std::string human_geometry(const Json& rep) {
  const Json& g = rep.at("geometry");
  std::ostringstream os;
  os << "geometry flags:\n";
  os << "  walker invariant null plane : " << yes_no(g.at("walker").get<bool>()) << "\n";
  os << "  kundt                       : " << yes_no(g.at("kundt").get<bool>()) << "\n";
  os << "  recurrent                   : " << yes_no(g.at("recurrent").get<bool>()) << "\n";
  os << "  covariantly constant        : " << yes_no(g.at("covariantly_constant").get<bool>())
     << "\n";
  if (g.contains("spin_coefficients")) {
    os << "spin coefficients:\n";
    for (const auto& [name, value] : g.at("spin_coefficients").items())
      os << "  " << name << " = " << value.get<std::string>() << "\n";
    os << "projection reconstruction consistent: "
       << yes_no(g.at("spin_reconstruction_ok").get<bool>()) << "\n";
  }
  return os.str();
}

inline std::string human_verdict(const Json& rep) {
  const Json& v = rep.at("verdict");
  std::ostringstream os;
  os << "degeneracy verdict (max order " << v.at("max_order").get<int>() << "):\n";
  for (const Json& o : v.at("orders")) {
    os << "  order " << o.at("order").get<int>() << ": " << o.at("status").get<std::string>();
    if (o.contains("certificate")) {
      os << "  lambda=(";
      const Json& lam = o.at("certificate").at("lambda");
      for (std::size_t i = 0; i < lam.size(); ++i)
        os << (i ? "," : "") << lam[i].get<std::string>();
      os << ") " << o.at("certificate").at("strictness").get<std::string>();
    }
    if (o.contains("vacuous")) os << "  (all components vanish)";
    if (o.contains("witness"))
      os << "  witness " << o.at("witness").get<std::string>() << " = "
         << o.at("witness_value").get<std::string>();
    os << "\n";
  }
  os << "summary: " << v.at("summary").get<std::string>() << "\n";
  for (const Json& c : v.at("caveats")) os << "note: " << c.get<std::string>() << "\n";
  return os.str();
}

inline std::string human_bw(const Json& rep) {
  std::ostringstream os;
  os << "boost-weight diagram for " << rep.at("tensor").get<std::string>() << ":\n";
  os << rep.at("bw").at("diagram").get<std::string>();
  return os.str();
}

inline std::string human_oracle(const Json& rep) {
  const Json& o = rep.at("oracle");
  std::ostringstream os;
  os << "cross-check: " << o.at("points_checked").get<int>() << "/"
     << o.at("points_requested").get<int>() << " points checked, "
     << o.at("points_skipped").get<int>() << " skipped, " << o.at("comparisons").get<long long>()
     << " comparisons, " << o.at("mismatches").size() << " mismatches\n";
  for (const Json& m : o.at("mismatches"))
    os << "  MISMATCH " << m.at("quantity").get<std::string>() << " "
       << m.at("location").get<std::string>() << ": symbolic " << m.at("symbolic").get<std::string>()
       << " vs numeric " << m.at("numeric").get<std::string>() << " at "
       << m.at("point").get<std::string>() << "\n";
  os << (o.at("ok").get<bool>() ? "OK: symbolic and numeric routes agree\n"
                                : "FAILURE: routes disagree\n");
  return os.str();
}

inline Json oracle_report_json(const OracleReport& rep) {
  Json o;
  o["points_requested"] = rep.points_requested;
  o["points_checked"] = rep.points_checked;
  o["points_skipped"] = rep.points_skipped;
  o["retries_used"] = rep.retries_used;
  o["comparisons"] = rep.comparisons;
  Json ms = Json::array();
  for (const auto& m : rep.mismatches) {
    Json mj;
    mj["quantity"] = m.quantity;
    mj["location"] = m.location;
    mj["symbolic"] = m.symbolic;
    mj["numeric"] = m.numeric;
    mj["point"] = m.point;
    ms.push_back(std::move(mj));
  }
  o["mismatches"] = std::move(ms);
  o["truncated"] = rep.truncated;
  o["ok"] = rep.ok();
  return o;
}

/// Parse --tensor riemann|nabla^j|metric into a derivative order (-1 = metric).
inline int parse_tensor_selector(const std::string& sel) {
  if (sel == "metric") return -1;
  if (sel == "riemann") return 0;
  if (sel.rfind("nabla^", 0) == 0) {
    const std::string tail = sel.substr(6);
    if (!tail.empty() && tail.find_first_not_of("0123456789") == std::string::npos) {
      int j = std::stoi(tail);
      if (j >= 1) return j;
    }
  }
  throw ValidationError("--tensor expects riemann, nabla^j (j >= 1), or metric; got '" + sel +
                        "'");
}

}  // namespace detail

/// Runs the CLI; never throws.  `argv` excludes the program name.
inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"exact symbolic curvature, boost-weight and degeneracy toolkit"};
  app.require_subcommand(1);

  std::string metric_path, frame_path, out_path, tensor_selector = "riemann", builtin_name;
  std::vector<std::string> set_kv;
  int order = 4;
  bool as_json = false;
  std::uint64_t seed = SamplePlan{}.seed;
  int points = SamplePlan{}.points;

  auto add_common = [&](CLI::App* sub, bool with_out = true) {
    sub->add_flag("--json", as_json, "emit the machine-readable JSON report on stdout");
    if (with_out)
      sub->add_option("--out", out_path, "also write the JSON report to this file");
  };

  CLI::App* c_inv = app.add_subcommand("invariants", "print scalar curvature invariants");
  c_inv->add_option("metric", metric_path, "metric file (JSON)")->required();
  c_inv->add_option("--order", order, "highest covariant-derivative order K (default 4)");
  add_common(c_inv);

  CLI::App* c_cls = app.add_subcommand("classify", "geometry flags and spin coefficients");
  c_cls->add_option("metric", metric_path, "metric file (JSON)")->required();
  c_cls->add_option("--frame", frame_path, "null frame file (JSON)")->required();
  add_common(c_cls);

  CLI::App* c_vsi = app.add_subcommand("vsi", "certify or refute VSI_j order by order");
  c_vsi->add_option("metric", metric_path, "metric file (JSON)")->required();
  c_vsi->add_option("--frame", frame_path, "null frame file (JSON)")->required();
  c_vsi->add_option("--order", order, "highest covariant-derivative order K (default 4)");
  add_common(c_vsi);

  CLI::App* c_bw = app.add_subcommand("bw", "boost-weight diagram of a curvature tensor");
  c_bw->add_option("metric", metric_path, "metric file (JSON)")->required();
  c_bw->add_option("--frame", frame_path, "null frame file (JSON)")->required();
  c_bw->add_option("--tensor", tensor_selector, "riemann | nabla^j | metric (default riemann)");
  add_common(c_bw);

  CLI::App* c_blt = app.add_subcommand("builtin", "emit a catalog family instance as files");
  std::string name_help = "family name:";
  for (const std::string& n : builtin_names()) name_help += " " + n;
  c_blt->add_option("name", builtin_name, name_help)->required();
  c_blt->add_option("--set", set_kv, "bind a family function/parameter, key=expr (repeatable)");
  c_blt->add_option("--out", out_path, "output directory (default: ./<name>)");
  c_blt->add_flag("--json", as_json, "emit the machine-readable JSON report on stdout");

  CLI::App* c_orc = app.add_subcommand("oracle", "cross-check symbolic against exact-point numeric");
  c_orc->add_option("metric", metric_path, "metric file (JSON)")->required();
  c_orc->add_option("--order", order, "highest covariant-derivative order K (default 4)");
  c_orc->add_option("--seed", seed, "sample-plan RNG seed");
  c_orc->add_option("--points", points, "number of sample points (default 20)");
  add_common(c_orc);

  // CLI11 wants argc/argv including the program name.
  std::vector<const char*> cargv;
  cargv.push_back("vsi");
  for (const std::string& s : argv) cargv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream help;
    int code = app.exit(e, help, help);
    out << help.str();
    return code;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*c_inv) {
      Metric metric = load_metric_file(metric_path);
      CurvatureStack stack = build_stack(metric, order);
      Json rep = report_header("invariants", argv);
      rep["invariants"] = named_invariants_json(witness_invariants(stack, order));
      rep["resources"] = resource_stats_json(stack.components_built);
      detail::deliver(rep, as_json, out_path, detail::human_invariants(rep), out);
    } else if (*c_cls) {
      Metric metric = load_metric_file(metric_path);
      NullFrame frame = load_frame_file(frame_path, metric);
      GeometryFlags flags = classify_geometry(metric, frame);
      Json rep = report_header("classify", argv);
      rep["geometry"] = geometry_flags_json(flags);
      detail::deliver(rep, as_json, out_path, detail::human_geometry(rep), out);
    } else if (*c_vsi) {
      Metric metric = load_metric_file(metric_path);
      NullFrame frame = load_frame_file(frame_path, metric);
      VSIVerdict verdict = vsi_verdict(metric, frame, order);
      Json rep = report_header("vsi", argv);
      rep["verdict"] = verdict_json(verdict);
      detail::deliver(rep, as_json, out_path, detail::human_verdict(rep), out);
    } else if (*c_bw) {
      Metric metric = load_metric_file(metric_path);
      NullFrame frame = load_frame_file(frame_path, metric);
      int j = detail::parse_tensor_selector(tensor_selector);
      Json rep = report_header("bw", argv);
      rep["tensor"] = tensor_selector;
      if (j < 0) {
        rep["bw"] = bw_json(bw_decompose(metric.g, frame));
      } else {
        CurvatureStack stack = build_stack(metric, j);
        rep["bw"] = bw_json(bw_decompose(stack.nabla_riem[static_cast<std::size_t>(j)], frame));
        rep["resources"] = resource_stats_json(stack.components_built);
      }
      detail::deliver(rep, as_json, out_path, detail::human_bw(rep), out);
    } else if (*c_blt) {
      FamilyInstance inst = make_builtin(builtin_name, detail::set_map(set_kv));
      const std::string dir = out_path.empty() ? builtin_name : out_path;
      write_instance_files(dir, inst);
      Json rep = report_header("builtin", argv);
      rep["family"] = inst.family;
      rep["files"] = Json::array(
          {dir + "/metric.json", dir + "/frame.json", dir + "/expected.json"});
      rep["expected"] = manifest_to_json(inst);
      std::ostringstream human;
      human << "wrote " << dir << "/metric.json, " << dir << "/frame.json, " << dir
            << "/expected.json\n";
      detail::deliver(rep, as_json, "", human.str(), out);
    } else if (*c_orc) {
      Metric metric = load_metric_file(metric_path);
      CurvatureStack stack = build_stack(metric, order);
      SamplePlan plan;
      plan.seed = seed;
      plan.points = points;
      OracleReport orep = cross_check(stack, plan);
      Json rep = report_header("oracle", argv);
      rep["oracle"] = detail::oracle_report_json(orep);
      rep["resources"] = resource_stats_json(stack.components_built);
      detail::deliver(rep, as_json, out_path, detail::human_oracle(rep), out);
      if (!orep.ok()) return 1;
    }
    return 0;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace cli
}  // namespace vsi
