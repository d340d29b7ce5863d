#pragma once

// JSON mirrors of the domain types: diagrams, augmented links, selections,
// reduction and decomposition reports.  Emission is canonical -- object keys
// sorted, arrays in deterministic (sorted-id) order -- so identical inputs
// serialize byte-identically.  Consumption validates derived fields (slope,
// p_class) when present rather than trusting them.

#include <json.hpp>

#include <string>
#include <vector>

#include "twistkit/augment.hpp"
#include "twistkit/bounds.hpp"
#include "twistkit/decompose.hpp"
#include "twistkit/diagram.hpp"
#include "twistkit/errors.hpp"
#include "twistkit/reduce.hpp"
#include "twistkit/twist.hpp"

namespace twistkit {

// nlohmann::json keeps object keys sorted; dump(2) is the one true output.
inline std::string dump_canonical(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// ---- diagrams --------------------------------------------------------------

inline nlohmann::json diagram_to_json(const LinkDiagram& input) {
  const Analyzed a = analyze(input);  // normalizes ordering and computes signs
  nlohmann::json j;
  j["crossings"] = nlohmann::json::array();
  for (size_t i = 0; i < a.diagram.crossings.size(); ++i) {
    const auto& x = a.diagram.crossings[i];
    j["crossings"].push_back({{"arcs", x.arcs}, {"sign", a.signs[i] > 0 ? "+" : "-"}});
  }
  j["components"] = nlohmann::json::array();
  for (const auto& c : a.diagram.components)
    j["components"].push_back({{"arcs", c.arcs}, {"name", c.name}, {"role", to_string(c.role)}});
  return j;
}

inline LinkDiagram diagram_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("crossings"))
    throw MalformedSyntax("diagram JSON needs a crossings array");
  LinkDiagram d;
  for (const auto& jx : j.at("crossings")) {
    Crossing x;
    const auto& arcs = jx.at("arcs");
    if (!arcs.is_array() || arcs.size() != 4)
      throw MalformedSyntax("crossing needs exactly 4 arcs");
    for (int s = 0; s < 4; ++s) x.arcs[s] = arcs.at(s).get<int>();
    if (jx.contains("sign") && !jx.at("sign").is_null()) {
      const std::string sg = jx.at("sign").get<std::string>();
      if (sg == "+") x.declared_sign = +1;
      else if (sg == "-") x.declared_sign = -1;
      else throw MalformedSyntax("crossing sign must be \"+\" or \"-\", got \"" + sg + "\"");
    }
    d.crossings.push_back(x);
  }
  for (const auto& jc : j.value("components", nlohmann::json::array())) {
    Component c;
    c.name = jc.at("name").get<std::string>();
    const std::string role = jc.value("role", "Knot");
    if (role == "Knot") c.role = Role::Knot;
    else if (role == "Circle") c.role = Role::Circle;
    else throw MalformedSyntax("unknown component role \"" + role + "\"");
    for (const auto& arc : jc.value("arcs", nlohmann::json::array()))
      c.arcs.push_back(arc.get<int>());
    d.components.push_back(c);
  }
  return analyze(d).diagram;
}

// ---- augmented links -------------------------------------------------------

inline nlohmann::json augmented_to_json(const AugmentedLink& a) {
  nlohmann::json j;
  j["diagram"] = diagram_to_json(a.diagram);
  std::vector<CrossingCircle> circles = a.circles;
  std::sort(circles.begin(), circles.end(),
            [](const CrossingCircle& x, const CrossingCircle& y) { return x.id < y.id; });
  j["circles"] = nlohmann::json::array();
  for (const auto& c : circles) {
    const auto slope = filling_slope(c);
    j["circles"].push_back({{"disk_order", c.disk_order},
                            {"h", c.h},
                            {"id", c.id},
                            {"m", c.m},
                            {"n", c.n},
                            {"p_class", p_boundary_class(c.h)},
                            {"sign", c.sign},
                            {"slope", std::vector<long long>{slope.first, slope.second}}});
  }
  return j;
}

inline AugmentedLink augmented_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("diagram") || !j.contains("circles"))
    throw MalformedSyntax("augmented-link JSON needs diagram and circles");
  AugmentedLink a;
  a.diagram = diagram_from_json(j.at("diagram"));
  for (const auto& jc : j.at("circles")) {
    CrossingCircle c;
    c.id = jc.at("id").get<std::string>();
    c.m = jc.at("m").get<int>();
    c.h = jc.at("h").get<int>();
    c.sign = jc.at("sign").get<int>();
    c.n = jc.at("n").get<long long>();
    for (const auto& arc : jc.value("disk_order", nlohmann::json::array()))
      c.disk_order.push_back(arc.get<int>());
    if (jc.contains("slope")) {
      const auto want = filling_slope(c);
      const auto got = jc.at("slope").get<std::vector<long long>>();
      if (got.size() != 2 || got[0] != want.first || got[1] != want.second)
        throw MalformedSyntax("circle " + c.id + " stores a slope that contradicts n=" +
                              std::to_string(c.n));
    }
    if (jc.contains("p_class")) {
      const auto want = p_boundary_class(c.h);
      const auto got = jc.at("p_class").get<std::vector<std::pair<long long, long long>>>();
      if (got != want)
        throw MalformedSyntax("circle " + c.id + " stores a p_class that contradicts h=" +
                              std::to_string(c.h));
    }
    a.circles.push_back(c);
  }
  analyze_standard_form(a);  // full structural gate
  return a;
}

// ---- twist-region selections -----------------------------------------------

inline nlohmann::json selection_to_json(const TwistSelection& sel) {
  nlohmann::json j;
  j["strategy"] = sel.strategy;
  j["min_abs_c"] = sel.min_abs_c;
  j["regions"] = nlohmann::json::array();
  for (const auto& r : sel.regions)
    j["regions"].push_back({{"c", r.c},
                            {"crossings", r.crossings},
                            {"entry", r.entry},
                            {"exit", r.exit},
                            {"id", r.id},
                            {"m", r.m}});
  return j;
}

// ---- reduction -------------------------------------------------------------

inline nlohmann::json reduction_to_json(const Reduction& r) {
  return {{"circle", r.circle},
          {"flype", r.flype},
          {"kind", move_name(r.kind)},
          {"note", r.note},
          {"other", r.other},
          {"position", r.position},
          {"side", std::string(1, r.side)}};
}

// Compact per-site summary used by move explanations.
inline nlohmann::json wiring_summary_json(const Wiring& w) {
  nlohmann::json sites = nlohmann::json::array();
  std::vector<SiteSpec> order = w.sites;
  std::sort(order.begin(), order.end(),
            [](const SiteSpec& x, const SiteSpec& y) { return x.id < y.id; });
  for (const auto& s : order)
    sites.push_back({{"c", stored_half_twists({s.id, s.m, s.h, s.sign, s.n, {}})},
                     {"h", s.h},
                     {"id", s.id},
                     {"m", s.m},
                     {"n", s.n},
                     {"sign", s.sign}});
  return {{"sites", sites}, {"wire_count", w.wires.size()}};
}

inline nlohmann::json reduction_report_to_json(const ReductionReport& rep, bool explain = false) {
  nlohmann::json j;
  j["input"] = augmented_to_json(rep.input);
  j["output"] = augmented_to_json(rep.output);
  j["moves"] = nlohmann::json::array();
  for (const auto& m : rep.moves) j["moves"].push_back(reduction_to_json(m));
  j["reduced"] = rep.reduced;
  j["status"] = rep.status;
  if (explain) {
    // replay the log so every move carries its before/after site summaries
    nlohmann::json trace = nlohmann::json::array();
    Wiring w = analyze_standard_form(rep.input);
    for (const auto& m : rep.moves) {
      nlohmann::json step;
      step["move"] = reduction_to_json(m);
      step["before"] = wiring_summary_json(w);
      w = apply_reduction(w, m);
      step["after"] = wiring_summary_json(w);
      trace.push_back(step);
    }
    j["trace"] = trace;
  }
  return j;
}

// ---- decomposition ---------------------------------------------------------

inline nlohmann::json decomposition_to_json(const DecompositionReport& rep) {
  nlohmann::json j;
  j["levels"] = nlohmann::json::array();
  for (const auto& lvl : rep.levels)
    j["levels"].push_back({{"circles", lvl.circle_ids},
                           {"core_strands", lvl.core_strands},
                           {"depth", lvl.depth},
                           {"t_i", lvl.t_i}});
  j["classifications"] = nlohmann::json::array();
  for (const auto& c : rep.classifications)
    j["classifications"].push_back(
        {{"depth", c.depth}, {"kind", to_string(c.kind)}, {"min_c", c.min_c}});
  j["lhat"] = rep.sublink_lhat;
  j["t"] = rep.t;
  j["t0"] = rep.t0;
  j["jsj"] = nlohmann::json::array();
  for (const auto& c : rep.jsj)
    j["jsj"].push_back({{"certificate", c.certificate}, {"depth", c.depth}, {"type", c.type}});
  j["overall"] = rep.overall;
  j["detection"] = rep.detection;
  return j;
}

// ---- bounds ----------------------------------------------------------------

inline nlohmann::json bound_to_json(const Bound& b) {
  return {{"formula", b.formula},
          {"profile", b.profile},
          {"vacuous", b.vacuous},
          {"value", b.value}};
}

// ---- validation ------------------------------------------------------------

inline nlohmann::json validation_to_json(const ValidationReport& r) {
  nlohmann::json j;
  j["ok"] = r.ok;
  j["issues"] = nlohmann::json::array();
  for (const auto& i : r.issues) j["issues"].push_back({{"code", i.code}, {"message", i.message}});
  return j;
}

}  // namespace twistkit
