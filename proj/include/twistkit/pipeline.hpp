#pragma once

// Pipeline composition: load an input (PD text, diagram JSON, or augmented
// JSON), run select -> augment -> reduce -> decompose -> bounds, and render
// the combined report as canonical JSON or as text (one summary line per
// stage).  The CLI is a thin shell over this header.

#include <cxxabi.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <typeinfo>
#include <vector>

#include "twistkit/json_io.hpp"

namespace twistkit {

inline const char* version_string() { return "twistkit 0.1.0"; }

struct PipelineConfig {
  std::string strategy = "greedy-largest";
  int k_max = 8;
  std::string objective = "max-min-half-twists";
  std::string profile = "paper";
  std::string format = "json";  // json | text
  std::string only;             // restrict the emitted report to one stage
  bool require_certificate = false;
  bool explain = false;
  long long threshold_persistence = 6;  // half-twist floor for per-circle certificates
  long long threshold_gromov = 7;       // floor for the twisted-object Gromov bound
  bool unsafe_thresholds = false;       // set when the floors were overridden
  std::map<std::string, int> final_twists;  // prediction overrides: circle -> |c|
  std::map<std::string, long long> fills;   // twist subcommand: circle -> full twists n
};

inline nlohmann::json config_to_json(const PipelineConfig& c) {
  nlohmann::json set_j(nlohmann::json::object());
  for (const auto& [id, v] : c.final_twists) set_j[id] = v;
  nlohmann::json fill_j(nlohmann::json::object());
  for (const auto& [id, v] : c.fills) fill_j[id] = v;
  return {{"explain", c.explain},
          {"fill", fill_j},
          {"format", c.format},
          {"k_max", c.k_max},
          {"objective", c.objective},
          {"only", c.only},
          {"profile", c.profile},
          {"require_certificate", c.require_certificate},
          {"set", set_j},
          {"strategy", c.strategy},
          {"thresholds",
           {{"gromov", c.threshold_gromov},
            {"persistence", c.threshold_persistence},
            {"unsafe", c.unsafe_thresholds}}}};
}

// ---- staged errors ---------------------------------------------------------

inline std::string error_type_name(const std::exception& e) {
  int status = 0;
  char* raw = abi::__cxa_demangle(typeid(e).name(), nullptr, nullptr, &status);
  std::string name = (status == 0 && raw) ? raw : typeid(e).name();
  std::free(raw);
  const std::string ns = "twistkit::";
  if (name.rfind(ns, 0) == 0) name = name.substr(ns.size());
  return name;
}

// An error annotated with the pipeline stage and original type it came from.
struct StagedError : Error {
  std::string stage, type;
  StagedError(std::string st, std::string ty, const std::string& msg)
      : Error(msg), stage(std::move(st)), type(std::move(ty)) {}
};

template <class F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const StagedError&) {
    throw;
  } catch (const Error& e) {
    throw StagedError(stage, error_type_name(e), e.what());
  } catch (const nlohmann::json::exception& e) {
    throw StagedError(stage, "MalformedSyntax", std::string("JSON: ") + e.what());
  }
}

// ---- input loading ---------------------------------------------------------

enum class InputKind { Diagram, Augmented };

struct LoadedInput {
  InputKind kind = InputKind::Diagram;
  LinkDiagram diagram;      // when kind == Diagram
  AugmentedLink augmented;  // when kind == Augmented
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedSyntax("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// JSON payloads start with '{'; anything else is PD text.
inline LoadedInput parse_input_text(const std::string& text) {
  LoadedInput in;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedSyntax(std::string("JSON: ") + e.what());
    }
    if (j.contains("circles")) {
      in.kind = InputKind::Augmented;
      in.augmented = augmented_from_json(j);
    } else if (j.contains("crossings")) {
      in.kind = InputKind::Diagram;
      in.diagram = diagram_from_json(j);
    } else {
      throw MalformedSyntax("JSON input is neither a diagram nor an augmented link");
    }
    return in;
  }
  in.kind = InputKind::Diagram;
  in.diagram = parse_diagram(text);
  return in;
}

inline LoadedInput load_input(const std::string& path) {
  return parse_input_text(read_file(path));
}

// ---- bounds assembly -------------------------------------------------------

struct CircleBound {
  std::string id;
  long long c = 0;  // final half-twist count, overrides applied
  double slope_length = 0.0;
  std::string certificate;
  bool in_lhat = true;  // false for circles living in collapsible levels
};

struct PieceBound {
  int depth = 0;
  long long t_i = 0;
  long long c_min = 0;
  std::string classification;
  bool certified = false;  // counts toward the volume total
  Bound volume;
  bool has_after_twisting = false;
  Bound after_twisting;
};

struct BoundsReport {
  ConstantsProfile constants;
  long long t = 0, t0 = 0;
  long long c_min = 0;  // over every circle, collapsible included
  std::vector<CircleBound> circles;
  std::vector<PieceBound> pieces;
  Bound volume_total;
  Bound gromov_augmented;  // for the nested augmented link itself
  bool has_gromov_twisted = false;
  Bound gromov_twisted;  // for the knot obtained by twisting; needs c_min >= 7
  std::vector<std::string> notes;
};

namespace detail {

inline long long final_c(const CrossingCircle& c, const FinalTwists& fin) {
  const auto it = fin.overrides.find(c.id);
  if (it != fin.overrides.end()) return std::llabs(static_cast<long long>(it->second));
  return std::llabs(stored_half_twists(c));
}

}  // namespace detail

inline BoundsReport compute_bounds(const AugmentedLink& reduced, const DecompositionReport& decomp,
                                   const FinalTwists& fin, const PipelineConfig& cfg,
                                   bool filled_is_knot, int filled_components) {
  BoundsReport rep;
  rep.constants = constants_profile(cfg.profile);
  rep.t = decomp.t;
  rep.t0 = decomp.t0;

  const std::set<std::string> lhat(decomp.sublink_lhat.begin(), decomp.sublink_lhat.end());
  std::map<std::string, long long> c_of;
  std::vector<CrossingCircle> circles = reduced.circles;
  std::sort(circles.begin(), circles.end(),
            [](const CrossingCircle& x, const CrossingCircle& y) { return x.id < y.id; });
  for (const auto& circ : circles) {
    CircleBound cb;
    cb.id = circ.id;
    cb.c = detail::final_c(circ, fin);
    cb.slope_length = slope_length_lower(cb.c);
    cb.certificate = to_string(certify_filling(cb.c));
    cb.in_lhat = lhat.count(circ.id) > 0;
    c_of[cb.id] = cb.c;
    if (rep.circles.empty() || cb.c < rep.c_min) rep.c_min = cb.c;
    rep.circles.push_back(cb);
  }

  double total = 0.0;
  for (const auto& comp : decomp.jsj) {
    const Level* lvl = nullptr;
    for (const auto& l : decomp.levels)
      if (l.depth == comp.depth) lvl = &l;
    const ComponentClassification* cls = nullptr;
    for (const auto& c : decomp.classifications)
      if (c.depth == comp.depth) cls = &c;
    if (!lvl || !cls) throw Error("internal: jsj component at depth " +
                                  std::to_string(comp.depth) + " has no level");
    PieceBound pb;
    pb.depth = comp.depth;
    pb.t_i = lvl->t_i;
    pb.c_min = 0;
    for (const auto& id : lvl->circle_ids) {
      const long long c = c_of.at(id);
      if (pb.c_min == 0 || c < pb.c_min) pb.c_min = c;
    }
    pb.classification = to_string(cls->kind);
    pb.certified = cls->kind == LevelKind::HyperbolicCertified;
    // outermost piece sits in the 3-sphere, deeper ones in solid tori
    pb.volume = comp.depth == 0 ? volume_lower_s3(pb.t_i, rep.constants)
                                : volume_lower_solid_torus(pb.t_i, rep.constants);
    if (pb.c_min >= cfg.threshold_gromov) {
      try {
        pb.after_twisting = volume_lower_after_twisting(pb.t_i, pb.c_min, rep.constants);
        pb.has_after_twisting = true;
      } catch (const Error& e) {
        rep.notes.push_back("after-twisting bound unavailable at depth " +
                            std::to_string(pb.depth) + ": " + e.what());
      }
    }
    if (pb.certified) total += pb.volume.value;
    rep.pieces.push_back(pb);
  }

  rep.volume_total.value = total;
  rep.volume_total.formula = "sum of component bounds over hyperbolic-certified components";
  rep.volume_total.profile = rep.constants.name;
  rep.volume_total.vacuous = !(total > 0.0);

  rep.gromov_augmented = gromov_lower_link(rep.t, rep.t0, rep.constants);

  if (rep.c_min < cfg.threshold_gromov) {
    rep.notes.push_back("gromov_lower unavailable: c_min=" + std::to_string(rep.c_min) + " < " +
                        std::to_string(cfg.threshold_gromov) + " (certificates only)");
  } else if (!filled_is_knot) {
    rep.notes.push_back("gromov_lower needs a knot after twisting; filled diagram has " +
                        std::to_string(filled_components) + " components");
  } else {
    try {
      rep.gromov_twisted = gromov_lower_knot(rep.t, rep.c_min, rep.constants);
      rep.has_gromov_twisted = true;
    } catch (const Error& e) {
      rep.notes.push_back(std::string("gromov_lower unavailable: ") + e.what());
    }
  }
  return rep;
}

inline nlohmann::json bounds_to_json(const BoundsReport& rep) {
  nlohmann::json j;
  j["constants"] = {{"name", rep.constants.name}, {"v3", rep.constants.v3}, {"v8", rep.constants.v8}};
  j["t"] = rep.t;
  j["t0"] = rep.t0;
  j["c_min"] = rep.c_min;
  j["circles"] = nlohmann::json::array();
  for (const auto& c : rep.circles)
    j["circles"].push_back({{"c", c.c},
                            {"certificate", c.certificate},
                            {"id", c.id},
                            {"in_lhat", c.in_lhat},
                            {"slope_length", c.slope_length}});
  j["components"] = nlohmann::json::array();
  for (const auto& p : rep.pieces) {
    nlohmann::json pj = {{"c_min", p.c_min},
                         {"certified", p.certified},
                         {"classification", p.classification},
                         {"depth", p.depth},
                         {"t_i", p.t_i},
                         {"volume_lower", bound_to_json(p.volume)}};
    pj["after_twisting"] = p.has_after_twisting ? bound_to_json(p.after_twisting)
                                                : nlohmann::json(nullptr);
    j["components"].push_back(pj);
  }
  j["volume_total"] = bound_to_json(rep.volume_total);
  j["gromov_lower_augmented"] = bound_to_json(rep.gromov_augmented);
  j["gromov_lower"] =
      rep.has_gromov_twisted ? bound_to_json(rep.gromov_twisted) : nlohmann::json(nullptr);
  j["notes"] = rep.notes;
  return j;
}

// ---- the pipeline ----------------------------------------------------------

struct PipelineResult {
  std::string input_path;
  PipelineConfig config;
  bool from_diagram = false;
  LinkDiagram input_diagram;  // when from_diagram
  TwistSelection selection;   // when from_diagram
  AugmentedLink augmented;
  ReductionReport reduction;
  DecompositionReport decomposition;
  BoundsReport bounds;
  bool filled_is_knot = false;
  int filled_components = 0;
  std::string fill_note;
};

inline PipelineResult run_pipeline(const std::string& path, const PipelineConfig& cfg) {
  PipelineResult r;
  r.input_path = path;
  r.config = cfg;

  const LoadedInput in = run_stage("parse", [&] { return load_input(path); });
  if (in.kind == InputKind::Diagram) {
    r.from_diagram = true;
    r.input_diagram = in.diagram;
    SelectOptions opt;
    opt.k_max = cfg.k_max;
    opt.objective = cfg.objective;
    r.selection = run_stage("select", [&] {
      return detect_and_select(r.input_diagram, selection_strategy(cfg.strategy), opt);
    });
    r.augmented = run_stage("augment", [&] { return augment(r.input_diagram, r.selection); });
  } else {
    r.augmented = in.augmented;
  }

  r.reduction = run_stage("reduce", [&] { return reduce_fully(r.augmented); });

  FinalTwists fin;
  fin.overrides = cfg.final_twists;
  r.decomposition = run_stage("decompose", [&] { return jsj_report(r.reduction.output, fin); });

  // knot-or-link check for the twisted object: refill with the stored slopes
  try {
    const LinkDiagram filled = twist_fill(r.reduction.output);
    r.filled_components = static_cast<int>(filled.components.size());
    r.filled_is_knot = r.filled_components == 1;
  } catch (const Error& e) {
    r.fill_note = std::string("refill check failed: ") + e.what();
  }

  r.bounds = run_stage("bounds", [&] {
    return compute_bounds(r.reduction.output, r.decomposition, fin, cfg, r.filled_is_knot,
                          r.filled_components);
  });
  return r;
}

// true when the decomposition certified every non-collapsible piece
inline bool prediction_certified(const DecompositionReport& rep) {
  return rep.overall.rfind("jsj predicted", 0) == 0;
}

// ---- report emission -------------------------------------------------------

inline nlohmann::json pipeline_report_json(const PipelineResult& r) {
  nlohmann::json stages(nlohmann::json::object());
  const auto want = [&](const char* name) { return r.config.only.empty() || r.config.only == name; };
  if (r.from_diagram && want("selection")) stages["selection"] = selection_to_json(r.selection);
  if (r.from_diagram && want("augmentation")) stages["augmentation"] = augmented_to_json(r.augmented);
  if (want("reduction")) stages["reduction"] = reduction_report_to_json(r.reduction, r.config.explain);
  if (want("decomposition")) stages["decomposition"] = decomposition_to_json(r.decomposition);
  if (want("bounds")) stages["bounds"] = bounds_to_json(r.bounds);
  nlohmann::json j;
  j["version"] = version_string();
  j["input"] = r.input_path;
  j["config"] = config_to_json(r.config);
  j["stages"] = stages;
  if (!r.fill_note.empty()) j["notes"] = nlohmann::json::array({r.fill_note});
  return j;
}

namespace detail {

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace detail

inline std::string selection_text(const TwistSelection& sel, bool explain) {
  std::ostringstream os;
  os << "selection: " << sel.regions.size() << " region(s) [" << sel.strategy
     << "], min |c| = " << sel.min_abs_c << "\n";
  if (explain) {
    for (const auto& reg : sel.regions) {
      os << "  region " << reg.id << ": m=" << reg.m << ", c=" << reg.c << ", crossings";
      for (size_t i = 0; i < reg.crossings.size(); ++i)
        os << (i ? "," : " ") << reg.crossings[i];
      os << "\n";
    }
  }
  return os.str();
}

inline std::string augmentation_text(const AugmentedLink& a) {
  std::ostringstream os;
  os << "augmentation: " << a.circles.size() << " circle(s):";
  std::vector<CrossingCircle> circles = a.circles;
  std::sort(circles.begin(), circles.end(),
            [](const CrossingCircle& x, const CrossingCircle& y) { return x.id < y.id; });
  for (const auto& c : circles) {
    const auto slope = filling_slope(c);
    os << " " << c.id << "[m=" << c.m << " h=" << c.h << " sign=" << (c.sign > 0 ? "+" : "-")
       << " n=" << c.n << " slope=(" << slope.first << "," << slope.second << ")]";
  }
  os << "\n";
  return os.str();
}

inline std::string reduction_text(const ReductionReport& rep, bool explain) {
  std::ostringstream os;
  os << "reduction: " << rep.moves.size() << " move(s); " << rep.status << "\n";
  if (explain && !rep.moves.empty()) {
    Wiring w = analyze_standard_form(rep.input);
    int k = 0;
    for (const auto& m : rep.moves) {
      const auto summary = [](const Wiring& x) {
        std::ostringstream s;
        std::vector<SiteSpec> order = x.sites;
        std::sort(order.begin(), order.end(),
                  [](const SiteSpec& u, const SiteSpec& v) { return u.id < v.id; });
        for (size_t i = 0; i < order.size(); ++i) {
          const auto& site = order[i];
          s << (i ? " " : "") << site.id << "(m=" << site.m
            << ",c=" << stored_half_twists({site.id, site.m, site.h, site.sign, site.n, {}}) << ")";
        }
        return s.str();
      };
      os << "  move " << ++k << ": " << m.note << "\n";
      os << "    before: " << summary(w) << "\n";
      w = apply_reduction(w, m);
      os << "    after:  " << summary(w) << "\n";
    }
  }
  return os.str();
}

inline std::string decomposition_text(const DecompositionReport& rep, bool explain) {
  std::ostringstream os;
  os << "decomposition: " << rep.levels.size() << " level(s); t=" << rep.t << " t0=" << rep.t0
     << "; " << rep.overall << "\n";
  if (explain) {
    for (const auto& lvl : rep.levels) {
      os << "  level depth " << lvl.depth << ": t_i=" << lvl.t_i << ", circles";
      for (size_t i = 0; i < lvl.circle_ids.size(); ++i)
        os << (i ? "," : " ") << lvl.circle_ids[i];
      for (const auto& cls : rep.classifications)
        if (cls.depth == lvl.depth) os << " -> " << to_string(cls.kind);
      os << "\n";
    }
  }
  return os.str();
}

inline std::string bounds_text(const BoundsReport& rep) {
  std::ostringstream os;
  os << "bounds[" << rep.constants.name << "]: volume_total >= "
     << detail::fmt_double(rep.volume_total.value) << ", gromov(augmented) >= "
     << detail::fmt_double(rep.gromov_augmented.value) << ", gromov(twisted) ";
  if (rep.has_gromov_twisted)
    os << ">= " << detail::fmt_double(rep.gromov_twisted.value);
  else
    os << "unavailable";
  os << "; c_min=" << rep.c_min << "\n";
  for (const auto& n : rep.notes) os << "  note: " << n << "\n";
  return os.str();
}

// the text report's final line names the predicted pieces, outermost first
inline std::string classification_text(const DecompositionReport& rep) {
  std::ostringstream os;
  os << "classification: ";
  for (size_t i = 0; i < rep.jsj.size(); ++i) os << (i ? "; " : "") << rep.jsj[i].type;
  if (rep.jsj.empty()) os << "(no non-collapsible components)";
  return os.str();
}

inline std::string pipeline_report_text(const PipelineResult& r) {
  std::ostringstream os;
  os << version_string() << "\n";
  os << "input: " << r.input_path << "\n";
  const auto want = [&](const char* name) { return r.config.only.empty() || r.config.only == name; };
  if (r.from_diagram && want("selection")) os << selection_text(r.selection, r.config.explain);
  if (r.from_diagram && want("augmentation")) os << augmentation_text(r.augmented);
  if (want("reduction")) os << reduction_text(r.reduction, r.config.explain);
  if (want("decomposition")) os << decomposition_text(r.decomposition, r.config.explain);
  if (want("bounds")) os << bounds_text(r.bounds);
  if (!r.fill_note.empty()) os << "note: " << r.fill_note << "\n";
  if (want("decomposition")) os << classification_text(r.decomposition) << "\n";
  return os.str();
}

}  // namespace twistkit
