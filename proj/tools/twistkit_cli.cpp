// twistkit: twist-region analysis of knot/link diagrams from the command line.
//
// Subcommands mirror the pipeline stages: validate, twist-regions, augment,
// reduce, twist, decompose, bounds, pipeline.  Inputs are PD text, diagram
// JSON, or augmented-link JSON; unresolved paths are retried under
// $TWISTKIT_FIXTURES.  Exit codes: 0 ok; 2 validation failure; 3 when
// --require-certificate is set and the decomposition stays inconclusive.

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "twistkit/pipeline.hpp"

using namespace twistkit;

namespace {

std::string resolve_input(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  if (const char* env = std::getenv("TWISTKIT_FIXTURES")) {
    const fs::path alt = fs::path(env) / path;
    if (fs::exists(alt)) return alt.string();
  }
  return path;
}

void check_config(const PipelineConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "text")
    throw Error("unknown format: " + cfg.format + " (expected json or text)");
  constants_profile(cfg.profile);    // throws on unknown names
  selection_strategy(cfg.strategy);  // ditto
  if (!cfg.only.empty()) {
    const std::vector<std::string> stages = {"selection", "augmentation", "reduction",
                                             "decomposition", "bounds"};
    if (std::find(stages.begin(), stages.end(), cfg.only) == stages.end())
      throw Error("unknown stage for --only: " + cfg.only);
  }
}

// "C2=5" -> ("C2", 5)
std::pair<std::string, long long> parse_assignment(const std::string& s, const char* flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(std::string(flag) + " expects CIRCLE=INTEGER, got '" + s + "'");
  try {
    size_t pos = 0;
    const long long v = std::stoll(s.substr(eq + 1), &pos);
    if (pos != s.size() - eq - 1) throw Error("");
    return {s.substr(0, eq), v};
  } catch (...) {
    throw Error(std::string(flag) + " expects CIRCLE=INTEGER, got '" + s + "'");
  }
}

void apply_assignments(PipelineConfig& cfg, const std::vector<std::string>& sets,
                       const std::vector<std::string>& fills) {
  for (const auto& s : sets) {
    const auto [id, v] = parse_assignment(s, "--set");
    cfg.final_twists[id] = static_cast<int>(v);
  }
  for (const auto& s : fills) {
    const auto [id, v] = parse_assignment(s, "--fill");
    cfg.fills[id] = v;
  }
}

void apply_thresholds(PipelineConfig& cfg, const std::string& spec) {
  if (spec.empty()) return;
  const auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw Error("--unsafe-thresholds expects PERSISTENCE,GROMOV (e.g. 6,7)");
  try {
    cfg.threshold_persistence = std::stoll(spec.substr(0, comma));
    cfg.threshold_gromov = std::stoll(spec.substr(comma + 1));
  } catch (...) {
    throw Error("--unsafe-thresholds expects PERSISTENCE,GROMOV (e.g. 6,7)");
  }
  cfg.unsafe_thresholds = true;
}

void emit(const std::string& s) { std::cout << s; }

nlohmann::json wrap_report(const std::string& input, const PipelineConfig& cfg,
                           nlohmann::json result) {
  nlohmann::json j;
  j["version"] = version_string();
  j["input"] = input;
  j["config"] = config_to_json(cfg);
  j["result"] = std::move(result);
  return j;
}

int report_error(const std::string& input, const StagedError& e) {
  std::cerr << "error [" << input << ", stage " << e.stage << "]: " << e.type << ": " << e.what()
            << "\n";
  return 2;
}

int report_error(const std::string& input, const Error& e) {
  std::cerr << "error [" << input << "]: " << error_type_name(e) << ": " << e.what() << "\n";
  return 2;
}

// ---- subcommands -----------------------------------------------------------

int cmd_validate(std::vector<std::string> inputs, const PipelineConfig& cfg) {
  std::sort(inputs.begin(), inputs.end());
  nlohmann::json batch = nlohmann::json::array();
  std::ostringstream text;
  bool all_ok = true;
  for (const auto& raw_path : inputs) {
    const std::string path = resolve_input(raw_path);
    ValidationReport rep;
    try {
      const LoadedInput in = load_input(path);
      if (in.kind == InputKind::Diagram) rep = validate(in.diagram);
    } catch (const Error& e) {
      rep.ok = false;
      rep.issues.push_back({error_type_name(e), e.what()});
    }
    all_ok = all_ok && rep.ok;
    nlohmann::json j = validation_to_json(rep);
    j["input"] = raw_path;
    batch.push_back(j);
    if (rep.ok) {
      text << raw_path << ": ok\n";
    } else {
      for (const auto& issue : rep.issues)
        text << raw_path << ": FAIL " << issue.code << ": " << issue.message << "\n";
    }
  }
  if (cfg.format == "json")
    emit(dump_canonical(batch.size() == 1 ? batch.front() : batch));
  else
    emit(text.str());
  return all_ok ? 0 : 2;
}

int cmd_twist_regions(const std::string& input, const PipelineConfig& cfg) {
  const std::string path = resolve_input(input);
  const LoadedInput in = run_stage("parse", [&] { return load_input(path); });
  if (in.kind != InputKind::Diagram)
    throw StagedError("parse", "MalformedSyntax", "twist-regions needs a plain diagram input");
  SelectOptions opt;
  opt.k_max = cfg.k_max;
  opt.objective = cfg.objective;
  const TwistSelection sel = run_stage("select", [&] {
    return detect_and_select(in.diagram, selection_strategy(cfg.strategy), opt);
  });
  if (cfg.format == "json")
    emit(dump_canonical(wrap_report(input, cfg, selection_to_json(sel))));
  else
    emit(selection_text(sel, true));
  return 0;
}

// shared select+augment prefix for commands that accept plain diagrams
AugmentedLink augmented_of(const LoadedInput& in, const PipelineConfig& cfg) {
  if (in.kind == InputKind::Augmented) return in.augmented;
  SelectOptions opt;
  opt.k_max = cfg.k_max;
  opt.objective = cfg.objective;
  const TwistSelection sel = run_stage("select", [&] {
    return detect_and_select(in.diagram, selection_strategy(cfg.strategy), opt);
  });
  return run_stage("augment", [&] { return augment(in.diagram, sel); });
}

int cmd_augment(const std::string& input, const PipelineConfig& cfg) {
  const std::string path = resolve_input(input);
  const LoadedInput in = run_stage("parse", [&] { return load_input(path); });
  if (in.kind != InputKind::Diagram)
    throw StagedError("parse", "MalformedSyntax", "input is already an augmented link");
  const AugmentedLink a = augmented_of(in, cfg);
  if (cfg.format == "json")
    emit(dump_canonical(augmented_to_json(a)));
  else
    emit(augmentation_text(a));
  return 0;
}

int cmd_reduce(const std::string& input, const PipelineConfig& cfg) {
  const std::string path = resolve_input(input);
  const LoadedInput in = run_stage("parse", [&] { return load_input(path); });
  const AugmentedLink a = augmented_of(in, cfg);
  const ReductionReport rep = run_stage("reduce", [&] { return reduce_fully(a); });
  if (cfg.format == "json")
    emit(dump_canonical(wrap_report(input, cfg, reduction_report_to_json(rep, cfg.explain))));
  else
    emit(reduction_text(rep, cfg.explain));
  return 0;
}

int cmd_twist(const std::string& input, const PipelineConfig& cfg) {
  const std::string path = resolve_input(input);
  const LoadedInput in = run_stage("parse", [&] { return load_input(path); });
  const AugmentedLink a = augmented_of(in, cfg);
  const LinkDiagram filled = run_stage("twist", [&] { return twist_fill(a, cfg.fills); });
  if (cfg.format == "json")
    emit(dump_canonical(diagram_to_json(filled)));
  else
    emit(serialize_diagram(filled));
  return 0;
}

int cmd_decompose(const std::string& input, const PipelineConfig& cfg) {
  const std::string path = resolve_input(input);
  const LoadedInput in = run_stage("parse", [&] { return load_input(path); });
  const AugmentedLink a = augmented_of(in, cfg);
  const ReductionReport red = run_stage("reduce", [&] { return reduce_fully(a); });
  FinalTwists fin;
  fin.overrides = cfg.final_twists;
  const DecompositionReport rep =
      run_stage("decompose", [&] { return jsj_report(red.output, fin); });
  if (cfg.format == "json")
    emit(dump_canonical(wrap_report(input, cfg, decomposition_to_json(rep))));
  else
    emit(decomposition_text(rep, cfg.explain) + classification_text(rep) + "\n");
  if (cfg.require_certificate && !prediction_certified(rep)) return 3;
  return 0;
}

int cmd_bounds(const std::string& input, const PipelineConfig& cfg) {
  const PipelineResult r = run_pipeline(resolve_input(input), cfg);
  if (cfg.format == "json")
    emit(dump_canonical(wrap_report(input, cfg, bounds_to_json(r.bounds))));
  else
    emit(bounds_text(r.bounds));
  if (cfg.require_certificate && !prediction_certified(r.decomposition)) return 3;
  return 0;
}

int cmd_pipeline(std::vector<std::string> inputs, const PipelineConfig& cfg) {
  std::sort(inputs.begin(), inputs.end());
  nlohmann::json batch = nlohmann::json::array();
  std::ostringstream text;
  bool any_error = false, any_inconclusive = false;
  for (const auto& raw_path : inputs) {
    try {
      PipelineResult r = run_pipeline(resolve_input(raw_path), cfg);
      r.input_path = raw_path;  // report the path as given
      if (!prediction_certified(r.decomposition)) any_inconclusive = true;
      batch.push_back(pipeline_report_json(r));
      text << pipeline_report_text(r);
    } catch (const StagedError& e) {
      any_error = true;
      report_error(raw_path, e);
      batch.push_back({{"version", version_string()},
                       {"input", raw_path},
                       {"config", config_to_json(cfg)},
                       {"error", {{"message", e.what()}, {"stage", e.stage}, {"type", e.type}}}});
      text << "input: " << raw_path << "\nerror [stage " << e.stage << "]: " << e.type << ": "
           << e.what() << "\n";
    }
    if (inputs.size() > 1 && cfg.format == "text") text << "\n";
  }
  if (cfg.format == "json")
    emit(dump_canonical(batch.size() == 1 ? batch.front() : batch));
  else
    emit(text.str());
  if (any_error) return 2;
  if (cfg.require_certificate && any_inconclusive) return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twist-region analysis of knot and link diagrams"};
  app.set_version_flag("--version", std::string(version_string()));
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::vector<std::string> inputs;
  std::vector<std::string> sets, fills;
  std::string thresholds;
  std::function<int()> runner;

  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", cfg.format, "output format: json or text")
        ->capture_default_str();
  };
  const auto add_select_flags = [&](CLI::App* cmd) {
    cmd->add_option("--strategy", cfg.strategy,
                    "greedy-largest | maximize-min-half-twists | exhaustive-enumerate")
        ->capture_default_str();
    cmd->add_option("--k-max", cfg.k_max, "widest twist region searched")->capture_default_str();
    cmd->add_option("--objective", cfg.objective,
                    "exhaustive objective: max-min-half-twists | fewest-regions")
        ->capture_default_str();
  };
  const auto add_explain = [&](CLI::App* cmd) {
    cmd->add_flag("--explain", cfg.explain, "include per-move / per-level detail");
  };
  const auto add_predict_flags = [&](CLI::App* cmd) {
    cmd->add_option("--set", sets, "final half-twist override, CIRCLE=C (repeatable)");
    cmd->add_flag("--require-certificate", cfg.require_certificate,
                  "exit 3 unless every component is certified");
  };

  {
    CLI::App* c = app.add_subcommand("validate", "check diagram files and report issues");
    c->add_option("inputs", inputs, "diagram or augmented-link files")->required();
    add_format(c);
    c->callback([&] { runner = [&] { return cmd_validate(inputs, cfg); }; });
  }
  {
    CLI::App* c = app.add_subcommand("twist-regions", "detect and select twist regions");
    c->add_option("input", inputs, "diagram file")->expected(1)->required();
    add_format(c);
    add_select_flags(c);
    c->callback([&] { runner = [&] { return cmd_twist_regions(inputs.front(), cfg); }; });
  }
  {
    CLI::App* c = app.add_subcommand("augment", "replace selected twist regions by crossing circles");
    c->add_option("input", inputs, "diagram file")->expected(1)->required();
    add_format(c);
    add_select_flags(c);
    c->callback([&] { runner = [&] { return cmd_augment(inputs.front(), cfg); }; });
  }
  {
    CLI::App* c = app.add_subcommand("reduce", "apply reduction moves until none remain");
    c->add_option("input", inputs, "augmented-link or diagram file")->expected(1)->required();
    add_format(c);
    add_select_flags(c);
    add_explain(c);
    c->callback([&] { runner = [&] { return cmd_reduce(inputs.front(), cfg); }; });
  }
  {
    CLI::App* c = app.add_subcommand("twist", "refill crossing circles with explicit twisting");
    c->add_option("input", inputs, "augmented-link or diagram file")->expected(1)->required();
    add_format(c);
    add_select_flags(c);
    c->add_option("--fill", fills, "full-twist coefficient, CIRCLE=N (repeatable)");
    c->callback([&] { runner = [&] { return cmd_twist(inputs.front(), cfg); }; });
  }
  {
    CLI::App* c = app.add_subcommand("decompose", "detect nested levels and classify pieces");
    c->add_option("input", inputs, "augmented-link or diagram file")->expected(1)->required();
    add_format(c);
    add_select_flags(c);
    add_explain(c);
    add_predict_flags(c);
    c->callback([&] { runner = [&] { return cmd_decompose(inputs.front(), cfg); }; });
  }
  {
    CLI::App* c = app.add_subcommand("bounds", "volume and Gromov-norm lower bounds");
    c->add_option("input", inputs, "augmented-link or diagram file")->expected(1)->required();
    add_format(c);
    add_select_flags(c);
    add_explain(c);
    add_predict_flags(c);
    c->add_option("--profile", cfg.profile, "constants profile: paper | precise")
        ->capture_default_str();
    c->add_option("--unsafe-thresholds", thresholds,
                  "override the 6,7 half-twist floors (experiments only)");
    c->callback([&] { runner = [&] { return cmd_bounds(inputs.front(), cfg); }; });
  }
  {
    CLI::App* c = app.add_subcommand("pipeline", "run every stage and emit the combined report");
    c->add_option("inputs", inputs, "diagram or augmented-link files")->required();
    add_format(c);
    add_select_flags(c);
    add_explain(c);
    add_predict_flags(c);
    c->add_option("--profile", cfg.profile, "constants profile: paper | precise")
        ->capture_default_str();
    c->add_option("--only", cfg.only,
                  "restrict the report to one stage: selection | augmentation | reduction | "
                  "decomposition | bounds");
    c->add_option("--unsafe-thresholds", thresholds,
                  "override the 6,7 half-twist floors (experiments only)");
    c->callback([&] { runner = [&] { return cmd_pipeline(inputs, cfg); }; });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    apply_assignments(cfg, sets, fills);
    apply_thresholds(cfg, thresholds);
    check_config(cfg);
    return runner();
  } catch (const StagedError& e) {
    return report_error(inputs.empty() ? "-" : inputs.front(), e);
  } catch (const Error& e) {
    return report_error(inputs.empty() ? "-" : inputs.front(), e);
  }
}
