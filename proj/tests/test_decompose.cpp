#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "support/paths.hpp"
#include "twistkit/augment.hpp"
#include "twistkit/decompose.hpp"
#include "twistkit/diagram.hpp"
#include "twistkit/reduce.hpp"
#include "twistkit/twist.hpp"

using namespace twistkit;

namespace {

LinkDiagram load(const std::string& name) { return parse_diagram(read_file(fixture_path(name))); }

AugmentedLink augment_greedy(const LinkDiagram& d) {
  return augment(d, detect_and_select(d, SelectionStrategy::GreedyLargest));
}

AugmentedLink build(const Wiring& w) { return build_augmented(w.sites, w.wires); }

// Nested replica: an outer interleaved pair C2/C3 on a closed strand, one
// wire of which detours through C1 into an inner interleaved pair C4/C5.
// C1's disk carries exactly the two ends of the inner cluster's thread, so
// the region between C1 and the cluster is a product shell.
Wiring toroidal_sites() {
  Wiring w;
  w.sites = {{"C1", 2, 0, 1, 3, {}},
             {"C2", 2, 0, 1, 3, {}},
             {"C3", 2, 0, 1, 3, {}},
             {"C4", 2, 0, 1, 3, {}},
             {"C5", 2, 0, 1, 3, {}}};
  w.wires = {{{"C2", 'L', 1}, {"C3", 'R', 2}},
             {{"C2", 'R', 2}, {"C3", 'L', 1}},
             {{"C3", 'L', 2}, {"C2", 'L', 2}},
             {{"C3", 'R', 1}, {"C1", 'L', 1}},  // detour entry
             {{"C1", 'L', 2}, {"C2", 'R', 1}},  // detour exit
             {{"C1", 'R', 1}, {"C4", 'L', 2}},
             {{"C4", 'R', 2}, {"C5", 'L', 1}},
             {{"C5", 'R', 1}, {"C4", 'R', 1}},
             {{"C4", 'L', 1}, {"C5", 'R', 2}},
             {{"C5", 'L', 2}, {"C1", 'R', 2}}};
  return w;
}

// The same shape one story deeper: the inner cluster's crosswire detours
// through C6 into a third interleaved pair C7/C8.
Wiring chain5_sites() {
  Wiring w = toroidal_sites();
  w.sites.push_back({"C6", 2, 0, 1, 3, {}});
  w.sites.push_back({"C7", 2, 0, 1, 3, {}});
  w.sites.push_back({"C8", 2, 0, 1, 3, {}});
  std::erase_if(w.wires, [](const Wire& wi) {
    return wi.from == PortRef{"C5", 'R', 1} && wi.to == PortRef{"C4", 'R', 1};
  });
  const std::vector<Wire> deeper = {{{"C5", 'R', 1}, {"C6", 'L', 1}},
                                    {{"C6", 'L', 2}, {"C4", 'R', 1}},
                                    {{"C6", 'R', 1}, {"C7", 'L', 2}},
                                    {{"C7", 'R', 2}, {"C8", 'L', 1}},
                                    {{"C8", 'R', 1}, {"C7", 'R', 1}},
                                    {{"C7", 'L', 1}, {"C8", 'R', 2}},
                                    {{"C8", 'L', 2}, {"C6", 'R', 2}}};
  w.wires.insert(w.wires.end(), deeper.begin(), deeper.end());
  return w;
}

// A torus-knot pattern whose strand detours through a shell circle into an
// inner interleaved pair: the outermost piece stays a fibered solid torus.
Wiring satellite_torus_sites() {
  Wiring w;
  w.sites = {{"C1", 2, 1, 1, 1, {}},
             {"C4", 2, 0, 1, 3, {}},
             {"C5", 2, 0, 1, 3, {}},
             {"Cm", 2, 0, 1, 3, {}}};
  w.wires = {{{"C1", 'L', 2}, {"C1", 'R', 2}},   // untouched pass-around
             {{"C1", 'L', 1}, {"Cm", 'L', 1}},   // detour entry
             {{"Cm", 'L', 2}, {"C1", 'R', 1}},   // detour exit
             {{"Cm", 'R', 1}, {"C4", 'L', 2}},
             {{"C4", 'R', 2}, {"C5", 'L', 1}},
             {{"C5", 'R', 1}, {"C4", 'R', 1}},
             {{"C4", 'L', 1}, {"C5", 'R', 2}},
             {{"C5", 'L', 2}, {"Cm", 'R', 2}}};
  return w;
}

// Lone circle over two parallel strands with four stored half twists.
Wiring even_torus_sites() {
  Wiring w;
  w.sites = {{"Ca", 2, 0, 1, 2, {}}};
  w.wires = {{{"Ca", 'R', 1}, {"Ca", 'L', 1}}, {{"Ca", 'R', 2}, {"Ca", 'L', 2}}};
  return w;
}

std::vector<std::string> ids(const Level& lvl) { return lvl.circle_ids; }

void check_partition(const AugmentedLink& a, const std::vector<Level>& levels) {
  std::multiset<std::string> seen;
  for (size_t d = 0; d < levels.size(); ++d) {
    CHECK(levels[d].depth == static_cast<int>(d));
    CHECK(levels[d].t_i == static_cast<int>(levels[d].circle_ids.size()));
    CHECK(levels[d].t_i >= 1);
    seen.insert(levels[d].circle_ids.begin(), levels[d].circle_ids.end());
  }
  std::multiset<std::string> all;
  for (const auto& c : a.circles) all.insert(c.id);
  CHECK(seen == all);
}

}  // namespace

TEST_CASE("the nested replica splits into outer pair, product shell, and inner pair") {
  const AugmentedLink a = build(toroidal_sites());
  REQUIRE(find_reductions(a).empty());  // detection expects a fully reduced input

  const std::vector<Level> levels = detect_levels(a);
  REQUIRE(levels.size() == 3);
  CHECK(ids(levels[0]) == std::vector<std::string>{"C2", "C3"});
  CHECK(ids(levels[1]) == std::vector<std::string>{"C1"});
  CHECK(ids(levels[2]) == std::vector<std::string>{"C4", "C5"});
  CHECK(levels[0].t_i == 2);
  CHECK(levels[1].t_i == 1);
  CHECK(levels[2].t_i == 2);
  check_partition(a, levels);

  // the shell's strand runs through the contracted inner core
  const auto& shell_arcs = levels[1].core_strands;
  CHECK(std::find(shell_arcs.begin(), shell_arcs.end(), "C1.R1>C1.R2 [core]") != shell_arcs.end());
  // the outer level sees the whole detour as one spliced core arc
  const auto& outer_arcs = levels[0].core_strands;
  CHECK(std::find(outer_arcs.begin(), outer_arcs.end(), "C3.R1>C2.R1 [core]") != outer_arcs.end());
  CHECK(outer_arcs.size() == 4);
}

TEST_CASE("classification tags the shell collapsible and certifies both clusters") {
  const AugmentedLink a = build(toroidal_sites());
  const std::vector<Level> levels = detect_levels(a);
  REQUIRE(levels.size() == 3);

  const ComponentClassification outer = classify_component(levels[0], a);
  CHECK(outer.kind == LevelKind::HyperbolicCertified);
  CHECK(outer.min_c == 6);

  const ComponentClassification shell = classify_component(levels[1], a);
  CHECK(shell.kind == LevelKind::T2xICollapsible);

  const ComponentClassification inner = classify_component(levels[2], a);
  CHECK(inner.kind == LevelKind::HyperbolicCertified);
  CHECK(inner.min_c == 6);
}

TEST_CASE("the report collects the sublink, counts, and per-component predictions") {
  const AugmentedLink a = build(toroidal_sites());
  const DecompositionReport rep = jsj_report(a);

  CHECK(rep.detection == "heuristic");
  CHECK(rep.t == 4);
  CHECK(rep.t0 == 1);
  CHECK(rep.sublink_lhat == std::vector<std::string>{"C2", "C3", "C4", "C5"});
  REQUIRE(rep.jsj.size() == 2);
  CHECK(rep.jsj[0].depth == 0);
  CHECK(rep.jsj[0].type == "hyperbolic");
  CHECK(rep.jsj[0].certificate == "SixTheorem");
  CHECK(rep.jsj[1].depth == 2);
  CHECK(rep.jsj[1].type == "hyperbolic");
  CHECK(rep.jsj[1].certificate == "SixTheorem");
  CHECK(rep.overall == "jsj predicted: 2 components, 1 collapsible level");

  int t_sum = 0;
  for (size_t d = 0; d < rep.levels.size(); ++d)
    if (rep.classifications[d].kind != LevelKind::T2xICollapsible) t_sum += rep.levels[d].t_i;
  CHECK(rep.t == t_sum);
}

TEST_CASE("lowering one outer circle below the threshold names it in the report") {
  const AugmentedLink a = build(toroidal_sites());
  FinalTwists params;
  params.overrides["C2"] = 5;
  const DecompositionReport rep = jsj_report(a, params);

  REQUIRE(rep.jsj.size() == 2);
  CHECK(rep.jsj[0].type == "inconclusive: circle C2 has c=5 < 6");
  CHECK(rep.jsj[0].certificate == "None");
  CHECK(rep.jsj[1].type == "hyperbolic");  // the inner cluster is unaffected
  CHECK(rep.overall == "inconclusive: circle C2 below the 6 half-twist threshold");

  const auto& cls = rep.classifications;
  REQUIRE(cls.size() == 3);
  CHECK(cls[0].kind == LevelKind::Inconclusive);
  CHECK(cls[0].min_c == 5);
  CHECK(cls[2].kind == LevelKind::HyperbolicCertified);
}

TEST_CASE("a five-story tower resolves one level at a time") {
  const AugmentedLink a = build(chain5_sites());
  REQUIRE(find_reductions(a).empty());

  const std::vector<Level> levels = detect_levels(a);
  REQUIRE(levels.size() == 5);
  CHECK(ids(levels[0]) == std::vector<std::string>{"C2", "C3"});
  CHECK(ids(levels[1]) == std::vector<std::string>{"C1"});
  CHECK(ids(levels[2]) == std::vector<std::string>{"C4", "C5"});
  CHECK(ids(levels[3]) == std::vector<std::string>{"C6"});
  CHECK(ids(levels[4]) == std::vector<std::string>{"C7", "C8"});
  check_partition(a, levels);

  const DecompositionReport rep = jsj_report(a);
  CHECK(rep.t == 6);
  CHECK(rep.t0 == 2);
  REQUIRE(rep.jsj.size() == 3);
  CHECK(rep.jsj[0].depth == 0);
  CHECK(rep.jsj[1].depth == 2);
  CHECK(rep.jsj[2].depth == 4);
  for (const auto& comp : rep.jsj) CHECK(comp.type == "hyperbolic");
  CHECK(rep.overall == "jsj predicted: 3 components, 2 collapsible levels");
}

TEST_CASE("a deep cluster under a torus-knot pattern keeps the outer level fibered") {
  const AugmentedLink a = build(satellite_torus_sites());
  REQUIRE(find_reductions(a).empty());

  const std::vector<Level> levels = detect_levels(a);
  REQUIRE(levels.size() == 3);
  CHECK(ids(levels[0]) == std::vector<std::string>{"C1"});
  CHECK(ids(levels[1]) == std::vector<std::string>{"Cm"});
  CHECK(ids(levels[2]) == std::vector<std::string>{"C4", "C5"});

  CHECK(classify_component(levels[0], a).kind == LevelKind::SeifertFibered);
  CHECK(classify_component(levels[1], a).kind == LevelKind::T2xICollapsible);
  CHECK(classify_component(levels[2], a).kind == LevelKind::HyperbolicCertified);

  const DecompositionReport rep = jsj_report(a);
  CHECK(rep.t == 3);
  CHECK(rep.t0 == 1);
  REQUIRE(rep.jsj.size() == 2);
  CHECK(rep.jsj[0].type == "(2,3) torus knot");
  CHECK(rep.jsj[0].certificate == "None");
  CHECK(rep.jsj[1].type == "hyperbolic");
}

TEST_CASE("plain augmentations stay single level") {
  for (const std::string name :
       {"trefoil.pd", "figure8.pd", "borromean.pd", "delta4.pd", "twist5.pd"}) {
    INFO(name);
    const AugmentedLink a = augment_greedy(load(name));
    const std::vector<Level> levels = detect_levels(a);
    REQUIRE(levels.size() == 1);
    CHECK(levels[0].depth == 0);
    check_partition(a, levels);
    const DecompositionReport rep = jsj_report(a);
    CHECK(rep.t0 == 0);
    CHECK(rep.t == static_cast<int>(a.circles.size()));
  }
}

TEST_CASE("the trefoil augmentation reads off its torus knot") {
  const AugmentedLink a = augment_greedy(load("trefoil.pd"));
  const std::vector<Level> levels = detect_levels(a);
  REQUIRE(levels.size() == 1);
  CHECK(classify_component(levels[0], a).kind == LevelKind::SeifertFibered);

  const DecompositionReport rep = jsj_report(a);
  REQUIRE(rep.jsj.size() == 1);
  CHECK(rep.jsj[0].type == "(2,3) torus knot");  // stored filling keeps c = 3
  CHECK(rep.jsj[0].certificate == "None");
  CHECK(rep.sublink_lhat == std::vector<std::string>{"C1"});
  CHECK(rep.overall == "jsj predicted: 1 component, 0 collapsible levels");
}

TEST_CASE("five stored half twists make the odd torus knot, four make the link") {
  const DecompositionReport five = jsj_report(augment_greedy(load("twist5.pd")));
  REQUIRE(five.jsj.size() == 1);
  CHECK(five.jsj[0].type == "(2,5) torus knot");

  const DecompositionReport four = jsj_report(build(even_torus_sites()));
  REQUIRE(four.jsj.size() == 1);
  CHECK(four.jsj[0].type == "(2,4) torus link");
}

TEST_CASE("a two-circle level is never fibered and reports its weakest circle") {
  const AugmentedLink a = augment_greedy(load("figure8.pd"));
  const std::vector<Level> levels = detect_levels(a);
  REQUIRE(levels.size() == 1);
  REQUIRE(levels[0].t_i == 2);

  const ComponentClassification cls = classify_component(levels[0], a);
  CHECK(cls.kind == LevelKind::Inconclusive);
  CHECK(cls.min_c == 2);  // both regions store two half twists

  const DecompositionReport rep = jsj_report(a);
  REQUIRE(rep.jsj.size() == 1);
  CHECK(rep.jsj[0].type == "inconclusive: circle C1 has c=2 < 6");
}

TEST_CASE("certificates upgrade once every circle clears two pi") {
  const AugmentedLink a = augment_greedy(load("figure8.pd"));

  FinalTwists six;
  six.overrides["C1"] = 6;
  six.overrides["C2"] = 7;
  const DecompositionReport at_six = jsj_report(a, six);
  REQUIRE(at_six.jsj.size() == 1);
  CHECK(at_six.jsj[0].type == "hyperbolic");
  CHECK(at_six.jsj[0].certificate == "SixTheorem");

  FinalTwists seven;
  seven.overrides["C1"] = 7;
  seven.overrides["C2"] = 7;
  const DecompositionReport at_seven = jsj_report(a, seven);
  CHECK(at_seven.jsj[0].certificate == "SixTheoremAnd2Pi");
}

TEST_CASE("raising a count never revokes certification") {
  const AugmentedLink a = build(toroidal_sites());
  for (int c = 6; c <= 40; c += 2) {
    FinalTwists params;
    params.overrides["C2"] = c;
    const DecompositionReport rep = jsj_report(a, params);
    INFO("override c=" << c);
    CHECK(rep.classifications[0].kind == LevelKind::HyperbolicCertified);
    CHECK(rep.overall.rfind("jsj predicted", 0) == 0);
  }
}

TEST_CASE("reports are independent of site and wire enumeration order") {
  Wiring forward = toroidal_sites();
  Wiring backward = forward;
  std::reverse(backward.sites.begin(), backward.sites.end());
  std::reverse(backward.wires.begin(), backward.wires.end());

  const DecompositionReport fa = jsj_report(build(forward));
  const DecompositionReport fb = jsj_report(build(backward));
  REQUIRE(fa.levels.size() == fb.levels.size());
  for (size_t d = 0; d < fa.levels.size(); ++d) {
    CHECK(fa.levels[d].circle_ids == fb.levels[d].circle_ids);
    CHECK(fa.levels[d].core_strands == fb.levels[d].core_strands);
    CHECK(fa.classifications[d].kind == fb.classifications[d].kind);
  }
  CHECK(fa.sublink_lhat == fb.sublink_lhat);
  CHECK(fa.overall == fb.overall);
}

TEST_CASE("fibered pieces never appear below the surface") {
  const std::vector<Wiring> fixtures = {toroidal_sites(), chain5_sites(), satellite_torus_sites()};
  for (const auto& w : fixtures) {
    const AugmentedLink a = build(w);
    const std::vector<Level> levels = detect_levels(a);
    for (const auto& lvl : levels) {
      const ComponentClassification cls = classify_component(lvl, a);
      if (cls.kind == LevelKind::SeifertFibered) CHECK(lvl.depth == 0);
      if (cls.kind == LevelKind::T2xICollapsible) CHECK(lvl.t_i == 1);
    }
  }
}
