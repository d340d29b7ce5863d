#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>

#include "support/paths.hpp"
#include "twistkit/braid.hpp"
#include "twistkit/diagram.hpp"

using namespace twistkit;

namespace {

std::multiset<size_t> face_sizes(const Analyzed& a) {
  std::multiset<size_t> out;
  for (const auto& f : a.faces) out.insert(f.size());
  return out;
}

long long euler(const Analyzed& a) {
  return static_cast<long long>(a.diagram.crossings.size()) - static_cast<long long>(a.ends.size()) +
         static_cast<long long>(a.faces.size());
}

}  // namespace

TEST_CASE("trefoil: parse, orientation, signs, faces") {
  const LinkDiagram d = parse_diagram(read_file(fixture_path("trefoil.pd")));
  CHECK(d.crossings.size() == 3);
  REQUIRE(d.components.size() == 1);
  CHECK(d.components[0].name == "k");
  CHECK(d.components[0].arcs == std::vector<int>{1, 2, 3, 4, 5, 6});

  const Analyzed a = analyze(d);
  CHECK(a.ends.size() == 6);
  CHECK(a.signs == std::vector<int>{1, 1, 1});
  CHECK(a.faces.size() == 5);
  // independently hand-traced face walk sizes for this diagram
  CHECK(face_sizes(a) == std::multiset<size_t>{2, 2, 2, 3, 3});
  CHECK(euler(a) == 2);
}

TEST_CASE("trefoil Gauss code matches the hand-traced string") {
  const LinkDiagram d = parse_diagram(read_file(fixture_path("trefoil.pd")));
  CHECK(gauss_code(d, "k") == "O1+U2+O3+U1+O2+U3+");
  CHECK_THROWS_AS(gauss_code(d, "nope"), UnknownComponent);
}

TEST_CASE("trefoil with implicit component derives the same diagram") {
  const LinkDiagram d = parse_diagram("X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,3)\n");
  REQUIRE(d.components.size() == 1);
  CHECK(d.components[0].name == "k1");
  CHECK(d.components[0].arcs == std::vector<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("figure-eight: faces, writhe zero") {
  const LinkDiagram d = parse_diagram(read_file(fixture_path("figure8.pd")));
  CHECK(d.crossings.size() == 4);
  CHECK(d.components.size() == 1);
  const Analyzed a = analyze(d);
  CHECK(a.faces.size() == 6);
  CHECK(euler(a) == 2);
  int writhe = 0;
  for (int s : a.signs) writhe += s;
  CHECK(writhe == 0);
}

TEST_CASE("crossing-free unknot") {
  const LinkDiagram d = parse_diagram(read_file(fixture_path("unknot0.pd")));
  CHECK(d.crossings.empty());
  REQUIRE(d.components.size() == 1);
  CHECK(d.components[0].name == "K0");
  const Analyzed a = analyze(d);
  CHECK(a.faces.size() == 2);
  CHECK(euler(a) == 2);
  CHECK(gauss_code(d, "K0") == "");
}

TEST_CASE("kink: doubled arcs at one crossing") {
  const LinkDiagram d = parse_diagram(read_file(fixture_path("kink.pd")));
  CHECK(d.crossings.size() == 1);
  CHECK(d.components.size() == 1);
  const Analyzed a = analyze(d);
  CHECK(a.faces.size() == 3);  // monogon + two outside regions
  CHECK(face_sizes(a) == std::multiset<size_t>{1, 1, 2});
  CHECK(euler(a) == 2);
  CHECK(a.signs == std::vector<int>{1});
}

TEST_CASE("hopf link from a positive 2-braid") {
  const LinkDiagram d = braid_closure(2, {1, 1});
  const Analyzed a = analyze(d);
  CHECK(d.crossings.size() == 2);
  CHECK(a.diagram.components.size() == 2);
  CHECK(a.signs == std::vector<int>{1, 1});
  CHECK(euler(a) == 2);
}

TEST_CASE("braid closures are valid planar diagrams") {
  for (const auto& [strands, word] : std::vector<std::pair<int, std::vector<int>>>{
           {2, {1, 1, 1}},
           {3, {1, -2}},
           {3, half_twist_power_word(3, 2)},
           {4, half_twist_power_word(4, 3)},
           {5, half_twist_power_word(5, 2)},
           {3, {1, 1, 1, -2, -2}},
       }) {
    const Analyzed a = analyze(braid_closure(strands, word));
    CHECK(euler(a) == 2);
    CHECK(validate(a.diagram).ok);
  }
}

TEST_CASE("braid trefoil and printed trefoil share canonical Gauss codes") {
  const Analyzed a = analyze(parse_diagram(read_file(fixture_path("trefoil.pd"))));
  const Analyzed b = analyze(braid_closure(2, {1, 1, 1}));
  CHECK(canonical_codes(a) == canonical_codes(b));
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_diagram(""), MalformedSyntax);
  CHECK_THROWS_AS(parse_diagram("garbage\n"), MalformedSyntax);
  CHECK_THROWS_AS(parse_diagram("X(1,2,3)\n"), MalformedSyntax);
  CHECK_THROWS_AS(parse_diagram("X(1,4,2,5) sign=*\n"), MalformedSyntax);

  try {
    parse_diagram("X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,4)\n");  // arc 4 used three times
    FAIL("expected ArcIncidenceError");
  } catch (const ArcIncidenceError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("arc 4") != std::string::npos);
    CHECK(msg.find("3 times") != std::string::npos);
    CHECK(msg.find("line 3") != std::string::npos);
  }
}

TEST_CASE("the doubled-diagonal two-arc diagram is rejected as nonplanar") {
  CHECK_THROWS_AS(parse_diagram("X(1,2,1,2)\n"), NonPlanarError);
  // built programmatically, validate() reports instead of throwing
  LinkDiagram d;
  d.crossings.push_back({{1, 2, 1, 2}, 0});
  const ValidationReport r = validate(d);
  CHECK_FALSE(r.ok);
  CHECK(r.has("NonPlanar"));
}

TEST_CASE("split diagrams are rejected") {
  // two disjoint kinks
  CHECK_THROWS_AS(parse_diagram("X(1,2,2,1)\nX(3,4,4,3)\n"), SplitDiagramError);
  // a crossing-free loop next to a kink
  CHECK_THROWS_AS(parse_diagram("X(1,2,2,1)\ncircle C\n"), SplitDiagramError);
  // two crossing-free loops
  CHECK_THROWS_AS(parse_diagram("circle A\ncircle B\n"), SplitDiagramError);
}

TEST_CASE("component declarations are checked") {
  const std::string x = "X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,3)\n";
  CHECK_THROWS_AS(parse_diagram(x + "component Knot k: 1,2,3,4,5\n"), ComponentCoverageError);
  CHECK_THROWS_AS(parse_diagram(x + "component Knot k: 1,3,2,4,5,6\n"), ComponentCoverageError);
  CHECK_THROWS_AS(parse_diagram(x + "component Knot a: 1,2,3,4,5,6\ncomponent Knot b: 1,2,3,4,5,6\n"),
                  ComponentCoverageError);
  CHECK_THROWS_AS(parse_diagram(x + "component Knot k: 1,2,3,4,5,6\ncomponent Knot k2: 7\n"),
                  ComponentCoverageError);
  // a rotation of the cycle is fine
  const LinkDiagram d = parse_diagram(x + "component Knot k: 3,4,5,6,1,2\n");
  CHECK(d.components[0].arcs == std::vector<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("declared signs are checked by validate, not parse") {
  const LinkDiagram d = parse_diagram("X(1,4,2,5) sign=-\nX(3,6,4,1) sign=+\nX(5,2,6,3)\n");
  const ValidationReport r = validate(d);
  CHECK_FALSE(r.ok);
  CHECK(r.has("SignMismatch"));
  // serialization normalizes to the computed signs
  const std::string canon = serialize_diagram(d);
  CHECK(canon.find("sign=-") == std::string::npos);
}

TEST_CASE("serialization round-trips byte-exactly") {
  for (const char* name : {"trefoil.pd", "figure8.pd", "unknot0.pd", "kink.pd", "hopf.pd",
                           "borromean.pd", "fulltwist5.pd", "twistknot5.pd"}) {
    const std::string once = serialize_diagram(parse_diagram(read_file(fixture_path(name))));
    const std::string twice = serialize_diagram(parse_diagram(once));
    CHECK(once == twice);
  }
}

TEST_CASE("faces do not depend on crossing order") {
  const LinkDiagram d = parse_diagram(read_file(fixture_path("figure8.pd")));
  LinkDiagram shuffled = d;
  std::reverse(shuffled.crossings.begin(), shuffled.crossings.end());
  shuffled.components.clear();
  CHECK(face_sizes(analyze(d)) == face_sizes(analyze(shuffled)));
}

TEST_CASE("random braid closures satisfy the Euler identity") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 200; ++trial) {
    const int strands = 2 + static_cast<int>(rng() % 3);
    std::vector<int> word;
    const int len = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < len; ++i) {
      const int idx = 1 + static_cast<int>(rng() % (strands - 1));
      word.push_back(rng() % 2 ? idx : -idx);
    }
    // ensure every adjacent pair crosses at least once so the closure connects
    for (int i = 1; i < strands; ++i) word.push_back(i);
    const Analyzed a = analyze(braid_closure(strands, word));
    CHECK(euler(a) == 2);
    CHECK(validate(a.diagram).ok);
  }
}
