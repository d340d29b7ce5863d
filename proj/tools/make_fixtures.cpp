// Regenerates the bundled fixture corpus. Run from the repo root (or pass the
// fixtures directory as argv[1]); output is deterministic.

#include <fstream>
#include <iostream>
#include <string>

#include "twistkit/braid.hpp"
#include "twistkit/diagram.hpp"
#include "twistkit/json_io.hpp"

using namespace twistkit;

namespace {

void write(const std::string& dir, const std::string& name, const std::string& body) {
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(1);
  }
  out << body;
  std::cout << "wrote " << path << "\n";
}

std::string from_braid(int strands, const std::vector<int>& word) {
  return serialize_diagram(braid_closure(strands, word));
}

std::string from_wiring(const std::vector<SiteSpec>& sites, const std::vector<Wire>& wires) {
  return dump_canonical(augmented_to_json(build_augmented(sites, wires)));
}

// A circle with four strands, two of which u-turn straight back, plus a
// two-strand bystander: one extract-strands move away from reduced.
std::string nugatory_json() {
  return from_wiring({{"C", 4, 0, 1, 1, {}}, {"D", 2, 0, 1, 1, {}}},
                     {{{"C", 'R', 2}, {"C", 'R', 3}},
                      {{"C", 'L', 3}, {"D", 'L', 2}},
                      {{"D", 'R', 2}, {"C", 'L', 2}},
                      {{"C", 'R', 1}, {"D", 'L', 1}},
                      {{"D", 'R', 1}, {"C", 'L', 1}},
                      {{"C", 'R', 4}, {"C", 'L', 4}}});
}

// Two circles over the same two-strand bundle, one concatenation move away
// from reduced; their twisting adds up (c = 3 + 1).
std::string redundant_json() {
  return from_wiring({{"Ca", 2, 1, 1, 1, {}}, {"Cb", 2, 1, 1, 0, {}}},
                     {{{"Ca", 'R', 1}, {"Cb", 'L', 1}},
                      {{"Ca", 'R', 2}, {"Cb", 'L', 2}},
                      {{"Cb", 'R', 1}, {"Ca", 'L', 1}},
                      {{"Cb", 'R', 2}, {"Ca", 'L', 2}}});
}

// Irreducible nested link: an outer two-circle cluster whose strand detours
// through a shell circle C1 into an inner two-circle cluster.  Three levels;
// C1 is the lone collapsible one.  Every circle keeps 6 half-twists.
std::string toroidal_json() {
  std::vector<SiteSpec> sites;
  for (const char* id : {"C1", "C2", "C3", "C4", "C5"}) sites.push_back({id, 2, 0, 1, 3, {}});
  return from_wiring(sites, {{{"C2", 'L', 1}, {"C3", 'R', 2}},
                             {{"C2", 'R', 2}, {"C3", 'L', 1}},
                             {{"C3", 'L', 2}, {"C2", 'L', 2}},
                             {{"C3", 'R', 1}, {"C1", 'L', 1}},
                             {{"C1", 'L', 2}, {"C2", 'R', 1}},
                             {{"C1", 'R', 1}, {"C4", 'L', 2}},
                             {{"C4", 'R', 2}, {"C5", 'L', 1}},
                             {{"C5", 'R', 1}, {"C4", 'R', 1}},
                             {{"C4", 'L', 1}, {"C5", 'R', 2}},
                             {{"C5", 'L', 2}, {"C1", 'R', 2}}});
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "fixtures";

  // the standard 3-crossing trefoil PD, as commonly printed
  write(dir, "trefoil.pd",
        "# (2,3) torus knot, one positive 3-half-twist region\n"
        "X(1,4,2,5) sign=+\n"
        "X(3,6,4,1) sign=+\n"
        "X(5,2,6,3) sign=+\n"
        "component Knot k: 1,2,3,4,5,6\n");

  // the standard 4-crossing figure-eight diagram
  write(dir, "figure8.pd",
        "# figure-eight knot: two 2-half-twist regions of opposite handedness\n"
        "X(4,2,5,1)\nX(8,6,1,5)\nX(6,3,7,4)\nX(2,7,3,8)\n");

  write(dir, "unknot0.pd", "# crossing-free round unknot\ncircle K0\n");

  write(dir, "kink.pd",
        "# one-crossing unknot: a single positive kink\n"
        "X(1,2,2,1) sign=+\n");

  write(dir, "hopf.pd", "# Hopf link as the closure of two positive half-twists\n" + from_braid(2, {1, 1}));
  write(dir, "twist5.pd", "# (2,5) torus knot\n" + from_braid(2, {1, 1, 1, 1, 1}));
  write(dir, "twist7.pd", "# (2,7) torus knot: strongly twisted single region\n" + from_braid(2, {1, 1, 1, 1, 1, 1, 1}));
  write(dir, "link24.pd", "# (2,4) torus link, two components\n" + from_braid(2, {1, 1, 1, 1}));
  write(dir, "twistknot5.pd", "# twist knot with regions of 3 and -2 half-twists\n" + from_braid(3, {1, 1, 1, -2, -2}));
  write(dir, "sigma12m.pd", "# mixed-sign 3-braid closure; no 3-strand half-twist pattern\n" + from_braid(3, {1, -2}));
  write(dir, "borromean.pd", "# Borromean rings as the closure of (s1 s2^-1)^3\n" + from_braid(3, {1, -2, 1, -2, 1, -2}));
  write(dir, "delta3.pd", "# closure of the full twist on 3 strands (half-twist squared)\n" + from_braid(3, half_twist_power_word(3, 2)));
  write(dir, "delta3neg.pd", "# closure of the negative full twist on 3 strands\n" + from_braid(3, half_twist_power_word(3, 2, -1)));
  write(dir, "delta4.pd", "# closure of the half-twist on 4 strands\n" + from_braid(4, half_twist_power_word(4, 1)));
  write(dir, "fulltwist5.pd", "# closure of the full twist on 5 strands: 20 crossings\n" + from_braid(5, half_twist_power_word(5, 2)));

  // deliberately broken: arc 2 is used three times
  write(dir, "bad.pd",
        "# invalid on purpose: arc 2 appears three times\n"
        "X(1,2,3,4) sign=+\n"
        "X(2,3,4,2)\n");

  write(dir, "nugatory.json", nugatory_json());
  write(dir, "redundant.json", redundant_json());
  write(dir, "toroidal.json", toroidal_json());

  return 0;
}
