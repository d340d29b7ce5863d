#pragma once

// Planar link diagrams as PD codes with a rotation system: parsing, strand
// orientation, faces, component cycles, validation, Gauss codes, and a
// canonical text serialization.
//
// Conventions (fixed once, everything downstream depends on them):
//  - crossing slots 0..3 run counterclockwise starting at the incoming
//    under-strand; the strand through slots s and s+2 is one strand;
//  - the under-strand leaves at slot 2; the over-strand uses slots 1 and 3;
//  - a crossing has sign +1 exactly when the over-strand enters at slot 1.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "twistkit/errors.hpp"

namespace twistkit {

enum class Role { Knot, Circle };

inline std::string to_string(Role r) { return r == Role::Knot ? "Knot" : "Circle"; }

struct Crossing {
  std::array<int, 4> arcs{};  // arc id per slot
  int declared_sign = 0;      // 0 when the source did not state one
};

struct Component {
  std::string name;
  Role role = Role::Knot;
  std::vector<int> arcs;  // cyclic, in orientation order; empty = crossing-free loop
};

struct LinkDiagram {
  std::vector<Crossing> crossings;  // crossing ids are 1-based positions
  std::vector<Component> components;
};

// One end of an arc: which crossing and slot it is attached to.
struct ArcEnd {
  int crossing = 0;  // 1-based
  int slot = -1;
  friend bool operator==(const ArcEnd&, const ArcEnd&) = default;
  friend auto operator<=>(const ArcEnd&, const ArcEnd&) = default;
};

// One visit of a strand to a crossing.
struct Pass {
  int crossing = 0;  // 1-based
  int slot_in = -1;  // slot where the strand enters
  bool over = false;
};

struct ValidationIssue {
  std::string code;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
  bool has(const std::string& code) const {
    for (const auto& i : issues)
      if (i.code == code) return true;
    return false;
  }
};

// Everything derivable from a structurally sound diagram.
struct Analyzed {
  LinkDiagram diagram;                         // components materialized + normalized
  std::map<int, std::array<ArcEnd, 2>> ends;   // arc -> its two ends, sorted
  std::map<int, ArcEnd> in_end, out_end;       // arc -> end it flows into / out of
  std::vector<int> signs;                      // computed, per crossing
  std::vector<std::vector<int>> faces;         // arcs along each face walk
};

namespace detail {

inline int arc_at(const LinkDiagram& d, const ArcEnd& e) { return d.crossings[e.crossing - 1].arcs[e.slot]; }

inline std::map<int, std::vector<ArcEnd>> collect_ends(const LinkDiagram& d) {
  std::map<int, std::vector<ArcEnd>> m;
  for (int ci = 0; ci < static_cast<int>(d.crossings.size()); ++ci)
    for (int s = 0; s < 4; ++s) m[d.crossings[ci].arcs[s]].push_back({ci + 1, s});
  return m;
}

inline void check_incidence(const std::map<int, std::vector<ArcEnd>>& ends,
                            const std::map<int, int>* arc_lines) {
  auto complain = [&](int arc, size_t uses) {
    std::ostringstream os;
    os << "arc " << arc << " used " << uses << " times";
    if (arc_lines && arc_lines->count(arc)) os << " (line " << arc_lines->at(arc) << ")";
    throw ArcIncidenceError(os.str());
  };
  for (const auto& [arc, es] : ends) {
    if (arc <= 0) throw MalformedSyntax("arc ids must be positive, got " + std::to_string(arc));
    if (es.size() > 2) complain(arc, es.size());  // over-use first: it explains under-use elsewhere
  }
  for (const auto& [arc, es] : ends)
    if (es.size() != 2) complain(arc, es.size());
}

// Orient every arc: under-strand ends are forced by the slot convention, the
// over-strand direction propagates along strands; strands that never pass
// under anything get a deterministic default direction.
inline void orient(const LinkDiagram& d, const std::map<int, std::vector<ArcEnd>>& ends,
                   std::map<int, ArcEnd>& in_end, std::map<int, ArcEnd>& out_end) {
  // dir per arc end: 0 unknown, 1 flows in (terminates here), 2 flows out
  std::map<int, std::array<int, 2>> dir;
  for (const auto& [arc, es] : ends) dir[arc] = {0, 0};
  auto other = [](int k) { return 1 - k; };

  std::vector<std::pair<int, int>> queue;  // (arc, end index) just assigned
  auto assign = [&](int arc, int k, int v) {
    auto& slot = dir[arc][k];
    if (slot == v) return;
    if (slot != 0)
      throw ArcIncidenceError("inconsistent strand orientation at arc " + std::to_string(arc));
    slot = v;
    queue.push_back({arc, k});
  };
  auto end_index = [&](int arc, const ArcEnd& e) {
    const auto& es = ends.at(arc);
    if (es[0] == e) return 0;
    return 1;
  };

  for (int ci = 0; ci < static_cast<int>(d.crossings.size()); ++ci) {
    const auto& x = d.crossings[ci].arcs;
    ArcEnd e0{ci + 1, 0}, e2{ci + 1, 2};
    assign(x[0], end_index(x[0], e0), 1);
    assign(x[2], end_index(x[2], e2), 2);
  }

  auto propagate = [&]() {
    while (!queue.empty()) {
      auto [arc, k] = queue.back();
      queue.pop_back();
      const int v = dir[arc][k];
      assign(arc, other(k), v == 1 ? 2 : 1);  // the other end is the opposite
      // an over end fixes the partner over end of the same crossing
      const ArcEnd e = ends.at(arc)[k];
      if (e.slot == 1 || e.slot == 3) {
        const ArcEnd partner{e.crossing, e.slot == 1 ? 3 : 1};
        const int parc = arc_at(d, partner);
        assign(parc, end_index(parc, partner), v == 1 ? 2 : 1);
      }
    }
  };

  propagate();
  // strands with no under-pass anywhere: orient smallest arc out of its
  // lexicographically smaller end
  for (auto& [arc, dd] : dir) {
    if (dd[0] == 0) {
      assign(arc, 0, 2);
      propagate();
    }
  }

  for (const auto& [arc, dd] : dir) {
    const auto& es = ends.at(arc);
    in_end[arc] = dd[0] == 1 ? es[0] : es[1];
    out_end[arc] = dd[0] == 2 ? es[0] : es[1];
  }
}

}  // namespace detail

// Strand continuation: entering a crossing at `slot`, the strand leaves at the
// diagonal slot.
inline int continuation_slot(int slot) { return (slot + 2) % 4; }

inline Analyzed analyze(const LinkDiagram& input, const std::map<int, int>* arc_lines = nullptr) {
  Analyzed a;
  a.diagram = input;
  LinkDiagram& d = a.diagram;

  if (d.crossings.empty() && d.components.empty()) throw MalformedSyntax("empty diagram");

  auto all_ends = detail::collect_ends(d);
  detail::check_incidence(all_ends, arc_lines);
  for (auto& [arc, es] : all_ends) {
    std::sort(es.begin(), es.end());
    a.ends[arc] = {es[0], es[1]};
  }
  detail::orient(d, all_ends, a.in_end, a.out_end);

  // strand cycles: follow in_end -> diagonal continuation
  std::map<int, std::vector<int>> cycles;  // min arc -> cycle
  std::set<int> seen;
  for (const auto& [arc, es] : all_ends) {
    if (seen.count(arc)) continue;
    std::vector<int> cyc;
    int cur = arc;
    do {
      cyc.push_back(cur);
      seen.insert(cur);
      const ArcEnd e = a.in_end.at(cur);
      cur = d.crossings[e.crossing - 1].arcs[continuation_slot(e.slot)];
    } while (cur != arc);
    const int lo = *std::min_element(cyc.begin(), cyc.end());
    std::rotate(cyc.begin(), std::find(cyc.begin(), cyc.end(), lo), cyc.end());
    cycles[lo] = cyc;
  }

  // components: adopt declared ones (checking them); crossing-free loop
  // declarations never force the crossing arcs to be declared too
  std::set<std::string> names;
  bool any_arc_comp = false;
  for (const auto& comp : d.components) {
    if (!names.insert(comp.name).second) throw MalformedSyntax("duplicate component name " + comp.name);
    if (!comp.arcs.empty()) any_arc_comp = true;
  }
  if (!any_arc_comp) {
    int k = 0;
    for (auto& [lo, cyc] : cycles) {
      std::string name;
      do name = "k" + std::to_string(++k);
      while (names.count(name));
      d.components.push_back({name, Role::Knot, cyc});
    }
  } else {
    std::set<int> covered;
    for (auto& comp : d.components) {
      if (comp.arcs.empty()) continue;  // crossing-free loop
      for (int arc : comp.arcs)
        if (!covered.insert(arc).second)
          throw ComponentCoverageError("arc " + std::to_string(arc) + " listed twice across components");
      const int lo = *std::min_element(comp.arcs.begin(), comp.arcs.end());
      auto it = cycles.find(lo);
      if (it == cycles.end() || it->second.size() != comp.arcs.size())
        throw ComponentCoverageError("component " + comp.name + " does not match any strand cycle");
      std::vector<int> rot = comp.arcs;
      std::rotate(rot.begin(), std::find(rot.begin(), rot.end(), lo), rot.end());
      if (rot != it->second) {
        // tolerate a reversed listing only for strands whose direction was a
        // free choice (no under-pass); adopt the declared direction then
        std::vector<int> rev(rot.begin() + 1, rot.end());
        std::reverse(rev.begin(), rev.end());
        rev.insert(rev.begin(), lo);
        bool free_dir = true;
        for (int arc : comp.arcs) {
          const ArcEnd e = a.in_end.at(arc);
          if (e.slot == 0 || e.slot == 2) { free_dir = false; break; }
        }
        if (rev == it->second && free_dir) {
          for (int arc : comp.arcs) std::swap(a.in_end.at(arc), a.out_end.at(arc));
          it->second = rot;
        } else {
          throw ComponentCoverageError("component " + comp.name + " lists arcs against the strand order");
        }
      }
      comp.arcs = it->second;
    }
    size_t total = 0;
    for (const auto& [lo, cyc] : cycles) total += cyc.size();
    if (covered.size() != total)
      throw ComponentCoverageError("components cover " + std::to_string(covered.size()) + " of " +
                                   std::to_string(total) + " arcs");
    if (!cycles.empty() && covered.empty())
      throw ComponentCoverageError("no component covers the crossing arcs");
  }

  // signs: +1 when the over-strand enters at slot 1
  for (int ci = 0; ci < static_cast<int>(d.crossings.size()); ++ci) {
    const int over_arc = d.crossings[ci].arcs[1];
    a.signs.push_back(a.in_end.at(over_arc) == ArcEnd{ci + 1, 1} ? +1 : -1);
  }

  // faces: turn left (slot+1) at every corner; darts are directed arc ends
  std::set<std::pair<int, int>> visited;  // (arc, index of destination end)
  for (const auto& [arc, es] : a.ends) {
    for (int k = 0; k < 2; ++k) {
      if (visited.count({arc, k})) continue;
      std::vector<int> walk;
      int cur_arc = arc;
      int cur_k = k;
      while (visited.insert({cur_arc, cur_k}).second) {
        walk.push_back(cur_arc);
        const ArcEnd dst = a.ends.at(cur_arc)[cur_k];
        const ArcEnd exit{dst.crossing, (dst.slot + 1) % 4};
        const int next_arc = detail::arc_at(d, exit);
        const auto& nes = a.ends.at(next_arc);
        // travel to the end of next_arc that is not `exit`
        cur_arc = next_arc;
        cur_k = (nes[0] == exit) ? 1 : 0;
      }
      a.faces.push_back(walk);
    }
  }
  if (d.crossings.empty()) a.faces = {{}, {}};  // a lone crossing-free loop bounds two disks

  // connectivity over crossings + crossing-free loops
  {
    const int n = static_cast<int>(d.crossings.size());
    int pieces = 0;
    std::vector<int> comp_id(n, -1);
    for (int start = 0; start < n; ++start) {
      if (comp_id[start] != -1) continue;
      ++pieces;
      std::vector<int> stack{start};
      comp_id[start] = pieces;
      while (!stack.empty()) {
        const int c = stack.back();
        stack.pop_back();
        for (int s = 0; s < 4; ++s) {
          for (const auto& e : a.ends.at(d.crossings[c].arcs[s])) {
            if (comp_id[e.crossing - 1] == -1) {
              comp_id[e.crossing - 1] = pieces;
              stack.push_back(e.crossing - 1);
            }
          }
        }
      }
    }
    for (const auto& comp : d.components)
      if (comp.arcs.empty()) ++pieces;
    if (pieces > 1) throw SplitDiagramError("diagram has " + std::to_string(pieces) + " disconnected pieces");
  }

  // Euler check on the sphere
  {
    const long long V = static_cast<long long>(d.crossings.size());
    const long long E = static_cast<long long>(a.ends.size());
    const long long F = static_cast<long long>(a.faces.size());
    if (V - E + F != 2)
      throw NonPlanarError("V-E+F = " + std::to_string(V - E + F) + " (V=" + std::to_string(V) +
                           " E=" + std::to_string(E) + " F=" + std::to_string(F) + ")");
  }

  // normalize: cycles start at min arc (done), components ordered by min arc,
  // crossing-free loops last by name
  std::stable_sort(d.components.begin(), d.components.end(), [](const Component& x, const Component& y) {
    if (x.arcs.empty() != y.arcs.empty()) return y.arcs.empty();
    if (x.arcs.empty()) return x.name < y.name;
    return x.arcs.front() < y.arcs.front();
  });

  return a;
}

inline ValidationReport validate(const LinkDiagram& d) {
  ValidationReport r;
  auto fail = [&](std::string code, std::string msg) {
    r.ok = false;
    r.issues.push_back({std::move(code), std::move(msg)});
  };
  std::optional<Analyzed> a;
  try {
    a = analyze(d);
  } catch (const ArcIncidenceError& e) {
    fail("ArcIncidence", e.what());
  } catch (const ComponentCoverageError& e) {
    fail("ComponentCoverage", e.what());
  } catch (const SplitDiagramError& e) {
    fail("SplitDiagram", e.what());
  } catch (const NonPlanarError& e) {
    fail("NonPlanar", e.what());
  } catch (const MalformedSyntax& e) {
    fail("Malformed", e.what());
  }
  if (a) {
    for (int ci = 0; ci < static_cast<int>(d.crossings.size()); ++ci) {
      const int decl = d.crossings[ci].declared_sign;
      if (decl != 0 && decl != a->signs[ci])
        fail("SignMismatch", "crossing " + std::to_string(ci + 1) + " declared sign " +
                                 (decl > 0 ? std::string("+") : std::string("-")) +
                                 " but the orientation gives " + (a->signs[ci] > 0 ? "+" : "-"));
    }
  }
  return r;
}

// --- text format ------------------------------------------------------------
// X(a,b,c,d) sign=+        crossing, slots counterclockwise from under-in
// component Knot name: 1,2,3   oriented arc cycle
// circle name                  crossing-free closed loop
// # comment

namespace detail {

inline std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline int parse_int(const std::string& tok, int line) {
  const std::string t = strip(tok);
  if (t.empty()) throw MalformedSyntax("missing number (line " + std::to_string(line) + ")");
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(t, &pos);
  } catch (...) {
    throw MalformedSyntax("bad number '" + t + "' (line " + std::to_string(line) + ")");
  }
  if (pos != t.size()) throw MalformedSyntax("bad number '" + t + "' (line " + std::to_string(line) + ")");
  return v;
}

}  // namespace detail

inline LinkDiagram parse_diagram_raw(const std::string& text, std::map<int, int>* arc_lines_out = nullptr) {
  LinkDiagram d;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::map<int, int> arc_lines;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string s = detail::strip(raw);
    if (s.empty()) continue;
    if (s.rfind("X(", 0) == 0) {
      const auto close = s.find(')');
      if (close == std::string::npos) throw MalformedSyntax("missing ')' (line " + std::to_string(line) + ")");
      const auto toks = detail::split(s.substr(2, close - 2), ',');
      if (toks.size() != 4) throw MalformedSyntax("crossing needs 4 arcs (line " + std::to_string(line) + ")");
      Crossing x;
      for (int i = 0; i < 4; ++i) {
        x.arcs[i] = detail::parse_int(toks[i], line);
        if (x.arcs[i] <= 0) throw MalformedSyntax("arc ids must be positive (line " + std::to_string(line) + ")");
        arc_lines[x.arcs[i]] = line;  // latest use wins, for error reporting
      }
      std::string rest = detail::strip(s.substr(close + 1));
      if (!rest.empty()) {
        if (rest == "sign=+") x.declared_sign = +1;
        else if (rest == "sign=-") x.declared_sign = -1;
        else throw MalformedSyntax("unexpected trailing '" + rest + "' (line " + std::to_string(line) + ")");
      }
      d.crossings.push_back(x);
    } else if (s.rfind("component ", 0) == 0) {
      const auto colon = s.find(':');
      if (colon == std::string::npos) throw MalformedSyntax("component needs ':' (line " + std::to_string(line) + ")");
      const auto head = detail::split(detail::strip(s.substr(10, colon - 10)), ' ');
      if (head.size() != 2) throw MalformedSyntax("component needs a role and a name (line " + std::to_string(line) + ")");
      Component comp;
      if (head[0] == "Knot") comp.role = Role::Knot;
      else if (head[0] == "Circle") comp.role = Role::Circle;
      else throw MalformedSyntax("unknown role '" + head[0] + "' (line " + std::to_string(line) + ")");
      comp.name = detail::strip(head[1]);
      if (comp.name.empty()) throw MalformedSyntax("component needs a name (line " + std::to_string(line) + ")");
      for (const auto& tok : detail::split(s.substr(colon + 1), ','))
        comp.arcs.push_back(detail::parse_int(tok, line));
      if (comp.arcs.empty()) throw MalformedSyntax("component lists no arcs (line " + std::to_string(line) + ")");
      d.components.push_back(comp);
    } else if (s.rfind("circle ", 0) == 0) {
      Component comp;
      comp.name = detail::strip(s.substr(7));
      comp.role = Role::Knot;  // a crossing-free loop is an unknotted strand
      if (comp.name.empty()) throw MalformedSyntax("circle needs a name (line " + std::to_string(line) + ")");
      d.components.push_back(comp);
    } else {
      throw MalformedSyntax("unrecognized line " + std::to_string(line) + ": '" + s + "'");
    }
  }
  if (arc_lines_out) *arc_lines_out = arc_lines;
  return d;
}

// Parse and fully check; the returned diagram has components materialized.
inline LinkDiagram parse_diagram(const std::string& text) {
  std::map<int, int> arc_lines;
  const LinkDiagram raw = parse_diagram_raw(text, &arc_lines);
  return analyze(raw, &arc_lines).diagram;
}

inline std::string serialize_diagram(const LinkDiagram& input) {
  const Analyzed a = analyze(input);
  std::ostringstream os;
  for (size_t ci = 0; ci < a.diagram.crossings.size(); ++ci) {
    const auto& x = a.diagram.crossings[ci].arcs;
    os << "X(" << x[0] << "," << x[1] << "," << x[2] << "," << x[3] << ") sign="
       << (a.signs[ci] > 0 ? '+' : '-') << "\n";
  }
  for (const auto& comp : a.diagram.components) {
    if (comp.arcs.empty()) {
      os << "circle " << comp.name << "\n";
      continue;
    }
    os << "component " << to_string(comp.role) << " " << comp.name << ": ";
    for (size_t i = 0; i < comp.arcs.size(); ++i) os << (i ? "," : "") << comp.arcs[i];
    os << "\n";
  }
  return os.str();
}

// --- Gauss codes ------------------------------------------------------------

// Crossing passes along a component, following its orientation.
inline std::vector<Pass> component_passes(const Analyzed& a, const Component& comp) {
  std::vector<Pass> out;
  for (int arc : comp.arcs) {
    const ArcEnd e = a.in_end.at(arc);
    out.push_back({e.crossing, e.slot, e.slot == 1 || e.slot == 3});
  }
  return out;
}

namespace detail {

inline std::string gauss_from_events(const std::vector<Pass>& events, const std::vector<int>& signs) {
  std::map<int, int> label;
  std::ostringstream os;
  for (const auto& p : events) {
    if (!label.count(p.crossing)) {
      const int next = static_cast<int>(label.size()) + 1;
      label[p.crossing] = next;
    }
    os << (p.over ? 'O' : 'U') << label[p.crossing] << (signs[p.crossing - 1] > 0 ? '+' : '-');
  }
  return os.str();
}

}  // namespace detail

// Presentation code: start at the lowest arc, run in the direction whose first
// pass goes over (ties: forward); label crossings in order of first encounter.
inline std::string gauss_code(const Analyzed& a, const std::string& component_name) {
  const Component* comp = nullptr;
  for (const auto& c : a.diagram.components)
    if (c.name == component_name) comp = &c;
  if (!comp) throw UnknownComponent("no component named " + component_name);
  if (comp->arcs.empty()) return "";
  const std::vector<Pass> fwd = component_passes(a, *comp);
  if (!fwd.empty() && !fwd.front().over) {
    // walk against the orientation: passes at the out ends, reversed order
    std::vector<Pass> rev;
    for (auto it = comp->arcs.rbegin(); it != comp->arcs.rend(); ++it) {
      const ArcEnd e = a.out_end.at(*it);
      rev.push_back({e.crossing, e.slot, e.slot == 1 || e.slot == 3});
    }
    std::rotate(rev.begin(), rev.end() - 1, rev.end());  // start arc's pass first
    if (!rev.empty() && rev.front().over) return detail::gauss_from_events(rev, a.signs);
  }
  return detail::gauss_from_events(fwd, a.signs);
}

// Canonical code: lexicographic minimum over every starting arc and both
// directions; stable identity for diagrams that only differ by arc numbering.
inline std::string canonical_gauss_code(const Analyzed& a, const Component& comp) {
  if (comp.arcs.empty()) return "";
  std::string best;
  const int n = static_cast<int>(comp.arcs.size());
  std::vector<Pass> fwd = component_passes(a, comp);
  std::vector<Pass> bwd;
  for (auto it = comp.arcs.rbegin(); it != comp.arcs.rend(); ++it) {
    const ArcEnd e = a.out_end.at(*it);
    bwd.push_back({e.crossing, e.slot, e.slot == 1 || e.slot == 3});
  }
  for (int dir = 0; dir < 2; ++dir) {
    const auto& seq = dir == 0 ? fwd : bwd;
    for (int start = 0; start < n; ++start) {
      std::vector<Pass> rot(seq.begin() + start, seq.end());
      rot.insert(rot.end(), seq.begin(), seq.begin() + start);
      const std::string s = detail::gauss_from_events(rot, a.signs);
      if (best.empty() || s < best) best = s;
    }
  }
  return best;
}

inline std::string gauss_code(const LinkDiagram& d, const std::string& component_name) {
  return gauss_code(analyze(d), component_name);
}

// Sorted canonical codes of all components: an order-free diagram fingerprint.
inline std::vector<std::string> canonical_codes(const Analyzed& a) {
  std::vector<std::string> out;
  for (const auto& comp : a.diagram.components) out.push_back(canonical_gauss_code(a, comp));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace twistkit
