#pragma once

// Crossing-circle augmentation.
//
// Each selected twist region is replaced by a gadget: an unknotted circle
// crossing all m strands twice (over the whole ribbon on one side, under it
// on the other) with the residual half twist, 0 or 1 of them, kept between
// the two columns.  The removed full twists are remembered on the circle as
// a filling coefficient, so augmenting and refilling recovers the original
// diagram pass for pass.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "twistkit/diagram.hpp"
#include "twistkit/errors.hpp"
#include "twistkit/twist.hpp"

namespace twistkit {

struct CrossingCircle {
  std::string id;               // matches the Circle component name
  int m = 0;                    // strands through the spanning disk
  int h = 0;                    // residual half twists, 0 or 1
  int sign = 1;                 // handedness of the removed twisting
  long long n = 0;              // stored full twists: c = 2n + sign*h
  std::vector<int> disk_order;  // ribbon order of the original entry arcs
};

struct AugmentedLink {
  LinkDiagram diagram;
  std::vector<CrossingCircle> circles;
};

// ---- twisting arithmetic -------------------------------------------------

struct HalfTwistSplit {
  int h = 0;
  int sign = 1;
  long long n = 0;
};

// c = 2n + sign*h with h in {0,1}; c = 0 splits as (0, +1, 0).
inline HalfTwistSplit split_half_twists(long long c) {
  HalfTwistSplit s;
  s.h = static_cast<int>(std::llabs(c) % 2);
  s.sign = c < 0 ? -1 : 1;
  s.n = s.sign * (std::llabs(c) / 2);
  return s;
}

inline long long stored_half_twists(const CrossingCircle& circ) {
  return 2 * circ.n + static_cast<long long>(circ.sign) * circ.h;
}

// Surgery slope that undoes the augmentation: one meridian, n longitudes.
inline std::pair<long long, long long> filling_slope(const CrossingCircle& circ) {
  return {1, circ.n};
}

// How the projection surface meets the circle's spanning disk: two disjoint
// disk pieces when the strands pass flat, one doubled piece across the half
// twist.  Curves are (meridian, longitude) classes on the disk boundary.
inline std::vector<std::pair<long long, long long>> p_boundary_class(int h) {
  if (h == 0) return {{1, 0}, {1, 0}};
  return {{2, 1}};
}

// The disk boundary itself is the (0,1) curve; total geometric intersection
// with the listed classes decides whether the surface meets the disk twice.
inline bool meets_projection_twice(const std::vector<std::pair<long long, long long>>& cls) {
  long long total = 0;
  for (const auto& [p, q] : cls) total += std::llabs(p * 1 - q * 0);
  return total == 2;
}

struct CircleParity {
  std::string id;
  int h = 0;
  std::vector<std::pair<long long, long long>> boundary_class;
  bool meets_twice = false;
};

inline CircleParity half_twist_parity(const CrossingCircle& circ) {
  CircleParity out;
  out.id = circ.id;
  out.h = circ.h;
  out.boundary_class = p_boundary_class(circ.h);
  out.meets_twice = meets_projection_twice(out.boundary_class);
  return out;
}

// ---- wiring model --------------------------------------------------------

// Ports are positional: side 'L' is the column where the circle runs over the
// strands, side 'R' where it runs under; positions count 1..m along the
// circle's travel down the L column.
struct PortRef {
  std::string site;
  char side = 'L';
  int pos = 1;
  auto operator<=>(const PortRef&) const = default;
};

// A wire is one crossing-free arc between two ports, directed with the
// strand's orientation.
struct Wire {
  PortRef from, to;
  auto operator<=>(const Wire&) const = default;
};

struct SiteSpec {
  std::string id;
  int m = 0;
  int h = 0;
  int sign = 1;
  long long n = 0;
  std::vector<int> disk_order;
};

struct SiteDetail {
  std::string id;
  int m = 0;
  int h = 0;
  std::vector<int> left_crossings, right_crossings;  // position order
  std::vector<int> outer_left, outer_right;          // port arcs
  std::vector<int> inner_left, inner_right;          // toward the residual block
  std::vector<char> forward;                         // strand direction per passage
  std::vector<int> block;                            // residual block crossings
  std::vector<int> circle_arcs;
};

struct Wiring {
  std::vector<SiteSpec> sites;
  std::vector<Wire> wires;
  std::vector<SiteDetail> details;  // empty for hand-made wirings
};

namespace detail {

inline int rev_perm(int m, int h, int i) { return h ? m + 1 - i : i; }  // 1-based

inline std::string port_str(const PortRef& p) {
  return p.site + "." + p.side + std::to_string(p.pos);
}

}  // namespace detail

// ---- gadget emission -----------------------------------------------------

// Build the augmented diagram for a site/wire description.  Arc numbers are
// assigned deterministically: wires first in sorted order, then per site the
// inner arcs, block arcs, and circle arcs.
inline AugmentedLink build_augmented(const std::vector<SiteSpec>& sites, std::vector<Wire> wires) {
  if (sites.empty()) throw EmptySelection("no crossing circles to build");
  std::map<std::string, const SiteSpec*> by_id;
  for (const auto& s : sites) {
    if (s.id.empty() || !by_id.emplace(s.id, &s).second)
      throw Error("duplicate or empty site id: " + s.id);
    if (s.m < 1) throw Error("site " + s.id + " must carry at least one strand");
    if (s.h != 0 && s.h != 1) throw Error("site " + s.id + " has half-twist count outside {0,1}");
    if (s.sign != 1 && s.sign != -1) throw Error("site " + s.id + " has a non-unit sign");
  }

  std::sort(wires.begin(), wires.end());
  std::map<PortRef, int> wire_at;  // port -> wire index
  for (size_t w = 0; w < wires.size(); ++w) {
    for (const PortRef* p : {&wires[w].from, &wires[w].to}) {
      auto it = by_id.find(p->site);
      if (it == by_id.end()) throw Error("wire references unknown site " + p->site);
      if (p->side != 'L' && p->side != 'R')
        throw Error("wire references bad side at " + detail::port_str(*p));
      if (p->pos < 1 || p->pos > it->second->m)
        throw Error("wire references bad position at " + detail::port_str(*p));
      if (!wire_at.emplace(*p, static_cast<int>(w)).second)
        throw Error("port wired twice: " + detail::port_str(*p));
    }
  }
  for (const auto& s : sites)
    for (char side : {'L', 'R'})
      for (int i = 1; i <= s.m; ++i)
        if (!wire_at.count({s.id, side, i}))
          throw Error("port left unwired: " + detail::port_str({s.id, side, i}));

  // strand direction per passage: the wire pointing into a port carries the
  // strand into the site there
  std::map<std::string, std::vector<char>> forward;
  for (const auto& s : sites) {
    auto& fwd = forward[s.id];
    fwd.assign(s.m + 1, 0);
    for (int i = 1; i <= s.m; ++i) {
      const PortRef lp{s.id, 'L', i};
      const PortRef rp{s.id, 'R', detail::rev_perm(s.m, s.h, i)};
      const bool in_l = wires[wire_at[lp]].to == lp;
      const bool in_r = wires[wire_at[rp]].to == rp;
      if (in_l == in_r)
        throw Error("strand through " + detail::port_str(lp) + " has no consistent direction");
      fwd[i] = in_l;
    }
  }

  int next_arc = 1;
  std::map<PortRef, int> port_arc;
  for (size_t w = 0; w < wires.size(); ++w) {
    port_arc[wires[w].from] = next_arc;
    port_arc[wires[w].to] = next_arc;
    ++next_arc;
  }

  std::vector<Crossing> crossings;
  std::vector<std::vector<int>> circle_cycles;
  for (const auto& s : sites) {
    const int m = s.m;
    const auto& fwd = forward[s.id];
    std::vector<int> inner(m + 1);
    for (int i = 1; i <= m; ++i) inner[i] = next_arc++;
    std::vector<int> circ(2 * m);
    for (int k = 0; k < 2 * m; ++k) circ[k] = next_arc++;

    // over column: the circle crosses strands 1..m in order, over each
    for (int i = 1; i <= m; ++i) {
      const int w = port_arc[{s.id, 'L', i}];
      const int prev = circ[i - 1], next = circ[i % (2 * m)];
      if (fwd[i])
        crossings.push_back({{w, prev, inner[i], next}, 0});
      else
        crossings.push_back({{inner[i], next, w, prev}, 0});
    }

    // residual block: one staircase half twist when h = 1
    std::vector<int> pos(inner.begin() + 1, inner.end());
    std::vector<char> dir(fwd.begin() + 1, fwd.end());
    if (s.h == 1 && m >= 2) {
      for (int j = 1; j < m; ++j) {
        for (int i = j; i >= 1; --i) {
          const int L = pos[i - 1], R = pos[i];
          const bool fl = dir[i - 1], fr = dir[i];
          const int dl = next_arc++, dr = next_arc++;
          const int dirprod = (fl == fr) ? 1 : -1;
          if (s.sign == dirprod) {  // right-hand strand underneath
            if (fr)
              crossings.push_back({{R, L, dl, dr}, 0});
            else
              crossings.push_back({{dl, dr, R, L}, 0});
          } else {  // left-hand strand underneath
            if (fl)
              crossings.push_back({{L, dl, dr, R}, 0});
            else
              crossings.push_back({{dr, R, L, dl}, 0});
          }
          pos[i - 1] = dl;
          pos[i] = dr;
          std::swap(dir[i - 1], dir[i]);
        }
      }
    }

    // under column: the circle returns across strands m..1, under each
    for (int j = 1; j <= m; ++j) {
      const int w = port_arc[{s.id, 'R', j}];
      const int enter = circ[2 * m - j], leave = circ[(2 * m - j + 1) % (2 * m)];
      crossings.push_back({{enter, pos[j - 1], leave, w}, 0});
    }
    circle_cycles.push_back(circ);
  }

  LinkDiagram raw{crossings, {}};
  Analyzed derived = analyze(raw);

  // name the circle components after their sites; knot strands get k-names
  std::vector<Component> comps;
  std::vector<Component> knots;
  for (const auto& comp : derived.diagram.components) {
    std::set<int> arcset(comp.arcs.begin(), comp.arcs.end());
    int site_idx = -1;
    for (size_t i = 0; i < sites.size(); ++i) {
      if (arcset == std::set<int>(circle_cycles[i].begin(), circle_cycles[i].end()))
        site_idx = static_cast<int>(i);
    }
    if (site_idx >= 0)
      comps.push_back({sites[site_idx].id, Role::Circle, comp.arcs});
    else
      knots.push_back({"", Role::Knot, comp.arcs});
  }
  if (comps.size() != sites.size()) throw Error("internal: a circle merged with a strand");
  int k = 0;
  for (auto& comp : knots) {
    do comp.name = "k" + std::to_string(++k);
    while (by_id.count(comp.name));
    comps.push_back(comp);
  }

  LinkDiagram shaped{crossings, comps};
  Analyzed strict = analyze(shaped);  // full validation: incidence, planarity, connectivity

  AugmentedLink out;
  out.diagram = strict.diagram;
  for (const auto& s : sites) out.circles.push_back({s.id, s.m, s.h, s.sign, s.n, s.disk_order});
  return out;
}

// ---- standard-form recognition -------------------------------------------

// Recover the wiring of an augmented diagram, rejecting anything that is not
// in the emitted standard form.  The circle orientation is pinned by the PD
// (it is the under-strand on its R column), so sides and positions are
// recovered deterministically.
inline Wiring analyze_standard_form(const AugmentedLink& a) {
  const Analyzed an = analyze(a.diagram);
  Wiring out;
  std::vector<char> claimed(a.diagram.crossings.size() + 1, 0);
  std::map<PortRef, std::pair<int, ArcEnd>> port_attach;  // port -> (arc, end at column)

  std::set<std::string> meta_ids;
  for (const auto& circ : a.circles)
    if (!meta_ids.insert(circ.id).second) throw Error("duplicate circle id " + circ.id);
  for (const auto& comp : an.diagram.components)
    if (comp.role == Role::Circle && !meta_ids.count(comp.name))
      throw Error("circle component " + comp.name + " has no metadata");

  for (const auto& circ : a.circles) {
    const Component* comp = nullptr;
    for (const auto& c : an.diagram.components)
      if (c.name == circ.id && c.role == Role::Circle) comp = &c;
    if (!comp) throw UnknownCircleId("no circle component named " + circ.id);
    const auto passes = component_passes(an, *comp);
    const int n2 = static_cast<int>(passes.size());
    if (n2 != 2 * circ.m || n2 == 0)
      throw Error("circle " + circ.id + " crosses " + std::to_string(n2) +
                  " times, expected " + std::to_string(2 * circ.m));
    const int m = circ.m;
    // rotate so the over-run (L column) comes first
    int start = -1;
    for (int i = 0; i < n2; ++i) {
      if (passes[i].over && !passes[(i + n2 - 1) % n2].over) {
        if (start >= 0) throw Error("circle " + circ.id + " is not two clean columns");
        start = i;
      }
    }
    if (start < 0) throw Error("circle " + circ.id + " is not two clean columns");
    std::vector<Pass> rot;
    for (int i = 0; i < n2; ++i) rot.push_back(passes[(start + i) % n2]);
    for (int i = 0; i < n2; ++i)
      if (rot[i].over != (i < m)) throw Error("circle " + circ.id + " is not two clean columns");

    SiteDetail det;
    det.id = circ.id;
    det.m = m;
    det.circle_arcs = comp->arcs;
    det.left_crossings.resize(m);
    det.right_crossings.resize(m);
    det.outer_left.resize(m);
    det.outer_right.resize(m);
    det.inner_left.resize(m);
    det.inner_right.resize(m);
    det.forward.assign(m, 0);

    for (int i = 0; i < m; ++i) {
      const Pass& p = rot[i];  // over column, position i+1
      const auto& x = a.diagram.crossings[p.crossing - 1].arcs;
      if (claimed[p.crossing]) throw Error("crossing shared between circles");
      claimed[p.crossing] = 1;
      det.left_crossings[i] = p.crossing;
      const bool fwd = (p.slot_in == 1);  // circle enters over-slot 1 iff strand flows inward
      det.forward[i] = fwd;
      det.outer_left[i] = fwd ? x[0] : x[2];
      det.inner_left[i] = fwd ? x[2] : x[0];
      port_attach[{circ.id, 'L', i + 1}] = {det.outer_left[i],
                                            ArcEnd{p.crossing, fwd ? 0 : 2}};
    }
    for (int i = 0; i < m; ++i) {
      const Pass& p = rot[m + i];  // under column, visited m..1
      if (p.slot_in != 0) throw Error("circle " + circ.id + " crosses its under column oddly");
      const auto& x = a.diagram.crossings[p.crossing - 1].arcs;
      if (claimed[p.crossing]) throw Error("crossing shared between circles");
      claimed[p.crossing] = 1;
      const int j = m - i;  // 1-based position
      det.right_crossings[j - 1] = p.crossing;
      det.outer_right[j - 1] = x[3];
      det.inner_right[j - 1] = x[1];
      port_attach[{circ.id, 'R', j}] = {x[3], ArcEnd{p.crossing, 3}};
    }
    out.details.push_back(det);
  }

  // walk the interior of each site: inner arcs must run through the residual
  // block straight to the same circle's R column
  std::map<int, std::string> column_of;  // crossing -> circle id (columns only)
  for (const auto& det : out.details) {
    for (int c : det.left_crossings) column_of[c] = det.id;
    for (int c : det.right_crossings) column_of[c] = det.id;
  }
  for (size_t s = 0; s < out.details.size(); ++s) {
    SiteDetail& det = out.details[s];
    const CrossingCircle& circ = a.circles[s];
    const int m = det.m;
    std::set<int> block;
    std::vector<int> perm(m + 1, 0);
    for (int i = 1; i <= m; ++i) {
      int arc = det.inner_left[i - 1];
      ArcEnd at{det.left_crossings[i - 1], det.forward[i - 1] ? 2 : 0};
      while (true) {
        const auto& ends = an.ends.at(arc);
        if (ends[0] != at && ends[1] != at)
          throw Error("internal: lost the strand inside " + det.id);
        const ArcEnd next_end = (ends[0] == at) ? ends[1] : ends[0];
        auto col = column_of.find(next_end.crossing);
        if (col != column_of.end()) {
          if (col->second != det.id)
            throw Error("strand from " + det.id + " runs into circle " + col->second);
          int j = 0;
          for (int t = 1; t <= m; ++t)
            if (det.right_crossings[t - 1] == next_end.crossing) j = t;
          if (j == 0 || next_end.slot != 1)
            throw Error("strand through " + det.id + " does not exit across the under column");
          perm[i] = j;
          break;
        }
        if (claimed[next_end.crossing] && !block.count(next_end.crossing))
          throw Error("residual block of " + det.id + " collides with another site");
        claimed[next_end.crossing] = 1;
        block.insert(next_end.crossing);
        at = ArcEnd{next_end.crossing, continuation_slot(next_end.slot)};
        arc = a.diagram.crossings[next_end.crossing - 1].arcs[at.slot];
      }
    }
    det.block.assign(block.begin(), block.end());
    if (m == 1 && !block.empty()) throw Error("single-strand circle " + circ.id + " has a block");
    const int h = m == 1 ? circ.h : (block.empty() ? 0 : 1);  // twisting one strand leaves no trace
    det.h = h;
    if (circ.h != h)
      throw Error("circle " + circ.id + " stores h=" + std::to_string(circ.h) +
                  " but its diagram shows h=" + std::to_string(block.empty() ? 0 : 1));
    for (int i = 1; i <= m; ++i)
      if (perm[i] != detail::rev_perm(m, h, i))
        throw Error("strand order through " + circ.id + " does not match its half twist");
    if (h == 1 && m >= 2) {
      // the block must be exactly one staircase half twist of the right sign
      const long long expect = static_cast<long long>(m) * (m - 1) / 2;
      if (static_cast<long long>(block.size()) != expect)
        throw Error("residual block of " + circ.id + " has the wrong size");
      std::vector<char> allowed(a.diagram.crossings.size() + 1, 0);
      for (int c : block) allowed[c] = 1;
      detail::ParseScratch st;
      st.frontier.assign(det.inner_left.begin(), det.inner_left.end());
      std::vector<int> order;
      if (!detail::consume_round(an, st, order, allowed) ||
          static_cast<long long>(st.used.size()) != expect)
        throw Error("residual block of " + circ.id + " is not a staircase half twist");
      std::vector<int> expect_exit(m);
      for (int j = 1; j <= m; ++j) expect_exit[j - 1] = det.inner_right[j - 1];
      if (st.frontier != expect_exit)
        throw Error("residual block of " + circ.id + " exits out of order");
      if (st.sign != circ.sign)
        throw Error("residual block of " + circ.id + " twists against its stored sign");
    } else {
      // flat, or a single strand whose half twist leaves no crossings
      for (int i = 1; i <= m; ++i)
        if (det.inner_left[i - 1] != det.inner_right[i - 1])
          throw Error("circle " + circ.id + " has phantom block arcs");
    }
  }

  for (size_t c = 1; c < claimed.size(); ++c)
    if (!claimed[c])
      throw Error("crossing " + std::to_string(c) + " belongs to no crossing circle");

  // wires: every port arc joins exactly two ports, oriented out-end to in-end
  std::map<int, std::vector<std::pair<PortRef, ArcEnd>>> members;
  for (const auto& [port, att] : port_attach) members[att.first].push_back({port, att.second});
  for (const auto& [arc, atts] : members) {
    if (atts.size() != 2)
      throw Error("arc " + std::to_string(arc) + " touches " + std::to_string(atts.size()) +
                  " ports, expected 2");
    const ArcEnd out_end = an.out_end.at(arc), in_end = an.in_end.at(arc);
    const PortRef* src = nullptr;
    const PortRef* dst = nullptr;
    for (const auto& [port, end] : atts) {
      if (end == out_end) src = &port;
      if (end == in_end) dst = &port;
    }
    if (!src || !dst) throw Error("arc " + std::to_string(arc) + " is wired inconsistently");
    out.wires.push_back({*src, *dst});
  }
  std::sort(out.wires.begin(), out.wires.end());

  for (const auto& circ : a.circles)
    out.sites.push_back({circ.id, circ.m, circ.h, circ.sign, circ.n, circ.disk_order});
  return out;
}

// ---- augmentation --------------------------------------------------------

inline AugmentedLink augment(const LinkDiagram& d, const TwistSelection& sel) {
  if (sel.regions.empty())
    throw EmptySelection("selection contains no regions; nothing to augment");
  const Analyzed a = analyze(d);

  std::vector<SiteSpec> sites;
  std::map<int, std::vector<std::pair<PortRef, ArcEnd>>> members;
  for (const auto& r : sel.regions) {
    const std::string id = "C" + std::to_string(r.id);
    const HalfTwistSplit hs = split_half_twists(r.c);
    sites.push_back({id, r.m, hs.h, hs.sign, hs.n, r.entry});

    // replay the region to find which crossing-end each position attaches at
    std::vector<char> allowed(d.crossings.size() + 1, 0);
    for (int cid : r.crossings) allowed[cid] = 1;
    detail::ParseScratch st;
    st.frontier = r.entry;
    detail::TouchRecorder rec(r.m);
    for (long long round = 0; round < std::llabs(r.c); ++round) {
      std::vector<int> order;
      if (!detail::consume_round(a, st, order, allowed, &rec))
        throw Error("internal: selected region " + id + " failed its replay");
    }
    if (st.frontier != r.exit)
      throw Error("internal: selected region " + id + " replays to a different exit");
    for (int i = 0; i < r.m; ++i) {
      members[r.entry[i]].push_back({{id, 'L', i + 1}, rec.entry_ends[i]});
      members[r.exit[i]].push_back({{id, 'R', i + 1}, rec.exit_ends[i]});
    }
  }

  std::vector<Wire> wires;
  for (const auto& [arc, atts] : members) {
    if (atts.size() != 2)
      throw Error("internal: arc " + std::to_string(arc) + " has " +
                  std::to_string(atts.size()) + " region attachments");
    const ArcEnd out_end = a.out_end.at(arc), in_end = a.in_end.at(arc);
    const PortRef* src = nullptr;
    const PortRef* dst = nullptr;
    for (const auto& [port, end] : atts) {
      if (end == out_end) src = &port;
      if (end == in_end) dst = &port;
    }
    if (!src || !dst)
      throw Error("internal: arc " + std::to_string(arc) + " attaches twice to one end");
    wires.push_back({*src, *dst});
  }

  AugmentedLink out = build_augmented(sites, wires);
  analyze_standard_form(out);  // emitted diagrams must always re-analyze
  return out;
}

// ---- refilling -----------------------------------------------------------

// Replace every crossing circle by explicit twisting: site i gets
// c' = 2n' + sign*h half twists, with n' taken from `fills` or, when absent,
// the stored coefficient.  The result is a plain diagram again.
inline LinkDiagram twist_fill(const AugmentedLink& a,
                              const std::map<std::string, long long>& fills = {}) {
  const Wiring w = analyze_standard_form(a);
  std::set<std::string> ids;
  for (const auto& s : w.sites) ids.insert(s.id);
  for (const auto& [id, n] : fills)
    if (!ids.count(id)) throw UnknownCircleId("no crossing circle named " + id);

  const int W = static_cast<int>(w.wires.size());
  std::map<PortRef, int> wire_at;
  for (int i = 0; i < W; ++i) {
    wire_at[w.wires[i].from] = i;
    wire_at[w.wires[i].to] = i;
  }

  // wires are spliced through flattened sites with a union-find
  std::vector<int> parent(W);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  struct BlockSite {
    const SiteSpec* spec;
    long long c = 0;
  };
  std::vector<BlockSite> blocks;
  for (const auto& s : w.sites) {
    auto it = fills.find(s.id);
    const long long n = it == fills.end() ? s.n : it->second;
    const long long c = 2 * n + static_cast<long long>(s.sign) * s.h;
    if (s.m < 2 || c == 0) {
      for (int i = 1; i <= s.m; ++i)
        parent[find(wire_at[{s.id, 'L', i}])] = find(wire_at[{s.id, 'R', i}]);
    } else {
      blocks.push_back({&s, c});
    }
  }

  // arc id per wire class
  std::map<int, int> class_arc;
  int next_arc = 1;
  for (int i = 0; i < W; ++i) {
    const int root = find(i);
    if (!class_arc.count(root)) class_arc[root] = next_arc++;
  }
  const auto arc_at = [&](const PortRef& p) { return class_arc.at(find(wire_at.at(p))); };

  std::vector<Crossing> crossings;
  std::set<int> open_classes;
  for (const auto& b : blocks) {
    const SiteSpec& s = *b.spec;
    const int m = s.m;
    const int csign = b.c < 0 ? -1 : 1;
    std::vector<int> pos(m);
    std::vector<char> dir(m);
    for (int i = 1; i <= m; ++i) {
      const PortRef lp{s.id, 'L', i};
      pos[i - 1] = arc_at(lp);
      open_classes.insert(pos[i - 1]);
      dir[i - 1] = (w.wires[wire_at.at(lp)].to == lp);
    }
    const size_t first = crossings.size();
    for (long long round = 0; round < std::llabs(b.c); ++round) {
      for (int j = 1; j < m; ++j) {
        for (int i = j; i >= 1; --i) {
          const int L = pos[i - 1], R = pos[i];
          const bool fl = dir[i - 1], fr = dir[i];
          const int dl = next_arc++, dr = next_arc++;
          const int dirprod = (fl == fr) ? 1 : -1;
          if (csign == dirprod) {
            if (fr)
              crossings.push_back({{R, L, dl, dr}, 0});
            else
              crossings.push_back({{dl, dr, R, L}, 0});
          } else {
            if (fl)
              crossings.push_back({{L, dl, dr, R}, 0});
            else
              crossings.push_back({{dr, R, L, dl}, 0});
          }
          pos[i - 1] = dl;
          pos[i] = dr;
          std::swap(dir[i - 1], dir[i]);
        }
      }
    }
    // stitch the final row onto the R-port wire classes
    std::map<int, int> rename;
    for (int j = 1; j <= m; ++j) {
      const int target = arc_at(PortRef{s.id, 'R', j});
      open_classes.insert(target);
      rename[pos[j - 1]] = target;
    }
    for (size_t c = first; c < crossings.size(); ++c)
      for (int& arc : crossings[c].arcs)
        if (auto it = rename.find(arc); it != rename.end()) arc = it->second;
  }

  // wire classes that never reached a block are closed detached loops
  int loops = 0;
  for (const auto& [root, arc] : class_arc)
    if (!open_classes.count(arc)) ++loops;
  if (loops > 0) {
    if (crossings.empty() && loops == 1) {
      LinkDiagram d;
      d.components.push_back({"k1", Role::Knot, {}});
      return analyze(d).diagram;
    }
    throw SplitDiagramError("filling detached " + std::to_string(loops) +
                            " closed loop(s) from the diagram");
  }

  // compact arc ids
  std::map<int, int> compact;
  for (const auto& x : crossings)
    for (int arc : x.arcs) compact.emplace(arc, 0);
  int id = 1;
  for (auto& [arc, to] : compact) to = id++;
  for (auto& x : crossings)
    for (int& arc : x.arcs) arc = compact[arc];

  LinkDiagram d{crossings, {}};
  return analyze(d).diagram;
}

}  // namespace twistkit
