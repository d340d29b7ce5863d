#pragma once

// Nested-level structure of a reduced augmented link.  A "level" is a set of
// crossing circles living at the same nesting depth of the solid-torus chain
// V_0 ) V_1 ) ... ; detection works on the standard-form wiring by peeling
// "blobs": a self-contained cluster of circles hanging on a single strand
// thread that leaves some circle's disk at one position and returns at the
// adjacent position on the same side.  Each peeled blob is replaced by a
// tagged cap wire standing for the contracted companion core.  A circle left
// holding such a cap over its whole disk, with nothing else through it, is a
// T^2 x I shell and forms a level of its own.  Detection is deliberately
// conservative: diagrams with no visible nesting come back as a single level.

#include <twistkit/augment.hpp>
#include <twistkit/bounds.hpp>

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace twistkit {

struct Level {
  int depth = 0;                          // 0 = outermost
  std::vector<std::string> circle_ids;    // sorted
  std::vector<std::string> core_strands;  // arcs carrying this level's companion core
  int t_i = 0;                            // circle count at this level
};

enum class LevelKind { SeifertFibered, T2xICollapsible, HyperbolicCertified, Inconclusive };

inline std::string to_string(LevelKind k) {
  switch (k) {
    case LevelKind::SeifertFibered: return "seifert-fibered";
    case LevelKind::T2xICollapsible: return "t2xi-collapsible";
    case LevelKind::HyperbolicCertified: return "hyperbolic-certified";
    default: return "inconclusive";
  }
}

struct ComponentClassification {
  int depth = 0;
  LevelKind kind = LevelKind::Inconclusive;
  int min_c = 0;  // smallest |half-twist count| among the level's circles
};

// Final half-twist counts per circle; circles not listed keep their stored
// value c = 2n + sign*h.
struct FinalTwists {
  std::map<std::string, int> overrides;
};

struct JsjComponent {
  int depth = 0;
  std::string type;         // "hyperbolic", "(2,q) torus knot", "inconclusive: ..."
  std::string certificate;  // from certify_filling on the level's weakest circle
};

struct DecompositionReport {
  std::vector<Level> levels;
  std::vector<ComponentClassification> classifications;
  std::vector<std::string> sublink_lhat;  // circles excluding collapsible levels
  int t = 0;                              // circles in the sublink
  int t0 = 0;                             // collapsible level count
  std::vector<JsjComponent> jsj;          // one entry per non-collapsible level
  std::string overall;
  std::string detection = "heuristic";
};

namespace detail {

inline int final_half_twists(const SiteSpec& s, const FinalTwists& params) {
  const auto it = params.overrides.find(s.id);
  if (it != params.overrides.end()) return std::abs(it->second);
  return static_cast<int>(std::llabs(stored_half_twists({"", s.m, s.h, s.sign, s.n, {}})));
}

// Working copy of a wiring whose wires may carry a "core" tag marking a
// contracted deeper level.
struct CoreWire {
  PortRef from, to;
  bool core = false;
};

struct LevelWork {
  std::vector<SiteSpec> sites;
  std::vector<CoreWire> wires;

  const SiteSpec* site(const std::string& id) const {
    for (const auto& s : sites)
      if (s.id == id) return &s;
    return nullptr;
  }

  int wire_at(const PortRef& p) const {
    for (size_t i = 0; i < wires.size(); ++i)
      if (wires[i].from == p || wires[i].to == p) return static_cast<int>(i);
    return -1;
  }
};

inline std::string arc_str(const CoreWire& w) {
  std::string s = port_str(w.from) + ">" + port_str(w.to);
  if (w.core) s += " [core]";
  return s;
}

// One level as discovered, innermost first.
struct RawLevel {
  std::vector<std::string> circles;
  std::vector<std::string> arcs;
  bool collapsible = false;
  int min_c = 0;
};

// Strand walk leaving `start` (a port of `anchor`), through wires and site
// passages, until the anchor circle is hit again.
struct BlobWalk {
  PortRef arrival;
  std::vector<std::string> circles;               // visited, sorted
  std::map<std::string, std::set<int>> passages;  // visited passage indices per circle
  std::vector<int> wire_indices;                  // thread, in walk order
  bool closed = false;
};

inline BlobWalk walk_thread(const LevelWork& work, const std::string& anchor, const PortRef& start) {
  BlobWalk out;
  PortRef cur = start;
  const size_t cap = 2 * work.wires.size() + 2;
  for (size_t steps = 0; steps < cap; ++steps) {
    const int wi = work.wire_at(cur);
    if (wi < 0) return out;  // dangling port: malformed input
    out.wire_indices.push_back(wi);
    const CoreWire& w = work.wires[wi];
    const PortRef q = (w.from == cur) ? w.to : w.from;
    if (q.site == anchor) {
      out.arrival = q;
      out.closed = true;
      return out;
    }
    const SiteSpec* s = work.site(q.site);
    if (!s) return out;
    const int li = (q.side == 'L') ? q.pos : rev_perm(s->m, s->h, q.pos);
    out.passages[q.site].insert(li);
    if (std::find(out.circles.begin(), out.circles.end(), q.site) == out.circles.end())
      out.circles.push_back(q.site);
    cur = PortRef{q.site, q.side == 'L' ? 'R' : 'L', rev_perm(s->m, s->h, q.pos)};
  }
  return out;
}

struct Blob {
  std::string anchor;
  char side = 'L';
  int lo = 1;  // thread runs from (anchor, side, lo) to (anchor, side, lo+1)
  std::vector<std::string> circles;
  std::vector<int> wire_indices;
};

// A blob is valid when the thread returns to the adjacent position on the
// same side of the anchor and every passage of every circle it visited lies
// on the thread (the cluster hangs on nothing else).
inline std::vector<Blob> find_blobs(const LevelWork& work) {
  std::vector<Blob> found;
  std::set<std::vector<std::string>> seen;
  std::vector<const SiteSpec*> order;
  for (const auto& s : work.sites) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](const SiteSpec* a, const SiteSpec* b) { return a->id < b->id; });
  for (const SiteSpec* s : order) {
    for (char side : {'L', 'R'}) {
      for (int j = 1; j < s->m; ++j) {
        BlobWalk bw = walk_thread(work, s->id, PortRef{s->id, side, j});
        if (!bw.closed || bw.circles.empty()) continue;
        if (bw.arrival.side != side || bw.arrival.pos != j + 1) continue;
        bool contained = true;
        for (const auto& id : bw.circles) {
          const SiteSpec* c = work.site(id);
          if (static_cast<int>(bw.passages[id].size()) != c->m) {
            contained = false;
            break;
          }
        }
        if (!contained) continue;
        std::sort(bw.circles.begin(), bw.circles.end());
        if (!seen.insert(bw.circles).second) continue;
        found.push_back(Blob{s->id, side, j, bw.circles, bw.wire_indices});
      }
    }
  }
  // Innermost first: smaller clusters peel before clusters that contain them.
  std::sort(found.begin(), found.end(), [](const Blob& a, const Blob& b) {
    if (a.circles.size() != b.circles.size()) return a.circles.size() < b.circles.size();
    if (a.circles != b.circles) return a.circles < b.circles;
    return std::tie(a.anchor, a.side, a.lo) < std::tie(b.anchor, b.side, b.lo);
  });
  return found;
}

// A circle whose disk is spanned entirely by one contracted core cap: the
// region between it and the deeper level is a product shell.
inline const SiteSpec* find_shell(const LevelWork& work, int* cap_index) {
  std::vector<const SiteSpec*> order;
  for (const auto& s : work.sites) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](const SiteSpec* a, const SiteSpec* b) { return a->id < b->id; });
  for (const SiteSpec* s : order) {
    if (s->m != 2) continue;
    for (size_t i = 0; i < work.wires.size(); ++i) {
      const CoreWire& w = work.wires[i];
      if (!w.core) continue;
      if (w.from.site != s->id || w.to.site != s->id) continue;
      if (w.from.side != w.to.side) continue;
      // Cap spans the full disk; the far side must lead elsewhere, or the
      // whole diagram is this shell and there is nothing left to peel.
      const char far = w.from.side == 'L' ? 'R' : 'L';
      const int wa = work.wire_at(PortRef{s->id, far, 1});
      const int wb = work.wire_at(PortRef{s->id, far, 2});
      if (wa < 0 || wb < 0 || wa == static_cast<int>(i) || wb == static_cast<int>(i)) continue;
      if (wa == wb) continue;  // far side closes on itself: single closed shell
      *cap_index = static_cast<int>(i);
      return s;
    }
  }
  return nullptr;
}

inline void erase_wires(LevelWork& work, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  for (auto it = idx.rbegin(); it != idx.rend(); ++it)
    work.wires.erase(work.wires.begin() + *it);
}

struct Analysis {
  std::vector<Level> levels;
  std::vector<ComponentClassification> classifications;
  std::vector<RawLevel> raw;  // by depth, same order as levels
};

// Peel the wiring inside-out.  Shell circles extract first so that nested
// blob-within-blob chains resolve one level at a time; the cluster holding
// the smallest id among blob members is treated as outermost and never
// peeled.
inline Analysis analyze_levels(const AugmentedLink& a, const FinalTwists& params) {
  const Wiring w = analyze_standard_form(a);
  LevelWork work;
  work.sites = w.sites;
  for (const auto& wi : w.wires) work.wires.push_back(CoreWire{wi.from, wi.to, false});

  std::vector<RawLevel> inner;  // innermost first
  std::set<std::string> used_caps;
  for (;;) {
    int cap_index = -1;
    if (const SiteSpec* shell = find_shell(work, &cap_index)) {
      const CoreWire cap = work.wires[cap_index];
      // Two shells must never claim the same contracted core.
      const bool fresh_cap = used_caps.insert(arc_str(cap)).second;
      assert(fresh_cap);
      (void)fresh_cap;
      const char far = cap.from.side == 'L' ? 'R' : 'L';
      const int wa = work.wire_at(PortRef{shell->id, far, 1});
      const int wb = work.wire_at(PortRef{shell->id, far, 2});
      const CoreWire in_w = work.wires[wa];
      const CoreWire out_w = work.wires[wb];
      RawLevel lvl;
      lvl.circles = {shell->id};
      lvl.arcs = {arc_str(in_w), arc_str(cap), arc_str(out_w)};
      lvl.collapsible = true;
      inner.push_back(lvl);
      // Splice the through-strand into one core wire joining the far ends.
      const std::string id = shell->id;
      const PortRef pa = (in_w.from.site == id) ? in_w.to : in_w.from;
      const PortRef pb = (out_w.from.site == id) ? out_w.to : out_w.from;
      const bool a_in = in_w.to.site == id;  // strand flows pa -> shell -> pb
      CoreWire joined = a_in ? CoreWire{pa, pb, true} : CoreWire{pb, pa, true};
      erase_wires(work, {cap_index, wa, wb});
      work.wires.push_back(joined);
      work.sites.erase(std::remove_if(work.sites.begin(), work.sites.end(),
                                      [&](const SiteSpec& s) { return s.id == id; }),
                       work.sites.end());
      continue;
    }

    std::vector<Blob> blobs = find_blobs(work);
    if (blobs.empty()) break;
    const auto disjoint = [](const Blob& x, const Blob& y) {
      for (const auto& id : x.circles)
        if (std::find(y.circles.begin(), y.circles.end(), id) != y.circles.end()) return false;
      return true;
    };
    // Two disjoint candidates are opposite ends of the nesting; the end
    // holding the smallest id stays outermost and everything overlapping it
    // is off limits.  A family with no disjoint pair is a single visible
    // chain end and peels from its smallest cluster.
    bool competition = false;
    for (size_t i = 0; i < blobs.size() && !competition; ++i)
      for (size_t j = i + 1; j < blobs.size() && !competition; ++j)
        competition = disjoint(blobs[i], blobs[j]);
    const Blob* pick = nullptr;
    if (!competition) {
      pick = &blobs.front();
    } else {
      std::string g = blobs.front().circles.front();
      for (const auto& b : blobs) g = std::min(g, b.circles.front());
      const Blob* guard = nullptr;
      for (const auto& b : blobs)
        if (std::find(b.circles.begin(), b.circles.end(), g) != b.circles.end()) {
          guard = &b;
          break;
        }
      for (const auto& b : blobs)
        if (disjoint(b, *guard)) {
          pick = &b;
          break;
        }
    }
    if (!pick) break;

    RawLevel lvl;
    lvl.circles = pick->circles;
    for (int wi : pick->wire_indices) lvl.arcs.push_back(arc_str(work.wires[wi]));
    inner.push_back(lvl);
    // Replace the thread by a tagged cap standing for the contracted core.
    const PortRef lo{pick->anchor, pick->side, pick->lo};
    const PortRef hi{pick->anchor, pick->side, pick->lo + 1};
    const CoreWire& first = work.wires[pick->wire_indices.front()];
    const CoreWire cap = (first.from == lo) ? CoreWire{lo, hi, true} : CoreWire{hi, lo, true};
    erase_wires(work, pick->wire_indices);
    const std::set<std::string> gone(pick->circles.begin(), pick->circles.end());
    work.sites.erase(std::remove_if(work.sites.begin(), work.sites.end(),
                                    [&](const SiteSpec& s) { return gone.count(s.id) > 0; }),
                     work.sites.end());
    work.wires.push_back(cap);
  }

  RawLevel outer;
  for (const auto& s : work.sites) outer.circles.push_back(s.id);
  std::sort(outer.circles.begin(), outer.circles.end());
  for (const auto& wi : work.wires) outer.arcs.push_back(arc_str(wi));
  std::sort(outer.arcs.begin(), outer.arcs.end());
  assert(!outer.circles.empty());

  Analysis out;
  out.raw.push_back(outer);
  for (auto it = inner.rbegin(); it != inner.rend(); ++it) out.raw.push_back(*it);

  // Classification; the wiring snapshot for the outer level is still `work`.
  for (size_t d = 0; d < out.raw.size(); ++d) {
    RawLevel& raw = out.raw[d];
    Level lvl;
    lvl.depth = static_cast<int>(d);
    lvl.circle_ids = raw.circles;
    lvl.core_strands = raw.arcs;
    lvl.t_i = static_cast<int>(raw.circles.size());

    ComponentClassification cls;
    cls.depth = lvl.depth;
    int min_c = 0;
    bool first_c = true;
    for (const auto& id : raw.circles) {
      for (const auto& s : w.sites) {
        if (s.id != id) continue;
        const int c = final_half_twists(s, params);
        if (first_c || c < min_c) min_c = c;
        first_c = false;
      }
    }
    cls.min_c = min_c;
    raw.min_c = min_c;
    if (raw.collapsible) {
      assert(raw.circles.size() == 1);
      cls.kind = LevelKind::T2xICollapsible;
    } else if (d == 0 && raw.circles.size() == 1) {
      // Seifert fibered: a lone outermost circle whose strands all run in
      // parallel through the disk and around (no crossings outside the
      // circle's own half-twist).
      bool parallel = true;
      for (const auto& cw : work.wires) {
        if (cw.from.site != raw.circles[0] || cw.to.site != raw.circles[0] ||
            cw.from.side == cw.to.side) {
          parallel = false;
          break;
        }
      }
      cls.kind = parallel ? LevelKind::SeifertFibered
                          : (min_c >= 6 ? LevelKind::HyperbolicCertified : LevelKind::Inconclusive);
    } else {
      cls.kind = min_c >= 6 ? LevelKind::HyperbolicCertified : LevelKind::Inconclusive;
    }
    assert(cls.kind != LevelKind::SeifertFibered || lvl.depth == 0);
    out.levels.push_back(lvl);
    out.classifications.push_back(cls);
  }
  return out;
}

}  // namespace detail

inline std::vector<Level> detect_levels(const AugmentedLink& a) {
  return detail::analyze_levels(a, {}).levels;
}

// Classify the level of `a` at the same depth as the given level.
inline ComponentClassification classify_component(const Level& level, const AugmentedLink& a) {
  const detail::Analysis an = detail::analyze_levels(a, {});
  for (const auto& cls : an.classifications)
    if (cls.depth == level.depth) return cls;
  throw Error("classify_component: no level at depth " + std::to_string(level.depth));
}

inline DecompositionReport jsj_report(const AugmentedLink& a, const FinalTwists& params = {}) {
  const detail::Analysis an = detail::analyze_levels(a, params);
  const Wiring sw = analyze_standard_form(a);
  DecompositionReport rep;
  rep.levels = an.levels;
  rep.classifications = an.classifications;

  std::vector<std::string> inconclusive;
  for (size_t d = 0; d < an.raw.size(); ++d) {
    const detail::RawLevel& raw = an.raw[d];
    const ComponentClassification& cls = an.classifications[d];
    if (cls.kind == LevelKind::T2xICollapsible) {
      ++rep.t0;
      continue;
    }
    rep.sublink_lhat.insert(rep.sublink_lhat.end(), raw.circles.begin(), raw.circles.end());
    JsjComponent comp;
    comp.depth = cls.depth;
    if (cls.kind == LevelKind::SeifertFibered) {
      const SiteSpec* s = nullptr;
      for (const auto& cand : sw.sites)
        if (cand.id == raw.circles[0]) s = &cand;
      long long q = s ? stored_half_twists({"", s->m, s->h, s->sign, s->n, {}}) : 0;
      if (params.overrides.count(raw.circles[0])) q = params.overrides.at(raw.circles[0]);
      if (s && s->m == 2) {
        std::ostringstream os;
        os << "(2," << q << ") torus " << (std::llabs(q) % 2 == 1 ? "knot" : "link");
        comp.type = os.str();
      } else {
        comp.type = "seifert fibered";
      }
      comp.certificate = to_string(Certificate::None);
    } else if (cls.kind == LevelKind::HyperbolicCertified) {
      comp.type = "hyperbolic";
      comp.certificate = to_string(certify_filling(cls.min_c));
    } else {
      std::string worst;
      for (const auto& s : sw.sites) {
        if (std::find(raw.circles.begin(), raw.circles.end(), s.id) == raw.circles.end()) continue;
        if (detail::final_half_twists(s, params) != cls.min_c) continue;
        if (worst.empty() || s.id < worst) worst = s.id;
      }
      std::ostringstream os;
      os << "inconclusive: circle " << worst << " has c=" << cls.min_c << " < 6";
      comp.type = os.str();
      comp.certificate = to_string(Certificate::None);
      inconclusive.push_back(worst);
    }
    rep.jsj.push_back(comp);
  }
  std::sort(rep.sublink_lhat.begin(), rep.sublink_lhat.end());
  rep.t = static_cast<int>(rep.sublink_lhat.size());
  std::sort(rep.jsj.begin(), rep.jsj.end(),
            [](const JsjComponent& x, const JsjComponent& y) { return x.depth < y.depth; });

  if (inconclusive.empty()) {
    std::ostringstream os;
    os << "jsj predicted: " << rep.jsj.size() << " component"
       << (rep.jsj.size() == 1 ? "" : "s") << ", " << rep.t0 << " collapsible level"
       << (rep.t0 == 1 ? "" : "s");
    rep.overall = os.str();
  } else {
    std::ostringstream os;
    os << "inconclusive: circle " << inconclusive.front() << " below the 6 half-twist threshold";
    rep.overall = os.str();
  }
  return rep;
}

}  // namespace twistkit
