#pragma once

// Diagram reduction at the wiring level.
//
// Three moves, each an isotopy of the augmented link:
//  - remove-trivial-circle: a circle crossed by at most one strand constrains
//    nothing; delete it and splice the strand through.
//  - extract-strands: a strand that u-turns straight back out through the
//    neighbouring position pierces the disk twice with zero net crossing;
//    pull the pair out.  Through a residual half twist this is a flype.
//  - concatenate-parallel-circles: two circles joined by a complete
//    position-preserving bundle of wires bound a product region; merge them
//    and add their stored twisting.
//
// Detection is face-local and sound, not complete: only u-turns along a
// single wire and directly wired parallel pairs are recognized, so the final
// status reads "reduced (detected moves exhausted)" rather than claiming
// global minimality.  Every application re-emits and re-validates the
// diagram, so a bad move can never produce an unsound wiring.

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "twistkit/augment.hpp"
#include "twistkit/errors.hpp"

namespace twistkit {

enum class MoveKind { RemoveTrivialCircle, ExtractStrands, ConcatenateParallelCircles };

inline const char* move_name(MoveKind k) {
  switch (k) {
    case MoveKind::RemoveTrivialCircle: return "remove-trivial-circle";
    case MoveKind::ExtractStrands: return "extract-strands";
    case MoveKind::ConcatenateParallelCircles: return "concatenate-parallel-circles";
  }
  return "?";
}

struct Reduction {
  MoveKind kind = MoveKind::RemoveTrivialCircle;
  std::string circle;   // the circle acted on; for concatenation, the upstream one
  std::string other;    // concatenation partner
  char side = 'L';      // extraction: side carrying the u-turn
  int position = 0;     // extraction: lower of the two adjacent positions
  bool flype = false;   // extraction passed through a residual half twist
  std::string note;
};

namespace detail {

inline const SiteSpec* site_of(const Wiring& w, const std::string& id) {
  for (const auto& s : w.sites)
    if (s.id == id) return &s;
  return nullptr;
}

// wire index whose from/to touches the port; -1 if none
inline int wire_at_port(const std::vector<Wire>& wires, const PortRef& p) {
  for (size_t i = 0; i < wires.size(); ++i)
    if (wires[i].from == p || wires[i].to == p) return static_cast<int>(i);
  return -1;
}

// true when every R port of `a` runs by a single wire to the L port of `b`
// at the same position
inline bool parallel_bundle(const Wiring& w, const SiteSpec& a, const SiteSpec& b) {
  if (a.id == b.id || a.m != b.m || a.m < 1) return false;
  for (int i = 1; i <= a.m; ++i) {
    const PortRef ra{a.id, 'R', i}, lb{b.id, 'L', i};
    const int wi = wire_at_port(w.wires, ra);
    if (wi < 0) return false;
    const Wire& x = w.wires[wi];
    if (!((x.from == ra && x.to == lb) || (x.from == lb && x.to == ra))) return false;
  }
  return true;
}

inline std::string describe(const Reduction& r) {
  std::ostringstream os;
  os << move_name(r.kind) << " " << r.circle;
  if (r.kind == MoveKind::ExtractStrands)
    os << " at " << r.side << r.position << "-" << r.side << (r.position + 1)
       << (r.flype ? " (flype through the half twist)" : "");
  if (r.kind == MoveKind::ConcatenateParallelCircles) os << " + " << r.other;
  return os.str();
}

}  // namespace detail

// All applicable moves, in deterministic application order: removals first,
// then extractions, then concatenations; ties by circle id and position.
inline std::vector<Reduction> find_reductions(const Wiring& w) {
  std::vector<Reduction> out;

  for (const auto& s : w.sites) {
    if (s.m > 1) continue;
    if (s.m == 1) {
      // splicing must not cut loose a closed loop (single wire L1 - R1)
      const int wl = detail::wire_at_port(w.wires, {s.id, 'L', 1});
      const int wr = detail::wire_at_port(w.wires, {s.id, 'R', 1});
      if (wl >= 0 && wl == wr) continue;
    }
    Reduction r;
    r.kind = MoveKind::RemoveTrivialCircle;
    r.circle = s.id;
    r.note = detail::describe(r);
    out.push_back(r);
  }

  for (const auto& wire : w.wires) {
    if (wire.from.site != wire.to.site || wire.from.side != wire.to.side) continue;
    if (std::abs(wire.from.pos - wire.to.pos) != 1) continue;
    const SiteSpec* s = detail::site_of(w, wire.from.site);
    if (!s) continue;
    const int j = std::min(wire.from.pos, wire.to.pos);
    // the facing ports, through the permutation of the residual twisting
    const int a = detail::rev_perm(s->m, s->h, j);
    const int b = detail::rev_perm(s->m, s->h, j + 1);
    const char o = wire.from.side == 'L' ? 'R' : 'L';
    const int wa = detail::wire_at_port(w.wires, {s->id, o, a});
    const int wb = detail::wire_at_port(w.wires, {s->id, o, b});
    if (wa < 0 || wb < 0 || wa == wb) continue;  // both-side u-turn frees a loop
    Reduction r;
    r.kind = MoveKind::ExtractStrands;
    r.circle = s->id;
    r.side = wire.from.side;
    r.position = j;
    r.flype = s->h == 1;
    r.note = detail::describe(r);
    out.push_back(r);
  }

  for (const auto& a : w.sites) {
    for (const auto& b : w.sites) {
      if (!detail::parallel_bundle(w, a, b)) continue;
      // a closed two-circle chain is parallel on both sides; that is one
      // merge, not two, so keep only the listing with the smaller upstream id
      if (detail::parallel_bundle(w, b, a) && b.id < a.id) continue;
      Reduction r;
      r.kind = MoveKind::ConcatenateParallelCircles;
      r.circle = a.id;
      r.other = b.id;
      r.note = detail::describe(r);
      out.push_back(r);
    }
  }

  std::sort(out.begin(), out.end(), [](const Reduction& x, const Reduction& y) {
    if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind);
    if (x.circle != y.circle) return x.circle < y.circle;
    if (x.position != y.position) return x.position < y.position;
    if (x.side != y.side) return x.side < y.side;
    return x.other < y.other;
  });
  return out;
}

inline std::vector<Reduction> find_reductions(const AugmentedLink& a) {
  return find_reductions(analyze_standard_form(a));
}

namespace detail {

inline void renumber_ports(std::vector<Wire>& wires, const std::string& site, char side,
                           int removed_low) {
  for (auto& w : wires)
    for (PortRef* p : {&w.from, &w.to})
      if (p->site == site && p->side == side && p->pos > removed_low + 1) p->pos -= 2;
}

}  // namespace detail

// Apply one move structurally, then rebuild and re-analyze so the result is
// canonical and validated.
inline Wiring apply_reduction(const Wiring& w, const Reduction& r) {
  std::vector<SiteSpec> sites = w.sites;
  std::vector<Wire> wires = w.wires;
  const auto find_site = [&](const std::string& id) -> std::vector<SiteSpec>::iterator {
    for (auto it = sites.begin(); it != sites.end(); ++it)
      if (it->id == id) return it;
    throw MoveNotApplicable("no circle named " + id);
  };

  if (r.kind == MoveKind::RemoveTrivialCircle) {
    auto it = find_site(r.circle);
    if (it->m > 1)
      throw MoveNotApplicable(r.circle + " still carries " + std::to_string(it->m) +
                              " strands");
    if (it->m == 1) {
      const PortRef lp{it->id, 'L', 1}, rp{it->id, 'R', 1};
      const int wl = detail::wire_at_port(wires, lp), wr = detail::wire_at_port(wires, rp);
      if (wl < 0 || wr < 0 || wl == wr)
        throw MoveNotApplicable("splicing " + r.circle + " away would free a closed loop");
      const Wire a = wires[wl], b = wires[wr];
      const Wire joined = a.to == lp || a.to == rp ? Wire{a.from, b.to} : Wire{b.from, a.to};
      std::vector<Wire> next;
      for (size_t i = 0; i < wires.size(); ++i)
        if (static_cast<int>(i) != wl && static_cast<int>(i) != wr) next.push_back(wires[i]);
      next.push_back(joined);
      wires = std::move(next);
    }
    sites.erase(it);
  } else if (r.kind == MoveKind::ExtractStrands) {
    auto it = find_site(r.circle);
    const int j = r.position;
    int uturn = -1;
    for (size_t i = 0; i < wires.size(); ++i) {
      const Wire& x = wires[i];
      if (x.from.site == r.circle && x.to.site == r.circle && x.from.side == r.side &&
          x.to.side == r.side && std::min(x.from.pos, x.to.pos) == j &&
          std::max(x.from.pos, x.to.pos) == j + 1)
        uturn = static_cast<int>(i);
    }
    if (uturn < 0)
      throw MoveNotApplicable("no u-turn at " + r.circle + " " + r.side + std::to_string(j));
    const char o = r.side == 'L' ? 'R' : 'L';
    const int a = detail::rev_perm(it->m, it->h, j);
    const int b = detail::rev_perm(it->m, it->h, j + 1);
    const int low = std::min(a, b);
    const PortRef pa{r.circle, o, a}, pb{r.circle, o, b};
    const int wa = detail::wire_at_port(wires, pa), wb = detail::wire_at_port(wires, pb);
    if (wa < 0 || wb < 0) throw MoveNotApplicable("facing ports of the u-turn are unwired");
    if (wa == wb) throw MoveNotApplicable("extraction would free a closed loop");
    const bool a_in = wires[wa].to == pa;
    const bool b_in = wires[wb].to == pb;
    if (a_in == b_in) throw MoveNotApplicable("u-turn strands flow inconsistently");
    const Wire joined = a_in ? Wire{wires[wa].from, wires[wb].to}
                             : Wire{wires[wb].from, wires[wa].to};
    std::vector<Wire> next;
    for (size_t i = 0; i < wires.size(); ++i)
      if (static_cast<int>(i) != uturn && static_cast<int>(i) != wa &&
          static_cast<int>(i) != wb)
        next.push_back(wires[i]);
    next.push_back(joined);
    wires = std::move(next);
    detail::renumber_ports(wires, r.circle, r.side, j);
    detail::renumber_ports(wires, r.circle, o, low);
    it->m -= 2;
    if (static_cast<int>(it->disk_order.size()) == it->m + 2) {
      const int dl = r.side == 'L' ? j : low;  // positions leaving the over side
      it->disk_order.erase(it->disk_order.begin() + (dl - 1),
                           it->disk_order.begin() + (dl + 1));
    } else {
      it->disk_order.clear();
    }
    if (it->m == 0) sites.erase(it);
  } else {
    auto ita = find_site(r.circle);
    auto itb = find_site(r.other);
    if (ita->id == itb->id) throw MoveNotApplicable("cannot merge a circle with itself");
    if (!detail::parallel_bundle(w, *ita, *itb))
      throw MoveNotApplicable("circles are not joined by a parallel bundle");
    const int m = ita->m;
    std::set<int> matched;
    for (int i = 1; i <= m; ++i)
      matched.insert(detail::wire_at_port(wires, {r.circle, 'R', i}));
    const long long total =
        stored_half_twists({"", ita->m, ita->h, ita->sign, ita->n, {}}) +
        stored_half_twists({"", itb->m, itb->h, itb->sign, itb->n, {}});
    const HalfTwistSplit hs = split_half_twists(total);
    // the smaller id survives; the merged column keeps the upstream disk order
    SiteSpec merged;
    merged.id = std::min(r.circle, r.other);
    merged.m = m;
    merged.h = hs.h;
    merged.sign = hs.sign;
    merged.n = hs.n;
    merged.disk_order = ita->disk_order;
    std::vector<Wire> next;
    for (size_t i = 0; i < wires.size(); ++i)
      if (!matched.count(static_cast<int>(i))) next.push_back(wires[i]);
    for (auto& x : next)  // only `circle` L ports and `other` R ports remain
      for (PortRef* p : {&x.from, &x.to})
        if (p->site == r.circle || p->site == r.other) p->site = merged.id;
    wires = std::move(next);
    std::vector<SiteSpec> kept;
    for (const auto& s : sites)
      if (s.id != r.circle && s.id != r.other) kept.push_back(s);
    kept.push_back(merged);
    sites = std::move(kept);
  }

  if (sites.empty()) throw MoveNotApplicable("reduction would empty the diagram");
  const AugmentedLink rebuilt = build_augmented(sites, wires);
  return analyze_standard_form(rebuilt);
}

inline AugmentedLink apply_reduction(const AugmentedLink& a, const Reduction& r) {
  const Wiring next = apply_reduction(analyze_standard_form(a), r);
  return build_augmented(next.sites, next.wires);
}

struct ReductionReport {
  AugmentedLink input;
  AugmentedLink output;
  Wiring wiring;  // canonical wiring of the output
  std::vector<Reduction> moves;
  bool reduced = false;
  std::string status;
};

inline ReductionReport reduce_fully(const AugmentedLink& a) {
  ReductionReport rep;
  rep.input = a;
  rep.wiring = analyze_standard_form(a);
  while (true) {
    const std::vector<Reduction> moves = find_reductions(rep.wiring);
    if (moves.empty()) break;
    rep.wiring = apply_reduction(rep.wiring, moves.front());
    rep.moves.push_back(moves.front());
  }
  rep.output = build_augmented(rep.wiring.sites, rep.wiring.wires);
  rep.reduced = true;
  rep.status = "reduced (detected moves exhausted)";
  return rep;
}

inline ReductionReport reduce_fully(const Wiring& w) {
  return reduce_fully(build_augmented(w.sites, w.wires));
}

}  // namespace twistkit
