#pragma once

// Twist-region detection and selection.
//
// A region on m strands with c half-twists is a sub-tangle whose crossings
// form a power of the m-strand half-twist pattern: each half-twist reads, in
// staircase order, s1, s2 s1, s3 s2 s1, ..., all crossings of one sign.
// Recognition walks a strand frontier through the diagram, consuming the
// staircase letter by letter; new strand positions are discovered lazily at
// each staircase step, so candidates of every width fall out of one search.
// Patterns hidden behind braid-relation rewrites are out of scope.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twistkit/diagram.hpp"
#include "twistkit/errors.hpp"

namespace twistkit {

struct TwistRegion {
  int id = 0;
  int m = 0;                                // strands across the ribbon
  long long c = 0;                          // signed half-twists, |c| = rounds
  std::vector<int> crossings;               // sorted crossing ids
  std::vector<int> entry;                   // frontier arcs before round 1 (ribbon order)
  std::vector<int> exit;                    // frontier arcs after the last round
  std::vector<std::vector<int>> rounds;     // crossings per round, consumption order
  std::vector<std::vector<int>> frontiers;  // frontier after each round; [0] == entry
};

struct SelectOptions {
  int k_max = 8;                      // widest frontier searched
  int exhaustive_crossing_limit = 24; // refuse exhaustive search above this
  long long node_cap = 500000;        // backtracking budget
  std::string objective = "max-min-half-twists";  // or "fewest-regions"
};

enum class SelectionStrategy { GreedyLargest, MaximizeMinHalfTwists, ExhaustiveEnumerate };

inline std::string to_string(SelectionStrategy s) {
  switch (s) {
    case SelectionStrategy::GreedyLargest: return "greedy-largest";
    case SelectionStrategy::MaximizeMinHalfTwists: return "maximize-min-half-twists";
    default: return "exhaustive-enumerate";
  }
}

inline SelectionStrategy selection_strategy(const std::string& name) {
  if (name == "greedy-largest") return SelectionStrategy::GreedyLargest;
  if (name == "maximize-min-half-twists") return SelectionStrategy::MaximizeMinHalfTwists;
  if (name == "exhaustive-enumerate") return SelectionStrategy::ExhaustiveEnumerate;
  throw Error("unknown selection strategy: " + name);
}

struct TwistSelection {
  std::vector<TwistRegion> regions;
  std::string strategy;
  long long min_abs_c = 0;  // the max-min objective value of this selection
};

namespace detail {

struct PairHit {
  int crossing = 0;  // 0 = none
  int slot_left = -1, slot_right = -1;
};

// Find an unconsumed allowed crossing where `left` and `right` occupy
// cyclically adjacent slots; lowest crossing id wins.  Only one of the two
// cyclic orders counts: the left arc must sit one slot past the right arc,
// the arrangement every emitted staircase letter uses.  The mirrored
// arrangement is the same crossing with the two positions swapped, so it is
// still found -- from the seed with the opposite order.
inline PairHit find_pair(const Analyzed& a, int left, int right, const std::set<int>& used,
                         const std::vector<char>& allowed) {
  PairHit best;
  if (left == right) return best;
  for (const ArcEnd& e : a.ends.at(left)) {
    const int cid = e.crossing;
    if (used.count(cid) || !allowed[cid]) continue;
    const auto& x = a.diagram.crossings[cid - 1].arcs;
    const int s2 = (e.slot + 3) % 4;
    if (x[s2] == right && (best.crossing == 0 || cid < best.crossing)) {
      best = {cid, e.slot, s2};
    }
  }
  return best;
}

struct ParseScratch {
  std::vector<int> frontier;
  std::set<int> used;
  int sign = 0;
};

// Optional attachment log: which crossing-end each ribbon position first
// entered through, and which end it last left through.
struct TouchRecorder {
  std::vector<char> touched;
  std::vector<ArcEnd> entry_ends, exit_ends;
  explicit TouchRecorder(int m) : touched(m, 0), entry_ends(m), exit_ends(m) {}
};

// Consume one staircase letter between frontier positions i, i+1 (1-based).
inline bool consume_letter(const Analyzed& a, ParseScratch& st, int i, std::vector<int>& order,
                           const std::vector<char>& allowed, TouchRecorder* rec = nullptr) {
  int& left = st.frontier[i - 1];
  int& right = st.frontier[i];
  const PairHit hit = find_pair(a, left, right, st.used, allowed);
  if (!hit.crossing) return false;
  const int csign = a.signs[hit.crossing - 1];
  if (st.sign == 0) st.sign = csign;
  if (csign != st.sign) return false;
  if (rec) {
    if (!rec->touched[i - 1]) {
      rec->touched[i - 1] = 1;
      rec->entry_ends[i - 1] = {hit.crossing, hit.slot_left};
    }
    if (!rec->touched[i]) {
      rec->touched[i] = 1;
      rec->entry_ends[i] = {hit.crossing, hit.slot_right};
    }
    rec->exit_ends[i - 1] = {hit.crossing, continuation_slot(hit.slot_right)};
    rec->exit_ends[i] = {hit.crossing, continuation_slot(hit.slot_left)};
  }
  const auto& x = a.diagram.crossings[hit.crossing - 1].arcs;
  const int new_left = x[continuation_slot(hit.slot_right)];
  const int new_right = x[continuation_slot(hit.slot_left)];
  left = new_left;
  right = new_right;
  st.used.insert(hit.crossing);
  order.push_back(hit.crossing);
  return true;
}

// One full half-twist on the current frontier: s1, s2 s1, ..., s(m-1)...s1.
inline bool consume_round(const Analyzed& a, ParseScratch& st, std::vector<int>& order,
                          const std::vector<char>& allowed, TouchRecorder* rec = nullptr) {
  const int m = static_cast<int>(st.frontier.size());
  for (int j = 1; j < m; ++j)
    for (int i = j; i >= 1; --i)
      if (!consume_letter(a, st, i, order, allowed, rec)) return false;
  return true;
}

// Greedily consume further whole rounds, then freeze a candidate.
inline void finish_candidate(const Analyzed& a, ParseScratch st, std::vector<std::vector<int>> rounds,
                             std::vector<std::vector<int>> frontiers, const std::vector<char>& allowed,
                             std::vector<TwistRegion>& out) {
  while (true) {
    ParseScratch back = st;
    std::vector<int> order;
    if (!consume_round(a, st, order, allowed)) {
      st = back;
      break;
    }
    rounds.push_back(order);
    frontiers.push_back(st.frontier);
  }
  TwistRegion r;
  r.m = static_cast<int>(st.frontier.size());
  r.c = static_cast<long long>(st.sign) * static_cast<long long>(rounds.size());
  r.crossings.assign(st.used.begin(), st.used.end());
  r.rounds = std::move(rounds);
  r.frontiers = std::move(frontiers);
  r.entry = r.frontiers.front();
  r.exit = r.frontiers.back();
  out.push_back(std::move(r));
}

// Depth-first widening: after round 1 of width m is consumed, either freeze
// (consume more full rounds) or discover strand m+1 and consume the next
// staircase block s_m ... s1.
inline void widen(const Analyzed& a, const ParseScratch& st, const std::vector<int>& round1,
                  const std::vector<int>& entry, int k_max, const std::vector<char>& allowed,
                  std::vector<TwistRegion>& out) {
  {
    ParseScratch frozen = st;
    finish_candidate(a, frozen, {round1}, {entry, st.frontier}, allowed, out);
  }
  const int m = static_cast<int>(st.frontier.size());
  if (m >= k_max) return;
  // candidates for the next strand: arcs meeting frontier[m] at an unused crossing
  std::set<int> tried;
  for (const ArcEnd& e : a.ends.at(st.frontier[m - 1])) {
    if (st.used.count(e.crossing) || !allowed[e.crossing]) continue;
    const auto& x = a.diagram.crossings[e.crossing - 1].arcs;
    for (int d : {1, 3}) {
      const int b = x[(e.slot + d) % 4];
      if (!tried.insert(b).second) continue;
      if (std::find(st.frontier.begin(), st.frontier.end(), b) != st.frontier.end()) continue;
      ParseScratch ext = st;
      ext.frontier.push_back(b);
      std::vector<int> order = round1;
      bool ok = true;
      for (int i = m; i >= 1 && ok; --i) ok = consume_letter(a, ext, i, order, allowed);
      if (!ok) continue;
      std::vector<int> wide_entry = entry;
      wide_entry.push_back(b);
      widen(a, ext, order, wide_entry, k_max, allowed, out);
    }
  }
}

inline void sort_and_number(std::vector<TwistRegion>& cands) {
  std::sort(cands.begin(), cands.end(), [](const TwistRegion& x, const TwistRegion& y) {
    if (x.crossings.front() != y.crossings.front()) return x.crossings.front() < y.crossings.front();
    if (x.m != y.m) return x.m < y.m;
    if (x.crossings != y.crossings) return x.crossings < y.crossings;
    return x.c < y.c;
  });
  for (size_t i = 0; i < cands.size(); ++i) cands[i].id = static_cast<int>(i) + 1;
}

inline void dedupe_exact(std::vector<TwistRegion>& cands) {
  std::set<std::pair<int, std::vector<int>>> seen;
  std::vector<TwistRegion> uniq;
  for (auto& r : cands)
    if (seen.insert({r.m, r.crossings}).second) uniq.push_back(std::move(r));
  cands = std::move(uniq);
}

inline void dedupe_and_maximalize(std::vector<TwistRegion>& cands) {
  dedupe_exact(cands);
  // drop candidates whose crossings are a strict subset of a same-width one
  std::vector<char> drop(cands.size(), 0);
  for (size_t i = 0; i < cands.size(); ++i) {
    for (size_t j = 0; j < cands.size(); ++j) {
      if (i == j || cands[j].m != cands[i].m) continue;
      if (cands[j].crossings.size() <= cands[i].crossings.size()) continue;
      if (std::includes(cands[j].crossings.begin(), cands[j].crossings.end(),
                        cands[i].crossings.begin(), cands[i].crossings.end())) {
        drop[i] = 1;
        break;
      }
    }
  }
  std::vector<TwistRegion> keep;
  for (size_t i = 0; i < cands.size(); ++i)
    if (!drop[i]) keep.push_back(std::move(cands[i]));
  cands = std::move(keep);
  sort_and_number(cands);
}

inline std::vector<TwistRegion> detect_in(const Analyzed& a, int k_max, const std::vector<char>& allowed) {
  std::vector<TwistRegion> out;
  const int n = static_cast<int>(a.diagram.crossings.size());
  for (int cid = 1; cid <= n; ++cid) {
    if (!allowed[cid]) continue;
    const auto& x = a.diagram.crossings[cid - 1].arcs;
    for (int s = 0; s < 4; ++s) {
      for (int order = 0; order < 2; ++order) {
        const int sl = order == 0 ? s : (s + 1) % 4;
        const int sr = order == 0 ? (s + 1) % 4 : s;
        if (x[sl] == x[sr]) continue;
        ParseScratch st;
        st.frontier = {x[sl], x[sr]};
        const std::vector<int> entry = st.frontier;
        std::vector<int> order1;
        if (!consume_letter(a, st, 1, order1, allowed)) continue;
        widen(a, st, order1, entry, k_max, allowed, out);
      }
    }
  }
  dedupe_and_maximalize(out);
  return out;
}

}  // namespace detail

// Maximal two-strand regions (bigon chains and lone crossings).
inline std::vector<TwistRegion> detect_twist_regions(const LinkDiagram& d) {
  const Analyzed a = analyze(d);
  std::vector<char> allowed(d.crossings.size() + 1, 1);
  auto all = detail::detect_in(a, 2, allowed);
  return all;
}

// Regions of every width up to k_max; overlapping candidates all reported.
inline std::vector<TwistRegion> detect_generalized_regions(const LinkDiagram& d, int k_max = 8) {
  const Analyzed a = analyze(d);
  std::vector<char> allowed(d.crossings.size() + 1, 1);
  return detail::detect_in(a, k_max, allowed);
}

// Replay a claimed region against the diagram: parses from its entry frontier
// restricted to its own crossings and must reproduce it exactly.
inline bool verify_region(const LinkDiagram& d, const TwistRegion& r) {
  const Analyzed a = analyze(d);
  if (r.m < 2 || r.c == 0) return false;
  if (static_cast<long long>(r.crossings.size()) !=
      std::abs(r.c) * (static_cast<long long>(r.m) * (r.m - 1) / 2))
    return false;
  std::vector<char> allowed(d.crossings.size() + 1, 0);
  for (int cid : r.crossings) {
    if (cid < 1 || cid > static_cast<int>(d.crossings.size())) return false;
    allowed[cid] = 1;
  }
  detail::ParseScratch st;
  st.frontier = r.entry;
  for (long long round = 0; round < std::llabs(r.c); ++round) {
    std::vector<int> order;
    if (!detail::consume_round(a, st, order, allowed)) return false;
  }
  if (st.frontier != r.exit) return false;
  if (st.sign != (r.c > 0 ? 1 : -1)) return false;
  std::vector<int> consumed(st.used.begin(), st.used.end());
  if (consumed != r.crossings) return false;
  for (int cid : r.crossings)
    if (a.signs[cid - 1] != st.sign) return false;
  return true;
}

namespace detail {

// Contiguous round ranges of each candidate, plus the candidates themselves:
// the pool an exact-cover search works over.
inline std::vector<TwistRegion> expand_subruns(const std::vector<TwistRegion>& cands) {
  std::vector<TwistRegion> pool;
  for (const auto& r : cands) {
    const int total = static_cast<int>(r.rounds.size());
    for (int lo = 0; lo < total; ++lo) {
      for (int hi = lo + 1; hi <= total; ++hi) {
        TwistRegion sub;
        sub.m = r.m;
        sub.c = (r.c > 0 ? 1 : -1) * static_cast<long long>(hi - lo);
        std::set<int> cs;
        for (int k = lo; k < hi; ++k) cs.insert(r.rounds[k].begin(), r.rounds[k].end());
        sub.crossings.assign(cs.begin(), cs.end());
        sub.rounds.assign(r.rounds.begin() + lo, r.rounds.begin() + hi);
        sub.frontiers.assign(r.frontiers.begin() + lo, r.frontiers.begin() + hi + 1);
        sub.entry = sub.frontiers.front();
        sub.exit = sub.frontiers.back();
        pool.push_back(std::move(sub));
      }
    }
  }
  dedupe_exact(pool);
  sort_and_number(pool);
  return pool;
}

inline long long min_abs_c(const std::vector<TwistRegion>& regions) {
  long long v = 0;
  for (const auto& r : regions) {
    const long long ac = std::llabs(r.c);
    if (v == 0 || ac < v) v = ac;
  }
  return v;
}

// Signature used to break ties between equally good selections.
inline std::vector<long long> selection_signature(const std::vector<TwistRegion>& regions) {
  std::vector<long long> sig;
  for (const auto& r : regions) {
    sig.push_back(r.crossings.front());
    sig.push_back(r.m);
    sig.push_back(r.c);
    for (int cid : r.crossings) sig.push_back(cid);
    sig.push_back(-1);
  }
  return sig;
}

struct CoverSearch {
  const std::vector<TwistRegion>* pool = nullptr;
  std::vector<std::vector<int>> by_crossing;  // crossing id -> pool indices touching it
  int n = 0;
  long long nodes = 0, node_cap = 0;

  void build(const std::vector<TwistRegion>& p, int crossing_count, long long cap) {
    pool = &p;
    n = crossing_count;
    node_cap = cap;
    by_crossing.assign(n + 1, {});
    for (size_t i = 0; i < p.size(); ++i)
      for (int cid : p[i].crossings) by_crossing[cid].push_back(static_cast<int>(i));
  }

  // Visit every exact cover; `admit` filters pool entries, `sink` receives each
  // complete cover (as pool indices) and returns false to stop the search.
  template <class Admit, class Sink>
  bool enumerate(const Admit& admit, const Sink& sink) {
    std::vector<char> covered(n + 1, 0);
    std::vector<int> chosen;
    return walk(1, covered, chosen, admit, sink);
  }

  template <class Admit, class Sink>
  bool walk(int from, std::vector<char>& covered, std::vector<int>& chosen, const Admit& admit,
            const Sink& sink) {
    if (++nodes > node_cap)
      throw ExhaustiveTooLarge("selection search exceeded its node budget; raise the limit to force it");
    int cid = from;
    while (cid <= n && covered[cid]) ++cid;
    if (cid > n) return sink(chosen);
    for (int idx : by_crossing[cid]) {
      const TwistRegion& r = (*pool)[idx];
      if (!admit(r)) continue;
      bool clash = false;
      for (int c2 : r.crossings)
        if (covered[c2]) { clash = true; break; }
      if (clash) continue;
      for (int c2 : r.crossings) covered[c2] = 1;
      chosen.push_back(idx);
      const bool keep_going = walk(cid + 1, covered, chosen, admit, sink);
      chosen.pop_back();
      for (int c2 : r.crossings) covered[c2] = 0;
      if (!keep_going) return false;
    }
    return true;
  }
};

}  // namespace detail

// Pick a set of disjoint regions covering every crossing of the diagram.
inline TwistSelection select_maximal(const LinkDiagram& d, const std::vector<TwistRegion>& candidates,
                                     SelectionStrategy strategy, const SelectOptions& opt = {}) {
  const Analyzed a = analyze(d);
  const int n = static_cast<int>(d.crossings.size());
  TwistSelection sel;
  sel.strategy = to_string(strategy);
  if (n == 0) return sel;

  const auto greedy_rank = [](const TwistRegion& x, const TwistRegion& y) {
    if (std::llabs(x.c) != std::llabs(y.c)) return std::llabs(x.c) > std::llabs(y.c);
    if (x.m != y.m) return x.m > y.m;
    return x.id < y.id;
  };

  if (strategy == SelectionStrategy::GreedyLargest) {
    std::vector<char> covered(n + 1, 0);
    int left = n;
    std::vector<TwistRegion> pool = candidates;
    std::sort(pool.begin(), pool.end(), greedy_rank);
    while (left > 0) {
      int accepted = 0;
      for (const auto& r : pool) {
        bool clash = false;
        for (int cid : r.crossings)
          if (covered[cid]) { clash = true; break; }
        if (clash) continue;
        sel.regions.push_back(r);
        for (int cid : r.crossings) covered[cid] = 1;
        left -= static_cast<int>(r.crossings.size());
        ++accepted;
      }
      if (left == 0) break;
      // chains may have been cut by earlier picks: re-detect among what's left
      std::vector<char> allowed(n + 1, 0);
      for (int cid = 1; cid <= n; ++cid) allowed[cid] = !covered[cid];
      pool = detail::detect_in(a, opt.k_max, allowed);
      std::sort(pool.begin(), pool.end(), greedy_rank);
      if (pool.empty() && accepted == 0)
        throw Error("greedy selection could not cover every crossing");  // unreachable: lone crossings always parse
    }
  } else {
    if (n > opt.exhaustive_crossing_limit || n > 64)
      throw ExhaustiveTooLarge("diagram has " + std::to_string(n) +
                               " crossings, above the exhaustive-search limit of " +
                               std::to_string(std::min(opt.exhaustive_crossing_limit, 64)));
    std::vector<TwistRegion> pool = detail::expand_subruns(candidates);
    detail::CoverSearch search;
    search.build(pool, n, opt.node_cap);

    if (strategy == SelectionStrategy::MaximizeMinHalfTwists) {
      std::set<long long, std::greater<long long>> thetas;
      for (const auto& r : pool) thetas.insert(std::llabs(r.c));
      thetas.insert(1);
      for (long long theta : thetas) {
        std::vector<int> found;
        search.enumerate(
            [&](const TwistRegion& r) { return std::llabs(r.c) >= theta; },
            [&](const std::vector<int>& chosen) {
              found = chosen;
              return false;  // first cover at this threshold wins
            });
        if (!found.empty()) {
          for (int idx : found) sel.regions.push_back(pool[idx]);
          break;
        }
      }
    } else {  // ExhaustiveEnumerate
      const bool fewest = opt.objective == "fewest-regions";
      if (!fewest && opt.objective != "max-min-half-twists")
        throw Error("unknown objective: " + opt.objective);
      bool have = false;
      long long best_min = 0;
      size_t best_count = 0;
      std::vector<long long> best_sig;
      std::vector<int> best;
      search.enumerate(
          [](const TwistRegion&) { return true; },
          [&](const std::vector<int>& chosen) {
            std::vector<TwistRegion> regs;
            for (int idx : chosen) regs.push_back(pool[idx]);
            std::sort(regs.begin(), regs.end(), [](const TwistRegion& x, const TwistRegion& y) {
              return x.crossings.front() < y.crossings.front();
            });
            const long long mc = detail::min_abs_c(regs);
            const auto sig = detail::selection_signature(regs);
            bool better;
            if (!have) {
              better = true;
            } else if (fewest) {
              if (regs.size() != best_count) better = regs.size() < best_count;
              else if (mc != best_min) better = mc > best_min;
              else better = sig < best_sig;
            } else {
              if (mc != best_min) better = mc > best_min;
              else if (regs.size() != best_count) better = regs.size() < best_count;
              else better = sig < best_sig;
            }
            if (better) {
              have = true;
              best_min = mc;
              best_count = regs.size();
              best_sig = sig;
              best = chosen;
            }
            return true;
          });
      if (!have) throw EmptySelection("no exact cover exists over the candidate pool");
      for (int idx : best) sel.regions.push_back(pool[idx]);
    }
    if (sel.regions.empty()) throw EmptySelection("no exact cover exists over the candidate pool");
  }

  std::sort(sel.regions.begin(), sel.regions.end(), [](const TwistRegion& x, const TwistRegion& y) {
    return x.crossings.front() < y.crossings.front();
  });
  for (size_t i = 0; i < sel.regions.size(); ++i) sel.regions[i].id = static_cast<int>(i) + 1;
  sel.min_abs_c = detail::min_abs_c(sel.regions);

  // a selection is a partition of the crossing set
  std::set<int> seen;
  long long total = 0;
  for (const auto& r : sel.regions) {
    total += std::llabs(r.c) * (static_cast<long long>(r.m) * (r.m - 1) / 2);
    for (int cid : r.crossings) seen.insert(cid);
  }
  if (static_cast<int>(seen.size()) != n || total != n)
    throw Error("internal: selection is not a partition of the crossings");
  return sel;
}

// Detection plus selection in one call.
inline TwistSelection detect_and_select(const LinkDiagram& d, SelectionStrategy strategy,
                                        const SelectOptions& opt = {}) {
  return select_maximal(d, detect_generalized_regions(d, opt.k_max), strategy, opt);
}

}  // namespace twistkit
