#pragma once

// Braid-word closures as diagram sources. A word is a list of nonzero letters:
// letter +i crosses strand i over strand i+1, letter -i crosses it under.
// All strands run downward; the closure joins each bottom end to its top end.
//
// Slot bookkeeping for a crossing between positions i (left) and i+1 (right),
// both strands heading down, counterclockwise from the incoming under-strand:
//   positive letter: under enters NE -> X(right_in, left_in, down_left, down_right)
//   negative letter: under enters NW -> X(left_in, down_left, down_right, right_in)
// which makes the computed sign equal the letter's sign.

#include <map>
#include <string>
#include <vector>

#include "twistkit/diagram.hpp"
#include "twistkit/errors.hpp"

namespace twistkit {

inline LinkDiagram braid_closure(int strands, const std::vector<int>& word) {
  if (strands < 2) throw MalformedSyntax("braid_closure: need at least 2 strands");
  std::vector<int> touched(strands, 0);
  for (int letter : word) {
    const int i = letter > 0 ? letter : -letter;
    if (i < 1 || i >= strands) throw MalformedSyntax("braid_closure: letter out of range: " + std::to_string(letter));
    touched[i - 1] = touched[i] = 1;
  }
  for (int j = 0; j < strands; ++j)
    if (!touched[j])
      throw SplitDiagramError("braid_closure: strand " + std::to_string(j + 1) + " crosses nothing");

  LinkDiagram d;
  std::vector<int> pos(strands);  // current arc at each position
  int next_arc = strands;
  for (int j = 0; j < strands; ++j) pos[j] = j + 1;

  for (int letter : word) {
    const int i = (letter > 0 ? letter : -letter) - 1;
    const int left = pos[i], right = pos[i + 1];
    const int down_left = ++next_arc, down_right = ++next_arc;
    Crossing x;
    if (letter > 0) {
      x.arcs = {right, left, down_left, down_right};
    } else {
      x.arcs = {left, down_left, down_right, right};
    }
    d.crossings.push_back(x);
    pos[i] = down_left;
    pos[i + 1] = down_right;
  }

  // closure: bottom arc of each position is the top arc again
  std::map<int, int> rename;
  for (int j = 0; j < strands; ++j)
    if (pos[j] != j + 1) rename[pos[j]] = j + 1;
  for (auto& x : d.crossings)
    for (int s = 0; s < 4; ++s)
      if (auto it = rename.find(x.arcs[s]); it != rename.end()) x.arcs[s] = it->second;

  // compact arc ids to 1..E keeping order
  std::map<int, int> compact;
  for (const auto& x : d.crossings)
    for (int s = 0; s < 4; ++s) compact.emplace(x.arcs[s], 0);
  int k = 0;
  for (auto& [arc, to] : compact) to = ++k;
  for (auto& x : d.crossings)
    for (int s = 0; s < 4; ++s) x.arcs[s] = compact.at(x.arcs[s]);
  return d;
}

// The m-strand half-twist as a staircase word: s1, s2 s1, ..., s(m-1) ... s1.
inline std::vector<int> half_twist_word(int m, int sign = +1) {
  std::vector<int> w;
  for (int j = 1; j < m; ++j)
    for (int i = j; i >= 1; --i) w.push_back(sign > 0 ? i : -i);
  return w;
}

inline std::vector<int> half_twist_power_word(int m, int count, int sign = +1) {
  std::vector<int> w, one = half_twist_word(m, sign);
  for (int r = 0; r < count; ++r) w.insert(w.end(), one.begin(), one.end());
  return w;
}

}  // namespace twistkit
