#pragma once

// Independent brute-force oracles used by the test suites. These deliberately
// avoid the library's own algorithms: subgroups come from closing small
// generating sets, conjugacy from exhaustive conjugation.

#include <algorithm>
#include <set>
#include <vector>

#include "grpcert/group.hpp"
#include "grpcert/subgroups.hpp"

namespace oracles {

using grpcert::ElementSet;
using grpcert::FiniteGroup;
using grpcert::GroupPtr;

inline ElementSet close_set(const FiniteGroup& g, std::vector<int> gens) {
  ElementSet s(g.order());
  s.set(0);
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int h : gens) {
        int y = g.mul(x, h);
        if (!s.test(y)) {
          s.set(y);
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  return s;
}

// All subgroups reachable as closures of generating sets of size <= 3,
// together with the whole group: level k holds the closures of the level
// (k-1) generating sets extended by one element, deduplicated per level.
// Complete whenever every proper subgroup is 3-generated (true for the
// rank <= 3 groups this suite sweeps).
inline std::set<ElementSet> subgroups_by_closure(const FiniteGroup& g) {
  const int n = g.order();
  std::set<ElementSet> out;
  out.insert(close_set(g, {}));
  std::vector<std::pair<ElementSet, std::vector<int>>> level = {
      {close_set(g, {}), {}}};
  for (int depth = 1; depth <= 3; ++depth) {
    std::set<ElementSet> seen;
    std::vector<std::pair<ElementSet, std::vector<int>>> next;
    for (const auto& [set, gens] : level)
      for (int x = 1; x < n; ++x) {
        if (set.test(x)) continue;
        std::vector<int> g2 = gens;
        g2.push_back(x);
        ElementSet s = close_set(g, g2);
        if (seen.insert(s).second) next.push_back({s, g2});
      }
    for (const auto& [set, gens] : next) out.insert(set);
    level = std::move(next);
  }
  ElementSet whole(n);
  for (int x = 0; x < n; ++x) whole.set(x);
  out.insert(whole);
  return out;
}

// Conjugacy classes by raw exhaustive conjugation (no least-index logic).
inline std::vector<std::set<int>> classes_by_conjugation(const FiniteGroup& g) {
  std::vector<std::set<int>> out;
  std::vector<char> seen(g.order(), 0);
  for (int x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    std::set<int> orbit;
    for (int a = 0; a < g.order(); ++a) {
      int y = g.mul(g.mul(a, x), g.inv(a));
      orbit.insert(y);
      seen[y] = 1;
    }
    out.push_back(std::move(orbit));
  }
  return out;
}

}  // namespace oracles
