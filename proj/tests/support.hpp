#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qbdst/instance.hpp"
#include "qbdst/moats.hpp"

namespace qbdst::testing {

// r=1, t=2, arc r->t cost 5.
inline Instance single_arc() { return parse_instance("NODES 2\nROOT 1\nTERMINALS 2\nARC 1 2 5\nEND\n"); }

// Nodes r=1, t1=2, t2=3 and an isolated Steiner node 4. Arcs a1=(r->t1,3),
// a2=(r->t2, c2), a3=(t2->t1,1), a4=(t1->t2,1).
inline Instance four_node(int c2 = 3) {
  return Instance(4, 0, {1, 2},
                  {{0, 1, Rational(3)}, {0, 2, Rational(c2)}, {2, 1, Rational(1)}, {1, 2, Rational(1)}});
}

// Random quasi-bipartite instance: node 0 is the root, every other node is a
// terminal with probability 1/2 (at least one terminal). Arcs are drawn between
// distinct nodes, never Steiner to Steiner, with integer costs in [0, max_cost].
// With `feasible`, missing root reachability is patched by root->t arcs.
inline Instance random_instance(std::uint64_t seed, int n, int arc_target, int max_cost, bool feasible) {
  std::mt19937_64 rng(seed);
  std::vector<NodeId> terminals;
  for (int v = 1; v < n; ++v) {
    if (rng() % 2) terminals.push_back(v);
  }
  if (terminals.empty()) terminals.push_back(1 + static_cast<int>(rng() % (n - 1)));
  std::vector<bool> is_term(n, false);
  for (NodeId t : terminals) is_term[t] = true;
  auto steiner = [&](NodeId v) { return v != 0 && !is_term[v]; };

  std::vector<Arc> arcs;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  for (int tries = 0; tries < arc_target * 4 && static_cast<int>(arcs.size()) < arc_target; ++tries) {
    NodeId u = static_cast<NodeId>(rng() % n), v = static_cast<NodeId>(rng() % n);
    if (u == v || used[u][v] || (steiner(u) && steiner(v))) continue;
    used[u][v] = true;
    arcs.push_back({u, v, Rational(static_cast<long>(rng() % (max_cost + 1)))});
  }
  Instance inst(n, 0, terminals, arcs);
  if (!feasible) return inst;
  auto seen = reachable_from_root(inst, std::vector<bool>(arcs.size(), true));
  for (NodeId t : terminals) {
    if (!seen[t] && !used[0][t]) {
      arcs.push_back({0, t, Rational(static_cast<long>(1 + rng() % (max_cost + 1)))});
      used[0][t] = true;
    }
  }
  return Instance(n, 0, terminals, arcs);
}

inline ArcSet random_arc_set(const Instance& inst, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ArcSet F = empty_arc_set(inst);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] = rng() % 3 == 0;
  return F;
}

}  // namespace qbdst::testing
