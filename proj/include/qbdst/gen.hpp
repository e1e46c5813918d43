#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbdst/instance.hpp"

namespace qbdst {

// Simple undirected graph, 0-based nodes, edges stored with u < v in sorted order.
class UndirectedGraph {
 public:
  // Throws std::invalid_argument on self-loops, duplicates or out-of-range ids.
  UndirectedGraph(int node_count, std::vector<std::pair<int, int>> edges);

  int node_count() const { return node_count_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool connected() const;

 private:
  int node_count_;
  std::vector<std::pair<int, int>> edges_;
};

// "NODES <n>" followed by "EDGE <u> <v>" lines (1-based) and "END".
UndirectedGraph parse_undirected(std::string_view text);
std::string serialize_undirected(const UndirectedGraph& g);

// Nodes r, a, b, v, w_1..w_k, z_1..z_k (ids 1, 2, 3, 4, 5..4+k, 5+k..4+2k in files).
Instance gen_bad_example(int k, const Rational& eps);

struct GridParams {
  int width = 4;
  int height = 4;
  Rational steiner_prob{1, 2};
  Rational keep_prob{4, 5};
  int cost_min = 1;
  int cost_max = 10;
  std::uint64_t seed = 1;
};

// Random quasi-bipartite instance on a grid. Checkerboard class A holds the root
// and terminals; class B nodes are Steiner or terminal. Nodes unreachable from
// the root are dropped and the rest renumbered.
Instance gen_grid(const GridParams& params);

// Subdivides each edge by a terminal; original vertices become Steiner; every
// subdivision edge is bidirected at cost 1. The root is the subdivision node of
// the smallest edge.
Instance reduce_cvc(const UndirectedGraph& g, bool planar_promise);

// Size of a minimum connected vertex cover, by enumeration. Limited to 12 nodes.
int brute_cvc(const UndirectedGraph& g);

}  // namespace qbdst
