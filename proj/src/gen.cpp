#include "qbdst/gen.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qbdst {

UndirectedGraph::UndirectedGraph(int node_count, std::vector<std::pair<int, int>> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ <= 0) throw std::invalid_argument("graph needs at least one node");
  for (auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || u >= node_count_ || v >= node_count_) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) throw std::invalid_argument("duplicate edge");
}

bool UndirectedGraph::connected() const {
  std::vector<std::vector<int>> adj(node_count_);
  for (auto [u, v] : edges_) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<bool> seen(node_count_, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : adj[u]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == node_count_;
}

UndirectedGraph parse_undirected(std::string_view text) {
  std::istringstream in{std::string(text)};
  int n = -1;
  bool ended = false;
  std::vector<std::pair<int, int>> edges;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (ended) throw ParseError(line_no, "content after END");
    if (key == "NODES") {
      if (!(ls >> n) || n <= 0) throw ParseError(line_no, "bad NODES");
    } else if (key == "EDGE") {
      int u = 0, v = 0;
      if (n < 0) throw ParseError(line_no, "NODES must precede EDGE");
      if (!(ls >> u >> v)) throw ParseError(line_no, "EDGE takes <u> <v>");
      if (u < 1 || v < 1 || u > n || v > n) throw ParseError(line_no, "node id out of range");
      edges.emplace_back(u - 1, v - 1);
    } else if (key == "END") {
      ended = true;
    } else {
      throw ParseError(line_no, "unknown record '" + key + "'");
    }
    std::string extra;
    if (ls >> extra) throw ParseError(line_no, "trailing token '" + extra + "'");
  }
  if (n < 0) throw ParseError(line_no, "missing NODES section");
  if (!ended) throw ParseError(line_no, "missing END");
  try {
    return UndirectedGraph(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
}

std::string serialize_undirected(const UndirectedGraph& g) {
  std::ostringstream out;
  out << "NODES " << g.node_count() << '\n';
  for (auto [u, v] : g.edges()) out << "EDGE " << u + 1 << ' ' << v + 1 << '\n';
  out << "END\n";
  return out.str();
}

Instance gen_bad_example(int k, const Rational& eps) {
  if (k < 2) throw std::invalid_argument("bad example needs k >= 2");
  if (eps <= 0) throw std::invalid_argument("bad example needs eps > 0");
  const NodeId r = 0, a = 1, b = 2, v = 3;
  auto w = [](int i) { return NodeId{3 + i}; };
  auto z = [k](int i) { return NodeId{3 + k + i}; };

  std::vector<NodeId> terminals{a, b};
  for (int i = 1; i <= k; ++i) terminals.push_back(w(i));

  std::vector<Arc> arcs;
  for (int i = 1; i <= k; ++i) arcs.push_back({a, w(i), eps});
  arcs.push_back({w(1), v, Rational(1)});
  arcs.push_back({v, a, eps});
  for (int i = 2; i <= k; ++i) arcs.push_back({w(i), z(i - 1), Rational(1)});
  for (int i = 1; i <= k; ++i) arcs.push_back({z(i), w(i), eps});
  for (int i = 1; i <= k; ++i) arcs.push_back({z(i), b, eps});
  arcs.push_back({r, z(k), Rational(1)});
  return Instance(2 * k + 4, r, std::move(terminals), std::move(arcs), {FamilyTag::Kind::PlanarBipartite, 0});
}

namespace {

// Platform-independent draws; std distributions differ between standard libraries.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  bool chance(const Rational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    const mpz_class& den = p.get_den();
    mpz_class pick = mpz_class(static_cast<unsigned long>(rng_() >> 1)) % den;
    return pick < p.get_num();
  }

  int uniform(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng_() % span);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

Instance gen_grid(const GridParams& p) {
  if (p.width <= 0 || p.height <= 0 || p.width * p.height < 2) throw std::invalid_argument("grid needs at least 2 cells");
  if (p.cost_min < 0 || p.cost_max < p.cost_min) throw std::invalid_argument("bad cost range");
  Draw draw(p.seed);
  const int n = p.width * p.height;
  auto id = [&](int x, int y) { return y * p.width + x; };
  auto class_a = [&](int v) { return ((v % p.width) + (v / p.width)) % 2 == 0; };

  std::vector<NodeId> class_a_nodes;
  for (int v = 0; v < n; ++v) {
    if (class_a(v)) class_a_nodes.push_back(v);
  }
  const NodeId root = class_a_nodes[draw.uniform(0, static_cast<int>(class_a_nodes.size()) - 1)];
  std::vector<bool> terminal(n, false);
  for (int v = 0; v < n; ++v) {
    if (v == root) continue;
    terminal[v] = class_a(v) || !draw.chance(p.steiner_prob);
  }

  std::vector<Arc> arcs;
  auto add_edge = [&](NodeId u, NodeId v) {
    if (!draw.chance(p.keep_prob)) return;
    switch (draw.uniform(0, 2)) {
      case 0:
        arcs.push_back({u, v, Rational(draw.uniform(p.cost_min, p.cost_max))});
        break;
      case 1:
        arcs.push_back({v, u, Rational(draw.uniform(p.cost_min, p.cost_max))});
        break;
      default:
        arcs.push_back({u, v, Rational(draw.uniform(p.cost_min, p.cost_max))});
        arcs.push_back({v, u, Rational(draw.uniform(p.cost_min, p.cost_max))});
        break;
    }
  };
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      if (x + 1 < p.width) add_edge(id(x, y), id(x + 1, y));
      if (y + 1 < p.height) add_edge(id(x, y), id(x, y + 1));
    }
  }

  // Keep only what the root reaches.
  std::vector<NodeId> all_terminals;
  for (int v = 0; v < n; ++v) {
    if (terminal[v]) all_terminals.push_back(v);
  }
  const Instance full(n, root, all_terminals, arcs, {FamilyTag::Kind::PlanarBipartite, 0});
  const auto seen = reachable_from_root(full, std::vector<bool>(arcs.size(), true));
  std::vector<NodeId> remap(n, -1);
  int kept = 0;
  for (int v = 0; v < n; ++v) {
    if (seen[v]) remap[v] = kept++;
  }
  std::vector<NodeId> terminals;
  for (NodeId t : all_terminals) {
    if (seen[t]) terminals.push_back(remap[t]);
  }
  std::vector<Arc> kept_arcs;
  for (const Arc& a : arcs) {
    if (seen[a.tail] && seen[a.head]) kept_arcs.push_back({remap[a.tail], remap[a.head], a.cost});
  }
  return Instance(kept, remap[root], std::move(terminals), std::move(kept_arcs), {FamilyTag::Kind::PlanarBipartite, 0});
}

Instance reduce_cvc(const UndirectedGraph& g, bool planar_promise) {
  if (g.edges().empty()) throw std::invalid_argument("reduction needs at least one edge");
  if (!g.connected()) throw std::invalid_argument("reduction needs a connected graph");
  const int n = g.node_count();
  const int m = static_cast<int>(g.edges().size());
  std::vector<NodeId> terminals;
  std::vector<Arc> arcs;
  for (int e = 0; e < m; ++e) {
    const NodeId x = n + e;
    const auto [u, v] = g.edges()[e];
    if (e > 0) terminals.push_back(x);
    arcs.push_back({x, u, Rational(1)});
    arcs.push_back({u, x, Rational(1)});
    arcs.push_back({x, v, Rational(1)});
    arcs.push_back({v, x, Rational(1)});
  }
  FamilyTag tag;
  if (planar_promise) tag = {FamilyTag::Kind::PlanarBipartite, 0};
  return Instance(n + m, n, std::move(terminals), std::move(arcs), tag);
}

int brute_cvc(const UndirectedGraph& g) {
  const int n = g.node_count();
  if (n > 12) throw std::length_error("brute-force connected vertex cover limited to 12 nodes");
  if (g.edges().empty()) return 0;
  int best = n;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    const int size = __builtin_popcount(s);
    if (size >= best) continue;
    auto in = [s](int v) { return ((s >> v) & 1u) != 0; };
    bool covers = std::all_of(g.edges().begin(), g.edges().end(), [&](auto e) { return in(e.first) || in(e.second); });
    if (!covers) continue;

    std::uint32_t seen = s & (~s + 1);
    for (bool grew = true; grew;) {
      grew = false;
      for (auto [u, v] : g.edges()) {
        if (!in(u) || !in(v)) continue;
        if (((seen >> u) & 1u) != ((seen >> v) & 1u)) {
          seen |= (1u << u) | (1u << v);
          grew = true;
        }
      }
    }
    if (seen == s) best = size;
  }
  return best;
}

}  // namespace qbdst
