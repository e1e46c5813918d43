#include "qbdst/moats.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbdst {

ArcSet arc_set_of(const Instance& inst, const std::vector<ArcId>& arcs) {
  ArcSet out = empty_arc_set(inst);
  for (ArcId a : arcs) out[a.index] = true;
  return out;
}

bool contains(const VertexSet& set, NodeId v) { return std::binary_search(set.begin(), set.end(), v); }

bool is_proper_subset(const VertexSet& small, const VertexSet& big) {
  return small.size() < big.size() && std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::string to_string(const VertexSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(set[i] + 1);
  }
  return out + "}";
}

std::string to_string(Role role) {
  switch (role) {
    case Role::Antenna:
      return "antenna";
    case Role::Expansion:
      return "expansion";
    case Role::Killer:
      return "killer";
    case Role::None:
      break;
  }
  return "none";
}

namespace {

// Iterative Tarjan. Returns component index per vertex.
std::vector<int> tarjan(int n, const std::vector<std::vector<NodeId>>& out, int& component_count) {
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  std::vector<std::pair<NodeId, std::size_t>> call;
  int counter = 0;
  component_count = 0;

  for (NodeId start = 0; start < n; ++start) {
    if (index[start] != -1) continue;
    call.emplace_back(start, 0);
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < out[v].size()) {
        NodeId w = out[v][next++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = component_count;
        } while (w != v);
        ++component_count;
      }
      NodeId done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

}  // namespace

std::vector<Scc> scc_decompose(const Instance& inst, const ArcSet& F) {
  const int n = inst.node_count();
  std::vector<std::vector<NodeId>> out(n);
  for (std::size_t i = 0; i < inst.arc_count(); ++i) {
    if (F[i]) out[inst.arcs()[i].tail].push_back(inst.arcs()[i].head);
  }
  int count = 0;
  auto comp = tarjan(n, out, count);

  std::vector<Scc> all(count);
  for (NodeId v = 0; v < n; ++v) all[comp[v]].vertices.push_back(v);  // ascending v keeps each sorted

  std::vector<Scc> sccs;
  for (Scc& c : all) {
    bool keep = false;
    for (NodeId v : c.vertices) {
      if (v == inst.root()) c.contains_root = true;
      if (inst.role(v) != NodeRole::Steiner) keep = true;
    }
    if (keep) sccs.push_back(std::move(c));
  }
  std::sort(sccs.begin(), sccs.end(),
            [](const Scc& a, const Scc& b) { return a.vertices.front() < b.vertices.front(); });
  return sccs;
}

std::vector<Moat> active_moats(const Instance& inst, const ArcSet& F) {
  std::vector<Moat> moats;
  for (Scc& core : scc_decompose(inst, F)) {
    if (core.contains_root) continue;
    VertexSet tails;
    for (std::size_t i = 0; i < inst.arc_count(); ++i) {
      const Arc& a = inst.arcs()[i];
      if (F[i] && inst.is_steiner(a.tail) && !contains(core.vertices, a.tail) && contains(core.vertices, a.head)) {
        tails.push_back(a.tail);
      }
    }
    std::sort(tails.begin(), tails.end());
    tails.erase(std::unique(tails.begin(), tails.end()), tails.end());

    VertexSet members;
    std::set_union(core.vertices.begin(), core.vertices.end(), tails.begin(), tails.end(),
                   std::back_inserter(members));
    bool entered = false;
    for (std::size_t i = 0; i < inst.arc_count() && !entered; ++i) {
      const Arc& a = inst.arcs()[i];
      entered = F[i] && contains(members, a.head) && !contains(members, a.tail);
    }
    if (!entered) moats.push_back(Moat{std::move(core), std::move(tails), std::move(members)});
  }
  std::sort(moats.begin(), moats.end(), [](const Moat& a, const Moat& b) { return a.key < b.key; });
  return moats;
}

std::vector<VertexSet> enumerate_minimal_violated_brute(const Instance& inst, const ArcSet& F) {
  const int n = inst.node_count();
  if (n > 16) throw std::length_error("brute-force moat enumeration limited to 16 nodes");

  // Subsets are masks over all n nodes; any mask holding the root is skipped.
  const std::uint32_t full = 1u << n;
  const std::uint32_t root_bit = 1u << inst.root();
  std::uint32_t terminal_bits = 0;
  for (NodeId t : inst.terminals()) terminal_bits |= 1u << t;

  std::vector<std::pair<std::uint32_t, std::uint32_t>> f_arcs;  // (tail bit, head bit)
  for (std::size_t i = 0; i < inst.arc_count(); ++i) {
    if (F[i]) f_arcs.emplace_back(1u << inst.arcs()[i].tail, 1u << inst.arcs()[i].head);
  }

  std::vector<bool> violated(full, false);
  for (std::uint32_t s = 1; s < full; ++s) {
    if ((s & root_bit) || !(s & terminal_bits)) continue;
    bool entered = false;
    for (auto [tb, hb] : f_arcs) {
      if ((s & hb) && !(s & tb)) {
        entered = true;
        break;
      }
    }
    violated[s] = !entered;
  }

  // has_violated[s]: s contains a violated subset (not necessarily proper).
  std::vector<bool> has_violated(full, false);
  for (std::uint32_t s = 1; s < full; ++s) {
    if (violated[s]) {
      has_violated[s] = true;
      continue;
    }
    for (int v = 0; v < n && !has_violated[s]; ++v) {
      if (s & (1u << v)) has_violated[s] = has_violated[s & ~(1u << v)];
    }
  }

  std::vector<VertexSet> out;
  for (std::uint32_t s = 1; s < full; ++s) {
    if (!violated[s]) continue;
    bool minimal = true;
    for (int v = 0; v < n && minimal; ++v) {
      if (s & (1u << v)) minimal = !has_violated[s & ~(1u << v)];
    }
    if (!minimal) continue;
    VertexSet set;
    for (int v = 0; v < n; ++v) {
      if (s & (1u << v)) set.push_back(v);
    }
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MoatRole> classify_arc(const Instance& inst, const ArcSet& F, const std::vector<Moat>& moats,
                                   ArcId a) {
  const Arc& arc = inst.arc(a);
  std::vector<const Moat*> entered;
  for (const Moat& m : moats) {
    if (m.entered_by(arc)) entered.push_back(&m);
  }
  std::vector<MoatRole> out;
  if (entered.empty()) return out;

  if (inst.is_antenna(a)) {
    for (const Moat* m : entered) out.push_back({m->key, Role::Antenna});
    return out;
  }

  ArcSet with = F;
  with[a.index] = true;
  const auto after = active_moats(inst, with);
  for (const Moat* m : entered) {
    bool expands = std::any_of(after.begin(), after.end(), [&](const Moat& next) {
      return is_proper_subset(m->core.vertices, next.key);
    });
    out.push_back({m->key, expands ? Role::Expansion : Role::Killer});
  }
  return out;
}

}  // namespace qbdst
