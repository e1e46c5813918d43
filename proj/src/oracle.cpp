#include "qbdst/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>

#include "qbdst/moats.hpp"

namespace qbdst {

namespace {

// Exact integer arithmetic once costs share a common denominator. Falls back to
// Rational when the scaled total would not fit comfortably in 62 bits.
template <typename Value>
struct SubsetDp {
  const Instance& inst;
  std::vector<Value> cost;  // per arc
  int n;
  std::size_t k;

  static constexpr int kNone = -1;

  std::vector<std::vector<std::optional<Value>>> dist;  // dist[s][v]
  std::vector<std::vector<int>> parent;                 // arc entering v on the s-tree

  // Indexed [mask * n + v].
  std::vector<std::optional<Value>> best;
  std::vector<int> ext_to;      // node where the subtree for mask branches
  std::vector<std::uint32_t> split;

  SubsetDp(const Instance& i, std::vector<Value> c)
      : inst(i), cost(std::move(c)), n(i.node_count()), k(i.terminals().size()) {}

  void shortest_paths() {
    dist.assign(n, std::vector<std::optional<Value>>(n));
    parent.assign(n, std::vector<int>(n, kNone));
    std::vector<std::vector<std::size_t>> out(n);
    for (std::size_t a = 0; a < inst.arc_count(); ++a) out[inst.arcs()[a].tail].push_back(a);
    for (int s = 0; s < n; ++s) {
      auto& d = dist[s];
      std::vector<bool> done(n, false);
      d[s] = Value(0);
      for (int round = 0; round < n; ++round) {
        int u = -1;
        for (int v = 0; v < n; ++v) {
          if (!done[v] && d[v] && (u < 0 || *d[v] < *d[u])) u = v;
        }
        if (u < 0) break;
        done[u] = true;
        for (std::size_t a : out[u]) {
          int w = inst.arcs()[a].head;
          Value cand = *d[u] + cost[a];
          if (!done[w] && (!d[w] || cand < *d[w])) {
            d[w] = cand;
            parent[s][w] = static_cast<int>(a);
          }
        }
      }
    }
  }

  void run() {
    shortest_paths();
    const std::uint32_t full = (1u << k) - 1;
    best.assign(static_cast<std::size_t>(full + 1) * n, std::nullopt);
    ext_to.assign(best.size(), kNone);
    split.assign(best.size(), 0);

    // Masks in increasing popcount order.
    std::vector<std::uint32_t> order;
    for (std::uint32_t m = 1; m <= full; ++m) order.push_back(m);
    std::stable_sort(order.begin(), order.end(),
                     [](std::uint32_t a, std::uint32_t b) { return __builtin_popcount(a) < __builtin_popcount(b); });

    std::vector<std::optional<Value>> branch(n);
    std::vector<std::uint32_t> branch_split(n, 0);
    for (std::uint32_t mask : order) {
      std::fill(branch.begin(), branch.end(), std::nullopt);
      if (__builtin_popcount(mask) == 1) {
        branch[inst.terminals()[__builtin_ctz(mask)]] = Value(0);
      } else {
        const std::uint32_t low = mask & (~mask + 1);
        for (std::uint32_t sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
          if (!(sub & low)) continue;
          const std::uint32_t rest = mask ^ sub;
          for (int v = 0; v < n; ++v) {
            const auto& a = best[static_cast<std::size_t>(sub) * n + v];
            const auto& b = best[static_cast<std::size_t>(rest) * n + v];
            if (!a || !b) continue;
            Value cand = *a + *b;
            if (!branch[v] || cand < *branch[v]) {
              branch[v] = cand;
              branch_split[v] = sub;
            }
          }
        }
      }
      for (int v = 0; v < n; ++v) {
        auto& cell = best[static_cast<std::size_t>(mask) * n + v];
        for (int u = 0; u < n; ++u) {
          if (!branch[u] || !dist[v][u]) continue;
          Value cand = *dist[v][u] + *branch[u];
          if (!cell || cand < *cell) {
            cell = cand;
            ext_to[static_cast<std::size_t>(mask) * n + v] = u;
            split[static_cast<std::size_t>(mask) * n + v] = branch_split[u];
          }
        }
      }
    }
  }

  void collect(std::uint32_t mask, int v, std::set<std::size_t>& arcs) const {
    const std::size_t idx = static_cast<std::size_t>(mask) * n + v;
    const int u = ext_to[idx];
    for (int w = u; w != v; w = inst.arcs()[parent[v][w]].tail) arcs.insert(parent[v][w]);
    if (__builtin_popcount(mask) == 1) return;
    const std::uint32_t sub = split[idx];
    collect(sub, u, arcs);
    collect(mask ^ sub, u, arcs);
  }
};

template <typename Value>
OptResult finish_dp(const Instance& inst, std::vector<Value> costs) {
  SubsetDp<Value> dp(inst, std::move(costs));
  dp.run();
  const std::uint32_t full = (1u << dp.k) - 1;
  if (!dp.best[static_cast<std::size_t>(full) * dp.n + inst.root()]) throw Infeasible("some terminal is unreachable");
  std::set<std::size_t> arcs;
  dp.collect(full, inst.root(), arcs);

  OptResult out;
  out.method = OptResult::Method::SubsetDp;
  out.opt_cost = 0;
  for (std::size_t a : arcs) {
    out.opt_arcs.push_back(ArcId{a});
    out.opt_cost += inst.arcs()[a].cost;
  }
  return out;
}

}  // namespace

OptResult exact_opt_dp(const Instance& inst) {
  const std::size_t k = inst.terminals().size();
  if (k > kDpMaxTerminals) {
    throw OracleGuard("subset DP limited to " + std::to_string(kDpMaxTerminals) + " terminals, instance has " +
                      std::to_string(k));
  }
  if (k == 0) return OptResult{Rational(0), {}, OptResult::Method::SubsetDp};

  mpz_class scale = 1;
  for (const Arc& a : inst.arcs()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), a.cost.get_den_mpz_t());
  mpz_class total = 0;
  std::vector<mpz_class> scaled;
  for (const Arc& a : inst.arcs()) {
    scaled.push_back(a.cost.get_num() * (scale / a.cost.get_den()));
    total += scaled.back();
  }
  if (total < (mpz_class(1) << 60)) {
    std::vector<std::int64_t> costs;
    for (const auto& s : scaled) costs.push_back(s.get_si());
    return finish_dp(inst, std::move(costs));
  }
  std::vector<Rational> costs;
  for (const Arc& a : inst.arcs()) costs.push_back(a.cost);
  return finish_dp(inst, std::move(costs));
}

OptResult exact_opt_brute(const Instance& inst) {
  const std::size_t m = inst.arc_count();
  if (m > kBruteMaxArcs) {
    throw OracleGuard("brute force limited to " + std::to_string(kBruteMaxArcs) + " arcs, instance has " +
                      std::to_string(m));
  }
  // Some optimum is an arborescence, so it uses at most n-1 arcs.
  const std::size_t max_arcs = static_cast<std::size_t>(inst.node_count() - 1);

  std::optional<Rational> best;
  std::vector<bool> best_set;
  std::vector<bool> chosen(m, false);
  std::size_t used = 0;
  Rational cost = 0;

  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    if (best && cost >= *best) return;
    if (is_feasible(inst, chosen)) {
      best = cost;
      best_set = chosen;
      return;  // adding arcs cannot lower the cost
    }
    if (i == m || used == max_arcs) return;
    for (std::size_t j = i; j < m; ++j) {
      chosen[j] = true;
      ++used;
      cost += inst.arcs()[j].cost;
      dfs(j + 1);
      cost -= inst.arcs()[j].cost;
      --used;
      chosen[j] = false;
    }
  };
  dfs(0);
  if (!best) throw Infeasible("some terminal is unreachable");

  OptResult out;
  out.method = OptResult::Method::BruteSubsets;
  out.opt_cost = *best;
  for (std::size_t i = 0; i < m; ++i) {
    if (best_set[i]) out.opt_arcs.push_back(ArcId{i});
  }
  return out;
}

}  // namespace qbdst
