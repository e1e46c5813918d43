#include "qbdst/engine.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace qbdst {

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Bucketed ? "bucketed" : "standard";
}

std::string to_string(BucketKind kind) {
  switch (kind) {
    case BucketKind::Antenna:
      return "antenna";
    case BucketKind::Expansion:
      return "expansion";
    case BucketKind::Killer:
      return "killer";
    case BucketKind::Single:
      break;
  }
  return "single";
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "bucketed") return Algorithm::Bucketed;
  if (text == "standard") return Algorithm::Standard;
  throw std::invalid_argument("unknown algorithm '" + text + "'");
}

BucketKind parse_bucket_kind(const std::string& text) {
  for (BucketKind k : {BucketKind::Antenna, BucketKind::Expansion, BucketKind::Killer, BucketKind::Single}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown bucket kind '" + text + "'");
}

Rational& ArcBuckets::operator[](BucketKind kind) {
  return const_cast<Rational&>(std::as_const(*this)[kind]);
}

const Rational& ArcBuckets::operator[](BucketKind kind) const {
  switch (kind) {
    case BucketKind::Antenna:
      return antenna;
    case BucketKind::Expansion:
      return expansion;
    case BucketKind::Killer:
      return killer;
    case BucketKind::Single:
      break;
  }
  return single;
}

std::vector<ArcId> GrowthTrace::purchased() const {
  std::vector<ArcId> out;
  out.reserve(iterations.size());
  for (const auto& it : iterations) out.push_back(it.purchase.arc);
  return out;
}

Rational GrowthTrace::dual_total() const {
  Rational total = 0;
  for (const auto& [set, y] : duals) total += y;
  return total;
}

std::vector<BucketDemand> plan_payments(const Instance& inst, const ArcSet& F, const std::vector<Moat>& moats,
                                        Algorithm algorithm) {
  std::vector<BucketDemand> demands;
  for (std::size_t i = 0; i < inst.arc_count(); ++i) {
    if (F[i]) continue;
    const ArcId id{i};
    if (algorithm == Algorithm::Standard) {
      BucketDemand d{id, BucketKind::Single, {}};
      for (const Moat& m : moats) {
        if (m.entered_by(inst.arc(id))) d.payers.push_back(m.key);
      }
      if (!d.payers.empty()) demands.push_back(std::move(d));
      continue;
    }

    BucketDemand ant{id, BucketKind::Antenna, {}};
    BucketDemand exp{id, BucketKind::Expansion, {}};
    BucketDemand kill{id, BucketKind::Killer, {}};
    for (auto& [key, role] : classify_arc(inst, F, moats, id)) {
      switch (role) {
        case Role::Antenna:
          ant.payers.push_back(key);
          break;
        case Role::Expansion:
          exp.payers.push_back(key);
          break;
        case Role::Killer:
          kill.payers.push_back(key);
          break;
        case Role::None:
          break;
      }
    }
    for (BucketDemand* d : {&ant, &exp, &kill}) {
      if (!d->payers.empty()) demands.push_back(std::move(*d));
    }
  }
  return demands;
}

EpsilonStep compute_epsilon(const Instance& inst, const std::vector<BucketDemand>& demands,
                            const BucketState& buckets) {
  std::optional<Rational> best;
  for (const auto& d : demands) {
    Rational room = inst.arc(d.arc).cost - buckets[d.arc.index][d.kind];
    Rational eps = room / static_cast<long>(d.payers.size());
    if (!best || eps < *best) best = eps;
  }
  if (!best) throw StalledGrowth("stalled growth: no active moat has a payable incoming arc");

  EpsilonStep step{*best, {}};
  for (const auto& d : demands) {
    Rational after = buckets[d.arc.index][d.kind] + step.epsilon * static_cast<long>(d.payers.size());
    if (after == inst.arc(d.arc).cost) step.tight.push_back({d.arc, d.kind});
  }
  return step;
}

EpsilonStep compute_epsilon(const Instance& inst, const ArcSet& F, const std::vector<Moat>& moats,
                            const BucketState& buckets) {
  return compute_epsilon(inst, plan_payments(inst, F, moats, Algorithm::Bucketed), buckets);
}

namespace {

Purchase choose_purchase(const Instance& inst, Algorithm algorithm, const std::vector<TightBucket>& tight) {
  ArcId arc = tight.front().arc;
  for (const auto& t : tight) arc = std::min(arc, t.arc);
  bool expansion = false;
  bool killer = false;
  for (const auto& t : tight) {
    if (t.arc != arc) continue;
    expansion |= t.kind == BucketKind::Expansion;
    killer |= t.kind == BucketKind::Killer;
  }
  if (algorithm == Algorithm::Standard) return {arc, BucketKind::Single};
  if (inst.is_antenna(arc)) return {arc, BucketKind::Antenna};
  if (expansion) return {arc, BucketKind::Expansion};
  if (killer) return {arc, BucketKind::Killer};
  return {arc, BucketKind::Single};
}

// Moats whose alive terminal dies when `bought` joins F.
std::vector<const Moat*> killed_moats(const Instance& inst, const ArcSet& F, const std::vector<Moat>& moats,
                                      ArcId bought) {
  std::vector<const Moat*> out;
  if (!inst.is_antenna(bought)) {
    for (const auto& [key, role] : classify_arc(inst, F, moats, bought)) {
      if (role != Role::Killer) continue;
      for (const Moat& m : moats) {
        if (m.key == key) out.push_back(&m);
      }
    }
    return out;
  }
  ArcSet with = F;
  with[bought.index] = true;
  const auto after = active_moats(inst, with);
  for (const Moat& m : moats) {
    if (!m.entered_by(inst.arc(bought))) continue;
    bool survives = std::any_of(after.begin(), after.end(), [&](const Moat& next) {
      return std::includes(next.key.begin(), next.key.end(), m.core.vertices.begin(), m.core.vertices.end());
    });
    if (!survives) out.push_back(&m);
  }
  return out;
}

}  // namespace

GrowthTrace grow_phase(const Instance& inst, Algorithm algorithm) {
  GrowthTrace trace;
  trace.algorithm = algorithm;
  trace.instance_hash = instance_hash(inst);
  trace.terminals = inst.terminals();

  BucketState buckets(inst.arc_count());
  ArcSet F = empty_arc_set(inst);
  std::set<NodeId> alive(inst.terminals().begin(), inst.terminals().end());

  for (std::size_t l = 0;; ++l) {
    const auto moats = active_moats(inst, F);
    if (moats.empty()) break;
    const auto demands = plan_payments(inst, F, moats, algorithm);
    const EpsilonStep step = compute_epsilon(inst, demands, buckets);
    if (l >= inst.arc_count()) throw InvariantBreach("growth did not terminate within |E| iterations");

    IterationRecord rec;
    rec.index = l;
    rec.epsilon = step.epsilon;
    for (const Moat& m : moats) {
      rec.moats.push_back(m.key);
      trace.duals[m.key] += step.epsilon;
    }
    for (const auto& d : demands) {
      buckets[d.arc.index][d.kind] += step.epsilon * static_cast<long>(d.payers.size());
      for (const auto& payer : d.payers) rec.payments.push_back({d.arc, d.kind, payer, step.epsilon});
    }
    if (step.tight.empty()) throw InvariantBreach("no bucket reached capacity");
    rec.purchase = choose_purchase(inst, algorithm, step.tight);

    if (algorithm == Algorithm::Bucketed) {
      for (const Moat* m : killed_moats(inst, F, moats, rec.purchase.arc)) {
        for (NodeId v : m->core.vertices) {
          if (alive.erase(v)) {
            rec.kills.push_back(v);
            break;
          }
        }
      }
      std::sort(rec.kills.begin(), rec.kills.end());
    }

    F[rec.purchase.arc.index] = true;
    trace.iterations.push_back(std::move(rec));
  }
  return trace;
}

Solution reverse_delete(const Instance& inst, const GrowthTrace& trace) {
  const auto bought = trace.purchased();
  ArcSet keep = arc_set_of(inst, bought);
  if (!is_feasible(inst, keep)) throw std::invalid_argument("purchased arcs are not feasible");
  for (auto it = bought.rbegin(); it != bought.rend(); ++it) {
    keep[it->index] = false;
    if (!is_feasible(inst, keep)) keep[it->index] = true;
  }

  Solution sol;
  sol.total_cost = 0;
  for (const auto& rec : trace.iterations) {
    if (!keep[rec.purchase.arc.index]) continue;
    sol.final_arcs.push_back(rec.purchase.arc);
    sol.arc_labels[rec.purchase.arc] = rec.purchase.label;
    sol.total_cost += inst.arc(rec.purchase.arc).cost;
  }
  sol.dual_total = trace.dual_total();
  sol.lower_bound = sol.dual_total / 2;
  return sol;
}

SolveResult solve(const Instance& inst) {
  GrowthTrace trace = grow_phase(inst, Algorithm::Bucketed);
  Solution sol = reverse_delete(inst, trace);
  return {std::move(sol), std::move(trace)};
}

SolveResult solve_standard_baseline(const Instance& inst) {
  GrowthTrace trace = grow_phase(inst, Algorithm::Standard);
  Solution sol = reverse_delete(inst, trace);
  return {std::move(sol), std::move(trace)};
}

std::vector<AliveSnapshot> alive_report(const GrowthTrace& trace) {
  if (trace.algorithm != Algorithm::Bucketed) {
    throw std::invalid_argument("alive bookkeeping is defined for bucketed traces only");
  }
  std::set<NodeId> alive(trace.terminals.begin(), trace.terminals.end());
  std::vector<AliveSnapshot> out;

  auto check = [&](std::size_t l, const std::vector<VertexSet>& moats) {
    std::size_t covered = 0;
    for (const auto& key : moats) {
      auto n = std::count_if(key.begin(), key.end(), [&](NodeId v) { return alive.count(v) > 0; });
      if (n != 1) {
        throw InvariantBreach("iteration " + std::to_string(l) + ": moat " + to_string(key) + " holds " +
                              std::to_string(n) + " alive terminals");
      }
      covered += 1;
    }
    if (covered != alive.size()) {
      throw InvariantBreach("iteration " + std::to_string(l) + ": " + std::to_string(alive.size()) +
                            " alive terminals but " + std::to_string(moats.size()) + " active moats");
    }
    out.push_back({l, {alive.begin(), alive.end()}});
  };

  for (const auto& rec : trace.iterations) {
    check(rec.index, rec.moats);
    for (NodeId t : rec.kills) {
      if (!alive.erase(t)) {
        throw InvariantBreach("iteration " + std::to_string(rec.index) + ": terminal " + std::to_string(t + 1) +
                              " killed twice");
      }
    }
  }
  check(trace.iterations.size(), {});
  return out;
}

}  // namespace qbdst
