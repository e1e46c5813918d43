#include "qbdst/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "json.hpp"

namespace qbdst {

std::size_t IterationDelta::delta_sum() const {
  std::size_t s = 0;
  for (const auto& m : per_moat) s += m.total();
  return s;
}

DualFeasibility verify_dual_feasibility(const Instance& inst, const GrowthTrace& trace) {
  DualFeasibility out;
  out.load.assign(inst.arc_count(), Rational(0));
  for (const auto& [set, y] : trace.duals) {
    for (std::size_t i = 0; i < inst.arc_count(); ++i) {
      const Arc& a = inst.arcs()[i];
      if (contains(set, a.head) && !contains(set, a.tail)) out.load[i] += y;
    }
  }
  for (std::size_t i = 0; i < inst.arc_count(); ++i) {
    const Rational& c = inst.arcs()[i].cost;
    const bool single = trace.algorithm == Algorithm::Standard || inst.is_antenna(ArcId{i});
    const Rational bound = single ? c : Rational(2 * c);
    if (out.load[i] > bound) {
      out.violations.push_back(ArcId{i});
      out.ok = false;
    }
  }
  return out;
}

Replay replay_trace(const Instance& inst, const GrowthTrace& trace, const Solution& sol) {
  Replay out;
  std::map<ArcId, std::size_t> bought_at;
  for (const auto& rec : trace.iterations) bought_at[rec.purchase.arc] = rec.index;

  ArcSet F = empty_arc_set(inst);
  for (const auto& rec : trace.iterations) {
    const std::string where = "iteration " + std::to_string(rec.index) + ": ";
    const auto moats = active_moats(inst, F);

    std::vector<VertexSet> keys;
    for (const Moat& m : moats) keys.push_back(m.key);
    if (keys != rec.moats) {
      out.moats_consistent = false;
      out.defects.push_back(where + "active moats differ from trace");
    }

    using Key = std::tuple<std::size_t, BucketKind, VertexSet>;
    std::multiset<Key> expected, recorded;
    for (const auto& d : plan_payments(inst, F, moats, trace.algorithm)) {
      for (const auto& payer : d.payers) expected.insert({d.arc.index, d.kind, payer});
    }
    bool amounts_ok = true;
    for (const auto& p : rec.payments) {
      recorded.insert({p.arc.index, p.bucket, p.moat});
      amounts_ok = amounts_ok && p.amount == rec.epsilon;
    }
    if (expected != recorded || !amounts_ok) {
      out.payments_consistent = false;
      out.defects.push_back(where + "recorded payments differ from re-derived roles");
    }

    IterationDelta delta;
    delta.iteration = rec.index;
    delta.epsilon = rec.epsilon;
    std::set<ArcId> fk, fe;
    for (const Moat& m : moats) delta.per_moat.push_back({m.key, 0, 0, 0});
    for (ArcId e : sol.final_arcs) {
      if (bought_at.at(e) < rec.index) continue;  // already in F_l
      const BucketKind label = sol.arc_labels.at(e);
      for (const auto& [key, role] : classify_arc(inst, F, moats, e)) {
        auto& md = *std::find_if(delta.per_moat.begin(), delta.per_moat.end(),
                                 [&](const MoatDelta& x) { return x.moat == key; });
        if (role == Role::Antenna && label == BucketKind::Antenna) {
          ++md.antenna;
        } else if (role == Role::Killer && label == BucketKind::Killer) {
          ++md.killer;
          fk.insert(e);
        } else if (role == Role::Expansion && label == BucketKind::Expansion) {
          ++md.expansion;
          fe.insert(e);
        }
      }
    }
    delta.fbar_killer.assign(fk.begin(), fk.end());
    delta.fbar_expansion.assign(fe.begin(), fe.end());
    out.deltas.push_back(std::move(delta));

    F[rec.purchase.arc.index] = true;
  }
  return out;
}

CostIdentity verify_cost_identity(const Replay& replay, const Solution& sol) {
  CostIdentity out;
  out.total_cost = sol.total_cost;
  out.charged = 0;
  for (const auto& d : replay.deltas) {
    Rational part = d.epsilon * static_cast<long>(d.delta_sum());
    out.per_iteration.push_back(part);
    out.charged += part;
  }
  out.ok = out.charged == out.total_cost;
  return out;
}

CostIdentity verify_cost_identity(const Instance& inst, const GrowthTrace& trace, const Solution& sol) {
  return verify_cost_identity(replay_trace(inst, trace, sol), sol);
}

CountingReport verify_counting_lemmas(const Replay& replay) {
  CountingReport out;
  out.alpha_max = 0;
  for (const auto& d : replay.deltas) {
    CountingCheck c;
    c.iteration = d.iteration;
    c.moat_count = d.moat_count();
    for (const auto& m : d.per_moat) {
      c.antenna_sum += m.antenna;
      c.antenna_max = std::max(c.antenna_max, m.antenna);
    }
    c.fbar_killer = d.fbar_killer.size();
    c.fbar_expansion = d.fbar_expansion.size();
    c.antenna_ok = c.antenna_sum <= c.moat_count && c.antenna_max <= 1;
    c.killer_ok = c.fbar_killer <= c.moat_count;
    c.expansion_ok = c.fbar_expansion <= 2 * c.moat_count;
    out.ok = out.ok && c.ok();
    if (c.moat_count > 0) {
      Rational alpha(static_cast<long>(d.delta_sum()), static_cast<long>(c.moat_count));
      alpha.canonicalize();
      if (alpha > out.alpha_max) out.alpha_max = alpha;
    }
    out.iterations.push_back(c);
  }
  return out;
}

CountingReport verify_counting_lemmas(const Instance& inst, const GrowthTrace& trace, const Solution& sol) {
  return verify_counting_lemmas(replay_trace(inst, trace, sol));
}

RatioReport ratio_report(const Instance& inst, const Solution& sol, const std::optional<Rational>& opt) {
  RatioReport out;
  if (sol.lower_bound > 0) {
    out.ratio_vs_lb = Rational(sol.total_cost / sol.lower_bound);
  } else if (sol.total_cost == 0) {
    out.ratio_vs_lb = Rational(1);
  }
  if (opt) {
    if (*opt > 0) {
      out.ratio_vs_opt = Rational(sol.total_cost / *opt);
    } else if (sol.total_cost == 0) {
      out.ratio_vs_opt = Rational(1);
    }
  }

  const FamilyTag& tag = inst.family();
  if (tag.kind == FamilyTag::Kind::PlanarBipartite) {
    out.guarantee = 20.0;
    out.breach = !out.ratio_vs_lb || *out.ratio_vs_lb > 20;
  } else if (tag.kind == FamilyTag::Kind::MinorFree) {
    const double r = tag.minor_order;
    out.guarantee = 2.0 * (8.0 * r * std::log2(r) + 1.0);
    out.breach = !out.ratio_vs_lb || out.ratio_vs_lb->get_d() > *out.guarantee;
  }
  return out;
}

bool AuditReport::all_ok() const {
  return feasible && dual_feasible_ok && moats_consistent && payments_consistent && cost_identity_ok.value_or(true) &&
         lemmas_ok.value_or(true) && alive_ok.value_or(true) && !ratio.breach;
}

AuditReport audit_run(const Instance& inst, const GrowthTrace& trace, const Solution& sol,
                      const std::optional<Rational>& opt) {
  AuditReport rep;
  rep.feasible = is_feasible(inst, arc_set_of(inst, sol.final_arcs));
  if (!rep.feasible) rep.defects.push_back("final arc set is infeasible");

  const auto dual = verify_dual_feasibility(inst, trace);
  rep.dual_feasible_ok = dual.ok;
  for (ArcId a : dual.violations) rep.defects.push_back("dual load exceeds bound on arc #" + std::to_string(a.index));

  const Replay replay = replay_trace(inst, trace, sol);
  rep.moats_consistent = replay.moats_consistent;
  rep.payments_consistent = replay.payments_consistent;
  rep.defects.insert(rep.defects.end(), replay.defects.begin(), replay.defects.end());

  rep.alpha_max = 0;
  if (trace.algorithm == Algorithm::Bucketed) {
    const auto identity = verify_cost_identity(replay, sol);
    rep.cost_identity_ok = identity.ok;
    if (!identity.ok) rep.defects.push_back("cost identity fails: cost " + to_string(identity.total_cost) +
                                            " vs charged " + to_string(identity.charged));
    const auto counting = verify_counting_lemmas(replay);
    rep.lemmas_ok = counting.ok;
    rep.alpha_max = counting.alpha_max;
    for (const auto& c : counting.iterations) {
      if (!c.ok()) rep.defects.push_back("counting bound fails at iteration " + std::to_string(c.iteration));
    }
    try {
      alive_report(trace);
      rep.alive_ok = true;
    } catch (const InvariantBreach& e) {
      rep.alive_ok = false;
      rep.defects.push_back(e.what());
    }
  }
  rep.ratio = ratio_report(inst, sol, opt);
  if (rep.ratio.breach) rep.defects.push_back("ratio exceeds the family guarantee");
  return rep;
}

std::string to_json(const AuditReport& r) {
  nlohmann::ordered_json j;
  auto opt_bool = [](const std::optional<bool>& b) -> nlohmann::ordered_json {
    return b ? nlohmann::ordered_json(*b) : nlohmann::ordered_json(nullptr);
  };
  auto opt_rat = [](const std::optional<Rational>& q) -> nlohmann::ordered_json {
    return q ? nlohmann::ordered_json(to_string(*q)) : nlohmann::ordered_json(nullptr);
  };
  j["feasible"] = r.feasible;
  j["dual_feasible_ok"] = r.dual_feasible_ok;
  j["moats_consistent"] = r.moats_consistent;
  j["payments_consistent"] = r.payments_consistent;
  j["cost_identity_ok"] = opt_bool(r.cost_identity_ok);
  j["lemmas_ok"] = opt_bool(r.lemmas_ok);
  j["alive_ok"] = opt_bool(r.alive_ok);
  j["alpha_max"] = to_string(r.alpha_max);
  j["ratio_vs_lb"] = opt_rat(r.ratio.ratio_vs_lb);
  j["ratio_vs_opt"] = opt_rat(r.ratio.ratio_vs_opt);
  j["guarantee"] = r.ratio.guarantee ? nlohmann::ordered_json(*r.ratio.guarantee) : nlohmann::ordered_json(nullptr);
  j["breach"] = r.ratio.breach;
  j["defects"] = r.defects;
  j["ok"] = r.all_ok();
  return j.dump();
}

}  // namespace qbdst
