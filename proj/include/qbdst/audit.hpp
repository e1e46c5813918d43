#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbdst/engine.hpp"

namespace qbdst {

// Dual load per arc: the sum of y_S over moats S the arc enters.
struct DualFeasibility {
  std::vector<Rational> load;        // indexed by ArcId
  std::vector<ArcId> violations;     // arcs over their bound
  bool ok = true;
};

// Checks load <= 2c for every arc and load <= c for antenna arcs. A standard
// trace is held to load <= c everywhere.
DualFeasibility verify_dual_feasibility(const Instance& inst, const GrowthTrace& trace);

// Counts of final arcs charged to one moat in one iteration.
struct MoatDelta {
  VertexSet moat;
  std::size_t antenna = 0;
  std::size_t killer = 0;
  std::size_t expansion = 0;

  std::size_t total() const { return antenna + killer + expansion; }
};

struct IterationDelta {
  std::size_t iteration = 0;
  Rational epsilon;
  std::vector<MoatDelta> per_moat;
  std::vector<ArcId> fbar_killer;     // final killer-labelled arcs a moat pays as killer
  std::vector<ArcId> fbar_expansion;  // final expansion-labelled arcs a moat pays as expansion

  std::size_t moat_count() const { return per_moat.size(); }
  std::size_t delta_sum() const;
};

// Rebuilds every iteration from F_l alone and compares against the trace.
struct Replay {
  std::vector<IterationDelta> deltas;
  bool moats_consistent = true;
  bool payments_consistent = true;
  std::vector<std::string> defects;
};

Replay replay_trace(const Instance& inst, const GrowthTrace& trace, const Solution& sol);

struct CostIdentity {
  bool ok = false;
  Rational total_cost;
  Rational charged;                   // sum over l of eps_l * sum_A |Delta^l(A)|
  std::vector<Rational> per_iteration;
};

CostIdentity verify_cost_identity(const Instance& inst, const GrowthTrace& trace, const Solution& sol);
CostIdentity verify_cost_identity(const Replay& replay, const Solution& sol);

struct CountingCheck {
  std::size_t iteration = 0;
  std::size_t moat_count = 0;
  std::size_t antenna_sum = 0;
  std::size_t antenna_max = 0;
  std::size_t fbar_killer = 0;
  std::size_t fbar_expansion = 0;
  bool antenna_ok = true;    // sum <= |A_l| and every moat <= 1
  bool killer_ok = true;     // |Fbar^l_Killer| <= |A_l|
  bool expansion_ok = true;  // |Fbar^l_Exp| <= 2 |A_l|

  bool ok() const { return antenna_ok && killer_ok && expansion_ok; }
};

struct CountingReport {
  std::vector<CountingCheck> iterations;
  Rational alpha_max;  // max over l of sum_A |Delta^l(A)| / |A_l|
  bool ok = true;
};

CountingReport verify_counting_lemmas(const Instance& inst, const GrowthTrace& trace, const Solution& sol);
CountingReport verify_counting_lemmas(const Replay& replay);

struct RatioReport {
  std::optional<Rational> ratio_vs_lb;   // 1 when cost and bound are both zero; absent if only the bound is
  std::optional<Rational> ratio_vs_opt;
  std::optional<double> guarantee;       // 20 for planar bipartite, 2(8 r log2 r + 1) for K_r-minor-free
  bool breach = false;
};

RatioReport ratio_report(const Instance& inst, const Solution& sol, const std::optional<Rational>& opt);

struct AuditReport {
  bool dual_feasible_ok = false;
  bool moats_consistent = true;
  bool payments_consistent = true;
  std::optional<bool> cost_identity_ok;  // bucketed runs only
  std::optional<bool> lemmas_ok;         // bucketed runs only
  std::optional<bool> alive_ok;          // bucketed runs only
  bool feasible = false;
  Rational alpha_max;
  RatioReport ratio;
  std::vector<std::string> defects;

  bool all_ok() const;
};

AuditReport audit_run(const Instance& inst, const GrowthTrace& trace, const Solution& sol,
                      const std::optional<Rational>& opt = std::nullopt);

std::string to_json(const AuditReport& report);

}  // namespace qbdst
