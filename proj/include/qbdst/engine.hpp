#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbdst/instance.hpp"
#include "qbdst/moats.hpp"
#include "qbdst/rational.hpp"

namespace qbdst {

enum class Algorithm {
  Bucketed,  // antenna / expansion / killer buckets
  Standard,  // one bucket of size c(e) per arc
};

enum class BucketKind { Antenna, Expansion, Killer, Single };

std::string to_string(Algorithm algorithm);
std::string to_string(BucketKind kind);
Algorithm parse_algorithm(const std::string& text);
BucketKind parse_bucket_kind(const std::string& text);

class StalledGrowth : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fill levels of one arc's buckets. Each stays within [0, c(arc)].
struct ArcBuckets {
  Rational antenna;
  Rational expansion;
  Rational killer;
  Rational single;

  Rational& operator[](BucketKind kind);
  const Rational& operator[](BucketKind kind) const;
};

using BucketState = std::vector<ArcBuckets>;  // indexed by ArcId

// One bucket receiving payment this iteration, and the moats paying into it.
struct BucketDemand {
  ArcId arc;
  BucketKind kind = BucketKind::Single;
  std::vector<VertexSet> payers;
};

struct TightBucket {
  ArcId arc;
  BucketKind kind = BucketKind::Single;
  bool operator==(const TightBucket&) const = default;
};

struct EpsilonStep {
  Rational epsilon;
  std::vector<TightBucket> tight;  // ordered by (arc, kind)
};

// Which buckets each active moat pays into for the arcs outside F.
std::vector<BucketDemand> plan_payments(const Instance& inst, const ArcSet& F, const std::vector<Moat>& moats,
                                        Algorithm algorithm);

// Largest uniform increase keeping every paid bucket within capacity.
// Throws StalledGrowth when no bucket is being paid.
EpsilonStep compute_epsilon(const Instance& inst, const std::vector<BucketDemand>& demands,
                            const BucketState& buckets);
EpsilonStep compute_epsilon(const Instance& inst, const ArcSet& F, const std::vector<Moat>& moats,
                            const BucketState& buckets);

struct Payment {
  ArcId arc;
  BucketKind bucket = BucketKind::Single;
  VertexSet moat;
  Rational amount;
};

struct Purchase {
  ArcId arc;
  BucketKind label = BucketKind::Single;
};

struct IterationRecord {
  std::size_t index = 0;
  Rational epsilon;
  std::vector<VertexSet> moats;
  std::vector<Payment> payments;
  Purchase purchase;
  std::vector<NodeId> kills;  // terminals marked dead by this purchase
};

struct GrowthTrace {
  Algorithm algorithm = Algorithm::Bucketed;
  std::string instance_hash;
  std::vector<NodeId> terminals;
  std::vector<IterationRecord> iterations;
  std::map<VertexSet, Rational> duals;  // y_S, keyed by moat vertex set

  std::vector<ArcId> purchased() const;
  Rational dual_total() const;
};

struct Solution {
  std::vector<ArcId> final_arcs;  // in purchase order
  std::map<ArcId, BucketKind> arc_labels;
  Rational total_cost;
  Rational dual_total;
  Rational lower_bound;  // dual_total / 2
};

struct SolveResult {
  Solution solution;
  GrowthTrace trace;
};

GrowthTrace grow_phase(const Instance& inst, Algorithm algorithm = Algorithm::Bucketed);

// Drops purchased arcs, latest first, whenever every terminal stays reachable.
Solution reverse_delete(const Instance& inst, const GrowthTrace& trace);

SolveResult solve(const Instance& inst);
SolveResult solve_standard_baseline(const Instance& inst);

struct AliveSnapshot {
  std::size_t iteration = 0;  // state at the start of this iteration; the last one is after termination
  std::vector<NodeId> alive;
};

// Replays kill events of a bucketed trace. Throws InvariantBreach unless every
// active moat holds exactly one alive terminal and no alive terminal is outside a moat.
std::vector<AliveSnapshot> alive_report(const GrowthTrace& trace);

}  // namespace qbdst
