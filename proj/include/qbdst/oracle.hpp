#pragma once

#include <stdexcept>
#include <vector>

#include "qbdst/instance.hpp"

namespace qbdst {

// Input exceeds what an exact method is allowed to attempt.
class OracleGuard : public std::length_error {
 public:
  using std::length_error::length_error;
};

class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OptResult {
  enum class Method { SubsetDp, BruteSubsets };

  Rational opt_cost;
  std::vector<ArcId> opt_arcs;  // ascending
  Method method = Method::SubsetDp;
};

inline constexpr std::size_t kDpMaxTerminals = 14;
inline constexpr std::size_t kBruteMaxArcs = 20;

// Terminal-subset dynamic program over directed shortest paths.
OptResult exact_opt_dp(const Instance& inst);

// Exhaustive search over arc subsets with at most n-1 arcs, pruned by the best cost found.
OptResult exact_opt_brute(const Instance& inst);

}  // namespace qbdst
