#pragma once

#include <string>
#include <vector>

#include "qbdst/instance.hpp"

namespace qbdst {

// Sorted ascending. Used both as a vertex set and as its canonical key.
using VertexSet = std::vector<NodeId>;

// Membership mask over the instance arc list.
using ArcSet = std::vector<bool>;

inline ArcSet empty_arc_set(const Instance& inst) { return ArcSet(inst.arc_count(), false); }
ArcSet arc_set_of(const Instance& inst, const std::vector<ArcId>& arcs);

bool contains(const VertexSet& set, NodeId v);
bool is_proper_subset(const VertexSet& small, const VertexSet& big);
std::string to_string(const VertexSet& set);  // 1-based, e.g. "{2,3}"

// A strongly connected component of (V, F) holding the root or a terminal.
struct Scc {
  VertexSet vertices;
  bool contains_root = false;

  const VertexSet& key() const { return vertices; }
};

// A minimal violated set: one non-root Scc plus the Steiner nodes with an F-arc into it.
struct Moat {
  Scc core;
  VertexSet steiner_tails;
  VertexSet key;  // core ∪ steiner_tails

  bool contains(NodeId v) const { return qbdst::contains(key, v); }
  bool entered_by(const Arc& a) const { return contains(a.head) && !contains(a.tail); }
};

enum class Role { Antenna, Expansion, Killer, None };
std::string to_string(Role role);

struct MoatRole {
  VertexSet moat;
  Role role = Role::None;
  bool operator==(const MoatRole&) const = default;
};

// Sccs of (V, F) containing the root or a terminal, ordered by smallest member.
std::vector<Scc> scc_decompose(const Instance& inst, const ArcSet& F);

// Active moats with respect to F, ordered by key.
std::vector<Moat> active_moats(const Instance& inst, const ArcSet& F);

// Test oracle: inclusion-minimal violated sets by subset enumeration.
// Throws std::length_error when the instance has more than 16 nodes.
std::vector<VertexSet> enumerate_minimal_violated_brute(const Instance& inst, const ArcSet& F);

// Role of arc a for each moat it enters. `moats` must be active_moats(inst, F)
// and a must not be in F. An antenna arc is Antenna for the moat holding its
// head; any other arc is Expansion for moat A when some active set of F ∪ {a}
// strictly contains the core of A, and Killer otherwise.
std::vector<MoatRole> classify_arc(const Instance& inst, const ArcSet& F, const std::vector<Moat>& moats,
                                   ArcId a);

}  // namespace qbdst
