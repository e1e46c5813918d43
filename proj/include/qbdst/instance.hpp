#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qbdst/rational.hpp"

namespace qbdst {

// Nodes are 0-based in memory and 1-based in files and reports.
using NodeId = int;

// Position in the instance arc list. Arc order is the purchase tie-break order.
struct ArcId {
  std::size_t index = 0;
  auto operator<=>(const ArcId&) const = default;
};

struct Arc {
  NodeId tail = 0;
  NodeId head = 0;
  Rational cost;
};

struct FamilyTag {
  enum class Kind { Unknown, PlanarBipartite, MinorFree };
  Kind kind = Kind::Unknown;
  int minor_order = 0;  // r of K_r, only for MinorFree

  bool operator==(const FamilyTag&) const = default;
};

std::string to_string(const FamilyTag& tag);

enum class NodeRole { Root, Terminal, Steiner };

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A directed Steiner tree instance. Immutable after construction.
class Instance {
 public:
  // Throws std::invalid_argument if any node id is outside [0, node_count).
  // Terminals are sorted and deduplicated; the root is never classified as a terminal.
  Instance(int node_count, NodeId root, std::vector<NodeId> terminals, std::vector<Arc> arcs,
           FamilyTag family = {});

  int node_count() const { return node_count_; }
  NodeId root() const { return root_; }
  const std::vector<NodeId>& terminals() const { return terminals_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t arc_count() const { return arcs_.size(); }
  const Arc& arc(ArcId id) const { return arcs_[id.index]; }
  const FamilyTag& family() const { return family_; }

  NodeRole role(NodeId v) const { return roles_[v]; }
  bool is_terminal(NodeId v) const { return roles_[v] == NodeRole::Terminal; }
  bool is_steiner(NodeId v) const { return roles_[v] == NodeRole::Steiner; }

  // Tail is Steiner and head is a terminal.
  bool is_antenna(ArcId id) const {
    const Arc& a = arc(id);
    return is_steiner(a.tail) && is_terminal(a.head);
  }

  // True when the instance listed the root among its terminals.
  bool root_listed_as_terminal() const { return root_listed_as_terminal_; }

 private:
  int node_count_;
  NodeId root_;
  std::vector<NodeId> terminals_;
  std::vector<Arc> arcs_;
  FamilyTag family_;
  std::vector<NodeRole> roles_;
  bool root_listed_as_terminal_ = false;
};

struct Violation {
  std::string kind;  // "quasi-bipartite", "unreachable terminal", ...
  std::string detail;
};

Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& inst);

// Empty iff every instance invariant holds and every terminal is reachable
// from the root using all arcs.
std::vector<Violation> validate(const Instance& inst);

// Keeps only the cheapest arc (smallest id on ties) of each (tail, head) group.
Instance normalize_parallel(const Instance& inst);

// FNV-1a over the serialized form, as 16 hex digits.
std::string instance_hash(const Instance& inst);

// Reachability from the root along arcs whose mask bit is set.
std::vector<bool> reachable_from_root(const Instance& inst, const std::vector<bool>& arc_mask);
bool is_feasible(const Instance& inst, const std::vector<bool>& arc_mask);

}  // namespace qbdst
