#include "qbdst/instance.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

namespace qbdst {

std::string to_string(const FamilyTag& tag) {
  switch (tag.kind) {
    case FamilyTag::Kind::PlanarBipartite:
      return "planar_bipartite";
    case FamilyTag::Kind::MinorFree:
      return "minor_free " + std::to_string(tag.minor_order);
    case FamilyTag::Kind::Unknown:
      break;
  }
  return "unknown";
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

Instance::Instance(int node_count, NodeId root, std::vector<NodeId> terminals, std::vector<Arc> arcs,
                   FamilyTag family)
    : node_count_(node_count),
      root_(root),
      terminals_(std::move(terminals)),
      arcs_(std::move(arcs)),
      family_(family) {
  if (node_count_ <= 0) throw std::invalid_argument("node count must be positive");
  auto in_range = [&](NodeId v) { return v >= 0 && v < node_count_; };
  if (!in_range(root_)) throw std::invalid_argument("root out of range");
  for (NodeId t : terminals_) {
    if (!in_range(t)) throw std::invalid_argument("terminal " + std::to_string(t + 1) + " out of range");
  }
  for (const Arc& a : arcs_) {
    if (!in_range(a.tail) || !in_range(a.head)) {
      throw std::invalid_argument("arc endpoint out of range");
    }
  }
  std::sort(terminals_.begin(), terminals_.end());
  terminals_.erase(std::unique(terminals_.begin(), terminals_.end()), terminals_.end());
  if (auto it = std::find(terminals_.begin(), terminals_.end(), root_); it != terminals_.end()) {
    terminals_.erase(it);
    root_listed_as_terminal_ = true;
  }
  roles_.assign(node_count_, NodeRole::Steiner);
  for (NodeId t : terminals_) roles_[t] = NodeRole::Terminal;
  roles_[root_] = NodeRole::Root;
}

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

int parse_int(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "expected integer, got '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError(line, "expected integer, got '" + tok + "'");
  return value;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  std::optional<int> nodes;
  std::optional<NodeId> root;
  bool saw_terminals = false;
  bool saw_end = false;
  std::vector<NodeId> terminals;
  std::vector<Arc> arcs;
  FamilyTag family;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto node = [&](const std::string& tok) {
    int id = parse_int(tok, line_no);
    if (id < 1 || id > *nodes) {
      throw ParseError(line_no, "node id " + tok + " out of range 1.." + std::to_string(*nodes));
    }
    return id - 1;
  };

  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto tok = tokenize(raw);
    if (tok.empty()) continue;
    if (saw_end) throw ParseError(line_no, "content after END");
    const std::string& key = tok[0];

    if (key != "NODES" && !nodes) throw ParseError(line_no, "NODES must precede " + key);
    if (key == "NODES") {
      if (nodes) throw ParseError(line_no, "duplicate NODES");
      if (tok.size() != 2) throw ParseError(line_no, "NODES takes one argument");
      nodes = parse_int(tok[1], line_no);
      if (*nodes <= 0) throw ParseError(line_no, "NODES must be positive");
    } else if (key == "ROOT") {
      if (root) throw ParseError(line_no, "duplicate ROOT");
      if (tok.size() != 2) throw ParseError(line_no, "ROOT takes one argument");
      root = node(tok[1]);
    } else if (key == "TERMINALS") {
      saw_terminals = true;
      for (std::size_t i = 1; i < tok.size(); ++i) terminals.push_back(node(tok[i]));
    } else if (key == "FAMILY") {
      if (tok.size() == 2 && tok[1] == "planar_bipartite") {
        family = {FamilyTag::Kind::PlanarBipartite, 0};
      } else if (tok.size() == 2 && tok[1] == "unknown") {
        family = {};
      } else if (tok.size() == 3 && tok[1] == "minor_free") {
        int r = parse_int(tok[2], line_no);
        if (r < 2) throw ParseError(line_no, "minor_free order must be at least 2");
        family = {FamilyTag::Kind::MinorFree, r};
      } else {
        throw ParseError(line_no, "unknown FAMILY");
      }
    } else if (key == "ARC") {
      if (tok.size() != 4) throw ParseError(line_no, "ARC takes <tail> <head> <cost>");
      Arc a{node(tok[1]), node(tok[2]), {}};
      try {
        a.cost = parse_rational(tok[3]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
      if (a.cost < 0) throw ParseError(line_no, "negative cost " + tok[3]);
      arcs.push_back(std::move(a));
    } else if (key == "END") {
      if (tok.size() != 1) throw ParseError(line_no, "END takes no arguments");
      saw_end = true;
    } else {
      throw ParseError(line_no, "unknown record '" + key + "'");
    }
  }

  if (!nodes) throw ParseError(line_no, "missing NODES section");
  if (!root) throw ParseError(line_no, "missing ROOT section");
  if (!saw_terminals) throw ParseError(line_no, "missing TERMINALS section");
  if (!saw_end) throw ParseError(line_no, "missing END");
  return Instance(*nodes, *root, std::move(terminals), std::move(arcs), family);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "NODES " << inst.node_count() << '\n';
  out << "ROOT " << inst.root() + 1 << '\n';
  out << "TERMINALS";
  for (NodeId t : inst.terminals()) out << ' ' << t + 1;
  out << '\n';
  out << "FAMILY " << to_string(inst.family()) << '\n';
  for (const Arc& a : inst.arcs()) {
    out << "ARC " << a.tail + 1 << ' ' << a.head + 1 << ' ' << to_string(a.cost) << '\n';
  }
  out << "END\n";
  return out.str();
}

std::vector<bool> reachable_from_root(const Instance& inst, const std::vector<bool>& arc_mask) {
  std::vector<std::vector<NodeId>> out(inst.node_count());
  for (std::size_t i = 0; i < inst.arc_count(); ++i) {
    if (arc_mask[i]) out[inst.arcs()[i].tail].push_back(inst.arcs()[i].head);
  }
  std::vector<bool> seen(inst.node_count(), false);
  std::vector<NodeId> stack{inst.root()};
  seen[inst.root()] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : out[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

bool is_feasible(const Instance& inst, const std::vector<bool>& arc_mask) {
  auto seen = reachable_from_root(inst, arc_mask);
  return std::all_of(inst.terminals().begin(), inst.terminals().end(), [&](NodeId t) { return seen[t]; });
}

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto arc_name = [&](std::size_t i) {
    const Arc& a = inst.arcs()[i];
    return "arc #" + std::to_string(i) + " (" + std::to_string(a.tail + 1) + "->" +
           std::to_string(a.head + 1) + ")";
  };

  if (inst.root_listed_as_terminal()) {
    out.push_back({"root is terminal", "root " + std::to_string(inst.root() + 1) + " listed among terminals"});
  }
  std::map<std::pair<NodeId, NodeId>, std::size_t> first_seen;
  for (std::size_t i = 0; i < inst.arc_count(); ++i) {
    const Arc& a = inst.arcs()[i];
    if (a.cost < 0) out.push_back({"negative cost", arc_name(i)});
    if (a.tail == a.head) out.push_back({"self-loop", arc_name(i)});
    if (inst.is_steiner(a.tail) && inst.is_steiner(a.head)) {
      out.push_back({"quasi-bipartite", arc_name(i) + " joins two Steiner nodes"});
    }
    auto [it, fresh] = first_seen.emplace(std::pair{a.tail, a.head}, i);
    if (!fresh) out.push_back({"parallel arcs", arc_name(i) + " parallel to arc #" + std::to_string(it->second)});
  }
  auto seen = reachable_from_root(inst, std::vector<bool>(inst.arc_count(), true));
  for (NodeId t : inst.terminals()) {
    if (!seen[t]) out.push_back({"unreachable terminal", "terminal " + std::to_string(t + 1)});
  }
  return out;
}

Instance normalize_parallel(const Instance& inst) {
  std::map<std::pair<NodeId, NodeId>, std::size_t> best;
  for (std::size_t i = 0; i < inst.arc_count(); ++i) {
    const Arc& a = inst.arcs()[i];
    auto [it, fresh] = best.emplace(std::pair{a.tail, a.head}, i);
    if (!fresh && a.cost < inst.arcs()[it->second].cost) it->second = i;
  }
  std::vector<bool> keep(inst.arc_count(), false);
  for (const auto& [ends, idx] : best) keep[idx] = true;
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < inst.arc_count(); ++i) {
    if (keep[i]) arcs.push_back(inst.arcs()[i]);
  }
  std::vector<NodeId> terminals = inst.terminals();
  if (inst.root_listed_as_terminal()) terminals.push_back(inst.root());
  return Instance(inst.node_count(), inst.root(), std::move(terminals), std::move(arcs), inst.family());
}

std::string instance_hash(const Instance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_instance(inst)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qbdst
