#include "qbdst/trace_io.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"

namespace qbdst {

using json = nlohmann::ordered_json;

namespace {

json nodes_to_json(const std::vector<NodeId>& set) {
  json out = json::array();
  for (NodeId v : set) out.push_back(v + 1);
  return out;
}

std::vector<NodeId> nodes_from_json(const json& j) {
  std::vector<NodeId> out;
  for (const auto& v : j) out.push_back(v.get<int>() - 1);
  return out;
}

}  // namespace

void write_trace(std::ostream& out, const GrowthTrace& trace) {
  json header;
  header["record"] = "header";
  header["instance_hash"] = trace.instance_hash;
  header["algorithm"] = to_string(trace.algorithm);
  header["terminals"] = nodes_to_json(trace.terminals);
  out << header.dump() << '\n';

  for (const auto& rec : trace.iterations) {
    json j;
    j["record"] = "iteration";
    j["l"] = rec.index;
    j["epsilon"] = to_string(rec.epsilon);
    j["moats"] = json::array();
    for (const auto& m : rec.moats) j["moats"].push_back(nodes_to_json(m));
    j["payments"] = json::array();
    for (const auto& p : rec.payments) {
      j["payments"].push_back({{"arc", p.arc.index},
                               {"bucket", to_string(p.bucket)},
                               {"moat", nodes_to_json(p.moat)},
                               {"amount", to_string(p.amount)}});
    }
    j["purchase"] = {{"arc", rec.purchase.arc.index}, {"label", to_string(rec.purchase.label)}};
    j["kills"] = nodes_to_json(rec.kills);
    out << j.dump() << '\n';
  }
}

GrowthTrace read_trace(std::istream& in) {
  GrowthTrace trace;
  bool saw_header = false;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
      const std::string kind = j.at("record").get<std::string>();
      if (kind == "header") {
        trace.instance_hash = j.at("instance_hash").get<std::string>();
        trace.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        trace.terminals = nodes_from_json(j.at("terminals"));
        saw_header = true;
        continue;
      }
      if (kind != "iteration") throw std::invalid_argument("unknown record '" + kind + "'");
      IterationRecord rec;
      rec.index = j.at("l").get<std::size_t>();
      rec.epsilon = parse_rational(j.at("epsilon").get<std::string>());
      for (const auto& m : j.at("moats")) rec.moats.push_back(nodes_from_json(m));
      for (const auto& p : j.at("payments")) {
        rec.payments.push_back({ArcId{p.at("arc").get<std::size_t>()},
                                parse_bucket_kind(p.at("bucket").get<std::string>()), nodes_from_json(p.at("moat")),
                                parse_rational(p.at("amount").get<std::string>())});
      }
      rec.purchase = {ArcId{j.at("purchase").at("arc").get<std::size_t>()},
                      parse_bucket_kind(j.at("purchase").at("label").get<std::string>())};
      rec.kills = nodes_from_json(j.at("kills"));
      for (const auto& m : rec.moats) trace.duals[m] += rec.epsilon;
      trace.iterations.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!saw_header) throw std::runtime_error("trace has no header record");
  return trace;
}

}  // namespace qbdst
