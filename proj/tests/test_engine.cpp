#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <sstream>

#include "qbdst/engine.hpp"
#include "qbdst/gen.hpp"
#include "qbdst/trace_io.hpp"
#include "support.hpp"

using namespace qbdst;

namespace {

std::vector<Rational> epsilons(const GrowthTrace& t) {
  std::vector<Rational> out;
  for (const auto& it : t.iterations) out.push_back(it.epsilon);
  return out;
}

std::vector<std::pair<std::size_t, BucketKind>> purchases(const GrowthTrace& t) {
  std::vector<std::pair<std::size_t, BucketKind>> out;
  for (const auto& it : t.iterations) out.emplace_back(it.purchase.arc.index, it.purchase.label);
  return out;
}

std::vector<std::size_t> indices(const std::vector<ArcId>& arcs) {
  std::vector<std::size_t> out;
  for (ArcId a : arcs) out.push_back(a.index);
  return out;
}

std::string trace_bytes(const GrowthTrace& t) {
  std::ostringstream os;
  write_trace(os, t);
  return os.str();
}

// r=0, t1=1, t2=2, s=3 Steiner feeding both terminals, and r->s.
Instance shared_steiner() {
  return Instance(4, 0, {1, 2}, {{3, 1, Rational(1)}, {3, 2, Rational(1)}, {0, 3, Rational(1)}});
}

}  // namespace

TEST_CASE("compute_epsilon") {
  SUBCASE("single payer") {
    auto inst = testing::single_arc();
    auto F = empty_arc_set(inst);
    auto step = compute_epsilon(inst, F, active_moats(inst, F), BucketState(1));
    CHECK(step.epsilon == 5);
    CHECK(step.tight == std::vector<TightBucket>{{ArcId{0}, BucketKind::Killer}});
  }
  SUBCASE("two moats share one killer bucket") {
    auto inst = shared_steiner();
    auto F = arc_set_of(inst, {ArcId{0}, ArcId{1}});
    auto moats = active_moats(inst, F);
    REQUIRE(moats.size() == 2);
    auto step = compute_epsilon(inst, F, moats, BucketState(3));
    CHECK(step.epsilon == Rational(1, 2));
    CHECK(step.tight == std::vector<TightBucket>{{ArcId{2}, BucketKind::Killer}});
  }
  SUBCASE("minimum of remaining over payers") {
    Instance inst(3, 0, {1, 2}, {{0, 1, Rational(3)}, {2, 1, Rational(1)}});
    BucketState buckets(2);
    buckets[0].killer = 1;
    std::vector<BucketDemand> demands{{ArcId{0}, BucketKind::Killer, {{1}}},
                                      {ArcId{1}, BucketKind::Expansion, {{1}}}};
    auto step = compute_epsilon(inst, demands, buckets);
    CHECK(step.epsilon == 1);
    CHECK(step.tight == std::vector<TightBucket>{{ArcId{1}, BucketKind::Expansion}});
  }
  SUBCASE("zero epsilon when a bucket is already full") {
    Instance inst(2, 0, {1}, {{0, 1, Rational(2)}});
    BucketState buckets(1);
    buckets[0].killer = 2;
    auto step = compute_epsilon(inst, {{ArcId{0}, BucketKind::Killer, {{1}}}}, buckets);
    CHECK(step.epsilon == 0);
  }
  SUBCASE("no payable bucket stalls") {
    Instance inst(2, 0, {1}, {});
    CHECK_THROWS_AS(compute_epsilon(inst, std::vector<BucketDemand>{}, BucketState{}), StalledGrowth);
    CHECK_THROWS_AS(grow_phase(inst), StalledGrowth);
  }
}

TEST_CASE("grow_phase on a single arc") {
  auto trace = grow_phase(testing::single_arc());
  REQUIRE(trace.iterations.size() == 1);
  CHECK(trace.iterations[0].epsilon == 5);
  CHECK(purchases(trace) == std::vector<std::pair<std::size_t, BucketKind>>{{0, BucketKind::Killer}});
  CHECK(trace.dual_total() == 5);
}

TEST_CASE("four-node instance with c(a2) = 4") {
  auto inst = testing::four_node(4);
  auto [sol, trace] = solve(inst);
  CHECK(epsilons(trace) == std::vector<Rational>{1, 1, 2});
  CHECK(purchases(trace) == std::vector<std::pair<std::size_t, BucketKind>>{
                                {2, BucketKind::Killer}, {3, BucketKind::Expansion}, {0, BucketKind::Killer}});
  CHECK(trace.iterations[0].kills == std::vector<NodeId>{1});
  CHECK(trace.dual_total() == 5);
  CHECK(indices(sol.final_arcs) == std::vector<std::size_t>{3, 0});
  CHECK(sol.total_cost == 4);
  CHECK(sol.lower_bound == Rational(5, 2));
}

TEST_CASE("four-node instance with c(a2) = 3") {
  // Iteration 2 finds the killer buckets of a1 and a2 with room 2 and 1.
  auto inst = testing::four_node(3);
  auto [sol, trace] = solve(inst);
  CHECK(epsilons(trace) == std::vector<Rational>{1, 1, 1});
  CHECK(purchases(trace) == std::vector<std::pair<std::size_t, BucketKind>>{
                                {2, BucketKind::Killer}, {3, BucketKind::Expansion}, {1, BucketKind::Killer}});
  CHECK(trace.dual_total() == 4);
  CHECK(indices(sol.final_arcs) == std::vector<std::size_t>{2, 1});
  CHECK(sol.total_cost == 4);
}

TEST_CASE("bad example labels") {
  for (int k : {3, 5, 8}) {
    auto inst = gen_bad_example(k, Rational(1, 100));
    auto trace = grow_phase(inst);
    std::map<BucketKind, int> labels;
    for (const auto& it : trace.iterations) {
      const Arc& a = inst.arc(it.purchase.arc);
      if (a.cost == 1 && a.tail != inst.root()) ++labels[it.purchase.label];
    }
    CHECK(labels[BucketKind::Killer] == 1);
    CHECK(labels[BucketKind::Expansion] == k - 1);
    CHECK(labels.size() == 2);
  }
}

TEST_CASE("reverse_delete") {
  SUBCASE("an arborescence is kept whole") {
    Instance inst(3, 0, {1, 2}, {{0, 1, Rational(1)}, {1, 2, Rational(1)}});
    auto [sol, trace] = solve(inst);
    CHECK(sol.final_arcs.size() == trace.iterations.size());
  }
  SUBCASE("a redundant antenna arc is dropped") {
    Instance inst(3, 0, {1}, {{0, 1, Rational(1)}, {2, 1, Rational(1)}, {0, 2, Rational(1)}});
    GrowthTrace trace;
    for (std::size_t i : {0, 2, 1}) {
      IterationRecord rec;
      rec.index = trace.iterations.size();
      rec.purchase = {ArcId{i}, inst.is_antenna(ArcId{i}) ? BucketKind::Antenna : BucketKind::Killer};
      trace.iterations.push_back(rec);
    }
    auto sol = reverse_delete(inst, trace);
    CHECK(indices(sol.final_arcs) == std::vector<std::size_t>{0});
    CHECK(sol.total_cost == 1);
  }
  SUBCASE("infeasible purchases are rejected") {
    CHECK_THROWS_AS(reverse_delete(testing::single_arc(), GrowthTrace{}), std::invalid_argument);
  }
}

TEST_CASE("solve on a single arc") {
  auto [sol, trace] = solve(testing::single_arc());
  CHECK(sol.total_cost == 5);
  CHECK(sol.lower_bound == Rational(5, 2));
  CHECK(sol.total_cost / sol.lower_bound == 2);
}

TEST_CASE("baseline") {
  SUBCASE("single arc matches solve") {
    auto a = solve(testing::single_arc());
    auto b = solve_standard_baseline(testing::single_arc());
    CHECK(a.solution.total_cost == b.solution.total_cost);
    CHECK(a.solution.dual_total == b.solution.dual_total);
    CHECK(indices(a.solution.final_arcs) == indices(b.solution.final_arcs));
  }
  SUBCASE("bad example pays for every cost-1 arc") {
    const int k = 10;
    auto [sol, trace] = solve_standard_baseline(gen_bad_example(k, Rational(1, 100)));
    CHECK(sol.total_cost >= k + 1);
  }
  SUBCASE("star from the root") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      std::mt19937_64 rng(seed);
      const int n = 2 + static_cast<int>(rng() % 8);
      std::vector<NodeId> terms;
      std::vector<Arc> arcs;
      for (int v = 1; v < n; ++v) {
        terms.push_back(v);
        arcs.push_back({0, v, Rational(static_cast<long>(1 + rng() % 9))});
      }
      Instance inst(n, 0, terms, arcs);
      auto a = solve(inst);
      auto b = solve_standard_baseline(inst);
      CHECK(a.solution.total_cost == b.solution.total_cost);
      CHECK(a.solution.dual_total == b.solution.dual_total);
      CHECK(indices(a.solution.final_arcs) == indices(b.solution.final_arcs));
      CHECK(epsilons(a.trace) == epsilons(b.trace));
    }
  }
}

TEST_CASE("alive_report") {
  SUBCASE("four-node instance") {
    auto snaps = alive_report(grow_phase(testing::four_node(4)));
    REQUIRE(snaps.size() == 4);
    CHECK(snaps[0].alive == std::vector<NodeId>{1, 2});
    CHECK(snaps[1].alive == std::vector<NodeId>{2});
  }
  SUBCASE("single arc: alive through the last iteration") {
    auto snaps = alive_report(grow_phase(testing::single_arc()));
    REQUIRE(snaps.size() == 2);
    CHECK(snaps[0].alive == std::vector<NodeId>{1});
  }
  SUBCASE("tampered kills are reported") {
    auto trace = grow_phase(testing::four_node(4));
    trace.iterations[0].kills.clear();
    CHECK_THROWS_AS(alive_report(trace), InvariantBreach);
  }
  SUBCASE("baseline traces are rejected") {
    CHECK_THROWS_AS(alive_report(grow_phase(testing::single_arc(), Algorithm::Standard)), std::invalid_argument);
  }
}

TEST_CASE("growth properties on random instances") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 2 + static_cast<int>(seed % 10);
    auto inst = normalize_parallel(testing::random_instance(seed, n, 3 * n, 6, true));
    REQUIRE(validate(inst).empty());
    for (Algorithm alg : {Algorithm::Bucketed, Algorithm::Standard}) {
      auto trace = grow_phase(inst, alg);
      CHECK(trace.iterations.size() <= inst.arc_count());
      std::set<ArcId> bought;
      std::map<std::pair<std::size_t, BucketKind>, Rational> fill;
      std::vector<Rational> paid(inst.arc_count(), 0);
      std::vector<Rational> load(inst.arc_count(), 0);
      for (const auto& it : trace.iterations) {
        CHECK(it.epsilon >= 0);
        CHECK(bought.insert(it.purchase.arc).second);
        for (const auto& p : it.payments) {
          CHECK(p.amount == it.epsilon);
          fill[{p.arc.index, p.bucket}] += p.amount;
          paid[p.arc.index] += p.amount;
          CHECK(fill[{p.arc.index, p.bucket}] <= inst.arc(p.arc).cost);
          if (alg == Algorithm::Bucketed) {
            CHECK((p.bucket == BucketKind::Antenna) == inst.is_antenna(p.arc));
          }
        }
        for (std::size_t e = 0; e < inst.arc_count(); ++e) {
          const Arc& a = inst.arcs()[e];
          for (const auto& key : it.moats) {
            if (contains(key, a.head) && !contains(key, a.tail)) load[e] += it.epsilon;
          }
        }
        CHECK(fill[{it.purchase.arc.index, it.purchase.label}] == inst.arc(it.purchase.arc).cost);
      }
      for (std::size_t e = 0; e < inst.arc_count(); ++e) {
        CHECK(paid[e] == load[e]);
        CHECK(load[e] <= 2 * inst.arcs()[e].cost);
      }
      auto sol = reverse_delete(inst, trace);
      CHECK(is_feasible(inst, arc_set_of(inst, sol.final_arcs)));
      CHECK(sol.lower_bound <= sol.total_cost);
      if (alg == Algorithm::Bucketed) CHECK_NOTHROW(alive_report(trace));
    }
  }
}

TEST_CASE("traces are deterministic and round-trip") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto inst = testing::random_instance(seed, 3 + seed % 7, 15, 5, true);
    for (Algorithm alg : {Algorithm::Bucketed, Algorithm::Standard}) {
      auto t1 = grow_phase(inst, alg);
      auto t2 = grow_phase(parse_instance(serialize_instance(inst)), alg);
      const std::string bytes = trace_bytes(t1);
      CHECK(bytes == trace_bytes(t2));
      std::istringstream in(bytes);
      auto back = read_trace(in);
      CHECK(trace_bytes(back) == bytes);
      CHECK(back.duals == t1.duals);
      CHECK(back.algorithm == alg);
    }
  }
}

TEST_CASE("trace reader rejects malformed input") {
  std::istringstream no_header("{\"record\":\"iteration\",\"l\":0}\n");
  CHECK_THROWS(read_trace(no_header));
  std::istringstream garbage("not json\n");
  CHECK_THROWS(read_trace(garbage));
}
