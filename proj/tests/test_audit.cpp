#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qbdst/audit.hpp"
#include "qbdst/gen.hpp"
#include "support.hpp"

using namespace qbdst;

TEST_CASE("dual feasibility") {
  SUBCASE("single arc") {
    auto [sol, trace] = solve(testing::single_arc());
    auto df = verify_dual_feasibility(testing::single_arc(), trace);
    CHECK(df.ok);
    CHECK(df.load[0] == 5);
  }
  SUBCASE("four-node load reaches twice the cost on a4") {
    auto inst = testing::four_node(4);
    auto [sol, trace] = solve(inst);
    auto df = verify_dual_feasibility(inst, trace);
    CHECK(df.ok);
    CHECK(df.load[3] == 2);
    CHECK(df.load[3] == 2 * inst.arcs()[3].cost);
  }
  SUBCASE("inflated duals are caught") {
    auto inst = testing::single_arc();
    auto [sol, trace] = solve(inst);
    trace.duals[{1}] = 11;
    auto df = verify_dual_feasibility(inst, trace);
    CHECK_FALSE(df.ok);
    CHECK(df.violations == std::vector<ArcId>{ArcId{0}});
  }
  SUBCASE("antenna arcs stay within their cost") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto inst = normalize_parallel(testing::random_instance(seed, 8, 20, 5, true));
      auto [sol, trace] = solve(inst);
      auto df = verify_dual_feasibility(inst, trace);
      CHECK(df.ok);
      for (std::size_t e = 0; e < inst.arc_count(); ++e) {
        if (inst.is_antenna(ArcId{e})) CHECK(df.load[e] <= inst.arcs()[e].cost);
      }
    }
  }
}

TEST_CASE("cost identity") {
  SUBCASE("four-node instance") {
    auto inst = testing::four_node(4);
    auto [sol, trace] = solve(inst);
    auto ci = verify_cost_identity(inst, trace, sol);
    CHECK(ci.ok);
    CHECK(ci.per_iteration == std::vector<Rational>{1, 1, 2});
    CHECK(ci.charged == 4);
  }
  SUBCASE("single arc") {
    auto [sol, trace] = solve(testing::single_arc());
    auto ci = verify_cost_identity(testing::single_arc(), trace, sol);
    CHECK(ci.ok);
    CHECK(ci.charged == 5);
  }
  SUBCASE("bad example k=5") {
    auto inst = gen_bad_example(5, Rational(1, 100));
    auto [sol, trace] = solve(inst);
    CHECK(verify_cost_identity(inst, trace, sol).ok);
  }
  SUBCASE("wrong cost is detected") {
    auto inst = testing::four_node(4);
    auto [sol, trace] = solve(inst);
    sol.total_cost += 1;
    CHECK_FALSE(verify_cost_identity(inst, trace, sol).ok);
  }
}

TEST_CASE("counting lemmas") {
  SUBCASE("four-node iteration 0") {
    auto inst = testing::four_node(4);
    auto [sol, trace] = solve(inst);
    auto rep = verify_counting_lemmas(inst, trace, sol);
    CHECK(rep.ok);
    REQUIRE(rep.iterations.size() == 3);
    CHECK(rep.iterations[0].moat_count == 2);
    CHECK(rep.iterations[0].fbar_killer == 1);
    CHECK(rep.iterations[0].fbar_expansion == 0);
  }
  SUBCASE("one moat with one final antenna arc") {
    Instance inst(3, 0, {1}, {{2, 1, Rational(1)}, {0, 2, Rational(1)}});
    auto [sol, trace] = solve(inst);
    auto rep = verify_counting_lemmas(inst, trace, sol);
    CHECK(rep.ok);
    CHECK(rep.iterations[0].antenna_sum == 1);
    CHECK(rep.iterations[0].antenna_max == 1);
  }
  SUBCASE("bad example k=10") {
    auto inst = gen_bad_example(10, Rational(1, 100));
    auto [sol, trace] = solve(inst);
    auto rep = verify_counting_lemmas(inst, trace, sol);
    CHECK(rep.ok);
    for (const auto& c : rep.iterations) CHECK(c.ok());
  }
}

TEST_CASE("ratio report") {
  SUBCASE("four-node with opt") {
    auto inst = testing::four_node(4);
    auto [sol, trace] = solve(inst);
    auto r = ratio_report(inst, sol, Rational(4));
    CHECK(*r.ratio_vs_opt == 1);
    CHECK(*r.ratio_vs_lb == Rational(8, 5));
    CHECK_FALSE(r.guarantee);
    CHECK_FALSE(r.breach);
  }
  SUBCASE("single arc") {
    auto [sol, trace] = solve(testing::single_arc());
    CHECK(*ratio_report(testing::single_arc(), sol, std::nullopt).ratio_vs_lb == 2);
  }
  SUBCASE("bad example is within the planar guarantee") {
    auto inst = gen_bad_example(10, Rational(1, 100));
    auto [sol, trace] = solve(inst);
    auto r = ratio_report(inst, sol, std::nullopt);
    CHECK(*r.ratio_vs_lb <= 20);
    CHECK(r.guarantee == 20.0);
    CHECK_FALSE(r.breach);
  }
  SUBCASE("planar breach is flagged") {
    Instance inst(2, 0, {1}, {{0, 1, Rational(1)}}, {FamilyTag::Kind::PlanarBipartite, 0});
    Solution sol;
    sol.total_cost = 21;
    sol.lower_bound = 1;
    CHECK(ratio_report(inst, sol, std::nullopt).breach);
  }
  SUBCASE("minor-free guarantee") {
    Instance inst(2, 0, {1}, {{0, 1, Rational(1)}}, {FamilyTag::Kind::MinorFree, 4});
    Solution sol;
    sol.total_cost = 2;
    sol.lower_bound = 1;
    auto r = ratio_report(inst, sol, std::nullopt);
    CHECK(*r.guarantee == doctest::Approx(2.0 * (8.0 * 4 * 2 + 1)));
    CHECK_FALSE(r.breach);
  }
  SUBCASE("zero cost and bound") {
    Instance inst(2, 0, {1}, {{0, 1, Rational(0)}});
    auto [sol, trace] = solve(inst);
    auto r = ratio_report(inst, sol, Rational(0));
    CHECK(*r.ratio_vs_lb == 1);
    CHECK(*r.ratio_vs_opt == 1);
  }
}

TEST_CASE("audit_run") {
  SUBCASE("four-node instance passes everything") {
    auto inst = testing::four_node(4);
    auto [sol, trace] = solve(inst);
    auto rep = audit_run(inst, trace, sol, Rational(4));
    CHECK(rep.all_ok());
    CHECK(rep.cost_identity_ok == true);
    CHECK(rep.lemmas_ok == true);
    CHECK(rep.alive_ok == true);
    CHECK(rep.defects.empty());
    CHECK(to_json(rep).find("\"ok\":true") != std::string::npos);
  }
  SUBCASE("baseline runs skip the bucketed checks") {
    auto inst = gen_bad_example(4, Rational(1, 100));
    auto [sol, trace] = solve_standard_baseline(inst);
    auto rep = audit_run(inst, trace, sol);
    CHECK(rep.all_ok());
    CHECK_FALSE(rep.cost_identity_ok);
    CHECK_FALSE(rep.lemmas_ok);
  }
  SUBCASE("tampered payments are reported as defects") {
    auto inst = testing::four_node(4);
    auto [sol, trace] = solve(inst);
    trace.iterations[1].payments.back().bucket = BucketKind::Killer;
    auto rep = audit_run(inst, trace, sol);
    CHECK_FALSE(rep.payments_consistent);
    CHECK_FALSE(rep.all_ok());
  }
  SUBCASE("tampered moats are reported as defects") {
    auto inst = testing::four_node(4);
    auto [sol, trace] = solve(inst);
    trace.iterations[0].moats.pop_back();
    auto rep = audit_run(inst, trace, sol);
    CHECK_FALSE(rep.moats_consistent);
  }
  SUBCASE("every random run passes") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      auto inst = normalize_parallel(testing::random_instance(seed, 3 + seed % 9, 25, 7, true));
      for (auto* run : {&solve, &solve_standard_baseline}) {
        auto [sol, trace] = run(inst);
        auto rep = audit_run(inst, trace, sol);
        CHECK_MESSAGE(rep.all_ok(), "seed " << seed << ": " << to_json(rep));
      }
    }
  }
}
