#include <doctest.h>

#include <algorithm>
#include <bit>
#include <iterator>
#include <set>

#include "islanding/power_circle.hpp"
#include "islanding/rounding.hpp"
#include "support.hpp"

using namespace islanding;
using namespace islanding::testing;

namespace {

SupplyRegion circle_of(const Network& net, BusId origin, double capacity,
                       double g = 1.0) {
  return expand_circle(net, std::span(&origin, 1), capacity, g);
}

}  // namespace

TEST_SUITE("power_circle") {

TEST_CASE("stable output") {
  CHECK(stable_output({"DG5", 52, 1300, 1300, 0}) == 1300.0);
  CHECK(stable_output({"X", 1, 100, 100, 100}) == 0.0);
  CHECK(stable_output({"X", 1, 60, 50.7, 10.2}) == 40.0);
  CHECK(stable_output({"X", 1, 60, 50.7, 10.2}, 0.1) == doctest::Approx(40.5));
  CHECK(stable_output({"X", 1, 60, 5.0, 10.0}) == 0.0);
}

TEST_CASE("zero capacity keeps only the origin") {
  const Network net = make_network({{0.0}, {1.0}}, {{1, 2}});
  const SupplyRegion r = circle_of(net, 1, 0.0);
  CHECK(r.members == std::vector<BusId>{1});
  CHECK(r.surplus == 0.0);
  CHECK(r.committed_load == 0.0);
}

TEST_CASE("star: result has maximum cardinality") {
  // Center 1, leaves 2..5 with loads 3, 5, 4, 6 and capacity 9: no three
  // leaves fit, some pairs do.
  const std::vector<double> leaf_loads{3, 5, 4, 6};
  const Network net = make_network(
      {{0}, {leaf_loads[0]}, {leaf_loads[1]}, {leaf_loads[2]}, {leaf_loads[3]}},
      {{1, 2}, {1, 3}, {1, 4}, {1, 5}});
  const double capacity = 9.0;
  const SupplyRegion r = circle_of(net, 1, capacity);

  std::size_t best = 0;
  for (unsigned mask = 0; mask < 16; ++mask) {
    double sum = 0.0;
    for (unsigned k = 0; k < 4; ++k)
      if (mask >> k & 1u) sum += leaf_loads[k];
    if (sum <= capacity)
      best = std::max<std::size_t>(best, std::popcount(mask));
  }
  CHECK(best == 2);
  CHECK(r.members.size() == 1 + best);
  // Larger load first within the ring: 6 then 3.
  CHECK(r.members == std::vector<BusId>{1, 2, 5});
  CHECK(r.surplus == 0.0);
}

TEST_CASE("star: greedy admission is not maximum cardinality in general") {
  // Load-descending admission takes the 7.5 kW leaf and then nothing else
  // fits, although the 1 and 2 kW leaves together would.
  const Network net = make_network({{0}, {1}, {2}, {7.5}, {100}},
                                   {{1, 2}, {1, 3}, {1, 4}, {1, 5}});
  const SupplyRegion r = circle_of(net, 1, 8.0);
  CHECK(r.members == std::vector<BusId>{1, 4});
}

TEST_CASE("weight comes before load inside a ring") {
  const Network net = make_network(
      {{0}, {5, Priority::Tertiary}, {4, Priority::Primary}}, {{1, 2}, {1, 3}});
  CHECK(circle_of(net, 1, 5.0).members == std::vector<BusId>{1, 3});
}

TEST_CASE("a rejected bus blocks its subtree") {
  // 1 - 2(50) - 3(1): bus 3 would fit but is only reachable through 2.
  const Network net = make_network({{0}, {50}, {1}}, {{1, 2}, {2, 3}});
  CHECK(circle_of(net, 1, 10.0).members == std::vector<BusId>{1});
}

TEST_CASE("loads are rounded up and capacity down") {
  const Network net = make_network({{0}, {4.2}, {4.2}}, {{1, 2}, {1, 3}});
  // 9.9 -> 9 usable; 4.2 -> 5 each; only one fits.
  const SupplyRegion r = circle_of(net, 1, 9.9);
  CHECK(r.members.size() == 2);
  CHECK(r.capacity == 9.0);
  CHECK(r.committed_load == 5.0);
  CHECK(r.surplus == 4.0);
  // At g = 0.1 both fit: 4.2 + 4.2 = 8.4 <= 9.9.
  CHECK(circle_of(net, 1, 9.9, 0.1).members.size() == 3);
}

TEST_CASE("origin checks") {
  const Network net = make_network({{0}, {1}}, {{1, 2}});
  CHECK_THROWS_AS(circle_of(net, 7, 1.0), std::invalid_argument);
  const BranchKey cut{1, 2};
  const Network split = apply_faults(net, std::span(&cut, 1));
  const std::vector<BusId> both{1, 2};
  CHECK_THROWS_AS(expand_circle(split, both, 5.0), std::invalid_argument);
}

TEST_CASE("DG bus whose own load exceeds the capacity") {
  const Network net = make_network({{0}, {50}, {5}}, {{1, 2}, {2, 3}},
                                   {make_dg("G", 2, 30)});
  const ReachableRegion region{{2, 3}, false, {"G"}};
  const BranchKey cut{1, 2};
  const Network faulted = apply_faults(net, std::span(&cut, 1));
  const auto rs = max_supply_regions(faulted, region);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].unserved_roots == std::vector<BusId>{2});
  CHECK(rs[0].committed_load == 5.0);
  CHECK(rs[0].surplus == 25.0);
  CHECK(rs[0].contains(2));

  // Single bus, nothing else around.
  const Network lone = make_network({{50}}, {}, {make_dg("G", 1, 30)});
  const auto only = max_supply_regions(lone, ReachableRegion{{1}, true, {"G"}});
  REQUIRE(only.size() == 1);
  CHECK(only[0].members == std::vector<BusId>{1});
  CHECK(only[0].committed_load == 0.0);
  CHECK(only[0].surplus == 30.0);
}

TEST_CASE("merge: disjoint regions are returned unchanged") {
  const Network net = make_network({{0}, {1}, {0}, {1}, {9}},
                                   {{1, 2}, {2, 5}, {5, 3}, {3, 4}});
  const std::vector<SupplyRegion> in{circle_of(net, 1, 1.0),
                                     circle_of(net, 3, 1.0)};
  const auto out = merge_overlapping(net, in);
  REQUIRE(out.size() == 2);
  CHECK(out[0].members == in[0].members);
  CHECK(out[1].members == in[1].members);
}

TEST_CASE("merge: pooled surplus captures one more bus") {
  // 1(G1) - 2(0.6) - 3(0.4) - 4(0.6) - 5(G2), and 6(0.4) hanging off 3.
  // Each circle has capacity 1.0 and stops with no surplus; together they
  // share bus 3, leaving 0.4 for bus 6.
  const Network net =
      make_network({{0}, {0.6}, {0.4}, {0.6}, {0}, {0.4}},
                   {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 6}});
  const double g = 0.1;
  const SupplyRegion a = circle_of(net, 1, 1.0, g);
  const SupplyRegion b = circle_of(net, 5, 1.0, g);
  CHECK(a.members == std::vector<BusId>{1, 2, 3});
  CHECK(b.members == std::vector<BusId>{3, 4, 5});
  CHECK(a.surplus == doctest::Approx(0.0));

  const auto merged = merge_overlapping(net, {a, b}, g);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].members == std::vector<BusId>{1, 2, 3, 4, 5, 6});
  CHECK(merged[0].capacity == doctest::Approx(2.0));
  CHECK(merged[0].committed_load == doctest::Approx(2.0));
  CHECK(merged[0].surplus == doctest::Approx(0.0));
  CHECK(merged[0].root_buses == std::vector<BusId>{1, 5});
}

TEST_CASE("capacity monotonicity does not hold for skip admission") {
  // Ring 1 holds a 3 kW and a 6 kW bus; the 6 kW bus leads to a 1 kW bus.
  // At 7 kW the 3 kW bus is skipped and the 1 kW bus fits behind the 6 kW
  // one. At 9 kW both ring-1 buses fit and nothing is left for bus 4.
  const Network net = make_network({{0}, {3}, {6}, {1}},
                                   {{1, 2}, {1, 3}, {3, 4}});
  CHECK(circle_of(net, 1, 6.0).members == std::vector<BusId>{1, 3});
  const SupplyRegion seven = circle_of(net, 1, 7.0);
  const SupplyRegion nine = circle_of(net, 1, 9.0);
  CHECK(seven.members == std::vector<BusId>{1, 3, 4});
  CHECK(nine.members == std::vector<BusId>{1, 2, 3});
  CHECK_FALSE(std::includes(nine.members.begin(), nine.members.end(),
                            seven.members.begin(), seven.members.end()));
}

TEST_CASE("69-bus fault 3-4: DG1 and DG4 circles merge") {
  const Network& net = ieee69_fault34();
  const BusId dg1 = net.dg("DG1").bus;
  const BusId dg4 = net.dg("DG4").bus;
  const SupplyRegion c1 = circle_of(net, dg1, 250.0);
  const SupplyRegion c4 = circle_of(net, dg4, 50.0);
  std::vector<BusId> shared;
  std::set_intersection(c1.members.begin(), c1.members.end(),
                        c4.members.begin(), c4.members.end(),
                        std::back_inserter(shared));
  CHECK(shared == std::vector<BusId>{4, 5, 6, 7, 36});

  const auto cands = islanding_candidates(net);
  REQUIRE(cands.size() == 1);
  const auto rs = max_supply_regions(net, cands[0]);
  REQUIRE(rs.size() == 3);
  CHECK(rs[0].dgs == std::vector<std::string>{"DG1", "DG4"});
  CHECK(rs[0].capacity == 300.0);
  CHECK(rs[0].members ==
        std::vector<BusId>{4, 5, 6, 7, 8, 9, 36, 37, 40, 41, 42});
  CHECK(rs[1].dgs == std::vector<std::string>{"DG2"});
  CHECK(rs[2].dgs == std::vector<std::string>{"DG5"});
}

TEST_CASE("huge capacity covers the whole reachable region") {
  const Network& net = ieee69_fault34();
  const auto cands = islanding_candidates(net);
  const SupplyRegion r = circle_of(net, 52, 1e6);
  CHECK(r.members == cands[0].members);
}

}
