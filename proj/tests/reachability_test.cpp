#include <doctest.h>

#include <algorithm>
#include <queue>

#include "islanding/reachability.hpp"
#include "support.hpp"

using namespace islanding;
using namespace islanding::testing;

namespace {

// Per-node breadth-first search; (i, i) follows the power-series meaning.
BoolMatrix closure_by_search(const BoolMatrix& a) {
  const std::size_t n = a.size();
  BoolMatrix out(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    for (std::size_t j = 0; j < n; ++j)
      if (a.get(s, j) && !seen[j]) {
        seen[j] = true;
        q.push(j);
      }
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop();
      for (std::size_t j = 0; j < n; ++j)
        if (a.get(u, j) && !seen[j]) {
          seen[j] = true;
          q.push(j);
        }
    }
    for (std::size_t j = 0; j < n; ++j)
      if (seen[j]) out.set(s, j);
  }
  return out;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_SUITE("reachability") {

TEST_CASE("adjacency of a 3-bus path") {
  const Network net = make_network({{}, {}, {}}, {{1, 2}, {2, 3}});
  const BoolMatrix a = adjacency_matrix(net);
  CHECK(a.get(0, 1));
  CHECK(a.get(1, 0));
  CHECK(a.get(1, 2));
  CHECK(a.get(2, 1));
  CHECK_FALSE(a.get(0, 2));
  CHECK_FALSE(a.get(0, 0));
  CHECK(a.symmetric());

  const BoolMatrix p = reachability_matrix(a);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK(p.get(i, j));
}

TEST_CASE("single bus") {
  const Network net = make_network({{}}, {});
  const BoolMatrix a = adjacency_matrix(net);
  CHECK(a.size() == 1);
  CHECK_FALSE(a.get(0, 0));
  CHECK(reachability_matrix(a) == BoolMatrix(1));
}

TEST_CASE("faulted branch drops out of the adjacency") {
  const BoolMatrix a = adjacency_matrix(ieee69_fault34());
  CHECK_FALSE(a.get(2, 3));
  CHECK_FALSE(a.get(3, 2));
  CHECK(adjacency_matrix(ieee69()).get(2, 3));
}

TEST_CASE("block diagonal components stay apart") {
  BoolMatrix a(6);
  auto link = [&](std::size_t i, std::size_t j) {
    a.set(i, j);
    a.set(j, i);
  };
  link(0, 1);
  link(1, 2);
  link(3, 4);
  link(4, 5);
  const BoolMatrix p = reachability_matrix(a);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 3; j < 6; ++j) {
      CHECK_FALSE(p.get(i, j));
      CHECK_FALSE(p.get(j, i));
    }
  CHECK(p.get(0, 2));
  CHECK(p.get(5, 3));
}

TEST_CASE("random 8-node graph matches per-node search") {
  std::mt19937_64 rng(8);
  std::bernoulli_distribution edge(0.2);
  for (int trial = 0; trial < 20; ++trial) {
    BoolMatrix a(8);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = i + 1; j < 8; ++j)
        if (edge(rng)) {
          a.set(i, j);
          a.set(j, i);
        }
    CHECK(reachability_matrix(a) == closure_by_search(a));
  }
}

TEST_CASE("boolean product against the definition") {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution bit(0.3);
  for (std::size_t n : {1u, 5u, 63u, 64u, 65u, 130u}) {
    BoolMatrix x(n), y(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (bit(rng)) x.set(i, j);
        if (bit(rng)) y.set(i, j);
      }
    const BoolMatrix z = x * y;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        bool want = false;
        for (std::size_t k = 0; k < n && !want; ++k)
          want = x.get(i, k) && y.get(k, j);
        ok = ok && (z.get(i, j) == want);
      }
    CHECK_MESSAGE(ok, "n = " << n);
  }
}

TEST_CASE("fault 3-4 splits the 69-bus case in two") {
  const auto rs = regions(ieee69_fault34());
  REQUIRE(rs.size() == 2);
  const auto& grid = rs[0].contains_slack ? rs[0] : rs[1];
  const auto& off = rs[0].contains_slack ? rs[1] : rs[0];
  CHECK(sorted(off.dgs) ==
        std::vector<std::string>{"DG1", "DG2", "DG4", "DG5"});
  CHECK(sorted(grid.dgs) == std::vector<std::string>{"DG3", "DG6"});
  CHECK(grid.members.size() + off.members.size() == 69);

  const auto cands = islanding_candidates(ieee69_fault34());
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].members == off.members);
}

TEST_CASE("no faults means one region and no candidates") {
  const auto rs = regions(ieee69());
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].contains_slack);
  CHECK(rs[0].members.size() == 69);
  CHECK(islanding_candidates(ieee69()).empty());
}

TEST_CASE("two faults on a 6-bus path give three regions") {
  const Network path = make_network(
      {{}, {}, {}, {}, {}, {}}, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}});
  const std::vector<BranchKey> faults{{2, 3}, {4, 5}};
  const auto rs = regions(apply_faults(path, faults));
  REQUIRE(rs.size() == 3);
  CHECK(rs[0].members == std::vector<BusId>{1, 2});
  CHECK(rs[1].members == std::vector<BusId>{3, 4});
  CHECK(rs[2].members == std::vector<BusId>{5, 6});
  CHECK(rs[0].contains_slack);
}

TEST_CASE("DG-free cut-off region is not a candidate") {
  const Network net = make_network({{}, {}, {5.0}, {5.0}, {5.0}},
                                   {{1, 2}, {2, 3}, {1, 4}, {4, 5}},
                                   {make_dg("G", 3, 10.0)});
  const std::vector<BranchKey> faults{{1, 2}, {1, 4}};
  const auto cands = islanding_candidates(apply_faults(net, faults));
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].members == std::vector<BusId>{2, 3});
}

}
