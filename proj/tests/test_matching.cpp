#include <random>

#include "doctest.h"
#include "maxtsp/matching.hpp"
#include "maxtsp/oracle.hpp"

using namespace maxtsp;

namespace {

GeneralGraph random_graph(std::mt19937_64& rng, int n, double density, Weight max_w) {
  GeneralGraph g;
  g.vertex_count = n;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<Weight> wd(0, max_w);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng) < density) g.edges.emplace_back(EdgeId(u, v), wd(rng));
  return g;
}

}  // namespace

TEST_CASE("perfect matching on small fixed graphs") {
  GeneralGraph single{2, {{EdgeId(0, 1), 7}}};
  auto m = max_weight_perfect_matching(single);
  CHECK(m.weight == 7);
  CHECK(m.pairs == std::vector<EdgeId>{EdgeId(0, 1)});

  GeneralGraph k4{4,
                  {{EdgeId(0, 1), 5}, {EdgeId(2, 3), 5}, {EdgeId(0, 2), 3}, {EdgeId(1, 3), 3}, {EdgeId(0, 3), 1},
                   {EdgeId(1, 2), 1}}};
  m = max_weight_perfect_matching(k4);
  CHECK(m.weight == 10);
  CHECK(m.pairs == std::vector<EdgeId>{EdgeId(0, 1), EdgeId(2, 3)});

  GeneralGraph path{4, {{EdgeId(0, 1), 1}, {EdgeId(1, 2), 9}, {EdgeId(2, 3), 1}}};
  m = max_weight_perfect_matching(path);
  CHECK(m.weight == 2);
  CHECK(m.pairs == std::vector<EdgeId>{EdgeId(0, 1), EdgeId(2, 3)});
}

TEST_CASE("missing perfect matching is reported") {
  GeneralGraph star{4, {{EdgeId(0, 1), 1}, {EdgeId(0, 2), 1}, {EdgeId(0, 3), 1}}};
  CHECK_THROWS_AS(max_weight_perfect_matching(star), NoPerfectMatching);
  GeneralGraph odd{3, {{EdgeId(0, 1), 1}, {EdgeId(1, 2), 1}}};
  CHECK_THROWS_AS(max_weight_perfect_matching(odd), NoPerfectMatching);
}

TEST_CASE("perfect matching agrees with enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 * (1 + trial % 5);
    auto g = random_graph(rng, n, 0.3 + 0.7 * ((trial * 7) % 10) / 10.0, trial % 3 == 0 ? 3 : 100);
    const auto expect = brute_force_perfect_matching(g);
    if (!expect) {
      CHECK_THROWS_AS(max_weight_perfect_matching(g), NoPerfectMatching);
      continue;
    }
    const auto m = max_weight_perfect_matching(g);
    CHECK(m.weight == *expect);
    CHECK(static_cast<int>(m.pairs.size()) * 2 == n);
  }
}

TEST_CASE("b-matching small cases") {
  GeneralGraph k3{3, {{EdgeId(0, 1), 2}, {EdgeId(1, 2), 3}, {EdgeId(0, 2), 4}}};
  auto bm = max_weight_perfect_b_matching(k3, {2, 2, 2});
  CHECK(bm.weight == 9);
  CHECK(bm.edges.size() == 3);

  GeneralGraph k4{4, {}};
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) k4.edges.emplace_back(EdgeId(u, v), 1);
  bm = max_weight_perfect_b_matching(k4, {2, 2, 2, 2});
  CHECK(bm.weight == 4);
  CHECK(bm.edges.size() == 4);

  GeneralGraph one{2, {{EdgeId(0, 1), 3}}};
  const auto ex = expand_to_matching_instance(one, {1, 1});
  REQUIRE(ex.graph.edges.size() == 1);
  CHECK(ex.graph.edges[0].second == 6);
  CHECK(max_weight_perfect_b_matching(one, {1, 1}).weight == 3);
}

TEST_CASE("b-matching agrees with enumeration") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + trial % 6;
    auto g = random_graph(rng, n, 0.5 + 0.5 * ((trial * 3) % 10) / 10.0, 50);
    DegreeDemand b(n);
    std::uniform_int_distribution<int> bd(1, 2);
    for (auto& x : b) x = bd(rng);
    int total = 0;
    for (int x : b) total += x;
    if (total % 2) b[0] = 3 - b[0];
    const auto expect = brute_force_b_matching(g, b);
    if (!expect) {
      CHECK_THROWS_AS(max_weight_perfect_b_matching(g, b), Infeasible);
      continue;
    }
    const auto bm = max_weight_perfect_b_matching(g, b);
    CHECK(bm.weight == *expect);
    std::vector<int> deg(n, 0);
    for (const auto& e : bm.edges) {
      ++deg[e.u];
      ++deg[e.v];
    }
    CHECK(deg == std::vector<int>(b.begin(), b.end()));
  }
}

TEST_CASE("pricing path matches a direct solve on a large dense instance") {
  std::mt19937_64 rng(3);
  const int n = 70;
  auto g = random_graph(rng, n, 1.0, 1000);
  REQUIRE(g.edges.size() > 1500);
  const auto bm = max_weight_perfect_b_matching(g, DegreeDemand(n, 2));
  const auto ex = expand_to_matching_instance(g, DegreeDemand(n, 2));
  const auto m = max_weight_perfect_matching(ex.graph);
  CHECK(2 * bm.weight == m.weight);
}
