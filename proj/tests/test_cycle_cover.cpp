#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/instance.hpp"
#include "maxtsp/matching.hpp"
#include "maxtsp/oracle.hpp"

using namespace maxtsp;

namespace {

CompleteGraph uniform(int n, Weight w) { return CompleteGraph(n, std::vector<Weight>(n * (n - 1) / 2, w)); }

CompleteGraph from_table(int n, std::initializer_list<std::tuple<Vertex, Vertex, Weight>> entries, Weight rest) {
  std::vector<std::tuple<Vertex, Vertex, Weight>> t;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      Weight w = rest;
      for (const auto& [a, b, x] : entries)
        if (EdgeId(a, b) == EdgeId(u, v)) w = x;
      t.emplace_back(u, v, w);
    }
  return build_complete_graph(n, t);
}

std::vector<Vertex> mates_of(int n, std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<Vertex> mate(n, -1);
  for (const auto& [a, b] : pairs) {
    mate[a] = b;
    mate[b] = a;
  }
  return mate;
}

}  // namespace

TEST_CASE("cycle cover of small complete graphs") {
  const auto k3 = max_weight_cycle_cover(build_complete_graph(3, std::vector<std::tuple<Vertex, Vertex, Weight>>{
                                                                     {0, 1, 4}, {1, 2, 5}, {0, 2, 6}}));
  REQUIRE(k3.cycles.size() == 1);
  CHECK(k3.cycles[0] == std::vector<Vertex>{0, 1, 2});

  const auto g4 = uniform(4, 1);
  const auto c4 = max_weight_cycle_cover(g4);
  REQUIRE(c4.cycles.size() == 1);
  CHECK(c4.cycles[0].size() == 4);
  CHECK(c4.weight(g4) == 4);

  const auto g5 = from_table(5, {{0, 1, 10}, {1, 2, 10}, {0, 2, 10}}, 1);
  CHECK(max_weight_cycle_cover(g5).weight(g5) == oracle_max_cycle_cover(g5));
}

TEST_CASE("cycle cover matches enumeration and bounds the tour") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 4 + static_cast<int>(seed % 5);
    const auto g = generate_instance(all_families()[seed % 4], n, seed).graph;
    const auto c = max_weight_cycle_cover(g);
    CHECK(is_cycle_cover(c, n));
    CHECK(c.weight(g) == oracle_max_cycle_cover(g));
    CHECK(c.weight(g) >= oracle_max_tsp(g));
  }
}

TEST_CASE("cycles start at their minimum vertex and head to the smaller neighbour") {
  const std::vector<EdgeId> edges{{0, 5}, {5, 2}, {2, 0}, {1, 3}, {3, 4}, {4, 1}};
  const auto c = cycles_from_edges(6, edges);
  REQUIRE(c.cycles.size() == 2);
  CHECK(c.cycles[0] == std::vector<Vertex>{0, 2, 5});
  CHECK(c.cycles[1] == std::vector<Vertex>{1, 3, 4});
}

TEST_CASE("kite detection") {
  CycleCover c;
  c.cycles = {{0, 1, 2}, {3, 4, 5, 6}, {7, 8, 9}};
  Matching m;
  m.pairs = {{0, 1}, {2, 7}, {3, 4}, {5, 6}, {8, 9}};
  auto kites = find_kites(c, m);
  REQUIRE(kites.size() == 3);
  CHECK(kites[0].kind == KiteKind::three);
  CHECK(kites[0].foot == 2);
  CHECK(kites[1].kind == KiteKind::four);
  CHECK_FALSE(kites[1].has_matched_diagonals());
  CHECK(kites[2].foot == 7);

  m.pairs = {{0, 3}, {1, 4}, {2, 5}, {6, 7}, {8, 9}};
  kites = find_kites(c, m);
  REQUIRE(kites.size() == 1);
  CHECK(kites[0].cycle_index == 2);

  c.cycles = {{0, 1, 2, 3}};
  m.pairs = {{0, 2}, {1, 3}};
  kites = find_kites(c, m);
  REQUIRE(kites.size() == 1);
  CHECK(kites[0].has_matched_diagonals());
  CHECK(kites[0].problematic_edges().size() == 6);
}

TEST_CASE("kite detection follows relabelling") {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 8;
    const auto g = generate_instance(Family::kite_heavy, n, seed).graph;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::tuple<Vertex, Vertex, Weight>> t;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) t.emplace_back(perm[u], perm[v], g.weight(u, v));
    const auto h = build_complete_graph(n, t);
    const auto cg = max_weight_cycle_cover(g);
    const auto mg = max_weight_perfect_matching(g);
    // Feed the relabelled structures so ties cannot change the answer.
    CycleCover ch;
    for (const auto& cyc : cg.cycles) {
      std::vector<Vertex> r;
      for (Vertex v : cyc) r.push_back(perm[v]);
      ch.cycles.push_back(r);
    }
    Matching mh;
    for (const auto& e : mg.pairs) mh.pairs.emplace_back(perm[e.u], perm[e.v]);
    const auto kg = find_kites(cg, mg);
    const auto kh = find_kites(ch, mh);
    REQUIRE(kg.size() == kh.size());
    for (std::size_t i = 0; i < kg.size(); ++i) {
      std::vector<Vertex> a;
      for (Vertex v : kg[i].vertices) a.push_back(perm[v]);
      std::sort(a.begin(), a.end());
      auto b = kh[i].vertices;
      std::sort(b.begin(), b.end());
      CHECK(a == b);
      CHECK(kg[i].kind == kh[i].kind);
      if (kg[i].kind == KiteKind::three) CHECK(perm[kg[i].foot] == kh[i].foot);
    }
    (void)h;
  }
}

TEST_CASE("cycle statistics") {
  const std::vector<Vertex> tri{0, 1, 2};
  auto mate = mates_of(6, {{0, 1}, {2, 3}, {4, 5}});
  std::vector<int> color(6, 0);
  auto st = cycle_stats(tri, mate, color);
  CHECK(st.flex == 1);
  CHECK(st.col == 0);

  const std::vector<Vertex> sq{0, 1, 2, 3};
  mate = mates_of(8, {{0, 4}, {1, 5}, {2, 6}, {3, 7}});
  color = {1, 2, 1, 3, 1, 2, 1, 3};
  st = cycle_stats(sq, mate, color);
  CHECK(st.flex == 0);
  CHECK(st.col == 3);

  color = {1, 1, 1, 1, 1, 1, 1, 1};
  CHECK(cycle_stats(sq, mate, color).col == 1);
}

TEST_CASE("blocked cycles") {
  const std::vector<Vertex> tri{0, 1, 2};
  auto mate = mates_of(6, {{0, 3}, {1, 4}, {2, 5}});
  std::vector<int> color(6, 1);
  CHECK(is_blocked(tri, cycle_stats(tri, mate, color), mate, color));

  const std::vector<Vertex> sq{0, 1, 2, 3};
  mate = mates_of(8, {{0, 4}, {1, 5}, {2, 6}, {3, 7}});
  color = {1, 2, 1, 2, 1, 2, 1, 2};
  CHECK(is_blocked(sq, cycle_stats(sq, mate, color), mate, color));

  color = {1, 1, 1, 1, 1, 1, 1, 1};
  CHECK(disjoint_monochrome_pairs(sq, mate, color) == 2);
  CHECK_FALSE(is_blocked(sq, cycle_stats(sq, mate, color), mate, color));

  mate = mates_of(6, {{0, 2}, {1, 4}, {3, 5}});
  color = {0, 1, 0, 1, 1, 1};
  CHECK_FALSE(is_blocked(sq, cycle_stats(sq, mate, color), mate, color));

  mate = mates_of(8, {{0, 4}, {1, 5}, {2, 6}, {3, 7}});
  color = {1, 0, 1, 2, 1, 2, 1, 2};
  CHECK_THROWS_AS(is_blocked(sq, cycle_stats(sq, mate, color), mate, color), PreconditionError);
}

TEST_CASE("clause one dominates") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const int len = 3 + trial % 6;
    std::vector<Vertex> cyc(len);
    std::iota(cyc.begin(), cyc.end(), 0);
    std::vector<Vertex> mate(2 * len);
    std::vector<int> color(2 * len);
    for (int i = 0; i < len; ++i) {
      mate[i] = len + i;
      mate[len + i] = i;
      color[i] = color[len + i] = 1 + static_cast<int>(rng() % 3);
    }
    const auto st = cycle_stats(cyc, mate, color);
    if (st.flex + st.col >= 3) CHECK_FALSE(is_blocked(cyc, st, mate, color));
  }
}
