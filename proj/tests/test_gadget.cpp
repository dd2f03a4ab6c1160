#include <algorithm>

#include "doctest.h"
#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/gadget.hpp"
#include "maxtsp/instance.hpp"
#include "maxtsp/matching.hpp"
#include "maxtsp/oracle.hpp"

using namespace maxtsp;

namespace {

// Two heavy triangles {0,1,2}, {3,4,5} with matching (0,1), (4,5) inside and tail (2,3).
CompleteGraph twin_triangles() {
  std::vector<std::tuple<Vertex, Vertex, Weight>> t;
  for (int u = 0; u < 6; ++u)
    for (int v = u + 1; v < 6; ++v) t.emplace_back(u, v, 1);
  for (auto& [u, v, w] : t) {
    const EdgeId e(u, v);
    if (e == EdgeId(0, 1) || e == EdgeId(4, 5)) w = 100;
    if (e == EdgeId(0, 2) || e == EdgeId(1, 2) || e == EdgeId(3, 4) || e == EdgeId(3, 5)) w = 90;
    if (e == EdgeId(2, 3)) w = 60;
  }
  return build_complete_graph(6, t);
}

struct Stage {
  CycleCover cmax;
  Matching m;
  std::vector<Kite> kites;
};

Stage stage(const CompleteGraph& g) {
  Stage s;
  s.cmax = max_weight_cycle_cover(g);
  s.m = max_weight_perfect_matching(g);
  s.kites = find_kites(s.cmax, s.m);
  return s;
}

}  // namespace

TEST_CASE("split graph without kites is the plain instance") {
  const auto g = generate_instance(Family::uniform_random, 6, 0).graph;
  const auto sg = build_split_graph(g, {});
  CHECK(sg.graph.vertex_count == 6);
  CHECK(sg.graph.edges.size() == 15);
  CHECK(std::all_of(sg.demand.begin(), sg.demand.end(), [](int b) { return b == 2; }));
  const auto c2 = compute_relaxed_cycle_cover(sg, g);
  CHECK(c2.half_edges.empty());
  CHECK(c2.weight == 2 * max_weight_cycle_cover(g).weight(g));
}

TEST_CASE("gadget sizes") {
  const auto g = twin_triangles();
  const auto s = stage(g);
  REQUIRE(s.kites.size() == 2);
  CHECK(s.kites[0].foot == 2);
  CHECK(s.kites[1].foot == 3);

  const auto one = build_split_graph(g, {s.kites[0]});
  CHECK(one.graph.vertex_count == 6 + 8);
  const std::size_t gadget_edges = one.gadget_edge_end[0] - one.gadget_edge_begin[0];
  CHECK(gadget_edges == 15);
  CHECK(one.graph.edges.size() == 15 - 3 + 15);
  for (std::size_t i = one.gadget_edge_begin[0]; i < one.gadget_edge_end[0]; ++i) {
    const auto& [e, w] = one.graph.edges[i];
    if (e.u >= 6) CHECK(w == 0);
  }
  const auto& gv = one.gadget_vertices[0];
  CHECK(one.demand[gv[0]] == 1);
  CHECK(one.demand[gv[1]] == 1);

  CycleCover sq;
  sq.cycles = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  Matching m;
  m.pairs = {{0, 1}, {2, 3}, {4, 6}, {5, 7}};
  const auto kites = find_kites(sq, m);
  REQUIRE(kites.size() == 2);
  const auto g8 = generate_instance(Family::uniform_random, 8, 1).graph;
  const auto four = build_split_graph(g8, {kites[0]});
  CHECK(four.graph.vertex_count == 8 + 17);
  CHECK(four.gadget_edge_end[0] - four.gadget_edge_begin[0] == 32);
  for (int id : four.gadget_vertices[0]) CHECK(four.demand[id] == 2);
  const auto x02 = four.splitting.at(EdgeId(0, 2));
  const auto connector = std::find_if(four.graph.edges.begin(), four.graph.edges.end(),
                                      [&](const auto& ew) { return ew.first == EdgeId(x02.first, x02.second); });
  CHECK(connector == four.graph.edges.end());
  const auto diag = build_split_graph(g8, {kites[1]});
  CHECK(diag.gadget_edge_end[0] - diag.gadget_edge_begin[0] == 32);
}

TEST_CASE("relaxed cover on a twin-kite instance") {
  const auto g = twin_triangles();
  const auto s = stage(g);
  const auto sg = build_split_graph(g, s.kites);
  const auto c2 = compute_relaxed_cycle_cover(sg, g);
  const auto rep = check_relaxed_cover(c2, s.kites, 6);
  CHECK(rep.ok());
  for (const auto& k : s.kites) {
    const int h = kite_half_count(c2, k);
    CHECK((h == 0 || h == 2 || h == 4));
  }
  CHECK(c2.weight >= 2 * oracle_max_tsp(g));
  CHECK(c2.weight >= 2 * oracle_kite_free_cycle_cover(g, s.kites).first);
}

TEST_CASE("uniform K6 relaxed cover bounds the tour") {
  const auto g = CompleteGraph(6, std::vector<Weight>(15, 1));
  const auto s = stage(g);
  const auto c2 = compute_relaxed_cycle_cover(build_split_graph(g, s.kites), g);
  CHECK(c2.weight >= 2 * 6);
}

TEST_CASE("relaxed cover dominates kite-free covers and embeds them") {
  int with_kites = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 6 + static_cast<int>(seed % 3);
    const auto fam = seed % 2 == 0 ? Family::kite_heavy : all_families()[(seed / 2) % 4];
    const auto g = generate_instance(fam, n, seed).graph;
    if (n % 2 != 0) continue;
    const auto s = stage(g);
    if (!s.kites.empty()) ++with_kites;
    const auto sg = build_split_graph(g, s.kites);
    const auto c2 = compute_relaxed_cycle_cover(sg, g);
    CHECK(check_relaxed_cover(c2, s.kites, n).ok());
    const auto [best, cover] = oracle_kite_free_cycle_cover(g, s.kites);
    CHECK(c2.weight >= 2 * best);
    const auto emb = embed_kite_free_cover(cover, sg, g);
    CHECK(is_perfect_b_matching(sg, emb.edges));
    CHECK(emb.weight == 2 * best);
    const auto back = decode_relaxed_cover(sg, g, emb.edges);
    CHECK(back.half_edges.empty());
    CHECK(back.weight == 2 * best);
  }
  CHECK(with_kites > 50);
}

TEST_CASE("embedding rejects covers through a kite") {
  const auto g = twin_triangles();
  const auto s = stage(g);
  const auto sg = build_split_graph(g, s.kites);
  CHECK_THROWS_AS(embed_kite_free_cover(s.cmax, sg, g), NotKiteFree);

  CycleCover disjoint;
  disjoint.cycles = {{0, 3, 4}, {1, 2, 5}};
  const auto emb = embed_kite_free_cover(disjoint, sg, g);
  CHECK(is_perfect_b_matching(sg, emb.edges));
  CHECK(emb.cases[0] == "three/1s0d");

  disjoint.cycles = {{0, 3, 1, 4, 2, 5}};
  const auto none = embed_kite_free_cover(disjoint, sg, g);
  CHECK(none.cases[0] == "three/0s0d");
  CHECK(is_perfect_b_matching(sg, none.edges));
}

TEST_CASE("embedding a 4-kite cover with both diagonals and a side") {
  CycleCover sq;
  sq.cycles = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  Matching m;
  m.pairs = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
  const auto kites = find_kites(sq, m);
  const auto g = generate_instance(Family::uniform_random, 8, 3).graph;
  const auto sg = build_split_graph(g, kites);
  CycleCover cover;
  cover.cycles = {{0, 2, 5, 6, 1, 3, 4, 7}};
  const auto emb = embed_kite_free_cover(cover, sg, g);
  CHECK(is_perfect_b_matching(sg, emb.edges));
  CHECK(emb.cases[0] == "four/0s2d");
  cover.cycles = {{0, 2, 1, 3, 4, 6, 5, 7}};
  const auto emb2 = embed_kite_free_cover(cover, sg, g);
  CHECK(emb2.cases[0] == "four/1s2d");
  CHECK(emb2.cases[1] == "four/1s2d");
  CHECK(is_perfect_b_matching(sg, emb2.edges));
}
