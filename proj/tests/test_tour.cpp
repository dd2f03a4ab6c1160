#include <algorithm>

#include "doctest.h"
#include "maxtsp/instance.hpp"
#include "maxtsp/oracle.hpp"
#include "maxtsp/tour.hpp"

using namespace maxtsp;

TEST_CASE("tour helpers") {
  const auto g = generate_instance(Family::uniform_random, 5, 2).graph;
  const std::vector<Vertex> t{0, 3, 1, 4, 2};
  CHECK(is_tour(t, 5));
  CHECK_FALSE(is_tour(std::vector<Vertex>{0, 3, 1, 3, 2}, 5));
  CHECK_FALSE(is_tour(std::vector<Vertex>{0, 3, 1, 4}, 5));
  CHECK_FALSE(is_tour(std::vector<Vertex>{0, 3, 1, 4, 5}, 5));
  CHECK(tour_weight(g, t) == g.weight(0, 3) + g.weight(3, 1) + g.weight(1, 4) + g.weight(4, 2) + g.weight(2, 0));
}

TEST_CASE("patching joins paths by heaviest connecting edges") {
  // Paths 0-1 and 2-3 plus the lone vertex 4; the heaviest join is (1,2).
  std::vector<Weight> w(10, 1);
  const auto idx = [](int u, int v) { return u * 5 - u * (u + 1) / 2 + (v - u - 1); };
  w[idx(1, 2)] = 50;
  w[idx(3, 4)] = 20;
  const CompleteGraph g(5, w);
  const std::vector<EdgeId> paths{{0, 1}, {2, 3}};
  const auto t = patch_paths_to_tour(paths, g);
  CHECK(is_tour(t.order, 5));
  CHECK(t.order == std::vector<Vertex>{0, 1, 2, 3, 4});
  CHECK(t.weight == 1 + 50 + 1 + 20 + 1);
  CHECK(patch_paths_to_tour(std::vector<EdgeId>{}, g).order.size() == 5);
  CHECK_THROWS_AS(patch_paths_to_tour(std::vector<EdgeId>{{0, 1}, {1, 2}, {0, 2}}, g), PreconditionError);
}

TEST_CASE("best class prefers the heaviest and then the lowest colour") {
  const CompleteGraph g(4, std::vector<Weight>{5, 1, 1, 1, 1, 5});
  PathColoring k3;
  k3.slots = {{EdgeId(0, 1), 1, color_bit(2)}, {EdgeId(2, 3), 1, color_bit(1)}};
  PathColoring k2;
  k2.palette = kPaletteK2;
  k2.slots = {{EdgeId(0, 1), 1, color_bit(4)}, {EdgeId(2, 3), 1, color_bit(4)}};
  auto c = select_best_class(k3, k2, g);
  CHECK(c.id == 4);
  CHECK(c.weight == 10);
  k3.slots[1].mask = color_bit(2);
  c = select_best_class(k3, k2, g);
  CHECK(c.id == 2);
  CHECK(c.edges.size() == 2);
}

TEST_CASE("small instances are solved exactly") {
  CHECK(solve(CompleteGraph(3, std::vector<Weight>{1, 2, 3})).tour.weight == 6);
  CHECK_THROWS_AS(solve(CompleteGraph()), InstanceError);
  for (int n : {3, 4, 5})
    for (Family f : all_families())
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = generate_instance(f, n, seed).graph;
        const auto r = solve(g);
        CHECK(r.tour.weight == oracle_max_tsp(g));
        CHECK(is_tour(r.tour.order, n));
        CHECK(r.tour.order.front() == 0);
        CHECK_FALSE(r.run.has_value());
      }
}

TEST_CASE("shrinking an edge keeps the larger weight") {
  const auto g = generate_instance(Family::uniform_random, 7, 4).graph;
  const EdgeId e(2, 5);
  const auto h = shrink_edge(g, e);
  REQUIRE(h.size() == 6);
  const auto old = [](Vertex x) { return x < 5 ? x : x + 1; };
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      const Vertex oa = old(a), ob = old(b);
      Weight expect = g.weight(oa, ob);
      if (oa == 2) expect = std::max(g.weight(2, ob), g.weight(5, ob));
      if (ob == 2) expect = std::max(g.weight(oa, 2), g.weight(oa, 5));
      CHECK(h.weight(a, b) == expect);
    }
  Tour t;
  t.order = {0, 1, 2, 3, 4, 5};
  t.weight = tour_weight(h, t.order);
  const auto lifted = expand_tour(g, t, e);
  CHECK(is_tour(lifted.order, 7));
  CHECK(lifted.weight == tour_weight(g, lifted.order));
  const auto at = std::find(lifted.order.begin(), lifted.order.end(), 2) - lifted.order.begin();
  const auto next = lifted.order[(at + 1) % 7], prev = lifted.order[(at + 6) % 7];
  CHECK((next == 5 || prev == 5));
}

TEST_CASE("odd sweep does not depend on the worker count") {
  for (Family f : all_families()) {
    const auto g = generate_instance(f, 11, 7).graph;
    SolveOptions one, four;
    four.threads = 4;
    const auto a = solve(g, one), b = solve(g, four);
    CHECK(a.tour.order == b.tour.order);
    CHECK(a.shrunk == b.shrunk);
    CHECK(a.odd_candidates == 55);
    CHECK(a.bound_guaranteed);
    CHECK(5 * a.tour.weight >= 4 * oracle_max_tsp(g));
  }
}

TEST_CASE("fast odd mode shrinks only the heaviest edge") {
  const auto g = generate_instance(Family::metric_euclidean, 9, 1).graph;
  SolveOptions o;
  o.fast_odd = true;
  const auto r = solve(g, o);
  CHECK(r.odd_candidates == 1);
  CHECK_FALSE(r.bound_guaranteed);
  REQUIRE(r.shrunk);
  for (int u = 0; u < 9; ++u)
    for (int v = u + 1; v < 9; ++v) CHECK(g.weight(*r.shrunk) >= g.weight(u, v));
  CHECK(is_tour(r.tour.order, 9));
}

TEST_CASE("returned tours are canonical") {
  for (int n : {6, 9, 12}) {
    const auto r = solve(generate_instance(Family::kite_heavy, n, 3).graph);
    CHECK(r.tour.order.front() == 0);
    CHECK(r.tour.order[1] < r.tour.order.back());
  }
}

TEST_CASE("the pipeline needs an even instance") {
  CHECK_THROWS_AS(run_pipeline(generate_instance(Family::uniform_random, 7, 0).graph), PreconditionError);
  CHECK_THROWS_AS(run_pipeline(generate_instance(Family::uniform_random, 4, 0).graph), PreconditionError);
}
