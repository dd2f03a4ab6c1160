#include <fstream>
#include <sstream>

#include "doctest.h"
#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/instance.hpp"
#include "maxtsp/matching.hpp"

using namespace maxtsp;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("golden uniform instance") {
  const auto inst = generate_instance(Family::uniform_random, 6, 0);
  CHECK(format_instance(inst.graph) == read_file(MAXTSP_TEST_DATA "/uniform_6_0.txt"));
  CHECK(inst.graph.weight(0, 1) == 759);
  CHECK(inst.graph.weight(4, 5) == 269);
}

TEST_CASE("instances round-trip through the file format") {
  for (Family f : all_families())
    for (int n : {3, 4, 7, 12, 31})
      for (std::uint64_t seed : {0u, 1u, 99u}) {
        const auto inst = generate_instance(f, n, seed);
        const auto text = format_instance(inst.graph);
        const auto back = parse_instance(text);
        CHECK(back == inst.graph);
        CHECK(format_instance(back) == text);
        CHECK(format_instance(generate_instance(f, n, seed).graph) == text);
      }
}

TEST_CASE("generated weights stay in range") {
  for (Family f : all_families()) {
    const auto g = generate_instance(f, 20, 3).graph;
    for (Weight w : g.upper_triangle()) {
      CHECK(w >= 0);
      CHECK(w <= kMaxGeneratedWeight);
    }
  }
}

TEST_CASE("family names") {
  for (Family f : all_families()) CHECK(parse_family(family_name(f)) == f);
  CHECK_THROWS_AS(parse_family("grid"), InstanceError);
}

TEST_CASE("metric instances satisfy the triangle inequality") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = generate_instance(Family::metric_euclidean, 12, seed).graph;
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b)
        for (int c = 0; c < 12; ++c)
          if (a != b && b != c && a != c) CHECK(g.weight(a, c) <= g.weight(a, b) + g.weight(b, c));
  }
}

TEST_CASE("kite-heavy instances usually have kites") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = generate_instance(Family::kite_heavy, 6, seed).graph;
    if (!find_kites(max_weight_cycle_cover(g), max_weight_perfect_matching(g)).empty()) ++hits;
  }
  CHECK(hits >= 90);
}

TEST_CASE("malformed instance text") {
  CHECK_THROWS_AS(parse_instance(""), InstanceError);
  CHECK_THROWS_AS(parse_instance("maxtsp 2\n3\n1 2 3\n"), InstanceError);
  CHECK_THROWS_AS(parse_instance("tsp 1\n3\n1 2 3\n"), InstanceError);
  CHECK_THROWS_AS(parse_instance("maxtsp 1\n3\n1 2\n"), InstanceError);
  CHECK_THROWS_AS(parse_instance("maxtsp 1\n3\n1 2 3 4\n"), InstanceError);
  CHECK_THROWS_AS(parse_instance("maxtsp 1\n3\n1 -2 3\n"), InstanceError);
  CHECK_THROWS_AS(parse_instance("maxtsp 1\n3\n1 x 3\n"), InstanceError);
  CHECK_THROWS_AS(parse_instance("maxtsp 1\n2\n1\n"), InstanceError);
  CHECK(parse_instance("maxtsp 1\n3\n1 2 3").weight(1, 2) == 3);
}

TEST_CASE("weight tables") {
  using T = std::tuple<Vertex, Vertex, Weight>;
  const std::vector<T> ok{{0, 1, 5}, {2, 1, 4}, {0, 2, 3}, {1, 0, 5}};
  const auto g = build_complete_graph(3, ok);
  CHECK(g.weight(1, 2) == 4);
  CHECK(g.weight(2, 1) == 4);
  const std::vector<T> conflict{{0, 1, 5}, {1, 0, 6}, {0, 2, 3}, {1, 2, 1}};
  CHECK_THROWS_AS(build_complete_graph(3, conflict), InstanceError);
  const std::vector<T> negative{{0, 1, -1}, {0, 2, 3}, {1, 2, 1}};
  CHECK_THROWS_AS(build_complete_graph(3, negative), InstanceError);
  const std::vector<T> missing{{0, 1, 1}, {0, 2, 3}};
  CHECK_THROWS_AS(build_complete_graph(3, missing), InstanceError);
  const std::vector<T> loop{{0, 0, 1}, {0, 1, 1}, {0, 2, 3}, {1, 2, 1}};
  CHECK_THROWS_AS(build_complete_graph(3, loop), InstanceError);
}
