#include <random>

#include "doctest.h"
#include "maxtsp/coloring.hpp"
#include "maxtsp/path_coloring.hpp"
#include "maxtsp/union_find.hpp"

using namespace maxtsp;

namespace {

std::vector<EdgeId> cycle_edges(int k) {
  std::vector<EdgeId> out;
  for (int i = 0; i < k; ++i) out.emplace_back(i, (i + 1) % k);
  return out;
}

}  // namespace

TEST_CASE("vertex-disjoint paths") {
  CHECK(is_vertex_disjoint_paths(std::vector<EdgeId>{}, 4));
  CHECK(is_vertex_disjoint_paths(std::vector<EdgeId>{{0, 1}, {1, 2}, {3, 4}}, 5));
  CHECK_FALSE(is_vertex_disjoint_paths(cycle_edges(3), 3));
  CHECK_FALSE(is_vertex_disjoint_paths(std::vector<EdgeId>{{0, 1}, {0, 2}, {0, 3}}, 4));
  CHECK_FALSE(is_vertex_disjoint_paths(std::vector<EdgeId>{{0, 1}, {0, 1}}, 2));
  auto path = cycle_edges(6);
  path.pop_back();
  CHECK(is_vertex_disjoint_paths(path, 6));
}

TEST_CASE("colour masks") {
  CHECK(colors_of(kPaletteK3) == std::vector<int>{1, 2, 3});
  CHECK(colors_of(kPaletteK2) == std::vector<int>{4, 5});
  CHECK(color_count(color_bit(1) | color_bit(3)) == 2);
  CHECK(mask_string(0) == "-");
  CHECK(mask_string(color_bit(2) | color_bit(3)) == "23");
}

TEST_CASE("audit reports incomplete slots and cyclic classes") {
  PathColoring c;
  c.palette = kPaletteK3;
  for (const auto& e : cycle_edges(3)) c.slots.push_back({e, 1, color_bit(1)});
  auto a = audit_path_coloring(c, 3);
  CHECK(a.complete);
  CHECK(a.bad_classes == std::vector<int>{1});
  c.slots[0].mask = color_bit(2);
  CHECK(audit_path_coloring(c, 3).ok());
  c.slots[1].demand = 2;
  a = audit_path_coloring(c, 3);
  CHECK_FALSE(a.complete);
  CHECK(partial_coloring_valid(c, 3));
  c.slots[2].mask = color_bit(4);
  CHECK_FALSE(audit_path_coloring(c, 3).complete);
}

TEST_CASE("completion finds path colourings of small multigraphs") {
  CompletionProblem p;
  p.vertex_count = 4;
  p.palette = kPaletteK3;
  for (const auto& e : cycle_edges(4)) p.open.push_back({e, 2, kPaletteK3});
  const auto sol = complete_path_coloring(p, 100000);
  REQUIRE(sol);
  PathColoring c;
  for (std::size_t i = 0; i < p.open.size(); ++i) c.slots.push_back({p.open[i].edge, 2, (*sol)[i]});
  CHECK(audit_path_coloring(c, 4).ok());
}

TEST_CASE("completion respects fixed colours and detects infeasibility") {
  CompletionProblem p;
  p.vertex_count = 3;
  p.palette = kPaletteK2;
  for (const auto& e : cycle_edges(3)) p.open.push_back({e, 2, kPaletteK2});
  CHECK_FALSE(complete_path_coloring(p, 100000));

  CompletionProblem q;
  q.vertex_count = 3;
  q.palette = kPaletteK2;
  q.fixed = {{EdgeId(0, 1), color_bit(4)}, {EdgeId(1, 2), color_bit(4)}};
  q.open = {{EdgeId(0, 2), 1, kPaletteK2}};
  const auto sol = complete_path_coloring(q, 1000);
  REQUIRE(sol);
  CHECK((*sol)[0] == color_bit(5));
  q.open[0].mask = color_bit(4);
  CHECK_FALSE(complete_path_coloring(q, 1000));
}

TEST_CASE("completion agrees with a brute-force check on random multigraphs") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const int n = 4 + t % 3;
    CompletionProblem p;
    p.vertex_count = n;
    p.palette = kPaletteK2;
    std::uniform_int_distribution<int> vd(0, n - 1);
    for (int k = 0; k < n; ++k) {
      const int a = vd(rng), b = vd(rng);
      if (a != b) p.open.push_back({EdgeId(a, b), 1 + static_cast<int>(rng() % 4 == 0), kPaletteK2});
    }
    const auto sol = complete_path_coloring(p, 1000000);
    std::vector<ColorMask> opts{color_bit(4), color_bit(5)};
    bool exists = false;
    const std::size_t k = p.open.size();
    for (std::uint64_t code = 0; code < (1ull << k) && !exists; ++code) {
      PathColoring c;
      c.palette = kPaletteK2;
      for (std::size_t i = 0; i < k; ++i)
        c.slots.push_back({p.open[i].edge, p.open[i].demand,
                           p.open[i].demand == 2 ? kPaletteK2 : opts[(code >> i) & 1]});
      exists = audit_path_coloring(c, n).ok();
    }
    CHECK(sol.has_value() == exists);
    if (sol) {
      PathColoring c;
      c.palette = kPaletteK2;
      for (std::size_t i = 0; i < k; ++i) c.slots.push_back({p.open[i].edge, p.open[i].demand, (*sol)[i]});
      CHECK(audit_path_coloring(c, n).ok());
    }
  }
}

TEST_CASE("colour state rolls back") {
  ColorState s(4);
  const auto start = s.mark();
  CHECK(s.try_add(EdgeId(0, 1), color_bit(1)));
  CHECK(s.try_add(EdgeId(1, 2), color_bit(1) | color_bit(2)));
  CHECK_FALSE(s.try_add(EdgeId(0, 2), color_bit(1)));
  CHECK_FALSE(s.try_add(EdgeId(1, 3), color_bit(1)));
  const auto mid = s.mark();
  CHECK(s.try_add(EdgeId(0, 2), color_bit(2)));
  CHECK_FALSE(s.fits(EdgeId(0, 1), color_bit(2)));
  s.rollback(mid);
  CHECK(s.fits(EdgeId(0, 3), color_bit(2)));
  s.rollback(start);
  CHECK(s.fits(EdgeId(0, 2), color_bit(1)));
  CHECK(s.fits(EdgeId(1, 3), color_bit(1)));
}

TEST_CASE("disjoint sets with checkpoints") {
  DisjointSets d;
  d.reset(5);
  d.unite(0, 1);
  const auto cp = d.checkpoint();
  d.unite(1, 2);
  d.unite(3, 4);
  CHECK(d.connected(0, 2));
  d.rollback(cp);
  CHECK(d.connected(0, 1));
  CHECK_FALSE(d.connected(0, 2));
  CHECK_FALSE(d.connected(3, 4));
}
