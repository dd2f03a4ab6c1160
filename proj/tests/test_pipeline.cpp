#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "maxtsp/instance.hpp"
#include "maxtsp/oracle.hpp"
#include "maxtsp/tour.hpp"

using namespace maxtsp;

namespace {

std::map<EdgeId, int> slot_counts(const PathColoring& c) {
  std::map<EdgeId, int> out;
  for (const auto& s : c.slots) out[s.edge] += s.demand;
  return out;
}

void check_run(const CompleteGraph& g, const PipelineRun& run) {
  const int n = g.size();
  CHECK(is_cycle_cover(run.cmax, n));
  CHECK(static_cast<int>(run.m.pairs.size()) * 2 == n);
  for (const auto& k : run.kites) {
    CHECK((k.vertices.size() == 3 || k.vertices.size() == 4));
    for (const auto& d : k.d_edges)
      CHECK(std::find(run.m.pairs.begin(), run.m.pairs.end(), d) != run.m.pairs.end());
  }
  CHECK(check_relaxed_cover(run.c2, run.kites, n).ok());
  CHECK(run.c2.weight >= 2 * run.tour.weight);

  const auto& fp = run.exchange;
  for (const auto& k : run.kites) {
    const auto [in, out] = kite_in_out(run.c2, fp.orientation, k);
    CHECK(in == out);
  }
  std::vector<int> all(fp.split.z1);
  all.insert(all.end(), fp.split.z2.begin(), fp.split.z2.end());
  std::sort(all.begin(), all.end());
  std::vector<int> expect(run.c2.half_edges.size());
  std::iota(expect.begin(), expect.end(), 0);
  CHECK(all == expect);
  const Weight h = split_weight(run.c2, expect, g);
  CHECK(2 * split_weight(run.c2, fp.split.z(), g) >= h);

  const ExchangeContext ctx{&run.graph, &run.cmax, &run.m, &run.kites, &run.c2, &fp.orientation};
  CHECK(verify_f12(ctx, fp).ok());
  const auto g2 = build_g2prime(ctx, fp);
  CHECK(std::all_of(g2.degree.begin(), g2.degree.end(), [](int d) { return d <= 4; }));
  auto order = g2_processing_order(g2);
  std::sort(order.begin(), order.end());
  std::vector<int> parts(g2.parts.size());
  std::iota(parts.begin(), parts.end(), 0);
  CHECK(order == parts);

  CHECK(slot_counts(run.k3) == g1prime_multiplicity(run.cmax, run.m, fp.f1, fp.f2));
  CHECK(slot_counts(run.k2) == g2.multiplicity);
  CHECK(audit_path_coloring(run.k3, n).ok());
  CHECK(audit_path_coloring(run.k2, n).ok());

  const auto& L = run.ledger;
  Weight classes = 0;
  for (Weight w : L.class_weights) classes += w;
  CHECK(classes == L.g1_total + L.g2_total);
  CHECK(L.g1_total == 2 * L.cmax + L.m - L.f1 + L.f2);
  CHECK(L.g2_total == L.i + L.z + L.m + L.f1 - L.f2);
  CHECK(L.best_class >= 1);
  CHECK(L.best_class <= 5);
  CHECK(run.tour.weight >= *std::max_element(L.class_weights.begin(), L.class_weights.end()));
  CHECK(is_tour(run.tour.order, n));
  CHECK(run.tour.weight == tour_weight(g, run.tour.order));
}

}  // namespace

TEST_CASE("pipeline stage properties") {
  for (int n : {6, 8, 10, 12, 16, 24})
    for (Family f : all_families())
      for (std::uint64_t seed = 0; seed < 15; ++seed) {
        CAPTURE(n);
        CAPTURE(seed);
        const auto g = generate_instance(f, n, seed).graph;
        const auto run = run_pipeline(g);
        check_run(g, run);
        if (n <= 12) {
          const Weight opt = oracle_max_tsp(g);
          CHECK(5 * run.tour.weight >= 4 * opt);
          CHECK(run.ledger.cmax >= opt);
          CHECK(2 * run.ledger.m >= opt);
          CHECK(run.c2.weight >= 2 * opt);
          CHECK(2 * (run.ledger.i + run.ledger.z + run.ledger.m) >= 3 * opt);
        }
      }
}

TEST_CASE("pipeline is repeatable") {
  const auto g = generate_instance(Family::kite_heavy, 14, 5).graph;
  const auto a = run_pipeline(g, true), b = run_pipeline(g, true);
  CHECK(a.tour.order == b.tour.order);
  CHECK(a.trace == b.trace);
  CHECK_FALSE(a.trace.empty());
  CHECK(run_pipeline(g).trace.empty());
}

TEST_CASE("uniform instances lose nothing") {
  for (int n : {6, 10, 30}) {
    const CompleteGraph flat(n, std::vector<Weight>(static_cast<std::size_t>(n * (n - 1) / 2), 3));
    CHECK(solve(flat).tour.weight == 3 * n);
  }
}

TEST_CASE("odd instances meet the bound through the sweep") {
  for (int n : {7, 9, 11})
    for (Family f : all_families())
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto g = generate_instance(f, n, seed).graph;
        const auto r = solve(g);
        CHECK(5 * r.tour.weight >= 4 * oracle_max_tsp(g));
        REQUIRE(r.run);
        REQUIRE(r.shrunk);
        check_run(shrink_edge(g, *r.shrunk), *r.run);
      }
}
