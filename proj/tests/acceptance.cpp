#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "maxtsp/certificate.hpp"
#include "maxtsp/instance.hpp"
#include "maxtsp/matching.hpp"
#include "maxtsp/oracle.hpp"
#include "maxtsp/tour.hpp"

using namespace maxtsp;

namespace {

struct Outcome {
  int checked = 0;
  int failed = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    if (failed++ == 0) first_failure = what;
  }
};

bool report(int id, const char* title, const Outcome& o, const std::string& extra = "") {
  const bool ok = o.failed == 0 && o.checked > 0;
  std::printf("criterion %d %s: %s (%d checked, %d failed%s%s)%s%s\n", id, ok ? "PASS" : "FAIL", title, o.checked,
              o.failed, extra.empty() ? "" : ", ", extra.c_str(), o.failed ? " first: " : "",
              o.first_failure.c_str());
  std::fflush(stdout);
  return ok;
}

std::string label(Family f, int n, std::uint64_t seed) {
  return std::string(family_name(f)) + " n=" + std::to_string(n) + " seed=" + std::to_string(seed);
}

bool passed(const VerifyReport& r, const char* name) {
  const auto* c = r.find(name);
  return c && c->status == CheckStatus::pass;
}

// Criteria 1 to 4 share one corpus and one certificate per instance.
bool corpus_criteria() {
  Outcome ratio, classes, ledger, def1;
  int pipelines = 0;
  const std::vector<int> sizes{4, 6, 8, 10, 12, 14, 5, 7, 9};
  const int seeds = 56;
  for (Family fam : all_families())
    for (int n : sizes)
      for (int s = 0; s < seeds; ++s) {
        const auto seed = static_cast<std::uint64_t>(s);
        const auto name = label(fam, n, seed);
        const auto g = generate_instance(fam, n, seed).graph;
        SolveResult r;
        try {
          r = solve(g);
        } catch (const std::exception& e) {
          ratio.record(false, name + ": " + e.what());
          continue;
        }
        const Weight opt = oracle_max_tsp(g);
        ratio.record(5 * r.tour.weight >= 4 * opt && is_tour(r.tour.order, n), name);

        const auto rep = verify_certificate(g, make_certificate(g, r, {}));
        if (!r.run) continue;
        ++pipelines;
        const auto& run = *r.run;
        const bool direct = run.audit3.ok() && run.audit2.ok() && run.k3.palette == kPaletteK3 &&
                            run.k2.palette == kPaletteK2;
        bool five = true;
        for (int c = 1; c <= 5; ++c) {
          const auto edges = (c <= 3 ? run.k3 : run.k2).color_class(c);
          five = five && is_vertex_disjoint_paths(edges, run.graph.size());
        }
        classes.record(direct && five && passed(rep, "g1_classes_are_paths") && passed(rep, "g2_classes_are_paths") &&
                           passed(rep, "g1_coloring_covers") && passed(rep, "g2_coloring_covers"),
                       name);
        ledger.record(passed(rep, "ledger_cmax_ge_opt") && passed(rep, "ledger_matching_ge_half_opt") &&
                          passed(rep, "ledger_c2_ge_opt") && passed(rep, "ledger_g2_ge_three_halves_opt") &&
                          passed(rep, "ledger_consistent"),
                      name);
        def1.record(run.def1.ok() && passed(rep, "relaxed_cover"), name);
      }
  const std::string p = std::to_string(pipelines) + " pipeline runs";
  bool ok = report(1, "5 ALG >= 4 OPT", ratio);
  ok &= report(2, "five colour classes are vertex-disjoint paths", classes, p);
  ok &= report(3, "weight ledger inequalities", ledger, p);
  ok &= report(4, "relaxed cover structure", def1, p);
  return ok;
}

bool exchange_criterion() {
  Outcome o;
  int unhandled = 0;
  for (int n : {6, 8, 10, 12})
    for (Family fam : all_families())
      for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto g = generate_instance(fam, n, seed).graph;
        try {
          const auto run = run_pipeline(g);
          o.record(run.f12.ok(), label(fam, n, seed));
        } catch (const UnhandledCase& e) {
          ++unhandled;
          o.record(false, label(fam, n, seed) + ": " + e.what());
        } catch (const std::exception& e) {
          o.record(false, label(fam, n, seed) + ": " + e.what());
        }
      }
  return report(5, "exchange-set properties, no unhandled case", o, std::to_string(unhandled) + " unhandled");
}

bool gadget_criterion() {
  Outcome o;
  int with_kites = 0;
  int attempted = 0;
  for (std::uint64_t seed = 0; attempted < 200; ++seed) {
    const int n = seed % 3 == 2 ? 8 : 6;
    const Family fam = seed % 2 == 0 ? Family::kite_heavy : all_families()[(seed / 2) % 4];
    const auto g = generate_instance(fam, n, seed).graph;
    ++attempted;
    const auto cmax = max_weight_cycle_cover(g);
    const auto m = max_weight_perfect_matching(g);
    const auto kites = find_kites(cmax, m);
    if (!kites.empty()) ++with_kites;
    const auto sg = build_split_graph(g, kites);
    const auto c2 = compute_relaxed_cycle_cover(sg, g);
    const auto [best, cover] = oracle_kite_free_cycle_cover(g, kites);
    bool ok = c2.weight >= 2 * best;
    try {
      const auto emb = embed_kite_free_cover(cover, sg, g);
      ok = ok && is_perfect_b_matching(sg, emb.edges) && emb.weight == 2 * best;
    } catch (const std::exception&) {
      ok = false;
    }
    o.record(ok, label(fam, n, seed));
  }
  return report(6, "gadget completeness", o, std::to_string(with_kites) + " with kites");
}

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

bool matching_criterion() {
  Outcome o;
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 500; ++t) {
    const int n = 2 * (1 + t % 5);
    const auto g = random_graph(rng, n, 0.4 + 0.6 * (t % 7) / 6.0, t % 4 == 0 ? 5 : 1000);
    const auto expect = brute_force_perfect_matching(g);
    bool ok;
    try {
      const auto m = max_weight_perfect_matching(g);
      ok = expect && m.weight == *expect && static_cast<int>(m.pairs.size()) * 2 == n;
    } catch (const NoPerfectMatching&) {
      ok = !expect;
    }
    o.record(ok, "perfect matching trial " + std::to_string(t));
  }
  for (int t = 0; t < 300; ++t) {
    const int n = 3 + t % 6;
    const auto g = random_graph(rng, n, 0.5 + 0.5 * (t % 5) / 4.0, 200);
    DegreeDemand b(n);
    std::uniform_int_distribution<int> bd(1, 2);
    for (auto& x : b) x = bd(rng);
    int total = 0;
    for (int x : b) total += x;
    if (total % 2) b[0] = 3 - b[0];
    const auto expect = brute_force_b_matching(g, b);
    bool ok;
    try {
      const auto bm = max_weight_perfect_b_matching(g, b);
      std::vector<int> deg(n, 0);
      for (const auto& e : bm.edges) {
        ++deg[e.u];
        ++deg[e.v];
      }
      ok = expect && bm.weight == *expect && deg == std::vector<int>(b.begin(), b.end());
    } catch (const Infeasible&) {
      ok = !expect;
    }
    o.record(ok, "b-matching trial " + std::to_string(t));
  }
  return report(7, "matching core agrees with enumeration", o);
}

double seconds_to_solve(const CompleteGraph& g) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = solve(g);
  const auto t1 = std::chrono::steady_clock::now();
  if (!is_tour(r.tour.order, g.size())) throw InternalError("not a tour");
  return std::chrono::duration<double>(t1 - t0).count();
}

bool runtime_criterion() {
  Outcome o;
  const std::vector<int> sizes{50, 100, 200, 400};
  std::vector<double> xs, ys;
  std::string detail;
  double at200 = 0;
  for (int n : sizes) {
    std::vector<double> t;
    for (std::uint64_t seed = 0; seed < 3; ++seed)
      t.push_back(seconds_to_solve(generate_instance(Family::uniform_random, n, seed).graph));
    std::sort(t.begin(), t.end());
    const double med = std::max(t[1], 1e-4);
    if (n == 200) at200 = t.back();
    xs.push_back(std::log(n));
    ys.push_back(std::log(med));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%sn=%d %.3fs", detail.empty() ? "" : " ", n, med);
    detail += buf;
  }
  const double mx = (xs[0] + xs[1] + xs[2] + xs[3]) / 4, my = (ys[0] + ys[1] + ys[2] + ys[3]) / 4;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = num / den;
  o.record(at200 < 30.0, "n=200 took " + std::to_string(at200) + "s");
  o.record(slope <= 3.5, "slope " + std::to_string(slope));
  char buf[48];
  std::snprintf(buf, sizeof buf, ", slope %.2f", slope);
  return report(8, "runtime scaling", o, detail + buf);
}

bool determinism_criterion() {
  Outcome o;
  const std::vector<std::pair<int, bool>> cases{{4, false}, {6, false}, {9, false}, {12, false},
                                                {15, true}, {16, false}, {40, false}, {21, true}};
  for (Family fam : all_families())
    for (auto [n, fast] : cases)
      for (std::uint64_t seed = 0; seed < 2; ++seed) {
        const auto g = generate_instance(fam, n, seed).graph;
        SolveOptions opt;
        opt.fast_odd = fast;
        const auto once = make_certificate(g, solve(g, opt), opt).dump(2);
        opt.threads = 2;
        const auto twice = make_certificate(g, solve(g, opt), opt).dump(2);
        o.record(once == twice, label(fam, n, seed));
      }
  return report(9, "byte-identical certificates", o);
}

}  // namespace

int main() {
  bool ok = true;
  try {
    ok &= corpus_criteria();
    ok &= exchange_criterion();
    ok &= gadget_criterion();
    ok &= matching_criterion();
    ok &= runtime_criterion();
    ok &= determinism_criterion();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("acceptance %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}
