#include "maxtsp/tour.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>
#include <tuple>

#include "maxtsp/matching.hpp"
#include "maxtsp/union_find.hpp"

namespace maxtsp {

Weight tour_weight(const CompleteGraph& g, std::span<const Vertex> order) {
  Weight w = 0;
  for (std::size_t i = 0; i < order.size(); ++i) w += g.weight(order[i], order[(i + 1) % order.size()]);
  return w;
}

bool is_tour(std::span<const Vertex> order, int n) {
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (Vertex v : order) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

ClassChoice select_best_class(const PathColoring& k3, const PathColoring& k2, const CompleteGraph& g) {
  ClassChoice best;
  for (int c = 1; c <= 5; ++c) {
    const auto& col = c <= 3 ? k3 : k2;
    auto edges = col.color_class(c);
    const Weight w = edge_set_weight(g, edges);
    if (best.id == 0 || w > best.weight) best = {c, std::move(edges), w};
  }
  return best;
}

namespace {

std::vector<Vertex> cyclic_order(int n, const std::vector<std::vector<Vertex>>& adj) {
  std::vector<Vertex> order{0};
  Vertex prev = 0;
  Vertex cur = std::min(adj[0][0], adj[0][1]);
  while (cur != 0) {
    order.push_back(cur);
    const Vertex next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = next;
  }
  if (static_cast<int>(order.size()) != n) throw InternalError("patched edges do not form a Hamiltonian cycle");
  return order;
}

}  // namespace

Tour patch_paths_to_tour(std::span<const EdgeId> paths, const CompleteGraph& g) {
  const int n = g.size();
  if (!is_vertex_disjoint_paths(paths, n)) throw PreconditionError("class is not a set of vertex-disjoint paths");
  std::vector<std::vector<Vertex>> adj(n);
  DisjointSets comp(n);
  int pieces = n;
  for (const auto& e : paths) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
    comp.unite(e.u, e.v);
    --pieces;
  }
  if (pieces > 1) {
    std::vector<std::tuple<Weight, Vertex, Vertex>> candidates;
    for (int u = 0; u < n; ++u) {
      if (adj[u].size() >= 2) continue;
      for (int v = u + 1; v < n; ++v)
        if (adj[v].size() < 2 && !comp.connected(u, v)) candidates.emplace_back(-g.weight(u, v), u, v);
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [negw, u, v] : candidates) {
      if (pieces == 1) break;
      if (adj[u].size() >= 2 || adj[v].size() >= 2 || comp.connected(u, v)) continue;
      adj[u].push_back(v);
      adj[v].push_back(u);
      comp.unite(u, v);
      --pieces;
    }
  }
  std::vector<Vertex> ends;
  for (int v = 0; v < n; ++v)
    for (std::size_t d = adj[v].size(); d < 2; ++d) ends.push_back(v);
  if (ends.size() != 2 || ends[0] == ends[1]) throw InternalError("patching left " + std::to_string(ends.size()) + " open ends");
  adj[ends[0]].push_back(ends[1]);
  adj[ends[1]].push_back(ends[0]);
  Tour t;
  t.order = cyclic_order(n, adj);
  t.weight = tour_weight(g, t.order);
  return t;
}

PipelineRun run_pipeline(const CompleteGraph& g, bool trace) {
  const int n = g.size();
  if (n % 2 != 0 || n < 6) throw PreconditionError("the pipeline needs an even n >= 6");
  PipelineRun r;
  r.graph = g;
  r.cmax = max_weight_cycle_cover(g);
  r.m = max_weight_perfect_matching(g);
  r.kites = find_kites(r.cmax, r.m);
  auto& L = r.ledger;
  L.cmax = r.cmax.weight(g);
  L.m = r.m.weight;
  for (const auto& k : r.kites) (k.kind == KiteKind::three ? L.kites3 : L.kites4) += 1;

  const auto partial = path3color_g1(g, r.cmax, r.m, r.kites);
  if (trace) r.trace.insert(r.trace.end(), partial.trace.begin(), partial.trace.end());

  const auto sg = build_split_graph(g, r.kites);
  r.c2 = compute_relaxed_cycle_cover(sg, g);
  r.def1 = check_relaxed_cover(r.c2, r.kites, n);
  if (!r.def1.ok()) throw InternalError("relaxed cycle cover violates its definition");
  L.c2_doubled = r.c2.weight;
  L.i = edge_set_weight(g, r.c2.whole_edges);

  r.orientation = build_orientations(r.c2, r.kites);
  ExchangeContext ctx{&g, &r.cmax, &r.m, &r.kites, &r.c2, &r.orientation};
  const auto initial = partition_half_edges(r.c2, r.orientation, r.kites, g);
  const auto md = build_md_matching(r.c2, r.kites, r.m, n);
  r.exchange = compute_exchange_sets(ctx, initial, md);
  CompletionReport rep;
  std::vector<std::string> color_trace;
  const auto color_both = [&](const ExchangePair& fp, long cap) {
    color_trace.clear();
    std::vector<std::string>* tr = trace ? &color_trace : nullptr;
    r.k3 = color_g1prime(g, r.cmax, r.m, r.kites, fp.f1, fp.f2, partial, &rep, tr, cap);
    r.k2 = color_g2prime(build_g2prime(ctx, fp), nullptr, tr, cap);
  };
  try {
    color_both(r.exchange, 0);
  } catch (const InternalError&) {
    // Some valid exchange sets admit no colouring; search again, testing each candidate.
    if (trace) r.trace.push_back("f12: colouring failed, searching with a colouring filter");
    const ExchangeFilter colorable = [&](const ExchangePair& fp) {
      try {
        color_both(fp, 200000);
        return true;
      } catch (const InternalError&) {
        return false;
      }
    };
    r.exchange = compute_exchange_sets(ctx, initial, md, colorable);
    color_both(r.exchange, 0);
  }
  r.orientation = r.exchange.orientation;
  r.f12 = verify_f12(ctx, r.exchange);
  if (!r.f12.ok()) throw InternalError("exchange sets violate " + r.f12.witnesses.front());
  L.repairs = r.exchange.repairs;
  L.z1 = split_weight(r.c2, r.exchange.split.z1, g);
  L.z2 = split_weight(r.c2, r.exchange.split.z2, g);
  L.z = split_weight(r.c2, r.exchange.split.z(), g);
  L.f1 = edge_set_weight(g, r.exchange.f1);
  L.f2 = edge_set_weight(g, r.exchange.f2);
  if (trace) {
    for (const auto& k : r.exchange.kites) r.trace.push_back("f12: " + k.case_id);
    r.trace.insert(r.trace.end(), color_trace.begin(), color_trace.end());
  }
  L.widening = rep.widening;
  r.audit3 = audit_path_coloring(r.k3, n);
  r.audit2 = audit_path_coloring(r.k2, n);
  if (!r.audit3.ok() || !r.audit2.ok()) throw InternalError("colour class is not a set of paths");

  L.g1_total = 2 * L.cmax + L.m - L.f1 + L.f2;
  L.g2_total = L.i + L.z + L.m + L.f1 - L.f2;
  for (int c = 1; c <= 5; ++c) L.class_weights[c - 1] = (c <= 3 ? r.k3 : r.k2).class_weight(g, c);
  const auto best = select_best_class(r.k3, r.k2, g);
  L.best_class = best.id;
  r.tour = patch_paths_to_tour(best.edges, g);
  return r;
}

CompleteGraph shrink_edge(const CompleteGraph& g, EdgeId e) {
  const int n = g.size();
  std::vector<Vertex> keep;
  for (int x = 0; x < n; ++x)
    if (x != e.v) keep.push_back(x);
  std::vector<Weight> upper;
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = a + 1; b < keep.size(); ++b) {
      const Vertex x = keep[a];
      const Vertex y = keep[b];
      if (x == e.u || y == e.u) {
        const Vertex other = x == e.u ? y : x;
        upper.push_back(std::max(g.weight(other, e.u), g.weight(other, e.v)));
      } else {
        upper.push_back(g.weight(x, y));
      }
    }
  return CompleteGraph(n - 1, upper);
}

Tour expand_tour(const CompleteGraph& g, const Tour& shrunk, EdgeId e) {
  std::vector<Vertex> base;
  for (Vertex x : shrunk.order) base.push_back(x >= e.v ? x + 1 : x);
  const auto at = static_cast<std::size_t>(std::find(base.begin(), base.end(), e.u) - base.begin());
  auto first = base;
  first.insert(first.begin() + static_cast<long>(at) + 1, e.v);
  auto second = base;
  second.insert(second.begin() + static_cast<long>(at), e.v);
  const Weight w1 = tour_weight(g, first);
  const Weight w2 = tour_weight(g, second);
  Tour t;
  t.order = w2 > w1 ? second : first;
  t.weight = std::max(w1, w2);
  return t;
}

SolveResult solve(const CompleteGraph& g, const SolveOptions& options) {
  const int n = g.size();
  if (n < 3) throw InstanceError("instance needs at least 3 vertices");
  SolveResult res;
  if (n <= 5) {
    // Too small for the gadgets; at most 12 distinct tours.
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    res.tour.order = perm;
    res.tour.weight = tour_weight(g, perm);
    while (std::next_permutation(perm.begin() + 1, perm.end())) {
      if (perm.back() < perm[1]) continue;
      const Weight w = tour_weight(g, perm);
      if (w > res.tour.weight) res.tour = {perm, w};
    }
    return res;
  }
  if (n % 2 == 0) {
    res.run = run_pipeline(g, options.trace);
    res.tour = res.run->tour;
    return res;
  }
  std::vector<EdgeId> candidates;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) candidates.emplace_back(u, v);
  if (options.fast_odd) {
    EdgeId heaviest = candidates.front();
    for (const auto& e : candidates)
      if (g.weight(e) > g.weight(heaviest)) heaviest = e;
    candidates = {heaviest};
    res.bound_guaranteed = false;
  }
  res.odd_candidates = static_cast<int>(candidates.size());
  struct Best {
    std::size_t index = 0;
    Tour tour;
    std::optional<PipelineRun> run;
  };
  const auto better = [](const Best& a, const Best& b) {
    return a.tour.weight > b.tour.weight || (a.tour.weight == b.tour.weight && a.index < b.index);
  };
  const int workers = std::clamp(options.threads, 1, static_cast<int>(candidates.size()));
  std::vector<std::optional<Best>> best(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::atomic<std::size_t> next{0};
  const auto work = [&](int id) {
    try {
      for (std::size_t i = next++; i < candidates.size(); i = next++) {
        auto run = run_pipeline(shrink_edge(g, candidates[i]), options.trace);
        Best b{i, expand_tour(g, run.tour, candidates[i]), std::nullopt};
        if (!best[id] || better(b, *best[id])) {
          b.run = std::move(run);
          best[id] = std::move(b);
        }
      }
    } catch (...) {
      errors[id] = std::current_exception();
      next = candidates.size();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < workers; ++id) pool.emplace_back(work, id);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::optional<Best> winner;
  for (auto& b : best)
    if (b && (!winner || better(*b, *winner))) winner = std::move(b);
  res.tour = std::move(winner->tour);
  res.shrunk = candidates[winner->index];
  res.run = std::move(winner->run);
  // Canonical start at vertex 0, direction toward the smaller neighbour.
  auto& o = res.tour.order;
  std::rotate(o.begin(), std::find(o.begin(), o.end(), 0), o.end());
  if (o.size() > 2 && o.back() < o[1]) std::reverse(o.begin() + 1, o.end());
  return res;
}

}  // namespace maxtsp
