#include "maxtsp/gadget.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include "maxtsp/oracle.hpp"

namespace maxtsp {

int SplitGraph::kite_of(Vertex v) const { return v < original_count ? vertex_kite[v] : -1; }

int SplitGraph::split_vertex(EdgeId e, Vertex at) const {
  const auto it = splitting.find(e);
  if (it == splitting.end()) throw PreconditionError("edge is not problematic");
  return at == e.u ? it->second.first : it->second.second;
}

namespace {

// For a 3-kite, the foot first, then the two ends of the internal matching edge.
std::array<Vertex, 3> three_kite_labels(const Kite& k) {
  const auto& c = k.vertices;
  const auto f = static_cast<std::size_t>(std::find(c.begin(), c.end(), k.foot) - c.begin());
  return {c[f], c[(f + 1) % 3], c[(f + 2) % 3]};
}

}  // namespace

SplitGraph build_split_graph(const CompleteGraph& g, const std::vector<Kite>& kites) {
  const int n = g.size();
  SplitGraph sg;
  sg.original_count = n;
  sg.kites = kites;
  sg.vertex_kite.assign(n, -1);
  for (std::size_t ki = 0; ki < kites.size(); ++ki) {
    for (Vertex v : kites[ki].vertices) {
      if (v < 0 || v >= n || sg.vertex_kite[v] != -1) throw PreconditionError("kites must be disjoint vertex sets");
      sg.vertex_kite[v] = static_cast<int>(ki);
    }
  }
  int next = n;
  for (const auto& k : kites) {
    for (const auto& e : k.problematic_edges()) {
      sg.splitting[e] = {next, next + 1};
      next += 2;
    }
  }
  for (const auto& k : kites) {
    const int count = k.kind == KiteKind::three ? 2 : 5;
    std::vector<int> ids(count);
    for (int& id : ids) id = next++;
    sg.gadget_vertices.push_back(std::move(ids));
  }

  sg.graph.vertex_count = next;
  sg.demand.assign(next, 1);
  for (int v = 0; v < n; ++v) sg.demand[v] = 2;
  for (std::size_t ki = 0; ki < kites.size(); ++ki) {
    if (kites[ki].kind == KiteKind::four) {
      for (int id : sg.gadget_vertices[ki]) sg.demand[id] = 2;
    }
  }

  auto& edges = sg.graph.edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const EdgeId e(u, v);
      if (!sg.is_problematic(e)) edges.emplace_back(e, 2 * g.weight(e));
    }
  }
  for (std::size_t ki = 0; ki < kites.size(); ++ki) {
    const auto& k = kites[ki];
    sg.gadget_edge_begin.push_back(edges.size());
    for (const auto& e : k.problematic_edges()) {
      const auto [xu, xv] = sg.splitting.at(e);
      edges.emplace_back(EdgeId(e.u, xu), g.weight(e));
      edges.emplace_back(EdgeId(xv, e.v), g.weight(e));
      if (!k.is_diagonal(e)) edges.emplace_back(EdgeId(xu, xv), 0);
    }
    const auto& gv = sg.gadget_vertices[ki];
    if (k.kind == KiteKind::three) {
      const auto [u, v, w] = three_kite_labels(k);
      const int p = gv[0];
      const int q = gv[1];
      edges.emplace_back(EdgeId(p, sg.split_vertex(EdgeId(u, v), u)), 0);
      edges.emplace_back(EdgeId(p, sg.split_vertex(EdgeId(u, w), u)), 0);
      edges.emplace_back(EdgeId(p, sg.split_vertex(EdgeId(v, w), v)), 0);
      edges.emplace_back(EdgeId(q, sg.split_vertex(EdgeId(u, w), w)), 0);
      edges.emplace_back(EdgeId(q, sg.split_vertex(EdgeId(v, w), w)), 0);
      edges.emplace_back(EdgeId(q, sg.split_vertex(EdgeId(u, v), v)), 0);
    } else {
      for (int i = 0; i < 4; ++i) {
        const Vertex x = k.vertices[i];
        for (int j = 0; j < 4; ++j) {
          if (i != j) edges.emplace_back(EdgeId(gv[i], sg.split_vertex(EdgeId(x, k.vertices[j]), x)), 0);
        }
      }
      for (int i = 0; i < 4; ++i) edges.emplace_back(EdgeId(gv[4], gv[i]), 0);
    }
    sg.gadget_edge_end.push_back(edges.size());
  }
  return sg;
}

Weight RelaxedCycleCover::whole_weight(const CompleteGraph& g) const { return edge_set_weight(g, whole_edges); }

RelaxedCycleCover decode_relaxed_cover(const SplitGraph& sg, const CompleteGraph& g, const std::vector<EdgeId>& b_edges) {
  const int n = sg.original_count;
  std::map<int, std::pair<EdgeId, Vertex>> owner;
  for (const auto& [e, xs] : sg.splitting) {
    owner[xs.first] = {e, e.u};
    owner[xs.second] = {e, e.v};
  }
  RelaxedCycleCover c2;
  std::map<EdgeId, std::vector<Vertex>> halves;
  for (const auto& be : b_edges) {
    if (be.v < n) {
      c2.whole_edges.push_back(be);
      c2.weight += 2 * g.weight(be);
    } else if (be.u < n) {
      const auto it = owner.find(be.v);
      if (it == owner.end()) throw InternalError("original vertex joined to a gadget vertex");
      if (it->second.second != be.u) throw InternalError("half-edge at the wrong endpoint");
      halves[it->second.first].push_back(be.u);
    }
  }
  for (const auto& [e, ends] : halves) {
    if (ends.size() == 2) {
      c2.whole_edges.push_back(e);
      c2.weight += 2 * g.weight(e);
    } else {
      c2.half_edges.push_back(HalfEdge{e, ends[0]});
      c2.weight += g.weight(e);
    }
  }
  std::sort(c2.whole_edges.begin(), c2.whole_edges.end());
  std::sort(c2.half_edges.begin(), c2.half_edges.end());
  return c2;
}

RelaxedCycleCover compute_relaxed_cycle_cover(const SplitGraph& sg, const CompleteGraph& g) {
  BMatching bm;
  try {
    std::vector<EdgeId> hint;
    const int n = sg.original_count;
    if (n >= 6) {
      CycleCover ring;
      ring.cycles.emplace_back(n);
      std::iota(ring.cycles[0].begin(), ring.cycles[0].end(), 0);
      hint = embed_kite_free_cover(ring, sg, g).edges;
    }
    bm = max_weight_perfect_b_matching(sg.graph, sg.demand, hint);
  } catch (const Infeasible& ex) {
    throw InternalError(std::string("split graph has no perfect b-matching: ") + ex.what());
  }
  return decode_relaxed_cover(sg, g, bm.edges);
}

int kite_half_count(const RelaxedCycleCover& c2, const Kite& kite) {
  const auto in_kite = [&](EdgeId e) { return kite.contains(e.u) && kite.contains(e.v); };
  int count = 0;
  for (const auto& e : c2.whole_edges)
    if (in_kite(e)) count += 2;
  for (const auto& h : c2.half_edges)
    if (in_kite(h.edge)) ++count;
  return count;
}

RelaxedCoverReport check_relaxed_cover(const RelaxedCycleCover& c2, const std::vector<Kite>& kites, int n) {
  RelaxedCoverReport r;
  std::vector<int> deg(n, 0);
  for (const auto& e : c2.whole_edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (const auto& h : c2.half_edges) ++deg[h.endpoint];
  for (int v = 0; v < n; ++v) {
    if (deg[v] != 2) {
      r.degrees = false;
      r.failures.push_back("vertex " + std::to_string(v) + " has " + std::to_string(deg[v]) + " incident elements");
    }
  }
  for (const auto& k : kites) {
    const int h = kite_half_count(c2, k);
    const int cap = k.kind == KiteKind::three ? 4 : 6;
    if (h % 2 != 0 || h > cap) {
      (k.kind == KiteKind::three ? r.three_kites : r.four_kites) = false;
      r.failures.push_back("kite at cycle " + std::to_string(k.cycle_index) + " holds " + std::to_string(h) +
                           " half-edges");
    }
  }
  return r;
}

bool is_perfect_b_matching(const SplitGraph& sg, const std::vector<EdgeId>& edges) {
  std::set<EdgeId> present;
  for (const auto& [e, w] : sg.graph.edges) present.insert(e);
  std::set<EdgeId> seen;
  std::vector<int> deg(sg.graph.vertex_count, 0);
  for (const auto& e : edges) {
    if (!present.count(e) || !seen.insert(e).second) return false;
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg == std::vector<int>(sg.demand.begin(), sg.demand.end());
}

namespace {

bool fill_gadget(const std::vector<EdgeId>& pool, std::size_t idx, std::map<int, int>& residual,
                 std::vector<EdgeId>& chosen) {
  if (idx == pool.size()) {
    return std::all_of(residual.begin(), residual.end(), [](const auto& kv) { return kv.second == 0; });
  }
  const EdgeId e = pool[idx];
  if (residual[e.u] > 0 && residual[e.v] > 0) {
    --residual[e.u];
    --residual[e.v];
    chosen.push_back(e);
    if (fill_gadget(pool, idx + 1, residual, chosen)) return true;
    chosen.pop_back();
    ++residual[e.u];
    ++residual[e.v];
  }
  // Skipping e is hopeless when an endpoint can no longer reach its residual demand.
  for (const int x : {e.u, e.v}) {
    int left = 0;
    for (std::size_t j = idx + 1; j < pool.size(); ++j)
      if (pool[j].contains(x)) ++left;
    if (left < residual[x]) return false;
  }
  return fill_gadget(pool, idx + 1, residual, chosen);
}

}  // namespace

Embedding embed_kite_free_cover(const CycleCover& cover, const SplitGraph& sg, const CompleteGraph& g) {
  const int n = sg.original_count;
  if (!is_cycle_cover(cover, n)) throw PreconditionError("not a cycle cover");
  if (uses_forbidden_kite_cycle(cover, sg.kites)) throw NotKiteFree("cover contains a cycle on kite vertices");
  Embedding emb;
  std::set<int> taken_split;
  for (const auto& e : cover.edges()) {
    if (sg.is_problematic(e)) {
      const auto [xu, xv] = sg.splitting.at(e);
      emb.edges.emplace_back(e.u, xu);
      emb.edges.emplace_back(xv, e.v);
      taken_split.insert(xu);
      taken_split.insert(xv);
      emb.weight += 2 * g.weight(e);
    } else {
      emb.edges.push_back(e);
      emb.weight += 2 * g.weight(e);
    }
  }
  for (std::size_t ki = 0; ki < sg.kites.size(); ++ki) {
    const auto& k = sg.kites[ki];
    std::vector<EdgeId> pool;
    std::map<int, int> residual;
    for (std::size_t i = sg.gadget_edge_begin[ki]; i < sg.gadget_edge_end[ki]; ++i) {
      const EdgeId e = sg.graph.edges[i].first;
      if (e.u < n) continue;
      pool.push_back(e);
      for (const int x : {e.u, e.v}) residual[x] = sg.demand[x] - (taken_split.count(x) ? 1 : 0);
    }
    std::vector<EdgeId> chosen;
    if (!fill_gadget(pool, 0, residual, chosen)) throw InternalError("gadget admits no compliant selection");
    emb.edges.insert(emb.edges.end(), chosen.begin(), chosen.end());
    int sides = 0;
    int diagonals = 0;
    for (const auto& e : k.problematic_edges()) {
      if (!taken_split.count(sg.splitting.at(e).first)) continue;
      (k.is_diagonal(e) ? diagonals : sides)++;
    }
    emb.cases.push_back((k.kind == KiteKind::three ? "three/" : "four/") + std::to_string(sides) + "s" +
                        std::to_string(diagonals) + "d");
  }
  std::sort(emb.edges.begin(), emb.edges.end());
  return emb;
}

}  // namespace maxtsp
