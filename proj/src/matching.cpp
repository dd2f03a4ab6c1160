#include "maxtsp/matching.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "maxtsp/detail/blossom.hpp"

namespace maxtsp {

GeneralGraph as_general_graph(const CompleteGraph& g) {
  const int n = g.size();
  GeneralGraph gg;
  gg.vertex_count = n;
  gg.edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) gg.edges.emplace_back(EdgeId(u, v), g.weight(u, v));
  return gg;
}

Matching max_weight_perfect_matching(const CompleteGraph& g) { return max_weight_perfect_matching(as_general_graph(g)); }

void GeneralGraph::validate() const {
  std::set<EdgeId> seen;
  for (const auto& [e, w] : edges) {
    if (e.u < 0 || e.v >= vertex_count) throw PreconditionError("edge endpoint out of range");
    if (!seen.insert(e).second) {
      throw PreconditionError("parallel edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
  }
}

namespace {

void check_demand(const GeneralGraph& g, const DegreeDemand& b) {
  if (static_cast<int>(b.size()) != g.vertex_count) throw PreconditionError("demand size mismatch");
  long long total = 0;
  for (int d : b) {
    if (d < 1) throw PreconditionError("demand must be positive");
    total += d;
  }
  if (total % 2 != 0) throw Infeasible("total demand is odd");
}

ExpandedInstance expand_subset(const GeneralGraph& g, const DegreeDemand& b, const std::vector<int>& subset) {
  ExpandedInstance ex;
  ex.copy_begin.resize(g.vertex_count);
  int next = 0;
  for (int v = 0; v < g.vertex_count; ++v) {
    ex.copy_begin[v] = next;
    next += b[v];
  }
  auto& out = ex.graph.edges;
  for (int idx : subset) {
    const auto& [e, w] = g.edges[idx];
    const int bu = b[e.u];
    const int bv = b[e.v];
    if (bu == 1 || bv == 1) {
      const Vertex single = bu == 1 ? e.u : e.v;
      const Vertex multi = bu == 1 ? e.v : e.u;
      for (int j = 0; j < b[multi]; ++j) {
        out.emplace_back(EdgeId(ex.copy_begin[single], ex.copy_begin[multi] + j), 2 * w);
        ex.origin.push_back(idx);
      }
    } else {
      const int eu = next++;
      const int ev = next++;
      for (int i = 0; i < bu; ++i) {
        out.emplace_back(EdgeId(ex.copy_begin[e.u] + i, eu), w);
        ex.origin.push_back(idx);
      }
      for (int j = 0; j < bv; ++j) {
        out.emplace_back(EdgeId(ex.copy_begin[e.v] + j, ev), w);
        ex.origin.push_back(-1);
      }
      out.emplace_back(EdgeId(eu, ev), 0);
      ex.origin.push_back(-1);
    }
  }
  ex.graph.vertex_count = next;
  return ex;
}

struct SubsetSolve {
  bool perfect = false;
  Matching matching;
  std::vector<Weight> dual;
};

SubsetSolve solve_expanded(const ExpandedInstance& ex) {
  std::vector<std::tuple<int, int, Weight>> edges;
  edges.reserve(ex.graph.edges.size());
  for (const auto& [e, w] : ex.graph.edges) edges.emplace_back(e.u, e.v, w);
  auto res = detail::max_weight_matching(ex.graph.vertex_count, edges, true);
  SubsetSolve out;
  out.perfect = std::none_of(res.mate.begin(), res.mate.end(), [](int m) { return m < 0; });
  for (int v = 0; v < ex.graph.vertex_count; ++v) {
    if (res.mate[v] > v) out.matching.pairs.emplace_back(v, res.mate[v]);
  }
  out.dual = std::move(res.dual);
  return out;
}

/// Candidate subset: the `k` heaviest edges at every vertex.
std::vector<int> candidate_edges(const GeneralGraph& g, int k, const std::vector<std::vector<int>>& incident) {
  std::vector<char> keep(g.edges.size(), 0);
  for (const auto& inc : incident) {
    if (static_cast<int>(inc.size()) <= k) {
      for (int idx : inc) keep[idx] = 1;
      continue;
    }
    std::vector<int> order(inc);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
      if (g.edges[a].second != g.edges[b].second) return g.edges[a].second > g.edges[b].second;
      return a < b;
    });
    for (int i = 0; i < k; ++i) keep[order[i]] = 1;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) out.push_back(static_cast<int>(i));
  return out;
}

constexpr std::size_t kDirectLimit = 1500;
constexpr int kInitialCandidates = 6;

}  // namespace

ExpandedInstance expand_to_matching_instance(const GeneralGraph& g, const DegreeDemand& b) {
  g.validate();
  check_demand(g, b);
  std::vector<int> all(g.edges.size());
  std::iota(all.begin(), all.end(), 0);
  return expand_subset(g, b, all);
}

BMatching contract_expanded_matching(const GeneralGraph& g, const ExpandedInstance& ex, const Matching& expanded) {
  std::map<EdgeId, int> index;
  for (std::size_t i = 0; i < ex.graph.edges.size(); ++i) index.emplace(ex.graph.edges[i].first, static_cast<int>(i));
  BMatching out;
  for (const auto& e : expanded.pairs) {
    auto it = index.find(e);
    if (it == index.end()) throw PreconditionError("matching uses an edge outside the expanded instance");
    const int origin = ex.origin[it->second];
    if (origin < 0) continue;
    out.edges.push_back(g.edges[origin].first);
    out.weight += g.edges[origin].second;
  }
  std::sort(out.edges.begin(), out.edges.end());
  if (std::adjacent_find(out.edges.begin(), out.edges.end()) != out.edges.end()) {
    throw InternalError("expanded matching used an edge twice");
  }
  return out;
}

BMatching max_weight_perfect_b_matching(const GeneralGraph& g, const DegreeDemand& b, std::span<const EdgeId> hint) {
  g.validate();
  check_demand(g, b);
  std::vector<std::vector<int>> incident(g.vertex_count);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    incident[g.edges[i].first.u].push_back(static_cast<int>(i));
    incident[g.edges[i].first.v].push_back(static_cast<int>(i));
  }
  for (int v = 0; v < g.vertex_count; ++v) {
    if (static_cast<int>(incident[v].size()) < b[v]) {
      throw Infeasible("vertex " + std::to_string(v) + " has fewer edges than its demand");
    }
  }

  std::vector<int> subset;
  if (g.edges.size() <= kDirectLimit) {
    subset.resize(g.edges.size());
    std::iota(subset.begin(), subset.end(), 0);
  } else {
    subset = candidate_edges(g, kInitialCandidates, incident);
  }
  std::vector<int> pinned;
  if (!hint.empty() && subset.size() < g.edges.size()) {
    std::map<EdgeId, int> index;
    for (std::size_t i = 0; i < g.edges.size(); ++i) index.emplace(g.edges[i].first, static_cast<int>(i));
    for (const auto& e : hint)
      if (const auto it = index.find(e); it != index.end()) pinned.push_back(it->second);
  }
  const auto with_pinned = [&](std::vector<int> s) {
    s.insert(s.end(), pinned.begin(), pinned.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  };
  subset = with_pinned(std::move(subset));
  int k = kInitialCandidates;
  while (true) {
    const auto ex = expand_subset(g, b, subset);
    const auto sol = solve_expanded(ex);
    const bool complete = subset.size() == g.edges.size();
    if (!sol.perfect) {
      if (complete) throw Infeasible("no perfect b-matching exists");
      k *= 2;
      subset = with_pinned(candidate_edges(g, k, incident));
      if (static_cast<std::size_t>(k) * g.vertex_count >= g.edges.size()) {
        subset.resize(g.edges.size());
        std::iota(subset.begin(), subset.end(), 0);
      }
      continue;
    }
    if (complete) return contract_expanded_matching(g, ex, sol.matching);

    // Price the excluded edges against the vertex duals of the copies.
    std::vector<Weight> min_dual(g.vertex_count);
    for (int v = 0; v < g.vertex_count; ++v) {
      min_dual[v] = *std::min_element(sol.dual.begin() + ex.copy_begin[v], sol.dual.begin() + ex.copy_begin[v] + b[v]);
    }
    std::vector<char> in_subset(g.edges.size(), 0);
    for (int idx : subset) in_subset[idx] = 1;
    std::vector<std::vector<std::pair<Weight, int>>> violated(g.vertex_count);
    bool any = false;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (in_subset[i]) continue;
      const auto& [e, w] = g.edges[i];
      const Weight slack = min_dual[e.u] + min_dual[e.v] - 4 * w;
      if (slack < 0) {
        violated[e.u].emplace_back(slack, static_cast<int>(i));
        violated[e.v].emplace_back(slack, static_cast<int>(i));
        any = true;
      }
    }
    if (!any) return contract_expanded_matching(g, ex, sol.matching);
    for (auto& list : violated) {
      const std::size_t take = std::min<std::size_t>(list.size(), kInitialCandidates);
      std::partial_sort(list.begin(), list.begin() + take, list.end());
      for (std::size_t i = 0; i < take; ++i) in_subset[list[i].second] = 1;
    }
    subset.clear();
    for (std::size_t i = 0; i < in_subset.size(); ++i)
      if (in_subset[i]) subset.push_back(static_cast<int>(i));
  }
}

Matching max_weight_perfect_matching(const GeneralGraph& g) {
  if (g.vertex_count % 2 != 0) throw NoPerfectMatching("odd vertex count");
  BMatching bm;
  try {
    bm = max_weight_perfect_b_matching(g, DegreeDemand(g.vertex_count, 1));
  } catch (const Infeasible& e) {
    throw NoPerfectMatching(e.what());
  }
  Matching m;
  m.pairs = std::move(bm.edges);
  m.weight = bm.weight;
  return m;
}

}  // namespace maxtsp
