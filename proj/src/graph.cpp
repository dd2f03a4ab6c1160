#include "maxtsp/graph.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>

#include "maxtsp/union_find.hpp"

namespace maxtsp {

CompleteGraph::CompleteGraph(int n, std::span<const Weight> upper_triangle) : n_(n) {
  if (n < 3) throw InstanceError("instance needs at least 3 vertices, got " + std::to_string(n));
  const auto expected = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (upper_triangle.size() != expected) {
    throw InstanceError("expected " + std::to_string(expected) + " weights, got " +
                        std::to_string(upper_triangle.size()));
  }
  w_.assign(static_cast<std::size_t>(n) * n, 0);
  std::size_t k = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v, ++k) {
      const Weight w = upper_triangle[k];
      if (w < 0) {
        throw InstanceError("negative weight on (" + std::to_string(u) + "," + std::to_string(v) + ")");
      }
      w_[static_cast<std::size_t>(u) * n + v] = w;
      w_[static_cast<std::size_t>(v) * n + u] = w;
    }
  }
}

std::vector<Weight> CompleteGraph::upper_triangle() const {
  std::vector<Weight> out;
  out.reserve(static_cast<std::size_t>(n_) * (n_ - 1) / 2);
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v) out.push_back(weight(u, v));
  return out;
}

CompleteGraph build_complete_graph(int n, std::span<const std::tuple<Vertex, Vertex, Weight>> table) {
  if (n < 3) throw InstanceError("instance needs at least 3 vertices, got " + std::to_string(n));
  const auto pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  std::vector<std::optional<Weight>> seen(pairs);
  auto index = [n](int u, int v) {
    return static_cast<std::size_t>(u) * n - static_cast<std::size_t>(u) * (u + 1) / 2 + (v - u - 1);
  };
  for (const auto& [a, b, w] : table) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw InstanceError("vertex out of range");
    if (a == b) throw InstanceError("self-loop entry");
    if (w < 0) {
      throw InstanceError("negative weight on (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    const EdgeId e(a, b);
    auto& slot = seen[index(e.u, e.v)];
    if (slot && *slot != w) {
      throw InstanceError("conflicting weights for (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    slot = w;
  }
  std::vector<Weight> upper(pairs);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const auto& slot = seen[index(u, v)];
      if (!slot) throw InstanceError("missing weight for (" + std::to_string(u) + "," + std::to_string(v) + ")");
      upper[index(u, v)] = *slot;
    }
  }
  return CompleteGraph(n, upper);
}

void Multigraph::add(EdgeId e, int copies) {
  int& m = mult_[e];
  m += copies;
  if (m > 3) throw PreconditionError("multigraph multiplicity exceeds 3");
}

void Multigraph::remove(EdgeId e, int copies) {
  auto it = mult_.find(e);
  if (it == mult_.end() || it->second < copies) throw PreconditionError("removing absent edge copy");
  it->second -= copies;
  if (it->second == 0) mult_.erase(it);
}

int Multigraph::multiplicity(EdgeId e) const {
  auto it = mult_.find(e);
  return it == mult_.end() ? 0 : it->second;
}

Weight multigraph_weight(const Multigraph& m) {
  Weight total = 0;
  for (const auto& [e, k] : m.edges()) total += static_cast<Weight>(k) * m.base().weight(e);
  return total;
}

std::vector<Vertex> Matching::mates(int n) const {
  std::vector<Vertex> mate(n, -1);
  for (const auto& e : pairs) {
    mate[e.u] = e.v;
    mate[e.v] = e.u;
  }
  return mate;
}

std::vector<EdgeId> CycleCover::edges() const {
  std::vector<EdgeId> out;
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) out.emplace_back(c[i], c[(i + 1) % c.size()]);
  }
  return out;
}

Weight CycleCover::weight(const CompleteGraph& g) const {
  const auto es = edges();
  return edge_set_weight(g, es);
}

bool is_vertex_disjoint_paths(std::span<const EdgeId> edges, int n) {
  std::vector<int> degree(n, 0);
  DisjointSets sets(n);
  for (const auto& e : edges) {
    if (e.u < 0 || e.v >= n) throw PreconditionError("edge outside vertex range");
    if (++degree[e.u] > 2 || ++degree[e.v] > 2) return false;
    if (!sets.unite(e.u, e.v)) return false;
  }
  return true;
}

Weight edge_set_weight(const CompleteGraph& g, std::span<const EdgeId> edges) {
  Weight total = 0;
  for (const auto& e : edges) total += g.weight(e);
  return total;
}

bool is_cycle_cover(const CycleCover& c, int n) {
  std::vector<int> seen(n, 0);
  for (const auto& cyc : c.cycles) {
    if (cyc.size() < 3) return false;
    for (Vertex v : cyc) {
      if (v < 0 || v >= n || seen[v]++) return false;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

}  // namespace maxtsp
