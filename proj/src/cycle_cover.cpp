#include "maxtsp/cycle_cover.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "maxtsp/matching.hpp"

namespace maxtsp {

bool Kite::contains(Vertex v) const { return std::find(vertices.begin(), vertices.end(), v) != vertices.end(); }

std::vector<EdgeId> Kite::sides() const {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < vertices.size(); ++i) out.emplace_back(vertices[i], vertices[(i + 1) % vertices.size()]);
  return out;
}

std::vector<EdgeId> Kite::problematic_edges() const {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j) out.emplace_back(vertices[i], vertices[j]);
  std::sort(out.begin(), out.end());
  return out;
}

bool Kite::is_diagonal(EdgeId e) const {
  if (kind != KiteKind::four) return false;
  return e == EdgeId(vertices[0], vertices[2]) || e == EdgeId(vertices[1], vertices[3]);
}

bool Kite::has_matched_diagonals() const {
  return kind == KiteKind::four && std::any_of(d_edges.begin(), d_edges.end(), [&](EdgeId e) { return is_diagonal(e); });
}

CycleCover max_weight_cycle_cover(const CompleteGraph& g) {
  const int n = g.size();
  if (n < 3) throw InstanceError("cycle cover needs at least 3 vertices");
  std::vector<EdgeId> ring;
  for (int v = 0; v < n; ++v) ring.emplace_back(v, (v + 1) % n);
  const auto bm = max_weight_perfect_b_matching(as_general_graph(g), DegreeDemand(n, 2), ring);
  return cycles_from_edges(n, bm.edges);
}

CycleCover cycles_from_edges(int n, std::span<const EdgeId> edges) {
  std::vector<std::vector<Vertex>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (int v = 0; v < n; ++v) {
    if (adj[v].size() != 2) throw PreconditionError("edge set is not 2-regular");
    std::sort(adj[v].begin(), adj[v].end());
  }
  CycleCover cover;
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> cyc{s};
    seen[s] = 1;
    Vertex prev = s;
    Vertex cur = adj[s][0];
    while (cur != s) {
      if (seen[cur]) throw PreconditionError("edge set is not a union of cycles");
      seen[cur] = 1;
      cyc.push_back(cur);
      const Vertex next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
      prev = cur;
      cur = next;
    }
    if (cyc.size() < 3) throw PreconditionError("cycle shorter than 3");
    cover.cycles.push_back(std::move(cyc));
  }
  return cover;
}

std::vector<Kite> find_kites(const CycleCover& cmax, const Matching& m) {
  int n = 0;
  for (const auto& c : cmax.cycles) n += static_cast<int>(c.size());
  const auto mate = m.mates(n);
  std::vector<Kite> kites;
  for (std::size_t ci = 0; ci < cmax.cycles.size(); ++ci) {
    const auto& c = cmax.cycles[ci];
    if (c.size() != 3 && c.size() != 4) continue;
    std::vector<EdgeId> internal;
    for (Vertex v : c) {
      const Vertex w = mate[v];
      if (w > v && std::find(c.begin(), c.end(), w) != c.end()) internal.emplace_back(v, w);
    }
    Kite k;
    k.cycle_index = static_cast<int>(ci);
    k.vertices = c;
    k.d_edges = internal;
    if (c.size() == 3 && internal.size() == 1) {
      k.kind = KiteKind::three;
      for (Vertex v : c)
        if (!internal[0].contains(v)) k.foot = v;
      kites.push_back(std::move(k));
    } else if (c.size() == 4 && internal.size() == 2) {
      k.kind = KiteKind::four;
      kites.push_back(std::move(k));
    }
  }
  return kites;
}

namespace {

bool in_cycle(std::span<const Vertex> cycle, Vertex v) { return std::find(cycle.begin(), cycle.end(), v) != cycle.end(); }

}  // namespace

CycleStats cycle_stats(std::span<const Vertex> cycle, std::span<const Vertex> mate, std::span<const int> m_color) {
  CycleStats st;
  std::set<int> colors;
  for (Vertex v : cycle) {
    const Vertex w = mate[v];
    if (in_cycle(cycle, w)) {
      if (v < w) ++st.flex;
    } else if (m_color[v] > 0) {
      colors.insert(m_color[v]);
    }
  }
  st.col = static_cast<int>(colors.size());
  return st;
}

int disjoint_monochrome_pairs(std::span<const Vertex> cycle, std::span<const Vertex> mate,
                              std::span<const int> m_color) {
  const std::size_t len = cycle.size();
  std::vector<char> good(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    const Vertex a = cycle[i];
    const Vertex b = cycle[(i + 1) % len];
    good[i] = !in_cycle(cycle, mate[a]) && !in_cycle(cycle, mate[b]) && m_color[a] > 0 && m_color[a] == m_color[b];
  }
  const auto bad = std::find(good.begin(), good.end(), 0);
  if (bad == good.end()) return static_cast<int>(len / 2);
  // Runs of consecutive qualifying edges form paths; a path of r edges holds ceil(r/2).
  const std::size_t start = static_cast<std::size_t>(bad - good.begin());
  int total = 0;
  int run = 0;
  for (std::size_t k = 1; k <= len; ++k) {
    if (good[(start + k) % len]) {
      ++run;
    } else {
      total += (run + 1) / 2;
      run = 0;
    }
  }
  return total + (run + 1) / 2;
}

bool is_blocked(std::span<const Vertex> cycle, const CycleStats& stats, std::span<const Vertex> mate,
                std::span<const int> m_color) {
  for (Vertex v : cycle) {
    if (!in_cycle(cycle, mate[v]) && m_color[v] == 0) {
      throw PreconditionError("external matching edge at " + std::to_string(v) + " is uncoloured");
    }
  }
  if (stats.flex + stats.col >= 3) return false;
  if (disjoint_monochrome_pairs(cycle, mate, m_color) >= 3 - stats.flex - stats.col) return false;
  if (cycle.size() == 4 && stats.flex == 1) return false;
  return true;
}

}  // namespace maxtsp
