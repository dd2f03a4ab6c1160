#include "maxtsp/g2prime.hpp"

#include <algorithm>
#include <array>

namespace maxtsp {

bool G2Prime::is_double(EdgeId e) const {
  const auto it = multiplicity.find(e);
  return it != multiplicity.end() && it->second >= 2;
}

std::vector<EdgeId> G2Prime::incident(Vertex v) const {
  std::vector<EdgeId> out;
  for (const auto& el : elements)
    if (el.edge.contains(v)) out.push_back(el.edge);
  if (mate[v] >= 0) out.emplace_back(v, mate[v]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool G2Prime::has_other_double(Vertex v, EdgeId a, EdgeId b) const {
  for (const auto& e : incident(v))
    if (e != a && e != b && is_double(e)) return true;
  return false;
}

namespace {

struct End {
  int element = -1;
  int side = 0;
};

}  // namespace

G2Prime build_g2prime(int n, const RelaxedCycleCover& c2, const std::vector<HalfEdge>& z,
                      const std::vector<EdgeId>& f1, const std::vector<EdgeId>& f2, const Matching& m) {
  G2Prime g;
  g.n = n;
  g.mate = m.mates(n);
  std::vector<EdgeId> removed = f2;
  std::sort(removed.begin(), removed.end());
  const auto take = [&](EdgeId e) {
    const auto it = std::lower_bound(removed.begin(), removed.end(), e);
    if (it == removed.end() || *it != e) return false;
    removed.erase(it);
    return true;
  };
  for (const auto& e : c2.whole_edges)
    if (!take(e)) g.elements.push_back({e, G2Origin::whole, -1});
  for (const auto& h : z)
    if (!take(h.edge)) g.elements.push_back({h.edge, G2Origin::promoted, h.endpoint});
  if (!removed.empty()) throw PreconditionError("F2 edge outside I(C2) + Z");
  for (const auto& e : f1) g.elements.push_back({e, G2Origin::exchanged, -1});

  for (const auto& e : m.pairs) g.multiplicity[e] += 1;
  for (const auto& el : g.elements) g.multiplicity[el.edge] += 1;
  g.degree.assign(n, 1);
  std::vector<std::vector<End>> at(n);
  for (std::size_t i = 0; i < g.elements.size(); ++i) {
    const auto& el = g.elements[i];
    ++g.degree[el.edge.u];
    ++g.degree[el.edge.v];
    at[el.edge.u].push_back({static_cast<int>(i), 0});
    at[el.edge.v].push_back({static_cast<int>(i), 1});
  }

  // link[element][side] is the end joined to it at that vertex.
  std::vector<std::array<End, 2>> link(g.elements.size(), {End{}, End{}});
  const auto join = [&](End a, End b) {
    link[a.element][a.side] = b;
    link[b.element][b.side] = a;
  };
  for (int v = 0; v < n; ++v) {
    std::vector<End> native;
    std::vector<End> loose;
    for (const End& e : at[v]) {
      const auto& el = g.elements[e.element];
      const bool from_c2 = el.origin == G2Origin::whole || (el.origin == G2Origin::promoted && el.anchor == v);
      (from_c2 ? native : loose).push_back(e);
    }
    if (native.size() == 2) {
      join(native[0], native[1]);
    } else {
      loose.insert(loose.end(), native.begin(), native.end());
      std::sort(loose.begin(), loose.end(), [](End a, End b) { return a.element < b.element; });
      if (loose.size() >= 2) join(loose[0], loose[1]);
    }
  }

  const auto endpoint = [&](End e) {
    const auto& edge = g.elements[e.element].edge;
    return e.side == 0 ? edge.u : edge.v;
  };
  std::vector<char> used(g.elements.size(), 0);
  const auto walk = [&](End start, G2Part& part) {
    End cur = start;
    part.vertices.push_back(endpoint(cur));
    while (true) {
      used[cur.element] = 1;
      part.elements.push_back(cur.element);
      const End out{cur.element, 1 - cur.side};
      const End next = link[out.element][out.side];
      if (next.element < 0) {
        part.vertices.push_back(endpoint(out));
        return;
      }
      if (next.element == start.element && next.side == start.side) {
        part.cycle = true;
        return;
      }
      part.vertices.push_back(endpoint(next));
      cur = next;
    }
  };
  for (std::size_t i = 0; i < g.elements.size(); ++i) {
    for (int side = 0; side < 2; ++side) {
      if (used[i] || link[i][side].element >= 0) continue;
      G2Part p;
      walk(End{static_cast<int>(i), side}, p);
      g.parts.push_back(std::move(p));
    }
  }
  for (std::size_t i = 0; i < g.elements.size(); ++i) {
    if (used[i]) continue;
    G2Part p;
    walk(End{static_cast<int>(i), 0}, p);
    g.parts.push_back(std::move(p));
  }

  for (auto& p : g.parts) {
    if (p.cycle) {
      const auto k = p.vertices.size();
      const auto lo = static_cast<std::size_t>(std::min_element(p.vertices.begin(), p.vertices.end()) - p.vertices.begin());
      // vertices[i] is the start of elements[i].
      std::rotate(p.vertices.begin(), p.vertices.begin() + static_cast<long>(lo), p.vertices.end());
      std::rotate(p.elements.begin(), p.elements.begin() + static_cast<long>(lo), p.elements.end());
      if (k > 2 && p.vertices.back() < p.vertices[1]) {
        std::reverse(p.vertices.begin() + 1, p.vertices.end());
        std::reverse(p.elements.begin(), p.elements.end());
      }
      continue;
    }
    const int first = g.degree[p.vertices.front()];
    const int last = g.degree[p.vertices.back()];
    bool flip = first >= 4 && last < 4;
    if (first < 4 && last < 4) flip = p.vertices.back() < p.vertices.front();
    if (flip) {
      std::reverse(p.vertices.begin(), p.vertices.end());
      std::reverse(p.elements.begin(), p.elements.end());
    }
    if (g.degree[p.vertices.back()] >= 4) p.border = static_cast<int>(p.elements.size()) - 1;
  }
  std::sort(g.parts.begin(), g.parts.end(), [](const G2Part& a, const G2Part& b) {
    if (a.cycle != b.cycle) return a.cycle;
    return a.vertices < b.vertices;
  });
  g.through.assign(n, -1);
  for (std::size_t pi = 0; pi < g.parts.size(); ++pi) {
    const auto& p = g.parts[pi];
    const std::size_t lo = p.cycle ? 0 : 1;
    const std::size_t hi = p.cycle ? p.vertices.size() : p.vertices.size() - 1;
    for (std::size_t i = lo; i < hi; ++i) g.through[p.vertices[i]] = static_cast<int>(pi);
  }
  return g;
}

bool is_amenable(const G2Prime& g, const G2Part& p) {
  if (p.cycle) return true;
  const int first = g.degree[p.vertices.front()];
  const int last = g.degree[p.vertices.back()];
  if (first < 4 && last < 4) return true;
  if (first >= 4 && last >= 4) return false;
  const auto& vs = p.vertices;
  const auto& es = p.elements;
  const std::size_t k = es.size();
  const Vertex v = first >= 4 ? vs.front() : vs.back();
  // Index from the degree-4 end.
  const auto vert = [&](std::size_t back) { return first >= 4 ? vs[back] : vs[k - back]; };
  const auto elem = [&](std::size_t back) { return first >= 4 ? es[back] : es[k - 1 - back]; };
  if (g.is_double(g.elements[elem(0)].edge)) return true;
  if (k >= 2 && g.is_double(g.elements[elem(1)].edge)) return true;
  if (k >= 3) {
    const Vertex x3 = vert(3);
    if (g.mate[v] == x3 || g.mate[vert(1)] == x3) return true;
  }
  return false;
}

bool is_forced_odd_cycle(const G2Prime& g, const G2Part& p) {
  if (!p.cycle || p.elements.size() % 2 == 0) return false;
  const std::size_t k = p.elements.size();
  for (std::size_t i = 0; i < k; ++i) {
    const EdgeId before = g.elements[p.elements[(i + k - 1) % k]].edge;
    const EdgeId after = g.elements[p.elements[i]].edge;
    if (!g.has_other_double(p.vertices[i], before, after)) return false;
  }
  return true;
}

}  // namespace maxtsp
