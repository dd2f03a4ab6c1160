#include "maxtsp/path_coloring.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

namespace maxtsp {

std::map<EdgeId, int> g1prime_multiplicity(const CycleCover& cmax, const Matching& m, const std::vector<EdgeId>& f1,
                                           const std::vector<EdgeId>& f2) {
  std::map<EdgeId, int> mult;
  for (const auto& e : cmax.edges()) mult[e] += 2;
  for (const auto& e : m.pairs) mult[e] += 1;
  for (const auto& e : f1) {
    auto it = mult.find(e);
    if (it == mult.end() || it->second == 0) throw PreconditionError("F1 edge is not in G1");
    if (--it->second == 0) mult.erase(it);
  }
  for (const auto& e : f2) mult[e] += 1;
  return mult;
}

ColorState::ColorState(int n) {
  for (int c = 0; c < 6; ++c) {
    uf_[c].reset(n);
    deg_[c].assign(n, 0);
  }
}

bool ColorState::fits(EdgeId e, ColorMask mask) const {
  for (int c = 1; c < 6; ++c) {
    if (!(mask & color_bit(c))) continue;
    if (deg_[c][e.u] >= 2 || deg_[c][e.v] >= 2 || uf_[c].connected(e.u, e.v)) return false;
  }
  return true;
}

bool ColorState::try_add(EdgeId e, ColorMask mask) {
  if (!fits(e, mask)) return false;
  for (int c = 1; c < 6; ++c) {
    if (!(mask & color_bit(c))) continue;
    ++deg_[c][e.u];
    ++deg_[c][e.v];
    uf_[c].unite(e.u, e.v);
  }
  log_.emplace_back(e, mask);
  return true;
}

ColorState::Mark ColorState::mark() const {
  Mark m;
  for (int c = 0; c < 6; ++c) m.uf[c] = uf_[c].checkpoint();
  m.log = log_.size();
  return m;
}

void ColorState::rollback(const Mark& m) {
  while (log_.size() > m.log) {
    const auto [e, mask] = log_.back();
    log_.pop_back();
    for (int c = 1; c < 6; ++c)
      if (mask & color_bit(c)) {
        --deg_[c][e.u];
        --deg_[c][e.v];
      }
  }
  for (int c = 0; c < 6; ++c) uf_[c].rollback(m.uf[c]);
}

namespace {

constexpr ColorMask all_but(int c) { return kPaletteK3 & ~color_bit(c); }

class G1Colorer {
 public:
  G1Colorer(const CompleteGraph& g, const CycleCover& cmax, const Matching& m, const std::vector<Kite>& kites)
      : n_(g.size()), cmax_(cmax), state_(g.size()) {
    mate_ = m.mates(n_);
    cycle_of_.assign(n_, -1);
    for (std::size_t c = 0; c < cmax.cycles.size(); ++c)
      for (Vertex v : cmax.cycles[c]) cycle_of_[v] = static_cast<int>(c);
    kite_.assign(cmax.cycles.size(), 0);
    for (const auto& k : kites) kite_[k.cycle_index] = 1;
    out_.m_color.assign(n_, 0);
    for (const auto& k : kites) {
      if (k.kind != KiteKind::three) continue;
      out_.m_color[k.foot] = kTailMark;
      out_.m_color[mate_[k.foot]] = kTailMark;
    }
  }

  G1Partial run() {
    std::vector<char> done(cmax_.cycles.size(), 0);
    const auto pending = [&](int c) { return !kite_[c] && !done[c]; };
    while (true) {
      int best = -1;
      int best_count = 0;
      bool any_uncolored = false;
      for (std::size_t c = 0; c < cmax_.cycles.size(); ++c) {
        if (!pending(static_cast<int>(c))) continue;
        const int u = static_cast<int>(uncolored_externals(static_cast<int>(c)).size());
        if (u > 0) any_uncolored = true;
        if (best < 0 || u < best_count) {
          best = static_cast<int>(c);
          best_count = u;
        }
      }
      if (!any_uncolored) break;
      color_externals(best);
      color_cycle(best);
      done[best] = 1;
    }
    for (std::size_t c = 0; c < cmax_.cycles.size(); ++c) {
      if (!pending(static_cast<int>(c))) continue;
      color_cycle(static_cast<int>(c));
      done[c] = 1;
    }
    return std::move(out_);
  }

 private:
  bool internal(Vertex v) const { return cycle_of_[mate_[v]] == cycle_of_[v]; }

  std::vector<Vertex> uncolored_externals(int c) const {
    std::vector<Vertex> out;
    for (Vertex v : cmax_.cycles[c])
      if (!internal(v) && out_.m_color[v] == 0) out.push_back(v);
    return out;
  }

  CycleStats stats(int c) const {
    CycleStats st;
    ColorMask seen = 0;
    for (Vertex v : cmax_.cycles[c]) {
      if (internal(v)) {
        if (v < mate_[v]) ++st.flex;
      } else if (out_.m_color[v] > 0) {
        seen |= color_bit(out_.m_color[v]);
      }
    }
    st.col = color_count(seen);
    return st;
  }

  int monochrome_pairs(int c) const {
    const auto& cyc = cmax_.cycles[c];
    const std::size_t len = cyc.size();
    std::vector<char> good(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
      const Vertex a = cyc[i];
      const Vertex b = cyc[(i + 1) % len];
      good[i] = !internal(a) && !internal(b) && out_.m_color[a] > 0 && out_.m_color[a] == out_.m_color[b];
    }
    const auto bad = std::find(good.begin(), good.end(), 0);
    if (bad == good.end()) return static_cast<int>(len / 2);
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

  bool blocked(int c) const {
    const auto st = stats(c);
    if (st.flex + st.col >= 3) return false;
    if (monochrome_pairs(c) >= 3 - st.flex - st.col) return false;
    if (cmax_.cycles[c].size() == 4 && st.flex == 1) return false;
    return true;
  }

  /// Some colouring of the remaining external edges leaves c non-blocked.
  bool avoidable(int c) {
    if (kite_[c]) return true;
    const auto u = uncolored_externals(c);
    if (u.size() >= 3) return true;
    const int total = u.size() == 0 ? 1 : u.size() == 1 ? 3 : 9;
    bool ok = false;
    for (int code = 0; code < total && !ok; ++code) {
      int x = code;
      for (Vertex v : u) {
        out_.m_color[v] = 1 + x % 3;
        x /= 3;
      }
      ok = !blocked(c);
    }
    for (Vertex v : u) out_.m_color[v] = 0;
    return ok;
  }

  void set_external(Vertex v, int k) {
    out_.m_color[v] = k;
    out_.m_color[mate_[v]] = k;
  }

  void color_externals(int c) {
    const auto u = uncolored_externals(c);
    if (u.empty()) return;
    long budget = 20000;
    std::function<bool(std::size_t)> dfs = [&](std::size_t i) {
      if (i == u.size()) return true;
      if (--budget < 0) return false;
      const Vertex v = u[i];
      const int other = cycle_of_[mate_[v]];
      ColorMask present = 0;
      for (Vertex x : cmax_.cycles[c])
        if (!internal(x) && out_.m_color[x] > 0) present |= color_bit(out_.m_color[x]);
      std::vector<int> order;
      for (int k = 1; k <= 3; ++k)
        if (!(present & color_bit(k))) order.push_back(k);
      for (int k = 1; k <= 3; ++k)
        if (present & color_bit(k)) order.push_back(k);
      for (int k : order) {
        set_external(v, k);
        if (avoidable(c) && avoidable(other) && dfs(i + 1)) return true;
        set_external(v, 0);
      }
      return false;
    };
    if (!dfs(0)) {
      out_.trace.push_back("g1: externals of cycle " + std::to_string(c) + " forced");
      for (Vertex v : u) {
        if (out_.m_color[v] != 0) continue;
        int pick = 1;
        for (int k = 1; k <= 3; ++k) {
          set_external(v, k);
          const bool ok = avoidable(cycle_of_[mate_[v]]);
          set_external(v, 0);
          if (ok) {
            pick = k;
            break;
          }
        }
        set_external(v, pick);
      }
    }
    for (Vertex v : u) {
      const EdgeId e(v, mate_[v]);
      if (!state_.try_add(e, color_bit(out_.m_color[v]))) throw InternalError("external edge closes a monochromatic cycle");
      out_.colored[e] = color_bit(out_.m_color[v]);
    }
  }

  std::string rule_name(int c) const {
    const auto st = stats(c);
    if (st.flex + st.col >= 3) return "rotate";
    if (cmax_.cycles[c].size() == 4 && st.flex == 1) return "square";
    return st.col + st.flex <= 1 ? "case-1" : "case-2";
  }

  struct CycleSearch {
    const std::vector<Vertex>* cyc = nullptr;
    std::size_t len = 0;
    std::vector<char> full;
    std::vector<char> chord_first;
    std::vector<std::size_t> partner;
    std::vector<char> tail;
    std::vector<int> m_at;
    std::vector<int> mu;
    ColorMask external_colors = 0;
    long budget = 200000;
  };

  static bool vertex_ok(const CycleSearch& x, std::size_t i) {
    const std::size_t prev = (i + x.len - 1) % x.len;
    if (x.full[prev] || x.full[i]) return true;
    if (x.tail[i]) return x.mu[prev] != x.mu[i];
    const int m = x.m_at[i];
    return m <= 0 || m == x.mu[prev] || m == x.mu[i];
  }

  bool cycle_dfs(CycleSearch& x, std::size_t i, bool chord_done) {
    if (i == x.len) return vertex_ok(x, 0);
    if (--x.budget < 0) return false;
    const auto& cyc = *x.cyc;
    if (x.chord_first[i] && !chord_done) {
      const std::size_t j = x.partner[i];
      ColorMask used = x.external_colors;
      for (std::size_t t = 0; t < i; ++t)
        if (x.chord_first[t]) used |= color_bit(x.m_at[t]);
      const auto mk = state_.mark();
      for (int pass = 0; pass < 2; ++pass) {
        for (int k = 1; k <= 3; ++k) {
          if (static_cast<bool>(used & color_bit(k)) != (pass == 1)) continue;
          if (!state_.try_add(EdgeId(cyc[i], cyc[j]), color_bit(k))) continue;
          x.m_at[i] = x.m_at[j] = k;
          if (cycle_dfs(x, i, true)) return true;
          state_.rollback(mk);
          if (x.budget < 0) break;
        }
      }
      x.m_at[i] = x.m_at[j] = 0;
      return false;
    }
    const EdgeId e(cyc[i], cyc[(i + 1) % x.len]);
    const auto mk = state_.mark();
    if (x.full[i]) {
      x.mu[i] = 0;
      if (i > 0 && !vertex_ok(x, i)) return false;
      if (!state_.try_add(e, kPaletteK3)) return false;
      if (cycle_dfs(x, i + 1, false)) return true;
      state_.rollback(mk);
      return false;
    }
    ColorMask used = 0;
    for (std::size_t t = 0; t < i; ++t)
      if (x.mu[t] > 0) used |= color_bit(x.mu[t]);
    std::vector<int> order;
    if (x.m_at[i] > 0) order.push_back(x.m_at[i]);
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 1; k <= 3; ++k)
        if (static_cast<bool>(used & color_bit(k)) == (pass == 1) && k != x.m_at[i]) order.push_back(k);
    for (int k : order) {
      x.mu[i] = k;
      if (i > 0 && !vertex_ok(x, i)) continue;
      if (!state_.try_add(e, all_but(k))) continue;
      if (cycle_dfs(x, i + 1, false)) return true;
      state_.rollback(mk);
      if (x.budget < 0) break;
    }
    x.mu[i] = 0;
    return false;
  }

  /// Colours cycle c and its internal matching edges. Each cycle edge misses one colour
  /// mu; first choice is that the edge leaving v misses the colour of v's matching edge,
  /// and the search backtracks from there.
  void color_cycle(int c) {
    const auto& cyc = cmax_.cycles[c];
    CycleSearch x;
    x.cyc = &cyc;
    x.len = cyc.size();
    const std::size_t len = x.len;
    std::map<Vertex, std::size_t> pos;
    for (std::size_t i = 0; i < len; ++i) pos[cyc[i]] = i;
    x.full.assign(len, 0);
    x.chord_first.assign(len, 0);
    x.partner.assign(len, 0);
    x.tail.assign(len, 0);
    x.m_at.assign(len, 0);
    x.mu.assign(len, 0);
    for (std::size_t i = 0; i < len; ++i) x.full[i] = mate_[cyc[i]] == cyc[(i + 1) % len];
    for (std::size_t i = 0; i < len; ++i) {
      const Vertex v = cyc[i];
      if (!internal(v)) {
        x.m_at[i] = out_.m_color[v];
        x.tail[i] = out_.m_color[v] == kTailMark;
        if (out_.m_color[v] > 0) x.external_colors |= color_bit(out_.m_color[v]);
        continue;
      }
      const std::size_t j = pos.at(mate_[v]);
      const bool adjacent = x.full[i] || x.full[(i + len - 1) % len];
      x.partner[i] = j;
      if (!adjacent && i < j) x.chord_first[i] = 1;
    }
    const std::string rule = rule_name(c);
    const auto start = state_.mark();
    if (cycle_dfs(x, 0, false)) {
      for (std::size_t i = 0; i < len; ++i) {
        const EdgeId e(cyc[i], cyc[(i + 1) % len]);
        out_.colored[e] = x.full[i] ? kPaletteK3 : all_but(x.mu[i]);
        if (x.chord_first[i]) out_.colored[EdgeId(cyc[i], cyc[x.partner[i]])] = color_bit(x.m_at[i]);
      }
      for (std::size_t i = 0; i < len; ++i)
        if (internal(cyc[i]) && x.m_at[i] > 0) out_.m_color[cyc[i]] = x.m_at[i];
      out_.trace.push_back("g1: cycle " + std::to_string(c) + " " + rule);
    } else {
      state_.rollback(start);
      out_.skipped_cycles.push_back(c);
      out_.trace.push_back("g1: cycle " + std::to_string(c) + " left to completion");
    }
  }

  int n_;
  const CycleCover& cmax_;
  ColorState state_;
  std::vector<Vertex> mate_;
  std::vector<int> cycle_of_;
  std::vector<char> kite_;
  G1Partial out_;
};

}  // namespace

G1Partial path3color_g1(const CompleteGraph& g, const CycleCover& cmax, const Matching& m,
                        const std::vector<Kite>& kites) {
  return G1Colorer(g, cmax, m, kites).run();
}

PathColoring color_g1prime(const CompleteGraph& g, const CycleCover& cmax, const Matching& m,
                           const std::vector<Kite>& kites, const std::vector<EdgeId>& f1,
                           const std::vector<EdgeId>& f2, const G1Partial& partial, CompletionReport* report,
                           std::vector<std::string>* trace, long node_cap) {
  const int n = g.size();
  const auto mult = g1prime_multiplicity(cmax, m, f1, f2);
  std::vector<int> kite_of(n, -1);
  for (std::size_t k = 0; k < kites.size(); ++k)
    for (Vertex v : kites[k].vertices) kite_of[v] = static_cast<int>(k);
  std::vector<int> cycle_of(n, -1);
  for (std::size_t c = 0; c < cmax.cycles.size(); ++c)
    for (Vertex v : cmax.cycles[c]) cycle_of[v] = static_cast<int>(c);

  std::map<EdgeId, ColorMask> fixed;
  for (const auto& [e, mask] : partial.colored) {
    const auto it = mult.find(e);
    if (it != mult.end() && it->second == color_count(mask)) fixed.emplace(e, mask);
  }
  const auto key = [&](EdgeId e) {
    int k = static_cast<int>(kites.size());
    for (Vertex v : {e.u, e.v})
      if (kite_of[v] >= 0) k = std::min(k, kite_of[v]);
    return std::make_pair(k, e);
  };
  const long budgets[3] = {300000, 2000000, 8000000};
  long spent = 0;
  for (int level = 0; level < 3; ++level) {
    if (level == 1) {
      std::set<int> reopen;
      for (const auto& [e, d] : mult)
        if (!fixed.count(e))
          for (Vertex v : {e.u, e.v}) reopen.insert(cycle_of[v]);
      for (auto it = fixed.begin(); it != fixed.end();)
        it = reopen.count(cycle_of[it->first.u]) || reopen.count(cycle_of[it->first.v]) ? fixed.erase(it) : std::next(it);
    } else if (level == 2) {
      fixed.clear();
    }
    CompletionProblem p;
    p.vertex_count = n;
    p.palette = kPaletteK3;
    p.fixed.assign(fixed.begin(), fixed.end());
    std::vector<EdgeId> open;
    for (const auto& [e, d] : mult)
      if (!fixed.count(e)) open.push_back(e);
    std::sort(open.begin(), open.end(), [&](EdgeId a, EdgeId b) { return key(a) < key(b); });
    for (const auto& e : open) p.open.push_back({e, mult.at(e), kPaletteK3});
    SearchStats st;
    const auto res = complete_path_coloring(p, node_cap > 0 ? std::min(node_cap, budgets[level]) : budgets[level], &st);
    spent += st.nodes;
    if (trace)
      trace->push_back("h: level " + std::to_string(level) + " open " + std::to_string(open.size()) + " nodes " +
                       std::to_string(st.nodes) + (res ? " solved" : " failed"));
    if (!res) continue;
    PathColoring out;
    out.palette = kPaletteK3;
    for (const auto& [e, mask] : fixed) out.slots.push_back({e, color_count(mask), mask});
    for (std::size_t i = 0; i < open.size(); ++i) out.slots.push_back({open[i], mult.at(open[i]), (*res)[i]});
    std::sort(out.slots.begin(), out.slots.end(), [](const ColorSlot& a, const ColorSlot& b) { return a.edge < b.edge; });
    if (report) {
      report->widening = level;
      report->nodes = spent;
    }
    return out;
  }
  throw InternalError("no path-3-colouring of G'1 found");
}

std::vector<int> g2_processing_order(const G2Prime& g2) {
  const int parts = static_cast<int>(g2.parts.size());
  std::vector<int> order;
  std::vector<int> target(parts, -1);
  for (int p = 0; p < parts; ++p) {
    const auto& part = g2.parts[p];
    if (part.cycle) {
      order.push_back(p);
      continue;
    }
    if (part.border < 0) continue;
    const Vertex v = part.vertices.back();
    int q = g2.through[v];
    if (q >= 0 && g2.parts[q].cycle) continue;
    if (q < 0 || q == p) {
      q = -1;
      for (int r = 0; r < parts && q < 0; ++r) {
        if (r == p || g2.parts[r].cycle) continue;
        const auto& vs = g2.parts[r].vertices;
        if (vs.front() == v || vs.back() == v) q = r;
      }
    }
    target[p] = q;
  }
  std::vector<char> done(parts, 0);
  for (int p : order) done[p] = 1;
  // Cycles of the functional graph G_p.
  std::vector<int> state(parts, 0);
  for (int s = 0; s < parts; ++s) {
    if (done[s] || state[s]) continue;
    std::vector<int> walk;
    int x = s;
    while (x >= 0 && !done[x] && state[x] == 0) {
      state[x] = 1;
      walk.push_back(x);
      x = target[x];
    }
    if (x >= 0 && !done[x] && state[x] == 1) {
      const auto it = std::find(walk.begin(), walk.end(), x);
      std::vector<int> cyc(it, walk.end());
      const auto lo = std::min_element(cyc.begin(), cyc.end());
      std::rotate(cyc.begin(), lo, cyc.end());
      for (int p : cyc) {
        order.push_back(p);
        done[p] = 1;
      }
    }
    for (int p : walk) state[p] = 2;
  }
  std::vector<std::vector<int>> sources(parts);
  for (int p = 0; p < parts; ++p)
    if (!done[p] && target[p] >= 0) sources[target[p]].push_back(p);
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int p = 0; p < parts; ++p)
    if (!done[p] && (target[p] < 0 || done[target[p]])) ready.push(p);
  while (!ready.empty()) {
    const int p = ready.top();
    ready.pop();
    if (done[p]) continue;
    done[p] = 1;
    order.push_back(p);
    for (int q : sources[p])
      if (!done[q]) ready.push(q);
  }
  for (int p = 0; p < parts; ++p)
    if (!done[p]) throw InternalError("G_p processing order is incomplete");
  return order;
}

PathColoring color_g2prime(const G2Prime& g2, CompletionReport* report, std::vector<std::string>* trace,
                           long node_cap) {
  const int n = g2.n;
  std::vector<EdgeId> order;
  std::set<EdgeId> seen;
  const auto push = [&](EdgeId e) {
    if (seen.insert(e).second) order.push_back(e);
  };
  for (int p : g2_processing_order(g2)) {
    const auto& part = g2.parts[p];
    for (int el : part.elements) push(g2.elements[el].edge);
    for (Vertex v : part.vertices)
      if (g2.mate[v] >= 0) push(EdgeId(v, g2.mate[v]));
  }
  for (const auto& [e, d] : g2.multiplicity) push(e);

  DisjointSets comp(n);
  for (const auto& e : order) comp.unite(e.u, e.v);
  std::map<int, std::vector<EdgeId>> groups;
  std::vector<int> group_order;
  for (const auto& e : order) {
    const int r = comp.find(e.u);
    if (!groups.count(r)) group_order.push_back(r);
    groups[r].push_back(e);
  }
  PathColoring out;
  out.palette = kPaletteK2;
  long nodes = 0;
  for (int r : group_order) {
    CompletionProblem p;
    p.vertex_count = n;
    p.palette = kPaletteK2;
    for (const auto& e : groups[r]) {
      const int d = g2.multiplicity.at(e);
      if (d > 2) throw InternalError("G'2 edge with multiplicity " + std::to_string(d));
      p.open.push_back({e, d, kPaletteK2});
    }
    SearchStats st;
    const auto res = complete_path_coloring(p, node_cap > 0 ? std::min(node_cap, 4000000L) : 4000000L, &st);
    nodes += st.nodes;
    if (!res) {
      if (trace) trace->push_back("g2: component at " + std::to_string(r) + " failed");
      throw InternalError("no path-2-colouring of G'2 found");
    }
    for (std::size_t i = 0; i < p.open.size(); ++i) out.slots.push_back({p.open[i].edge, p.open[i].demand, (*res)[i]});
  }
  std::sort(out.slots.begin(), out.slots.end(), [](const ColorSlot& a, const ColorSlot& b) { return a.edge < b.edge; });
  if (trace) trace->push_back("g2: " + std::to_string(group_order.size()) + " components, nodes " + std::to_string(nodes));
  if (report) report->nodes = nodes;
  return out;
}

}  // namespace maxtsp
