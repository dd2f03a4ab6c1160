#include "maxtsp/exchange.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

namespace maxtsp {

std::pair<Vertex, Vertex> Orientation::arc(EdgeId e) const {
  const auto it = whole.find(e);
  if (it == whole.end()) throw PreconditionError("edge is not in I(C2)");
  const bool flip = reversed != static_cast<bool>(flipped[whole_walk.at(e)]);
  return flip ? std::make_pair(it->second.second, it->second.first) : it->second;
}

std::pair<Vertex, Vertex> Orientation::half_arc(std::size_t i) const {
  const auto a = half.at(i);
  const bool flip = reversed != static_cast<bool>(flipped[half_walk.at(i)]);
  return flip ? std::make_pair(a.second, a.first) : a;
}

Orientation Orientation::opposite() const {
  Orientation o = *this;
  o.reversed = !reversed;
  return o;
}

bool Orientation::outgoing(EdgeId e, const Kite& k) const {
  if (k.contains(e.u) == k.contains(e.v)) return false;
  return k.contains(arc(e).first);
}

bool Orientation::incoming(EdgeId e, const Kite& k) const {
  if (k.contains(e.u) == k.contains(e.v)) return false;
  return k.contains(arc(e).second);
}

namespace {

std::vector<int> vertex_kites(const std::vector<Kite>& kites, int n) {
  std::vector<int> of(n, -1);
  for (std::size_t i = 0; i < kites.size(); ++i)
    for (Vertex v : kites[i].vertices) of[v] = static_cast<int>(i);
  return of;
}

int vertex_count(const RelaxedCycleCover& c2) {
  int n = 0;
  for (const auto& e : c2.whole_edges) n = std::max(n, e.v + 1);
  for (const auto& h : c2.half_edges) n = std::max(n, h.edge.v + 1);
  return n;
}

}  // namespace

Orientation build_orientations(const RelaxedCycleCover& c2, const std::vector<Kite>& kites) {
  const int n = vertex_count(c2);
  const auto kite_of = vertex_kites(kites, n);
  struct Port {
    int kind;
    int id;
  };
  std::vector<std::vector<Port>> ports(n);
  for (std::size_t i = 0; i < c2.whole_edges.size(); ++i) {
    ports[c2.whole_edges[i].u].push_back({0, static_cast<int>(i)});
    ports[c2.whole_edges[i].v].push_back({0, static_cast<int>(i)});
  }
  std::vector<std::vector<int>> stubs(kites.size());
  for (std::size_t i = 0; i < c2.half_edges.size(); ++i) {
    const auto& h = c2.half_edges[i];
    ports[h.endpoint].push_back({1, static_cast<int>(i)});
    const int k = kite_of[h.endpoint];
    if (k < 0) throw PreconditionError("half-edge outside every kite");
    stubs[k].push_back(static_cast<int>(i));
  }
  std::vector<int> stub_mate(c2.half_edges.size(), -1);
  for (auto& s : stubs) {
    if (s.size() % 2 != 0) throw PreconditionError("kite holds an odd number of half-edges");
    std::sort(s.begin(), s.end(), [&](int a, int b) {
      const auto& x = c2.half_edges[a];
      const auto& y = c2.half_edges[b];
      return std::tie(x.endpoint, x.edge) < std::tie(y.endpoint, y.edge);
    });
    for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
      stub_mate[s[i]] = s[i + 1];
      stub_mate[s[i + 1]] = s[i];
    }
  }

  Orientation o;
  o.half.assign(c2.half_edges.size(), {-1, -1});
  o.half_walk.assign(c2.half_edges.size(), -1);
  std::vector<std::array<char, 2>> seen(n, {0, 0});
  const auto port_index = [&](Vertex x, Port p) {
    for (int i = 0; i < 2; ++i)
      if (ports[x][i].kind == p.kind && ports[x][i].id == p.id) return i;
    throw InternalError("port lookup failed");
  };
  for (int v = 0; v < n; ++v) {
    if (ports[v].empty()) continue;
    if (ports[v].size() != 2) throw PreconditionError("relaxed cover degree is not 2 at " + std::to_string(v));
  }
  for (int v0 = 0; v0 < n; ++v0) {
    for (int start = 0; start < 2; ++start) {
      if (ports[v0].empty() || seen[v0][start] || seen[v0][1 - start]) continue;
      Vertex x = v0;
      int p = start;
      const int walk = static_cast<int>(o.flipped.size());
      o.flipped.push_back(0);
      while (!seen[x][p]) {
        seen[x][p] = 1;
        const Port port = ports[x][p];
        Vertex y;
        int q;
        if (port.kind == 0) {
          const EdgeId e = c2.whole_edges[port.id];
          y = e.other(x);
          o.whole[e] = {x, y};
          o.whole_walk[e] = walk;
          q = port_index(y, port);
        } else {
          const auto& h = c2.half_edges[port.id];
          o.half[port.id] = {x, h.edge.other(x)};
          const int mate = stub_mate[port.id];
          const auto& h2 = c2.half_edges[mate];
          y = h2.endpoint;
          o.half[mate] = {h2.edge.other(y), y};
          o.half_walk[port.id] = walk;
          o.half_walk[mate] = walk;
          q = port_index(y, Port{1, mate});
        }
        seen[y][q] = 1;
        x = y;
        p = 1 - q;
      }
    }
  }
  return o;
}

std::pair<int, int> kite_in_out(const RelaxedCycleCover& c2, const Orientation& o, const Kite& k) {
  int in = 0;
  int out = 0;
  for (const auto& e : c2.whole_edges) {
    if (o.outgoing(e, k)) ++out;
    if (o.incoming(e, k)) ++in;
  }
  return {in, out};
}

std::vector<HalfEdge> HalfEdgeSplit::z_edges(const RelaxedCycleCover& c2) const {
  std::vector<HalfEdge> out;
  for (int i : z()) out.push_back(c2.half_edges[i]);
  return out;
}

Weight split_weight(const RelaxedCycleCover& c2, const std::vector<int>& side, const CompleteGraph& g) {
  Weight w = 0;
  for (int i : side) w += g.weight(c2.half_edges[i].edge);
  return w;
}

HalfEdgeSplit partition_half_edges(const RelaxedCycleCover& c2, const Orientation& o, const std::vector<Kite>& kites,
                                   const CompleteGraph& g) {
  HalfEdgeSplit s;
  for (const auto& k : kites) {
    std::vector<int> leave;
    std::vector<int> arrive;
    for (std::size_t i = 0; i < c2.half_edges.size(); ++i) {
      const auto& h = c2.half_edges[i];
      if (!k.contains(h.endpoint)) continue;
      (o.half_arc(i).first == h.endpoint ? leave : arrive).push_back(static_cast<int>(i));
    }
    if (split_weight(c2, leave, g) < split_weight(c2, arrive, g)) std::swap(leave, arrive);
    s.z1.insert(s.z1.end(), leave.begin(), leave.end());
    s.z2.insert(s.z2.end(), arrive.begin(), arrive.end());
  }
  std::sort(s.z1.begin(), s.z1.end());
  std::sort(s.z2.begin(), s.z2.end());
  s.use_z1 = split_weight(c2, s.z1, g) >= split_weight(c2, s.z2, g);
  return s;
}

std::vector<MdMatch> build_md_matching(const RelaxedCycleCover& c2, const std::vector<Kite>& kites,
                                       const Matching& m, int n) {
  const auto mate = m.mates(n);
  const auto kite_of = vertex_kites(kites, n);
  std::vector<std::vector<Vertex>> adj(n);
  for (const auto& e : c2.whole_edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  // Cycles of I(C_2): components where every vertex has two whole edges.
  std::vector<char> seen(n, 0);
  struct Odd {
    std::vector<Vertex> cycle;
    std::vector<EdgeId> d_edges;
  };
  std::vector<Odd> s;
  for (int v = 0; v < n; ++v) {
    if (seen[v] || adj[v].size() != 2) continue;
    std::vector<Vertex> comp;
    bool closed = true;
    std::vector<Vertex> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
      const Vertex x = stack.back();
      stack.pop_back();
      comp.push_back(x);
      if (adj[x].size() != 2) closed = false;
      for (Vertex y : adj[x])
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
    if (!closed || comp.size() % 2 == 0) continue;
    std::set<EdgeId> ds;
    for (Vertex x : comp) {
      const int k = kite_of[x];
      if (k < 0 || mate[x] < 0) continue;
      const EdgeId e(x, mate[x]);
      const auto& de = kites[k].d_edges;
      if (std::find(de.begin(), de.end(), e) != de.end()) ds.insert(e);
    }
    if (ds.size() != comp.size()) continue;
    std::sort(comp.begin(), comp.end());
    s.push_back({comp, std::vector<EdgeId>(ds.begin(), ds.end())});
  }
  if (s.empty()) return {};

  // Right side: d-edges, with both d-edges of a 4-kite merged when it meets at most three cycles of S.
  std::map<EdgeId, int> node_of;
  std::vector<std::pair<int, std::vector<EdgeId>>> nodes;
  for (std::size_t k = 0; k < kites.size(); ++k) {
    const auto& kt = kites[k];
    int meets = 0;
    for (const auto& odd : s) {
      const bool touches = std::any_of(odd.d_edges.begin(), odd.d_edges.end(), [&](EdgeId e) {
        return std::find(kt.d_edges.begin(), kt.d_edges.end(), e) != kt.d_edges.end();
      });
      if (touches) ++meets;
    }
    if (kt.kind == KiteKind::four && meets <= 3) {
      nodes.push_back({static_cast<int>(k), kt.d_edges});
      for (const auto& e : kt.d_edges) node_of[e] = static_cast<int>(nodes.size()) - 1;
    } else {
      for (const auto& e : kt.d_edges) {
        nodes.push_back({static_cast<int>(k), {e}});
        node_of[e] = static_cast<int>(nodes.size()) - 1;
      }
    }
  }
  std::vector<std::vector<int>> left(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (const auto& e : s[i].d_edges) left[i].push_back(node_of.at(e));
    std::sort(left[i].begin(), left[i].end());
    left[i].erase(std::unique(left[i].begin(), left[i].end()), left[i].end());
  }
  std::vector<int> owner(nodes.size(), -1);
  std::function<bool(int, std::vector<char>&)> augment = [&](int i, std::vector<char>& visited) {
    for (int t : left[i]) {
      if (visited[t]) continue;
      visited[t] = 1;
      if (owner[t] < 0 || augment(owner[t], visited)) {
        owner[t] = i;
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<char> visited(nodes.size(), 0);
    if (!augment(static_cast<int>(i), visited)) {
      throw InternalError("odd cycle of C2 cannot be matched to a d-edge");
    }
  }
  std::vector<MdMatch> out(s.size());
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    if (owner[t] < 0) continue;
    const auto& odd = s[owner[t]];
    EdgeId pick = nodes[t].second.front();
    for (const auto& e : nodes[t].second)
      if (std::find(odd.d_edges.begin(), odd.d_edges.end(), e) != odd.d_edges.end()) {
        pick = e;
        break;
      }
    out[owner[t]] = {odd.cycle, pick, nodes[t].first};
  }
  return out;
}

namespace {

struct Candidate {
  std::vector<int> z;
  std::vector<EdgeId> f1;
  EdgeId out;
  Vertex out_tail = -1;
  std::optional<EdgeId> f2_internal;
  std::vector<int> score;
  std::string label;
};

bool has(const std::vector<EdgeId>& xs, EdgeId e) { return std::find(xs.begin(), xs.end(), e) != xs.end(); }

struct KiteInfo {
  std::vector<int> halves;
  std::vector<EdgeId> internal_whole;
  std::vector<std::pair<EdgeId, Vertex>> out_edges;
  int in = 0;
  int out = 0;
};

class ExchangeSearch {
 public:
  ExchangeSearch(const ExchangeContext& ctx, Orientation o, const HalfEdgeSplit& initial, const std::vector<MdMatch>& md,
                 const ExchangeFilter& accept)
      : ctx_(ctx), kites_(*ctx.kites), c2_(*ctx.c2), o_(std::move(o)), accept_(accept) {
    n_ = ctx.g->size();
    kite_of_ = vertex_kites(kites_, n_);
    mate_ = ctx.m->mates(n_);
    std::set<int> init(initial.z().begin(), initial.z().end());
    for (std::size_t k = 0; k < kites_.size(); ++k) {
      info_.push_back(describe(kites_[k]));
      candidates_.push_back(enumerate(static_cast<int>(k), init, md));
    }
    for (const auto& h : c2_.half_edges) half_total_ += ctx.g->weight(h.edge);
    whole_deg_.assign(n_, 0);
    for (const auto& e : c2_.whole_edges) {
      ++whole_deg_[e.u];
      ++whole_deg_[e.v];
    }
  }

  ExchangePair run() {
    choice_.assign(kites_.size(), -1);
    long budget = 200000;
    if (!assign(0, budget)) throw UnhandledCase("no locally consistent exchange assignment" + first_kite_note());
    int repairs = 0;
    auto cost = global_violations(nullptr);
    while (cost > 0) {
      if (repairs >= 64 || !repair(cost)) {
        std::vector<std::string> why;
        global_violations(&why);
        throw UnhandledCase("exchange sets violate " + (why.empty() ? std::string("?") : why.front()));
      }
      ++repairs;
      cost = global_violations(nullptr);
    }
    return materialize(repairs);
  }

 private:
  KiteInfo describe(const Kite& k) const {
    KiteInfo info;
    for (std::size_t i = 0; i < c2_.half_edges.size(); ++i)
      if (k.contains(c2_.half_edges[i].endpoint)) info.halves.push_back(static_cast<int>(i));
    for (const auto& e : c2_.whole_edges) {
      if (k.contains(e.u) && k.contains(e.v)) {
        info.internal_whole.push_back(e);
      } else if (o_.outgoing(e, k)) {
        info.out_edges.emplace_back(e, o_.arc(e).first);
        ++info.out;
      } else if (o_.incoming(e, k)) {
        ++info.in;
      }
    }
    return info;
  }

  std::vector<std::vector<int>> z_options(const KiteInfo& info, const std::set<int>& init) const {
    const auto& hs = info.halves;
    const std::size_t h = hs.size();
    std::vector<std::vector<int>> out;
    if (h == 0) return {{}};
    std::vector<int> first;
    for (int i : hs)
      if (init.count(i)) first.push_back(i);
    out.push_back(first);
    std::vector<std::pair<Weight, std::vector<int>>> rest;
    for (unsigned mask = 0; mask < (1u << h); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != h / 2) continue;
      std::vector<int> a;
      for (std::size_t i = 0; i < h; ++i)
        if ((mask >> i) & 1u) a.push_back(hs[i]);
      if (a != first) rest.emplace_back(-split_weight(c2_, a, *ctx_.g), a);
    }
    std::sort(rest.begin(), rest.end());
    for (auto& [w, a] : rest) out.push_back(std::move(a));
    return out;
  }

  std::vector<Candidate> enumerate(int k, const std::set<int>& init, const std::vector<MdMatch>& md) const {
    const auto& kt = kites_[k];
    const auto& info = info_[k];
    const auto sides = kt.sides();
    std::vector<Vertex> md_targets;
    for (const auto& mm : md) {
      if (mm.kite != k) continue;
      for (Vertex x : {mm.d_edge.u, mm.d_edge.v})
        if (std::binary_search(mm.cycle.begin(), mm.cycle.end(), x)) md_targets.push_back(x);
    }
    std::vector<Candidate> out;
    const auto zs = z_options(info, init);
    for (std::size_t zi = 0; zi < zs.size(); ++zi) {
      std::vector<EdgeId> present = info.internal_whole;
      for (int i : zs[zi]) present.push_back(c2_.half_edges[i].edge);
      const auto matched = [&](EdgeId e) { return mate_[e.u] == e.v; };
      std::vector<EdgeId> singles;
      for (const auto& s : sides)
        if (!(matched(s) && has(present, s))) singles.push_back(s);
      std::vector<std::pair<std::vector<EdgeId>, std::optional<EdgeId>>> configs;
      for (const auto& s : singles) configs.push_back({{s}, std::nullopt});
      if (kt.kind == KiteKind::four) {
        for (std::size_t a = 0; a < singles.size(); ++a)
          for (std::size_t b = a + 1; b < singles.size(); ++b)
            for (const auto& x : present)
              if (!matched(x) && x != singles[a] && x != singles[b]) configs.push_back({{singles[a], singles[b]}, x});
      }
      for (const auto& [f1, f2i] : configs) {
        for (const auto& [oe, tail] : info.out_edges) {
          Candidate c;
          c.z = zs[zi];
          c.f1 = f1;
          c.out = oe;
          c.out_tail = tail;
          c.f2_internal = f2i;
          const bool f1_doubles = std::any_of(f1.begin(), f1.end(), [&](EdgeId e) { return has(present, e); });
          const bool f1_touches_out = std::any_of(f1.begin(), f1.end(), [&](EdgeId e) { return e.contains(tail); });
          const bool md_ok = md_targets.empty() || std::find(md_targets.begin(), md_targets.end(), tail) != md_targets.end();
          const bool d_pref = kt.kind == KiteKind::three && matched(f1.front());
          c.score = {md_ok ? 0 : 1, static_cast<int>(f1.size()), f1_doubles ? 1 : 0, f1_touches_out ? 0 : 1,
                     d_pref ? 0 : 1, static_cast<int>(zi)};
          c.label = label(kt, info, c);
          out.push_back(std::move(c));
        }
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
    return out;
  }

  std::string label(const Kite& kt, const KiteInfo& info, const Candidate& c) const {
    std::string s = kt.kind == KiteKind::three ? "three/" : "four/";
    s += std::to_string(info.in) + "-" + std::to_string(info.out) + "/h" + std::to_string(info.halves.size()) + "/";
    for (const auto& e : c.f1) s += mate_[e.u] == e.v ? "d" : "s";
    if (c.f2_internal) s += kt.is_diagonal(*c.f2_internal) ? "+x" : "+s";
    s += kt.kind == KiteKind::three && c.out_tail == kt.foot ? "/out@foot" : "/out";
    return s;
  }

  // Local properties of kite k under the current choices (only kites already decided
  // contribute incoming edges).
  bool local_ok(int k) const {
    const auto& kt = kites_[k];
    const auto& c = candidates_[k][choice_[k]];
    std::map<Vertex, int> f1c;
    std::map<Vertex, int> f2c;
    std::map<Vertex, int> deg;
    for (Vertex v : kt.vertices) deg[v] = 1 + whole_deg_[v];
    for (int i : c.z) {
      const EdgeId e = c2_.half_edges[i].edge;
      ++deg[e.u];
      ++deg[e.v];
    }
    for (const auto& e : c.f1) {
      ++f1c[e.u];
      ++f1c[e.v];
      ++deg[e.u];
      ++deg[e.v];
    }
    ++f2c[c.out_tail];
    --deg[c.out_tail];
    if (c.f2_internal) {
      ++f2c[c.f2_internal->u];
      ++f2c[c.f2_internal->v];
      --deg[c.f2_internal->u];
      --deg[c.f2_internal->v];
    }
    int incident_f2 = 1;
    for (std::size_t j = 0; j < kites_.size(); ++j) {
      if (static_cast<int>(j) == k || choice_[j] < 0) continue;
      const auto& cj = candidates_[j][choice_[j]];
      const Vertex head = cj.out.other(cj.out_tail);
      if (!kt.contains(head)) continue;
      ++f2c[head];
      --deg[head];
      ++incident_f2;
    }
    for (Vertex v : kt.vertices) {
      if (f2c[v] > f1c[v] + 1) return false;
      if (deg[v] > 4) return false;
    }
    if (kt.kind == KiteKind::three) {
      if (f2c[kt.foot] > 1) return false;
      if (incident_f2 >= 4 && !c.f1.front().contains(kt.foot)) return false;
    }
    return true;
  }

  bool consistent_with_decided(int k) const {
    if (!local_ok(k)) return false;
    const auto& c = candidates_[k][choice_[k]];
    const int target = kite_of_[c.out.other(c.out_tail)];
    if (target >= 0 && target != k && choice_[target] >= 0 && !local_ok(target)) return false;
    return true;
  }

  bool assign(std::size_t k, long& budget) {
    if (k == kites_.size()) return true;
    for (std::size_t i = 0; i < candidates_[k].size(); ++i) {
      if (--budget < 0) return false;
      choice_[k] = static_cast<int>(i);
      if (consistent_with_decided(static_cast<int>(k)) && assign(k + 1, budget)) return true;
    }
    choice_[k] = -1;
    return false;
  }

  std::string first_kite_note() const {
    for (std::size_t k = 0; k < kites_.size(); ++k)
      if (candidates_[k].empty()) return " (kite at cycle " + std::to_string(kites_[k].cycle_index) + " has no candidate)";
    return "";
  }

  void collect(std::vector<EdgeId>& f1, std::vector<EdgeId>& f2, std::vector<HalfEdge>& z) const {
    for (std::size_t k = 0; k < kites_.size(); ++k) {
      const auto& c = candidates_[k][choice_[k]];
      f1.insert(f1.end(), c.f1.begin(), c.f1.end());
      f2.push_back(c.out);
      if (c.f2_internal) f2.push_back(*c.f2_internal);
      for (int i : c.z) z.push_back(c2_.half_edges[i]);
    }
  }

  // Count of violated global conditions; involved kites are recorded for repair.
  int global_violations(std::vector<std::string>* why) {
    involved_.clear();
    int bad = 0;
    for (std::size_t k = 0; k < kites_.size(); ++k) {
      if (!local_ok(static_cast<int>(k))) {
        ++bad;
        involved_.insert(static_cast<int>(k));
        if (why) why->push_back("local properties at kite " + std::to_string(k));
      }
    }
    std::vector<EdgeId> f1;
    std::vector<EdgeId> f2;
    std::vector<HalfEdge> z;
    collect(f1, f2, z);
    const auto g2 = build_g2prime(n_, c2_, z, f1, f2, *ctx_.m);
    for (int v = 0; v < n_; ++v) {
      if (g2.degree[v] > 4) {
        ++bad;
        touch(v);
        if (why) why->push_back("degree " + std::to_string(g2.degree[v]) + " at " + std::to_string(v));
      }
    }
    Weight zw = 0;
    for (const auto& h : z) zw += ctx_.g->weight(h.edge);
    if (2 * zw < half_total_) {
      ++bad;
      for (std::size_t k = 0; k < kites_.size(); ++k) involved_.insert(static_cast<int>(k));
      if (why) why->push_back("promoted half-edges lighter than the rest");
    }
    for (const auto& p : g2.parts) {
      const bool broken = p.cycle ? is_forced_odd_cycle(g2, p) : !is_amenable(g2, p);
      if (!broken) continue;
      ++bad;
      if (why) why->push_back(p.cycle ? "odd cycle through " + std::to_string(p.vertices.front())
                                      : "non-amenable path ending at " + std::to_string(p.vertices.back()));
      for (Vertex v : p.vertices) touch(v);
    }
    if (bad == 0 && accept_) {
      auto [it, fresh] = verdicts_.try_emplace(choice_, true);
      if (fresh) it->second = accept_(materialize(0));
      if (!it->second) {
        bad = 1;
        for (std::size_t k = 0; k < kites_.size(); ++k) involved_.insert(static_cast<int>(k));
        if (why) why->push_back("a configuration the filter rejected");
      }
    }
    return bad;
  }

  void touch(Vertex v) {
    for (Vertex x : {v, mate_[v]}) {
      if (x >= 0 && kite_of_[x] >= 0) involved_.insert(kite_of_[x]);
      for (std::size_t k = 0; k < kites_.size(); ++k) {
        const auto& c = candidates_[k][choice_[k]];
        if (x >= 0 && c.out.contains(x)) involved_.insert(static_cast<int>(k));
      }
    }
  }

  bool repair(int cost) {
    const std::vector<int> targets(involved_.begin(), involved_.end());
    int best_cost = cost;
    std::vector<std::pair<int, int>> best_move;
    for (int k : targets) {
      const int keep = choice_[k];
      for (std::size_t i = 0; i < candidates_[k].size(); ++i) {
        if (static_cast<int>(i) == keep) continue;
        choice_[k] = static_cast<int>(i);
        const int c = global_violations(nullptr);
        if (c < best_cost) {
          best_cost = c;
          best_move = {{k, static_cast<int>(i)}};
          if (c == 0) break;
        }
      }
      choice_[k] = keep;
      if (best_cost == 0) break;
    }
    if (best_move.empty() && targets.size() <= 6) {
      for (std::size_t a = 0; a < targets.size() && best_move.empty(); ++a) {
        for (std::size_t b = a + 1; b < targets.size() && best_move.empty(); ++b) {
          const int ka = targets[a];
          const int kb = targets[b];
          const int keep_a = choice_[ka];
          const int keep_b = choice_[kb];
          for (std::size_t i = 0; i < candidates_[ka].size() && best_move.empty(); ++i) {
            for (std::size_t j = 0; j < candidates_[kb].size(); ++j) {
              choice_[ka] = static_cast<int>(i);
              choice_[kb] = static_cast<int>(j);
              const int c = global_violations(nullptr);
              if (c < best_cost) {
                best_cost = c;
                best_move = {{ka, static_cast<int>(i)}, {kb, static_cast<int>(j)}};
                break;
              }
            }
          }
          choice_[ka] = keep_a;
          choice_[kb] = keep_b;
        }
      }
    }
    for (const auto& [k, i] : best_move) choice_[k] = i;
    return !best_move.empty();
  }

  ExchangePair materialize(int repairs) const {
    ExchangePair fp;
    fp.repairs = repairs;
    fp.orientation = o_;
    std::set<int> chosen;
    for (std::size_t k = 0; k < kites_.size(); ++k) {
      const auto& c = candidates_[k][choice_[k]];
      KiteExchange ke{c.label, c.f1, c.out, c.f2_internal, c.z};
      fp.kites.push_back(ke);
      fp.f1.insert(fp.f1.end(), c.f1.begin(), c.f1.end());
      fp.f2.push_back(c.out);
      if (c.f2_internal) fp.f2.push_back(*c.f2_internal);
      chosen.insert(c.z.begin(), c.z.end());
    }
    for (std::size_t i = 0; i < c2_.half_edges.size(); ++i) (chosen.count(static_cast<int>(i)) ? fp.split.z1 : fp.split.z2).push_back(static_cast<int>(i));
    fp.split.use_z1 = true;
    std::sort(fp.f1.begin(), fp.f1.end());
    std::sort(fp.f2.begin(), fp.f2.end());
    return fp;
  }

  const ExchangeContext& ctx_;
  const std::vector<Kite>& kites_;
  const RelaxedCycleCover& c2_;
  Orientation o_;
  int n_ = 0;
  std::vector<int> kite_of_;
  std::vector<Vertex> mate_;
  std::vector<int> whole_deg_;
  Weight half_total_ = 0;
  std::vector<KiteInfo> info_;
  std::vector<std::vector<Candidate>> candidates_;
  std::vector<int> choice_;
  std::set<int> involved_;
  const ExchangeFilter& accept_;
  std::map<std::vector<int>, bool> verdicts_;
};

}  // namespace

ExchangePair compute_exchange_sets(const ExchangeContext& ctx, const HalfEdgeSplit& initial,
                                   const std::vector<MdMatch>& md, const ExchangeFilter& accept) {
  const Orientation& base = *ctx.orientation;
  if (ctx.kites->empty()) {
    ExchangePair fp;
    fp.split = initial;
    fp.orientation = base;
    return fp;
  }
  std::string last_error;
  const auto attempt = [&](const std::vector<int>& flips) -> std::optional<ExchangePair> {
    Orientation o = base;
    for (int w : flips) o.flipped[w] = !o.flipped[w];
    try {
      return ExchangeSearch(ctx, std::move(o), initial, md, accept).run();
    } catch (const UnhandledCase& e) {
      if (last_error.empty()) last_error = e.what();
      return std::nullopt;
    }
  };
  if (auto fp = attempt({})) return *fp;
  // Reverse closed walks through kites, one at a time, then in pairs, then all subsets of a few.
  std::set<int> touching;
  for (const auto& k : *ctx.kites) {
    for (const auto& [e, w] : base.whole_walk)
      if (k.contains(e.u) || k.contains(e.v)) touching.insert(w);
    for (std::size_t i = 0; i < base.half_walk.size(); ++i)
      if (k.contains(ctx.c2->half_edges[i].endpoint)) touching.insert(base.half_walk[i]);
  }
  const std::vector<int> walks(touching.begin(), touching.end());
  for (int w : walks)
    if (auto fp = attempt({w})) return *fp;
  for (std::size_t a = 0; a < walks.size(); ++a)
    for (std::size_t b = a + 1; b < walks.size(); ++b)
      if (auto fp = attempt({walks[a], walks[b]})) return *fp;
  if (walks.size() <= 8) {
    for (unsigned mask = 1; mask < (1u << walks.size()); ++mask) {
      if (__builtin_popcount(mask) <= 2) continue;
      std::vector<int> flips;
      for (std::size_t i = 0; i < walks.size(); ++i)
        if (mask >> i & 1u) flips.push_back(walks[i]);
      if (auto fp = attempt(flips)) return *fp;
    }
  }
  throw UnhandledCase(last_error);
}

G2Prime build_g2prime(const ExchangeContext& ctx, const ExchangePair& fp) {
  return build_g2prime(ctx.g->size(), *ctx.c2, fp.split.z_edges(*ctx.c2), fp.f1, fp.f2, *ctx.m);
}

bool F12Report::ok() const { return std::all_of(pass.begin(), pass.end(), [](bool b) { return b; }); }

F12Report verify_f12(const ExchangeContext& ctx, const ExchangePair& fp) {
  F12Report r;
  r.pass.fill(true);
  const int n = ctx.g->size();
  const auto& kites = *ctx.kites;
  const auto& c2 = *ctx.c2;
  const auto& o = fp.orientation;
  const auto mate = ctx.m->mates(n);
  const auto fail = [&](int prop, const std::string& why) {
    r.pass[prop - 1] = false;
    r.witnesses.push_back("property " + std::to_string(prop) + ": " + why);
  };
  const auto str = [](EdgeId e) { return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")"; };
  const auto z = fp.split.z_edges(c2);
  std::set<EdgeId> iz(c2.whole_edges.begin(), c2.whole_edges.end());
  for (const auto& h : z) iz.insert(h.edge);
  std::set<EdgeId> cmax_edges;
  for (const auto& e : ctx.cmax->edges()) cmax_edges.insert(e);

  for (const auto& e : fp.f1) {
    if (!cmax_edges.count(e)) fail(1, str(e) + " is not a cycle-cover edge");
    if (mate[e.u] == e.v && iz.count(e)) fail(1, str(e) + " is a matching edge of I(C2) + Z");
    const bool in_kite = std::any_of(kites.begin(), kites.end(), [&](const Kite& k) { return has(k.sides(), e); });
    if (!in_kite) fail(1, str(e) + " lies on no kite");
  }
  for (const auto& e : fp.f2) {
    if (!iz.count(e)) fail(2, str(e) + " is outside I(C2) + Z");
    if (has(fp.f1, e)) fail(2, str(e) + " is in both sets");
  }
  for (std::size_t ki = 0; ki < kites.size(); ++ki) {
    const auto& k = kites[ki];
    const auto sides = k.sides();
    const std::string name = "kite " + std::to_string(ki);
    int f1_in = 0;
    for (const auto& e : fp.f1)
      if (has(sides, e)) ++f1_in;
    std::vector<EdgeId> f2_in;
    int out = 0;
    std::map<Vertex, int> f1v;
    std::map<Vertex, int> f2v;
    int incident = 0;
    for (const auto& e : fp.f1)
      if (k.contains(e.u) && k.contains(e.v)) {
        ++f1v[e.u];
        ++f1v[e.v];
      }
    for (const auto& e : fp.f2) {
      const bool a = k.contains(e.u);
      const bool b = k.contains(e.v);
      if (a && b) f2_in.push_back(e);
      if (a || b) ++incident;
      if (a) ++f2v[e.u];
      if (b) ++f2v[e.v];
      if (a != b && c2.whole_edges.end() != std::find(c2.whole_edges.begin(), c2.whole_edges.end(), e) &&
          o.outgoing(e, k))
        ++out;
    }
    const bool single = f1_in == 1 && f2_in.empty();
    const bool twin = k.kind == KiteKind::four && f1_in == 2 && f2_in.size() == 1 && mate[f2_in[0].u] != f2_in[0].v;
    if (!single && !twin) fail(3, name + " has " + std::to_string(f1_in) + " F1 and " + std::to_string(f2_in.size()) + " F2 edges");
    if (out != 1) fail(4, name + " has " + std::to_string(out) + " outgoing F2 edges");
    for (Vertex v : k.vertices)
      if (f2v[v] > f1v[v] + 1) fail(5, "vertex " + std::to_string(v) + " of " + name);
    if (k.kind == KiteKind::three) {
      if (f2v[k.foot] >= 2) fail(8, "foot " + std::to_string(k.foot) + " of " + name);
      if (incident >= 4) {
        const bool vertical = std::any_of(fp.f1.begin(), fp.f1.end(), [&](EdgeId e) { return has(sides, e) && e.contains(k.foot); });
        if (!vertical) fail(9, name + " is horizontal");
      }
    }
  }
  const auto g2 = build_g2prime(ctx, fp);
  for (const auto& p : g2.parts) {
    if (p.cycle && is_forced_odd_cycle(g2, p)) fail(6, "odd cycle through " + std::to_string(p.vertices.front()));
    if (!p.cycle && !is_amenable(g2, p)) fail(7, "path ending at " + std::to_string(p.vertices.back()));
  }
  for (int v = 0; v < n; ++v)
    if (g2.degree[v] > 4) fail(7, "vertex " + std::to_string(v) + " has degree " + std::to_string(g2.degree[v]));
  return r;
}

}  // namespace maxtsp
