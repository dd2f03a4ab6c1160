#include "maxtsp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace maxtsp {

namespace {
constexpr Weight kNegInf = std::numeric_limits<Weight>::min() / 4;
}

Weight oracle_max_tsp(const CompleteGraph& g) {
  const int n = g.size();
  if (n > kOracleTspLimit) throw TooLarge("exact oracle supports n <= 18, got " + std::to_string(n));
  if (n < 3) throw InstanceError("tour needs at least 3 vertices");
  // Paths from vertex 0 through the subset `mask` of {1..n-1}, ending at `last`.
  const int m = n - 1;
  const std::size_t states = std::size_t{1} << m;
  std::vector<Weight> dp(states * m, kNegInf);
  for (int j = 0; j < m; ++j) dp[(std::size_t{1} << j) * m + j] = g.weight(0, j + 1);
  for (std::size_t mask = 1; mask < states; ++mask) {
    for (int j = 0; j < m; ++j) {
      const Weight cur = dp[mask * m + j];
      if (cur == kNegInf) continue;
      for (int k = 0; k < m; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        Weight& slot = dp[next * m + k];
        slot = std::max(slot, cur + g.weight(j + 1, k + 1));
      }
    }
  }
  Weight best = kNegInf;
  for (int j = 0; j < m; ++j) best = std::max(best, dp[(states - 1) * m + j] + g.weight(j + 1, 0));
  return best;
}

Weight brute_force_max_tsp(const CompleteGraph& g) {
  const int n = g.size();
  if (n > 9) throw TooLarge("permutation oracle supports n <= 9");
  std::vector<int> perm(n - 1);
  std::iota(perm.begin(), perm.end(), 1);
  Weight best = kNegInf;
  do {
    Weight w = g.weight(0, perm.front()) + g.weight(perm.back(), 0);
    for (std::size_t i = 0; i + 1 < perm.size(); ++i) w += g.weight(perm[i], perm[i + 1]);
    best = std::max(best, w);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

void enumerate_b(const GeneralGraph& g, std::vector<int>& residual, std::size_t idx, Weight acc,
                 std::optional<Weight>& best) {
  if (idx == g.edges.size()) {
    if (std::all_of(residual.begin(), residual.end(), [](int r) { return r == 0; })) {
      if (!best || acc > *best) best = acc;
    }
    return;
  }
  const auto& [e, w] = g.edges[idx];
  if (residual[e.u] > 0 && residual[e.v] > 0) {
    --residual[e.u];
    --residual[e.v];
    enumerate_b(g, residual, idx + 1, acc + w, best);
    ++residual[e.u];
    ++residual[e.v];
  }
  enumerate_b(g, residual, idx + 1, acc, best);
}

}  // namespace

std::optional<Weight> brute_force_b_matching(const GeneralGraph& g, const DegreeDemand& b) {
  if (g.vertex_count > 10) throw TooLarge("b-matching enumeration supports <= 10 vertices");
  std::vector<int> residual(b.begin(), b.end());
  std::optional<Weight> best;
  enumerate_b(g, residual, 0, 0, best);
  return best;
}

std::optional<Weight> brute_force_perfect_matching(const GeneralGraph& g) {
  if (g.vertex_count > 14) throw TooLarge("matching enumeration supports <= 14 vertices");
  if (g.vertex_count % 2) return std::nullopt;
  std::vector<std::vector<Weight>> w(g.vertex_count, std::vector<Weight>(g.vertex_count, kNegInf));
  for (const auto& [e, wt] : g.edges) w[e.u][e.v] = w[e.v][e.u] = wt;
  std::optional<Weight> best;
  std::vector<char> used(g.vertex_count, 0);
  std::function<void(Weight)> rec = [&](Weight acc) {
    int first = -1;
    for (int v = 0; v < g.vertex_count; ++v) {
      if (!used[v]) {
        first = v;
        break;
      }
    }
    if (first < 0) {
      if (!best || acc > *best) best = acc;
      return;
    }
    used[first] = 1;
    for (int v = first + 1; v < g.vertex_count; ++v) {
      if (used[v] || w[first][v] == kNegInf) continue;
      used[v] = 1;
      rec(acc + w[first][v]);
      used[v] = 0;
    }
    used[first] = 0;
  };
  rec(0);
  return best;
}

void enumerate_cycle_covers(int n, const std::function<void(const CycleCover&)>& visit) {
  if (n > kOracleCoverLimit) throw TooLarge("cycle cover enumeration supports n <= 10");
  std::vector<char> used(n, 0);
  CycleCover cover;
  std::vector<Vertex> path;
  std::function<void()> next_cycle;
  // Extends the open cycle in `path`; closes it when long enough and the last vertex
  // exceeds the second one, so each cycle is produced in a single orientation.
  std::function<void()> extend = [&]() {
    const Vertex last = path.back();
    if (path.size() >= 3 && last > path[1]) {
      cover.cycles.push_back(path);
      next_cycle();
      cover.cycles.pop_back();
    }
    for (Vertex v = path[0] + 1; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      path.push_back(v);
      extend();
      path.pop_back();
      used[v] = 0;
    }
  };
  next_cycle = [&]() {
    Vertex s = -1;
    for (Vertex v = 0; v < n; ++v) {
      if (!used[v]) {
        s = v;
        break;
      }
    }
    if (s < 0) {
      visit(cover);
      return;
    }
    auto saved = std::move(path);
    path = {s};
    used[s] = 1;
    extend();
    used[s] = 0;
    path = std::move(saved);
  };
  next_cycle();
}

Weight oracle_max_cycle_cover(const CompleteGraph& g) {
  Weight best = kNegInf;
  enumerate_cycle_covers(g.size(), [&](const CycleCover& c) { best = std::max(best, c.weight(g)); });
  return best;
}

bool uses_forbidden_kite_cycle(const CycleCover& cover, const std::vector<Kite>& kites) {
  for (const auto& cyc : cover.cycles) {
    if (cyc.size() > 4) continue;
    for (const auto& k : kites) {
      if (std::all_of(cyc.begin(), cyc.end(), [&](Vertex v) { return k.contains(v); })) return true;
    }
  }
  return false;
}

std::pair<Weight, CycleCover> oracle_kite_free_cycle_cover(const CompleteGraph& g, const std::vector<Kite>& kites) {
  Weight best = kNegInf;
  CycleCover arg;
  enumerate_cycle_covers(g.size(), [&](const CycleCover& c) {
    if (uses_forbidden_kite_cycle(c, kites)) return;
    const Weight w = c.weight(g);
    if (w > best) {
      best = w;
      arg = c;
    }
  });
  if (best == kNegInf) throw Infeasible("no kite-free cycle cover");
  return {best, arg};
}

}  // namespace maxtsp
