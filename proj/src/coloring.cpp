#include "maxtsp/coloring.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <random>

#include "maxtsp/union_find.hpp"

namespace maxtsp {

int color_count(ColorMask m) { return std::popcount(m); }

std::vector<int> colors_of(ColorMask m) {
  std::vector<int> out;
  for (int c = 0; c < 32; ++c)
    if (m & color_bit(c)) out.push_back(c);
  return out;
}

std::string mask_string(ColorMask m) {
  std::string s;
  for (int c : colors_of(m)) s += std::to_string(c);
  return s.empty() ? "-" : s;
}

std::vector<EdgeId> PathColoring::color_class(int color) const {
  std::vector<EdgeId> out;
  for (const auto& s : slots)
    if (s.mask & color_bit(color)) out.push_back(s.edge);
  return out;
}

bool PathColoring::complete() const {
  return std::all_of(slots.begin(), slots.end(), [&](const ColorSlot& s) {
    return color_count(s.mask) == s.demand && (s.mask & ~palette) == 0;
  });
}

Weight PathColoring::class_weight(const CompleteGraph& g, int color) const {
  return edge_set_weight(g, color_class(color));
}

ColoringAudit audit_path_coloring(const PathColoring& c, int n) {
  ColoringAudit a;
  for (const auto& s : c.slots) {
    if (color_count(s.mask) != s.demand || (s.mask & ~c.palette) != 0) {
      a.complete = false;
      a.failures.push_back("edge (" + std::to_string(s.edge.u) + "," + std::to_string(s.edge.v) + ") has colours " +
                           mask_string(s.mask) + " but needs " + std::to_string(s.demand));
    }
  }
  for (int col : colors_of(c.palette)) {
    if (!is_vertex_disjoint_paths(c.color_class(col), n)) {
      a.bad_classes.push_back(col);
      a.failures.push_back("colour " + std::to_string(col) + " is not a set of vertex-disjoint paths");
    }
  }
  return a;
}

bool partial_coloring_valid(const PathColoring& c, int n) {
  for (int col : colors_of(c.palette))
    if (!is_vertex_disjoint_paths(c.color_class(col), n)) return false;
  return true;
}

namespace {

class CompletionSearch {
 public:
  CompletionSearch(const CompletionProblem& p, long budget) : p_(p), budget_(budget) {
    const auto colors = colors_of(p.palette);
    colors_ = colors;
    for (int c : colors) {
      uf_[c].reset(p.vertex_count);
      deg_[c].assign(p.vertex_count, 0);
    }
    for (const auto& s : p.open) {
      std::vector<ColorMask> opts;
      const ColorMask allowed = s.mask & p.palette;
      for (ColorMask m = allowed;; m = (m - 1) & allowed) {
        if (color_count(m) == s.demand) opts.push_back(m);
        if (m == 0) break;
      }
      std::sort(opts.begin(), opts.end());
      options_.push_back(std::move(opts));
    }
  }

  bool place_fixed() {
    for (const auto& [e, m] : p_.fixed) {
      if (!fits(e, m)) return false;
      apply(e, m);
    }
    return true;
  }

  std::optional<std::vector<ColorMask>> run(const std::vector<int>& tie_order) {
    rank_.assign(p_.open.size(), 0);
    for (std::size_t i = 0; i < tie_order.size(); ++i) rank_[tie_order[i]] = static_cast<int>(i);
    assigned_.assign(p_.open.size(), 0);
    result_.assign(p_.open.size(), 0);
    if (!dfs(p_.open.size())) return std::nullopt;
    return result_;
  }

  long nodes() const { return nodes_; }
  bool out_of_budget() const { return nodes_ >= budget_; }

 private:
  bool fits(EdgeId e, ColorMask m) const {
    for (int c : colors_) {
      if (!(m & color_bit(c))) continue;
      if (deg_[c][e.u] >= 2 || deg_[c][e.v] >= 2) return false;
      if (uf_[c].connected(e.u, e.v)) return false;
    }
    return true;
  }

  void apply(EdgeId e, ColorMask m) {
    for (int c : colors_) {
      if (!(m & color_bit(c))) continue;
      ++deg_[c][e.u];
      ++deg_[c][e.v];
      uf_[c].unite(e.u, e.v);
    }
  }

  void undo(EdgeId e, ColorMask m, const std::array<std::size_t, 6>& marks) {
    for (int c : colors_) {
      if (!(m & color_bit(c))) continue;
      --deg_[c][e.u];
      --deg_[c][e.v];
      uf_[c].rollback(marks[c]);
    }
  }

  bool dfs(std::size_t left) {
    if (left == 0) return true;
    if (++nodes_ >= budget_) return false;
    int best = -1;
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < p_.open.size(); ++i) {
      if (assigned_[i]) continue;
      std::size_t count = 0;
      for (ColorMask m : options_[i])
        if (fits(p_.open[i].edge, m)) ++count;
      if (count == 0) return false;
      if (best < 0 || count < best_count || (count == best_count && rank_[i] < rank_[best])) {
        best = static_cast<int>(i);
        best_count = count;
      }
    }
    const EdgeId e = p_.open[best].edge;
    assigned_[best] = 1;
    for (ColorMask m : options_[best]) {
      if (!fits(e, m)) continue;
      std::array<std::size_t, 6> marks{};
      for (int c : colors_) marks[c] = uf_[c].checkpoint();
      apply(e, m);
      result_[best] = m;
      if (dfs(left - 1)) return true;
      undo(e, m, marks);
      if (out_of_budget()) break;
    }
    assigned_[best] = 0;
    return false;
  }

  const CompletionProblem& p_;
  long budget_;
  long nodes_ = 0;
  std::vector<int> colors_;
  std::array<DisjointSets, 6> uf_;
  std::array<std::vector<int>, 6> deg_;
  std::vector<std::vector<ColorMask>> options_;
  std::vector<int> rank_;
  std::vector<char> assigned_;
  std::vector<ColorMask> result_;
};

}  // namespace

std::optional<std::vector<ColorMask>> complete_path_coloring(const CompletionProblem& p, long node_budget,
                                                             SearchStats* stats) {
  if ((p.palette & ~(kPaletteK3 | kPaletteK2)) != 0) throw PreconditionError("palette outside colours 1..5");
  std::vector<int> order(p.open.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::mt19937_64 rng(0x5eedULL + p.open.size());
  constexpr int kRestarts = 4;
  long spent = 0;
  for (int attempt = 0; attempt <= kRestarts; ++attempt) {
    const long share = attempt == kRestarts ? node_budget - spent : node_budget / (2 * (kRestarts + 1)) << attempt;
    CompletionSearch search(p, std::max(1L, std::min(share, node_budget - spent)));
    if (!search.place_fixed()) return std::nullopt;
    auto res = search.run(order);
    spent += search.nodes();
    if (stats) {
      stats->nodes = spent;
      stats->restarts = attempt;
    }
    if (res) return res;
    if (!search.out_of_budget() || spent >= node_budget) return std::nullopt;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  }
  return std::nullopt;
}

}  // namespace maxtsp
