// Primal-dual weighted matching on general graphs (Edmonds 1965, Galil 1986),
// with integer arithmetic throughout. Edge endpoints are addressed as 2k and
// 2k+1 for edge k; "endpoint p" is the vertex at that end.

#include "maxtsp/detail/blossom.hpp"

#include <algorithm>
#include <limits>

namespace maxtsp::detail {
namespace {

class BlossomSolver {
 public:
  BlossomSolver(int nvertex, std::span<const std::tuple<int, int, Weight>> edges, bool max_cardinality)
      : nv_(nvertex), edges_(edges.begin(), edges.end()), max_cardinality_(max_cardinality) {}

  BlossomResult solve();

 private:
  Weight slack(int k) const {
    const auto& [i, j, wt] = edges_[k];
    return dual_[i] + dual_[j] - 2 * wt;
  }

  void leaves(int b, std::vector<int>& out) const {
    if (b < nv_) {
      out.push_back(b);
      return;
    }
    for (int t : childs_[b]) leaves(t, out);
  }

  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p);
  int scan_blossom(int v, int w);
  void add_blossom(int base, int k);
  void expand_blossom(int b, bool endstage);
  void augment_blossom(int b, int v);
  void augment_matching(int k);

  int nv_;
  std::vector<std::tuple<int, int, Weight>> edges_;
  bool max_cardinality_;

  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> childs_;
  std::vector<int> base_;
  std::vector<std::vector<int>> endps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> bestedges_;
  std::vector<char> has_bestedges_;
  std::vector<int> unused_;
  std::vector<Weight> dual_;
  std::vector<char> allowedge_;
  std::vector<int> queue_;
};

void BlossomSolver::assign_label(int w, int t, int p) {
  // Iterative form of the mutual recursion T-label -> S-label of the mate.
  while (true) {
    const int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      leaves(b, queue_);
      return;
    }
    const int base = base_[b];
    const int m = mate_[base];
    w = endpoint_[m];
    t = 1;
    p = m ^ 1;
  }
}

int BlossomSolver::scan_blossom(int v, int w) {
  std::vector<int> path;
  int base = -1;
  while (v != -1 || w != -1) {
    int b = inblossom_[v];
    if (label_[b] & 4) {
      base = base_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (int b : path) label_[b] = 1;
  return base;
}

void BlossomSolver::add_blossom(int base, int k) {
  auto [v, w, wt] = edges_[k];
  (void)wt;
  const int bb = inblossom_[base];
  int bv = inblossom_[v];
  int bw = inblossom_[w];
  const int b = unused_.back();
  unused_.pop_back();
  base_[b] = base;
  parent_[b] = -1;
  parent_[bb] = b;
  auto& path = childs_[b];
  auto& endps = endps_[b];
  path.clear();
  endps.clear();
  while (bv != bb) {
    parent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    parent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dual_[b] = 0;
  for (int leaf : leaves(b)) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  }
  std::vector<int> bestedgeto(2 * static_cast<std::size_t>(nv_), -1);
  for (int sub : path) {
    auto consider = [&](int kk) {
      auto [i, j, w2] = edges_[kk];
      (void)w2;
      if (inblossom_[j] == b) std::swap(i, j);
      const int bj = inblossom_[j];
      if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
        bestedgeto[bj] = kk;
      }
    };
    if (!has_bestedges_[sub]) {
      for (int leaf : leaves(sub))
        for (int p : neighbend_[leaf]) consider(p / 2);
    } else {
      for (int kk : bestedges_[sub]) consider(kk);
    }
    bestedges_[sub].clear();
    has_bestedges_[sub] = 0;
    bestedge_[sub] = -1;
  }
  auto& best = bestedges_[b];
  best.clear();
  for (int kk : bestedgeto)
    if (kk != -1) best.push_back(kk);
  has_bestedges_[b] = 1;
  bestedge_[b] = -1;
  for (int kk : best)
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
}

void BlossomSolver::expand_blossom(int b, bool endstage) {
  for (int s : childs_[b]) {
    parent_[s] = -1;
    if (s < nv_) {
      inblossom_[s] = s;
    } else if (endstage && dual_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for (int leaf : leaves(s)) inblossom_[leaf] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    const auto& ch = childs_[b];
    const int len = static_cast<int>(ch.size());
    auto at = [&](int idx) { return ch[(idx % len + len) % len]; };
    auto endp_at = [&](int idx) { return endps_[b][(idx % len + len) % len]; };
    const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
    int jstep;
    int endptrick;
    if (j & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    int p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[endp_at(j - endptrick) ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[endp_at(j - endptrick) / 2] = 1;
      j += jstep;
      p = endp_at(j - endptrick) ^ endptrick;
      allowedge_[p / 2] = 1;
      j += jstep;
    }
    int bv = at(j);
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (at(j) != entrychild) {
      bv = at(j);
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      int v = -1;
      for (int leaf : leaves(bv)) {
        v = leaf;
        if (label_[leaf] != 0) break;
      }
      if (v != -1 && label_[v] != 0) {
        label_[v] = 0;
        label_[endpoint_[mate_[base_[bv]]]] = 0;
        assign_label(v, 2, labelend_[v]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  childs_[b].clear();
  endps_[b].clear();
  base_[b] = -1;
  bestedges_[b].clear();
  has_bestedges_[b] = 0;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void BlossomSolver::augment_blossom(int b, int v) {
  int t = v;
  while (parent_[t] != b) t = parent_[t];
  if (t >= nv_) augment_blossom(t, v);
  auto& ch = childs_[b];
  auto& ep = endps_[b];
  const int len = static_cast<int>(ch.size());
  auto idx = [len](int x) { return (x % len + len) % len; };
  const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
  int j = i;
  int jstep;
  int endptrick;
  if (i & 1) {
    j -= len;
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = ch[idx(j)];
    const int p = ep[idx(j - endptrick)] ^ endptrick;
    if (t >= nv_) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = ch[idx(j)];
    if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(ch.begin(), ch.begin() + i, ch.end());
  std::rotate(ep.begin(), ep.begin() + i, ep.end());
  base_[b] = base_[ch[0]];
}

void BlossomSolver::augment_matching(int k) {
  const auto& [v0, w0, wt] = edges_[k];
  (void)wt;
  const std::pair<int, int> starts[2] = {{v0, 2 * k + 1}, {w0, 2 * k}};
  for (auto [s, p] : starts) {
    while (true) {
      const int bs = inblossom_[s];
      if (bs >= nv_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const int t = endpoint_[labelend_[bs]];
      const int bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      const int j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= nv_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

BlossomResult BlossomSolver::solve() {
  BlossomResult result;
  const int nedge = static_cast<int>(edges_.size());
  if (nedge == 0 || nv_ == 0) {
    result.mate.assign(nv_, -1);
    result.dual.assign(nv_, 0);
    return result;
  }
  Weight maxweight = 0;
  for (const auto& [i, j, w] : edges_) maxweight = std::max(maxweight, w);

  const auto n2 = 2 * static_cast<std::size_t>(nv_);
  endpoint_.resize(2 * static_cast<std::size_t>(nedge));
  neighbend_.assign(nv_, {});
  for (int k = 0; k < nedge; ++k) {
    const auto& [i, j, w] = edges_[k];
    endpoint_[2 * k] = i;
    endpoint_[2 * k + 1] = j;
    neighbend_[i].push_back(2 * k + 1);
    neighbend_[j].push_back(2 * k);
  }
  mate_.assign(nv_, -1);
  label_.assign(n2, 0);
  labelend_.assign(n2, -1);
  inblossom_.resize(nv_);
  for (int v = 0; v < nv_; ++v) inblossom_[v] = v;
  parent_.assign(n2, -1);
  childs_.assign(n2, {});
  base_.assign(n2, -1);
  for (int v = 0; v < nv_; ++v) base_[v] = v;
  endps_.assign(n2, {});
  bestedge_.assign(n2, -1);
  bestedges_.assign(n2, {});
  has_bestedges_.assign(n2, 0);
  unused_.clear();
  for (int b = 2 * nv_ - 1; b >= nv_; --b) unused_.push_back(b);
  dual_.assign(n2, 0);
  for (int v = 0; v < nv_; ++v) dual_[v] = maxweight;
  allowedge_.assign(nedge, 0);

  for (int stage = 0; stage < nv_; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (std::size_t b = nv_; b < n2; ++b) {
      bestedges_[b].clear();
      has_bestedges_[b] = 0;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), 0);
    queue_.clear();
    for (int v = 0; v < nv_; ++v) {
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
    }
    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const int v = queue_.back();
        queue_.pop_back();
        for (int p : neighbend_[v]) {
          const int k = p / 2;
          const int w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          Weight kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = 1;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = -1;
      Weight delta = 0;
      int deltaedge = -1;
      int deltablossom = -1;
      if (!max_cardinality_) {
        deltatype = 1;
        delta = *std::min_element(dual_.begin(), dual_.begin() + nv_);
      }
      for (int v = 0; v < nv_; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const Weight d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (std::size_t b = 0; b < n2; ++b) {
        if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const Weight d = slack(bestedge_[b]) / 2;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (std::size_t b = nv_; b < n2; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dual_[b] < delta)) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = static_cast<int>(b);
        }
      }
      if (deltatype == -1) {
        deltatype = 1;
        delta = std::max<Weight>(0, *std::min_element(dual_.begin(), dual_.begin() + nv_));
      }
      for (int v = 0; v < nv_; ++v) {
        const int l = label_[inblossom_[v]];
        if (l == 1) {
          dual_[v] -= delta;
        } else if (l == 2) {
          dual_[v] += delta;
        }
      }
      for (std::size_t b = nv_; b < n2; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1) {
          if (label_[b] == 1) {
            dual_[b] += delta;
          } else if (label_[b] == 2) {
            dual_[b] -= delta;
          }
        }
      }
      if (deltatype == 1) break;
      if (deltatype == 2) {
        allowedge_[deltaedge] = 1;
        auto [i, j, w] = edges_[deltaedge];
        (void)w;
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = 1;
        queue_.push_back(std::get<0>(edges_[deltaedge]));
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (std::size_t b = nv_; b < n2; ++b) {
      if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
        expand_blossom(static_cast<int>(b), true);
      }
    }
  }

  result.mate.assign(nv_, -1);
  for (int v = 0; v < nv_; ++v)
    if (mate_[v] >= 0) result.mate[v] = endpoint_[mate_[v]];
  result.dual.assign(dual_.begin(), dual_.begin() + nv_);
  return result;
}

}  // namespace

BlossomResult max_weight_matching(int vertex_count, std::span<const std::tuple<int, int, Weight>> edges,
                                  bool max_cardinality) {
  for (const auto& [i, j, w] : edges) {
    if (i < 0 || j < 0 || i >= vertex_count || j >= vertex_count || i == j) {
      throw PreconditionError("matching: bad edge endpoint");
    }
  }
  BlossomSolver solver(vertex_count, edges, max_cardinality);
  return solver.solve();
}

}  // namespace maxtsp::detail
