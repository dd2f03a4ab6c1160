#pragma once

#include <numeric>
#include <utility>
#include <vector>

namespace maxtsp {

/// Union-find with union by size and no path compression, so every union can be
/// rolled back in LIFO order. Finds are O(log n).
class DisjointSets {
 public:
  explicit DisjointSets(int n = 0) { reset(n); }

  void reset(int n) {
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), 0);
    size_.assign(n, 1);
    history_.clear();
  }

  int find(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  bool connected(int a, int b) const { return find(a) == find(b); }

  /// Returns false (and records nothing) when a and b are already connected.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }

  std::size_t checkpoint() const { return history_.size(); }

  void rollback(std::size_t mark) {
    while (history_.size() > mark) {
      const int b = history_.back();
      history_.pop_back();
      const int a = parent_[b];
      size_[a] -= size_[b];
      parent_[b] = b;
    }
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> history_;
};

}  // namespace maxtsp
