#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "maxtsp/errors.hpp"

namespace maxtsp {

using Weight = std::int64_t;
using Vertex = int;

/// Undirected edge stored canonically with u < v.
struct EdgeId {
  Vertex u = 0;
  Vertex v = 1;

  constexpr EdgeId() = default;
  constexpr EdgeId(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {
    if (a == b) throw PreconditionError("EdgeId: self-loop");
  }

  constexpr bool contains(Vertex x) const { return x == u || x == v; }
  constexpr Vertex other(Vertex x) const { return x == u ? v : u; }

  friend constexpr auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct EdgeIdHash {
  std::size_t operator()(const EdgeId& e) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.u) << 32) |
                                      static_cast<std::uint32_t>(e.v));
  }
};

/// Complete undirected graph with nonnegative integer weights on dense vertices 0..n-1.
class CompleteGraph {
 public:
  CompleteGraph() = default;

  /// Builds from the row-major upper triangle (n*(n-1)/2 entries).
  CompleteGraph(int n, std::span<const Weight> upper_triangle);

  int size() const { return n_; }
  Weight weight(Vertex u, Vertex v) const { return w_[static_cast<std::size_t>(u) * n_ + v]; }
  Weight weight(EdgeId e) const { return weight(e.u, e.v); }

  std::vector<Weight> upper_triangle() const;

  friend bool operator==(const CompleteGraph&, const CompleteGraph&) = default;

 private:
  int n_ = 0;
  std::vector<Weight> w_;
};

/// Validating constructor from an arbitrary (u, v, w) table; either orientation of a
/// pair is accepted, duplicates must agree.
CompleteGraph build_complete_graph(int n, std::span<const std::tuple<Vertex, Vertex, Weight>> table);

/// Multigraph over a base instance; each edge carries multiplicity 0..3.
class Multigraph {
 public:
  explicit Multigraph(const CompleteGraph& base) : base_(&base) {}

  void add(EdgeId e, int copies = 1);
  void remove(EdgeId e, int copies = 1);
  int multiplicity(EdgeId e) const;

  const std::map<EdgeId, int>& edges() const { return mult_; }
  const CompleteGraph& base() const { return *base_; }

 private:
  const CompleteGraph* base_;
  std::map<EdgeId, int> mult_;
};

Weight multigraph_weight(const Multigraph& m);

struct Matching {
  std::vector<EdgeId> pairs;
  Weight weight = 0;

  /// mate[v] for every vertex, -1 when unmatched.
  std::vector<Vertex> mates(int n) const;
};

struct CycleCover {
  std::vector<std::vector<Vertex>> cycles;

  std::vector<EdgeId> edges() const;
  Weight weight(const CompleteGraph& g) const;
};

struct HalfEdge {
  EdgeId edge;
  Vertex endpoint = 0;

  friend auto operator<=>(const HalfEdge&, const HalfEdge&) = default;
};

/// True iff every vertex has degree <= 2 in `edges` and the edge set is acyclic.
/// Parallel copies of an edge count as a 2-cycle.
bool is_vertex_disjoint_paths(std::span<const EdgeId> edges, int n);

Weight edge_set_weight(const CompleteGraph& g, std::span<const EdgeId> edges);

/// Validates a cycle cover: partition of 0..n-1 into cycles of length >= 3.
bool is_cycle_cover(const CycleCover& c, int n);

}  // namespace maxtsp
