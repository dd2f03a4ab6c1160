#pragma once

#include <utility>
#include <span>
#include <vector>

#include "maxtsp/graph.hpp"

namespace maxtsp {

/// Sparse weighted graph; no parallel edges, no self-loops.
struct GeneralGraph {
  int vertex_count = 0;
  std::vector<std::pair<EdgeId, Weight>> edges;

  /// Throws PreconditionError on parallel edges, loops or out-of-range ends.
  void validate() const;
};

/// All pairs of a complete instance as a general graph.
GeneralGraph as_general_graph(const CompleteGraph& g);

/// Required degree per vertex.
using DegreeDemand = std::vector<int>;

Matching max_weight_perfect_matching(const GeneralGraph& g);
Matching max_weight_perfect_matching(const CompleteGraph& g);

struct BMatching {
  std::vector<EdgeId> edges;  // sorted
  Weight weight = 0;
};

/// Exact maximum-weight perfect b-matching (each edge used at most once).
/// Large instances are solved on a candidate subgraph and completed by dual pricing,
/// so the answer is always optimal for the full graph. `hint`, when given, should be a
/// perfect b-matching; its edges are kept in every candidate subgraph.
BMatching max_weight_perfect_b_matching(const GeneralGraph& g, const DegreeDemand& b,
                                        std::span<const EdgeId> hint = {});

/// Degree-splitting reduction. Vertex v becomes b(v) copies. An edge with a
/// degree-1 endpoint becomes direct edges of weight 2w from that endpoint's copy to
/// every copy of the other; an edge between two vertices of degree >= 2 becomes a
/// two-node gadget with side edges of weight w and a zero middle edge.
struct ExpandedInstance {
  GeneralGraph graph;
  /// For each expanded edge, the original edge index it certifies as used, or -1.
  /// Direct edges and the u-side edges of gadgets carry the index.
  std::vector<int> origin;
  /// First copy index of each original vertex.
  std::vector<int> copy_begin;
};

ExpandedInstance expand_to_matching_instance(const GeneralGraph& g, const DegreeDemand& b);

/// Recovers the b-matching from a perfect matching of the expanded instance.
BMatching contract_expanded_matching(const GeneralGraph& g, const ExpandedInstance& ex,
                                     const Matching& expanded);

}  // namespace maxtsp
