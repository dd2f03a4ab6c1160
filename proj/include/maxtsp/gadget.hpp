#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/graph.hpp"
#include "maxtsp/matching.hpp"

namespace maxtsp {

/// The graph G' on the doubled weight scale. Vertices 0..n-1 are the original ones;
/// splitting and gadget vertices follow.
struct SplitGraph {
  GeneralGraph graph;
  DegreeDemand demand;
  int original_count = 0;
  std::vector<Kite> kites;
  /// Problematic edge -> (splitting vertex at e.u, splitting vertex at e.v).
  std::map<EdgeId, std::pair<int, int>> splitting;
  /// Per kite: {p, q} for 3-kites, {p_0, p_1, p_2, p_3, q} for 4-kites (p_i belongs to
  /// kite.vertices[i]).
  std::vector<std::vector<int>> gadget_vertices;
  /// Index in graph.edges of the first edge owned by each kite's gadget.
  std::vector<std::size_t> gadget_edge_begin;
  std::vector<std::size_t> gadget_edge_end;

  /// Kite index owning vertex v, or -1.
  int kite_of(Vertex v) const;
  bool is_problematic(EdgeId e) const { return splitting.count(e) > 0; }
  /// Splitting vertex of e on the side of endpoint `at`.
  int split_vertex(EdgeId e, Vertex at) const;

  std::vector<int> vertex_kite;
};

SplitGraph build_split_graph(const CompleteGraph& g, const std::vector<Kite>& kites);

struct RelaxedCycleCover {
  /// I(C2): edges of G contained whole, including problematic edges with both halves.
  std::vector<EdgeId> whole_edges;
  /// H(C2): edges contributing exactly one half.
  std::vector<HalfEdge> half_edges;
  /// Doubled scale: 2 per unit of whole-edge weight, 1 per unit of half-edge weight.
  Weight weight = 0;

  Weight whole_weight(const CompleteGraph& g) const;
};

RelaxedCycleCover compute_relaxed_cycle_cover(const SplitGraph& sg, const CompleteGraph& g);

/// Decodes any perfect b-matching of G' (edge list over G' vertices).
RelaxedCycleCover decode_relaxed_cover(const SplitGraph& sg, const CompleteGraph& g, const std::vector<EdgeId>& b_edges);

struct RelaxedCoverReport {
  bool degrees = true;
  bool three_kites = true;
  bool four_kites = true;
  std::vector<std::string> failures;

  bool ok() const { return degrees && three_kites && four_kites; }
};

/// Checks the three structural conditions of a relaxed cover.
RelaxedCoverReport check_relaxed_cover(const RelaxedCycleCover& c2, const std::vector<Kite>& kites, int n);

/// Number of half-edges a kite holds in the cover, counting both halves of whole edges.
int kite_half_count(const RelaxedCycleCover& c2, const Kite& kite);

struct Embedding {
  std::vector<EdgeId> edges;  // over G' vertices, sorted
  Weight weight = 0;          // doubled scale
  /// Per kite, a short label of the configuration the cover induces on it.
  std::vector<std::string> cases;
};

/// Perfect b-matching of G' that reproduces a cycle cover avoiding the kites.
/// Throws NotKiteFree if a cycle of the cover lies on a kite (or on three vertices of a 4-kite).
Embedding embed_kite_free_cover(const CycleCover& cover, const SplitGraph& sg, const CompleteGraph& g);

/// True when `edges` is a perfect b-matching of the split graph.
bool is_perfect_b_matching(const SplitGraph& sg, const std::vector<EdgeId>& edges);

}  // namespace maxtsp
