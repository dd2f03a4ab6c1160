#pragma once

#include <span>
#include <vector>

#include "maxtsp/graph.hpp"

namespace maxtsp {

enum class KiteKind { three, four };

struct Kite {
  KiteKind kind = KiteKind::three;
  /// Index of the cycle in C_max.
  int cycle_index = -1;
  /// Cycle order as stored in C_max.
  std::vector<Vertex> vertices;
  /// Matching edges with both ends in the kite.
  std::vector<EdgeId> d_edges;
  /// 3-kites: the vertex whose matching edge leaves the kite. -1 for 4-kites.
  Vertex foot = -1;

  bool contains(Vertex v) const;
  /// Cycle edges of C_max.
  std::vector<EdgeId> sides() const;
  /// Every pair of kite vertices (sides plus the two diagonals of a 4-kite).
  std::vector<EdgeId> problematic_edges() const;
  bool is_diagonal(EdgeId e) const;
  /// A 4-kite whose matching edges are its diagonals rather than two opposite sides.
  bool has_matched_diagonals() const;
};

struct CycleStats {
  int flex = 0;
  int col = 0;
};

/// Maximum-weight 2-factor via b-matching with b = 2.
CycleCover max_weight_cycle_cover(const CompleteGraph& g);

/// Splits a 2-regular edge set into cycles; each cycle starts at its minimum vertex and
/// continues toward the smaller of its two neighbours. Cycles are ordered by first vertex.
CycleCover cycles_from_edges(int n, std::span<const EdgeId> edges);

std::vector<Kite> find_kites(const CycleCover& cmax, const Matching& m);

/// Colour of the matching edge at each vertex: 0 uncoloured, 1..3 coloured, kTailMark
/// for a tail of a 3-kite, which the predicates ignore.
inline constexpr int kTailMark = -1;

/// `mate[v]` is the matching partner of v.
CycleStats cycle_stats(std::span<const Vertex> cycle, std::span<const Vertex> mate, std::span<const int> m_color);

/// Largest number of vertex-disjoint cycle edges whose two ends both carry external
/// matching edges of one common colour.
int disjoint_monochrome_pairs(std::span<const Vertex> cycle, std::span<const Vertex> mate,
                              std::span<const int> m_color);

/// PreconditionError when an external matching edge of the cycle is uncoloured.
bool is_blocked(std::span<const Vertex> cycle, const CycleStats& stats, std::span<const Vertex> mate,
                std::span<const int> m_color);

}  // namespace maxtsp
