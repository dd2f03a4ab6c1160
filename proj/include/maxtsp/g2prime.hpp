#pragma once

#include <map>
#include <vector>

#include "maxtsp/gadget.hpp"
#include "maxtsp/graph.hpp"

namespace maxtsp {

enum class G2Origin { whole, promoted, exchanged };

/// One edge of C'_2 = (I(C_2) + Z + F_1) - F_2. An F_1 edge that repeats an edge of
/// I(C_2) + Z is kept as a separate element.
struct G2Element {
  EdgeId edge;
  G2Origin origin = G2Origin::whole;
  /// For promoted half-edges, the endpoint that held the half.
  Vertex anchor = -1;
};

/// A path or cycle of G'_2. Paths list k+1 vertices for k elements; cycles list k of each.
/// Paths are directed so that a degree-4 end, if there is one, comes last.
struct G2Part {
  bool cycle = false;
  std::vector<Vertex> vertices;
  std::vector<int> elements;
  /// Position in `elements` of the border, or -1.
  int border = -1;
};

struct G2Prime {
  int n = 0;
  std::vector<G2Element> elements;
  std::vector<Vertex> mate;
  std::vector<G2Part> parts;
  /// Degree in the multigraph G'_2 (M included).
  std::vector<int> degree;
  std::map<EdgeId, int> multiplicity;
  /// Part containing each vertex as an interior vertex of a path or on a cycle; -1 if none.
  std::vector<int> through;

  bool is_double(EdgeId e) const;
  /// The incident edges of v in G'_2 other than `a` and `b` that are double.
  bool has_other_double(Vertex v, EdgeId a, EdgeId b) const;
  std::vector<EdgeId> incident(Vertex v) const;
};

/// `z` holds the promoted half-edges. F_2 removes one element each; F_1 adds one each.
G2Prime build_g2prime(int n, const RelaxedCycleCover& c2, const std::vector<HalfEdge>& z,
                      const std::vector<EdgeId>& f1, const std::vector<EdgeId>& f2, const Matching& m);

/// Orientation-free reading: a path is amenable when at most one end has degree 4 and,
/// if one does, the path ends with a double edge, its last-but-one edge is double, or
/// the last-but-three vertex is the matching partner of the end or of the last-but-one
/// vertex.
bool is_amenable(const G2Prime& g, const G2Part& p);

/// An odd cycle whose every vertex sees a double edge off the cycle.
bool is_forced_odd_cycle(const G2Prime& g, const G2Part& p);

}  // namespace maxtsp
