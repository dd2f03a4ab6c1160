#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/g2prime.hpp"
#include "maxtsp/gadget.hpp"

namespace maxtsp {

/// Directions of I(C_2) and of every half-edge's full edge under D_2. Half-edges are
/// paired inside their kite and the resulting closed walks are oriented, so every kite
/// has as many incoming as outgoing edges.
struct Orientation {
  std::map<EdgeId, std::pair<Vertex, Vertex>> whole;
  /// Keyed by the index into RelaxedCycleCover::half_edges.
  std::vector<std::pair<Vertex, Vertex>> half;
  bool reversed = false;
  /// Closed walk of each whole edge and each half-edge; a walk can be reversed on its own.
  std::map<EdgeId, int> whole_walk;
  std::vector<int> half_walk;
  std::vector<char> flipped;

  int walk_count() const { return static_cast<int>(flipped.size()); }
  std::pair<Vertex, Vertex> arc(EdgeId e) const;
  std::pair<Vertex, Vertex> half_arc(std::size_t i) const;
  Orientation opposite() const;
  bool outgoing(EdgeId e, const Kite& k) const;
  bool incoming(EdgeId e, const Kite& k) const;
};

Orientation build_orientations(const RelaxedCycleCover& c2, const std::vector<Kite>& kites);

/// Counts of incoming and outgoing edges of I(C_2) at a kite.
std::pair<int, int> kite_in_out(const RelaxedCycleCover& c2, const Orientation& o, const Kite& k);

struct HalfEdgeSplit {
  /// Indices into RelaxedCycleCover::half_edges.
  std::vector<int> z1;
  std::vector<int> z2;
  bool use_z1 = true;

  const std::vector<int>& z() const { return use_z1 ? z1 : z2; }
  std::vector<HalfEdge> z_edges(const RelaxedCycleCover& c2) const;
};

/// Per kite, the halves that leave the kite's walk in D_2 form Z_1 unless the other half
/// is heavier, in which case the two sides swap.
HalfEdgeSplit partition_half_edges(const RelaxedCycleCover& c2, const Orientation& o, const std::vector<Kite>& kites,
                                   const CompleteGraph& g);

Weight split_weight(const RelaxedCycleCover& c2, const std::vector<int>& side, const CompleteGraph& g);

struct MdMatch {
  /// Vertices of the odd cycle of C_2.
  std::vector<Vertex> cycle;
  EdgeId d_edge;
  int kite = -1;
};

/// Odd cycles of C_2 whose every vertex is matched along a distinct d-edge, each
/// assigned its own d-edge. InternalError when no saturating assignment exists.
std::vector<MdMatch> build_md_matching(const RelaxedCycleCover& c2, const std::vector<Kite>& kites,
                                       const Matching& m, int n);

struct KiteExchange {
  std::string case_id;
  std::vector<EdgeId> f1;
  EdgeId outgoing;
  std::optional<EdgeId> f2_internal;
  /// Promoted half-edges of this kite, as indices into RelaxedCycleCover::half_edges.
  std::vector<int> z;
};

struct ExchangePair {
  std::vector<EdgeId> f1;
  std::vector<EdgeId> f2;
  HalfEdgeSplit split;
  std::vector<KiteExchange> kites;
  /// The orientation the sets were chosen under (some walks may be reversed).
  Orientation orientation;
  int repairs = 0;
};

struct ExchangeContext {
  const CompleteGraph* g = nullptr;
  const CycleCover* cmax = nullptr;
  const Matching* m = nullptr;
  const std::vector<Kite>* kites = nullptr;
  const RelaxedCycleCover* c2 = nullptr;
  const Orientation* orientation = nullptr;
};

/// Extra acceptance test on a complete assignment; rejected ones are repaired like violations.
using ExchangeFilter = std::function<bool(const ExchangePair&)>;

/// UnhandledCase when no assignment satisfies every property (and the filter, if any).
ExchangePair compute_exchange_sets(const ExchangeContext& ctx, const HalfEdgeSplit& initial,
                                   const std::vector<MdMatch>& md, const ExchangeFilter& accept = {});

inline constexpr int kF12Checks = 9;

struct F12Report {
  /// Properties 1..7, then "no foot with two F_2 edges", then "four F_2 edges means vertical".
  std::array<bool, kF12Checks> pass{};
  std::vector<std::string> witnesses;
  bool ok() const;
};

F12Report verify_f12(const ExchangeContext& ctx, const ExchangePair& fp);

G2Prime build_g2prime(const ExchangeContext& ctx, const ExchangePair& fp);

}  // namespace maxtsp
