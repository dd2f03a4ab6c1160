#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "maxtsp/coloring.hpp"
#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/g2prime.hpp"
#include "maxtsp/union_find.hpp"

namespace maxtsp {

/// Multiplicities of G'_1 = 2 C_max + M - F_1 + F_2.
std::map<EdgeId, int> g1prime_multiplicity(const CycleCover& cmax, const Matching& m, const std::vector<EdgeId>& f1,
                                           const std::vector<EdgeId>& f2);

/// Per-colour degree and connectivity bookkeeping with undo.
class ColorState {
 public:
  explicit ColorState(int n);

  bool fits(EdgeId e, ColorMask mask) const;
  /// Adds when it fits; returns false and changes nothing otherwise.
  bool try_add(EdgeId e, ColorMask mask);

  struct Mark {
    std::array<std::size_t, 6> uf{};
    std::size_t log = 0;
  };
  Mark mark() const;
  void rollback(const Mark& m);

 private:
  std::array<DisjointSets, 6> uf_;
  std::array<std::vector<int>, 6> deg_;
  std::vector<std::pair<EdgeId, ColorMask>> log_;
};

struct G1Partial {
  /// Edges of G_1 coloured by the first stage, with all their colours.
  std::map<EdgeId, ColorMask> colored;
  /// Colour of the matching edge at each vertex: 0 uncoloured, 1..3, or kTailMark.
  std::vector<int> m_color;
  /// Unproblematic cycles the rules could not colour; they are left to the completion.
  std::vector<int> skipped_cycles;
  std::vector<std::string> trace;
};

/// Colours every unproblematic cycle of C_max and every non-tail matching edge.
/// Kite edges and tails stay uncoloured.
G1Partial path3color_g1(const CompleteGraph& g, const CycleCover& cmax, const Matching& m,
                        const std::vector<Kite>& kites);

struct CompletionReport {
  /// 0: only the uncoloured edges were searched; 1: neighbouring cycles were reopened;
  /// 2: the whole multigraph was searched.
  int widening = 0;
  long nodes = 0;
};

/// Full colouring of G'_1 over K_3: the partial colouring is completed on the edges of H
/// (positive requirement, still uncoloured). InternalError when no completion is found.
/// A positive node_cap bounds the search effort of each stage.
PathColoring color_g1prime(const CompleteGraph& g, const CycleCover& cmax, const Matching& m,
                           const std::vector<Kite>& kites, const std::vector<EdgeId>& f1,
                           const std::vector<EdgeId>& f2, const G1Partial& partial, CompletionReport* report = nullptr,
                           std::vector<std::string>* trace = nullptr, long node_cap = 0);

/// Order in which the parts of G'_2 are coloured: cycles, then paths on cycles of G_p,
/// then paths whose G_p out-degree has dropped to zero.
std::vector<int> g2_processing_order(const G2Prime& g2);

/// Path-2-colouring of G'_2 over K_2. InternalError when none is found.
PathColoring color_g2prime(const G2Prime& g2, CompletionReport* report = nullptr,
                           std::vector<std::string>* trace = nullptr, long node_cap = 0);

}  // namespace maxtsp
