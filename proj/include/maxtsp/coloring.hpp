#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maxtsp/graph.hpp"

namespace maxtsp {

/// Bit c is set when colour c is assigned. Colours 1..3 form K3, colours 4..5 form K2.
using ColorMask = unsigned;

inline constexpr ColorMask kPaletteK3 = 0b1110;
inline constexpr ColorMask kPaletteK2 = 0b110000;

constexpr ColorMask color_bit(int c) { return ColorMask{1} << c; }
int color_count(ColorMask m);
std::vector<int> colors_of(ColorMask m);
std::string mask_string(ColorMask m);

/// One edge of a multigraph together with its copies: `demand` distinct colours.
struct ColorSlot {
  EdgeId edge;
  int demand = 1;
  ColorMask mask = 0;
};

/// A colouring of a multigraph, one slot per distinct parallel group. Two slots may share
/// an edge when the copies are tracked separately.
struct PathColoring {
  ColorMask palette = kPaletteK3;
  std::vector<ColorSlot> slots;

  std::vector<EdgeId> color_class(int color) const;
  bool complete() const;
  Weight class_weight(const CompleteGraph& g, int color) const;
};

struct ColoringAudit {
  bool complete = true;
  /// Colours whose class is not a set of vertex-disjoint paths.
  std::vector<int> bad_classes;
  std::vector<std::string> failures;
  bool ok() const { return complete && bad_classes.empty(); }
};

ColoringAudit audit_path_coloring(const PathColoring& c, int n);

/// Partial colouring check: uncoloured or partly coloured slots are ignored.
bool partial_coloring_valid(const PathColoring& c, int n);

/// Extension problem: `fixed` edges keep their colours, each open slot receives exactly
/// `demand` colours drawn from its mask.
struct CompletionProblem {
  int vertex_count = 0;
  ColorMask palette = kPaletteK3;
  std::vector<std::pair<EdgeId, ColorMask>> fixed;
  std::vector<ColorSlot> open;
};

struct SearchStats {
  long nodes = 0;
  int restarts = 0;
};

/// Exact backtracking with most-constrained-first selection; ties follow the order of
/// `open`. Returns the colour mask of every open slot, or nullopt when the budget runs
/// out or no completion exists.
std::optional<std::vector<ColorMask>> complete_path_coloring(const CompletionProblem& p, long node_budget,
                                                             SearchStats* stats = nullptr);

}  // namespace maxtsp
