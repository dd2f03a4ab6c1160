#pragma once

#include <span>
#include <tuple>
#include <vector>

#include "maxtsp/graph.hpp"

namespace maxtsp::detail {

struct BlossomResult {
  /// mate[v] or -1.
  std::vector<int> mate;
  /// Vertex duals on the solver's doubled scale: an edge (i, j, w) between two
  /// top-level blossoms has slack dual[i] + dual[j] - 2w >= 0, tight when matched.
  std::vector<Weight> dual;
};

/// Edmonds' weighted matching with blossoms, O(V^3). With `max_cardinality` the result
/// is a maximum-weight matching among maximum-cardinality matchings.
BlossomResult max_weight_matching(int vertex_count,
                                  std::span<const std::tuple<int, int, Weight>> edges,
                                  bool max_cardinality);

}  // namespace maxtsp::detail
