#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/graph.hpp"
#include "maxtsp/matching.hpp"

namespace maxtsp {

inline constexpr int kOracleTspLimit = 18;
inline constexpr int kOracleCoverLimit = 10;

/// Exact maximum tour weight by bitmask dynamic programming. TooLarge beyond 18 vertices.
Weight oracle_max_tsp(const CompleteGraph& g);

/// Same quantity by enumerating permutations; only for cross-checking at n <= 9.
Weight brute_force_max_tsp(const CompleteGraph& g);

/// Best perfect matching weight by enumeration, or nullopt when none exists.
std::optional<Weight> brute_force_perfect_matching(const GeneralGraph& g);

/// Best perfect b-matching weight by enumeration, or nullopt when none exists.
std::optional<Weight> brute_force_b_matching(const GeneralGraph& g, const DegreeDemand& b);

/// Calls `visit` on every cycle cover of the complete graph on n vertices.
void enumerate_cycle_covers(int n, const std::function<void(const CycleCover&)>& visit);

Weight oracle_max_cycle_cover(const CompleteGraph& g);

/// Maximum weight over cycle covers with no cycle on the vertex set of a kite and,
/// for 4-kites, no triangle on three of its vertices. Returns the optimum cover too.
std::pair<Weight, CycleCover> oracle_kite_free_cycle_cover(const CompleteGraph& g, const std::vector<Kite>& kites);

/// True when the cover has a cycle that the gadgets forbid for these kites.
bool uses_forbidden_kite_cycle(const CycleCover& cover, const std::vector<Kite>& kites);

}  // namespace maxtsp
