#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxtsp/coloring.hpp"
#include "maxtsp/cycle_cover.hpp"
#include "maxtsp/exchange.hpp"
#include "maxtsp/gadget.hpp"
#include "maxtsp/path_coloring.hpp"

namespace maxtsp {

struct Tour {
  /// Cyclic order starting at vertex 0.
  std::vector<Vertex> order;
  Weight weight = 0;
};

Weight tour_weight(const CompleteGraph& g, std::span<const Vertex> order);
bool is_tour(std::span<const Vertex> order, int n);

struct ClassChoice {
  /// 1..3 for the classes of G'_1, 4..5 for those of G'_2.
  int id = 0;
  std::vector<EdgeId> edges;
  Weight weight = 0;
};

ClassChoice select_best_class(const PathColoring& k3, const PathColoring& k2, const CompleteGraph& g);

/// Joins the paths by repeatedly adding the heaviest edge between ends of two different
/// paths, then closes the last path.
Tour patch_paths_to_tour(std::span<const EdgeId> paths, const CompleteGraph& g);

struct StageLedger {
  Weight cmax = 0;
  Weight m = 0;
  /// Doubled scale: 2 w(I) + w(H).
  Weight c2_doubled = 0;
  Weight i = 0;
  Weight z1 = 0;
  Weight z2 = 0;
  Weight z = 0;
  Weight f1 = 0;
  Weight f2 = 0;
  Weight g1_total = 0;
  Weight g2_total = 0;
  std::array<Weight, 5> class_weights{};
  int best_class = 0;
  int kites3 = 0;
  int kites4 = 0;
  int repairs = 0;
  int widening = 0;
};

struct PipelineRun {
  CompleteGraph graph;
  CycleCover cmax;
  Matching m;
  std::vector<Kite> kites;
  RelaxedCycleCover c2;
  Orientation orientation;
  ExchangePair exchange;
  PathColoring k3;
  PathColoring k2;
  RelaxedCoverReport def1;
  F12Report f12;
  ColoringAudit audit3;
  ColoringAudit audit2;
  StageLedger ledger;
  Tour tour;
  std::vector<std::string> trace;
};

/// The even-n pipeline. Throws UnhandledCase or InternalError when a stage fails.
PipelineRun run_pipeline(const CompleteGraph& g, bool trace = false);

struct SolveOptions {
  bool fast_odd = false;
  bool trace = false;
  /// Workers for the odd-n sweep; the result does not depend on it.
  int threads = 1;
};

struct SolveResult {
  Tour tour;
  /// For odd n: the shrunk edge and the pipeline run on the shrunk instance.
  std::optional<EdgeId> shrunk;
  std::optional<PipelineRun> run;
  int odd_candidates = 0;
  /// False only for the single-edge odd heuristic.
  bool bound_guaranteed = true;
};

/// n <= 5 is solved by enumeration; odd n >= 7 shrinks one edge (every edge, or only the
/// heaviest with fast_odd) and keeps the best re-expanded tour.
SolveResult solve(const CompleteGraph& g, const SolveOptions& options = {});

/// Instance on n - 1 vertices where v is merged into u with w(x, u') = max(w(x, u), w(x, v)).
/// Vertices keep their order; v is dropped.
CompleteGraph shrink_edge(const CompleteGraph& g, EdgeId e);

/// Replaces the merged vertex by the edge, in the better of its two orientations.
Tour expand_tour(const CompleteGraph& g, const Tour& shrunk, EdgeId e);

}  // namespace maxtsp
