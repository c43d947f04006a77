#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "clugame/game.hpp"
#include "clugame/graph.hpp"

namespace clugame {

enum class EdgeFilter { all, coordination_only };

struct DensityResult {
  Rat density;               // max over nonempty S of |E'[S]| / |S|
  std::vector<int> witness;  // subset attaining it, sorted by id
};

// Exact maximum subgraph density. Candidate values are fractions a/b with
// b <= n, decided by a parametric min-cut and pinned down on the candidate
// grid; the returned witness attains the maximum exactly.
DensityResult max_subgraph_density(const Graph& g,
                                   EdgeFilter filter = EdgeFilter::all);

struct MatchingResult {
  int size = 0;
  std::vector<std::pair<int, int>> edges;  // node-disjoint, maximum
};

// Exact maximum matching on general graphs (blossom contraction).
MatchingResult maximum_matching(const Graph& g);

struct ColoringResult {
  int chromatic_number = 0;
  std::vector<int> coloring;  // proper, colors 1..chi
};

// Exact chromatic number by branch and bound; refuses when node_count
// exceeds the cap (NP-hard, desk scale only).
ColoringResult chromatic_number(const Graph& g, int cap = 20);

int max_degree(const Graph& g);

struct TopologyOptions {
  bool compute_density = true;
  bool compute_matching = true;
  bool compute_chromatic = true;
  int chromatic_cap = 20;
};

struct TopologyStats {
  DensityResult density;
  DensityResult coord_density;
  int max_degree = 0;
  std::optional<ColoringResult> coloring;
  MatchingResult matching;
};

TopologyStats compute_topology_stats(const Graph& g,
                                     const TopologyOptions& options = {});

// A bound value, or the first hypothesis that fails on this game.
struct BoundValue {
  std::optional<Rat> value;
  std::string not_applicable_reason;

  bool applicable() const { return value.has_value(); }
};

struct PoaBounds {
  // symmetric, positive rule:      1 + (1 + max disparity) * rho(G)
  BoundValue density_bound;
  // + declared planar:             4 + 3 * max disparity
  BoundValue planar_bound;
  // symmetric, equal split:        1 + 2 * rho(G)
  BoundValue equal_split_density_bound;
  // symmetric, equal split:        5 + 2 * rho(G[E_c])
  BoundValue refined_coordination_bound;
  // coordination, equal split, zero preferences, k >= 2, c >= 3:
  //   upper 2 * eps * max_degree, lower eps * max{1, deg/(k-1) - 1}
  BoundValue degree_upper_bound;
  BoundValue degree_lower_companion;
};

PoaBounds topological_poa_bounds(const ClusteringGame& game, const Rat& eps,
                                 int k);

nlohmann::ordered_json topology_stats_to_json(const TopologyStats& stats);
nlohmann::ordered_json poa_bounds_to_json(const PoaBounds& bounds);

}  // namespace clugame
