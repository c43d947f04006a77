#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "clugame/graph.hpp"

namespace clugame {

// Per-edge ordered share pair (alpha_uv, alpha_vu), indexed like Graph::edges.
struct DistributionRule {
  std::vector<std::pair<Rat, Rat>> shares;

  bool positive() const;
  bool equal_split() const;

  static DistributionRule make_equal_split(std::size_t edge_count);
};

// max over edges of max{a/b, b/a}; nullopt when some share is zero (infinite
// disparity).
std::optional<Rat> max_disparity(const DistributionRule& rule);

struct StrategyProfile {
  std::vector<int> colors;  // colors[i] in S_i, values 1..c

  bool operator==(const StrategyProfile& other) const = default;
};

// The full game instance. Immutable after build_game; all operations on it
// are pure functions, safe to share across threads.
struct ClusteringGame {
  Graph graph;
  int color_count = 0;
  std::vector<std::vector<int>> strategy_sets;  // sorted ascending, nonempty
  DistributionRule rule;
  std::vector<std::vector<Rat>> preferences;  // aligned with strategy_sets

  bool symmetric = false;
  bool positive_rule = false;
  bool equal_split = false;

  std::vector<std::string> warnings;
  nlohmann::ordered_json meta;  // provenance passthrough, not validated

  int player_count() const { return graph.node_count; }
  // Slot of `color` in S_i, or -1 when the color is not available to i.
  int slot_of(int node, int color) const;
  Rat preference(int node, int color) const;
  // Fraction of edge e's weight endpoint `node` receives when e is satisfied.
  Rat share_value(int edge_index, int node) const;
};

struct GameInput {
  struct EdgeInput {
    int u = 0;
    int v = 0;
    EdgeKind kind = EdgeKind::coordination;
    Rat weight = 0;
    Rat alpha_uv = 1;
    Rat alpha_vu = 1;
  };

  int node_count = 0;
  int color_count = 0;
  bool planar_declared = false;
  std::vector<EdgeInput> edges;
  std::optional<std::vector<std::vector<int>>> strategy_sets;
  // per node, color -> value; keys must lie in the node's strategy set
  std::optional<std::vector<std::map<int, Rat>>> preferences;
  nlohmann::ordered_json meta;
};

// Validates the raw description and produces the game, or throws Error with
// one of the codes listed in errors.hpp. Non-fatal findings (e.g. singleton
// strategy sets combined with anti-coordination edges) land in warnings.
ClusteringGame build_game(const GameInput& input);

bool edge_satisfied(EdgeKind kind, int color_u, int color_v);

void validate_profile(const ClusteringGame& game, const StrategyProfile& s);

Rat utility(const ClusteringGame& game, const StrategyProfile& s, int node);

Rat social_welfare(const ClusteringGame& game, const StrategyProfile& s);

// In any (1,1)-equilibrium each player gets at least her best preference, so
// every equilibrium has welfare >= sum_i max_{c in S_i} q_i(c).
Rat min_equilibrium_welfare_bound(const ClusteringGame& game);

// Welfare decomposition ceiling: sum_i max q_i + sum_e w_e.
Rat welfare_upper_bound(const ClusteringGame& game);

// Scales all weights and preferences by lambda > 0 (utilities scale by
// lambda; equilibrium sets are unchanged).
ClusteringGame scale_game(const ClusteringGame& game, const Rat& lambda);

}  // namespace clugame
