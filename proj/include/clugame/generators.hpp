#pragma once

#include <optional>
#include <vector>

#include "clugame/game.hpp"
#include "clugame/graph.hpp"

namespace clugame {

struct GnpParams {
  int n = 0;
  Rat p = 0;  // inclusion probability, exact rational in [0,1]
  std::uint64_t seed = 0;
};

inline GnpParams sparse_gnp(int n, const Rat& d, std::uint64_t seed) {
  return {n, d / n, seed};
}
inline GnpParams dense_gnp(int n, const Rat& d, std::uint64_t seed) {
  return {n, d, seed};
}

// Every unordered pair present independently with probability exactly p,
// pairs visited in lexicographic order; bit-for-bit reproducible per seed.
Graph gen_gnp(const GnpParams& params,
              EdgeKind kind = EdgeKind::coordination, const Rat& weight = 1);

// Geometric skip sampling for large n. Skip lengths use floating-point
// logs, so this variant is deterministic per seed on a given platform but
// not bit-portable like gen_gnp; only degree-scale experiments use it.
Graph gen_gnp_fast(const GnpParams& params,
                   EdgeKind kind = EdgeKind::coordination,
                   const Rat& weight = 1);

// A game plus the profile(s) its construction promises; callers verify the
// equilibrium property through the checker rather than trusting it.
struct ConstructedInstance {
  ClusteringGame game;
  StrategyProfile equilibrium;
  std::optional<StrategyProfile> optimum;
};

// Complete bipartite K_{l,r}, weighted Shapley shares from (gamma_l,
// gamma_r), unit weights, own-color/common-color preferences. Equilibrium
// ratio: 1 + r*l / (l*gamma_l/(gamma_l+gamma_r) + r*gamma_r/(gamma_l+gamma_r)).
ConstructedInstance bipartite_tightness_instance(int l, int r,
                                                 const Rat& gamma_l,
                                                 const Rat& gamma_r);

// Weight-2 edges inside `subset`, own-color/common-color unit preferences;
// the constructed equilibrium/optimum pair has ratio 1 + 2|E[S]|/|S|.
ConstructedInstance density_lb_instance(const Graph& graph,
                                        const std::vector<int>& subset);

// Matching of size q <= c inside the leading node block: weight 2 on the
// matching, 1 on the rest of the block's induced edges, 0 elsewhere. The
// per-pair-color profile is an equilibrium with ratio >= |E[V_M]|/(2q).
ConstructedInstance matching_lb_instance(const Graph& graph, int color_count);

// chi(G)+1 colors, strategy sets {proper color, fallback}; the proper
// coloring is an equilibrium with welfare 0, so the PoA is infinite.
ConstructedInstance chromatic_lb_instance(const Graph& graph,
                                          int chromatic_cap = 20);

// Max-degree star gadget: k-1 unit edges, eps on the rest of the star,
// strategy sets {a,b} / {a,c}. The constructed profile is an
// (eps,k)-equilibrium with welfare k-1.
ConstructedInstance degree_lb_instance(const Graph& graph, const Rat& eps,
                                       int k);

struct StrategySetDistribution {
  enum class Family { uniform_nonempty, pair_with_common };
  Family family = Family::uniform_nonempty;
  int colors = 2;

  // Lower bound on P(two independent draws share a color) when the family
  // guarantees one; pair_with_common makes no claim (it exists to exhibit
  // the k = 1 failure).
  std::optional<Rat> claimed_common_color_constant() const;
};

std::vector<std::vector<int>> random_strategy_sets(
    int n, const StrategySetDistribution& dist, std::uint64_t seed);

struct RandomGameParams {
  enum class RuleFamily {
    equal_split,
    random_positive,
    weighted_shapley,
    random_with_zeros,
  };
  enum class KindMix { all_coordination, all_anti_coordination, mixed };

  int colors = 2;
  RuleFamily rule = RuleFamily::equal_split;
  KindMix kinds = KindMix::all_coordination;
  Rat anti_probability = Rat(1, 2);  // for KindMix::mixed
  int weight_numerator_max = 6;
  std::vector<int> weight_denominators = {1, 2, 4};
  bool random_preferences = false;
  int preference_numerator_max = 4;
  std::optional<std::vector<std::vector<int>>> strategy_sets;
  std::uint64_t seed = 0;
};

// Draw order (all from one stream): per edge kind, weight, shares; then
// preferences per node and slot. Identical seeds give identical games.
ClusteringGame random_game(const Graph& topology,
                           const RandomGameParams& params);

}  // namespace clugame
