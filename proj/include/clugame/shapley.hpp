#pragma once

#include <variant>
#include <vector>

#include "clugame/game.hpp"

namespace clugame {

// Certificate that the rule is a generalized weighted Shapley rule: for
// every edge with alpha_uv = 0, sigma(u) < sigma(v); for every edge with
// both shares positive, alpha_uv/(alpha_uv+alpha_vu) = gamma_u/(gamma_u+gamma_v).
struct GwsCertificate {
  std::vector<int> sigma;  // sigma[v] = position of node v, 0-based
  std::vector<Rat> gamma;  // positive, root of each component fixed to 1
};

// A directed cycle among positive-share components (including self-loops),
// realized as a node cycle in G. The last cycle edge is always a zero-share
// edge entered at its zero side, i.e. cycle_nodes.front() receives nothing
// from cycle_edges.back().
struct DigraphCycleWitness {
  std::vector<int> component_cycle;
  std::vector<int> cycle_nodes;  // traversal order, closed implicitly
  std::vector<int> cycle_edges;  // cycle_edges[t] joins nodes t and t+1 mod h
};

// A cycle of positive-share edges whose share-ratio product differs from 1.
// Normalized so that alpha_product < 1.
struct InconsistentCycleWitness {
  std::vector<int> cycle_nodes;
  std::vector<int> cycle_edges;
  Rat alpha_product;
};

struct ShapleyClassification {
  std::variant<GwsCertificate, DigraphCycleWitness, InconsistentCycleWitness>
      result;

  bool is_gws() const {
    return std::holds_alternative<GwsCertificate>(result);
  }
  const GwsCertificate& certificate() const {
    return std::get<GwsCertificate>(result);
  }
};

// Builds the positive-share components, the component digraph D (arc a -> b
// iff some edge has alpha_uv = 0 with u in Q_a, v in Q_b), checks D for
// cycles, then propagates gamma along a spanning tree of each component and
// checks every remaining edge. Deterministic: first violation in scan order
// wins.
ShapleyClassification classify_rule(const Graph& graph,
                                    const DistributionRule& rule);

// Weighted potential Phi(s) = sum_i q_i(s_i)/gamma_i +
// sum_{satisfied e={i,j}} w_e/(gamma_i+gamma_j). For every unilateral
// deviation, u_i(s') - u_i(s) = gamma_i * (Phi(s') - Phi(s)) exactly.
Rat potential_value(const ClusteringGame& game, const std::vector<Rat>& gamma,
                    const StrategyProfile& s);

// Weight construction that makes satisfying the forward cycle edge a strict
// best response everywhere: balanced weights along the witness cycle scaled
// by (1+eps)^i with (1+eps)^n * alpha(H) < 1, preferences K = sum of weights
// on two fixed colors. Best-response dynamics cycle on the result.
ClusteringGame build_br_cycle_game(const Graph& graph,
                                   const DistributionRule& rule,
                                   const InconsistentCycleWitness& witness,
                                   int color_count = 2);

// Same idea for a component-digraph cycle: strictly increasing weight chains
// along the positive sections, zero-share edges closing the loop.
ClusteringGame build_zero_share_cycle_game(const Graph& graph,
                                           const DistributionRule& rule,
                                           const DigraphCycleWitness& witness,
                                           int color_count = 2);

// Coordination-cycle construction with rotating big-M preferences; the
// result has no pure Nash equilibrium at all (c >= 3).
ClusteringGame build_no_pne_game(const Graph& graph,
                                 const DistributionRule& rule,
                                 const InconsistentCycleWitness& witness,
                                 int color_count = 3);

// Dispatch helpers taking a classification; they throw NoInconsistentCycle
// when the classification does not carry the witness kind they need.
ClusteringGame build_br_cycle_game(const Graph& graph,
                                   const DistributionRule& rule,
                                   const ShapleyClassification& classification,
                                   int color_count = 2);
ClusteringGame build_no_pne_game(const Graph& graph,
                                 const DistributionRule& rule,
                                 const ShapleyClassification& classification,
                                 int color_count = 3);

nlohmann::ordered_json classification_to_json(
    const ShapleyClassification& classification);

}  // namespace clugame
