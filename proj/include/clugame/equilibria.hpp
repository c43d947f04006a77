#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clugame/game.hpp"

namespace clugame {

struct EquilibriumParams {
  Rat eps = 1;  // >= 1
  int k = 1;    // coalition size bound, 1 <= k <= n
};

struct EnumLimits {
  std::uint64_t profile_cap = 10'000'000;  // max product of |S_i|
  int coalition_cap = 3;                   // max supported k
};

struct DeviationMember {
  int node = 0;
  int new_color = 0;
  Rat utility_before;
  Rat utility_after;
};

// A coalition of size <= k whose joint deviation strictly improves every
// member beyond factor eps. Refutes the (eps,k)-equilibrium property.
struct DeviationWitness {
  std::vector<DeviationMember> members;
};

// nullopt = the profile is an (eps,k)-equilibrium. Enumeration order is
// deterministic: coalition size ascending, node ids lexicographic, joint
// deviations lexicographic by color; the first violation wins.
std::optional<DeviationWitness> is_epsilon_k_equilibrium(
    const ClusteringGame& game, const StrategyProfile& s,
    const EquilibriumParams& params, const EnumLimits& limits = {});

// All (eps,k)-equilibria in lexicographic profile order.
std::vector<StrategyProfile> enumerate_equilibria(
    const ClusteringGame& game, const EquilibriumParams& params,
    const EnumLimits& limits = {});

// Exhaustive welfare maximizer; ties break to the lexicographically
// smallest profile.
std::pair<StrategyProfile, Rat> social_optimum(const ClusteringGame& game,
                                               const EnumLimits& limits = {});

struct PoaResult {
  enum class Kind { value, infinite, no_equilibrium };
  Kind kind = Kind::no_equilibrium;
  Rat value;  // meaningful only when kind == value
  std::optional<StrategyProfile> worst_equilibrium;
  Rat worst_welfare;
  StrategyProfile optimum;
  Rat optimum_welfare;
  std::uint64_t equilibrium_count = 0;
};

// max over (eps,k)-equilibria of u(s*)/u(s); infinite when some equilibrium
// has zero welfare and the optimum is positive; 1 when the optimum is zero.
PoaResult price_of_anarchy(const ClusteringGame& game,
                           const EquilibriumParams& params,
                           const EnumLimits& limits = {});

// argmax_{c in S_i} u_i(s_{ -i}, c); never empty, may contain s_i.
std::vector<int> best_responses(const ClusteringGame& game,
                                const StrategyProfile& s, int node);

enum class BrPolicy { round_robin, lowest_improving_id, seeded_random };

struct BrScheduler {
  BrPolicy policy = BrPolicy::round_robin;
  std::uint64_t seed = 0;
  int cursor = 0;  // round-robin position
};

// One strict best-response move of the scheduled player, or nullopt when no
// player can strictly improve (a player who is tied with her current color
// does not move).
std::optional<StrategyProfile> br_step(const ClusteringGame& game,
                                       const StrategyProfile& s,
                                       BrScheduler& scheduler);

struct BrDynamicsResult {
  bool converged = false;
  StrategyProfile final_profile;  // stable profile when converged
  std::uint64_t steps = 0;
  std::vector<StrategyProfile> cycle;  // closed sequence when not converged
};

BrDynamicsResult run_br_dynamics(const ClusteringGame& game,
                                 const StrategyProfile& start,
                                 BrScheduler scheduler,
                                 std::uint64_t max_steps = 1'000'000);

struct BrGraphResult {
  bool acyclic = false;
  // when cyclic: profiles p0, p1, ..., pm with pm == p0, consecutive ones
  // connected by strict best-response moves
  std::vector<StrategyProfile> cycle;
};

// DFS over the directed graph on all profiles whose edges are strict
// best-response moves.
BrGraphResult br_graph_acyclic(const ClusteringGame& game,
                               const EnumLimits& limits = {});

// Exact PoA without enumerating the profile space, for constructions that
// are verifiably tight: `s` must check as a (1,1)-equilibrium whose welfare
// equals the universal equilibrium-welfare floor (so no equilibrium is
// worse) and `s_star` must attain the welfare decomposition ceiling (so it
// is optimal). Returns nullopt when any certificate fails or the floor is
// zero.
std::optional<Rat> poa_from_certified_profiles(const ClusteringGame& game,
                                               const StrategyProfile& s,
                                               const StrategyProfile& s_star);

}  // namespace clugame
