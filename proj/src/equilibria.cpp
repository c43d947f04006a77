#include "clugame/equilibria.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>

#include "clugame/errors.hpp"
#include "clugame/rng.hpp"

namespace clugame {

namespace {

// The enumeration machinery runs on one of two exact kernels: an int64
// kernel where every payoff is pre-scaled by the common denominator of the
// game's shares and preferences (picked whenever the scaled values fit
// comfortably), and a cpp_rational kernel otherwise. Both are exact; the
// rational kernel doubles as the reference implementation the int kernel is
// equivalence-tested against.

struct RatEps {
  Rat eps;
  bool improves(const Rat& after, const Rat& before) const {
    return after > eps * before;
  }
};

struct IntEps {
  std::int64_t num = 1;
  std::int64_t den = 1;
  bool improves(std::int64_t after, std::int64_t before) const {
    return static_cast<__int128>(after) * den >
           static_cast<__int128>(before) * num;
  }
};

template <class V>
struct Kernel {
  using Value = V;

  int n = 0;
  int color_count = 0;
  const ClusteringGame* game = nullptr;
  Rat scale = 1;  // stored payoff = scale * true payoff

  struct KEdge {
    int u, v;
    bool coord;
    V share_u, share_v;  // payoff to each endpoint when satisfied
    V weight;            // welfare contribution when satisfied
  };
  std::vector<KEdge> edges;              // positive-weight edges only
  std::vector<std::vector<int>> incident;
  std::vector<std::vector<V>> pref;      // [player][slot]
  std::vector<std::vector<int>> slot_lookup;  // [player][color] -> slot|-1
  std::vector<V> ubound;                 // max pref + sum of incident shares

  const std::vector<int>& slots(int i) const {
    return game->strategy_sets[i];
  }
  int slot_count(int i) const {
    return static_cast<int>(game->strategy_sets[i].size());
  }
  int color_of(int i, int slot) const { return game->strategy_sets[i][slot]; }

  std::uint64_t profile_count_capped(std::uint64_t cap) const {
    std::uint64_t product = 1;
    for (int i = 0; i < n; ++i) {
      product *= static_cast<std::uint64_t>(slot_count(i));
      if (product > cap) return cap + 1;
    }
    return product;
  }
};

template <class V>
void init_kernel_shape(Kernel<V>& k, const ClusteringGame& game) {
  k.n = game.player_count();
  k.color_count = game.color_count;
  k.game = &game;
  k.incident.assign(k.n, {});
  k.slot_lookup.assign(k.n, std::vector<int>(game.color_count + 1, -1));
  for (int i = 0; i < k.n; ++i) {
    const auto& set = game.strategy_sets[i];
    for (int s = 0; s < static_cast<int>(set.size()); ++s) {
      k.slot_lookup[i][set[s]] = s;
    }
  }
}

Kernel<Rat> build_rat_kernel(const ClusteringGame& game) {
  Kernel<Rat> k;
  init_kernel_shape(k, game);
  k.pref = game.preferences;
  for (std::size_t ei = 0; ei < game.graph.edges.size(); ++ei) {
    const Edge& e = game.graph.edges[ei];
    if (e.weight == 0) continue;
    typename Kernel<Rat>::KEdge ke;
    ke.u = e.u;
    ke.v = e.v;
    ke.coord = e.kind == EdgeKind::coordination;
    ke.share_u = game.share_value(static_cast<int>(ei), e.u) * e.weight;
    ke.share_v = game.share_value(static_cast<int>(ei), e.v) * e.weight;
    ke.weight = e.weight;
    k.incident[e.u].push_back(static_cast<int>(k.edges.size()));
    k.incident[e.v].push_back(static_cast<int>(k.edges.size()));
    k.edges.push_back(std::move(ke));
  }
  k.ubound.assign(k.n, Rat(0));
  for (int i = 0; i < k.n; ++i) {
    Rat best = *std::max_element(k.pref[i].begin(), k.pref[i].end());
    for (int ei : k.incident[i]) {
      best += k.edges[ei].u == i ? k.edges[ei].share_u : k.edges[ei].share_v;
    }
    k.ubound[i] = best;
  }
  return k;
}

std::optional<Kernel<std::int64_t>> build_int_kernel(
    const ClusteringGame& game) {
  static const BigInt kScaleCap = BigInt(1) << 31;
  static const BigInt kValueCap = BigInt(1) << 59;

  std::vector<Rat> values;
  for (int i = 0; i < game.player_count(); ++i) {
    for (const Rat& q : game.preferences[i]) values.push_back(q);
  }
  for (std::size_t ei = 0; ei < game.graph.edges.size(); ++ei) {
    const Edge& e = game.graph.edges[ei];
    if (e.weight == 0) continue;
    values.push_back(game.share_value(static_cast<int>(ei), e.u) * e.weight);
    values.push_back(game.share_value(static_cast<int>(ei), e.v) * e.weight);
    values.push_back(e.weight);
  }
  BigInt scale = 1;
  for (const Rat& v : values) {
    scale = boost::multiprecision::lcm(scale, denominator(v));
    if (scale > kScaleCap) return std::nullopt;
  }
  // welfare is the largest sum the engine ever forms
  BigInt total = 0;
  for (const Rat& v : values) {
    total += numerator(v) * (scale / denominator(v));
  }
  if (total > kValueCap) return std::nullopt;

  auto scaled = [&](const Rat& v) -> std::int64_t {
    BigInt x = numerator(v) * (scale / denominator(v));
    return x.convert_to<std::int64_t>();
  };

  Kernel<std::int64_t> k;
  init_kernel_shape(k, game);
  k.scale = Rat(scale);
  k.pref.assign(k.n, {});
  for (int i = 0; i < k.n; ++i) {
    for (const Rat& q : game.preferences[i]) k.pref[i].push_back(scaled(q));
  }
  for (std::size_t ei = 0; ei < game.graph.edges.size(); ++ei) {
    const Edge& e = game.graph.edges[ei];
    if (e.weight == 0) continue;
    typename Kernel<std::int64_t>::KEdge ke;
    ke.u = e.u;
    ke.v = e.v;
    ke.coord = e.kind == EdgeKind::coordination;
    ke.share_u = scaled(game.share_value(static_cast<int>(ei), e.u) * e.weight);
    ke.share_v = scaled(game.share_value(static_cast<int>(ei), e.v) * e.weight);
    ke.weight = scaled(e.weight);
    k.incident[e.u].push_back(static_cast<int>(k.edges.size()));
    k.incident[e.v].push_back(static_cast<int>(k.edges.size()));
    k.edges.push_back(ke);
  }
  k.ubound.assign(k.n, 0);
  for (int i = 0; i < k.n; ++i) {
    std::int64_t best = *std::max_element(k.pref[i].begin(), k.pref[i].end());
    for (int ei : k.incident[i]) {
      best += k.edges[ei].u == i ? k.edges[ei].share_u : k.edges[ei].share_v;
    }
    k.ubound[i] = best;
  }
  return k;
}

bool kernel_satisfied(bool coord, int cu, int cv) {
  return coord ? cu == cv : cu != cv;
}

// Maintains, for the current profile, every player's single-deviation
// utility table: U[i][x] + offset[i] = u_i(s_{-i}, color x). Odometer steps
// update only the tables of the moved player's neighbors.
template <class V>
class ProfileEngine {
 public:
  explicit ProfileEngine(const Kernel<V>& kernel) : k_(kernel) {
    slot_.assign(k_.n, 0);
    U_.resize(k_.n);
    offset_.assign(k_.n, V{});
    reset_to(std::vector<int>(k_.n, 0));
  }

  void reset_to(const std::vector<int>& slots) {
    slot_ = slots;
    welfare_ = V{};
    for (int i = 0; i < k_.n; ++i) {
      U_[i] = k_.pref[i];
      offset_[i] = V{};
      welfare_ += k_.pref[i][slot_[i]];
    }
    for (const auto& e : k_.edges) {
      int cu = color_of(e.u);
      int cv = color_of(e.v);
      if (kernel_satisfied(e.coord, cu, cv)) welfare_ += e.weight;
      apply_neighbor_color(e.u, e, cv, +1);
      apply_neighbor_color(e.v, e, cu, +1);
    }
  }

  // lexicographic odometer over slot vectors; node 0 is most significant
  bool advance() {
    int i = k_.n - 1;
    while (i >= 0 && slot_[i] == k_.slot_count(i) - 1) {
      set_slot(i, 0);
      --i;
    }
    if (i < 0) return false;
    set_slot(i, slot_[i] + 1);
    return true;
  }

  void set_slot(int i, int new_slot) {
    int old_slot = slot_[i];
    if (old_slot == new_slot) return;
    int oc = k_.color_of(i, old_slot);
    int nc = k_.color_of(i, new_slot);
    welfare_ += k_.pref[i][new_slot] - k_.pref[i][old_slot];
    for (int ei : k_.incident[i]) {
      const auto& e = k_.edges[ei];
      int nb = e.u == i ? e.v : e.u;
      int c_nb = color_of(nb);
      bool was = kernel_satisfied(e.coord, oc, c_nb);
      bool now = kernel_satisfied(e.coord, nc, c_nb);
      if (was != now) {
        if (now) {
          welfare_ += e.weight;
        } else {
          welfare_ -= e.weight;
        }
      }
      apply_neighbor_color(nb, e, oc, -1);
      apply_neighbor_color(nb, e, nc, +1);
    }
    slot_[i] = new_slot;
  }

  int color_of(int i) const { return k_.color_of(i, slot_[i]); }
  const std::vector<int>& slots() const { return slot_; }
  int current_slot(int i) const { return slot_[i]; }
  const V& welfare() const { return welfare_; }

  V deviation_utility(int i, int slot) const {
    return U_[i][slot] + offset_[i];
  }
  V utility(int i) const { return deviation_utility(i, slot_[i]); }

  const Kernel<V>& kernel() const { return k_; }

 private:
  // contribution of a neighbor playing color c to player i's table
  void apply_neighbor_color(int i, const typename Kernel<V>::KEdge& e, int c,
                            int sign) {
    const V& share = e.u == i ? e.share_u : e.share_v;
    int slot = k_.slot_lookup[i][c];
    if (e.coord) {
      if (slot >= 0) {
        if (sign > 0) {
          U_[i][slot] += share;
        } else {
          U_[i][slot] -= share;
        }
      }
    } else {
      if (sign > 0) {
        offset_[i] += share;
        if (slot >= 0) U_[i][slot] -= share;
      } else {
        offset_[i] -= share;
        if (slot >= 0) U_[i][slot] += share;
      }
    }
  }

  const Kernel<V>& k_;
  std::vector<int> slot_;
  std::vector<std::vector<V>> U_;
  std::vector<V> offset_;
  V welfare_{};
};

struct RawWitness {
  std::vector<int> nodes;
  std::vector<int> new_slots;
};

// Utility of coalition member `node` when the coalition jointly moves to
// `new_slots` (parallel to `coalition`); everyone else keeps her color.
template <class V>
V coalition_utility(const ProfileEngine<V>& eng, const std::vector<int>& coalition,
                    const std::vector<int>& new_slots, int node,
                    int node_slot) {
  const Kernel<V>& k = eng.kernel();
  V u = k.pref[node][node_slot];
  int my_color = k.color_of(node, node_slot);
  for (int ei : k.incident[node]) {
    const auto& e = k.edges[ei];
    int nb = e.u == node ? e.v : e.u;
    int nb_color;
    auto it = std::find(coalition.begin(), coalition.end(), nb);
    if (it != coalition.end()) {
      nb_color = k.color_of(nb, new_slots[it - coalition.begin()]);
    } else {
      nb_color = k.color_of(nb, eng.current_slot(nb));
    }
    if (kernel_satisfied(e.coord, my_color, nb_color)) {
      u += e.u == node ? e.share_u : e.share_v;
    }
  }
  return u;
}

// First violating coalition of size exactly `size` drawn from `candidates`,
// in lexicographic (nodes, then joint colors) order.
template <class V, class Eps>
bool find_violation_of_size(const ProfileEngine<V>& eng, const Eps& eps,
                            const std::vector<int>& candidates, int size,
                            RawWitness* witness) {
  const Kernel<V>& k = eng.kernel();

  auto violates = [&](const std::vector<int>& coalition,
                      std::vector<int>& out_devs) -> bool {
    // a member with no coalition-internal edge would need a plain improving
    // single deviation, which the size-1 pass already ruled out
    for (std::size_t m = 0; m < coalition.size(); ++m) {
      bool touches = false;
      for (int ei : k.incident[coalition[m]]) {
        const auto& e = k.edges[ei];
        int nb = e.u == coalition[m] ? e.v : e.u;
        if (std::find(coalition.begin(), coalition.end(), nb) !=
            coalition.end()) {
          touches = true;
          break;
        }
      }
      if (!touches) return false;
    }
    std::vector<int> dev(coalition.size(), 0);
    // start at first non-current slot per member
    for (std::size_t m = 0; m < coalition.size(); ++m) {
      dev[m] = eng.current_slot(coalition[m]) == 0 ? 1 : 0;
      if (dev[m] >= k.slot_count(coalition[m])) return false;  // |S_i| == 1
    }
    while (true) {
      bool all_improve = true;
      for (std::size_t m = 0; m < coalition.size() && all_improve; ++m) {
        V after =
            coalition_utility(eng, coalition, dev, coalition[m], dev[m]);
        all_improve = eps.improves(after, eng.utility(coalition[m]));
      }
      if (all_improve) {
        out_devs = dev;
        return true;
      }
      // advance: last member fastest, skipping current slots
      int m = static_cast<int>(coalition.size()) - 1;
      while (m >= 0) {
        int node = coalition[m];
        int s = dev[m] + 1;
        if (s == eng.current_slot(node)) ++s;
        if (s < k.slot_count(node)) {
          dev[m] = s;
          break;
        }
        dev[m] = eng.current_slot(node) == 0 ? 1 : 0;
        --m;
      }
      if (m < 0) return false;
    }
  };

  auto next_combination = [&](std::vector<int>& idx) -> bool {
    int m = size - 1;
    int limit = static_cast<int>(candidates.size());
    while (m >= 0 && idx[m] == limit - (size - m)) --m;
    if (m < 0) return false;
    ++idx[m];
    for (int j = m + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  };

  if (static_cast<int>(candidates.size()) < size) return false;
  std::vector<int> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  do {
    std::vector<int> coalition(size);
    for (int m = 0; m < size; ++m) coalition[m] = candidates[idx[m]];
    std::vector<int> dev;
    if (violates(coalition, dev)) {
      if (witness) {
        witness->nodes = coalition;
        witness->new_slots = dev;
      }
      return true;
    }
  } while (next_combination(idx));
  return false;
}

// Full (eps,k) check for the engine's current profile. Returns true when the
// profile is an equilibrium; otherwise false, with the first witness when
// requested.
template <class V, class Eps>
bool check_equilibrium(const ProfileEngine<V>& eng, const Eps& eps, int k,
                       RawWitness* witness) {
  const Kernel<V>& kern = eng.kernel();
  const int n = kern.n;

  // size-1 coalitions
  for (int i = 0; i < n; ++i) {
    V u = eng.utility(i);
    for (int s = 0; s < kern.slot_count(i); ++s) {
      if (s == eng.current_slot(i)) continue;
      if (eps.improves(eng.deviation_utility(i, s), u)) {
        if (witness) {
          witness->nodes = {i};
          witness->new_slots = {s};
        }
        return false;
      }
    }
  }
  if (k < 2) return true;

  // only players that could possibly improve can join a violating coalition
  std::vector<int> candidates;
  for (int i = 0; i < n; ++i) {
    if (eps.improves(kern.ubound[i], eng.utility(i))) candidates.push_back(i);
  }
  if (candidates.size() < 2) return true;

  // Size-2 coalitions: once no single player can improve, a pair without a
  // shared edge cannot either (its joint utilities are exactly the
  // single-deviation tables), so only adjacent pairs need the product scan.
  for (std::size_t a = 0; a + 1 < candidates.size(); ++a) {
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      int i = candidates[a];
      int j = candidates[b];
      int shared = -1;
      for (int ei : kern.incident[i]) {
        const auto& e = kern.edges[ei];
        if (e.u == j || e.v == j) {
          shared = ei;
          break;
        }
      }
      if (shared < 0) continue;
      const auto& e = kern.edges[shared];
      const V& share_i = e.u == i ? e.share_u : e.share_v;
      const V& share_j = e.u == j ? e.share_u : e.share_v;
      V u_i = eng.utility(i);
      V u_j = eng.utility(j);
      int ci = eng.color_of(i);
      int cj = eng.color_of(j);
      for (int x = 0; x < kern.slot_count(i); ++x) {
        if (x == eng.current_slot(i)) continue;
        int cx = kern.color_of(i, x);
        for (int y = 0; y < kern.slot_count(j); ++y) {
          if (y == eng.current_slot(j)) continue;
          int cy = kern.color_of(j, y);
          V after_i = eng.deviation_utility(i, x);
          bool was_i = kernel_satisfied(e.coord, cx, cj);
          bool now = kernel_satisfied(e.coord, cx, cy);
          if (was_i != now) {
            if (now) {
              after_i += share_i;
            } else {
              after_i -= share_i;
            }
          }
          if (!eps.improves(after_i, u_i)) continue;
          V after_j = eng.deviation_utility(j, y);
          bool was_j = kernel_satisfied(e.coord, ci, cy);
          if (was_j != now) {
            if (now) {
              after_j += share_j;
            } else {
              after_j -= share_j;
            }
          }
          if (eps.improves(after_j, u_j)) {
            if (witness) {
              witness->nodes = {i, j};
              witness->new_slots = {x, y};
            }
            return false;
          }
        }
      }
    }
  }

  for (int size = 3; size <= k; ++size) {
    if (find_violation_of_size(eng, eps, candidates, size, witness)) {
      return false;
    }
  }
  return true;
}

RatEps make_rat_eps(const EquilibriumParams& params) {
  return RatEps{params.eps};
}

std::optional<IntEps> make_int_eps(const EquilibriumParams& params) {
  auto num = to_int64(numerator(params.eps));
  auto den = to_int64(denominator(params.eps));
  if (!num || !den) return std::nullopt;
  return IntEps{*num, *den};
}

void check_params(const ClusteringGame& game, const EquilibriumParams& params,
                  const EnumLimits& limits) {
  if (params.eps < 1) {
    throw Error(ErrorCode::BadArguments, "eps must be at least 1");
  }
  if (params.k < 1 || params.k > game.player_count()) {
    throw Error(ErrorCode::BadArguments, "k must lie in [1, n]");
  }
  if (params.k > limits.coalition_cap) {
    throw Error(ErrorCode::CoalitionCapExceeded,
                "coalition size " + std::to_string(params.k) +
                    " exceeds the cap " +
                    std::to_string(limits.coalition_cap));
  }
}

template <class V>
std::vector<int> profile_to_slots(const Kernel<V>& k,
                                  const StrategyProfile& s) {
  std::vector<int> slots(k.n);
  for (int i = 0; i < k.n; ++i) {
    slots[i] = k.slot_lookup[i][s.colors[i]];
  }
  return slots;
}

template <class V>
StrategyProfile slots_to_profile(const Kernel<V>& k,
                                 const std::vector<int>& slots) {
  StrategyProfile s;
  s.colors.resize(k.n);
  for (int i = 0; i < k.n; ++i) s.colors[i] = k.color_of(i, slots[i]);
  return s;
}

template <class V>
Rat unscale(const Kernel<V>& k, const V& value) {
  if constexpr (std::is_same_v<V, Rat>) {
    return value;
  } else {
    return Rat(BigInt(value)) / k.scale;
  }
}

template <class V, class Eps>
std::optional<DeviationWitness> run_single_check(
    const Kernel<V>& kern, const Eps& eps, const StrategyProfile& s, int k) {
  ProfileEngine<V> eng(kern);
  eng.reset_to(profile_to_slots(kern, s));
  RawWitness raw;
  if (check_equilibrium(eng, eps, k, &raw)) return std::nullopt;

  DeviationWitness witness;
  std::vector<int> dev_slots = raw.new_slots;
  for (std::size_t m = 0; m < raw.nodes.size(); ++m) {
    DeviationMember member;
    member.node = raw.nodes[m];
    member.new_color = kern.color_of(raw.nodes[m], dev_slots[m]);
    member.utility_before = unscale(kern, eng.utility(raw.nodes[m]));
    member.utility_after = unscale(
        kern, coalition_utility(eng, raw.nodes, dev_slots, raw.nodes[m],
                                dev_slots[m]));
    witness.members.push_back(std::move(member));
  }
  return witness;
}

template <class V>
void ensure_within_cap(const Kernel<V>& kern, const EnumLimits& limits) {
  if (kern.profile_count_capped(limits.profile_cap) > limits.profile_cap) {
    throw Error(ErrorCode::SearchSpaceExceeded,
                "profile space exceeds cap of " +
                    std::to_string(limits.profile_cap));
  }
}

template <class V, class Eps>
std::vector<StrategyProfile> run_enumeration(const Kernel<V>& kern,
                                             const Eps& eps, int k,
                                             const EnumLimits& limits) {
  ensure_within_cap(kern, limits);
  std::vector<StrategyProfile> out;
  ProfileEngine<V> eng(kern);
  eng.reset_to(std::vector<int>(kern.n, 0));
  do {
    if (check_equilibrium(eng, eps, k, nullptr)) {
      out.push_back(slots_to_profile(kern, eng.slots()));
    }
  } while (eng.advance());
  return out;
}

template <class V>
std::pair<StrategyProfile, Rat> run_optimum(const Kernel<V>& kern,
                                            const EnumLimits& limits) {
  ensure_within_cap(kern, limits);
  ProfileEngine<V> eng(kern);
  eng.reset_to(std::vector<int>(kern.n, 0));
  V best = eng.welfare();
  std::vector<int> best_slots = eng.slots();
  while (eng.advance()) {
    if (eng.welfare() > best) {
      best = eng.welfare();
      best_slots = eng.slots();
    }
  }
  return {slots_to_profile(kern, best_slots), unscale(kern, best)};
}

template <class V, class Eps>
PoaResult run_poa(const Kernel<V>& kern, const Eps& eps, int k,
                  const EnumLimits& limits) {
  ensure_within_cap(kern, limits);
  ProfileEngine<V> eng(kern);
  eng.reset_to(std::vector<int>(kern.n, 0));

  bool have_eq = false;
  V worst{};
  std::vector<int> worst_slots;
  V best = eng.welfare();
  std::vector<int> best_slots = eng.slots();
  std::uint64_t count = 0;

  bool more = true;
  while (more) {
    if (eng.welfare() > best) {
      best = eng.welfare();
      best_slots = eng.slots();
    }
    if (check_equilibrium(eng, eps, k, nullptr)) {
      ++count;
      if (!have_eq || eng.welfare() < worst) {
        have_eq = true;
        worst = eng.welfare();
        worst_slots = eng.slots();
      }
    }
    more = eng.advance();
  }

  PoaResult result;
  result.optimum = slots_to_profile(kern, best_slots);
  result.optimum_welfare = unscale(kern, best);
  result.equilibrium_count = count;
  if (!have_eq) {
    result.kind = PoaResult::Kind::no_equilibrium;
    return result;
  }
  result.worst_equilibrium = slots_to_profile(kern, worst_slots);
  result.worst_welfare = unscale(kern, worst);
  if (result.optimum_welfare == 0) {
    // degenerate 0/0 game: call it 1
    result.kind = PoaResult::Kind::value;
    result.value = 1;
  } else if (result.worst_welfare == 0) {
    result.kind = PoaResult::Kind::infinite;
  } else {
    result.kind = PoaResult::Kind::value;
    result.value = result.optimum_welfare / result.worst_welfare;
  }
  return result;
}

}  // namespace

std::optional<DeviationWitness> is_epsilon_k_equilibrium(
    const ClusteringGame& game, const StrategyProfile& s,
    const EquilibriumParams& params, const EnumLimits& limits) {
  check_params(game, params, limits);
  validate_profile(game, s);
  auto int_eps = make_int_eps(params);
  if (int_eps) {
    if (auto kern = build_int_kernel(game)) {
      return run_single_check(*kern, *int_eps, s, params.k);
    }
  }
  Kernel<Rat> kern = build_rat_kernel(game);
  return run_single_check(kern, make_rat_eps(params), s, params.k);
}

std::vector<StrategyProfile> enumerate_equilibria(const ClusteringGame& game,
                                                  const EquilibriumParams& params,
                                                  const EnumLimits& limits) {
  check_params(game, params, limits);
  auto int_eps = make_int_eps(params);
  if (int_eps) {
    if (auto kern = build_int_kernel(game)) {
      return run_enumeration(*kern, *int_eps, params.k, limits);
    }
  }
  return run_enumeration(build_rat_kernel(game), make_rat_eps(params),
                         params.k, limits);
}

std::pair<StrategyProfile, Rat> social_optimum(const ClusteringGame& game,
                                               const EnumLimits& limits) {
  if (auto kern = build_int_kernel(game)) {
    return run_optimum(*kern, limits);
  }
  return run_optimum(build_rat_kernel(game), limits);
}

PoaResult price_of_anarchy(const ClusteringGame& game,
                           const EquilibriumParams& params,
                           const EnumLimits& limits) {
  check_params(game, params, limits);
  auto int_eps = make_int_eps(params);
  if (int_eps) {
    if (auto kern = build_int_kernel(game)) {
      return run_poa(*kern, *int_eps, params.k, limits);
    }
  }
  return run_poa(build_rat_kernel(game), make_rat_eps(params), params.k,
                 limits);
}

std::optional<Rat> poa_from_certified_profiles(const ClusteringGame& game,
                                               const StrategyProfile& s,
                                               const StrategyProfile& s_star) {
  validate_profile(game, s);
  validate_profile(game, s_star);
  if (is_epsilon_k_equilibrium(game, s, {Rat(1), 1})) return std::nullopt;
  Rat worst = social_welfare(game, s);
  if (worst == 0 || worst != min_equilibrium_welfare_bound(game)) {
    return std::nullopt;
  }
  Rat best = social_welfare(game, s_star);
  if (best != welfare_upper_bound(game)) return std::nullopt;
  return Rat(best / worst);
}

namespace {

// best responses / dynamics use the rational kernel directly: steps are few
// and the constructed convergence counterexamples need arbitrary precision
std::vector<int> best_response_slots(const Kernel<Rat>& kern,
                                     ProfileEngine<Rat>& eng, int i) {
  Rat best = eng.deviation_utility(i, 0);
  for (int s = 1; s < kern.slot_count(i); ++s) {
    best = std::max(best, eng.deviation_utility(i, s));
  }
  std::vector<int> argmax;
  for (int s = 0; s < kern.slot_count(i); ++s) {
    if (eng.deviation_utility(i, s) == best) argmax.push_back(s);
  }
  return argmax;
}

bool has_strict_move(const Kernel<Rat>& kern, ProfileEngine<Rat>& eng, int i,
                     int* move_slot) {
  Rat u = eng.utility(i);
  Rat best = u;
  int slot = -1;
  for (int s = 0; s < kern.slot_count(i); ++s) {
    if (eng.deviation_utility(i, s) > best) {
      best = eng.deviation_utility(i, s);
      slot = s;
    }
  }
  if (slot < 0) return false;
  if (move_slot) *move_slot = slot;
  return true;
}

}  // namespace

std::vector<int> best_responses(const ClusteringGame& game,
                                const StrategyProfile& s, int node) {
  validate_profile(game, s);
  Kernel<Rat> kern = build_rat_kernel(game);
  ProfileEngine<Rat> eng(kern);
  eng.reset_to(profile_to_slots(kern, s));
  std::vector<int> colors;
  for (int slot : best_response_slots(kern, eng, node)) {
    colors.push_back(kern.color_of(node, slot));
  }
  return colors;
}

std::optional<StrategyProfile> br_step(const ClusteringGame& game,
                                       const StrategyProfile& s,
                                       BrScheduler& scheduler) {
  validate_profile(game, s);
  Kernel<Rat> kern = build_rat_kernel(game);
  ProfileEngine<Rat> eng(kern);
  eng.reset_to(profile_to_slots(kern, s));
  const int n = kern.n;

  auto move_to = [&](int player, int slot) {
    StrategyProfile next = s;
    next.colors[player] = kern.color_of(player, slot);
    return next;
  };

  switch (scheduler.policy) {
    case BrPolicy::round_robin: {
      for (int step = 0; step < n; ++step) {
        int i = (scheduler.cursor + step) % n;
        int slot;
        if (has_strict_move(kern, eng, i, &slot)) {
          scheduler.cursor = (i + 1) % n;
          return move_to(i, slot);
        }
      }
      return std::nullopt;
    }
    case BrPolicy::lowest_improving_id: {
      for (int i = 0; i < n; ++i) {
        int slot;
        if (has_strict_move(kern, eng, i, &slot)) return move_to(i, slot);
      }
      return std::nullopt;
    }
    case BrPolicy::seeded_random: {
      std::vector<std::pair<int, int>> movers;
      for (int i = 0; i < n; ++i) {
        int slot;
        if (has_strict_move(kern, eng, i, &slot)) movers.emplace_back(i, slot);
      }
      if (movers.empty()) return std::nullopt;
      Rng rng(scheduler.seed);
      auto [i, slot] = movers[rng.below(movers.size())];
      scheduler.seed = rng.next();
      return move_to(i, slot);
    }
  }
  return std::nullopt;
}

BrDynamicsResult run_br_dynamics(const ClusteringGame& game,
                                 const StrategyProfile& start,
                                 BrScheduler scheduler,
                                 std::uint64_t max_steps) {
  BrDynamicsResult result;
  std::vector<StrategyProfile> history = {start};
  std::map<std::vector<int>, std::size_t> seen;
  seen[start.colors] = 0;

  StrategyProfile current = start;
  for (std::uint64_t step = 0; step < max_steps; ++step) {
    auto next = br_step(game, current, scheduler);
    if (!next) {
      result.converged = true;
      result.final_profile = current;
      result.steps = step;
      return result;
    }
    current = *next;
    auto it = seen.find(current.colors);
    if (it != seen.end()) {
      result.converged = false;
      result.steps = history.size();
      result.cycle.assign(history.begin() + it->second, history.end());
      result.cycle.push_back(current);
      return result;
    }
    seen[current.colors] = history.size();
    history.push_back(current);
  }
  throw Error(ErrorCode::SearchSpaceExceeded,
              "best-response dynamics did not settle within the step budget");
}

BrGraphResult br_graph_acyclic(const ClusteringGame& game,
                               const EnumLimits& limits) {
  Kernel<Rat> kern = build_rat_kernel(game);
  std::uint64_t total = kern.profile_count_capped(limits.profile_cap);
  if (total > limits.profile_cap) {
    throw Error(ErrorCode::SearchSpaceExceeded,
                "profile space exceeds cap of " +
                    std::to_string(limits.profile_cap));
  }

  std::vector<std::uint64_t> stride(kern.n);
  std::uint64_t acc = 1;
  for (int i = kern.n - 1; i >= 0; --i) {
    stride[i] = acc;
    acc *= static_cast<std::uint64_t>(kern.slot_count(i));
  }
  auto slots_of = [&](std::uint64_t rank) {
    std::vector<int> slots(kern.n);
    for (int i = 0; i < kern.n; ++i) {
      slots[i] = static_cast<int>(rank / stride[i]);
      rank %= stride[i];
    }
    return slots;
  };

  ProfileEngine<Rat> eng(kern);
  auto successors = [&](std::uint64_t rank) {
    std::vector<std::uint64_t> out;
    std::vector<int> slots = slots_of(rank);
    eng.reset_to(slots);
    for (int i = 0; i < kern.n; ++i) {
      Rat u = eng.utility(i);
      std::vector<int> arg = best_response_slots(kern, eng, i);
      if (eng.deviation_utility(i, arg.front()) > u) {
        for (int s : arg) {
          out.push_back(rank - stride[i] * static_cast<std::uint64_t>(slots[i]) +
                        stride[i] * static_cast<std::uint64_t>(s));
        }
      }
    }
    return out;
  };

  // iterative DFS, tri-color
  std::vector<std::uint8_t> color(total, 0);
  struct Frame {
    std::uint64_t rank;
    std::vector<std::uint64_t> succ;
    std::size_t next = 0;
  };
  for (std::uint64_t start = 0; start < total; ++start) {
    if (color[start] != 0) continue;
    std::vector<Frame> stack;
    stack.push_back({start, successors(start)});
    color[start] = 1;
    while (!stack.empty()) {
      Frame& frame = stack.back();
      if (frame.next == frame.succ.size()) {
        color[frame.rank] = 2;
        stack.pop_back();
        continue;
      }
      std::uint64_t to = frame.succ[frame.next++];
      if (color[to] == 1) {
        // found a directed cycle: slice the stack from `to`
        BrGraphResult result;
        result.acyclic = false;
        std::size_t begin = 0;
        for (std::size_t i = 0; i < stack.size(); ++i) {
          if (stack[i].rank == to) {
            begin = i;
            break;
          }
        }
        for (std::size_t i = begin; i < stack.size(); ++i) {
          result.cycle.push_back(slots_to_profile(kern, slots_of(stack[i].rank)));
        }
        result.cycle.push_back(slots_to_profile(kern, slots_of(to)));
        return result;
      }
      if (color[to] == 0) {
        color[to] = 1;
        stack.push_back({to, successors(to)});
      }
    }
  }
  BrGraphResult result;
  result.acyclic = true;
  return result;
}

}  // namespace clugame
