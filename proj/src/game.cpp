#include "clugame/game.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "clugame/errors.hpp"

namespace clugame {

bool DistributionRule::positive() const {
  return std::all_of(shares.begin(), shares.end(), [](const auto& p) {
    return p.first > 0 && p.second > 0;
  });
}

bool DistributionRule::equal_split() const {
  return std::all_of(shares.begin(), shares.end(),
                     [](const auto& p) { return p.first == p.second; });
}

DistributionRule DistributionRule::make_equal_split(std::size_t edge_count) {
  DistributionRule rule;
  rule.shares.assign(edge_count, {Rat(1), Rat(1)});
  return rule;
}

std::optional<Rat> max_disparity(const DistributionRule& rule) {
  Rat best = 1;
  for (const auto& [a, b] : rule.shares) {
    if (a == 0 || b == 0) return std::nullopt;
    Rat ratio = a >= b ? Rat(a / b) : Rat(b / a);
    best = std::max(best, ratio);
  }
  return best;
}

int ClusteringGame::slot_of(int node, int color) const {
  const auto& set = strategy_sets[node];
  auto it = std::lower_bound(set.begin(), set.end(), color);
  if (it == set.end() || *it != color) return -1;
  return static_cast<int>(it - set.begin());
}

Rat ClusteringGame::preference(int node, int color) const {
  int slot = slot_of(node, color);
  return slot < 0 ? Rat(0) : preferences[node][slot];
}

Rat ClusteringGame::share_value(int edge_index, int node) const {
  const Edge& e = graph.edges[edge_index];
  const auto& [a_uv, a_vu] = rule.shares[edge_index];
  Rat total = a_uv + a_vu;
  return (node == e.u ? a_uv : a_vu) / total;
}

bool edge_satisfied(EdgeKind kind, int color_u, int color_v) {
  return kind == EdgeKind::coordination ? color_u == color_v
                                        : color_u != color_v;
}

ClusteringGame build_game(const GameInput& input) {
  if (input.color_count < 2) {
    throw Error(ErrorCode::ColorOutOfRange,
                "color count must be at least 2, got " +
                    std::to_string(input.color_count));
  }

  std::vector<Edge> edges;
  edges.reserve(input.edges.size());
  DistributionRule rule;
  rule.shares.reserve(input.edges.size());
  for (std::size_t i = 0; i < input.edges.size(); ++i) {
    const auto& e = input.edges[i];
    if (e.alpha_uv < 0 || e.alpha_vu < 0) {
      throw Error(ErrorCode::BadArguments,
                  "edge " + std::to_string(i) + ": negative share");
    }
    if (e.alpha_uv + e.alpha_vu == 0) {
      throw Error(ErrorCode::ZeroShareSum,
                  "edge " + std::to_string(i) + ": alpha_uv + alpha_vu = 0");
    }
    edges.push_back({e.u, e.v, e.kind, e.weight});
    rule.shares.emplace_back(e.alpha_uv, e.alpha_vu);
  }

  ClusteringGame game;
  game.graph = make_graph(input.node_count, std::move(edges),
                          input.planar_declared);
  game.color_count = input.color_count;
  game.rule = std::move(rule);
  game.meta = input.meta;

  const int n = input.node_count;
  const int c = input.color_count;
  if (input.strategy_sets) {
    if (static_cast<int>(input.strategy_sets->size()) != n) {
      throw Error(ErrorCode::BadArguments,
                  "strategy_sets must list one set per node");
    }
    game.strategy_sets = *input.strategy_sets;
    for (int i = 0; i < n; ++i) {
      auto& set = game.strategy_sets[i];
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      if (set.empty()) {
        throw Error(ErrorCode::EmptyStrategySet,
                    "node " + std::to_string(i) + ": empty strategy set");
      }
      if (set.front() < 1 || set.back() > c) {
        throw Error(ErrorCode::ColorOutOfRange,
                    "node " + std::to_string(i) +
                        ": strategy set color outside 1..c");
      }
    }
  } else {
    std::vector<int> full(c);
    std::iota(full.begin(), full.end(), 1);
    game.strategy_sets.assign(n, full);
  }

  game.preferences.resize(n);
  for (int i = 0; i < n; ++i) {
    game.preferences[i].assign(game.strategy_sets[i].size(), Rat(0));
  }
  if (input.preferences) {
    if (static_cast<int>(input.preferences->size()) != n) {
      throw Error(ErrorCode::BadArguments,
                  "preferences must list one map per node");
    }
    for (int i = 0; i < n; ++i) {
      for (const auto& [color, value] : (*input.preferences)[i]) {
        int slot = game.slot_of(i, color);
        if (slot < 0) {
          throw Error(ErrorCode::ColorOutOfRange,
                      "node " + std::to_string(i) + ": preference on color " +
                          std::to_string(color) +
                          " outside its strategy set");
        }
        if (value < 0) {
          throw Error(ErrorCode::BadArguments,
                      "node " + std::to_string(i) + ": negative preference");
        }
        game.preferences[i][slot] = value;
      }
    }
  }

  game.symmetric = std::all_of(
      game.strategy_sets.begin(), game.strategy_sets.end(),
      [c](const auto& set) { return static_cast<int>(set.size()) == c; });
  game.positive_rule = game.rule.positive();
  game.equal_split = game.rule.equal_split();

  bool has_anti = !game.graph.coordination_only();
  bool singleton = std::any_of(game.strategy_sets.begin(),
                               game.strategy_sets.end(),
                               [](const auto& s) { return s.size() == 1; });
  if (has_anti && singleton) {
    game.warnings.push_back(
        "some player has a single-color strategy set while the game has "
        "anti-coordination edges");
  }
  return game;
}

void validate_profile(const ClusteringGame& game, const StrategyProfile& s) {
  if (static_cast<int>(s.colors.size()) != game.player_count()) {
    throw Error(ErrorCode::InvalidProfile, "profile size mismatch");
  }
  for (int i = 0; i < game.player_count(); ++i) {
    if (game.slot_of(i, s.colors[i]) < 0) {
      throw Error(ErrorCode::InvalidProfile,
                  "node " + std::to_string(i) + ": color " +
                      std::to_string(s.colors[i]) +
                      " not in its strategy set");
    }
  }
}

Rat utility(const ClusteringGame& game, const StrategyProfile& s, int node) {
  validate_profile(game, s);
  Rat u = game.preference(node, s.colors[node]);
  for (const auto& [nb, ei] : game.graph.adjacency[node]) {
    const Edge& e = game.graph.edges[ei];
    if (edge_satisfied(e.kind, s.colors[node], s.colors[nb]) && e.weight > 0) {
      u += game.share_value(ei, node) * e.weight;
    }
  }
  return u;
}

Rat social_welfare(const ClusteringGame& game, const StrategyProfile& s) {
  validate_profile(game, s);
  Rat total = 0;
  for (int i = 0; i < game.player_count(); ++i) {
    total += game.preference(i, s.colors[i]);
  }
  for (std::size_t ei = 0; ei < game.graph.edges.size(); ++ei) {
    const Edge& e = game.graph.edges[ei];
    if (edge_satisfied(e.kind, s.colors[e.u], s.colors[e.v])) {
      total += e.weight;
    }
  }
  return total;
}

Rat min_equilibrium_welfare_bound(const ClusteringGame& game) {
  Rat total = 0;
  for (const auto& prefs : game.preferences) {
    total += *std::max_element(prefs.begin(), prefs.end());
  }
  return total;
}

Rat welfare_upper_bound(const ClusteringGame& game) {
  Rat total = min_equilibrium_welfare_bound(game);
  for (const Edge& e : game.graph.edges) total += e.weight;
  return total;
}

ClusteringGame scale_game(const ClusteringGame& game, const Rat& lambda) {
  if (lambda <= 0) {
    throw Error(ErrorCode::BadArguments, "scale factor must be positive");
  }
  ClusteringGame scaled = game;
  for (auto& e : scaled.graph.edges) e.weight *= lambda;
  for (auto& prefs : scaled.preferences) {
    for (auto& q : prefs) q *= lambda;
  }
  return scaled;
}

}  // namespace clugame
