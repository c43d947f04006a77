#include "clugame/generators.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "clugame/errors.hpp"
#include "clugame/rng.hpp"
#include "clugame/topology.hpp"

namespace clugame {

namespace {

void check_probability(const Rat& p) {
  if (p < 0 || p > 1) {
    throw Error(ErrorCode::BadArguments, "probability must lie in [0,1]");
  }
}

GameInput skeleton(int n, int colors, const std::vector<Edge>& edges,
                   const std::vector<std::pair<Rat, Rat>>& shares) {
  GameInput input;
  input.node_count = n;
  input.color_count = colors;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    GameInput::EdgeInput e;
    e.u = edges[i].u;
    e.v = edges[i].v;
    e.kind = edges[i].kind;
    e.weight = edges[i].weight;
    e.alpha_uv = shares[i].first;
    e.alpha_vu = shares[i].second;
    input.edges.push_back(std::move(e));
  }
  return input;
}

}  // namespace

Graph gen_gnp(const GnpParams& params, EdgeKind kind, const Rat& weight) {
  check_probability(params.p);
  Rng rng(params.seed);
  std::vector<Edge> edges;
  // hoist the rational out of the pair loop: include iff below(den) < num
  auto num = to_int64(numerator(params.p));
  auto den = to_int64(denominator(params.p));
  if (!num || !den) {
    throw Error(ErrorCode::BadArguments, "probability denominator too large");
  }
  const auto threshold = static_cast<std::uint64_t>(*num);
  const auto modulus = static_cast<std::uint64_t>(*den);
  for (int u = 0; u < params.n; ++u) {
    for (int v = u + 1; v < params.n; ++v) {
      if (threshold == 0) continue;
      if (threshold >= modulus || rng.below(modulus) < threshold) {
        edges.push_back({u, v, kind, weight});
      }
    }
  }
  return make_graph(params.n, std::move(edges));
}

Graph gen_gnp_fast(const GnpParams& params, EdgeKind kind, const Rat& weight) {
  check_probability(params.p);
  const double p = to_double(params.p);
  std::vector<Edge> edges;
  if (params.p == 1) {
    for (int u = 0; u < params.n; ++u) {
      for (int v = u + 1; v < params.n; ++v) {
        edges.push_back({u, v, kind, weight});
      }
    }
    return make_graph(params.n, std::move(edges));
  }
  if (params.p > 0 && params.n > 1) {
    Rng rng(params.seed);
    const double log_q = std::log1p(-p);
    const std::uint64_t total = static_cast<std::uint64_t>(params.n) *
                                (params.n - 1) / 2;
    std::uint64_t cursor = 0;
    std::uint64_t row_start = 0;  // linear index of pair (u, u+1)
    int u = 0;
    while (cursor < total) {
      double unit = rng.unit_double();
      double skip = std::floor(std::log1p(-unit) / log_q);
      if (!(skip < static_cast<double>(total - cursor))) break;
      cursor += static_cast<std::uint64_t>(skip);
      while (cursor >=
             row_start + static_cast<std::uint64_t>(params.n - 1 - u)) {
        row_start += static_cast<std::uint64_t>(params.n - 1 - u);
        ++u;
      }
      int v = u + 1 + static_cast<int>(cursor - row_start);
      edges.push_back({u, v, kind, weight});
      ++cursor;
    }
  }
  return make_graph(params.n, std::move(edges));
}

ConstructedInstance bipartite_tightness_instance(int l, int r,
                                                 const Rat& gamma_l,
                                                 const Rat& gamma_r) {
  if (l < 1 || r < 1 || gamma_l <= 0 || gamma_r <= 0) {
    throw Error(ErrorCode::BadArguments,
                "need l, r >= 1 and positive gamma weights");
  }
  const int n = l + r;
  const int common = l + r + 1;  // color c_0
  GameInput input;
  input.node_count = n;
  input.color_count = common;
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < r; ++j) {
      GameInput::EdgeInput e;
      e.u = i;
      e.v = l + j;
      e.kind = EdgeKind::coordination;
      e.weight = 1;
      e.alpha_uv = gamma_l;
      e.alpha_vu = gamma_r;
      input.edges.push_back(std::move(e));
    }
  }
  Rat left_pref = gamma_l / (gamma_l + gamma_r);
  Rat right_pref = gamma_r / (gamma_l + gamma_r);
  std::vector<std::map<int, Rat>> prefs(n);
  for (int i = 0; i < l; ++i) {
    prefs[i][1 + i] = left_pref;       // own color a_i
    prefs[i][common] = left_pref;
  }
  for (int j = 0; j < r; ++j) {
    prefs[l + j][1 + l + j] = right_pref;  // own color b_j
    prefs[l + j][common] = right_pref;
  }
  input.preferences = std::move(prefs);
  input.meta["construction"] = "bipartite-tightness";
  input.meta["l"] = l;
  input.meta["r"] = r;

  ConstructedInstance out{build_game(input), {}, {}};
  out.equilibrium.colors.resize(n);
  for (int i = 0; i < l; ++i) out.equilibrium.colors[i] = 1 + i;
  for (int j = 0; j < r; ++j) out.equilibrium.colors[l + j] = 1 + l + j;
  StrategyProfile opt;
  opt.colors.assign(n, common);
  out.optimum = std::move(opt);
  return out;
}

ConstructedInstance density_lb_instance(const Graph& graph,
                                        const std::vector<int>& subset) {
  if (subset.empty()) {
    throw Error(ErrorCode::BadArguments, "subset must be nonempty");
  }
  std::vector<int> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int v : sorted) {
    if (v < 0 || v >= graph.node_count) {
      throw Error(ErrorCode::BadArguments, "subset node out of range");
    }
  }
  std::vector<int> rank(graph.node_count, -1);
  for (std::size_t i = 0; i < sorted.size(); ++i) rank[sorted[i]] = static_cast<int>(i);

  const int colors = static_cast<int>(sorted.size()) + 1;  // c_0 = 1
  GameInput input;
  input.node_count = graph.node_count;
  input.color_count = colors;
  for (const Edge& e : graph.edges) {
    GameInput::EdgeInput ge;
    ge.u = e.u;
    ge.v = e.v;
    ge.kind = EdgeKind::coordination;
    ge.weight = (rank[e.u] >= 0 && rank[e.v] >= 0) ? Rat(2) : Rat(0);
    input.edges.push_back(std::move(ge));
  }
  std::vector<std::map<int, Rat>> prefs(graph.node_count);
  for (int v : sorted) {
    prefs[v][1] = 1;            // common color c_0
    prefs[v][2 + rank[v]] = 1;  // own color c_v
  }
  input.preferences = std::move(prefs);
  input.meta["construction"] = "density-lb";
  input.meta["subset"] = sorted;

  ConstructedInstance out{build_game(input), {}, {}};
  out.equilibrium.colors.assign(graph.node_count, 1);
  for (int v : sorted) out.equilibrium.colors[v] = 2 + rank[v];
  StrategyProfile opt;
  opt.colors.assign(graph.node_count, 1);
  out.optimum = std::move(opt);
  return out;
}

ConstructedInstance matching_lb_instance(const Graph& graph,
                                         int color_count) {
  if (color_count < 2) {
    throw Error(ErrorCode::BadArguments, "need at least 2 colors");
  }
  if (graph.edges.empty()) {
    throw Error(ErrorCode::MatchingEmpty, "graph has no edges");
  }

  auto block_matching = [&](int block) {
    std::vector<Edge> inside;
    for (const Edge& e : graph.edges) {
      if (e.u < block && e.v < block) inside.push_back(e);
    }
    Graph sub = make_graph(std::max(block, 1), std::move(inside));
    return maximum_matching(sub).edges;
  };

  // densest available block: the leading min(n, 2c) nodes can host a
  // matching of size c; fall back to the whole graph when the block has no
  // edges
  int block = std::min(graph.node_count, 2 * color_count);
  auto matched = block_matching(block);
  if (matched.empty()) matched = maximum_matching(graph).edges;
  if (matched.empty()) {
    throw Error(ErrorCode::MatchingEmpty, "no matching found");
  }
  std::sort(matched.begin(), matched.end());
  int q = std::min<int>(static_cast<int>(matched.size()), color_count);
  matched.resize(q);

  std::vector<int> pair_color(graph.node_count, 0);  // 0 = unmatched
  for (int i = 0; i < q; ++i) {
    pair_color[matched[i].first] = i + 1;
    pair_color[matched[i].second] = i + 1;
  }

  GameInput input;
  input.node_count = graph.node_count;
  input.color_count = color_count;
  for (const Edge& e : graph.edges) {
    GameInput::EdgeInput ge;
    ge.u = e.u;
    ge.v = e.v;
    ge.kind = EdgeKind::coordination;
    bool u_matched = pair_color[e.u] > 0;
    bool v_matched = pair_color[e.v] > 0;
    if (u_matched && v_matched) {
      ge.weight = pair_color[e.u] == pair_color[e.v] ? Rat(2) : Rat(1);
    } else {
      ge.weight = 0;
    }
    input.edges.push_back(std::move(ge));
  }
  input.meta["construction"] = "matching-lb";
  input.meta["matching_size"] = q;

  ConstructedInstance out{build_game(input), {}, {}};
  int spare = q < color_count ? q + 1 : 1;
  out.equilibrium.colors.assign(graph.node_count, spare);
  for (int v = 0; v < graph.node_count; ++v) {
    if (pair_color[v] > 0) out.equilibrium.colors[v] = pair_color[v];
  }
  StrategyProfile opt;
  opt.colors.assign(graph.node_count, 1);
  out.optimum = std::move(opt);
  return out;
}

ConstructedInstance chromatic_lb_instance(const Graph& graph,
                                          int chromatic_cap) {
  ColoringResult coloring = chromatic_number(graph, chromatic_cap);
  const int chi = coloring.chromatic_number;
  GameInput input;
  input.node_count = graph.node_count;
  input.color_count = chi + 1;
  for (const Edge& e : graph.edges) {
    GameInput::EdgeInput ge;
    ge.u = e.u;
    ge.v = e.v;
    ge.kind = EdgeKind::coordination;
    ge.weight = 1;
    input.edges.push_back(std::move(ge));
  }
  // fallback color a_0 = 1; proper color i becomes game color i+1
  std::vector<std::vector<int>> sets(graph.node_count);
  for (int v = 0; v < graph.node_count; ++v) {
    sets[v] = {1, 1 + coloring.coloring[v]};
  }
  input.strategy_sets = std::move(sets);
  input.meta["construction"] = "chromatic-lb";
  input.meta["chromatic_number"] = chi;

  ConstructedInstance out{build_game(input), {}, {}};
  out.equilibrium.colors.resize(graph.node_count);
  for (int v = 0; v < graph.node_count; ++v) {
    out.equilibrium.colors[v] = 1 + coloring.coloring[v];
  }
  StrategyProfile opt;
  opt.colors.assign(graph.node_count, 1);
  out.optimum = std::move(opt);
  return out;
}

ConstructedInstance degree_lb_instance(const Graph& graph, const Rat& eps,
                                       int k) {
  if (k < 2 || eps < 1) {
    throw Error(ErrorCode::BadArguments, "need k >= 2 and eps >= 1");
  }
  int delta = max_degree(graph);
  if (delta <= k - 1) {
    throw Error(ErrorCode::DegreeTooSmall,
                "max degree must exceed k - 1");
  }
  int center = 0;
  while (graph.degree(center) != delta) ++center;
  std::vector<int> neighbors;
  for (const auto& [nb, ei] : graph.adjacency[center]) neighbors.push_back(nb);
  std::sort(neighbors.begin(), neighbors.end());
  std::vector<char> chosen(graph.node_count, 0);
  for (int i = 0; i < k - 1; ++i) chosen[neighbors[i]] = 1;

  GameInput input;
  input.node_count = graph.node_count;
  input.color_count = 3;  // colors {a, b, c} = {1, 2, 3}
  for (const Edge& e : graph.edges) {
    GameInput::EdgeInput ge;
    ge.u = e.u;
    ge.v = e.v;
    ge.kind = EdgeKind::coordination;
    if (e.u == center || e.v == center) {
      int other = e.u == center ? e.v : e.u;
      ge.weight = chosen[other] ? Rat(1) : eps;
    } else {
      ge.weight = 0;
    }
    input.edges.push_back(std::move(ge));
  }
  std::vector<std::vector<int>> sets(graph.node_count, std::vector<int>{1, 3});
  sets[center] = {1, 2};
  for (int v = 0; v < graph.node_count; ++v) {
    if (chosen[v]) sets[v] = {1, 2};
  }
  input.strategy_sets = std::move(sets);
  input.meta["construction"] = "degree-lb";
  input.meta["k"] = k;
  input.meta["eps"] = format_rat(eps);

  ConstructedInstance out{build_game(input), {}, {}};
  out.equilibrium.colors.assign(graph.node_count, 3);
  out.equilibrium.colors[center] = 2;
  for (int v = 0; v < graph.node_count; ++v) {
    if (chosen[v]) out.equilibrium.colors[v] = 2;
  }
  StrategyProfile opt;
  opt.colors.assign(graph.node_count, 1);
  out.optimum = std::move(opt);
  return out;
}

std::optional<Rat> StrategySetDistribution::claimed_common_color_constant()
    const {
  if (family != Family::uniform_nonempty) return std::nullopt;
  // P(disjoint) over ordered nonempty pairs: (3^c - 2^{c+1} + 1)/(2^c - 1)^2
  BigInt pow3 = 1, pow2 = 1;
  for (int i = 0; i < colors; ++i) {
    pow3 *= 3;
    pow2 *= 2;
  }
  BigInt nonempty = pow2 - 1;
  Rat disjoint(pow3 - 2 * pow2 + 1, nonempty * nonempty);
  return Rat(1 - disjoint);
}

std::vector<std::vector<int>> random_strategy_sets(
    int n, const StrategySetDistribution& dist, std::uint64_t seed) {
  if (dist.colors < 1 || dist.colors > 62) {
    throw Error(ErrorCode::BadArguments, "color count out of range");
  }
  Rng rng(seed);
  std::vector<std::vector<int>> sets(n);
  for (int i = 0; i < n; ++i) {
    switch (dist.family) {
      case StrategySetDistribution::Family::uniform_nonempty: {
        std::uint64_t mask =
            rng.below((std::uint64_t(1) << dist.colors) - 1) + 1;
        for (int c = 0; c < dist.colors; ++c) {
          if (mask >> c & 1) sets[i].push_back(c + 1);
        }
        break;
      }
      case StrategySetDistribution::Family::pair_with_common: {
        if (dist.colors < 2) {
          throw Error(ErrorCode::BadArguments,
                      "pair_with_common needs at least 2 colors");
        }
        int second = 2 + static_cast<int>(rng.below(dist.colors - 1));
        sets[i] = {1, second};
        break;
      }
    }
  }
  return sets;
}

ClusteringGame random_game(const Graph& topology,
                           const RandomGameParams& params) {
  if (params.colors < 2) {
    throw Error(ErrorCode::BadArguments, "need at least 2 colors");
  }
  Rng rng(params.seed);

  auto draw_rat = [&](int num_max) {
    Rat num(rng.range(1, num_max));
    const auto& dens = params.weight_denominators;
    Rat den(dens[rng.below(dens.size())]);
    return Rat(num / den);
  };

  std::vector<int> gamma;  // weighted Shapley node weights
  if (params.rule == RandomGameParams::RuleFamily::weighted_shapley) {
    gamma.resize(topology.node_count);
    for (int& g : gamma) g = static_cast<int>(rng.range(1, 6));
  }

  GameInput input;
  input.node_count = topology.node_count;
  input.color_count = params.colors;
  for (const Edge& e : topology.edges) {
    GameInput::EdgeInput ge;
    ge.u = e.u;
    ge.v = e.v;
    switch (params.kinds) {
      case RandomGameParams::KindMix::all_coordination:
        ge.kind = EdgeKind::coordination;
        break;
      case RandomGameParams::KindMix::all_anti_coordination:
        ge.kind = EdgeKind::anti_coordination;
        break;
      case RandomGameParams::KindMix::mixed:
        ge.kind = rng.bernoulli(params.anti_probability)
                      ? EdgeKind::anti_coordination
                      : EdgeKind::coordination;
        break;
    }
    ge.weight = draw_rat(params.weight_numerator_max);
    switch (params.rule) {
      case RandomGameParams::RuleFamily::equal_split:
        ge.alpha_uv = 1;
        ge.alpha_vu = 1;
        break;
      case RandomGameParams::RuleFamily::random_positive:
        ge.alpha_uv = Rat(rng.range(1, 6));
        ge.alpha_vu = Rat(rng.range(1, 6));
        break;
      case RandomGameParams::RuleFamily::weighted_shapley:
        ge.alpha_uv = Rat(gamma[e.u]);
        ge.alpha_vu = Rat(gamma[e.v]);
        break;
      case RandomGameParams::RuleFamily::random_with_zeros: {
        auto side = [&]() {
          return rng.below(4) == 0 ? Rat(0) : Rat(rng.range(1, 6));
        };
        ge.alpha_uv = side();
        ge.alpha_vu = side();
        if (ge.alpha_uv == 0 && ge.alpha_vu == 0) {
          ge.alpha_vu = Rat(rng.range(1, 6));
        }
        break;
      }
    }
    input.edges.push_back(std::move(ge));
  }

  if (params.strategy_sets) {
    input.strategy_sets = params.strategy_sets;
  }
  if (params.random_preferences) {
    std::vector<std::map<int, Rat>> prefs(topology.node_count);
    for (int i = 0; i < topology.node_count; ++i) {
      std::vector<int> available;
      if (params.strategy_sets) {
        available = (*params.strategy_sets)[i];
      } else {
        for (int c = 1; c <= params.colors; ++c) available.push_back(c);
      }
      for (int c : available) {
        if (rng.below(2) == 0) {
          prefs[i][c] = draw_rat(params.preference_numerator_max);
        }
      }
    }
    input.preferences = std::move(prefs);
  }
  input.meta["generator"] = "random-game";
  input.meta["seed"] = params.seed;
  return build_game(input);
}

}  // namespace clugame
