#include "clugame/shapley.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>

#include "clugame/errors.hpp"

namespace clugame {

namespace {

Rat share_of(const DistributionRule& rule, const Graph& g, int edge,
             int node) {
  const auto& [a_uv, a_vu] = rule.shares[edge];
  Rat total = a_uv + a_vu;
  return (g.edges[edge].u == node ? a_uv : a_vu) / total;
}

Rat alpha_toward(const DistributionRule& rule, const Graph& g, int edge,
                 int node) {
  return g.edges[edge].u == node ? rule.shares[edge].first
                                 : rule.shares[edge].second;
}

void validate_rule(const Graph& g, const DistributionRule& rule) {
  if (rule.shares.size() != g.edges.size()) {
    throw Error(ErrorCode::BadArguments,
                "rule must carry one share pair per edge");
  }
  for (std::size_t i = 0; i < rule.shares.size(); ++i) {
    const auto& [a, b] = rule.shares[i];
    if (a < 0 || b < 0) {
      throw Error(ErrorCode::BadArguments, "negative share");
    }
    if (a + b == 0) {
      throw Error(ErrorCode::ZeroShareSum,
                  "edge " + std::to_string(i) + ": both shares zero");
    }
  }
}

// BFS path between two nodes of one positive-share component; neighbors are
// explored in ascending id order so the path is deterministic.
std::vector<int> positive_path(const Graph& g, const DistributionRule& rule,
                               int from, int to) {
  std::vector<int> parent(g.node_count, -1);
  std::vector<int> parent_edge(g.node_count, -1);
  std::queue<int> q;
  q.push(from);
  parent[from] = from;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (v == to) break;
    std::vector<std::pair<int, int>> nbs(g.adjacency[v].begin(),
                                         g.adjacency[v].end());
    std::sort(nbs.begin(), nbs.end());
    for (const auto& [nb, ei] : nbs) {
      if (rule.shares[ei].first == 0 || rule.shares[ei].second == 0) continue;
      if (parent[nb] < 0) {
        parent[nb] = v;
        parent_edge[nb] = ei;
        q.push(nb);
      }
    }
  }
  assert(parent[to] >= 0);
  std::vector<int> path;  // node ids from -> to
  for (int v = to; v != from; v = parent[v]) path.push_back(v);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

Rat cycle_alpha_product(const Graph& g, const DistributionRule& rule,
                        const std::vector<int>& nodes,
                        const std::vector<int>& edges) {
  // alpha(H) = prod alpha_{p_{t+1} p_t} / prod alpha_{p_t p_{t+1}}
  Rat product = 1;
  const std::size_t h = nodes.size();
  for (std::size_t t = 0; t < h; ++t) {
    int tail = nodes[t];
    int head = nodes[(t + 1) % h];
    int ei = edges[t];
    product *= alpha_toward(rule, g, ei, head);
    product /= alpha_toward(rule, g, ei, tail);
  }
  return product;
}

// Same closed cycle walked the other way: keeps the start node, inverts
// alpha(H).
void reverse_cycle(std::vector<int>& nodes, std::vector<int>& edges) {
  std::reverse(nodes.begin() + 1, nodes.end());
  std::reverse(edges.begin(), edges.end());
}

}  // namespace

ShapleyClassification classify_rule(const Graph& graph,
                                    const DistributionRule& rule) {
  validate_rule(graph, rule);
  const int n = graph.node_count;

  // positive-share components, discovered in ascending node-id order
  std::vector<int> comp(n, -1);
  int comp_count = 0;
  for (int v = 0; v < n; ++v) {
    if (comp[v] >= 0) continue;
    std::queue<int> q;
    q.push(v);
    comp[v] = comp_count;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (const auto& [nb, ei] : graph.adjacency[x]) {
        if (rule.shares[ei].first == 0 || rule.shares[ei].second == 0) {
          continue;
        }
        if (comp[nb] < 0) {
          comp[nb] = comp_count;
          q.push(nb);
        }
      }
    }
    ++comp_count;
  }

  // zero-share arcs between components; self-loops checked first
  struct ZeroArc {
    int from_comp, to_comp;
    int zero_node, pos_node;  // alpha_{zero_node, pos_node} = 0
    int edge;
  };
  std::vector<ZeroArc> arcs;
  for (std::size_t ei = 0; ei < graph.edges.size(); ++ei) {
    const Edge& e = graph.edges[ei];
    const auto& [a_uv, a_vu] = rule.shares[ei];
    if (a_uv == 0) {
      arcs.push_back({comp[e.u], comp[e.v], e.u, e.v, static_cast<int>(ei)});
    } else if (a_vu == 0) {
      arcs.push_back({comp[e.v], comp[e.u], e.v, e.u, static_cast<int>(ei)});
    }
  }

  auto realize_cycle = [&](const std::vector<ZeroArc>& crossing) {
    // crossing[t] leads from component of crossing[t] to the component that
    // crossing[t+1] starts in; traverse each zero edge positive -> zero side
    DigraphCycleWitness w;
    const std::size_t r = crossing.size();
    for (const auto& arc : crossing) w.component_cycle.push_back(arc.from_comp);
    for (std::size_t t = 0; t < r; ++t) {
      const ZeroArc& enter = crossing[t];   // arrive at enter.zero_node
      const ZeroArc& leave = crossing[(t + 1) % r];
      // walk inside the component from enter.zero_node to leave.pos_node
      std::vector<int> path = positive_path(graph, rule, enter.zero_node,
                                            leave.pos_node);
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        w.cycle_nodes.push_back(path[i]);
        for (const auto& [nb, ei] : graph.adjacency[path[i]]) {
          if (nb == path[i + 1] && rule.shares[ei].first > 0 &&
              rule.shares[ei].second > 0) {
            w.cycle_edges.push_back(ei);
            break;
          }
        }
      }
      w.cycle_nodes.push_back(leave.pos_node);
      w.cycle_edges.push_back(leave.edge);
    }
    // rotate so the list starts right after a zero edge: it already does,
    // because each section starts at a zero side and ends with a zero edge
    return w;
  };

  // self-loop in D: a zero-share edge inside one component
  for (const ZeroArc& arc : arcs) {
    if (arc.from_comp == arc.to_comp) {
      return {realize_cycle({arc})};
    }
  }

  // cycle in D (distinct components): DFS with deterministic arc order
  {
    std::map<std::pair<int, int>, ZeroArc> first_arc;
    std::vector<std::vector<int>> dadj(comp_count);
    for (const ZeroArc& arc : arcs) {
      auto key = std::make_pair(arc.from_comp, arc.to_comp);
      if (!first_arc.count(key)) {
        first_arc.emplace(key, arc);
        dadj[arc.from_comp].push_back(arc.to_comp);
      }
    }
    for (auto& nbs : dadj) std::sort(nbs.begin(), nbs.end());

    std::vector<int> state(comp_count, 0);  // 0 white, 1 gray, 2 black
    std::vector<int> stack;
    // returns the component cycle if found
    auto dfs = [&](auto&& self, int v) -> std::vector<int> {
      state[v] = 1;
      stack.push_back(v);
      for (int to : dadj[v]) {
        if (state[to] == 1) {
          auto it = std::find(stack.begin(), stack.end(), to);
          return std::vector<int>(it, stack.end());
        }
        if (state[to] == 0) {
          auto cyc = self(self, to);
          if (!cyc.empty()) return cyc;
        }
      }
      state[v] = 2;
      stack.pop_back();
      return {};
    };
    for (int c = 0; c < comp_count; ++c) {
      if (state[c] != 0) continue;
      auto cyc = dfs(dfs, c);
      if (!cyc.empty()) {
        std::vector<ZeroArc> crossing;
        for (std::size_t t = 0; t < cyc.size(); ++t) {
          crossing.push_back(
              first_arc.at({cyc[t], cyc[(t + 1) % cyc.size()]}));
        }
        // traversal below visits components against arc direction; reverse
        // so consecutive crossings chain up
        std::reverse(crossing.begin(), crossing.end());
        return {realize_cycle(crossing)};
      }
    }
  }

  // gamma propagation per component; root (lowest id) fixed to 1
  std::vector<Rat> gamma(n, Rat(0));
  std::vector<int> parent(n, -1), parent_edge(n, -1);
  std::vector<char> visited(n, 0);
  for (int root = 0; root < n; ++root) {
    if (visited[root]) continue;
    gamma[root] = 1;
    visited[root] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      std::vector<std::pair<int, int>> nbs(graph.adjacency[v].begin(),
                                           graph.adjacency[v].end());
      std::sort(nbs.begin(), nbs.end());
      for (const auto& [nb, ei] : nbs) {
        if (rule.shares[ei].first == 0 || rule.shares[ei].second == 0) {
          continue;
        }
        if (!visited[nb]) {
          visited[nb] = 1;
          parent[nb] = v;
          parent_edge[nb] = ei;
          // share equation forces gamma_child = gamma_parent * a_cp / a_pc
          gamma[nb] = gamma[v] * alpha_toward(rule, graph, ei, nb) /
                      alpha_toward(rule, graph, ei, v);
          q.push(nb);
        }
      }
    }
  }

  // every positive edge must agree with the propagated gammas
  for (std::size_t ei = 0; ei < graph.edges.size(); ++ei) {
    const Edge& e = graph.edges[ei];
    const auto& [a_uv, a_vu] = rule.shares[ei];
    if (a_uv == 0 || a_vu == 0) continue;
    if (a_uv * gamma[e.v] == a_vu * gamma[e.u]) continue;

    // inconsistent: close the cycle through the tree path u .. v
    auto path_to_root = [&](int v) {
      std::vector<int> path = {v};
      while (parent[path.back()] >= 0) path.push_back(parent[path.back()]);
      return path;
    };
    std::vector<int> pu = path_to_root(e.u);
    std::vector<int> pv = path_to_root(e.v);
    // strip the common suffix down to the lowest common ancestor
    while (pu.size() > 1 && pv.size() > 1 &&
           pu[pu.size() - 2] == pv[pv.size() - 2]) {
      pu.pop_back();
      pv.pop_back();
    }
    InconsistentCycleWitness w;
    w.cycle_nodes.assign(pu.begin(), pu.end());  // u .. lca
    for (auto it = pv.rbegin() + 1; it != pv.rend(); ++it) {
      w.cycle_nodes.push_back(*it);  // lca-child .. v
    }
    for (std::size_t t = 0; t + 1 < w.cycle_nodes.size(); ++t) {
      int a = w.cycle_nodes[t];
      int b = w.cycle_nodes[t + 1];
      int found = parent[a] == b ? parent_edge[a] : parent_edge[b];
      assert(found >= 0);
      w.cycle_edges.push_back(found);
    }
    w.cycle_edges.push_back(static_cast<int>(ei));  // closing edge v -> u
    w.alpha_product = cycle_alpha_product(graph, rule, w.cycle_nodes,
                                          w.cycle_edges);
    assert(w.alpha_product != 1);
    if (w.alpha_product > 1) {
      reverse_cycle(w.cycle_nodes, w.cycle_edges);
      w.alpha_product = cycle_alpha_product(graph, rule, w.cycle_nodes,
                                            w.cycle_edges);
      assert(w.alpha_product < 1);
    }
    return {w};
  }

  // GWS: sigma from a topological order of D, components tie-broken by id,
  // nodes within a component by id
  GwsCertificate cert;
  cert.gamma = gamma;
  cert.sigma.assign(n, 0);
  {
    std::vector<std::vector<int>> dadj(comp_count);
    std::vector<int> indeg(comp_count, 0);
    std::map<std::pair<int, int>, bool> seen;
    for (const ZeroArc& arc : arcs) {
      if (seen.emplace(std::make_pair(arc.from_comp, arc.to_comp), true)
              .second) {
        dadj[arc.from_comp].push_back(arc.to_comp);
        ++indeg[arc.to_comp];
      }
    }
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int c = 0; c < comp_count; ++c) {
      if (indeg[c] == 0) ready.push(c);
    }
    std::vector<int> comp_order;
    while (!ready.empty()) {
      int c = ready.top();
      ready.pop();
      comp_order.push_back(c);
      for (int to : dadj[c]) {
        if (--indeg[to] == 0) ready.push(to);
      }
    }
    assert(static_cast<int>(comp_order.size()) == comp_count);
    std::vector<std::vector<int>> members(comp_count);
    for (int v = 0; v < n; ++v) members[comp[v]].push_back(v);
    int position = 0;
    for (int c : comp_order) {
      for (int v : members[c]) cert.sigma[v] = position++;
    }
  }
  return {cert};
}

Rat potential_value(const ClusteringGame& game, const std::vector<Rat>& gamma,
                    const StrategyProfile& s) {
  validate_profile(game, s);
  if (static_cast<int>(gamma.size()) != game.player_count()) {
    throw Error(ErrorCode::BadArguments, "gamma must have one entry per node");
  }
  for (const Rat& g : gamma) {
    if (g <= 0) {
      throw Error(ErrorCode::NotWeightedShapley,
                  "potential needs strictly positive weights");
    }
  }
  Rat phi = 0;
  for (int i = 0; i < game.player_count(); ++i) {
    phi += game.preference(i, s.colors[i]) / gamma[i];
  }
  for (std::size_t ei = 0; ei < game.graph.edges.size(); ++ei) {
    const Edge& e = game.graph.edges[ei];
    if (edge_satisfied(e.kind, s.colors[e.u], s.colors[e.v])) {
      phi += e.weight / (gamma[e.u] + gamma[e.v]);
    }
  }
  return phi;
}

namespace {

struct CycleWeights {
  std::vector<int> nodes;    // normalized traversal (alpha(H) < 1)
  std::vector<int> edges;
  std::vector<Rat> weights;  // aligned with `edges`
  Rat total;
  Rat min_gap;  // min over players of forward minus backward payoff
};

// Balanced chain w_{e_i} = w_{e_{i-1}} * share_{p_i}(e_{i-1}) / share_{p_i}(e_i)
// scaled by (1+eps)^{i+1}, with (1+eps)^n * alpha(H) < 1. Every player then
// strictly prefers satisfying her forward edge over her backward edge.
CycleWeights balanced_cycle_weights(const Graph& g,
                                    const DistributionRule& rule,
                                    const InconsistentCycleWitness& w) {
  const std::size_t h = w.cycle_nodes.size();
  CycleWeights out;
  out.nodes = w.cycle_nodes;
  out.edges = w.cycle_edges;
  Rat alpha_h = cycle_alpha_product(g, rule, out.nodes, out.edges);
  if (alpha_h == 1) {
    throw Error(ErrorCode::NoInconsistentCycle,
                "cycle is consistent, alpha(H) = 1");
  }
  if (alpha_h > 1) {
    reverse_cycle(out.nodes, out.edges);
    alpha_h = cycle_alpha_product(g, rule, out.nodes, out.edges);
    assert(alpha_h < 1);
  }

  // largest power-of-two eps with (1+eps)^n * alpha(H) < 1, by halving
  Rat eps = 1;
  auto ok = [&](const Rat& candidate) {
    Rat pow = 1;
    Rat base = 1 + candidate;
    for (int i = 0; i < g.node_count; ++i) pow *= base;
    return pow * alpha_h < 1;
  };
  while (!ok(eps)) eps /= 2;

  std::vector<Rat> balanced(h);
  balanced[0] = 1;
  for (std::size_t i = 1; i < h; ++i) {
    int player = out.nodes[i];
    Rat back = share_of(rule, g, out.edges[i - 1], player);
    Rat fwd = share_of(rule, g, out.edges[i], player);
    balanced[i] = balanced[i - 1] * back / fwd;
  }
  out.weights.assign(h, Rat(0));
  Rat factor = 1 + eps;
  Rat scale = factor;
  for (std::size_t i = 0; i < h; ++i) {
    out.weights[i] = balanced[i] * scale;
    scale *= factor;
  }
  out.total = 0;
  for (const Rat& v : out.weights) out.total += v;

  out.min_gap = -1;
  for (std::size_t i = 0; i < h; ++i) {
    int player = out.nodes[i];
    std::size_t back_idx = (i + h - 1) % h;
    Rat back = share_of(rule, g, out.edges[back_idx], player) *
               out.weights[back_idx];
    Rat fwd = share_of(rule, g, out.edges[i], player) * out.weights[i];
    Rat gap = fwd - back;
    assert(gap > 0);
    if (out.min_gap < 0 || gap < out.min_gap) out.min_gap = gap;
  }
  return out;
}

GameInput base_input_from(const Graph& g, const DistributionRule& rule,
                          int color_count) {
  GameInput input;
  input.node_count = g.node_count;
  input.color_count = color_count;
  for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
    GameInput::EdgeInput e;
    e.u = g.edges[ei].u;
    e.v = g.edges[ei].v;
    e.kind = g.edges[ei].kind;
    e.weight = 0;
    e.alpha_uv = rule.shares[ei].first;
    e.alpha_vu = rule.shares[ei].second;
    input.edges.push_back(std::move(e));
  }
  return input;
}

void assign_cycle_weights(GameInput& input, const std::vector<int>& edges,
                          const std::vector<Rat>& weights) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    input.edges[edges[i]].weight = weights[i];
  }
}

}  // namespace

ClusteringGame build_br_cycle_game(const Graph& graph,
                                   const DistributionRule& rule,
                                   const InconsistentCycleWitness& witness,
                                   int color_count) {
  validate_rule(graph, rule);
  CycleWeights cw = balanced_cycle_weights(graph, rule, witness);
  int c = std::max(2, color_count);
  GameInput input = base_input_from(graph, rule, c);
  assign_cycle_weights(input, cw.edges, cw.weights);
  // preferences K on two fixed colors pin every best response to {1, 2}
  std::vector<std::map<int, Rat>> prefs(graph.node_count);
  Rat big = cw.total;
  for (int v = 0; v < graph.node_count; ++v) {
    prefs[v][1] = big;
    prefs[v][2] = big;
  }
  input.preferences = std::move(prefs);
  input.meta["construction"] = "br-cycle";
  return build_game(input);
}

ClusteringGame build_zero_share_cycle_game(const Graph& graph,
                                           const DistributionRule& rule,
                                           const DigraphCycleWitness& witness,
                                           int color_count) {
  validate_rule(graph, rule);
  const std::size_t h = witness.cycle_nodes.size();
  // Strictly increasing payoff chain: each player's forward edge must beat
  // her backward edge; a zero backward share makes the condition free.
  std::vector<Rat> weights(h, Rat(0));
  weights[0] = 1;
  Rat total = 1;
  for (std::size_t i = 1; i < h; ++i) {
    int player = witness.cycle_nodes[i];
    Rat back = share_of(rule, graph, witness.cycle_edges[i - 1], player);
    Rat fwd = share_of(rule, graph, witness.cycle_edges[i], player);
    if (fwd == 0) {
      throw Error(ErrorCode::BadArguments,
                  "digraph-cycle witness has a zero forward share");
    }
    weights[i] = back == 0 ? Rat(1) : Rat(2) * back * weights[i - 1] / fwd;
    total += weights[i];
  }
  // closing edge: the first player's backward share must vanish, and her
  // forward edge must pay her something
  if (share_of(rule, graph, witness.cycle_edges[h - 1],
               witness.cycle_nodes[0]) != 0) {
    throw Error(ErrorCode::BadArguments,
                "digraph-cycle witness must close with a zero-share edge");
  }
  if (share_of(rule, graph, witness.cycle_edges[0], witness.cycle_nodes[0]) ==
      0) {
    throw Error(ErrorCode::BadArguments,
                "digraph-cycle witness has a zero forward share");
  }

  int c = std::max(2, color_count);
  GameInput input = base_input_from(graph, rule, c);
  assign_cycle_weights(input, witness.cycle_edges, weights);
  std::vector<std::map<int, Rat>> prefs(graph.node_count);
  for (int v = 0; v < graph.node_count; ++v) {
    prefs[v][1] = total;
    prefs[v][2] = total;
  }
  input.preferences = std::move(prefs);
  input.meta["construction"] = "zero-share-cycle";
  return build_game(input);
}

ClusteringGame build_no_pne_game(const Graph& graph,
                                 const DistributionRule& rule,
                                 const InconsistentCycleWitness& witness,
                                 int color_count) {
  validate_rule(graph, rule);
  if (color_count < 3) {
    throw Error(ErrorCode::BadArguments, "construction needs c >= 3");
  }
  for (int ei : witness.cycle_edges) {
    if (graph.edges[ei].kind != EdgeKind::coordination) {
      throw Error(ErrorCode::BadArguments,
                  "construction needs a coordination cycle");
    }
  }
  CycleWeights cw = balanced_cycle_weights(graph, rule, witness);
  Rat delta = cw.min_gap / 2;
  Rat big = cw.total + delta + 1;

  GameInput input = base_input_from(graph, rule, color_count);
  assign_cycle_weights(input, cw.edges, cw.weights);
  // rotating preference pattern: players 0..h-3 rank color 3 over 1,
  // player h-2 ranks 1 over 2, player h-1 ranks 2 over 3
  std::vector<std::map<int, Rat>> prefs(graph.node_count);
  const std::size_t h = cw.nodes.size();
  for (std::size_t i = 0; i < h; ++i) {
    int v = cw.nodes[i];
    if (i + 2 < h) {
      prefs[v][3] = big + delta;
      prefs[v][1] = big;
    } else if (i + 2 == h) {
      prefs[v][1] = big + delta;
      prefs[v][2] = big;
    } else {
      prefs[v][2] = big + delta;
      prefs[v][3] = big;
    }
  }
  input.preferences = std::move(prefs);
  input.meta["construction"] = "no-pne";
  return build_game(input);
}

ClusteringGame build_br_cycle_game(const Graph& graph,
                                   const DistributionRule& rule,
                                   const ShapleyClassification& classification,
                                   int color_count) {
  if (auto* w = std::get_if<InconsistentCycleWitness>(&classification.result)) {
    return build_br_cycle_game(graph, rule, *w, color_count);
  }
  if (auto* w = std::get_if<DigraphCycleWitness>(&classification.result)) {
    return build_zero_share_cycle_game(graph, rule, *w, color_count);
  }
  throw Error(ErrorCode::NoInconsistentCycle,
              "rule classifies as generalized weighted Shapley");
}

ClusteringGame build_no_pne_game(const Graph& graph,
                                 const DistributionRule& rule,
                                 const ShapleyClassification& classification,
                                 int color_count) {
  if (auto* w = std::get_if<InconsistentCycleWitness>(&classification.result)) {
    return build_no_pne_game(graph, rule, *w, color_count);
  }
  throw Error(ErrorCode::NoInconsistentCycle,
              "construction needs an inconsistent-cycle witness");
}

nlohmann::ordered_json classification_to_json(
    const ShapleyClassification& classification) {
  nlohmann::ordered_json j;
  if (classification.is_gws()) {
    const auto& cert = classification.certificate();
    j["verdict"] = "gws";
    j["sigma"] = cert.sigma;
    j["gamma"] = nlohmann::ordered_json::array();
    for (const Rat& g : cert.gamma) j["gamma"].push_back(format_rat(g));
    return j;
  }
  j["verdict"] = "violation";
  nlohmann::ordered_json w;
  if (auto* dc = std::get_if<DigraphCycleWitness>(&classification.result)) {
    w["kind"] = "digraph_cycle";
    w["component_cycle"] = dc->component_cycle;
    w["cycle_nodes"] = dc->cycle_nodes;
    w["cycle_edges"] = dc->cycle_edges;
  } else {
    const auto& ic = std::get<InconsistentCycleWitness>(classification.result);
    w["kind"] = "inconsistent_cycle";
    w["cycle_nodes"] = ic.cycle_nodes;
    w["cycle_edges"] = ic.cycle_edges;
    w["alpha_product"] = format_rat(ic.alpha_product);
  }
  j["witness"] = w;
  return j;
}

}  // namespace clugame
