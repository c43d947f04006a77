#include "clugame/topology.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <queue>

#include "clugame/errors.hpp"

namespace clugame {

namespace {

using Cap = __int128;

// Dinic max-flow with exact integer capacities. The density decision
// problems scale all capacities to integers, so no rounding ever happens.
class Dinic {
 public:
  explicit Dinic(int n) : arcs_(n), level_(n), iter_(n) {}

  void add_edge(int from, int to, Cap cap, Cap cap_rev = 0) {
    arcs_[from].push_back({to, cap, static_cast<int>(arcs_[to].size())});
    arcs_[to].push_back({from, cap_rev, static_cast<int>(arcs_[from].size()) - 1});
  }

  Cap max_flow(int s, int t) {
    Cap flow = 0;
    while (bfs(s, t)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      while (Cap f = dfs(s, t, kInf)) flow += f;
    }
    return flow;
  }

  // Call after max_flow: nodes reachable from s in the residual network.
  std::vector<char> source_side(int s) const {
    std::vector<char> seen(arcs_.size(), 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const Arc& a : arcs_[v]) {
        if (a.cap > 0 && !seen[a.to]) {
          seen[a.to] = 1;
          q.push(a.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    Cap cap;
    int rev;
  };

  static constexpr Cap kInf = Cap(1) << 120;

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const Arc& a : arcs_[v]) {
        if (a.cap > 0 && level_[a.to] < 0) {
          level_[a.to] = level_[v] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  Cap dfs(int v, int t, Cap limit) {
    if (v == t) return limit;
    for (int& i = iter_[v]; i < static_cast<int>(arcs_[v].size()); ++i) {
      Arc& a = arcs_[v][i];
      if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
      Cap d = dfs(a.to, t, std::min(limit, a.cap));
      if (d > 0) {
        a.cap -= d;
        arcs_[a.to][a.rev].cap += d;
        return d;
      }
    }
    return 0;
  }

  std::vector<std::vector<Arc>> arcs_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

Cap to_cap(const BigInt& v) {
  // density scalings stay far below 2^120
  Cap out = 0;
  bool neg = v < 0;
  BigInt a = neg ? BigInt(-v) : v;
  Cap shift = 1;
  while (a > 0) {
    out += shift * static_cast<Cap>((a & 0xffffffff).convert_to<std::uint64_t>());
    a >>= 32;
    shift <<= 32;
  }
  return neg ? -out : out;
}

struct FilteredGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> degree;
};

FilteredGraph filter_edges(const Graph& g, EdgeFilter filter) {
  FilteredGraph fg;
  fg.n = g.node_count;
  fg.degree.assign(g.node_count, 0);
  for (const Edge& e : g.edges) {
    if (filter == EdgeFilter::coordination_only &&
        e.kind != EdgeKind::coordination) {
      continue;
    }
    fg.edges.emplace_back(e.u, e.v);
    ++fg.degree[e.u];
    ++fg.degree[e.v];
  }
  return fg;
}

// Decides whether some nonempty S has |E[S]|/|S| > g, where g = a/b >= 0.
// Goldberg's network: min cut equals b*(m*n) - 2*max_S(b*|E[S]| - a*|S|).
struct DensityDecision {
  bool exists_denser;
  std::vector<char> source_side;  // node v in the maximizing S iff set
};

DensityDecision density_decide(const FilteredGraph& fg, const BigInt& a,
                               const BigInt& b) {
  const int n = fg.n;
  const auto m = BigInt(fg.edges.size());
  const int source = n;
  const int sink = n + 1;
  Dinic dinic(n + 2);
  const Cap mb = to_cap(m * b);
  for (int v = 0; v < n; ++v) {
    dinic.add_edge(source, v, mb);
    // m + 2g - deg(v) >= 0 since deg(v) <= m and g >= 0
    dinic.add_edge(v, sink, to_cap(m * b + 2 * a - b * fg.degree[v]));
  }
  const Cap cb = to_cap(b);
  for (const auto& [u, v] : fg.edges) {
    dinic.add_edge(u, v, cb, cb);
  }
  Cap flow = dinic.max_flow(source, sink);
  Cap saturated = to_cap(m * b * n);
  DensityDecision result;
  result.exists_denser = flow < saturated;
  result.source_side = dinic.source_side(source);
  return result;
}

BigInt floor_div(const BigInt& num, const BigInt& den) {
  // den > 0
  BigInt q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

}  // namespace

DensityResult max_subgraph_density(const Graph& g, EdgeFilter filter) {
  FilteredGraph fg = filter_edges(g, filter);
  if (fg.edges.empty()) {
    return {Rat(0), {0}};
  }
  const int n = fg.n;
  const BigInt n2 = BigInt(n) * n;

  // Invariant: rho in (lo, hi]. With m >= 1, rho >= 1/2 > 0.
  Rat lo = 0;
  Rat hi = Rat(static_cast<int>(fg.edges.size()));
  while (Rat(hi - lo) * n2 >= 1) {
    Rat mid = (lo + hi) / 2;
    if (density_decide(fg, numerator(mid), denominator(mid)).exists_denser) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // The interval is shorter than the gap between distinct fractions with
  // denominator <= n, so it contains exactly one candidate: rho itself.
  Rat rho;
  bool found = false;
  for (int b = 1; b <= n && !found; ++b) {
    BigInt a = floor_div(numerator(hi) * b, denominator(hi));
    Rat cand(a, BigInt(b));
    if (cand > lo) {
      rho = cand;
      found = true;
    }
  }
  assert(found);

  // At g = rho - 1/n^2 every maximizer of |E[S]| - g|S| has density exactly
  // rho, so the min-cut source side is a witness.
  Rat probe = rho - Rat(1, n2);
  DensityDecision dec =
      density_decide(fg, numerator(probe), denominator(probe));
  assert(dec.exists_denser);
  DensityResult result;
  result.density = rho;
  for (int v = 0; v < n; ++v) {
    if (dec.source_side[v]) result.witness.push_back(v);
  }
  assert(!result.witness.empty());

  // Witness self-check: recounting must reproduce rho exactly.
  std::vector<char> in(n, 0);
  for (int v : result.witness) in[v] = 1;
  long long inside = 0;
  for (const auto& [u, v] : fg.edges) {
    if (in[u] && in[v]) ++inside;
  }
  assert(Rat(BigInt(inside), BigInt(result.witness.size())) == rho);
  (void)inside;
  return result;
}

namespace {

// Maximum matching on general graphs via blossom contraction (O(V^3)).
class BlossomMatcher {
 public:
  explicit BlossomMatcher(const Graph& g) : n_(g.node_count), adj_(n_) {
    for (const Edge& e : g.edges) {
      adj_[e.u].push_back(e.v);
      adj_[e.v].push_back(e.u);
    }
    match_.assign(n_, -1);
  }

  std::vector<int> solve() {
    // greedy seed, then one augmenting search per remaining free vertex
    for (int v = 0; v < n_; ++v) {
      if (match_[v] != -1) continue;
      for (int to : adj_[v]) {
        if (match_[to] == -1) {
          match_[v] = to;
          match_[to] = v;
          break;
        }
      }
    }
    for (int v = 0; v < n_; ++v) {
      if (match_[v] == -1) {
        int exposed = find_path(v);
        if (exposed != -1) augment(exposed);
      }
    }
    return match_;
  }

 private:
  int lca(int a, int b) {
    std::vector<char> seen(n_, 0);
    int v = a;
    while (true) {
      v = base_[v];
      seen[v] = 1;
      if (match_[v] == -1) break;
      v = parent_[match_[v]];
    }
    v = b;
    while (true) {
      v = base_[v];
      if (seen[v]) return v;
      v = parent_[match_[v]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = 1;
      in_blossom_[base_[match_[v]]] = 1;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  int find_path(int root) {
    used_.assign(n_, 0);
    parent_.assign(n_, -1);
    base_.resize(n_);
    std::iota(base_.begin(), base_.end(), 0);
    used_[root] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int to : adj_[v]) {
        if (base_[v] == base_[to] || match_[v] == to) continue;
        if (to == root || (match_[to] != -1 && parent_[match_[to]] != -1)) {
          // odd cycle: contract the blossom
          int cur_base = lca(v, to);
          in_blossom_.assign(n_, 0);
          mark_path(v, cur_base, to);
          mark_path(to, cur_base, v);
          for (int i = 0; i < n_; ++i) {
            if (in_blossom_[base_[i]]) {
              base_[i] = cur_base;
              if (!used_[i]) {
                used_[i] = 1;
                q.push(i);
              }
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          if (match_[to] == -1) {
            return to;
          }
          used_[match_[to]] = 1;
          q.push(match_[to]);
        }
      }
    }
    return -1;
  }

  void augment(int v) {
    while (v != -1) {
      int pv = parent_[v];
      int next = match_[pv];
      match_[v] = pv;
      match_[pv] = v;
      v = next;
    }
  }

  int n_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_, parent_, base_;
  std::vector<char> used_, in_blossom_;
};

}  // namespace

MatchingResult maximum_matching(const Graph& g) {
  BlossomMatcher matcher(g);
  std::vector<int> match = matcher.solve();
  MatchingResult result;
  for (int v = 0; v < g.node_count; ++v) {
    if (match[v] > v) {
      result.edges.emplace_back(v, match[v]);
    }
  }
  result.size = static_cast<int>(result.edges.size());
  return result;
}

namespace {

struct ColorSearch {
  int n;
  int k;
  const std::vector<std::uint32_t>& nb_mask;
  const std::vector<int>& order;
  std::vector<int> assigned;  // color per vertex (0-based), -1 unassigned

  bool run(int pos, int used) {
    if (pos == n) return true;
    int v = order[pos];
    std::uint32_t forbidden = 0;
    for (int u = 0; u < n; ++u) {
      if ((nb_mask[v] >> u & 1u) && assigned[u] >= 0) {
        forbidden |= 1u << assigned[u];
      }
    }
    int limit = std::min(k, used + 1);  // fresh colors in index order only
    for (int c = 0; c < limit; ++c) {
      if (forbidden >> c & 1u) continue;
      assigned[v] = c;
      if (run(pos + 1, std::max(used, c + 1))) return true;
      assigned[v] = -1;
    }
    return false;
  }
};

}  // namespace

ColoringResult chromatic_number(const Graph& g, int cap) {
  const int n = g.node_count;
  if (n > cap || n > 31) {
    throw Error(ErrorCode::ChromaticCapExceeded,
                "chromatic number requested for n = " + std::to_string(n) +
                    " above the cap " + std::to_string(std::min(cap, 31)));
  }
  std::vector<std::uint32_t> nb_mask(n, 0);
  for (const Edge& e : g.edges) {
    nb_mask[e.u] |= 1u << e.v;
    nb_mask[e.v] |= 1u << e.u;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int da = g.degree(a), db = g.degree(b);
    return da != db ? da > db : a < b;
  });

  // greedy clique along the degree order gives the lower bound
  int clique = 0;
  {
    std::uint32_t members = 0;
    for (int v : order) {
      bool fits = (members & ~nb_mask[v]) == 0;
      if (fits) {
        members |= 1u << v;
        ++clique;
      }
    }
  }
  clique = std::max(clique, n > 0 ? 1 : 0);

  for (int k = clique;; ++k) {
    ColorSearch search{n, k, nb_mask, order, std::vector<int>(n, -1)};
    if (search.run(0, 0)) {
      ColoringResult result;
      result.chromatic_number = k;
      result.coloring.resize(n);
      for (int v = 0; v < n; ++v) result.coloring[v] = search.assigned[v] + 1;
      return result;
    }
  }
}

int max_degree(const Graph& g) {
  int best = 0;
  for (int v = 0; v < g.node_count; ++v) best = std::max(best, g.degree(v));
  return best;
}

TopologyStats compute_topology_stats(const Graph& g,
                                     const TopologyOptions& options) {
  TopologyStats stats;
  stats.max_degree = max_degree(g);
  if (options.compute_density) {
    stats.density = max_subgraph_density(g, EdgeFilter::all);
    stats.coord_density = max_subgraph_density(g, EdgeFilter::coordination_only);
  }
  if (options.compute_matching) {
    stats.matching = maximum_matching(g);
  }
  if (options.compute_chromatic) {
    stats.coloring = chromatic_number(g, options.chromatic_cap);
  }
  return stats;
}

namespace {

bool zero_preferences(const ClusteringGame& game) {
  for (const auto& prefs : game.preferences) {
    for (const auto& q : prefs) {
      if (q != 0) return false;
    }
  }
  return true;
}

BoundValue not_applicable(std::string reason) {
  BoundValue b;
  b.not_applicable_reason = std::move(reason);
  return b;
}

BoundValue bound(Rat value) {
  BoundValue b;
  b.value = std::move(value);
  return b;
}

}  // namespace

PoaBounds topological_poa_bounds(const ClusteringGame& game, const Rat& eps,
                                 int k) {
  if (eps < 1 || k < 1) {
    throw Error(ErrorCode::BadArguments, "need eps >= 1 and k >= 1");
  }
  PoaBounds bounds;
  auto disparity = max_disparity(game.rule);

  if (!game.symmetric) {
    bounds.density_bound = not_applicable("game is not symmetric");
    bounds.planar_bound = not_applicable("game is not symmetric");
    bounds.equal_split_density_bound = not_applicable("game is not symmetric");
    bounds.refined_coordination_bound =
        not_applicable("game is not symmetric");
  } else if (!disparity) {
    bounds.density_bound =
        not_applicable("distribution rule has a zero share");
    bounds.planar_bound = not_applicable("distribution rule has a zero share");
    bounds.equal_split_density_bound =
        not_applicable("distribution rule is not equal-split");
    bounds.refined_coordination_bound =
        not_applicable("distribution rule is not equal-split");
  } else {
    Rat rho = max_subgraph_density(game.graph, EdgeFilter::all).density;
    bounds.density_bound = bound(1 + (1 + *disparity) * rho);
    if (game.graph.planar_declared) {
      bounds.planar_bound = bound(4 + 3 * *disparity);
    } else {
      bounds.planar_bound = not_applicable("graph not declared planar");
    }
    if (game.equal_split) {
      bounds.equal_split_density_bound = bound(1 + 2 * rho);
      Rat rho_c =
          max_subgraph_density(game.graph, EdgeFilter::coordination_only)
              .density;
      bounds.refined_coordination_bound = bound(5 + 2 * rho_c);
    } else {
      bounds.equal_split_density_bound =
          not_applicable("distribution rule is not equal-split");
      bounds.refined_coordination_bound =
          not_applicable("distribution rule is not equal-split");
    }
  }

  std::string degree_fail;
  if (!game.graph.coordination_only()) {
    degree_fail = "game has anti-coordination edges";
  } else if (!game.equal_split) {
    degree_fail = "distribution rule is not equal-split";
  } else if (!zero_preferences(game)) {
    degree_fail = "game has individual preferences";
  } else if (k < 2) {
    degree_fail = "k must be at least 2";
  } else if (game.color_count < 3) {
    degree_fail = "needs at least 3 colors";
  }
  if (degree_fail.empty()) {
    int delta = max_degree(game.graph);
    bounds.degree_upper_bound = bound(2 * eps * delta);
    Rat lower = std::max(Rat(1), Rat(delta, k - 1) - 1);
    bounds.degree_lower_companion = bound(eps * lower);
  } else {
    bounds.degree_upper_bound = not_applicable(degree_fail);
    bounds.degree_lower_companion = not_applicable(degree_fail);
  }
  return bounds;
}

nlohmann::ordered_json topology_stats_to_json(const TopologyStats& stats) {
  nlohmann::ordered_json j;
  j["density"] = format_rat(stats.density.density);
  j["density_witness"] = stats.density.witness;
  j["coord_density"] = format_rat(stats.coord_density.density);
  j["max_degree"] = stats.max_degree;
  if (stats.coloring) {
    j["chromatic"] = stats.coloring->chromatic_number;
  } else {
    j["chromatic"] = nullptr;
  }
  j["matching_size"] = stats.matching.size;
  return j;
}

namespace {

nlohmann::ordered_json bound_to_json(const BoundValue& b) {
  if (b.applicable()) return format_rat(*b.value);
  nlohmann::ordered_json j;
  j["not_applicable"] = b.not_applicable_reason;
  return j;
}

}  // namespace

nlohmann::ordered_json poa_bounds_to_json(const PoaBounds& bounds) {
  nlohmann::ordered_json j;
  j["density_bound"] = bound_to_json(bounds.density_bound);
  j["planar_bound"] = bound_to_json(bounds.planar_bound);
  j["equal_split_density_bound"] =
      bound_to_json(bounds.equal_split_density_bound);
  j["refined_coordination_bound"] =
      bound_to_json(bounds.refined_coordination_bound);
  j["degree_upper_bound"] = bound_to_json(bounds.degree_upper_bound);
  j["degree_lower_companion"] = bound_to_json(bounds.degree_lower_companion);
  return j;
}

}  // namespace clugame
