#include "clugame/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "clugame/errors.hpp"

namespace clugame {

bool Graph::coordination_only() const {
  return std::all_of(edges.begin(), edges.end(), [](const Edge& e) {
    return e.kind == EdgeKind::coordination;
  });
}

bool Graph::anti_coordination_only() const {
  return std::all_of(edges.begin(), edges.end(), [](const Edge& e) {
    return e.kind == EdgeKind::anti_coordination;
  });
}

Graph make_graph(int node_count, std::vector<Edge> edges,
                 bool planar_declared) {
  if (node_count <= 0) {
    throw Error(ErrorCode::BadArguments, "node count must be positive");
  }
  Graph g;
  g.node_count = node_count;
  g.planar_declared = planar_declared;
  g.edges = std::move(edges);
  g.adjacency.assign(node_count, {});

  std::set<std::pair<int, int>> seen;
  for (std::size_t idx = 0; idx < g.edges.size(); ++idx) {
    const Edge& e = g.edges[idx];
    if (e.u < 0 || e.u >= node_count || e.v < 0 || e.v >= node_count) {
      throw Error(ErrorCode::BadArguments,
                  "edge " + std::to_string(idx) + ": node id out of range");
    }
    if (e.u == e.v) {
      throw Error(ErrorCode::SelfLoop,
                  "edge " + std::to_string(idx) + ": self loop at node " +
                      std::to_string(e.u));
    }
    if (e.weight < 0) {
      throw Error(ErrorCode::NegativeWeight,
                  "edge " + std::to_string(idx) + ": negative weight");
    }
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::DuplicateEdge,
                  "edge " + std::to_string(idx) + ": duplicate pair {" +
                      std::to_string(key.first) + "," +
                      std::to_string(key.second) + "}");
    }
    g.adjacency[e.u].emplace_back(e.v, static_cast<int>(idx));
    g.adjacency[e.v].emplace_back(e.u, static_cast<int>(idx));
  }
  return g;
}

int induced_edge_count(const Graph& g, const std::vector<int>& subset,
                       bool coordination_only) {
  std::vector<char> in(g.node_count, 0);
  for (int v : subset) in[v] = 1;
  int count = 0;
  for (const Edge& e : g.edges) {
    if (coordination_only && e.kind != EdgeKind::coordination) continue;
    if (in[e.u] && in[e.v]) ++count;
  }
  return count;
}

}  // namespace clugame
