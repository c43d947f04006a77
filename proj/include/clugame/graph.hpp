#pragma once

#include <utility>
#include <vector>

#include "clugame/rational.hpp"

namespace clugame {

enum class EdgeKind { coordination, anti_coordination };

struct Edge {
  int u = 0;
  int v = 0;
  EdgeKind kind = EdgeKind::coordination;
  Rat weight = 0;
};

// Simple undirected weighted graph with per-edge kind. Immutable after
// construction; adjacency is built once by make_graph/validate.
struct Graph {
  int node_count = 0;
  std::vector<Edge> edges;
  bool planar_declared = false;

  // adj[v] = list of (neighbor, edge index)
  std::vector<std::vector<std::pair<int, int>>> adjacency;

  int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
  bool coordination_only() const;
  bool anti_coordination_only() const;
};

// Validates (node ids in range, no self loops, no duplicate unordered pair,
// weights >= 0) and builds adjacency. Throws Error on violations.
Graph make_graph(int node_count, std::vector<Edge> edges,
                 bool planar_declared = false);

// Number of edges with both endpoints inside `subset` (optionally restricted
// to coordination edges).
int induced_edge_count(const Graph& g, const std::vector<int>& subset,
                       bool coordination_only = false);

}  // namespace clugame
