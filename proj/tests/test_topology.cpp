#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "clugame/errors.hpp"
#include "clugame/generators.hpp"
#include "clugame/rng.hpp"
#include "clugame/topology.hpp"
#include "test_util.hpp"

using namespace clugame;
using namespace clugame::testutil;

namespace {

// Independent oracles: plain exhaustive search, no flow, no blossom, no
// branch and bound. They pin down the expected values the fast paths must
// reproduce.

Rat oracle_density(const Graph& g, bool coordination_only = false) {
  REQUIRE(g.node_count <= 16);
  Rat best = 0;
  for (unsigned mask = 1; mask < (1u << g.node_count); ++mask) {
    int size = __builtin_popcount(mask);
    int inside = 0;
    for (const Edge& e : g.edges) {
      if (coordination_only && e.kind != EdgeKind::coordination) continue;
      if ((mask >> e.u & 1) && (mask >> e.v & 1)) ++inside;
    }
    best = std::max(best, Rat(inside, size));
  }
  return best;
}

int oracle_matching(const Graph& g) {
  // maximum matching by exhaustive search over edge subsets
  int best = 0;
  auto recurse = [&](auto&& self, std::size_t idx, unsigned used,
                     int size) -> void {
    best = std::max(best, size);
    for (std::size_t i = idx; i < g.edges.size(); ++i) {
      const Edge& e = g.edges[i];
      unsigned mask = (1u << e.u) | (1u << e.v);
      if (used & mask) continue;
      self(self, i + 1, used | mask, size + 1);
    }
  };
  recurse(recurse, 0, 0, 0);
  return best;
}

bool oracle_colorable(const Graph& g, int k) {
  std::vector<int> color(g.node_count, 0);
  auto recurse = [&](auto&& self, int v) -> bool {
    if (v == g.node_count) return true;
    for (int c = 1; c <= k; ++c) {
      bool ok = true;
      for (const auto& [nb, ei] : g.adjacency[v]) {
        if (nb < v && color[nb] == c) ok = false;
      }
      if (!ok) continue;
      color[v] = c;
      if (self(self, v + 1)) return true;
      color[v] = 0;
    }
    return false;
  };
  return recurse(recurse, 0);
}

int oracle_chromatic(const Graph& g) {
  for (int k = 1;; ++k) {
    if (oracle_colorable(g, k)) return k;
  }
}

void check_witness(const Graph& g, const DensityResult& result,
                   bool coordination_only = false) {
  REQUIRE(!result.witness.empty());
  int inside = 0;
  std::vector<char> in(g.node_count, 0);
  for (int v : result.witness) in[v] = 1;
  for (const Edge& e : g.edges) {
    if (coordination_only && e.kind != EdgeKind::coordination) continue;
    if (in[e.u] && in[e.v]) ++inside;
  }
  CHECK(Rat(inside, result.witness.size()) == result.density);
}

}  // namespace

TEST_CASE("density of named graphs") {
  // K_{3,4}: densest subgraph is the whole graph, l*r/(l+r)
  DensityResult k34 = max_subgraph_density(complete_bipartite(3, 4));
  CHECK(k34.density == Rat(12, 7));
  CHECK(k34.witness.size() == 7);
  check_witness(complete_bipartite(3, 4), k34);

  DensityResult tri = max_subgraph_density(triangle());
  CHECK(tri.density == Rat(1));
  check_witness(triangle(), tri);

  DensityResult pet = max_subgraph_density(petersen());
  CHECK(pet.density == Rat(3, 2));
  CHECK(oracle_density(petersen()) == Rat(3, 2));
  check_witness(petersen(), pet);

  // empty edge set: density 0 with a singleton witness
  DensityResult empty = max_subgraph_density(unit_graph(4, {}));
  CHECK(empty.density == Rat(0));
  CHECK(empty.witness.size() == 1);
}

TEST_CASE("density agrees with subset enumeration on random graphs") {
  Rng seeds(2024);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + static_cast<int>(seeds.below(9));
    Graph g = gen_gnp({n, Rat(1, 2), seeds.next()});
    DensityResult fast = max_subgraph_density(g);
    CHECK(fast.density == oracle_density(g));
    if (!g.edges.empty()) check_witness(g, fast);
  }
}

TEST_CASE("coordination-only density dominance") {
  Rng seeds(99);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 4 + static_cast<int>(seeds.below(6));
    GnpParams params{n, Rat(1, 2), seeds.next()};
    Graph mixed = gen_gnp(params);
    // flip ~half the edges to anti-coordination
    Rng flip(seeds.next());
    for (Edge& e : mixed.edges) {
      if (flip.below(2) == 0) e.kind = EdgeKind::anti_coordination;
    }
    DensityResult all = max_subgraph_density(mixed, EdgeFilter::all);
    DensityResult coord =
        max_subgraph_density(mixed, EdgeFilter::coordination_only);
    CHECK(coord.density <= all.density);
    CHECK(coord.density == oracle_density(mixed, true));
  }
}

TEST_CASE("declared planar graphs stay below density 3") {
  for (const Graph& g : {triangle(), k4(), grid3x3(), c5()}) {
    CHECK(max_subgraph_density(g).density < Rat(3));
  }
}

TEST_CASE("topology stats on named graphs") {
  TopologyStats star5 = compute_topology_stats(star(5));
  CHECK(star5.max_degree == 5);
  CHECK(star5.coloring->chromatic_number == 2);
  CHECK(star5.matching.size == 1);

  TopologyStats cycle5 = compute_topology_stats(c5());
  CHECK(cycle5.max_degree == 2);
  CHECK(cycle5.coloring->chromatic_number == 3);
  CHECK(cycle5.matching.size == 2);

  TopologyStats pet = compute_topology_stats(petersen());
  CHECK(pet.max_degree == 3);
  CHECK(pet.coloring->chromatic_number == 3);
  CHECK(pet.matching.size == 5);
  CHECK(oracle_chromatic(petersen()) == 3);
  CHECK(oracle_matching(petersen()) == 5);
}

TEST_CASE("chromatic cap is enforced") {
  Graph big = gen_gnp({21, Rat(1, 4), 5});
  CHECK_THROWS_AS(chromatic_number(big, 20), Error);
  TopologyOptions options;
  options.compute_chromatic = false;
  TopologyStats stats = compute_topology_stats(big, options);
  CHECK(!stats.coloring.has_value());
}

TEST_CASE("matching and chromatic agree with oracles on random graphs") {
  Rng seeds(500);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 3 + static_cast<int>(seeds.below(8));
    Graph g = gen_gnp({n, Rat(2, 5), seeds.next()});
    MatchingResult matching = maximum_matching(g);
    CHECK(matching.size == oracle_matching(g));
    // matching edges must be pairwise disjoint
    std::vector<char> used(n, 0);
    for (auto [u, v] : matching.edges) {
      CHECK(!used[u]);
      CHECK(!used[v]);
      used[u] = used[v] = 1;
    }
    ColoringResult coloring = chromatic_number(g);
    CHECK(coloring.chromatic_number == oracle_chromatic(g));
    for (const Edge& e : g.edges) {
      CHECK(coloring.coloring[e.u] != coloring.coloring[e.v]);
    }
    CHECK(*std::max_element(coloring.coloring.begin(),
                            coloring.coloring.end()) ==
          coloring.chromatic_number);
  }
}

TEST_CASE("topological poa bounds") {
  // symmetric equal split on the triangle: density bound 1 + 2*1 = 3
  ClusteringGame tri = make_game(3, 3, {{0, 1}, {1, 2}, {2, 0}});
  PoaBounds bounds = topological_poa_bounds(tri, 1, 1);
  CHECK(*bounds.equal_split_density_bound.value == Rat(3));
  CHECK(*bounds.density_bound.value == Rat(3));
  CHECK(*bounds.refined_coordination_bound.value == Rat(7));
  CHECK(!bounds.planar_bound.applicable());
  CHECK(!bounds.degree_upper_bound.applicable());  // k = 1

  // disparity 3 on K_{3,4}: 1 + 4 * 12/7 = 55/7
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) {
      edges.push_back({i, 3 + j, EdgeKind::coordination, 1, 3, 1});
    }
  }
  ClusteringGame uneven = make_game(7, 2, edges);
  PoaBounds k34 = topological_poa_bounds(uneven, 1, 1);
  CHECK(*k34.density_bound.value == Rat(55, 7));
  CHECK(!k34.equal_split_density_bound.applicable());

  // zero share: disparity infinite, density bound not applicable
  ClusteringGame zero =
      make_game(2, 2, {{0, 1, EdgeKind::coordination, 1, 0, 1}});
  PoaBounds zb = topological_poa_bounds(zero, 1, 1);
  CHECK(!zb.density_bound.applicable());

  // coordination, equal split, zero preferences, k = 2: degree bounds
  ClusteringGame star_game = make_game(6, 3, {{0, 1}, {0, 2}, {0, 3},
                                              {0, 4}, {0, 5}});
  PoaBounds sb = topological_poa_bounds(star_game, 1, 2);
  CHECK(*sb.degree_upper_bound.value == Rat(10));
  CHECK(*sb.degree_lower_companion.value == Rat(4));

  // planar declared
  GameInput planar_input = make_input(3, 2, {{0, 1}, {1, 2}, {2, 0}});
  planar_input.planar_declared = true;
  PoaBounds pb = topological_poa_bounds(build_game(planar_input), 1, 1);
  CHECK(*pb.planar_bound.value == Rat(7));
}
