#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "clugame/equilibria.hpp"
#include "clugame/errors.hpp"
#include "clugame/game_io.hpp"
#include "clugame/generators.hpp"
#include "clugame/rng.hpp"
#include "clugame/shapley.hpp"
#include "clugame/topology.hpp"
#include "test_util.hpp"

using namespace clugame;
using namespace clugame::testutil;

namespace {

bool is_nash(const ClusteringGame& game, const StrategyProfile& s) {
  return !is_epsilon_k_equilibrium(game, s, {Rat(1), 1}).has_value();
}

Rat instance_ratio(const ConstructedInstance& inst) {
  return social_welfare(inst.game, *inst.optimum) /
         social_welfare(inst.game, inst.equilibrium);
}

}  // namespace

TEST_CASE("gnp endpoints") {
  Graph empty = gen_gnp({10, Rat(0), 1});
  CHECK(empty.edges.empty());
  Graph complete = gen_gnp({10, Rat(1), 1});
  CHECK(complete.edges.size() == 45);
  Graph complete_fast = gen_gnp_fast({10, Rat(1), 1});
  CHECK(complete_fast.edges.size() == 45);
  Graph empty_fast = gen_gnp_fast({10, Rat(0), 1});
  CHECK(empty_fast.edges.empty());
}

TEST_CASE("gnp determinism is byte for byte") {
  for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
    Graph a = gen_gnp({30, Rat(1, 5), seed});
    Graph b = gen_gnp({30, Rat(1, 5), seed});
    REQUIRE(a.edges.size() == b.edges.size());
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
      CHECK(a.edges[i].u == b.edges[i].u);
      CHECK(a.edges[i].v == b.edges[i].v);
    }
  }
}

TEST_CASE("gnp edge counts concentrate around the binomial mean") {
  // exact sampler, n = 2000, p = 3/n over 60 seeds
  {
    const int n = 2000;
    const int seeds = 60;
    double total = 0;
    for (int s = 0; s < seeds; ++s) {
      total += static_cast<double>(
          gen_gnp(sparse_gnp(n, 3, 1000 + s)).edges.size());
    }
    double pairs = n * (n - 1) / 2.0;
    double p = 3.0 / n;
    double mean = pairs * p;
    double sigma = std::sqrt(pairs * p * (1 - p) / seeds);
    CHECK(std::abs(total / seeds - mean) <= 3 * sigma);
  }
  // skip sampler, n = 10^4, p = 3/n over 100 seeds
  {
    const int n = 10000;
    const int seeds = 100;
    double total = 0;
    for (int s = 0; s < seeds; ++s) {
      total += static_cast<double>(
          gen_gnp_fast(sparse_gnp(n, 3, 5000 + s)).edges.size());
    }
    double pairs = static_cast<double>(n) * (n - 1) / 2.0;
    double p = 3.0 / n;
    double mean = pairs * p;
    double sigma = std::sqrt(pairs * p * (1 - p) / seeds);
    CHECK(std::abs(total / seeds - mean) <= 3 * sigma);
  }
}

TEST_CASE("bipartite tightness instance hits the proof ratio") {
  ConstructedInstance inst = bipartite_tightness_instance(2, 3, 1, 1);
  CHECK(is_nash(inst.game, inst.equilibrium));
  CHECK(instance_ratio(inst) == Rat(17, 5));

  // full enumeration agrees: the constructed pair is worst/best
  PoaResult poa = price_of_anarchy(inst.game, {Rat(1), 1});
  CHECK(poa.kind == PoaResult::Kind::value);
  CHECK(poa.value == Rat(17, 5));

  ConstructedInstance tiny = bipartite_tightness_instance(1, 1, 1, 1);
  CHECK(is_nash(tiny.game, tiny.equilibrium));
  CHECK(instance_ratio(tiny) == Rat(2));

  // uneven Shapley weights keep the equilibrium property
  ConstructedInstance uneven =
      bipartite_tightness_instance(2, 3, Rat(3), Rat(1, 2));
  CHECK(is_nash(uneven.game, uneven.equilibrium));
  Rat l(2), r(3), gl(3), gr(1, 2);
  Rat expect = 1 + (l * r) / (l * gl / (gl + gr) + r * gr / (gl + gr));
  CHECK(instance_ratio(uneven) == expect);
}

TEST_CASE("bipartite ratios grow with r toward 1 + 2l") {
  Rat previous = 0;
  for (int r : {10, 100, 1000}) {
    ConstructedInstance inst = bipartite_tightness_instance(3, r, 1, 1);
    CHECK(is_nash(inst.game, inst.equilibrium));
    Rat ratio = instance_ratio(inst);
    CHECK(ratio == 1 + Rat(6 * r, 3 + r));
    CHECK(ratio > previous);
    CHECK(ratio < Rat(7));
    previous = ratio;
  }
}

TEST_CASE("density lower-bound instances") {
  ConstructedInstance tri = density_lb_instance(triangle(), {0, 1, 2});
  CHECK(is_nash(tri.game, tri.equilibrium));
  CHECK(instance_ratio(tri) == Rat(3));
  PoaResult brute = price_of_anarchy(tri.game, {Rat(1), 1});
  CHECK(brute.value == Rat(3));

  ConstructedInstance lone = density_lb_instance(triangle(), {0});
  CHECK(instance_ratio(lone) == Rat(1));

  // Petersen: rho = 3/2, certified PoA = 1 + 2 * 3/2 = 4
  DensityResult rho = max_subgraph_density(petersen());
  ConstructedInstance pet = density_lb_instance(petersen(), rho.witness);
  auto certified =
      poa_from_certified_profiles(pet.game, pet.equilibrium, *pet.optimum);
  REQUIRE(certified.has_value());
  CHECK(*certified == Rat(4));
}

TEST_CASE("matching lower-bound instances") {
  ConstructedInstance k4inst = matching_lb_instance(k4(), 2);
  CHECK(k4inst.game.meta.at("matching_size").get<int>() == 2);
  CHECK(is_nash(k4inst.game, k4inst.equilibrium));
  CHECK(instance_ratio(k4inst) >= Rat(6, 4));

  ConstructedInstance single =
      matching_lb_instance(unit_graph(2, {{0, 1}}), 2);
  CHECK(is_nash(single.game, single.equilibrium));
  CHECK(instance_ratio(single) == Rat(1));

  CHECK_THROWS_AS(matching_lb_instance(unit_graph(3, {}), 2), Error);
}

TEST_CASE("matching lower bound on a seeded dense graph") {
  Graph g = gen_gnp(dense_gnp(60, Rat(1, 2), 424242));
  ConstructedInstance inst = matching_lb_instance(g, 16);
  CHECK(is_nash(inst.game, inst.equilibrium));
  int q = inst.game.meta.at("matching_size").get<int>();
  int edges_vm = 0;
  for (const Edge& e : inst.game.graph.edges) {
    if (e.weight > 0) ++edges_vm;
  }
  Rat ratio = instance_ratio(inst);
  CHECK(ratio >= Rat(edges_vm, 2 * q));
  CHECK(ratio / 16 > 0);
}

TEST_CASE("chromatic threshold instances") {
  ConstructedInstance tri = chromatic_lb_instance(triangle());
  CHECK(tri.game.color_count == 4);
  CHECK(is_nash(tri.game, tri.equilibrium));
  CHECK(social_welfare(tri.game, tri.equilibrium) == Rat(0));
  PoaResult poa = price_of_anarchy(tri.game, {Rat(1), 1});
  CHECK(poa.kind == PoaResult::Kind::infinite);

  ConstructedInstance edge = chromatic_lb_instance(unit_graph(2, {{0, 1}}));
  CHECK(edge.game.color_count == 3);
  CHECK(price_of_anarchy(edge.game, {Rat(1), 1}).kind ==
        PoaResult::Kind::infinite);

  // restricting to fewer colors than chi leaves some edge satisfied in
  // every profile, so the PoA turns finite
  ClusteringGame restricted = make_game(3, 2, {{0, 1}, {1, 2}, {2, 0}});
  PoaResult finite = price_of_anarchy(restricted, {Rat(1), 1});
  CHECK(finite.kind == PoaResult::Kind::value);
}

TEST_CASE("degree lower-bound instances") {
  ConstructedInstance inst = degree_lb_instance(star(5), 1, 2);
  CHECK(social_welfare(inst.game, inst.equilibrium) == Rat(1));
  CHECK(!is_epsilon_k_equilibrium(inst.game, inst.equilibrium, {Rat(1), 2})
             .has_value());
  auto [opt, opt_value] = social_optimum(inst.game);
  Rat ratio = opt_value / social_welfare(inst.game, inst.equilibrium);
  CHECK(ratio >= Rat(4));  // eps * (Delta/(k-1) - 1) = 4

  ConstructedInstance fast = degree_lb_instance(star(5), 2, 2);
  CHECK(!is_epsilon_k_equilibrium(fast.game, fast.equilibrium, {Rat(2), 2})
             .has_value());
  auto [opt2, opt2_value] = social_optimum(fast.game);
  Rat ratio2 = opt2_value / social_welfare(fast.game, fast.equilibrium);
  CHECK(ratio2 >= Rat(8));

  CHECK_THROWS_AS(degree_lb_instance(star(1), 1, 2), Error);
  try {
    degree_lb_instance(star(1), 1, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegreeTooSmall);
  }
}

TEST_CASE("random games honor their rule family") {
  Rng seeds(31415);
  Graph g = gen_gnp({6, Rat(1, 2), seeds.next()});

  RandomGameParams equal;
  equal.colors = 3;
  equal.rule = RandomGameParams::RuleFamily::equal_split;
  equal.seed = seeds.next();
  ClusteringGame eq_game = random_game(g, equal);
  auto eq_class = classify_rule(eq_game.graph, eq_game.rule);
  REQUIRE(eq_class.is_gws());
  for (const Rat& gamma : eq_class.certificate().gamma) {
    CHECK(gamma == Rat(1));
  }

  RandomGameParams shapley;
  shapley.colors = 3;
  shapley.rule = RandomGameParams::RuleFamily::weighted_shapley;
  shapley.seed = seeds.next();
  ClusteringGame sh_game = random_game(g, shapley);
  CHECK(classify_rule(sh_game.graph, sh_game.rule).is_gws());

  // all-anti on a path with two colors stays a potential game
  Graph path = unit_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  RandomGameParams anti;
  anti.colors = 2;
  anti.kinds = RandomGameParams::KindMix::all_anti_coordination;
  anti.seed = seeds.next();
  ClusteringGame anti_game = random_game(path, anti);
  CHECK(!enumerate_equilibria(anti_game, {Rat(1), 1}).empty());
}

TEST_CASE("identical seeds give identical serialized games") {
  Graph g = gen_gnp({7, Rat(1, 2), 5150});
  RandomGameParams params;
  params.colors = 3;
  params.rule = RandomGameParams::RuleFamily::random_with_zeros;
  params.kinds = RandomGameParams::KindMix::mixed;
  params.random_preferences = true;
  params.seed = 6174;
  std::string a = game_to_json(random_game(g, params)).dump();
  std::string b = game_to_json(random_game(g, params)).dump();
  CHECK(a == b);
}

TEST_CASE("strategy set distributions") {
  StrategySetDistribution one;
  one.colors = 1;
  auto singletons = random_strategy_sets(50, one, 9);
  for (const auto& s : singletons) CHECK(s == std::vector<int>{1});

  StrategySetDistribution uniform;
  uniform.colors = 3;
  REQUIRE(uniform.claimed_common_color_constant().has_value());
  Rat claimed = *uniform.claimed_common_color_constant();
  CHECK(claimed == Rat(37, 49));

  // empirical frequency over 10^5 sampled pairs within 3 sigma of exact
  const int pairs = 100000;
  Rng rng(112233);
  int shared = 0;
  for (int i = 0; i < pairs; ++i) {
    auto draw = random_strategy_sets(2, uniform, rng.next());
    bool hit = false;
    for (int c : draw[0]) {
      if (std::find(draw[1].begin(), draw[1].end(), c) != draw[1].end()) {
        hit = true;
      }
    }
    if (hit) ++shared;
  }
  double p = to_double(claimed);
  double sigma = std::sqrt(p * (1 - p) / pairs);
  CHECK(std::abs(static_cast<double>(shared) / pairs - p) <= 3 * sigma);

  // the pair family always shares color 1 but promises no constant: it is
  // the family whose k = 1 price of anarchy grows with n
  StrategySetDistribution pair;
  pair.family = StrategySetDistribution::Family::pair_with_common;
  pair.colors = 5;
  CHECK(!pair.claimed_common_color_constant().has_value());
  auto draws = random_strategy_sets(30, pair, 77);
  for (const auto& s : draws) {
    REQUIRE(s.size() == 2);
    CHECK(s[0] == 1);
    CHECK(s[1] >= 2);
    CHECK(s[1] <= 5);
  }
}

TEST_CASE("construction meta is embedded for provenance") {
  ConstructedInstance inst = bipartite_tightness_instance(2, 3, 1, 1);
  CHECK(inst.game.meta.at("construction") == "bipartite-tightness");
  nlohmann::ordered_json j = game_to_json(inst.game);
  CHECK(j.contains("meta"));
}
