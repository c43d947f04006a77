#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "clugame/errors.hpp"
#include "clugame/game.hpp"
#include "clugame/game_io.hpp"
#include "clugame/generators.hpp"
#include "clugame/rng.hpp"
#include "test_util.hpp"

using namespace clugame;
using namespace clugame::testutil;

namespace {

ErrorCode catch_code(const GameInput& input) {
  try {
    build_game(input);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected build_game to throw");
  return ErrorCode::BadArguments;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rat("3/4") == Rat(3, 4));
  CHECK(parse_rat("7") == Rat(7));
  CHECK(parse_rat("-2/6") == Rat(-1, 3));
  CHECK(format_rat(Rat(3)) == "3/1");
  CHECK(format_rat_compact(Rat(3)) == "3");
  CHECK(format_rat_compact(Rat(1, 2)) == "1/2");
  CHECK_THROWS_AS(parse_rat("0.5"), Error);
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("x"), Error);
}

TEST_CASE("minimal game builds with expected flags") {
  ClusteringGame game = make_game(2, 2, {{0, 1}});
  CHECK(game.symmetric);
  CHECK(game.positive_rule);
  CHECK(game.equal_split);
  CHECK(game.graph.coordination_only());
  CHECK(game.warnings.empty());
}

TEST_CASE("build_game rejects invalid inputs") {
  CHECK(catch_code(make_input(2, 2, {{0, 1, EdgeKind::coordination, 1, 0, 0}})) ==
        ErrorCode::ZeroShareSum);
  CHECK(catch_code(make_input(2, 2, {{0, 0}})) == ErrorCode::SelfLoop);
  CHECK(catch_code(make_input(2, 2, {{0, 1}, {1, 0}})) ==
        ErrorCode::DuplicateEdge);
  CHECK(catch_code(make_input(2, 2, {{0, 1, EdgeKind::coordination, -1}})) ==
        ErrorCode::NegativeWeight);

  GameInput empty_set = make_input(2, 2, {{0, 1}});
  empty_set.strategy_sets = {{1}, {}};
  CHECK(catch_code(empty_set) == ErrorCode::EmptyStrategySet);

  GameInput bad_color = make_input(2, 2, {{0, 1}});
  bad_color.strategy_sets = {{1, 3}, {1}};
  CHECK(catch_code(bad_color) == ErrorCode::ColorOutOfRange);

  GameInput bad_pref = make_input(2, 2, {{0, 1}});
  bad_pref.strategy_sets = {{1}, {1, 2}};
  bad_pref.preferences = {{{2, Rat(1)}}, {}};
  CHECK(catch_code(bad_pref) == ErrorCode::ColorOutOfRange);
}

TEST_CASE("singleton sets with anti-coordination edges warn") {
  GameInput input =
      make_input(2, 2, {{0, 1, EdgeKind::anti_coordination}});
  input.strategy_sets = {{1}, {1, 2}};
  ClusteringGame game = build_game(input);
  REQUIRE(game.warnings.size() == 1);
}

TEST_CASE("utility matches the share formula") {
  // equal split, both endpoints get w/2
  ClusteringGame equal =
      make_game(2, 2, {{0, 1, EdgeKind::coordination, 2}});
  CHECK(utility(equal, prof({1, 1}), 0) == Rat(1));
  CHECK(utility(equal, prof({1, 1}), 1) == Rat(1));

  // shares (1,3) on weight 4: 1 and 3
  ClusteringGame uneven =
      make_game(2, 2, {{0, 1, EdgeKind::coordination, 4, 1, 3}});
  CHECK(utility(uneven, prof({2, 2}), 0) == Rat(1));
  CHECK(utility(uneven, prof({2, 2}), 1) == Rat(3));

  // satisfied anti edge plus preference
  GameInput anti = make_input(2, 2, {{0, 1, EdgeKind::anti_coordination, 2}});
  anti.preferences = {{{1, Rat(5)}}, {}};
  ClusteringGame anti_game = build_game(anti);
  CHECK(utility(anti_game, prof({1, 2}), 0) == Rat(6));
  CHECK(utility(anti_game, prof({1, 1}), 0) == Rat(5));
}

TEST_CASE("social welfare on the triangle") {
  ClusteringGame game = make_game(3, 3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(social_welfare(game, prof({1, 1, 1})) == Rat(3));
  CHECK(social_welfare(game, prof({1, 2, 3})) == Rat(0));
}

TEST_CASE("max disparity") {
  DistributionRule equal = DistributionRule::make_equal_split(3);
  CHECK(*max_disparity(equal) == Rat(1));

  DistributionRule uneven;
  uneven.shares = {{Rat(1), Rat(3)}, {Rat(1), Rat(1)}};
  CHECK(*max_disparity(uneven) == Rat(3));

  DistributionRule zero;
  zero.shares = {{Rat(0), Rat(1)}};
  CHECK(!max_disparity(zero).has_value());
}

TEST_CASE("welfare decomposition and share efficiency on random games") {
  Rng seeds(7);
  for (int trial = 0; trial < 25; ++trial) {
    Graph g = gen_gnp({6, Rat(1, 2), seeds.next()});
    RandomGameParams params;
    params.colors = 3;
    params.rule = RandomGameParams::RuleFamily::random_positive;
    params.kinds = RandomGameParams::KindMix::mixed;
    params.random_preferences = true;
    params.seed = seeds.next();
    ClusteringGame game = random_game(g, params);

    Rng colors(seeds.next());
    StrategyProfile s;
    for (int i = 0; i < 6; ++i) {
      s.colors.push_back(1 + static_cast<int>(colors.below(3)));
    }

    // welfare = sum of preferences at chosen colors + satisfied weights
    Rat expected = 0;
    for (int i = 0; i < 6; ++i) expected += game.preference(i, s.colors[i]);
    for (std::size_t ei = 0; ei < game.graph.edges.size(); ++ei) {
      const Edge& e = game.graph.edges[ei];
      if (edge_satisfied(e.kind, s.colors[e.u], s.colors[e.v])) {
        expected += e.weight;
        // share efficiency: endpoint shares of a satisfied edge sum to w_e
        CHECK(game.share_value(ei, e.u) * e.weight +
                  game.share_value(ei, e.v) * e.weight ==
              e.weight);
      }
    }
    CHECK(social_welfare(game, s) == expected);

    Rat total = 0;
    for (int i = 0; i < 6; ++i) total += utility(game, s, i);
    CHECK(total == social_welfare(game, s));

    // scaling by a positive rational scales utilities and welfare
    ClusteringGame scaled = scale_game(game, Rat(3, 2));
    CHECK(social_welfare(scaled, s) == Rat(3, 2) * social_welfare(game, s));
    CHECK(utility(scaled, s, 0) == Rat(3, 2) * utility(game, s, 0));
  }
}

TEST_CASE("adding a satisfied edge never hurts its endpoints") {
  Rng seeds(11);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = gen_gnp({5, Rat(1, 2), seeds.next()});
    RandomGameParams params;
    params.colors = 3;
    params.seed = seeds.next();
    ClusteringGame game = random_game(g, params);

    Rng colors(seeds.next());
    StrategyProfile s;
    for (int i = 0; i < 5; ++i) {
      s.colors.push_back(1 + static_cast<int>(colors.below(3)));
    }

    // find a missing pair and add it as an edge satisfied under s
    for (int u = 0; u < 5; ++u) {
      for (int v = u + 1; v < 5; ++v) {
        bool exists = false;
        for (const auto& [nb, ei] : game.graph.adjacency[u]) {
          if (nb == v) exists = true;
        }
        if (exists) continue;
        GameInput input = make_input(5, 3, {});
        for (std::size_t ei = 0; ei < game.graph.edges.size(); ++ei) {
          const Edge& e = game.graph.edges[ei];
          EdgeSpec spec{e.u, e.v, e.kind, e.weight,
                        game.rule.shares[ei].first,
                        game.rule.shares[ei].second};
          input.edges.push_back(make_input(5, 3, {spec}).edges[0]);
        }
        GameInput::EdgeInput extra;
        extra.u = u;
        extra.v = v;
        extra.kind = s.colors[u] == s.colors[v]
                         ? EdgeKind::coordination
                         : EdgeKind::anti_coordination;
        extra.weight = 2;
        input.edges.push_back(extra);
        ClusteringGame bigger = build_game(input);
        CHECK(utility(bigger, s, u) >= utility(game, s, u));
        CHECK(utility(bigger, s, v) >= utility(game, s, v));
      }
    }
  }
}

TEST_CASE("game files round trip byte for byte") {
  ConstructedInstance inst = bipartite_tightness_instance(2, 3, 1, 1);
  nlohmann::ordered_json first = game_to_json(inst.game);
  ClusteringGame reparsed = build_game(game_input_from_json(first));
  nlohmann::ordered_json second = game_to_json(reparsed);
  CHECK(first.dump() == second.dump());
}

TEST_CASE("game files reject decimal floats") {
  nlohmann::json j = {
      {"n", 2},
      {"colors", 2},
      {"edges",
       {{{"u", 0}, {"v", 1}, {"kind", "coord"}, {"w", 0.5}}}},
  };
  CHECK_THROWS_AS(game_input_from_json(j), Error);
}

TEST_CASE("rationals accepted as p/q strings or integers") {
  nlohmann::json j = {
      {"n", 2},
      {"colors", 2},
      {"edges",
       {{{"u", 0},
         {"v", 1},
         {"kind", "anti"},
         {"w", "3/2"},
         {"alpha", {1, "2/1"}}}}},
  };
  ClusteringGame game = build_game(game_input_from_json(j));
  CHECK(game.graph.edges[0].weight == Rat(3, 2));
  CHECK(game.rule.shares[0].second == Rat(2));
  CHECK(game.graph.edges[0].kind == EdgeKind::anti_coordination);
}

TEST_CASE("rng determinism and bernoulli exactness") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  // P(true) = 1/4 exactly: count over many draws stays near the mean
  Rng rng(123);
  int hits = 0;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    if (rng.bernoulli(Rat(1, 4))) ++hits;
  }
  double freq = static_cast<double>(hits) / draws;
  CHECK(freq > 0.23);
  CHECK(freq < 0.27);
}
