#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "clugame/cli.hpp"
#include "clugame/equilibria.hpp"
#include "clugame/game_io.hpp"
#include "clugame/generators.hpp"
#include "clugame/topology.hpp"
#include "test_util.hpp"

using namespace clugame;
using namespace clugame::testutil;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "clugame_cli_test";
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

nlohmann::json run_json(const CommandSpec& spec, int expect_code = 0) {
  std::ostringstream out, err;
  int code = run_command(spec, out, err);
  INFO("stderr: ", err.str());
  REQUIRE(code == expect_code);
  return nlohmann::json::parse(out.str());
}

}  // namespace

TEST_CASE("gen then poa pipeline reproduces the tightness ratio") {
  TempDir dir;
  CommandSpec gen;
  gen.cmd = CommandSpec::Cmd::gen;
  gen.construction = "bipartite-tightness";
  gen.l = 2;
  gen.r = 3;
  gen.out_path = dir.file("bipartite.json");
  std::ostringstream out, err;
  REQUIRE(run_command(gen, out, err) == 0);

  CommandSpec poa;
  poa.cmd = CommandSpec::Cmd::poa;
  poa.game_path = dir.file("bipartite.json");
  nlohmann::json j = run_json(poa);
  CHECK(j.at("poa") == "17/5");

  // CLI result equals the library on the parsed input
  ClusteringGame game = build_game(read_game_file(dir.file("bipartite.json")));
  PoaResult direct = price_of_anarchy(game, {Rat(1), 1});
  CHECK(format_rat(direct.value) == j.at("poa"));
  CHECK(j.at("optimum").get<std::vector<int>>() == direct.optimum.colors);
}

TEST_CASE("density-lb pipeline gives poa 3 on the triangle") {
  TempDir dir;
  write_game_file(make_game(3, 2, {{0, 1}, {1, 2}, {2, 0}}),
                  dir.file("triangle.json"));

  CommandSpec gen;
  gen.cmd = CommandSpec::Cmd::gen;
  gen.construction = "density-lb";
  gen.graph_path = dir.file("triangle.json");
  gen.subset = "witness";
  gen.out_path = dir.file("density.json");
  std::ostringstream out, err;
  REQUIRE(run_command(gen, out, err) == 0);

  CommandSpec poa;
  poa.cmd = CommandSpec::Cmd::poa;
  poa.game_path = dir.file("density.json");
  nlohmann::json j = run_json(poa);
  CHECK(j.at("poa") == "3/1");
  CHECK(j.at("bounds").at("equal_split_density_bound") == "3/1");
}

TEST_CASE("analyze emits the documented keys") {
  TempDir dir;
  write_game_file(make_game(10, 2, {}), dir.file("empty.json"));
  // overwrite with the Petersen graph as a coordination game
  GameInput input;
  input.node_count = 10;
  input.color_count = 2;
  for (const Edge& e : petersen().edges) {
    GameInput::EdgeInput ge;
    ge.u = e.u;
    ge.v = e.v;
    ge.weight = 1;
    input.edges.push_back(ge);
  }
  write_game_file(build_game(input), dir.file("petersen.json"));

  CommandSpec analyze;
  analyze.cmd = CommandSpec::Cmd::analyze;
  analyze.game_path = dir.file("petersen.json");
  nlohmann::json j = run_json(analyze);
  CHECK(j.at("density") == "3/2");
  CHECK(j.at("coord_density") == "3/2");
  CHECK(j.at("max_degree") == 3);
  CHECK(j.at("chromatic") == 3);
  CHECK(j.at("matching_size") == 5);
  CHECK(j.at("density_witness").size() == 10);
}

TEST_CASE("classify subcommand") {
  TempDir dir;
  write_game_file(make_game(4, 2, {{0, 1}, {1, 2}, {2, 3}}),
                  dir.file("path.json"));
  CommandSpec classify;
  classify.cmd = CommandSpec::Cmd::classify;
  classify.game_path = dir.file("path.json");
  nlohmann::json j = run_json(classify);
  CHECK(j.at("verdict") == "gws");
  CHECK(j.at("gamma").size() == 4);
}

TEST_CASE("br-graph subcommand") {
  TempDir dir;
  write_game_file(make_game(3, 2, {{0, 1}, {1, 2}, {2, 0}}),
                  dir.file("triangle.json"));
  CommandSpec br;
  br.cmd = CommandSpec::Cmd::br_graph;
  br.game_path = dir.file("triangle.json");
  nlohmann::json j = run_json(br);
  CHECK(j.at("result") == "acyclic");
}

TEST_CASE("generated files round trip byte for byte") {
  TempDir dir;
  CommandSpec gen;
  gen.cmd = CommandSpec::Cmd::gen;
  gen.construction = "random";
  gen.n = 6;
  gen.d = Rat(2);
  gen.seed = 99;
  gen.colors = 3;
  gen.rule_family = "weighted-shapley";
  gen.kind_mix = "mixed";
  gen.out_path = dir.file("random.json");
  std::ostringstream out, err;
  REQUIRE(run_command(gen, out, err) == 0);

  std::ifstream in(dir.file("random.json"));
  std::string original((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  ClusteringGame game = build_game(read_game_file(dir.file("random.json")));
  write_game_file(game, dir.file("copy.json"));
  std::ifstream in2(dir.file("copy.json"));
  std::string copy((std::istreambuf_iterator<char>(in2)),
                   std::istreambuf_iterator<char>());
  CHECK(original == copy);
}

TEST_CASE("error exit codes") {
  CommandSpec missing;
  missing.cmd = CommandSpec::Cmd::poa;
  missing.game_path = "/nonexistent/game.json";
  std::ostringstream out, err;
  CHECK(run_command(missing, out, err) == 1);
  nlohmann::json j = nlohmann::json::parse(err.str());
  CHECK(j.at("error") == "IoError");

  TempDir dir;
  write_game_file(make_game(4, 3, {{0, 1}, {1, 2}, {2, 3}}),
                  dir.file("game.json"));
  CommandSpec capped;
  capped.cmd = CommandSpec::Cmd::poa;
  capped.game_path = dir.file("game.json");
  capped.profile_cap = 5;
  std::ostringstream out2, err2;
  CHECK(run_command(capped, out2, err2) == 2);
  nlohmann::json j2 = nlohmann::json::parse(err2.str());
  CHECK(j2.at("error") == "SearchSpaceExceeded");
}

TEST_CASE("experiment subcommand writes artifacts") {
  TempDir dir;
  CommandSpec exp;
  exp.cmd = CommandSpec::Cmd::experiment;
  exp.experiment_name = "common-color";
  exp.n = 5;
  exp.trials = 3;
  exp.seed = 4;
  exp.k = 2;
  exp.out_path = dir.file("results");
  std::ostringstream out, err;
  REQUIRE(run_command(exp, out, err) == 0);
  CHECK(fs::exists(dir.file("results/common-color.csv")));
  CHECK(fs::exists(dir.file("results/common-color_summary.json")));
  nlohmann::json summary = nlohmann::json::parse(out.str());
  CHECK(summary.at("experiment") == "common-color");
}
