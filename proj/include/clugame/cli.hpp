#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "clugame/rational.hpp"

namespace clugame {

// Parsed command line; tools/main.cpp fills one of these and hands it to
// run_command so tests can drive the CLI without spawning a process.
struct CommandSpec {
  enum class Cmd { analyze, poa, br_graph, classify, gen, experiment };
  Cmd cmd = Cmd::analyze;

  std::string game_path;
  std::string graph_path;  // base topology for gen constructions
  std::string out_path;    // output file (gen) or directory (experiment)

  Rat eps = 1;
  int k = 1;
  std::uint64_t profile_cap = 10'000'000;
  int coalition_cap = 3;
  int chromatic_cap = 20;
  bool force_chromatic = false;

  // gen
  std::string construction;
  int n = 0;
  Rat d = 0;
  bool dense = false;  // gnp regime: p = d (dense) vs p = d/n (sparse)
  int l = 1, r = 1;
  Rat gamma_l = 1, gamma_r = 1;
  int colors = 2;
  std::uint64_t seed = 1;
  std::string subset = "witness";  // density-lb: "witness" or id list
  std::string rule_family = "equal-split";
  std::string kind_mix = "coord";

  // experiment
  std::string experiment_name;
  int trials = 0;  // 0 keeps the experiment default
  std::vector<int> n_list;
  std::string dist = "uniform";
  int threads = 0;
};

// Exit status 0 on success, 1 on validation/parse errors, 2 on cap
// exceedances; errors go to `err` as one machine-readable JSON line.
int run_command(const CommandSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace clugame
