#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "clugame/cli.hpp"
#include "clugame/errors.hpp"

using clugame::CommandSpec;

namespace {

// rational-valued flags arrive as "p/q" or integer strings
void add_rat_option(CLI::App* app, const std::string& name, clugame::Rat* dst,
                    const std::string& desc) {
  app->add_option_function<std::string>(
      name, [dst](const std::string& text) { *dst = clugame::parse_rat(text); },
      desc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clustering games on networks: exact equilibria, topological "
               "bounds, constructions and experiments"};
  app.require_subcommand(1);

  CommandSpec spec;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--cap-profiles", spec.profile_cap,
                    "profile enumeration cap");
    sub->add_option("--cap-coalition", spec.coalition_cap,
                    "coalition size cap");
    sub->add_option("--cap-chromatic", spec.chromatic_cap,
                    "chromatic computation cap");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "topological parameters");
  analyze->add_option("--game", spec.game_path, "game file")->required();
  analyze->add_flag("--chromatic", spec.force_chromatic,
                    "request the chromatic number even above the cap");
  add_common(analyze);

  CLI::App* poa = app.add_subcommand("poa", "exact price of anarchy");
  poa->add_option("--game", spec.game_path, "game file")->required();
  add_rat_option(poa, "--eps", &spec.eps, "approximation factor, p/q >= 1");
  poa->add_option("--k", spec.k, "coalition size bound");
  add_common(poa);

  CLI::App* br = app.add_subcommand("br-graph",
                                    "best-response graph acyclicity");
  br->add_option("--game", spec.game_path, "game file")->required();
  add_common(br);

  CLI::App* classify = app.add_subcommand(
      "classify", "generalized weighted Shapley classification");
  classify->add_option("--game", spec.game_path, "game file")->required();

  CLI::App* gen = app.add_subcommand("gen", "write a constructed game file");
  gen->add_option("--construction", spec.construction,
                  "gnp | bipartite-tightness | density-lb | matching-lb | "
                  "chromatic-lb | degree-lb | random")
      ->required();
  gen->add_option("--out", spec.out_path, "output game file")->required();
  gen->add_option("--graph", spec.graph_path,
                  "base topology (game file) for graph constructions");
  gen->add_option("--n", spec.n, "node count for gnp");
  add_rat_option(gen, "--d", &spec.d, "gnp density parameter");
  gen->add_flag("--dense", spec.dense, "dense regime p = d (default p = d/n)");
  gen->add_option("--l", spec.l, "left size (bipartite-tightness)");
  gen->add_option("--r", spec.r, "right size (bipartite-tightness)");
  add_rat_option(gen, "--gamma-l", &spec.gamma_l, "left Shapley weight");
  add_rat_option(gen, "--gamma-r", &spec.gamma_r, "right Shapley weight");
  gen->add_option("--colors", spec.colors, "color count");
  gen->add_option("--seed", spec.seed, "seed");
  gen->add_option("--subset", spec.subset,
                  "density-lb subset: 'witness' or comma-separated ids");
  gen->add_option("--rule", spec.rule_family,
                  "random rule family: equal-split | random-positive | "
                  "weighted-shapley | random-with-zeros");
  gen->add_option("--kinds", spec.kind_mix, "coord | anti | mixed");
  add_rat_option(gen, "--eps", &spec.eps, "eps (degree-lb)");
  gen->add_option("--k", spec.k, "k (degree-lb)");
  add_common(gen);

  CLI::App* experiment = app.add_subcommand("experiment", "Monte Carlo runs");
  experiment->add_option("--name", spec.experiment_name,
                         "sparse-poa | dense-poa | degree-scaling | "
                         "common-color")
      ->required();
  experiment->add_option("--out", spec.out_path, "output directory")
      ->required();
  experiment->add_option("--trials", spec.trials, "trials per configuration");
  experiment->add_option("--seed", spec.seed, "master seed");
  experiment->add_option("--n", spec.n, "node count");
  experiment->add_option("--n-list", spec.n_list, "node counts");
  add_rat_option(experiment, "--d", &spec.d, "density parameter");
  experiment->add_option("--colors", spec.colors, "color count");
  add_rat_option(experiment, "--eps", &spec.eps, "approximation factor");
  experiment->add_option("--k", spec.k, "coalition size bound");
  experiment->add_option("--dist", spec.dist,
                         "strategy set family: uniform | pair-with-common");
  experiment->add_option("--threads", spec.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const clugame::Error& e) {
    std::cerr << "{\"error\":\"" << clugame::error_code_name(e.code())
              << "\",\"message\":\"" << e.what() << "\"}\n";
    return 1;
  }

  if (analyze->parsed()) spec.cmd = CommandSpec::Cmd::analyze;
  if (poa->parsed()) spec.cmd = CommandSpec::Cmd::poa;
  if (br->parsed()) spec.cmd = CommandSpec::Cmd::br_graph;
  if (classify->parsed()) spec.cmd = CommandSpec::Cmd::classify;
  if (gen->parsed()) spec.cmd = CommandSpec::Cmd::gen;
  if (experiment->parsed()) spec.cmd = CommandSpec::Cmd::experiment;

  return clugame::run_command(spec, std::cout, std::cerr);
}
