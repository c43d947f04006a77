#include "clugame/cli.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>

#include "clugame/equilibria.hpp"
#include "clugame/errors.hpp"
#include "clugame/experiments.hpp"
#include "clugame/game_io.hpp"
#include "clugame/generators.hpp"
#include "clugame/shapley.hpp"
#include "clugame/topology.hpp"

namespace clugame {

namespace {

ClusteringGame load_game(const std::string& path) {
  if (path.empty()) {
    throw Error(ErrorCode::BadArguments, "missing --game file");
  }
  ClusteringGame game = build_game(read_game_file(path));
  return game;
}

Graph load_base_graph(const CommandSpec& spec) {
  if (!spec.graph_path.empty()) {
    return build_game(read_game_file(spec.graph_path)).graph;
  }
  if (spec.n > 0) {
    Rat p = spec.dense ? spec.d : Rat(spec.d / spec.n);
    return gen_gnp({spec.n, p, spec.seed});
  }
  throw Error(ErrorCode::BadArguments,
              "construction needs --graph FILE or --n with --d");
}

int run_analyze(const CommandSpec& spec, std::ostream& out) {
  ClusteringGame game = load_game(spec.game_path);
  TopologyOptions options;
  options.chromatic_cap = spec.chromatic_cap;
  options.compute_chromatic =
      spec.force_chromatic || game.graph.node_count <= spec.chromatic_cap;
  TopologyStats stats = compute_topology_stats(game.graph, options);
  out << topology_stats_to_json(stats).dump(2) << "\n";
  return 0;
}

int run_poa(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  ClusteringGame game = load_game(spec.game_path);
  for (const std::string& w : game.warnings) err << "warning: " << w << "\n";
  EnumLimits limits;
  limits.profile_cap = spec.profile_cap;
  limits.coalition_cap = spec.coalition_cap;
  PoaResult poa = price_of_anarchy(game, {spec.eps, spec.k}, limits);
  PoaBounds bounds = topological_poa_bounds(game, spec.eps, spec.k);

  nlohmann::ordered_json j;
  switch (poa.kind) {
    case PoaResult::Kind::value: j["poa"] = format_rat(poa.value); break;
    case PoaResult::Kind::infinite: j["poa"] = "inf"; break;
    case PoaResult::Kind::no_equilibrium: j["poa"] = "none"; break;
  }
  if (poa.worst_equilibrium) {
    j["worst_equilibrium"] = profile_to_json(*poa.worst_equilibrium);
    j["worst_welfare"] = format_rat(poa.worst_welfare);
  } else {
    j["worst_equilibrium"] = nullptr;
  }
  j["optimum"] = profile_to_json(poa.optimum);
  j["optimum_welfare"] = format_rat(poa.optimum_welfare);
  j["equilibrium_count"] = poa.equilibrium_count;
  j["bounds"] = poa_bounds_to_json(bounds);
  out << j.dump(2) << "\n";
  return 0;
}

int run_br_graph(const CommandSpec& spec, std::ostream& out) {
  ClusteringGame game = load_game(spec.game_path);
  EnumLimits limits;
  limits.profile_cap = spec.profile_cap;
  BrGraphResult result = br_graph_acyclic(game, limits);
  nlohmann::ordered_json j;
  if (result.acyclic) {
    j["result"] = "acyclic";
  } else {
    j["result"] = "cycle";
    j["profiles"] = nlohmann::ordered_json::array();
    for (const auto& p : result.cycle) j["profiles"].push_back(p.colors);
  }
  out << j.dump(2) << "\n";
  return 0;
}

int run_classify(const CommandSpec& spec, std::ostream& out) {
  ClusteringGame game = load_game(spec.game_path);
  ShapleyClassification classification =
      classify_rule(game.graph, game.rule);
  out << classification_to_json(classification).dump(2) << "\n";
  return 0;
}

RandomGameParams::RuleFamily parse_rule_family(const std::string& name) {
  if (name == "equal-split") return RandomGameParams::RuleFamily::equal_split;
  if (name == "random-positive") {
    return RandomGameParams::RuleFamily::random_positive;
  }
  if (name == "weighted-shapley") {
    return RandomGameParams::RuleFamily::weighted_shapley;
  }
  if (name == "random-with-zeros") {
    return RandomGameParams::RuleFamily::random_with_zeros;
  }
  throw Error(ErrorCode::BadArguments, "unknown rule family '" + name + "'");
}

RandomGameParams::KindMix parse_kind_mix(const std::string& name) {
  if (name == "coord") return RandomGameParams::KindMix::all_coordination;
  if (name == "anti") return RandomGameParams::KindMix::all_anti_coordination;
  if (name == "mixed") return RandomGameParams::KindMix::mixed;
  throw Error(ErrorCode::BadArguments, "unknown kind mix '" + name + "'");
}

int run_gen(const CommandSpec& spec, std::ostream& out) {
  if (spec.out_path.empty()) {
    throw Error(ErrorCode::BadArguments, "gen needs --out FILE");
  }
  ClusteringGame game;
  std::optional<StrategyProfile> equilibrium, optimum;

  if (spec.construction == "gnp") {
    if (spec.n <= 0) throw Error(ErrorCode::BadArguments, "gnp needs --n");
    Rat p = spec.dense ? spec.d : Rat(spec.d / spec.n);
    Graph g = gen_gnp({spec.n, p, spec.seed});
    GameInput input;
    input.node_count = g.node_count;
    input.color_count = std::max(2, spec.colors);
    for (const Edge& e : g.edges) {
      GameInput::EdgeInput ge;
      ge.u = e.u;
      ge.v = e.v;
      ge.kind = EdgeKind::coordination;
      ge.weight = 1;
      input.edges.push_back(std::move(ge));
    }
    input.meta = {{"construction", "gnp"},
                  {"n", spec.n},
                  {"p", format_rat(p)},
                  {"seed", spec.seed}};
    game = build_game(input);
  } else if (spec.construction == "bipartite-tightness") {
    ConstructedInstance inst = bipartite_tightness_instance(
        spec.l, spec.r, spec.gamma_l, spec.gamma_r);
    game = std::move(inst.game);
    equilibrium = inst.equilibrium;
    optimum = inst.optimum;
  } else if (spec.construction == "density-lb") {
    Graph g = load_base_graph(spec);
    std::vector<int> subset;
    if (spec.subset == "witness") {
      subset = max_subgraph_density(g).witness;
    } else {
      std::stringstream ss(spec.subset);
      for (int v; ss >> v;) {
        subset.push_back(v);
        if (ss.peek() == ',') ss.ignore();
      }
    }
    ConstructedInstance inst = density_lb_instance(g, subset);
    game = std::move(inst.game);
    equilibrium = inst.equilibrium;
    optimum = inst.optimum;
  } else if (spec.construction == "matching-lb") {
    ConstructedInstance inst =
        matching_lb_instance(load_base_graph(spec), std::max(2, spec.colors));
    game = std::move(inst.game);
    equilibrium = inst.equilibrium;
    optimum = inst.optimum;
  } else if (spec.construction == "chromatic-lb") {
    ConstructedInstance inst =
        chromatic_lb_instance(load_base_graph(spec), spec.chromatic_cap);
    game = std::move(inst.game);
    equilibrium = inst.equilibrium;
    optimum = inst.optimum;
  } else if (spec.construction == "degree-lb") {
    ConstructedInstance inst =
        degree_lb_instance(load_base_graph(spec), spec.eps, spec.k);
    game = std::move(inst.game);
    equilibrium = inst.equilibrium;
    optimum = inst.optimum;
  } else if (spec.construction == "random") {
    RandomGameParams params;
    params.colors = std::max(2, spec.colors);
    params.rule = parse_rule_family(spec.rule_family);
    params.kinds = parse_kind_mix(spec.kind_mix);
    params.seed = spec.seed;
    game = random_game(load_base_graph(spec), params);
  } else {
    throw Error(ErrorCode::BadArguments,
                "unknown construction '" + spec.construction + "'");
  }

  game.meta["seed"] = spec.seed;
  if (equilibrium) game.meta["equilibrium"] = equilibrium->colors;
  if (optimum) game.meta["optimum"] = optimum->colors;
  write_game_file(game, spec.out_path);
  out << "wrote " << spec.out_path << "\n";
  return 0;
}

int run_experiment(const CommandSpec& spec, std::ostream& out) {
  if (spec.out_path.empty()) {
    throw Error(ErrorCode::BadArguments, "experiment needs --out DIR");
  }
  std::filesystem::create_directories(spec.out_path);

  ExperimentReport report;
  if (spec.experiment_name == "sparse-poa") {
    SparsePoaParams params;
    if (!spec.n_list.empty()) params.n_list = spec.n_list;
    if (spec.d != 0) params.d = spec.d;
    if (spec.trials > 0) params.trials = spec.trials;
    params.seed = spec.seed;
    params.small_trials = spec.trials > 0 ? spec.trials : 50;
    params.threads = spec.threads;
    report = run_sparse_poa(params);
  } else if (spec.experiment_name == "dense-poa") {
    DensePoaParams params;
    if (spec.n > 0) params.n = spec.n;
    if (spec.d != 0) params.d = spec.d;
    if (spec.colors > 0) params.colors = spec.colors;
    if (spec.trials > 0) params.trials = spec.trials;
    params.seed = spec.seed;
    params.threads = spec.threads;
    report = run_dense_poa(params);
  } else if (spec.experiment_name == "degree-scaling") {
    DegreeScalingParams params;
    if (!spec.n_list.empty()) params.n_list = spec.n_list;
    if (spec.d != 0) params.d = spec.d;
    if (spec.trials > 0) params.trials = spec.trials;
    params.seed = spec.seed;
    params.small_trials = spec.trials > 0 ? spec.trials : 30;
    params.eps = spec.eps;
    params.k = std::max(2, spec.k);
    params.threads = spec.threads;
    report = run_degree_scaling(params);
  } else if (spec.experiment_name == "common-color") {
    CommonColorParams params;
    if (spec.n > 0) params.n = spec.n;
    if (spec.d != 0) params.d = spec.d;
    if (spec.colors > 0) params.colors = spec.colors;
    if (spec.trials > 0) params.trials = spec.trials;
    params.family = spec.dist == "pair-with-common"
                        ? StrategySetDistribution::Family::pair_with_common
                        : StrategySetDistribution::Family::uniform_nonempty;
    params.eps = spec.eps;
    params.k = spec.k;
    params.seed = spec.seed;
    params.threads = spec.threads;
    report = run_common_color(params);
  } else {
    throw Error(ErrorCode::BadArguments,
                "unknown experiment '" + spec.experiment_name + "'");
  }

  std::filesystem::path dir(spec.out_path);
  std::string csv = (dir / (report.experiment + ".csv")).string();
  std::string summary = (dir / (report.experiment + "_summary.json")).string();
  write_report_csv(report, csv);
  write_report_summary(report, summary);
  out << report.summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int run_command(const CommandSpec& spec, std::ostream& out,
                std::ostream& err) {
  try {
    switch (spec.cmd) {
      case CommandSpec::Cmd::analyze: return run_analyze(spec, out);
      case CommandSpec::Cmd::poa: return run_poa(spec, out, err);
      case CommandSpec::Cmd::br_graph: return run_br_graph(spec, out);
      case CommandSpec::Cmd::classify: return run_classify(spec, out);
      case CommandSpec::Cmd::gen: return run_gen(spec, out);
      case CommandSpec::Cmd::experiment: return run_experiment(spec, out);
    }
  } catch (const Error& e) {
    nlohmann::ordered_json j;
    j["error"] = error_code_name(e.code());
    j["message"] = e.what();
    err << j.dump() << "\n";
    return is_cap_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json j;
    j["error"] = "Internal";
    j["message"] = e.what();
    err << j.dump() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace clugame
