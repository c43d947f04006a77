#include "clugame/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "clugame/equilibria.hpp"
#include "clugame/errors.hpp"
#include "clugame/rng.hpp"
#include "clugame/topology.hpp"

namespace clugame {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Runs one job per trial on a small pool; results land in trial order no
// matter which thread finishes first.
template <class Fn>
std::vector<std::vector<std::vector<std::string>>> run_trials(
    int trials, int threads, Fn&& job) {
  std::vector<std::vector<std::vector<std::string>>> results(trials);
  if (trials == 0) return results;
  unsigned hw = std::thread::hardware_concurrency();
  int workers = threads > 0 ? threads : static_cast<int>(hw ? hw : 1);
  workers = std::min(workers, trials);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  auto loop = [&]() {
    while (true) {
      int t = next.fetch_add(1);
      if (t >= trials) return;
      results[t] = job(t);
    }
  };
  for (int w = 0; w < workers - 1; ++w) pool.emplace_back(loop);
  loop();
  for (auto& th : pool) th.join();
  return results;
}

struct Stats {
  double mean = 0, median = 0, min = 0, max = 0, stddev = 0;
  std::size_t count = 0;
};

Stats compute_stats(std::vector<double> values) {
  Stats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  s.median = values.size() % 2 == 1
                 ? values[values.size() / 2]
                 : (values[values.size() / 2 - 1] + values[values.size() / 2]) / 2;
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = values.size() > 1
                 ? std::sqrt(ss / static_cast<double>(values.size() - 1))
                 : 0.0;
  return s;
}

nlohmann::ordered_json stats_json(const Stats& s) {
  nlohmann::ordered_json j;
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["min"] = s.min;
  j["max"] = s.max;
  j["std"] = s.stddev;
  return j;
}

int column_index(const std::vector<std::string>& columns,
                 const std::string& name) {
  auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

std::vector<double> numeric_column(const ExperimentReport& report,
                                   const std::string& name,
                                   const std::string& group_col = "",
                                   const std::string& group_val = "") {
  std::vector<double> out;
  int idx = column_index(report.columns, name);
  int gidx = group_col.empty() ? -1 : column_index(report.columns, group_col);
  for (const auto& row : report.rows) {
    if (gidx >= 0 && row[gidx] != group_val) continue;
    const std::string& cell = row[idx];
    if (cell.empty() || cell == "none" || cell == "inf") continue;
    if (cell.find('/') != std::string::npos) {
      out.push_back(to_double(parse_rat(cell)));
    } else {
      out.push_back(std::strtod(cell.c_str(), nullptr));
    }
  }
  return out;
}

std::string poa_cell(const PoaResult& poa) {
  switch (poa.kind) {
    case PoaResult::Kind::value: return format_rat(poa.value);
    case PoaResult::Kind::infinite: return "inf";
    case PoaResult::Kind::no_equilibrium: return "none";
  }
  return "none";
}

}  // namespace

ExperimentReport run_sparse_poa(const SparsePoaParams& params) {
  ExperimentReport report;
  report.experiment = "sparse-poa";
  report.params = {{"n_list", params.n_list},
                   {"d", format_rat(params.d)},
                   {"trials", params.trials},
                   {"seed", params.seed},
                   {"small_n", params.small_n},
                   {"small_trials", params.small_trials},
                   {"small_colors", params.small_colors}};
  report.columns = {"n",        "d",       "trial",     "seed",
                    "edges",    "rho",     "bound",     "matching",
                    "poa_construction", "poa_random", "bound_ok", "time_ms"};

  struct Job {
    int n;
    int trial;
    bool small;
  };
  std::vector<Job> jobs;
  for (int n : params.n_list) {
    for (int t = 0; t < params.trials; ++t) jobs.push_back({n, t, false});
  }
  for (int t = 0; t < params.small_trials; ++t) {
    jobs.push_back({params.small_n, t, true});
  }

  auto results = run_trials(
      static_cast<int>(jobs.size()), params.threads,
      [&](int index) -> std::vector<std::vector<std::string>> {
        auto start = std::chrono::steady_clock::now();
        const Job& job = jobs[index];
        std::uint64_t seed =
            derive_seed(params.seed, "sparse-poa",
                        static_cast<std::uint64_t>(index));
        Graph g = gen_gnp(sparse_gnp(job.n, params.d, seed));
        DensityResult rho = max_subgraph_density(g);
        Rat bound = 1 + 2 * rho.density;
        int matching = maximum_matching(g).size;

        std::string poa_construction, poa_random, bound_ok;
        if (job.small) {
          bool ok = true;
          if (g.edges.empty()) {
            poa_construction = "1/1";
            poa_random = "1/1";
          } else {
            ConstructedInstance inst = density_lb_instance(g, rho.witness);
            auto exact = poa_from_certified_profiles(inst.game,
                                                     inst.equilibrium,
                                                     *inst.optimum);
            if (!exact) {
              ok = false;
              poa_construction = "unverified";
            } else {
              poa_construction = format_rat(*exact);
              ok = ok && *exact <= bound;
            }
            RandomGameParams rg;
            rg.colors = params.small_colors;
            rg.rule = RandomGameParams::RuleFamily::equal_split;
            rg.kinds = RandomGameParams::KindMix::all_coordination;
            rg.random_preferences = true;
            rg.seed = derive_seed(seed, "random-game", 0);
            ClusteringGame game = random_game(g, rg);
            PoaResult poa = price_of_anarchy(game, {Rat(1), 1});
            poa_random = poa_cell(poa);
            ok = ok && poa.kind == PoaResult::Kind::value &&
                 poa.value <= bound;
          }
          bound_ok = ok ? "1" : "0";
        }

        std::vector<std::string> row = {
            std::to_string(job.n),
            format_rat(params.d),
            std::to_string(job.trial),
            std::to_string(seed),
            std::to_string(g.edges.size()),
            format_rat(rho.density),
            format_rat(bound),
            std::to_string(matching),
            poa_construction,
            poa_random,
            bound_ok,
            fmt_double(elapsed_ms(start))};
        return {row};
      });
  for (auto& rows : results) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }

  report.summary["experiment"] = report.experiment;
  report.summary["params"] = report.params;
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (int n : params.n_list) {
    nlohmann::ordered_json group;
    group["n"] = n;
    group["rho"] = stats_json(
        compute_stats(numeric_column(report, "rho", "n", std::to_string(n))));
    group["matching_over_n"] = stats_json(compute_stats([&] {
      auto v = numeric_column(report, "matching", "n", std::to_string(n));
      for (double& x : v) x /= n;
      return v;
    }()));
    groups.push_back(group);
  }
  report.summary["groups"] = groups;
  if (params.small_trials > 0) {
    auto ok = numeric_column(report, "bound_ok");
    double all_ok = 1;
    for (double v : ok) all_ok = std::min(all_ok, v);
    report.summary["small_study"] = {
        {"trials", params.small_trials},
        {"all_bounds_hold", all_ok == 1},
    };
  }
  return report;
}

ExperimentReport run_dense_poa(const DensePoaParams& params) {
  ExperimentReport report;
  report.experiment = "dense-poa";
  report.params = {{"n", params.n},
                   {"d", format_rat(params.d)},
                   {"colors", params.colors},
                   {"trials", params.trials},
                   {"seed", params.seed}};
  report.columns = {"n",     "d",         "c",         "trial",
                    "seed",  "q",         "edges_vm",  "ratio",
                    "bound", "ne_verified", "ratio_over_c", "time_ms"};

  auto results = run_trials(
      params.trials, params.threads,
      [&](int trial) -> std::vector<std::vector<std::string>> {
        auto start = std::chrono::steady_clock::now();
        std::uint64_t seed = derive_seed(params.seed, "dense-poa",
                                         static_cast<std::uint64_t>(trial));
        Graph g = gen_gnp(dense_gnp(params.n, params.d, seed));
        ConstructedInstance inst = matching_lb_instance(g, params.colors);
        int q = inst.game.meta.at("matching_size").get<int>();

        // positive-weight edges are exactly the edges inside V_M
        int edges_vm = 0;
        for (const Edge& e : inst.game.graph.edges) {
          if (e.weight > 0) ++edges_vm;
        }

        bool verified =
            !is_epsilon_k_equilibrium(inst.game, inst.equilibrium, {Rat(1), 1})
                 .has_value();
        Rat w_eq = social_welfare(inst.game, inst.equilibrium);
        Rat w_opt = social_welfare(inst.game, *inst.optimum);
        verified = verified && w_opt == welfare_upper_bound(inst.game);
        Rat ratio = w_opt / w_eq;
        Rat bound(edges_vm, 2 * q);
        verified = verified && ratio >= bound;
        Rat ratio_over_c = ratio / params.colors;

        std::vector<std::string> row = {std::to_string(params.n),
                                        format_rat(params.d),
                                        std::to_string(params.colors),
                                        std::to_string(trial),
                                        std::to_string(seed),
                                        std::to_string(q),
                                        std::to_string(edges_vm),
                                        format_rat(ratio),
                                        format_rat(bound),
                                        verified ? "1" : "0",
                                        format_rat(ratio_over_c),
                                        fmt_double(elapsed_ms(start))};
        return {row};
      });
  for (auto& rows : results) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }

  report.summary["experiment"] = report.experiment;
  report.summary["params"] = report.params;
  auto ratios = numeric_column(report, "ratio_over_c");
  report.summary["ratio_over_c"] = stats_json(compute_stats(ratios));
  auto verified = numeric_column(report, "ne_verified");
  bool all = std::all_of(verified.begin(), verified.end(),
                         [](double v) { return v == 1; });
  report.summary["all_verified"] = all;
  return report;
}

ExperimentReport run_degree_scaling(const DegreeScalingParams& params) {
  ExperimentReport report;
  report.experiment = "degree-scaling";
  report.params = {{"n_list", params.n_list},
                   {"d", format_rat(params.d)},
                   {"trials", params.trials},
                   {"seed", params.seed},
                   {"small_n", params.small_n},
                   {"small_trials", params.small_trials},
                   {"eps", format_rat(params.eps)},
                   {"k", params.k}};
  report.columns = {"n",     "d",          "trial",   "seed",
                    "delta", "delta_scaled", "poa_random", "poa_ok",
                    "lb_ratio", "lb_ok",   "time_ms"};

  struct Job {
    int n;
    int trial;
    bool small;
  };
  std::vector<Job> jobs;
  for (int n : params.n_list) {
    for (int t = 0; t < params.trials; ++t) jobs.push_back({n, t, false});
  }
  for (int t = 0; t < params.small_trials; ++t) {
    jobs.push_back({params.small_n, t, true});
  }

  auto results = run_trials(
      static_cast<int>(jobs.size()), params.threads,
      [&](int index) -> std::vector<std::vector<std::string>> {
        auto start = std::chrono::steady_clock::now();
        const Job& job = jobs[index];
        std::uint64_t seed =
            derive_seed(params.seed, "degree-scaling",
                        static_cast<std::uint64_t>(index));
        GnpParams gp = sparse_gnp(job.n, params.d, seed);
        Graph g = job.n > 4000 ? gen_gnp_fast(gp) : gen_gnp(gp);
        int delta = max_degree(g);
        double scaled =
            job.n > 2 ? delta * std::log(std::log(job.n)) / std::log(job.n)
                      : 0.0;

        std::string poa_random, poa_ok, lb_ratio, lb_ok;
        if (job.small) {
          RandomGameParams rg;
          rg.colors = 3;
          rg.rule = RandomGameParams::RuleFamily::equal_split;
          rg.kinds = RandomGameParams::KindMix::all_coordination;
          StrategySetDistribution dist;
          dist.colors = 3;
          rg.strategy_sets = random_strategy_sets(
              job.n, dist, derive_seed(seed, "sets", 0));
          rg.seed = derive_seed(seed, "random-game", 0);
          ClusteringGame game = random_game(g, rg);
          PoaResult poa = price_of_anarchy(game, {params.eps, params.k});
          poa_random = poa_cell(poa);
          if (poa.kind == PoaResult::Kind::no_equilibrium) {
            poa_ok = "";  // vacuous row, flagged not fatal
          } else {
            poa_ok = poa.kind == PoaResult::Kind::value &&
                             poa.value <= 2 * params.eps * delta
                         ? "1"
                         : "0";
          }
          if (delta > params.k - 1) {
            ConstructedInstance inst =
                degree_lb_instance(g, params.eps, params.k);
            bool eq_ok =
                !is_epsilon_k_equilibrium(inst.game, inst.equilibrium,
                                          {params.eps, params.k})
                     .has_value();
            auto [opt_profile, opt_welfare] = social_optimum(inst.game);
            Rat ratio =
                opt_welfare / social_welfare(inst.game, inst.equilibrium);
            lb_ratio = format_rat(ratio);
            Rat companion =
                params.eps * std::max(Rat(1), Rat(delta, params.k - 1) - 1);
            lb_ok = eq_ok && ratio >= companion ? "1" : "0";
          }
        }

        std::vector<std::string> row = {std::to_string(job.n),
                                        format_rat(params.d),
                                        std::to_string(job.trial),
                                        std::to_string(seed),
                                        std::to_string(delta),
                                        fmt_double(scaled),
                                        poa_random,
                                        poa_ok,
                                        lb_ratio,
                                        lb_ok,
                                        fmt_double(elapsed_ms(start))};
        return {row};
      });
  for (auto& rows : results) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }

  report.summary["experiment"] = report.experiment;
  report.summary["params"] = report.params;
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (int n : params.n_list) {
    nlohmann::ordered_json group;
    group["n"] = n;
    group["delta"] = stats_json(compute_stats(
        numeric_column(report, "delta", "n", std::to_string(n))));
    group["delta_scaled"] = stats_json(compute_stats(
        numeric_column(report, "delta_scaled", "n", std::to_string(n))));
    groups.push_back(group);
  }
  report.summary["groups"] = groups;
  if (params.small_trials > 0) {
    auto ok = numeric_column(report, "poa_ok");
    auto lb = numeric_column(report, "lb_ok");
    report.summary["small_study"] = {
        {"poa_checked", ok.size()},
        {"poa_all_ok",
         std::all_of(ok.begin(), ok.end(), [](double v) { return v == 1; })},
        {"lb_checked", lb.size()},
        {"lb_all_ok",
         std::all_of(lb.begin(), lb.end(), [](double v) { return v == 1; })},
    };
  }
  return report;
}

ExperimentReport run_common_color(const CommonColorParams& params) {
  ExperimentReport report;
  report.experiment = "common-color";
  const bool uniform =
      params.family == StrategySetDistribution::Family::uniform_nonempty;
  report.params = {{"n", params.n},
                   {"d", format_rat(params.d)},
                   {"colors", params.colors},
                   {"family", uniform ? "uniform_nonempty" : "pair_with_common"},
                   {"eps", format_rat(params.eps)},
                   {"k", params.k},
                   {"trials", params.trials},
                   {"seed", params.seed}};
  report.columns = {"n",    "d",    "c",        "family",
                    "trial", "seed", "poa",      "common_pair_freq",
                    "local_ineq_ok", "ne_count", "time_ms"};

  StrategySetDistribution dist;
  dist.family = params.family;
  dist.colors = params.colors;

  auto results = run_trials(
      params.trials, params.threads,
      [&](int trial) -> std::vector<std::vector<std::string>> {
        auto start = std::chrono::steady_clock::now();
        std::uint64_t seed = derive_seed(params.seed, "common-color",
                                         static_cast<std::uint64_t>(trial));
        Graph g = gen_gnp(sparse_gnp(params.n, params.d, seed));
        auto sets =
            random_strategy_sets(params.n, dist, derive_seed(seed, "sets", 0));

        GameInput input;
        input.node_count = params.n;
        input.color_count = params.colors;
        for (const Edge& e : g.edges) {
          GameInput::EdgeInput ge;
          ge.u = e.u;
          ge.v = e.v;
          ge.kind = EdgeKind::coordination;
          ge.weight = 1;
          input.edges.push_back(std::move(ge));
        }
        input.strategy_sets = sets;
        ClusteringGame game = build_game(input);

        // pairwise common-color frequency among all player pairs
        int common_pairs = 0, pairs = 0;
        for (int i = 0; i < params.n; ++i) {
          for (int j = i + 1; j < params.n; ++j) {
            ++pairs;
            bool shared = false;
            for (int c : sets[i]) {
              if (game.slot_of(j, c) >= 0) shared = true;
            }
            if (shared) ++common_pairs;
          }
        }

        EquilibriumParams ep{params.eps, params.k};
        auto equilibria = enumerate_equilibria(game, ep);
        PoaResult poa = price_of_anarchy(game, ep);

        // matched common-color pairs must share at least 1/(2 eps) in every
        // equilibrium
        bool local_ok = true;
        if (params.k >= 2) {
          MatchingResult matching = maximum_matching(g);
          Rat floor_value = Rat(1) / (2 * params.eps);
          for (const auto& s : equilibria) {
            for (const auto& [u, v] : matching.edges) {
              bool shared = false;
              for (int c : sets[u]) {
                if (game.slot_of(v, c) >= 0) shared = true;
              }
              if (!shared) continue;
              if (utility(game, s, u) + utility(game, s, v) < floor_value) {
                local_ok = false;
              }
            }
          }
        }

        std::vector<std::string> row = {
            std::to_string(params.n),
            format_rat(params.d),
            std::to_string(params.colors),
            uniform ? "uniform_nonempty" : "pair_with_common",
            std::to_string(trial),
            std::to_string(seed),
            poa_cell(poa),
            format_rat(Rat(common_pairs, std::max(pairs, 1))),
            local_ok ? "1" : "0",
            std::to_string(equilibria.size()),
            fmt_double(elapsed_ms(start))};
        return {row};
      });
  for (auto& rows : results) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }

  report.summary["experiment"] = report.experiment;
  report.summary["params"] = report.params;
  int poa_col = column_index(report.columns, "poa");
  int inf_count = 0, none_count = 0;
  std::vector<double> finite;
  for (const auto& row : report.rows) {
    if (row[poa_col] == "inf") {
      ++inf_count;
    } else if (row[poa_col] == "none") {
      ++none_count;
    } else {
      finite.push_back(to_double(parse_rat(row[poa_col])));
    }
  }
  report.summary["poa_finite"] = stats_json(compute_stats(finite));
  report.summary["poa_infinite_rows"] = inf_count;
  report.summary["poa_empty_rows"] = none_count;
  report.summary["common_pair_freq"] =
      stats_json(compute_stats(numeric_column(report, "common_pair_freq")));
  auto claimed = dist.claimed_common_color_constant();
  if (claimed) {
    report.summary["claimed_d0"] = format_rat(*claimed);
  } else {
    report.summary["claimed_d0"] = nullptr;
  }
  auto local = numeric_column(report, "local_ineq_ok");
  report.summary["local_inequality_holds"] = std::all_of(
      local.begin(), local.end(), [](double v) { return v == 1; });
  return report;
}

void write_report_csv(const ExperimentReport& report,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  }
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    out << (i ? "," : "") << report.columns[i];
  }
  out << "\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << row[i];
    }
    out << "\n";
  }
}

void write_report_summary(const ExperimentReport& report,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  }
  out << report.summary.dump(2) << "\n";
}

std::vector<std::vector<std::string>> report_rows_without_timing(
    const ExperimentReport& report) {
  int drop = column_index(report.columns, "time_ms");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : report.rows) {
    std::vector<std::string> copy;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (static_cast<int>(i) != drop) copy.push_back(row[i]);
    }
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace clugame
