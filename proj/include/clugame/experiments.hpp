#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "clugame/generators.hpp"
#include "clugame/rational.hpp"

namespace clugame {

// Rows are exact strings (rationals as p/q); floating point appears only in
// the derived summary statistics and the timing column. Rows are
// reproducible from (experiment id, seed): per-trial seeds come from
// derive_seed(seed, experiment id, trial index).
struct ExperimentReport {
  std::string experiment;
  nlohmann::ordered_json params;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  nlohmann::ordered_json summary;
};

struct SparsePoaParams {
  std::vector<int> n_list = {200, 400, 800};
  Rat d = 2;
  int trials = 50;
  std::uint64_t seed = 1;
  // exact-PoA substudy on tiny graphs; 0 trials skips it
  int small_n = 8;
  int small_trials = 0;
  int small_colors = 3;
  int threads = 0;
};

// Samples G(n, d/n); records exact rho, the bound 1 + 2*rho and the maximum
// matching size. The substudy additionally builds the density lower-bound
// construction and a random equal-split coordination game and checks their
// exact PoA against 1 + 2*rho.
ExperimentReport run_sparse_poa(const SparsePoaParams& params);

struct DensePoaParams {
  int n = 60;
  Rat d = Rat(1, 2);
  int colors = 16;
  int trials = 100;
  std::uint64_t seed = 1;
  int threads = 0;
};

// Samples G(n, d); builds the matching lower-bound instance, verifies its
// profile is an exact Nash equilibrium and records the ratio and ratio/c.
ExperimentReport run_dense_poa(const DensePoaParams& params);

struct DegreeScalingParams {
  std::vector<int> n_list = {1000, 10000, 100000};
  Rat d = 3;
  int trials = 30;
  std::uint64_t seed = 1;
  // exact (eps,k)-PoA substudy with random asymmetric coordination games
  int small_n = 7;
  int small_trials = 0;
  Rat eps = 1;
  int k = 2;
  int threads = 0;
};

// Records Delta(G_n) and Delta * ln ln n / ln n per trial; the substudy
// checks exact (eps,k)-PoA <= 2*eps*Delta and the degree lower-bound
// construction's ratio >= eps * max{1, Delta/(k-1) - 1}.
ExperimentReport run_degree_scaling(const DegreeScalingParams& params);

struct CommonColorParams {
  int n = 8;
  Rat d = 2;
  int colors = 3;
  StrategySetDistribution::Family family =
      StrategySetDistribution::Family::uniform_nonempty;
  Rat eps = 1;
  int k = 2;
  int trials = 300;
  std::uint64_t seed = 1;
  int threads = 0;
};

// Unit weights, equal split, random strategy sets. Records the exact
// (eps,k)-PoA per trial ("none" when the equilibrium set is empty), the
// empirical common-color pair frequency, and verifies u_i + u_j >= 1/(2*eps)
// on every matched common-color pair in every found equilibrium.
ExperimentReport run_common_color(const CommonColorParams& params);

void write_report_csv(const ExperimentReport& report, const std::string& path);
void write_report_summary(const ExperimentReport& report,
                          const std::string& path);

// Rows minus the timing column; the reproducibility contract covers these.
std::vector<std::vector<std::string>> report_rows_without_timing(
    const ExperimentReport& report);

}  // namespace clugame
