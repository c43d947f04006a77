#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "clugame/experiments.hpp"
#include "clugame/rational.hpp"

using namespace clugame;

namespace {

int column(const ExperimentReport& report, const std::string& name) {
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (report.columns[i] == name) return static_cast<int>(i);
  }
  FAIL("missing column ", name);
  return -1;
}

}  // namespace

TEST_CASE("sparse poa experiment rows and bounds") {
  SparsePoaParams params;
  params.n_list = {30};
  params.d = 2;
  params.trials = 4;
  params.seed = 11;
  params.small_n = 6;
  params.small_trials = 6;
  ExperimentReport report = run_sparse_poa(params);

  CHECK(report.rows.size() == 10);
  int ok = column(report, "bound_ok");
  int rho = column(report, "rho");
  int bound = column(report, "bound");
  for (const auto& row : report.rows) {
    REQUIRE(row.size() == report.columns.size());
    // bound column is exactly 1 + 2 * rho
    CHECK(parse_rat(row[bound]) == 1 + 2 * parse_rat(row[rho]));
    if (!row[ok].empty()) CHECK(row[ok] == "1");
  }
  CHECK(report.summary.at("small_study").at("all_bounds_hold") == true);
}

TEST_CASE("sparse poa rows are reproducible") {
  SparsePoaParams params;
  params.n_list = {20};
  params.d = 2;
  params.trials = 3;
  params.seed = 77;
  params.small_trials = 3;
  params.small_n = 5;
  ExperimentReport a = run_sparse_poa(params);
  ExperimentReport b = run_sparse_poa(params);
  CHECK(report_rows_without_timing(a) == report_rows_without_timing(b));
}

TEST_CASE("empty graphs give trivial rows") {
  SparsePoaParams params;
  params.n_list = {12};
  params.d = 0;
  params.trials = 2;
  params.seed = 5;
  params.small_n = 5;
  params.small_trials = 2;
  ExperimentReport report = run_sparse_poa(params);
  int rho = column(report, "rho");
  int bound = column(report, "bound");
  for (const auto& row : report.rows) {
    CHECK(parse_rat(row[rho]) == Rat(0));
    CHECK(parse_rat(row[bound]) == Rat(1));
  }
}

TEST_CASE("dense poa experiment verifies every trial") {
  DensePoaParams params;
  params.n = 20;
  params.d = Rat(1, 2);
  params.colors = 6;
  params.trials = 5;
  params.seed = 3;
  ExperimentReport report = run_dense_poa(params);
  CHECK(report.rows.size() == 5);
  int verified = column(report, "ne_verified");
  int ratio = column(report, "ratio");
  int bound = column(report, "bound");
  for (const auto& row : report.rows) {
    CHECK(row[verified] == "1");
    CHECK(parse_rat(row[ratio]) >= parse_rat(row[bound]));
  }
  CHECK(report.summary.at("all_verified") == true);
}

TEST_CASE("degree scaling experiment with exact substudy") {
  DegreeScalingParams params;
  params.n_list = {100};
  params.d = 3;
  params.trials = 3;
  params.seed = 13;
  params.small_n = 6;
  params.small_trials = 8;
  params.eps = 1;
  params.k = 2;
  ExperimentReport report = run_degree_scaling(params);
  CHECK(report.rows.size() == 11);
  int poa_ok = column(report, "poa_ok");
  int lb_ok = column(report, "lb_ok");
  for (const auto& row : report.rows) {
    if (!row[poa_ok].empty()) CHECK(row[poa_ok] == "1");
    if (!row[lb_ok].empty()) CHECK(row[lb_ok] == "1");
  }
  CHECK(report.summary.at("small_study").at("poa_all_ok") == true);
  CHECK(report.summary.at("small_study").at("lb_all_ok") == true);
}

TEST_CASE("common color experiment checks the local inequality") {
  CommonColorParams params;
  params.n = 6;
  params.d = 2;
  params.colors = 3;
  params.trials = 20;
  params.seed = 21;
  ExperimentReport report = run_common_color(params);
  CHECK(report.rows.size() == 20);
  int local = column(report, "local_ineq_ok");
  for (const auto& row : report.rows) CHECK(row[local] == "1");
  CHECK(report.summary.at("local_inequality_holds") == true);
  CHECK(report.summary.at("claimed_d0") == "37/49");

  // the pair family reports no claimed constant
  CommonColorParams pair = params;
  pair.family = StrategySetDistribution::Family::pair_with_common;
  pair.colors = params.n + 1;
  pair.k = 1;
  pair.trials = 5;
  ExperimentReport pair_report = run_common_color(pair);
  CHECK(pair_report.summary.at("claimed_d0").is_null());
}

TEST_CASE("summaries are recomputable from the rows") {
  SparsePoaParams params;
  params.n_list = {25};
  params.d = 2;
  params.trials = 6;
  params.seed = 9;
  ExperimentReport report = run_sparse_poa(params);
  int rho = column(report, "rho");
  double total = 0;
  for (const auto& row : report.rows) total += to_double(parse_rat(row[rho]));
  double stored = report.summary.at("groups")[0].at("rho").at("mean");
  CHECK(stored == doctest::Approx(total / 6).epsilon(1e-12));
}

TEST_CASE("csv and summary files are written") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "clugame_experiments_test";
  fs::create_directories(dir);

  CommonColorParams params;
  params.n = 5;
  params.trials = 3;
  params.seed = 2;
  ExperimentReport report = run_common_color(params);
  write_report_csv(report, (dir / "rows.csv").string());
  write_report_summary(report, (dir / "summary.json").string());

  std::ifstream csv(dir / "rows.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.find("poa") != std::string::npos);
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 3);

  std::ifstream summary(dir / "summary.json");
  nlohmann::json j;
  summary >> j;
  CHECK(j.at("experiment") == "common-color");
  fs::remove_all(dir);
}
