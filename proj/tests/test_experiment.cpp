#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "rfsom/experiment.hpp"
#include "rfsom/json_io.hpp"
#include "rfsom/rng.hpp"
#include "test_helpers.hpp"
#include "xml_check.hpp"

using namespace rfsom;
using rfsom::testing::check_xml;
using rfsom::testing::count_occurrences;
using rfsom::testing::random_dataset;
using rfsom::testing::read_file;
using rfsom::testing::TempDir;

namespace {

Dataset quick_data(std::uint64_t seed, std::size_t n = 40, std::size_t m = 3,
                   int classes = 2) {
  Rng rng(seed);
  return random_dataset(rng, n, m, classes);
}

ExperimentConfig quick_config() {
  ExperimentConfig config;
  config.dataset_name = "toy";
  config.grid_rows = 2;
  config.grid_cols = 2;
  config.tree_count = 8;
  config.fold_count = 4;
  config.seeds = {1};
  config.som.epoch_limit = 3;
  return config;
}

}  // namespace

TEST_SUITE_BEGIN("experiment");

TEST_CASE("summarize pools folds across seeds") {
  MethodSummary summary = summarize({{100.0, 50.0}});
  CHECK(summary.mean == doctest::Approx(75.0));
  CHECK(summary.stddev == doctest::Approx(25.0));

  // Same numbers split over two seed rows pool identically.
  MethodSummary split = summarize({{100.0}, {50.0}});
  CHECK(split.mean == doctest::Approx(75.0));
  CHECK(split.stddev == doctest::Approx(25.0));

  MethodSummary constant = summarize({{80.0, 80.0, 80.0}});
  CHECK(constant.mean == doctest::Approx(80.0));
  CHECK(constant.stddev == doctest::Approx(0.0));

  CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("run_single_fold reproduces the shared initial grid") {
  Dataset data = quick_data(31, 24);
  ExperimentConfig config = quick_config();
  const std::uint64_t seed = 11;
  const int fold = 2;
  FoldSplit split = stratified_folds(data, config.fold_count, seed);

  FoldOutcome outcome = run_single_fold(data, config, split, fold, seed);
  CHECK(outcome.rf_accuracy >= 0.0);
  CHECK(outcome.rf_accuracy <= 100.0);
  CHECK(outcome.som_accuracy >= 0.0);
  CHECK(outcome.rfsom_accuracy >= 0.0);

  // The captured grid is init_grid of the normalized training subset under
  // the fold seed's init stream.
  Dataset train = subset(data, fold_complement(split, fold));
  train = apply_normalization(train, fit_minmax(train));
  SomGrid expected = init_grid(config.grid_rows, config.grid_cols, train,
                               derive_seed(seed + static_cast<std::uint64_t>(fold), 2));
  CHECK(outcome.initial_grid == expected);

  FoldOutcome again = run_single_fold(data, config, split, fold, seed);
  CHECK(again.initial_grid == outcome.initial_grid);
  CHECK(again.rf_accuracy == outcome.rf_accuracy);
  CHECK(again.som_accuracy == outcome.som_accuracy);
  CHECK(again.rfsom_accuracy == outcome.rfsom_accuracy);
}

TEST_CASE("run_experiment shapes, ranges and config echo") {
  Dataset data = quick_data(37);
  ExperimentConfig config = quick_config();
  config.seeds = {1, 2};

  ExperimentReport report = run_experiment(config, data);
  CHECK(report.sample_count == 40);
  CHECK(report.attribute_count == 3);
  CHECK(report.class_count == 2);
  CHECK(report.config.attributes_per_split == 1);  // floor(sqrt(3))
  CHECK(report.config.dataset_name == "toy");

  for (const MethodSummary* summary : {&report.rf, &report.som, &report.rfsom}) {
    REQUIRE(summary->fold_accuracies.size() == 2);
    for (const auto& row : summary->fold_accuracies) {
      REQUIRE(row.size() == 4);
      for (double a : row) {
        CHECK(a >= 0.0);
        CHECK(a <= 100.0);
      }
    }
    CHECK(summary->mean >= 0.0);
    CHECK(summary->mean <= 100.0);
    CHECK(summary->stddev >= 0.0);
  }
}

TEST_CASE("run_experiment is deterministic and its json excludes timing") {
  Dataset data = quick_data(41);
  ExperimentConfig config = quick_config();
  ExperimentReport first = run_experiment(config, data);
  ExperimentReport second = run_experiment(config, data);
  const std::string json1 = experiment_report_json(first);
  CHECK(json1 == experiment_report_json(second));
  CHECK(json1.find("elapsed") == std::string::npos);

  Json parsed = Json::parse(json1);
  CHECK(parsed["schema_version"] == kSchemaVersion);
  CHECK(parsed["type"] == "experiment_report");
  CHECK(parsed["config"]["grid"] == "2x2");
  CHECK(parsed["config"]["m"] == 1);
  CHECK(parsed["methods"]["rf"]["mean"].get<double>() ==
        doctest::Approx(first.rf.mean).epsilon(1e-12));
  CHECK(parsed["methods"]["rfsom"]["folds"].size() == 1);
}

TEST_CASE("run_experiment validation") {
  Dataset data = quick_data(43, 12);
  ExperimentConfig config = quick_config();

  ExperimentConfig no_grid = config;
  no_grid.grid_rows = 0;
  CHECK_THROWS_WITH_AS(run_experiment(no_grid, data), doctest::Contains("grid shape"),
                       std::invalid_argument);

  ExperimentConfig one_fold = config;
  one_fold.fold_count = 1;
  CHECK_THROWS_WITH_AS(run_experiment(one_fold, data), doctest::Contains("folds"),
                       std::invalid_argument);

  ExperimentConfig no_seeds = config;
  no_seeds.seeds.clear();
  CHECK_THROWS_AS(run_experiment(no_seeds, data), std::invalid_argument);

  ExperimentConfig too_many = config;
  too_many.fold_count = 13;
  CHECK_THROWS_WITH_AS(run_experiment(too_many, data),
                       doctest::Contains("more folds than samples"),
                       std::invalid_argument);
}

TEST_CASE("experiment table lists all three methods") {
  Dataset data = quick_data(47, 24);
  ExperimentConfig config = quick_config();
  ExperimentReport report = run_experiment(config, data);
  std::string table = experiment_report_table(report);
  CHECK(table.find("dataset: toy (N=24, M=3, C=2)") != std::string::npos);
  CHECK(table.find("RF-SOM") != std::string::npos);
  CHECK(table.find("SOM") != std::string::npos);
  CHECK(table.find("normalize on") != std::string::npos);
}

TEST_CASE("write_experiment_outputs emits stable reports plus a timing sidecar") {
  Dataset data = quick_data(53, 24);
  ExperimentConfig config = quick_config();
  TempDir dir;
  config.out_dir = dir.path();
  ExperimentReport report = run_experiment(config, data);
  auto files = write_experiment_outputs(report);
  REQUIRE(files.size() == 3);
  CHECK(files[0].filename() == "toy_report.json");
  CHECK(files[1].filename() == "toy_report.txt");
  CHECK(files[2].filename() == "toy_timings.txt");
  for (const auto& f : files) CHECK(std::filesystem::exists(f));

  CHECK(read_file(files[0]) == experiment_report_json(report));
  const std::string timing = read_file(files[2]);
  CHECK(timing.rfind("elapsed_seconds ", 0) == 0);

  // Rewriting the same report reproduces the json and table byte for byte.
  TempDir second;
  report.config.out_dir = second.path();
  auto files2 = write_experiment_outputs(report);
  CHECK(read_file(files2[0]) == read_file(files[0]));
  CHECK(read_file(files2[1]) == read_file(files[1]));
}

TEST_CASE("run_tree_sweep covers each forest size") {
  Dataset data = quick_data(59, 24);
  ExperimentConfig config = quick_config();
  SweepReport sweep = run_tree_sweep(config, {3, 9}, data);
  CHECK(sweep.tree_counts == std::vector<int>{3, 9});
  REQUIRE(sweep.rf.size() == 2);
  REQUIRE(sweep.rfsom.size() == 2);
  for (const auto& summary : sweep.rf) {
    REQUIRE(summary.fold_accuracies.size() == 1);
    CHECK(summary.fold_accuracies[0].size() == 4);
  }

  std::string json = sweep_report_json(sweep);
  Json parsed = Json::parse(json);
  CHECK(parsed["type"] == "sweep_report");
  REQUIRE(parsed["rows"].size() == 2);
  CHECK(parsed["rows"][0]["trees"] == 3);
  CHECK(parsed["rows"][1]["trees"] == 9);
  CHECK(!parsed["config"].contains("samples"));

  CHECK_THROWS_WITH_AS(run_tree_sweep(config, {}, data),
                       doctest::Contains("empty tree count"), std::invalid_argument);
}

TEST_CASE("write_sweep_outputs renders the accuracy chart") {
  Dataset data = quick_data(61, 24);
  ExperimentConfig config = quick_config();
  TempDir dir;
  config.out_dir = dir.path();
  SweepReport sweep = run_tree_sweep(config, {3, 6}, data);
  sweep.config.out_dir = dir.path();
  auto files = write_sweep_outputs(sweep);
  REQUIRE(files.size() == 4);
  CHECK(files[0].filename() == "toy_sweep.json");
  CHECK(files[1].filename() == "toy_sweep.txt");
  CHECK(files[2].filename() == "toy_sweep.svg");
  CHECK(files[3].filename() == "toy_timings.txt");
  const std::string svg = read_file(files[2]);
  auto xml = check_xml(svg);
  INFO(xml.error);
  CHECK(xml.ok);
  CHECK(count_occurrences(svg, "<polyline") == 2);
}

TEST_CASE("run_visualize writes the full artifact set deterministically") {
  Dataset data = quick_data(67, 16, 3, 2);
  ExperimentConfig config = quick_config();
  config.som.epoch_limit = 2;
  TempDir dir;
  config.out_dir = dir.path();

  VisualizeResult result = run_visualize(config, data);
  REQUIRE(result.files.size() == 7);
  const std::vector<std::string> expected = {
      "toy_som.svg",  "toy_rfsom.svg", "toy_mds.svg",       "toy_rfmds.svg",
      "toy_mds.csv",  "toy_rfmds.csv", "toy_proximity.csv"};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(result.files[i].filename() == expected[i]);
    CHECK(std::filesystem::exists(result.files[i]));
  }

  const std::string som_svg = read_file(result.files[0]);
  const std::string rfsom_svg = read_file(result.files[1]);
  for (const std::string* svg : {&som_svg, &rfsom_svg}) {
    auto xml = check_xml(*svg);
    INFO(xml.error);
    CHECK(xml.ok);
    // 2x2 grid of 3-attribute coxcombs.
    CHECK(count_occurrences(*svg, "class=\"wedge\"") == 4 * 3);
  }
  for (int i : {2, 3}) {
    const std::string svg = read_file(result.files[static_cast<std::size_t>(i)]);
    CHECK(check_xml(svg).ok);
    CHECK(count_occurrences(svg, "class=\"marker\"") == 16);
  }

  const std::string prox_csv = read_file(result.files[6]);
  CHECK(count_occurrences(prox_csv, "\n") == 16);
  const std::string mds_csv = read_file(result.files[4]);
  CHECK(count_occurrences(mds_csv, "\n") == 17);  // header + one row per sample

  // A second run elsewhere yields byte-identical artifacts.
  TempDir other;
  config.out_dir = other.path();
  VisualizeResult rerun = run_visualize(config, data);
  for (std::size_t i = 0; i < 7; ++i)
    CHECK(read_file(rerun.files[i]) == read_file(result.files[i]));
}

TEST_SUITE_END();
