#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rfsom/dataset.hpp"
#include "rfsom/som.hpp"

namespace rfsom {

/// Everything a cross-validated run needs. Grid shape is mandatory, the
/// rest defaults to the values used throughout the experiments.
struct ExperimentConfig {
  std::filesystem::path data_path;
  std::string dataset_name;  ///< defaults to the data file stem
  LabelColumn label_column = LabelColumn::last();
  bool has_header = true;
  int grid_rows = 0;
  int grid_cols = 0;
  int tree_count = 100;
  int attributes_per_split = 0;  ///< 0 picks max(1, floor(sqrt(M)))
  int fold_count = 10;
  std::vector<std::uint64_t> seeds = {1};
  SomHyperParams som;
  bool normalize = true;
  std::filesystem::path out_dir = "out";
};

/// Percent accuracies for one method: per seed, per fold, plus the
/// pooled mean and population standard deviation over all folds.
struct MethodSummary {
  std::vector<std::vector<double>> fold_accuracies;
  double mean = 0.0;
  double stddev = 0.0;
};

MethodSummary summarize(std::vector<std::vector<double>> fold_accuracies);

struct ExperimentReport {
  ExperimentConfig config;
  int sample_count = 0;
  int attribute_count = 0;
  int class_count = 0;
  MethodSummary rf;
  MethodSummary som;
  MethodSummary rfsom;
  double elapsed_seconds = 0.0;  ///< kept out of the deterministic report
};

ExperimentReport run_experiment(const ExperimentConfig& config, const Dataset& data);
ExperimentReport run_experiment(const ExperimentConfig& config);

/// One row per forest size; accuracies as in ExperimentReport but the
/// Euclidean map is skipped since it does not depend on the forest.
struct SweepReport {
  ExperimentConfig config;
  std::vector<int> tree_counts;
  std::vector<MethodSummary> rf;
  std::vector<MethodSummary> rfsom;
  double elapsed_seconds = 0.0;
};

SweepReport run_tree_sweep(const ExperimentConfig& config, const std::vector<int>& tree_counts);
SweepReport run_tree_sweep(const ExperimentConfig& config, const std::vector<int>& tree_counts,
                           const Dataset& data);

/// Full-dataset training artifacts for the figure outputs.
struct VisualizeResult {
  std::vector<std::filesystem::path> files;
};

VisualizeResult run_visualize(const ExperimentConfig& config);
VisualizeResult run_visualize(const ExperimentConfig& config, const Dataset& data);

/// Outcome of one train/test split, exposed for tests: both maps start
/// from the identical grid captured here.
struct FoldOutcome {
  SomGrid initial_grid;
  double rf_accuracy = 0.0;
  double som_accuracy = 0.0;
  double rfsom_accuracy = 0.0;
};

FoldOutcome run_single_fold(const Dataset& data, const ExperimentConfig& config,
                            const FoldSplit& split, int fold, std::uint64_t seed);

std::string experiment_report_json(const ExperimentReport& report);
std::string experiment_report_table(const ExperimentReport& report);
std::string sweep_report_json(const SweepReport& report);

/// Writes report.json, report.txt and timings.txt under config.out_dir.
std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentReport& report);
std::vector<std::filesystem::path> write_sweep_outputs(const SweepReport& report);

}  // namespace rfsom
