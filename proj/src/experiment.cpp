#include "rfsom/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "rfsom/forest.hpp"
#include "rfsom/json_io.hpp"
#include "rfsom/mds.hpp"
#include "rfsom/rf_som.hpp"
#include "rfsom/rng.hpp"
#include "rfsom/viz.hpp"

namespace rfsom {

namespace {

// Stream tags for deriving independent component seeds from one fold seed.
constexpr std::uint64_t kForestStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kShuffleStream = 3;

void check_config(const ExperimentConfig& config) {
  require(config.grid_rows >= 1 && config.grid_cols >= 1,
          "experiment: grid shape required (--grid PxQ)");
  require(config.tree_count >= 1, "experiment: tree count must be positive");
  require(config.fold_count >= 2, "experiment: need at least 2 folds");
  require(!config.seeds.empty(), "experiment: need at least one seed");
}

std::string dataset_name(const ExperimentConfig& config) {
  if (!config.dataset_name.empty()) return config.dataset_name;
  const std::string stem = config.data_path.stem().string();
  return stem.empty() ? "dataset" : stem;
}

int effective_m(const ExperimentConfig& config, const Dataset& data) {
  return config.attributes_per_split > 0
             ? config.attributes_per_split
             : default_attributes_per_split(static_cast<int>(data.attribute_count()));
}

template <typename Predictor>
double percent_correct(const Dataset& test, Predictor&& predict) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (predict(test.row(i)) == test.labels[i]) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(test.size());
}

FoldOutcome run_fold(const Dataset& data, const ExperimentConfig& config,
                     const FoldSplit& split, int fold, std::uint64_t seed,
                     bool with_som) {
  const auto train_rows = fold_complement(split, fold);
  const auto test_rows = fold_members(split, fold);
  Dataset train = subset(data, train_rows);
  Dataset test = subset(data, test_rows);
  if (config.normalize) {
    const NormalizationParams params = fit_minmax(train);
    train = apply_normalization(train, params);
    test = apply_normalization(test, params);
  }

  const std::uint64_t fold_seed = seed + static_cast<std::uint64_t>(fold);
  FoldOutcome outcome;

  const RandomForest forest =
      train_forest(train, config.tree_count, effective_m(config, data),
                   derive_seed(fold_seed, kForestStream));
  outcome.rf_accuracy =
      percent_correct(test, [&](std::span<const double> x) { return forest.predict(x); });

  // Both maps start from this exact grid and consume the same shuffle
  // stream; only the BMU search differs.
  outcome.initial_grid = init_grid(config.grid_rows, config.grid_cols, train,
                                   derive_seed(fold_seed, kInitStream));
  const std::uint64_t shuffle_seed = derive_seed(fold_seed, kShuffleStream);

  if (with_som) {
    const SomGrid trained =
        train_som(outcome.initial_grid, train, config.som, shuffle_seed);
    const LabeledSom labeled =
        label_som(trained, train, euclidean_bmu(), config.som.alpha0);
    outcome.som_accuracy = percent_correct(test, [&](std::span<const double> x) {
      return classify(labeled, x, euclidean_bmu());
    });
  }

  const SomGrid rf_trained =
      train_rfsom(outcome.initial_grid, forest, train, config.som, shuffle_seed);
  const LabeledSom rf_labeled =
      label_som(rf_trained, train, rf_bmu(forest), config.som.alpha0);
  outcome.rfsom_accuracy = percent_correct(test, [&](std::span<const double> x) {
    return classify(rf_labeled, x, rf_bmu(forest));
  });

  return outcome;
}

ExperimentReport run_all_folds(const ExperimentConfig& config, const Dataset& data,
                               bool with_som) {
  check_config(config);
  require(static_cast<std::size_t>(config.fold_count) <= data.size(),
          "experiment: more folds than samples");
  const auto start = std::chrono::steady_clock::now();

  ExperimentReport report;
  report.config = config;
  report.config.dataset_name = dataset_name(config);
  report.config.attributes_per_split = effective_m(config, data);
  report.sample_count = static_cast<int>(data.size());
  report.attribute_count = static_cast<int>(data.attribute_count());
  report.class_count = data.class_count;

  std::vector<std::vector<double>> rf_rows, som_rows, rfsom_rows;
  for (const std::uint64_t seed : config.seeds) {
    const FoldSplit split = stratified_folds(data, config.fold_count, seed);
    std::vector<double> rf_fold, som_fold, rfsom_fold;
    for (int fold = 0; fold < config.fold_count; ++fold) {
      const FoldOutcome outcome = run_fold(data, config, split, fold, seed, with_som);
      rf_fold.push_back(outcome.rf_accuracy);
      som_fold.push_back(outcome.som_accuracy);
      rfsom_fold.push_back(outcome.rfsom_accuracy);
    }
    rf_rows.push_back(std::move(rf_fold));
    som_rows.push_back(std::move(som_fold));
    rfsom_rows.push_back(std::move(rfsom_fold));
  }
  report.rf = summarize(std::move(rf_rows));
  if (with_som) report.som = summarize(std::move(som_rows));
  report.rfsom = summarize(std::move(rfsom_rows));

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Json summary_to_json(const MethodSummary& summary) {
  Json j;
  j["mean"] = summary.mean;
  j["stddev"] = summary.stddev;
  j["folds"] = summary.fold_accuracies;
  return j;
}

Json report_config_json(const ExperimentReport& report) {
  const ExperimentConfig& config = report.config;
  Json j;
  j["dataset"] = report.config.dataset_name;
  j["samples"] = report.sample_count;
  j["attributes"] = report.attribute_count;
  j["classes"] = report.class_count;
  j["grid"] = std::to_string(config.grid_rows) + "x" + std::to_string(config.grid_cols);
  j["trees"] = config.tree_count;
  j["m"] = config.attributes_per_split;
  j["folds"] = config.fold_count;
  j["seeds"] = config.seeds;
  j["normalize"] = config.normalize;
  j["som"] = som_params_to_json(config.som);
  return j;
}

std::string format_row(const char* name, const MethodSummary& summary) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%-8s %7.2f %7.2f\n", name, summary.mean,
                summary.stddev);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

MethodSummary summarize(std::vector<std::vector<double>> fold_accuracies) {
  MethodSummary summary;
  summary.fold_accuracies = std::move(fold_accuracies);
  std::size_t count = 0;
  double sum = 0.0;
  for (const auto& row : summary.fold_accuracies) {
    for (double a : row) {
      sum += a;
      ++count;
    }
  }
  require(count > 0, "summarize: no accuracies");
  summary.mean = sum / static_cast<double>(count);
  double squares = 0.0;
  for (const auto& row : summary.fold_accuracies) {
    for (double a : row) {
      const double d = a - summary.mean;
      squares += d * d;
    }
  }
  summary.stddev = std::sqrt(squares / static_cast<double>(count));
  return summary;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const Dataset& data) {
  return run_all_folds(config, data, true);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const Dataset data =
      load_csv(config.data_path, config.label_column, config.has_header);
  return run_experiment(config, data);
}

SweepReport run_tree_sweep(const ExperimentConfig& config,
                           const std::vector<int>& tree_counts, const Dataset& data) {
  require(!tree_counts.empty(), "sweep: empty tree count list");
  const auto start = std::chrono::steady_clock::now();
  SweepReport sweep;
  sweep.config = config;
  sweep.config.dataset_name = dataset_name(config);
  sweep.tree_counts = tree_counts;
  for (const int trees : tree_counts) {
    ExperimentConfig point = config;
    point.tree_count = trees;
    const ExperimentReport report = run_all_folds(point, data, false);
    sweep.rf.push_back(report.rf);
    sweep.rfsom.push_back(report.rfsom);
  }
  sweep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sweep;
}

SweepReport run_tree_sweep(const ExperimentConfig& config,
                           const std::vector<int>& tree_counts) {
  const Dataset data =
      load_csv(config.data_path, config.label_column, config.has_header);
  return run_tree_sweep(config, tree_counts, data);
}

VisualizeResult run_visualize(const ExperimentConfig& config, const Dataset& data) {
  check_config(config);
  const std::string name = dataset_name(config);
  const std::uint64_t seed = config.seeds.front();

  Dataset working = data;
  if (config.normalize) {
    working = apply_normalization(data, fit_minmax(data));
  }

  const RandomForest forest =
      train_forest(working, config.tree_count, effective_m(config, data),
                   derive_seed(seed, kForestStream));
  const SomGrid initial = init_grid(config.grid_rows, config.grid_cols, working,
                                    derive_seed(seed, kInitStream));
  const std::uint64_t shuffle_seed = derive_seed(seed, kShuffleStream);

  const LabeledSom som_model =
      label_som(train_som(initial, working, config.som, shuffle_seed), working,
                euclidean_bmu(), config.som.alpha0);
  const LabeledSom rfsom_model =
      label_som(train_rfsom(initial, forest, working, config.som, shuffle_seed),
                working, rf_bmu(forest), config.som.alpha0);

  const DistanceMatrix euclidean = euclidean_distance_matrix(working.attributes);
  const Embedding2D mds = classical_mds(euclidean);
  const ProximityMatrix proximity = proximity_matrix(forest, working.attributes);
  const Embedding2D rfmds = classical_mds(dissimilarity_from_proximity(proximity.values));

  std::filesystem::create_directories(config.out_dir);
  VisualizeResult result;
  const auto emit = [&](const std::string& file, const std::string& text) {
    const std::filesystem::path path = config.out_dir / file;
    write_text(path, text);
    result.files.push_back(path);
  };

  const auto palette = default_class_palette(data.class_count);
  CoxcombSpec coxcomb;
  coxcomb.class_colors = palette;
  coxcomb.model = &som_model;
  emit(name + "_som.svg", render_som_grid(coxcomb));
  coxcomb.model = &rfsom_model;
  emit(name + "_rfsom.svg", render_som_grid(coxcomb));

  ScatterSpec scatter;
  scatter.labels = data.labels;
  scatter.class_colors = palette;
  scatter.embedding = &mds;
  emit(name + "_mds.svg", render_scatter(scatter));
  scatter.embedding = &rfmds;
  emit(name + "_rfmds.svg", render_scatter(scatter));

  emit(name + "_mds.csv", embedding_to_csv(mds.coordinates, data.labels));
  emit(name + "_rfmds.csv", embedding_to_csv(rfmds.coordinates, data.labels));
  emit(name + "_proximity.csv", proximity_to_csv(proximity));
  return result;
}

VisualizeResult run_visualize(const ExperimentConfig& config) {
  const Dataset data =
      load_csv(config.data_path, config.label_column, config.has_header);
  return run_visualize(config, data);
}

FoldOutcome run_single_fold(const Dataset& data, const ExperimentConfig& config,
                            const FoldSplit& split, int fold, std::uint64_t seed) {
  check_config(config);
  return run_fold(data, config, split, fold, seed, true);
}

std::string experiment_report_json(const ExperimentReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "experiment_report";
  j["config"] = report_config_json(report);
  j["methods"] = {{"rf", summary_to_json(report.rf)},
                  {"som", summary_to_json(report.som)},
                  {"rfsom", summary_to_json(report.rfsom)}};
  j["stddev_definition"] = "population standard deviation over all fold accuracies";
  return j.dump(2) + "\n";
}

std::string experiment_report_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << "dataset: " << report.config.dataset_name << " (N=" << report.sample_count
      << ", M=" << report.attribute_count << ", C=" << report.class_count << ")\n";
  out << "grid " << report.config.grid_rows << "x" << report.config.grid_cols
      << ", trees " << report.config.tree_count << ", folds "
      << report.config.fold_count << ", seeds";
  for (std::uint64_t s : report.config.seeds) out << " " << s;
  out << ", normalize " << (report.config.normalize ? "on" : "off") << "\n\n";
  out << "method      mean     std\n";
  out << format_row("RF", report.rf);
  out << format_row("SOM", report.som);
  out << format_row("RF-SOM", report.rfsom);
  return out.str();
}

std::string sweep_report_json(const SweepReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "sweep_report";
  ExperimentReport shell;
  shell.config = report.config;
  j["config"] = report_config_json(shell);
  j["config"].erase("samples");
  j["config"].erase("attributes");
  j["config"].erase("classes");
  Json rows = Json::array();
  for (std::size_t i = 0; i < report.tree_counts.size(); ++i) {
    Json row;
    row["trees"] = report.tree_counts[i];
    row["rf"] = summary_to_json(report.rf[i]);
    row["rfsom"] = summary_to_json(report.rfsom[i]);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentReport& report) {
  std::filesystem::create_directories(report.config.out_dir);
  const std::string name = report.config.dataset_name;
  std::vector<std::filesystem::path> files;

  const auto json_path = report.config.out_dir / (name + "_report.json");
  write_text(json_path, experiment_report_json(report));
  files.push_back(json_path);

  const auto table_path = report.config.out_dir / (name + "_report.txt");
  write_text(table_path, experiment_report_table(report));
  files.push_back(table_path);

  // Wall-clock numbers live in a sidecar so the report itself stays
  // byte-stable across runs.
  char timing[64];
  std::snprintf(timing, sizeof(timing), "elapsed_seconds %.3f\n", report.elapsed_seconds);
  const auto timing_path = report.config.out_dir / (name + "_timings.txt");
  write_text(timing_path, timing);
  files.push_back(timing_path);
  return files;
}

std::vector<std::filesystem::path> write_sweep_outputs(const SweepReport& report) {
  std::filesystem::create_directories(report.config.out_dir);
  const std::string name = report.config.dataset_name;
  std::vector<std::filesystem::path> files;

  const auto json_path = report.config.out_dir / (name + "_sweep.json");
  write_text(json_path, sweep_report_json(report));
  files.push_back(json_path);

  std::ostringstream table;
  table << "dataset: " << name << "\n\n";
  table << "trees   RF mean  RF std  RF-SOM mean  RF-SOM std\n";
  for (std::size_t i = 0; i < report.tree_counts.size(); ++i) {
    char row[128];
    std::snprintf(row, sizeof(row), "%5d %9.2f %7.2f %12.2f %11.2f\n",
                  report.tree_counts[i], report.rf[i].mean, report.rf[i].stddev,
                  report.rfsom[i].mean, report.rfsom[i].stddev);
    table << row;
  }
  const auto table_path = report.config.out_dir / (name + "_sweep.txt");
  write_text(table_path, table.str());
  files.push_back(table_path);

  std::vector<LineSeries> series(2);
  series[0].name = "RF";
  series[0].color = "#d62728";
  series[1].name = "RF-SOM";
  series[1].color = "#1f77b4";
  for (std::size_t i = 0; i < report.tree_counts.size(); ++i) {
    const double t = static_cast<double>(report.tree_counts[i]);
    series[0].x.push_back(t);
    series[0].y.push_back(report.rf[i].mean);
    series[1].x.push_back(t);
    series[1].y.push_back(report.rfsom[i].mean);
  }
  const auto chart_path = report.config.out_dir / (name + "_sweep.svg");
  write_text(chart_path, render_line_chart(series, "trees", "accuracy [%]"));
  files.push_back(chart_path);

  char timing[64];
  std::snprintf(timing, sizeof(timing), "elapsed_seconds %.3f\n", report.elapsed_seconds);
  const auto timing_path = report.config.out_dir / (name + "_timings.txt");
  write_text(timing_path, timing);
  files.push_back(timing_path);
  return files;
}

}  // namespace rfsom
