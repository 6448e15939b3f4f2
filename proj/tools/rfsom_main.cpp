#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rfsom/experiment.hpp"
#include "rfsom/json_io.hpp"
#include "rfsom/rf_som.hpp"
#include "rfsom/rng.hpp"

namespace {

using rfsom::Dataset;
using rfsom::ExperimentConfig;
using rfsom::Json;
using rfsom::LabelColumn;

// Stream tags matching the per-fold derivation in the experiment runner.
constexpr std::uint64_t kForestStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kShuffleStream = 3;

struct CommonFlags {
  std::string config;
  std::string data;
  std::string name;
  std::string label = "last";
  bool no_header = false;
  std::string grid;
  int trees = 100;
  int m = 0;
  int folds = 10;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;
  bool no_normalize = false;
  std::string out = "out";
  int epochs = 200;
  double eta0 = 0.1;
  double lambda_eta = 0.0345;
  double alpha0 = 0.1;
  double lambda_alpha = 0.008;

  CLI::Option* data_opt = nullptr;
  CLI::Option* name_opt = nullptr;
  CLI::Option* label_opt = nullptr;
  CLI::Option* no_header_opt = nullptr;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* trees_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* folds_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* seeds_opt = nullptr;
  CLI::Option* no_normalize_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* epochs_opt = nullptr;
  CLI::Option* eta0_opt = nullptr;
  CLI::Option* lambda_eta_opt = nullptr;
  CLI::Option* alpha0_opt = nullptr;
  CLI::Option* lambda_alpha_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file; flags override its values");
  f.data_opt = cmd->add_option("--data", f.data, "CSV data file");
  f.name_opt = cmd->add_option("--name", f.name, "dataset display name (default: file stem)");
  f.label_opt =
      cmd->add_option("--label-col", f.label, "label column: 'last', an index, or a header name");
  f.no_header_opt = cmd->add_flag("--no-header", f.no_header, "data file has no header line");
  f.grid_opt = cmd->add_option("--grid", f.grid, "SOM grid shape PxQ, e.g. 7x7");
  f.trees_opt = cmd->add_option("--trees", f.trees, "number of trees in the forest");
  f.m_opt = cmd->add_option("--m", f.m, "attributes per split (0 = max(1, floor(sqrt(M))))");
  f.folds_opt = cmd->add_option("--folds", f.folds, "cross-validation fold count");
  f.seed_opt = cmd->add_option("--seed", f.seed, "RNG seed");
  f.seeds_opt = cmd->add_option("--seeds", f.seeds, "comma-separated seed list (overrides --seed)")
                    ->delimiter(',');
  f.no_normalize_opt =
      cmd->add_flag("--no-normalize", f.no_normalize, "disable min-max normalization");
  f.out_opt = cmd->add_option("--out", f.out, "output directory");
  f.epochs_opt = cmd->add_option("--epochs", f.epochs, "SOM training epochs");
  f.eta0_opt = cmd->add_option("--eta0", f.eta0, "SOM initial learning rate");
  f.lambda_eta_opt = cmd->add_option("--lambda-eta", f.lambda_eta, "learning rate decay");
  f.alpha0_opt = cmd->add_option("--alpha0", f.alpha0, "neighbourhood width base");
  f.lambda_alpha_opt =
      cmd->add_option("--lambda-alpha", f.lambda_alpha, "neighbourhood growth rate");
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto pos = text.find('x');
  if (pos == std::string::npos || pos == 0 || pos + 1 == text.size()) {
    throw std::runtime_error("--grid expects PxQ, e.g. 7x7 (got '" + text + "')");
  }
  const int rows = std::stoi(text.substr(0, pos));
  const int cols = std::stoi(text.substr(pos + 1));
  if (rows < 1 || cols < 1) throw std::runtime_error("--grid dimensions must be positive");
  return {rows, cols};
}

void apply_som_json(const Json& j, rfsom::SomHyperParams& som) {
  if (j.contains("epoch_limit")) som.epoch_limit = j["epoch_limit"].get<int>();
  if (j.contains("eta0")) som.eta0 = j["eta0"].get<double>();
  if (j.contains("lambda_eta")) som.lambda_eta = j["lambda_eta"].get<double>();
  if (j.contains("alpha0")) som.alpha0 = j["alpha0"].get<double>();
  if (j.contains("lambda_alpha")) som.lambda_alpha = j["lambda_alpha"].get<double>();
}

void apply_json_config(const Json& j, ExperimentConfig& config) {
  if (j.contains("data")) config.data_path = j["data"].get<std::string>();
  if (j.contains("name")) config.dataset_name = j["name"].get<std::string>();
  if (j.contains("label_col")) {
    config.label_column = LabelColumn::parse(j["label_col"].is_number_integer()
                                                 ? std::to_string(j["label_col"].get<int>())
                                                 : j["label_col"].get<std::string>());
  }
  if (j.contains("header")) config.has_header = j["header"].get<bool>();
  if (j.contains("grid")) {
    const auto [rows, cols] = parse_grid(j["grid"].get<std::string>());
    config.grid_rows = rows;
    config.grid_cols = cols;
  }
  if (j.contains("trees")) config.tree_count = j["trees"].get<int>();
  if (j.contains("m")) config.attributes_per_split = j["m"].get<int>();
  if (j.contains("folds")) config.fold_count = j["folds"].get<int>();
  if (j.contains("seed")) config.seeds = {j["seed"].get<std::uint64_t>()};
  if (j.contains("seeds")) config.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (j.contains("normalize")) config.normalize = j["normalize"].get<bool>();
  if (j.contains("out")) config.out_dir = j["out"].get<std::string>();
  if (j.contains("som")) apply_som_json(j["som"], config.som);
}

ExperimentConfig build_config(const CommonFlags& f) {
  ExperimentConfig config;
  Json file_config;
  if (!f.config.empty()) {
    file_config = rfsom::load_json(f.config);
    apply_json_config(file_config, config);
  }
  if (f.data_opt->count()) config.data_path = f.data;
  if (f.name_opt->count()) config.dataset_name = f.name;
  if (f.label_opt->count()) config.label_column = LabelColumn::parse(f.label);
  if (f.no_header_opt->count()) config.has_header = false;
  if (f.grid_opt->count()) {
    const auto [rows, cols] = parse_grid(f.grid);
    config.grid_rows = rows;
    config.grid_cols = cols;
  }
  if (f.trees_opt->count()) config.tree_count = f.trees;
  if (f.m_opt->count()) config.attributes_per_split = f.m;
  if (f.folds_opt->count()) config.fold_count = f.folds;
  if (f.seed_opt->count()) config.seeds = {f.seed};
  if (f.seeds_opt->count()) config.seeds = f.seeds;
  if (f.no_normalize_opt->count()) config.normalize = false;
  if (f.out_opt->count()) config.out_dir = f.out;
  if (f.epochs_opt->count()) config.som.epoch_limit = f.epochs;
  if (f.eta0_opt->count()) config.som.eta0 = f.eta0;
  if (f.lambda_eta_opt->count()) config.som.lambda_eta = f.lambda_eta;
  if (f.alpha0_opt->count()) config.som.alpha0 = f.alpha0;
  if (f.lambda_alpha_opt->count()) config.som.lambda_alpha = f.lambda_alpha;
  if (config.data_path.empty()) throw std::runtime_error("--data is required");
  return config;
}

int cmd_experiment(const CommonFlags& flags) {
  const ExperimentConfig config = build_config(flags);
  const rfsom::ExperimentReport report = rfsom::run_experiment(config);
  std::cout << rfsom::experiment_report_table(report);
  for (const auto& file : rfsom::write_experiment_outputs(report)) {
    std::cout << "wrote " << file.string() << "\n";
  }
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::vector<int>& tree_counts,
              bool counts_given) {
  const ExperimentConfig config = build_config(flags);
  std::vector<int> counts = tree_counts;
  if (!counts_given && !flags.config.empty()) {
    const Json j = rfsom::load_json(flags.config);
    if (j.contains("tree_counts")) counts = j["tree_counts"].get<std::vector<int>>();
  }
  const rfsom::SweepReport report = rfsom::run_tree_sweep(config, counts);
  for (const auto& file : rfsom::write_sweep_outputs(report)) {
    std::cout << "wrote " << file.string() << "\n";
  }
  return 0;
}

int cmd_visualize(const CommonFlags& flags) {
  const ExperimentConfig config = build_config(flags);
  const rfsom::VisualizeResult result = rfsom::run_visualize(config);
  for (const auto& file : result.files) {
    std::cout << "wrote " << file.string() << "\n";
  }
  return 0;
}

int cmd_train(const CommonFlags& flags, const std::string& method,
              const std::string& model_out) {
  const ExperimentConfig config = build_config(flags);
  const Dataset data =
      rfsom::load_csv(config.data_path, config.label_column, config.has_header);
  const std::uint64_t seed = config.seeds.empty() ? 1 : config.seeds.front();

  rfsom::ModelBundle bundle;
  bundle.kind = rfsom::model_kind_from_name(method);
  Dataset working = data;
  if (config.normalize) {
    bundle.normalization = rfsom::fit_minmax(data);
    working = rfsom::apply_normalization(data, bundle.normalization);
  }
  const int m = config.attributes_per_split > 0
                    ? config.attributes_per_split
                    : rfsom::default_attributes_per_split(
                          static_cast<int>(data.attribute_count()));

  if (bundle.kind != rfsom::ModelKind::Som) {
    bundle.forest = rfsom::train_forest(working, config.tree_count, m,
                                        rfsom::derive_seed(seed, kForestStream));
  }
  if (bundle.kind != rfsom::ModelKind::Rf) {
    rfsom::require(config.grid_rows >= 1 && config.grid_cols >= 1,
                   "train: grid shape required (--grid PxQ)");
    bundle.som.params = config.som;
    bundle.som.init_seed = rfsom::derive_seed(seed, kInitStream);
    bundle.som.train_seed = rfsom::derive_seed(seed, kShuffleStream);
    bundle.som.label_alpha = config.som.alpha0;
    rfsom::SomGrid grid = rfsom::init_grid(config.grid_rows, config.grid_cols, working,
                                           bundle.som.init_seed);
    if (bundle.kind == rfsom::ModelKind::Som) {
      grid = rfsom::train_som(std::move(grid), working, config.som, bundle.som.train_seed);
      bundle.som.labeled = rfsom::label_som(std::move(grid), working,
                                            rfsom::euclidean_bmu(), config.som.alpha0);
    } else {
      grid = rfsom::train_rfsom(std::move(grid), bundle.forest, working, config.som,
                                bundle.som.train_seed);
      bundle.som.labeled = rfsom::label_som(std::move(grid), working,
                                            rfsom::rf_bmu(bundle.forest), config.som.alpha0);
    }
  }

  std::filesystem::path path = model_out;
  if (path.empty()) {
    std::filesystem::create_directories(config.out_dir);
    path = config.out_dir / "model.json";
  } else if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  rfsom::save_json(rfsom::model_bundle_to_json(bundle), path);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_predict(const CommonFlags& flags, const std::string& model_path,
                const std::string& predictions_out) {
  if (model_path.empty()) throw std::runtime_error("--model is required");
  const ExperimentConfig config = build_config(flags);
  const rfsom::ModelBundle bundle =
      rfsom::model_bundle_from_json(rfsom::load_json(model_path));
  const Dataset data =
      rfsom::load_csv(config.data_path, config.label_column, config.has_header);

  const std::size_t model_dims =
      bundle.kind == rfsom::ModelKind::Som
          ? bundle.som.labeled.grid.weights.cols()
          : static_cast<std::size_t>(bundle.forest.attribute_count());
  if (data.attribute_count() != model_dims) {
    throw std::runtime_error("model expects " + std::to_string(model_dims) +
                             " attributes, data has " +
                             std::to_string(data.attribute_count()));
  }

  std::string csv = "prediction\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    csv += std::to_string(rfsom::predict_with(bundle, data.row(i)));
    csv += '\n';
  }
  if (predictions_out.empty()) {
    std::cout << csv;
  } else {
    const std::filesystem::path path = predictions_out;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << csv;
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random forest / self-organising map classification and visualization"};
  app.require_subcommand(1);

  CLI::App* experiment =
      app.add_subcommand("experiment", "cross-validated accuracy comparison");
  CommonFlags experiment_flags;
  add_common(experiment, experiment_flags);

  CLI::App* sweep = app.add_subcommand("sweep", "accuracy vs forest size");
  CommonFlags sweep_flags;
  add_common(sweep, sweep_flags);
  std::vector<int> tree_counts = {10, 20, 50, 100, 200, 500};
  CLI::Option* tree_counts_opt =
      sweep->add_option("--tree-counts", tree_counts, "comma-separated forest sizes")
          ->delimiter(',');

  CLI::App* visualize =
      app.add_subcommand("visualize", "SOM and MDS figures for the full dataset");
  CommonFlags visualize_flags;
  add_common(visualize, visualize_flags);

  CLI::App* train = app.add_subcommand("train", "train a model and save it as JSON");
  CommonFlags train_flags;
  add_common(train, train_flags);
  std::string method = "rfsom";
  train->add_option("--method", method, "model kind: rf, som, or rfsom");
  std::string model_out;
  train->add_option("--model-out", model_out, "model file path (default <out>/model.json)");

  CLI::App* predict = app.add_subcommand("predict", "classify rows with a saved model");
  CommonFlags predict_flags;
  add_common(predict, predict_flags);
  std::string model_path;
  predict->add_option("--model", model_path, "model JSON file");
  std::string predictions_out;
  predict->add_option("--predictions", predictions_out,
                      "predictions CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (experiment->parsed()) return cmd_experiment(experiment_flags);
    if (sweep->parsed())
      return cmd_sweep(sweep_flags, tree_counts, tree_counts_opt->count() > 0);
    if (visualize->parsed()) return cmd_visualize(visualize_flags);
    if (train->parsed()) return cmd_train(train_flags, method, model_out);
    if (predict->parsed()) return cmd_predict(predict_flags, model_path, predictions_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
