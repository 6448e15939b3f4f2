#include "rfsom/rf_som.hpp"

#include <utility>
#include <vector>

namespace rfsom {

int find_bmu_rf(const RandomForest& forest, const SomGrid& grid,
                std::span<const double> x) {
  require(x.size() == static_cast<std::size_t>(forest.attribute_count()),
          "find_bmu_rf: dimension mismatch");
  require(grid.weights.cols() == x.size(), "find_bmu_rf: grid dimension mismatch");
  const std::size_t count = grid.weights.rows();

  // Shared-leaf tallies for the sample against every neuron; argmax of
  // matches is argmin of Dis = 1 - matches/T. Tree-major order keeps one
  // tree hot while it routes all L+1 vectors.
  std::vector<int> matches(count, 0);
  for (const DecisionTree& tree : forest.trees()) {
    const int sample_leaf = tree.leaf_of(x);
    for (std::size_t l = 0; l < count; ++l) {
      if (tree.leaf_of(grid.weights.row(l)) == sample_leaf) ++matches[l];
    }
  }
  forest.add_traversals((count + 1) * forest.tree_count());

  std::size_t best = 0;
  for (std::size_t l = 1; l < count; ++l) {
    if (matches[l] > matches[best]) best = l;
  }
  return static_cast<int>(best);
}

BmuStrategy rf_bmu(const RandomForest& forest) {
  return [&forest](const SomGrid& grid, std::span<const double> x) {
    return find_bmu_rf(forest, grid, x);
  };
}

SomGrid train_rfsom(SomGrid grid, const RandomForest& forest, const Dataset& data,
                    const SomHyperParams& params, std::uint64_t seed) {
  return train_with_strategy(std::move(grid), data, params, seed, rf_bmu(forest));
}

RfSomModel build_rfsom_classifier(const Dataset& data, const RfSomBuildConfig& config) {
  require(config.grid_rows >= 1 && config.grid_cols >= 1,
          "build_rfsom_classifier: grid shape required");
  NormalizationParams normalization;
  Dataset working = data;
  if (config.normalize) {
    normalization = fit_minmax(data);
    working = apply_normalization(data, normalization);
  }
  const int m = config.attributes_per_split > 0
                    ? config.attributes_per_split
                    : default_attributes_per_split(
                          static_cast<int>(data.attribute_count()));
  RandomForest forest =
      train_forest(working, config.tree_count, m, config.forest_seed);
  SomGrid grid =
      init_grid(config.grid_rows, config.grid_cols, working, config.init_seed);
  grid = train_rfsom(std::move(grid), forest, working, config.som, config.train_seed);
  const double alpha =
      config.label_alpha > 0.0 ? config.label_alpha : config.som.alpha0;
  LabeledSom labeled = label_som(std::move(grid), working, rf_bmu(forest), alpha);
  return RfSomModel{std::move(forest), std::move(labeled), std::move(normalization)};
}

int classify(const RfSomModel& model, std::span<const double> raw_x) {
  const std::vector<double> x = normalize_vector(raw_x, model.normalization);
  return classify(model.labeled, x, rf_bmu(model.forest));
}

}  // namespace rfsom
