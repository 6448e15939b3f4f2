#pragma once

#include <cstdint>
#include <span>

#include "rfsom/dataset.hpp"
#include "rfsom/forest.hpp"
#include "rfsom/som.hpp"

namespace rfsom {

/// BMU by random-forest dissimilarity: routes the sample and all L neuron
/// weight vectors through every tree (exactly (L+1)*T traversals) and
/// returns the neuron sharing the most leaves with the sample, i.e. the
/// argmin of Dis = 1 - Prox over the neurons. Ties go to the lowest
/// linear index. Only the sample's row of the dissimilarity matrix is
/// materialized, O(L) storage.
int find_bmu_rf(const RandomForest& forest, const SomGrid& grid,
                std::span<const double> x);

/// The forest-dissimilarity strategy bound to a trained forest. The
/// forest must outlive the returned object.
BmuStrategy rf_bmu(const RandomForest& forest);

/// Same epoch loop and schedules as Euclidean training, with the BMU
/// search replaced by forest dissimilarity; the weight update itself
/// stays in attribute space. The forest is not retrained.
SomGrid train_rfsom(SomGrid grid, const RandomForest& forest, const Dataset& data,
                    const SomHyperParams& params, std::uint64_t seed);

/// Forest dissimilarity SOM classifier bundle: pre-trained forest, the
/// labeled map trained with it, and the normalization both were fitted
/// under.
struct RfSomModel {
  RandomForest forest;
  LabeledSom labeled;
  NormalizationParams normalization;
};

struct RfSomBuildConfig {
  int grid_rows = 0;
  int grid_cols = 0;
  int tree_count = 100;
  int attributes_per_split = 0;  // 0: max(1, floor(sqrt(M)))
  SomHyperParams som;
  bool normalize = true;
  double label_alpha = 0.0;  // 0: som.alpha0
  std::uint64_t forest_seed = 1;
  std::uint64_t init_seed = 1;
  std::uint64_t train_seed = 1;
};

/// Trains the forest, trains the map with forest-dissimilarity BMUs,
/// labels it, and packages the result. `data` is raw (un-normalized);
/// normalization is fitted here and stored in the model.
RfSomModel build_rfsom_classifier(const Dataset& data, const RfSomBuildConfig& config);

/// Classifies a raw attribute vector: applies the stored normalization,
/// finds the forest-dissimilarity BMU, returns its label.
int classify(const RfSomModel& model, std::span<const double> raw_x);

}  // namespace rfsom
