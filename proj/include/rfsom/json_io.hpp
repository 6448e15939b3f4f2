#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rfsom/dataset.hpp"
#include "rfsom/forest.hpp"
#include "rfsom/rf_som.hpp"
#include "rfsom/som.hpp"

namespace rfsom {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const Json& j);

Json normalization_to_json(const NormalizationParams& params);
NormalizationParams normalization_from_json(const Json& j);

Json forest_to_json(const RandomForest& forest);
RandomForest forest_from_json(const Json& j);

Json som_params_to_json(const SomHyperParams& params);
SomHyperParams som_params_from_json(const Json& j);

/// Labeled map plus the schedule and seeds it was trained with.
struct SomModelData {
  LabeledSom labeled;
  SomHyperParams params;
  std::uint64_t init_seed = 0;
  std::uint64_t train_seed = 0;
  double label_alpha = 0.0;
};

Json som_model_to_json(const SomModelData& model);
SomModelData som_model_from_json(const Json& j);

enum class ModelKind { Rf, Som, RfSom };

std::string model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

/// Serializable classifier bundle for the train/predict commands. The
/// forest is present for Rf and RfSom, the map for Som and RfSom.
struct ModelBundle {
  ModelKind kind = ModelKind::RfSom;
  NormalizationParams normalization;
  RandomForest forest;
  SomModelData som;
};

Json model_bundle_to_json(const ModelBundle& bundle);
ModelBundle model_bundle_from_json(const Json& j);

/// Classifies a raw attribute vector with whichever method the bundle holds.
int predict_with(const ModelBundle& bundle, std::span<const double> raw_x);

void save_json(const Json& j, const std::filesystem::path& path);
Json load_json(const std::filesystem::path& path);

std::string proximity_to_csv(const ProximityMatrix& prox);
std::string embedding_to_csv(const Matrix& coordinates, const std::vector<int>& labels);

}  // namespace rfsom
