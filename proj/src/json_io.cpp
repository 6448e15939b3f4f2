#include "rfsom/json_io.hpp"

#include <fstream>
#include <stdexcept>
#include <utility>

namespace rfsom {

namespace {

void check_schema(const Json& j, const char* expected_type) {
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
    throw std::runtime_error("model file: missing schema_version");
  }
  const int version = j["schema_version"].get<int>();
  if (version != kSchemaVersion) {
    throw std::runtime_error("model file: schema_version " + std::to_string(version) +
                             " not supported (expected " +
                             std::to_string(kSchemaVersion) + ")");
  }
  if (j.value("type", std::string{}) != expected_type) {
    throw std::runtime_error(std::string("model file: expected type '") + expected_type +
                             "'");
  }
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::runtime_error("matrix: expected row array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw std::runtime_error("matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

Json node_to_json(const std::vector<TreeNode>& nodes, int index) {
  const TreeNode& node = nodes[static_cast<std::size_t>(index)];
  Json j;
  if (node.is_leaf()) {
    j["class"] = node.class_label;
    j["leaf_id"] = node.leaf_id;
  } else {
    j["attribute"] = node.attribute;
    j["threshold"] = node.threshold;
    j["left"] = node_to_json(nodes, node.left);
    j["right"] = node_to_json(nodes, node.right);
  }
  return j;
}

int node_from_json(const Json& j, std::vector<TreeNode>& nodes) {
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (j.contains("attribute")) {
    const int attribute = j.at("attribute").get<int>();
    const double threshold = j.at("threshold").get<double>();
    const int left = node_from_json(j.at("left"), nodes);
    const int right = node_from_json(j.at("right"), nodes);
    nodes[static_cast<std::size_t>(index)] =
        TreeNode{attribute, threshold, left, right, -1, -1};
  } else {
    TreeNode leaf;
    leaf.class_label = j.at("class").get<int>();
    leaf.leaf_id = j.at("leaf_id").get<int>();
    nodes[static_cast<std::size_t>(index)] = leaf;
  }
  return index;
}

}  // namespace

Json dataset_to_json(const Dataset& data) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "dataset";
  j["samples"] = data.size();
  j["attributes"] = data.attribute_count();
  j["class_count"] = data.class_count;
  j["attribute_names"] = data.attribute_names;
  j["rows"] = matrix_to_json(data.attributes);
  j["labels"] = data.labels;
  return j;
}

Dataset dataset_from_json(const Json& j) {
  check_schema(j, "dataset");
  Dataset data;
  data.attributes = matrix_from_json(j.at("rows"));
  data.labels = j.at("labels").get<std::vector<int>>();
  data.attribute_names = j.at("attribute_names").get<std::vector<std::string>>();
  data.class_count = j.at("class_count").get<int>();
  data.validate();
  return data;
}

Json normalization_to_json(const NormalizationParams& params) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "normalization";
  j["method"] = params.method == NormalizationMethod::MinMax ? "minmax" : "none";
  j["min"] = params.min;
  j["max"] = params.max;
  return j;
}

NormalizationParams normalization_from_json(const Json& j) {
  check_schema(j, "normalization");
  NormalizationParams params;
  const std::string method = j.at("method").get<std::string>();
  if (method == "minmax") {
    params.method = NormalizationMethod::MinMax;
  } else if (method == "none") {
    params.method = NormalizationMethod::None;
  } else {
    throw std::runtime_error("normalization: unknown method '" + method + "'");
  }
  params.min = j.at("min").get<std::vector<double>>();
  params.max = j.at("max").get<std::vector<double>>();
  if (params.min.size() != params.max.size()) {
    throw std::runtime_error("normalization: min/max length mismatch");
  }
  return params;
}

Json forest_to_json(const RandomForest& forest) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "random_forest";
  j["tree_count"] = forest.tree_count();
  j["m"] = forest.attributes_per_split();
  j["class_count"] = forest.class_count();
  j["attribute_count"] = forest.attribute_count();
  j["seed"] = forest.seed();
  Json trees = Json::array();
  for (const DecisionTree& tree : forest.trees()) {
    trees.push_back(node_to_json(tree.nodes(), 0));
  }
  j["trees"] = std::move(trees);
  return j;
}

RandomForest forest_from_json(const Json& j) {
  check_schema(j, "random_forest");
  std::vector<DecisionTree> trees;
  for (const Json& tree : j.at("trees")) {
    std::vector<TreeNode> nodes;
    node_from_json(tree, nodes);
    trees.push_back(DecisionTree::from_nodes(std::move(nodes)));
  }
  return RandomForest(std::move(trees), j.at("m").get<int>(),
                      j.at("class_count").get<int>(),
                      j.at("attribute_count").get<int>(),
                      j.at("seed").get<std::uint64_t>());
}

Json som_params_to_json(const SomHyperParams& params) {
  Json j;
  j["epoch_limit"] = params.epoch_limit;
  j["eta0"] = params.eta0;
  j["lambda_eta"] = params.lambda_eta;
  j["alpha0"] = params.alpha0;
  j["lambda_alpha"] = params.lambda_alpha;
  return j;
}

SomHyperParams som_params_from_json(const Json& j) {
  SomHyperParams params;
  params.epoch_limit = j.at("epoch_limit").get<int>();
  params.eta0 = j.at("eta0").get<double>();
  params.lambda_eta = j.at("lambda_eta").get<double>();
  params.alpha0 = j.at("alpha0").get<double>();
  params.lambda_alpha = j.at("lambda_alpha").get<double>();
  return params;
}

Json som_model_to_json(const SomModelData& model) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "som_model";
  j["grid"] = {{"rows", model.labeled.grid.rows},
               {"cols", model.labeled.grid.cols},
               {"weights", matrix_to_json(model.labeled.grid.weights)}};
  j["neuron_labels"] = model.labeled.neuron_labels;
  j["class_mass"] = matrix_to_json(model.labeled.class_mass);
  j["params"] = som_params_to_json(model.params);
  j["init_seed"] = model.init_seed;
  j["train_seed"] = model.train_seed;
  j["label_alpha"] = model.label_alpha;
  return j;
}

SomModelData som_model_from_json(const Json& j) {
  check_schema(j, "som_model");
  SomModelData model;
  const Json& grid = j.at("grid");
  model.labeled.grid.rows = grid.at("rows").get<int>();
  model.labeled.grid.cols = grid.at("cols").get<int>();
  model.labeled.grid.weights = matrix_from_json(grid.at("weights"));
  model.labeled.neuron_labels = j.at("neuron_labels").get<std::vector<int>>();
  model.labeled.class_mass = matrix_from_json(j.at("class_mass"));
  model.params = som_params_from_json(j.at("params"));
  model.init_seed = j.at("init_seed").get<std::uint64_t>();
  model.train_seed = j.at("train_seed").get<std::uint64_t>();
  model.label_alpha = j.at("label_alpha").get<double>();
  return model;
}

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Rf: return "rf";
    case ModelKind::Som: return "som";
    case ModelKind::RfSom: return "rfsom";
  }
  throw std::logic_error("model_kind_name: unknown kind");
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "rf") return ModelKind::Rf;
  if (name == "som") return ModelKind::Som;
  if (name == "rfsom") return ModelKind::RfSom;
  throw std::runtime_error("unknown model kind '" + name + "'");
}

Json model_bundle_to_json(const ModelBundle& bundle) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "model_bundle";
  j["kind"] = model_kind_name(bundle.kind);
  j["normalization"] = normalization_to_json(bundle.normalization);
  if (bundle.kind != ModelKind::Som) j["forest"] = forest_to_json(bundle.forest);
  if (bundle.kind != ModelKind::Rf) j["som"] = som_model_to_json(bundle.som);
  return j;
}

ModelBundle model_bundle_from_json(const Json& j) {
  check_schema(j, "model_bundle");
  ModelBundle bundle;
  bundle.kind = model_kind_from_name(j.at("kind").get<std::string>());
  bundle.normalization = normalization_from_json(j.at("normalization"));
  if (bundle.kind != ModelKind::Som) bundle.forest = forest_from_json(j.at("forest"));
  if (bundle.kind != ModelKind::Rf) bundle.som = som_model_from_json(j.at("som"));
  return bundle;
}

int predict_with(const ModelBundle& bundle, std::span<const double> raw_x) {
  const std::vector<double> x = normalize_vector(raw_x, bundle.normalization);
  switch (bundle.kind) {
    case ModelKind::Rf:
      return bundle.forest.predict(x);
    case ModelKind::Som:
      return classify(bundle.som.labeled, x, euclidean_bmu());
    case ModelKind::RfSom:
      return classify(bundle.som.labeled, x, rf_bmu(bundle.forest));
  }
  throw std::logic_error("predict_with: unknown kind");
}

void save_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string proximity_to_csv(const ProximityMatrix& prox) {
  std::string out;
  for (std::size_t i = 0; i < prox.size(); ++i) {
    for (std::size_t j = 0; j < prox.values.cols(); ++j) {
      if (j) out += ',';
      out += Json(prox.values(i, j)).dump();
    }
    out += '\n';
  }
  return out;
}

std::string embedding_to_csv(const Matrix& coordinates, const std::vector<int>& labels) {
  require(coordinates.rows() == labels.size(), "embedding_to_csv: label count mismatch");
  std::string out = "x,y,class\n";
  for (std::size_t i = 0; i < coordinates.rows(); ++i) {
    out += Json(coordinates(i, 0)).dump();
    out += ',';
    out += Json(coordinates(i, 1)).dump();
    out += ',';
    out += std::to_string(labels[i]);
    out += '\n';
  }
  return out;
}

}  // namespace rfsom
