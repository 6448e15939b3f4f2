#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <string>
#include <vector>

#include "rfsom/dataset.hpp"
#include "rfsom/experiment.hpp"
#include "rfsom/forest.hpp"
#include "rfsom/json_io.hpp"
#include "rfsom/mds.hpp"
#include "rfsom/rf_som.hpp"
#include "rfsom/rng.hpp"
#include "rfsom/som.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using namespace rfsom;

// Seed stream tags shared with the CLI and experiment runner.
constexpr std::uint64_t kForestStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kShuffleStream = 3;

std::vector<std::vector<double>> matrix_to_lists(const Matrix& m) {
  std::vector<std::vector<double>> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out[i].assign(m.row(i).begin(), m.row(i).end());
  }
  return out;
}

Matrix lists_to_matrix(const std::vector<std::vector<double>>& rows) {
  require(!rows.empty(), "expected at least one row");
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == m.cols(), "ragged rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

int resolve_m(const Dataset& data, int m) {
  return m > 0 ? m
               : default_attributes_per_split(static_cast<int>(data.attribute_count()));
}

ExperimentConfig make_config(const std::string& data_path, const std::string& name,
                             const std::string& label_col, bool header, int grid_rows,
                             int grid_cols, int trees, int m, int folds,
                             const std::vector<std::uint64_t>& seeds, int epochs,
                             bool normalize, const std::string& out_dir) {
  ExperimentConfig config;
  config.data_path = data_path;
  config.dataset_name = name;
  config.label_column = LabelColumn::parse(label_col);
  config.has_header = header;
  config.grid_rows = grid_rows;
  config.grid_cols = grid_cols;
  config.tree_count = trees;
  config.attributes_per_split = m;
  config.fold_count = folds;
  config.seeds = seeds;
  config.som.epoch_limit = epochs;
  config.normalize = normalize;
  config.out_dir = out_dir;
  return config;
}

py::object json_to_py(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

ModelBundle train_bundle(const Dataset& data, const std::string& method, int grid_rows,
                         int grid_cols, int trees, int m, int epochs, bool normalize,
                         std::uint64_t seed) {
  ModelBundle bundle;
  bundle.kind = model_kind_from_name(method);
  Dataset working = data;
  if (normalize) {
    bundle.normalization = fit_minmax(data);
    working = apply_normalization(data, bundle.normalization);
  }
  if (bundle.kind != ModelKind::Som) {
    bundle.forest = train_forest(working, trees, resolve_m(data, m),
                                 derive_seed(seed, kForestStream));
  }
  if (bundle.kind != ModelKind::Rf) {
    require(grid_rows >= 1 && grid_cols >= 1, "train: grid shape required");
    SomHyperParams hp;
    hp.epoch_limit = epochs;
    bundle.som.params = hp;
    bundle.som.init_seed = derive_seed(seed, kInitStream);
    bundle.som.train_seed = derive_seed(seed, kShuffleStream);
    bundle.som.label_alpha = hp.alpha0;
    SomGrid grid = init_grid(grid_rows, grid_cols, working, bundle.som.init_seed);
    if (bundle.kind == ModelKind::Som) {
      grid = train_som(std::move(grid), working, hp, bundle.som.train_seed);
      bundle.som.labeled =
          label_som(std::move(grid), working, euclidean_bmu(), hp.alpha0);
    } else {
      grid = train_rfsom(std::move(grid), bundle.forest, working, hp,
                         bundle.som.train_seed);
      bundle.som.labeled =
          label_som(std::move(grid), working, rf_bmu(bundle.forest), hp.alpha0);
    }
  }
  return bundle;
}

}  // namespace

PYBIND11_MODULE(_rfsom, mod) {
  mod.doc() = "Random forest / self-organising map classification and visualization";

  py::class_<Dataset>(mod, "Dataset")
      .def_property_readonly("attributes",
                             [](const Dataset& d) { return matrix_to_lists(d.attributes); })
      .def_readonly("labels", &Dataset::labels)
      .def_readonly("attribute_names", &Dataset::attribute_names)
      .def_readonly("class_count", &Dataset::class_count)
      .def_property_readonly("attribute_count",
                             [](const Dataset& d) { return d.attribute_count(); })
      .def("__len__", [](const Dataset& d) { return d.size(); })
      .def("__repr__", [](const Dataset& d) {
        return "Dataset(" + std::to_string(d.size()) + " samples, " +
               std::to_string(d.attribute_count()) + " attributes, " +
               std::to_string(d.class_count) + " classes)";
      });

  mod.def(
      "load_csv",
      [](const std::string& path, const std::string& label_col, bool header) {
        return load_csv(path, LabelColumn::parse(label_col), header);
      },
      "path"_a, "label_col"_a = "last", "header"_a = true,
      "Load a CSV dataset; labels are remapped to 0..C-1 by first appearance.");

  py::class_<RandomForest>(mod, "RandomForest")
      .def("predict",
           [](const RandomForest& f, const std::vector<double>& x) { return f.predict(x); },
           "x"_a)
      .def("leaf_ids",
           [](const RandomForest& f, const std::vector<double>& x) { return f.leaf_ids(x); },
           "x"_a)
      .def_property_readonly("tree_count", &RandomForest::tree_count)
      .def_property_readonly("attributes_per_split", &RandomForest::attributes_per_split)
      .def_property_readonly("class_count", &RandomForest::class_count);

  mod.def(
      "train_forest",
      [](const Dataset& data, int trees, int m, std::uint64_t seed) {
        return train_forest(data, trees, resolve_m(data, m), seed);
      },
      "data"_a, "trees"_a = 100, "m"_a = 0, "seed"_a = 1,
      "Train a random forest; m=0 uses max(1, floor(sqrt(attribute_count))).");

  mod.def(
      "proximity",
      [](const RandomForest& forest, const std::vector<std::vector<double>>& rows) {
        return matrix_to_lists(proximity_matrix(forest, lists_to_matrix(rows)).values);
      },
      "forest"_a, "rows"_a,
      "Pairwise fraction of trees in which two rows share a terminal leaf.");

  mod.def(
      "classical_mds",
      [](const std::vector<std::vector<double>>& distances) {
        Embedding2D emb = classical_mds(DistanceMatrix{lists_to_matrix(distances)});
        py::dict out;
        out["coordinates"] = matrix_to_lists(emb.coordinates);
        out["eigenvalues"] = emb.eigenvalues_used;
        out["negative_mass_fraction"] = emb.negative_mass_fraction;
        return out;
      },
      "distances"_a, "2D Torgerson scaling of a symmetric distance matrix.");

  py::class_<ModelBundle>(mod, "Model")
      .def_property_readonly("kind",
                             [](const ModelBundle& b) { return model_kind_name(b.kind); })
      .def("predict",
           [](const ModelBundle& b, const std::vector<double>& raw_x) {
             return predict_with(b, raw_x);
           },
           "x"_a, "Classify a raw (un-normalized) attribute vector.")
      .def("save",
           [](const ModelBundle& b, const std::filesystem::path& path) {
             save_json(model_bundle_to_json(b), path);
           },
           "path"_a)
      .def_static("load", [](const std::filesystem::path& path) {
        return model_bundle_from_json(load_json(path));
      });

  mod.def("train", &train_bundle, "data"_a, "method"_a = "rfsom", "grid_rows"_a = 0,
          "grid_cols"_a = 0, "trees"_a = 100, "m"_a = 0, "epochs"_a = 200,
          "normalize"_a = true, "seed"_a = 1,
          "Train an rf, som, or rfsom classifier on the full dataset.");

  mod.def(
      "experiment",
      [](const std::string& data_path, int grid_rows, int grid_cols,
         const std::string& name, const std::string& label_col, bool header, int trees,
         int m, int folds, const std::vector<std::uint64_t>& seeds, int epochs,
         bool normalize) {
        const ExperimentConfig config =
            make_config(data_path, name, label_col, header, grid_rows, grid_cols, trees,
                        m, folds, seeds, epochs, normalize, "out");
        return json_to_py(experiment_report_json(run_experiment(config)));
      },
      "data_path"_a, "grid_rows"_a, "grid_cols"_a, "name"_a = "", "label_col"_a = "last",
      "header"_a = true, "trees"_a = 100, "m"_a = 0, "folds"_a = 10,
      "seeds"_a = std::vector<std::uint64_t>{1}, "epochs"_a = 200, "normalize"_a = true,
      "Cross-validated accuracy comparison of RF, SOM and RF-SOM as a dict.");

  mod.def(
      "sweep",
      [](const std::string& data_path, int grid_rows, int grid_cols,
         const std::vector<int>& tree_counts, const std::string& name,
         const std::string& label_col, bool header, int m, int folds,
         const std::vector<std::uint64_t>& seeds, int epochs, bool normalize) {
        const ExperimentConfig config =
            make_config(data_path, name, label_col, header, grid_rows, grid_cols, 100, m,
                        folds, seeds, epochs, normalize, "out");
        return json_to_py(sweep_report_json(run_tree_sweep(config, tree_counts)));
      },
      "data_path"_a, "grid_rows"_a, "grid_cols"_a,
      "tree_counts"_a = std::vector<int>{10, 20, 50, 100, 200, 500}, "name"_a = "",
      "label_col"_a = "last", "header"_a = true, "m"_a = 0, "folds"_a = 10,
      "seeds"_a = std::vector<std::uint64_t>{1}, "epochs"_a = 200, "normalize"_a = true,
      "Accuracy vs forest size for RF and RF-SOM as a dict.");

  mod.def(
      "visualize",
      [](const std::string& data_path, int grid_rows, int grid_cols,
         const std::string& out_dir, const std::string& name,
         const std::string& label_col, bool header, int trees, int m,
         std::uint64_t seed, int epochs, bool normalize) {
        const ExperimentConfig config = make_config(
            data_path, name, label_col, header, grid_rows, grid_cols, trees, m, 10,
            {seed}, epochs, normalize, out_dir);
        std::vector<std::string> files;
        for (const auto& f : run_visualize(config).files) files.push_back(f.string());
        return files;
      },
      "data_path"_a, "grid_rows"_a, "grid_cols"_a, "out_dir"_a = "out", "name"_a = "",
      "label_col"_a = "last", "header"_a = true, "trees"_a = 100, "m"_a = 0,
      "seed"_a = 1, "epochs"_a = 200, "normalize"_a = true,
      "Emit SOM coxcomb grids, MDS scatter plots and proximity CSVs; returns paths.");
}
