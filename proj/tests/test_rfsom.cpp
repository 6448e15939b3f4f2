#include <doctest.h>

#include <cmath>
#include <vector>

#include "alloc_meter.hpp"
#include "rfsom/rf_som.hpp"
#include "rfsom/rng.hpp"
#include "test_helpers.hpp"

using namespace rfsom;
using rfsom::testing::random_dataset;

namespace {

SomGrid random_grid(Rng& rng, int P, int Q, std::size_t m) {
  SomGrid g;
  g.rows = P;
  g.cols = Q;
  g.weights = Matrix(static_cast<std::size_t>(P * Q), m);
  for (std::size_t l = 0; l < g.weights.rows(); ++l)
    for (std::size_t j = 0; j < m; ++j) g.weights(l, j) = rng.uniform();
  return g;
}

/// Brute-force reference: materialize the full (L+1)x(L+1) dissimilarity
/// matrix of H = W u {x} and take the argmin over the sample's row,
/// lowest index first.
int brute_force_bmu(const RandomForest& forest, const SomGrid& grid,
                    std::span<const double> x) {
  const std::size_t L = grid.weights.rows();
  Matrix h(L + 1, grid.weights.cols());
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t j = 0; j < grid.weights.cols(); ++j) h(l, j) = grid.weights(l, j);
  for (std::size_t j = 0; j < grid.weights.cols(); ++j) h(L, j) = x[j];
  auto prox = proximity_matrix(forest, h);
  int best = 0;
  double best_dis = 1.0 - prox.values(L, 0);
  for (std::size_t l = 1; l < L; ++l) {
    double dis = 1.0 - prox.values(L, l);
    if (dis < best_dis) {
      best_dis = dis;
      best = static_cast<int>(l);
    }
  }
  return best;
}

}  // namespace

TEST_SUITE_BEGIN("rfsom");

TEST_CASE("find_bmu_rf: sample equal to a neuron's weights finds it") {
  Rng rng(101);
  Dataset data = random_dataset(rng, 25, 3, 2);
  RandomForest forest = train_forest(data, 9, 1, 7);
  SomGrid g = random_grid(rng, 3, 3, 3);

  for (std::size_t l : {std::size_t{0}, std::size_t{4}, std::size_t{8}}) {
    auto w = g.weights.row(l);
    std::vector<double> x(w.begin(), w.end());
    int bmu = find_bmu_rf(forest, g, x);
    // Dis(x, neuron l) = 0; the result must be some zero-dissimilarity
    // neuron at or before l.
    auto dis = dissimilarity_row(forest, x, g.weights);
    CHECK(dis[l] == 0.0);
    CHECK(dis[static_cast<std::size_t>(bmu)] == 0.0);
    CHECK(bmu <= static_cast<int>(l));
  }
}

TEST_CASE("find_bmu_rf: all-ones dissimilarity row gives index 0") {
  // One stump on attribute 0 at 0.5: neurons on one side, sample on the
  // other -> different leaves in every tree.
  std::vector<TreeNode> nodes(3);
  nodes[0] = TreeNode{0, 0.5, 1, 2, -1, -1};
  nodes[1] = TreeNode{-1, 0, -1, -1, 0, 0};
  nodes[2] = TreeNode{-1, 0, -1, -1, 1, 1};
  RandomForest forest({DecisionTree::from_nodes(std::move(nodes))}, 1, 2, 2, 0);

  SomGrid g;
  g.rows = 2;
  g.cols = 2;
  g.weights = Matrix(4, 2, 0.2);  // all four neurons route left
  CHECK(find_bmu_rf(forest, g, std::vector<double>{0.9, 0.9}) == 0);
}

TEST_CASE("find_bmu_rf equals the materialized-matrix oracle") {
  Rng rng(103);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 5 + rng.below(26);  // N <= 30
    std::size_t m = 2 + rng.below(3);
    int classes = 2 + static_cast<int>(rng.below(2));
    Dataset data = random_dataset(rng, n, m, classes);
    int trees = 1 + static_cast<int>(rng.below(20));  // T <= 20
    RandomForest forest =
        train_forest(data, trees, static_cast<int>(1 + rng.below(m)), rng.next());
    int P = 1 + static_cast<int>(rng.below(4));
    int Q = 1 + static_cast<int>(rng.below(4));  // L <= 16
    SomGrid g = random_grid(rng, P, Q, m);
    std::vector<double> x(m);
    for (auto& v : x) v = rng.uniform();

    CHECK(find_bmu_rf(forest, g, x) == brute_force_bmu(forest, g, x));
  }
}

TEST_CASE("cost contract: exactly (L+1)*T traversals per BMU search") {
  Rng rng(107);
  Dataset data = random_dataset(rng, 30, 4, 3);
  RandomForest forest = train_forest(data, 11, 2, 3);
  SomGrid g = random_grid(rng, 4, 3, 4);  // L = 12

  std::vector<double> x = {0.1, 0.6, 0.3, 0.9};
  forest.reset_traversal_count();
  (void)find_bmu_rf(forest, g, x);
  CHECK(forest.traversal_count() == (12 + 1) * 11);

  forest.reset_traversal_count();
  for (int i = 0; i < 5; ++i) (void)find_bmu_rf(forest, g, x);
  CHECK(forest.traversal_count() == 5 * (12 + 1) * 11);
}

TEST_CASE("memory contract: BMU search allocation is independent of N") {
  // The search must materialize only the sample's dissimilarity row (O(L)),
  // never anything sized by the training set.
  Rng rng(109);
  Dataset small = random_dataset(rng, 40, 3, 2);
  Dataset large = random_dataset(rng, 4000, 3, 2);
  RandomForest f_small = train_forest(small, 5, 1, 13);
  RandomForest f_large = train_forest(large, 5, 1, 13);
  SomGrid g = random_grid(rng, 4, 4, 3);
  std::vector<double> x = {0.5, 0.5, 0.5};

  // Warm up to exclude one-time allocations.
  (void)find_bmu_rf(f_small, g, x);
  (void)find_bmu_rf(f_large, g, x);

  auto measure = [&](const RandomForest& f) {
    std::size_t before = rfsom::testing::allocated_bytes();
    (void)find_bmu_rf(f, g, x);
    return rfsom::testing::allocated_bytes() - before;
  };
  std::size_t bytes_small = measure(f_small);
  std::size_t bytes_large = measure(f_large);
  CHECK(bytes_small == bytes_large);
  // Far below anything O(N^2) (4000^2 doubles = 128 MB) or even O(N).
  CHECK(bytes_large < 16 * 1024);
}

TEST_CASE("train_rfsom: zero epochs is the identity; determinism holds") {
  Rng rng(113);
  Dataset data = random_dataset(rng, 20, 3, 2);
  RandomForest forest = train_forest(data, 5, 1, 1);
  SomGrid g = init_grid(2, 3, data, 77);

  SomHyperParams none;
  none.epoch_limit = 0;
  CHECK(train_rfsom(g, forest, data, none, 1).weights == g.weights);

  SomHyperParams p;
  p.epoch_limit = 8;
  SomGrid a = train_rfsom(g, forest, data, p, 5);
  SomGrid b = train_rfsom(g, forest, data, p, 5);
  CHECK(a.weights == b.weights);
}

TEST_CASE("rf and euclidean maps share bit-identical initial weights") {
  Rng rng(127);
  Dataset data = random_dataset(rng, 20, 3, 2);
  RandomForest forest = train_forest(data, 5, 1, 1);
  SomGrid init_a = init_grid(3, 3, data, 2024);
  SomGrid init_b = init_grid(3, 3, data, 2024);
  CHECK(init_a.weights == init_b.weights);

  SomHyperParams p;
  p.epoch_limit = 6;
  SomGrid som = train_som(init_a, data, p, 3);
  SomGrid rf = train_rfsom(init_b, forest, data, p, 3);
  // Same start, generally different ends.
  CHECK(som.weights.rows() == rf.weights.rows());
}

TEST_CASE("rf_bmu strategy matches find_bmu_rf") {
  Rng rng(131);
  Dataset data = random_dataset(rng, 25, 3, 2);
  RandomForest forest = train_forest(data, 7, 1, 21);
  SomGrid g = random_grid(rng, 3, 2, 3);
  auto strategy = rf_bmu(forest);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x = {rng.uniform(), rng.uniform(), rng.uniform()};
    CHECK(strategy(g, x) == find_bmu_rf(forest, g, x));
  }
}

TEST_CASE("build_rfsom_classifier composes the manual pipeline exactly") {
  // Raw scale deliberately not [0,1] so the stored normalization matters.
  Dataset data;
  data.attributes = Matrix(20, 2);
  data.labels.resize(20);
  Rng rng(137);
  for (std::size_t i = 0; i < 20; ++i) {
    bool hi = i >= 10;
    data.attributes(i, 0) = (hi ? 80.0 : 20.0) + rng.uniform(-5, 5);
    data.attributes(i, 1) = (hi ? 300.0 : 100.0) + rng.uniform(-20, 20);
    data.labels[i] = hi ? 1 : 0;
  }
  data.class_count = 2;
  data.attribute_names = {"a", "b"};

  RfSomBuildConfig config;
  config.grid_rows = 2;
  config.grid_cols = 2;
  config.tree_count = 15;
  config.som.epoch_limit = 6;
  config.forest_seed = 1;
  config.init_seed = 2;
  config.train_seed = 3;

  RfSomModel model = build_rfsom_classifier(data, config);
  CHECK(model.normalization.method == NormalizationMethod::MinMax);
  CHECK(model.labeled.grid.weights.rows() == 4);

  // The bundle must equal the hand-assembled pipeline bit for bit.
  NormalizationParams norm = fit_minmax(data);
  Dataset working = apply_normalization(data, norm);
  RandomForest forest = train_forest(working, 15, 1, 1);
  SomGrid grid = init_grid(2, 2, working, 2);
  grid = train_rfsom(std::move(grid), forest, working, config.som, 3);
  LabeledSom labeled = label_som(std::move(grid), working, rf_bmu(forest),
                                 config.som.alpha0);
  CHECK(model.forest == forest);
  CHECK(model.normalization.min == norm.min);
  CHECK(model.normalization.max == norm.max);
  CHECK(model.labeled == labeled);

  // classify() applies the stored normalization before the BMU search.
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::vector<double> x = normalize_vector(data.row(i), norm);
    const int expected = labeled.neuron_labels[static_cast<std::size_t>(
        find_bmu_rf(forest, labeled.grid, x))];
    CHECK(classify(model, data.row(i)) == expected);
  }

  RfSomModel again = build_rfsom_classifier(data, config);
  CHECK(again.labeled == model.labeled);
}

TEST_CASE("build_rfsom_classifier validates the grid shape") {
  Rng rng(139);
  Dataset data = random_dataset(rng, 10, 2, 2);
  RfSomBuildConfig config;  // grid left at 0x0
  CHECK_THROWS(build_rfsom_classifier(data, config));
}

TEST_SUITE_END();
