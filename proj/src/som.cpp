#include "rfsom/som.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rfsom/rng.hpp"

namespace rfsom {

SomGrid init_grid(int rows, int cols, const Dataset& data, std::uint64_t seed) {
  require(rows >= 1 && cols >= 1, "init_grid: grid dimensions must be positive");
  require(data.size() >= 1, "init_grid: empty dataset");
  const std::size_t m = data.attribute_count();
  std::vector<double> lo(m, data.attributes(0, 0));
  std::vector<double> hi(m, data.attributes(0, 0));
  for (std::size_t j = 0; j < m; ++j) {
    lo[j] = hi[j] = data.attributes(0, j);
    for (std::size_t i = 1; i < data.size(); ++i) {
      lo[j] = std::min(lo[j], data.attributes(i, j));
      hi[j] = std::max(hi[j], data.attributes(i, j));
    }
  }
  SomGrid grid;
  grid.rows = rows;
  grid.cols = cols;
  grid.weights = Matrix(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), m);
  Rng rng(seed);
  for (std::size_t l = 0; l < grid.weights.rows(); ++l) {
    for (std::size_t j = 0; j < m; ++j) {
      grid.weights(l, j) = rng.uniform(lo[j], hi[j]);
    }
  }
  return grid;
}

double squared_euclidean(std::span<const double> x, std::span<const double> w) {
  require(x.size() == w.size(), "squared_euclidean: dimension mismatch");
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - w[j];
    sum += d * d;
  }
  return sum;
}

double learning_rate(const SomHyperParams& params, int epoch) {
  return params.eta0 * std::exp(-static_cast<double>(epoch) * params.lambda_eta);
}

double neighbourhood_width(const SomHyperParams& params, int epoch) {
  return params.alpha0 *
         std::exp(-static_cast<double>(params.epoch_limit - epoch) * params.lambda_alpha);
}

double neighbourhood(double alpha, std::pair<int, int> bmu, std::pair<int, int> neuron) {
  const double dr = static_cast<double>(bmu.first - neuron.first);
  const double dv = static_cast<double>(bmu.second - neuron.second);
  return std::exp(-alpha * (dr * dr + dv * dv));
}

int find_bmu_euclidean(const SomGrid& grid, std::span<const double> x) {
  require(x.size() == grid.weights.cols(), "find_bmu_euclidean: dimension mismatch");
  int best = 0;
  double best_distance = squared_euclidean(x, grid.weights.row(0));
  const int count = grid.neuron_count();
  for (int l = 1; l < count; ++l) {
    const double d = squared_euclidean(x, grid.weights.row(static_cast<std::size_t>(l)));
    if (d < best_distance) {
      best_distance = d;
      best = l;
    }
  }
  return best;
}

void update_weights(SomGrid& grid, std::span<const double> x, int bmu, double eta,
                    double alpha) {
  require(x.size() == grid.weights.cols(), "update_weights: dimension mismatch");
  const auto bmu_pos = grid.position(bmu);
  const int count = grid.neuron_count();
  for (int l = 0; l < count; ++l) {
    const double h = neighbourhood(alpha, bmu_pos, grid.position(l));
    const double step = eta * h;
    auto w = grid.weights.row(static_cast<std::size_t>(l));
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] += step * (x[j] - w[j]);
    }
  }
}

SomGrid train_with_strategy(SomGrid grid, const Dataset& data,
                            const SomHyperParams& params, std::uint64_t seed,
                            const BmuStrategy& bmu) {
  require(data.attribute_count() == grid.weights.cols(),
          "train: grid and data dimensions differ");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int e = 0; e < params.epoch_limit; ++e) {
    rng.shuffle(order);
    const double eta = learning_rate(params, e);
    const double alpha = neighbourhood_width(params, e);
    for (std::size_t i : order) {
      const auto x = data.row(i);
      update_weights(grid, x, bmu(grid, x), eta, alpha);
    }
  }
  return grid;
}

SomGrid train_som(SomGrid grid, const Dataset& data, const SomHyperParams& params,
                  std::uint64_t seed) {
  return train_with_strategy(std::move(grid), data, params, seed, euclidean_bmu());
}

LabeledSom label_som(SomGrid grid, const Dataset& data, const BmuStrategy& bmu,
                     double alpha_label) {
  require(data.size() >= 1, "label_som: empty dataset");
  require(alpha_label > 0.0, "label_som: alpha must be positive");
  const int count = grid.neuron_count();
  LabeledSom labeled;
  labeled.class_mass = Matrix(static_cast<std::size_t>(count),
                              static_cast<std::size_t>(data.class_count));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    const auto bmu_pos = grid.position(bmu(grid, x));
    const auto c = static_cast<std::size_t>(data.labels[i]);
    for (int l = 0; l < count; ++l) {
      labeled.class_mass(static_cast<std::size_t>(l), c) +=
          neighbourhood(alpha_label, bmu_pos, grid.position(l));
    }
  }
  labeled.neuron_labels.reserve(static_cast<std::size_t>(count));
  for (int l = 0; l < count; ++l) {
    const auto mass = labeled.class_mass.row(static_cast<std::size_t>(l));
    int label = 0;
    for (std::size_t c = 1; c < mass.size(); ++c) {
      if (mass[c] > mass[static_cast<std::size_t>(label)]) label = static_cast<int>(c);
    }
    labeled.neuron_labels.push_back(label);
  }
  labeled.grid = std::move(grid);
  return labeled;
}

int classify(const LabeledSom& labeled, std::span<const double> x,
             const BmuStrategy& bmu) {
  return labeled.neuron_labels[static_cast<std::size_t>(bmu(labeled.grid, x))];
}

BmuStrategy euclidean_bmu() {
  return [](const SomGrid& grid, std::span<const double> x) {
    return find_bmu_euclidean(grid, x);
  };
}

}  // namespace rfsom
