#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "rfsom/dataset.hpp"
#include "rfsom/matrix.hpp"

namespace rfsom {

/// Training schedule constants. Defaults follow the experiment setup:
/// 200 epochs, eta0 = 0.1, lambda_eta = 0.0345, alpha0 = 0.1,
/// lambda_alpha = 0.008.
struct SomHyperParams {
  int epoch_limit = 200;  // e_stop
  double eta0 = 0.1;
  double lambda_eta = 0.0345;
  double alpha0 = 0.1;
  double lambda_alpha = 0.008;

  bool operator==(const SomHyperParams&) const = default;
};

/// P x Q lattice of M-dimensional weight vectors. Neuron (p, q) lives at
/// linear index p * Q + q.
struct SomGrid {
  int rows = 0;  // P
  int cols = 0;  // Q
  Matrix weights;  // L x M, L = P * Q

  int neuron_count() const { return rows * cols; }
  int linear(int p, int q) const { return p * cols + q; }
  std::pair<int, int> position(int index) const { return {index / cols, index % cols}; }

  bool operator==(const SomGrid&) const = default;
};

/// BMU search strategy: maps (current grid, sample) to a neuron linear
/// index. Lets one training/labeling/classification path serve both the
/// Euclidean SOM and the forest-dissimilarity SOM.
using BmuStrategy = std::function<int(const SomGrid&, std::span<const double>)>;

struct LabeledSom {
  SomGrid grid;
  std::vector<int> neuron_labels;  // length L
  Matrix class_mass;               // L x C accumulated neighbourhood sums

  bool operator==(const LabeledSom&) const = default;
};

/// Weights drawn uniformly from each attribute's [min, max] over the data.
/// Deterministic per seed so two maps can share identical initial weights.
SomGrid init_grid(int rows, int cols, const Dataset& data, std::uint64_t seed);

double squared_euclidean(std::span<const double> x, std::span<const double> w);

/// eta0 * exp(-e * lambda_eta); strictly decreasing in the epoch.
double learning_rate(const SomHyperParams& params, int epoch);

/// alpha0 * exp(-(e_stop - e) * lambda_alpha); strictly increasing in the
/// epoch, equal to alpha0 at e = e_stop. Larger alpha = narrower kernel.
double neighbourhood_width(const SomHyperParams& params, int epoch);

/// exp(-alpha * ((r - p)^2 + (v - q)^2)) for BMU at (r, v), neuron (p, q).
double neighbourhood(double alpha, std::pair<int, int> bmu, std::pair<int, int> neuron);

/// Argmin of squared Euclidean distance over all neurons; ties go to the
/// lowest linear index.
int find_bmu_euclidean(const SomGrid& grid, std::span<const double> x);

/// In-place update of every neuron: w += eta * h * (x - w).
void update_weights(SomGrid& grid, std::span<const double> x, int bmu, double eta,
                    double alpha);

/// Generic epoch loop: reshuffles sample order each epoch (seeded), finds
/// the BMU with the given strategy, applies the weight update. One
/// iteration is one sample presentation.
SomGrid train_with_strategy(SomGrid grid, const Dataset& data,
                            const SomHyperParams& params, std::uint64_t seed,
                            const BmuStrategy& bmu);

/// Euclidean-distance training.
SomGrid train_som(SomGrid grid, const Dataset& data, const SomHyperParams& params,
                  std::uint64_t seed);

/// Post-hoc neuron labeling: each sample deposits its neighbourhood value
/// (width alpha_label, centered at its BMU) into its class's column of
/// every neuron's mass; labels are per-neuron argmax, ties to the lowest
/// class index.
LabeledSom label_som(SomGrid grid, const Dataset& data, const BmuStrategy& bmu,
                     double alpha_label);

/// Class of the BMU under the given strategy.
int classify(const LabeledSom& labeled, std::span<const double> x,
             const BmuStrategy& bmu);

/// The Euclidean strategy as a reusable object.
BmuStrategy euclidean_bmu();

}  // namespace rfsom
