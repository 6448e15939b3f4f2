#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "rfsom/dataset.hpp"
#include "rfsom/matrix.hpp"

namespace rfsom {

/// One node of a decision tree, stored in a flat array. attribute < 0
/// marks a leaf. Routing rule: x[attribute] <= threshold goes left.
struct TreeNode {
  int attribute = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int class_label = -1;  // leaf only
  int leaf_id = -1;      // leaf only, contiguous 0..leaf_count-1 per tree

  bool is_leaf() const { return attribute < 0; }
  bool operator==(const TreeNode&) const = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;

  /// Builds a tree from an explicit node array (root at index 0).
  /// Validates reachability and the contiguous leaf_id range.
  static DecisionTree from_nodes(std::vector<TreeNode> nodes);

  /// Leaf id reached by routing x from the root.
  int leaf_of(std::span<const double> x) const {
    int i = 0;
    const TreeNode* n = nodes_.data();
    while (n[i].attribute >= 0) {
      i = (x[static_cast<std::size_t>(n[i].attribute)] <= n[i].threshold) ? n[i].left
                                                                          : n[i].right;
    }
    return n[i].leaf_id;
  }

  /// Class label of the leaf reached by x.
  int predict(std::span<const double> x) const {
    int i = 0;
    const TreeNode* n = nodes_.data();
    while (n[i].attribute >= 0) {
      i = (x[static_cast<std::size_t>(n[i].attribute)] <= n[i].threshold) ? n[i].left
                                                                          : n[i].right;
    }
    return n[i].class_label;
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const { return leaf_count_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  bool operator==(const DecisionTree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t leaf_count_ = 0;

  friend class TreeBuilder;
};

struct ForestOptions {
  bool bootstrap = true;        // test hook: false trains each tree on the full set
  std::size_t bootstrap_size = 0;  // 0 means n = N
};

class RandomForest {
 public:
  RandomForest() = default;
  RandomForest(std::vector<DecisionTree> trees, int m, int class_count,
               int attribute_count, std::uint64_t seed);

  // The instrumentation counter is atomic, so copies and moves are spelled
  // out; the counter value travels with the forest.
  RandomForest(const RandomForest& other)
      : trees_(other.trees_),
        m_(other.m_),
        class_count_(other.class_count_),
        attribute_count_(other.attribute_count_),
        seed_(other.seed_),
        traversals_(other.traversal_count()) {}
  RandomForest(RandomForest&& other) noexcept
      : trees_(std::move(other.trees_)),
        m_(other.m_),
        class_count_(other.class_count_),
        attribute_count_(other.attribute_count_),
        seed_(other.seed_),
        traversals_(other.traversal_count()) {}
  RandomForest& operator=(const RandomForest& other) {
    if (this != &other) {
      trees_ = other.trees_;
      m_ = other.m_;
      class_count_ = other.class_count_;
      attribute_count_ = other.attribute_count_;
      seed_ = other.seed_;
      traversals_.store(other.traversal_count(), std::memory_order_relaxed);
    }
    return *this;
  }
  RandomForest& operator=(RandomForest&& other) noexcept {
    trees_ = std::move(other.trees_);
    m_ = other.m_;
    class_count_ = other.class_count_;
    attribute_count_ = other.attribute_count_;
    seed_ = other.seed_;
    traversals_.store(other.traversal_count(), std::memory_order_relaxed);
    return *this;
  }

  /// Mode of the per-tree votes; ties go to the lowest class index.
  int predict(std::span<const double> x) const;

  /// Per-tree terminal leaf id reached by x.
  std::vector<int> leaf_ids(std::span<const double> x) const;

  const std::vector<DecisionTree>& trees() const { return trees_; }
  std::size_t tree_count() const { return trees_.size(); }
  int attributes_per_split() const { return m_; }
  int class_count() const { return class_count_; }
  int attribute_count() const { return attribute_count_; }
  std::uint64_t seed() const { return seed_; }

  /// Instrumentation: total number of root-to-leaf routings performed by
  /// this forest, across all query entry points.
  std::uint64_t traversal_count() const { return traversals_.load(std::memory_order_relaxed); }
  void reset_traversal_count() const { traversals_.store(0, std::memory_order_relaxed); }
  void add_traversals(std::uint64_t n) const {
    traversals_.fetch_add(n, std::memory_order_relaxed);
  }

  bool operator==(const RandomForest& other) const {
    return trees_ == other.trees_ && m_ == other.m_ &&
           class_count_ == other.class_count_ &&
           attribute_count_ == other.attribute_count_ && seed_ == other.seed_;
  }

 private:
  std::vector<DecisionTree> trees_;
  int m_ = 0;
  int class_count_ = 0;
  int attribute_count_ = 0;
  std::uint64_t seed_ = 0;
  mutable std::atomic<std::uint64_t> traversals_{0};
};

/// Number of attributes sampled per split when none is given: max(1, floor(sqrt(M))).
int default_attributes_per_split(int attribute_count);

/// Trains T trees, each on its own seeded bootstrap (seed + tree index),
/// splitting by maximal information gain over m attributes sampled without
/// replacement per node. Grows until pure, < 2 samples, or no positive gain.
RandomForest train_forest(const Dataset& data, int tree_count, int m,
                          std::uint64_t seed, const ForestOptions& options = {});

/// H(parent) - weighted child entropies, base-2. Arguments are label multisets.
double information_gain(std::span<const int> parent_labels,
                        std::span<const int> left_labels,
                        std::span<const int> right_labels);

/// Base-2 entropy of a class-count histogram.
double entropy(std::span<const std::size_t> counts, std::size_t total);

struct ProximityMatrix {
  Matrix values;  // n x n, symmetric, unit diagonal, entries k/T

  std::size_t size() const { return values.rows(); }
};

/// Prox(i,j) = fraction of trees in which rows i and j share a terminal
/// leaf. One traversal per (row, tree), then pairwise leaf-id matching.
ProximityMatrix proximity_matrix(const RandomForest& forest, const Matrix& rows);

/// Per-reference Dis(query, ref) = 1 - Prox(query, ref). The optional
/// cache holds precomputed leaf ids for the reference rows (one vector of
/// T ids per reference).
std::vector<double> dissimilarity_row(
    const RandomForest& forest, std::span<const double> query,
    const Matrix& references,
    const std::vector<std::vector<int>>* reference_leaf_cache = nullptr);

}  // namespace rfsom
