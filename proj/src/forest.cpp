#include "rfsom/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "rfsom/rng.hpp"

namespace rfsom {

double entropy(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

namespace {

std::vector<std::size_t> histogram(std::span<const int> labels, std::size_t bins) {
  std::vector<std::size_t> counts(bins, 0);
  for (int label : labels) {
    require(label >= 0, "information_gain: negative label");
    if (static_cast<std::size_t>(label) >= counts.size()) {
      counts.resize(static_cast<std::size_t>(label) + 1, 0);
    }
    ++counts[static_cast<std::size_t>(label)];
  }
  return counts;
}

int argmax_lowest(std::span<const std::size_t> counts) {
  std::size_t best = 0;
  int best_index = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > best) {
      best = counts[c];
      best_index = static_cast<int>(c);
    }
  }
  return best_index;
}

}  // namespace

/// Grows one tree over a multiset of dataset rows. Nodes are emitted in
/// preorder (root first), leaf ids in creation order.
class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, int m, int class_count, Rng& rng)
      : data_(data), m_(m), class_count_(class_count), rng_(rng) {
    attribute_pool_.resize(data.attribute_count());
    std::iota(attribute_pool_.begin(), attribute_pool_.end(), 0);
  }

  DecisionTree build(std::vector<int> rows) {
    nodes_.clear();
    leaf_count_ = 0;
    grow(std::move(rows));
    DecisionTree tree;
    tree.nodes_ = std::move(nodes_);
    tree.leaf_count_ = leaf_count_;
    return tree;
  }

 private:
  struct Split {
    double gain = 0.0;
    int attribute = -1;
    double threshold = 0.0;
  };

  int grow(std::vector<int> rows) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(class_count_), 0);
    for (int r : rows) ++counts[static_cast<std::size_t>(data_.labels[static_cast<std::size_t>(r)])];
    const bool pure = std::count_if(counts.begin(), counts.end(),
                                    [](std::size_t c) { return c > 0; }) <= 1;
    if (pure || rows.size() < 2) return make_leaf(counts);

    const Split split = best_split(rows, counts);
    if (split.attribute < 0) return make_leaf(counts);

    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::vector<int> left_rows, right_rows;
    left_rows.reserve(rows.size());
    right_rows.reserve(rows.size());
    for (int r : rows) {
      const double v = data_.attributes(static_cast<std::size_t>(r),
                                        static_cast<std::size_t>(split.attribute));
      (v <= split.threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int left = grow(std::move(left_rows));
    const int right = grow(std::move(right_rows));
    nodes_[static_cast<std::size_t>(index)] = TreeNode{
        split.attribute, split.threshold, left, right, -1, -1};
    return index;
  }

  int make_leaf(std::span<const std::size_t> counts) {
    const int index = static_cast<int>(nodes_.size());
    TreeNode leaf;
    leaf.class_label = argmax_lowest(counts);
    leaf.leaf_id = static_cast<int>(leaf_count_++);
    nodes_.push_back(leaf);
    return index;
  }

  Split best_split(const std::vector<int>& rows, std::span<const std::size_t> counts) {
    // m attributes without replacement via partial Fisher-Yates, then
    // evaluated in ascending order so gain ties resolve to the lower
    // attribute index.
    const std::size_t pool = attribute_pool_.size();
    for (std::size_t i = 0; i < static_cast<std::size_t>(m_); ++i) {
      const std::size_t j = i + rng_.below(pool - i);
      std::swap(attribute_pool_[i], attribute_pool_[j]);
    }
    std::sort(attribute_pool_.begin(), attribute_pool_.begin() + m_);

    const double parent_entropy = entropy(counts, rows.size());
    const double n = static_cast<double>(rows.size());
    Split best;
    std::vector<std::pair<double, int>> sorted(rows.size());
    std::vector<std::size_t> left(static_cast<std::size_t>(class_count_));
    std::vector<std::size_t> right(static_cast<std::size_t>(class_count_));
    for (int a = 0; a < m_; ++a) {
      const std::size_t attribute = static_cast<std::size_t>(attribute_pool_[static_cast<std::size_t>(a)]);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = static_cast<std::size_t>(rows[i]);
        sorted[i] = {data_.attributes(r, attribute), data_.labels[r]};
      }
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });

      std::fill(left.begin(), left.end(), 0);
      std::copy(counts.begin(), counts.end(), right.begin());
      std::size_t i = 0;
      while (i < sorted.size()) {
        const double value = sorted[i].first;
        while (i < sorted.size() && sorted[i].first == value) {
          const auto label = static_cast<std::size_t>(sorted[i].second);
          ++left[label];
          --right[label];
          ++i;
        }
        if (i == sorted.size()) break;
        const double threshold = value + (sorted[i].first - value) / 2.0;
        const double gain = parent_entropy -
                            (static_cast<double>(i) / n) * entropy(left, i) -
                            (static_cast<double>(sorted.size() - i) / n) *
                                entropy(right, sorted.size() - i);
        if (gain > best.gain) {
          best = {gain, static_cast<int>(attribute), threshold};
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  int m_;
  int class_count_;
  Rng& rng_;
  std::vector<int> attribute_pool_;
  std::vector<TreeNode> nodes_;
  std::size_t leaf_count_ = 0;
};

DecisionTree DecisionTree::from_nodes(std::vector<TreeNode> nodes) {
  require(!nodes.empty(), "tree: no nodes");
  const int count = static_cast<int>(nodes.size());
  std::vector<int> referenced(nodes.size(), 0);
  std::vector<int> leaf_ids;
  for (const TreeNode& node : nodes) {
    if (node.is_leaf()) {
      require(node.leaf_id >= 0, "tree: leaf without id");
      leaf_ids.push_back(node.leaf_id);
    } else {
      require(node.left >= 0 && node.left < count, "tree: left child out of range");
      require(node.right >= 0 && node.right < count, "tree: right child out of range");
      ++referenced[static_cast<std::size_t>(node.left)];
      ++referenced[static_cast<std::size_t>(node.right)];
    }
  }
  require(referenced[0] == 0, "tree: root is referenced");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    require(referenced[i] == 1, "tree: node not referenced exactly once");
  }
  std::sort(leaf_ids.begin(), leaf_ids.end());
  for (std::size_t i = 0; i < leaf_ids.size(); ++i) {
    require(leaf_ids[i] == static_cast<int>(i), "tree: leaf ids not contiguous");
  }
  DecisionTree tree;
  tree.nodes_ = std::move(nodes);
  tree.leaf_count_ = leaf_ids.size();
  return tree;
}

RandomForest::RandomForest(std::vector<DecisionTree> trees, int m, int class_count,
                           int attribute_count, std::uint64_t seed)
    : trees_(std::move(trees)),
      m_(m),
      class_count_(class_count),
      attribute_count_(attribute_count),
      seed_(seed) {
  require(!trees_.empty(), "forest: needs at least one tree");
  require(m_ >= 1 && m_ <= attribute_count_, "forest: m out of range");
  require(class_count_ >= 2, "forest: fewer than 2 classes");
}

int RandomForest::predict(std::span<const double> x) const {
  require(x.size() == static_cast<std::size_t>(attribute_count_),
          "predict: dimension mismatch");
  std::vector<std::size_t> votes(static_cast<std::size_t>(class_count_), 0);
  for (const DecisionTree& tree : trees_) {
    ++votes[static_cast<std::size_t>(tree.predict(x))];
  }
  add_traversals(trees_.size());
  return argmax_lowest(votes);
}

std::vector<int> RandomForest::leaf_ids(std::span<const double> x) const {
  require(x.size() == static_cast<std::size_t>(attribute_count_),
          "leaf_ids: dimension mismatch");
  std::vector<int> ids;
  ids.reserve(trees_.size());
  for (const DecisionTree& tree : trees_) ids.push_back(tree.leaf_of(x));
  add_traversals(trees_.size());
  return ids;
}

int default_attributes_per_split(int attribute_count) {
  return std::max(1, static_cast<int>(std::floor(std::sqrt(
                         static_cast<double>(attribute_count)))));
}

RandomForest train_forest(const Dataset& data, int tree_count, int m,
                          std::uint64_t seed, const ForestOptions& options) {
  require(data.size() >= 1, "train_forest: empty dataset");
  require(tree_count >= 1, "train_forest: tree_count must be positive");
  require(m >= 1 && m <= static_cast<int>(data.attribute_count()),
          "train_forest: m out of range");
  require(data.class_count >= 2, "train_forest: fewer than 2 classes");

  const std::size_t n =
      options.bootstrap_size > 0 ? options.bootstrap_size : data.size();
  std::vector<DecisionTree> trees;
  trees.reserve(static_cast<std::size_t>(tree_count));
  for (int t = 0; t < tree_count; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    std::vector<int> rows;
    rows.reserve(n);
    if (options.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) {
        rows.push_back(static_cast<int>(rng.below(data.size())));
      }
    } else {
      rows.resize(data.size());
      std::iota(rows.begin(), rows.end(), 0);
    }
    TreeBuilder builder(data, m, data.class_count, rng);
    trees.push_back(builder.build(std::move(rows)));
  }
  return RandomForest(std::move(trees), m, data.class_count,
                      static_cast<int>(data.attribute_count()), seed);
}

double information_gain(std::span<const int> parent_labels,
                        std::span<const int> left_labels,
                        std::span<const int> right_labels) {
  require(!parent_labels.empty(), "information_gain: empty parent");
  require(left_labels.size() + right_labels.size() == parent_labels.size(),
          "information_gain: children do not partition the parent");
  const std::size_t bins = histogram(parent_labels, 0).size();
  const auto parent = histogram(parent_labels, bins);
  const auto left = histogram(left_labels, bins);
  const auto right = histogram(right_labels, bins);
  const double n = static_cast<double>(parent_labels.size());
  return entropy(parent, parent_labels.size()) -
         (static_cast<double>(left_labels.size()) / n) * entropy(left, left_labels.size()) -
         (static_cast<double>(right_labels.size()) / n) *
             entropy(right, right_labels.size());
}

ProximityMatrix proximity_matrix(const RandomForest& forest, const Matrix& rows) {
  require(rows.rows() >= 1, "proximity_matrix: no rows");
  require(rows.cols() == static_cast<std::size_t>(forest.attribute_count()),
          "proximity_matrix: dimension mismatch");
  const std::size_t n = rows.rows();
  const std::size_t t = forest.tree_count();
  std::vector<std::vector<int>> leaves;
  leaves.reserve(n);
  for (std::size_t i = 0; i < n; ++i) leaves.push_back(forest.leaf_ids(rows.row(i)));

  ProximityMatrix prox;
  prox.values = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    prox.values(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t matches = 0;
      for (std::size_t k = 0; k < t; ++k) {
        if (leaves[i][k] == leaves[j][k]) ++matches;
      }
      const double p = static_cast<double>(matches) / static_cast<double>(t);
      prox.values(i, j) = p;
      prox.values(j, i) = p;
    }
  }
  return prox;
}

std::vector<double> dissimilarity_row(
    const RandomForest& forest, std::span<const double> query,
    const Matrix& references,
    const std::vector<std::vector<int>>* reference_leaf_cache) {
  require(references.cols() == static_cast<std::size_t>(forest.attribute_count()),
          "dissimilarity_row: dimension mismatch");
  if (reference_leaf_cache) {
    require(reference_leaf_cache->size() == references.rows(),
            "dissimilarity_row: cache size mismatch");
  }
  const std::size_t t = forest.tree_count();
  const std::vector<int> query_leaves = forest.leaf_ids(query);
  std::vector<double> row;
  row.reserve(references.rows());
  std::vector<int> scratch;
  for (std::size_t r = 0; r < references.rows(); ++r) {
    const std::vector<int>& ref_leaves =
        reference_leaf_cache ? (*reference_leaf_cache)[r]
                             : (scratch = forest.leaf_ids(references.row(r)));
    std::size_t matches = 0;
    for (std::size_t k = 0; k < t; ++k) {
      if (query_leaves[k] == ref_leaves[k]) ++matches;
    }
    row.push_back(1.0 - static_cast<double>(matches) / static_cast<double>(t));
  }
  return row;
}

}  // namespace rfsom
