#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rfsom/matrix.hpp"

namespace rfsom {

/// Tabular classification data: N samples x M real attributes plus a dense
/// class index per sample.
struct Dataset {
  Matrix attributes;                        // N x M
  std::vector<int> labels;                  // values in [0, class_count)
  std::vector<std::string> attribute_names; // length M
  int class_count = 0;

  std::size_t size() const { return attributes.rows(); }
  std::size_t attribute_count() const { return attributes.cols(); }
  std::span<const double> row(std::size_t i) const { return attributes.row(i); }

  /// Full invariant check for freshly loaded data (every class present,
  /// N >= 1, M >= 1, C >= 2). Fold views are allowed to miss classes and
  /// skip this.
  void validate() const;
};

enum class NormalizationMethod { None, MinMax };

struct NormalizationParams {
  NormalizationMethod method = NormalizationMethod::None;
  std::vector<double> min;  // per attribute
  std::vector<double> max;
};

struct FoldSplit {
  int fold_count = 0;
  std::vector<int> assignment;  // per sample, in [0, fold_count)
};

/// Which CSV column holds the class label. Defaults to the last column.
struct LabelColumn {
  enum class Kind { Last, Index, Name };
  Kind kind = Kind::Last;
  int index = -1;
  std::string name;

  static LabelColumn last() { return {}; }
  static LabelColumn at(int i) { return {Kind::Index, i, {}}; }
  static LabelColumn named(std::string n) { return {Kind::Name, -1, std::move(n)}; }
  /// Parses a CLI-style selector: "last", a zero-based integer, or a header name.
  static LabelColumn parse(const std::string& text);
};

Dataset load_csv(const std::filesystem::path& path,
                 const LabelColumn& label_column = LabelColumn::last(),
                 bool has_header = true);

NormalizationParams fit_minmax(const Dataset& data);

/// Maps each attribute to (x - min) / (max - min); constant attributes map
/// to 0. Values outside the fitted range are not clipped.
Dataset apply_normalization(const Dataset& data, const NormalizationParams& params);

/// Inverse of apply_normalization for non-constant attributes.
Dataset invert_normalization(const Dataset& data, const NormalizationParams& params);

/// apply_normalization for a single attribute vector.
std::vector<double> normalize_vector(std::span<const double> raw,
                                     const NormalizationParams& params);

/// Stratified fold assignment: per class, shuffle then deal round-robin,
/// so per-class fold counts differ by at most one. Deterministic per seed.
FoldSplit stratified_folds(const Dataset& data, int k, std::uint64_t seed);

/// Row-subset view materialized as a new Dataset; keeps the parent's
/// class_count even when some class is absent from the subset.
Dataset subset(const Dataset& data, std::span<const std::size_t> rows);

std::vector<std::size_t> fold_members(const FoldSplit& split, int fold);
std::vector<std::size_t> fold_complement(const FoldSplit& split, int fold);

}  // namespace rfsom
