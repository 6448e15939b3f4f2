#include "rfsom/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "rfsom/rng.hpp"

namespace rfsom {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, std::size_t line_number) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::runtime_error("line " + std::to_string(line_number) +
                             ": not a number: '" + field + "'");
  }
  return value;
}

bool numeric_looking(const std::string& field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc{} && ptr == field.data() + field.size();
}

}  // namespace

void Dataset::validate() const {
  require(size() >= 1, "dataset: no samples");
  require(attribute_count() >= 1, "dataset: no attributes");
  require(class_count >= 2, "dataset: fewer than 2 classes");
  require(labels.size() == size(), "dataset: label count mismatch");
  require(attribute_names.size() == attribute_count(), "dataset: attribute name count mismatch");
  std::vector<bool> seen(static_cast<std::size_t>(class_count), false);
  for (int label : labels) {
    require(label >= 0 && label < class_count, "dataset: label out of range");
    seen[static_cast<std::size_t>(label)] = true;
  }
  for (bool s : seen) require(s, "dataset: empty class");
}

LabelColumn LabelColumn::parse(const std::string& text) {
  if (text == "last") return last();
  int index = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
  if (ec == std::errc{} && ptr == text.data() + text.size()) {
    require(index >= 0, "label column index must be non-negative");
    return at(index);
  }
  return named(text);
}

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column,
                 bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_number = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (has_header && header.empty() && rows.empty()) {
      header = std::move(fields);
      continue;
    }
    if (!rows.empty() && fields.size() != rows.front().size()) {
      throw std::runtime_error("line " + std::to_string(line_number) + ": expected " +
                               std::to_string(rows.front().size()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": no data rows");
  const std::size_t columns = rows.front().size();
  if (has_header && header.size() != columns) {
    throw std::runtime_error(path.string() + ": header width does not match rows");
  }
  require(columns >= 2, "csv needs at least one attribute column plus the label");

  std::size_t label_index = columns - 1;
  switch (label_column.kind) {
    case LabelColumn::Kind::Last:
      break;
    case LabelColumn::Kind::Index:
      require(static_cast<std::size_t>(label_column.index) < columns,
              "label column index out of range");
      label_index = static_cast<std::size_t>(label_column.index);
      break;
    case LabelColumn::Kind::Name: {
      const auto it = std::find(header.begin(), header.end(), label_column.name);
      if (it == header.end()) {
        throw std::runtime_error("label column '" + label_column.name + "' not in header");
      }
      label_index = static_cast<std::size_t>(it - header.begin());
      break;
    }
  }

  Dataset data;
  const std::size_t attribute_count = columns - 1;
  data.attributes = Matrix(rows.size(), attribute_count);
  data.labels.reserve(rows.size());

  std::vector<std::string> label_order;  // dense ids in first-appearance order
  std::map<std::string, int> label_ids;
  const std::size_t first_data_line = has_header ? 2 : 1;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    std::size_t a = 0;
    for (std::size_t c = 0; c < columns; ++c) {
      if (c == label_index) continue;
      if (fields[c].empty()) {
        throw std::runtime_error("line " + std::to_string(first_data_line + r) +
                                 ": missing value");
      }
      data.attributes(r, a++) = parse_number(fields[c], first_data_line + r);
    }
    const std::string& token = fields[label_index];
    if (token.empty()) {
      throw std::runtime_error("line " + std::to_string(first_data_line + r) +
                               ": missing label");
    }
    auto [it, inserted] = label_ids.try_emplace(token, static_cast<int>(label_order.size()));
    if (inserted) label_order.push_back(token);
    data.labels.push_back(it->second);
  }
  data.class_count = static_cast<int>(label_order.size());

  data.attribute_names.reserve(attribute_count);
  for (std::size_t c = 0, a = 0; c < columns; ++c) {
    if (c == label_index) continue;
    if (!header.empty()) {
      data.attribute_names.push_back(header[c]);
    } else {
      data.attribute_names.push_back("attr_" + std::to_string(a));
    }
    ++a;
  }

  data.validate();
  return data;
}

NormalizationParams fit_minmax(const Dataset& data) {
  require(data.size() >= 1, "fit_minmax: empty dataset");
  const std::size_t m = data.attribute_count();
  NormalizationParams params;
  params.method = NormalizationMethod::MinMax;
  params.min.assign(m, std::numeric_limits<double>::infinity());
  params.max.assign(m, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      params.min[j] = std::min(params.min[j], row[j]);
      params.max[j] = std::max(params.max[j], row[j]);
    }
  }
  return params;
}

Dataset apply_normalization(const Dataset& data, const NormalizationParams& params) {
  if (params.method == NormalizationMethod::None) return data;
  require(params.min.size() == data.attribute_count(), "normalization: dimension mismatch");
  Dataset out = data;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto row = out.attributes.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double span = params.max[j] - params.min[j];
      row[j] = span > 0.0 ? (row[j] - params.min[j]) / span : 0.0;
    }
  }
  return out;
}

Dataset invert_normalization(const Dataset& data, const NormalizationParams& params) {
  if (params.method == NormalizationMethod::None) return data;
  require(params.min.size() == data.attribute_count(), "normalization: dimension mismatch");
  Dataset out = data;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto row = out.attributes.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double span = params.max[j] - params.min[j];
      row[j] = span > 0.0 ? row[j] * span + params.min[j] : params.min[j];
    }
  }
  return out;
}

std::vector<double> normalize_vector(std::span<const double> raw,
                                     const NormalizationParams& params) {
  std::vector<double> x(raw.begin(), raw.end());
  if (params.method == NormalizationMethod::None) return x;
  require(params.min.size() == x.size(), "normalization: dimension mismatch");
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double span = params.max[j] - params.min[j];
    x[j] = span > 0.0 ? (x[j] - params.min[j]) / span : 0.0;
  }
  return x;
}

FoldSplit stratified_folds(const Dataset& data, int k, std::uint64_t seed) {
  require(k >= 2, "stratified_folds: k must be at least 2");
  require(static_cast<std::size_t>(k) <= data.size(), "stratified_folds: k exceeds N");

  std::vector<std::vector<std::size_t>> by_class(
      static_cast<std::size_t>(data.class_count));
  for (std::size_t i = 0; i < data.size(); ++i) {
    by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
  }

  FoldSplit split;
  split.fold_count = k;
  split.assignment.assign(data.size(), 0);
  Rng rng(seed);
  int next_fold = 0;
  for (auto& members : by_class) {
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i) {
      split.assignment[members[i]] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }
  return split;
}

Dataset subset(const Dataset& data, std::span<const std::size_t> rows) {
  require(!rows.empty(), "subset: empty row selection");
  Dataset out;
  out.attributes = Matrix(rows.size(), data.attribute_count());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i] < data.size(), "subset: row index out of range");
    const auto src = data.row(rows[i]);
    std::copy(src.begin(), src.end(), out.attributes.row(i).begin());
    out.labels.push_back(data.labels[rows[i]]);
  }
  out.attribute_names = data.attribute_names;
  out.class_count = data.class_count;
  return out;
}

std::vector<std::size_t> fold_members(const FoldSplit& split, int fold) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < split.assignment.size(); ++i) {
    if (split.assignment[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> fold_complement(const FoldSplit& split, int fold) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < split.assignment.size(); ++i) {
    if (split.assignment[i] != fold) rows.push_back(i);
  }
  return rows;
}

}  // namespace rfsom
