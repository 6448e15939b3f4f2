#pragma once

#include <string>
#include <vector>

#include "rfsom/mds.hpp"
#include "rfsom/som.hpp"

namespace rfsom {

/// Polar-area (coxcomb) small-multiples of a labeled map: one diagram per
/// neuron, M equal-angle wedges whose areas encode the display-normalized
/// weights, cell frame stroked in the neuron's class color.
struct CoxcombSpec {
  const LabeledSom* model = nullptr;
  int canvas_size = 640;                       // px, square grid area
  std::vector<std::string> attribute_colors;   // size M, empty = default palette
  std::vector<std::string> class_colors;       // size C, empty = default palette
  bool legend = true;
};

/// 2D scatter of an embedding, one marker per sample colored by class.
struct ScatterSpec {
  const Embedding2D* embedding = nullptr;
  std::vector<int> labels;
  std::vector<std::string> class_colors;  // size C, empty = default palette
  double padding = 0.08;                  // viewport padding fraction
  int canvas_size = 480;
};

/// One line series for the tree-count sweep chart.
struct LineSeries {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

std::string render_som_grid(const CoxcombSpec& spec);
std::string render_scatter(const ScatterSpec& spec);
std::string render_line_chart(const std::vector<LineSeries>& series,
                              const std::string& x_label, const std::string& y_label,
                              int width = 560, int height = 420);

/// Red/blue for two classes, then a fixed 8-color cycle.
std::vector<std::string> default_class_palette(int class_count);
/// Evenly spaced hues for attribute wedges.
std::vector<std::string> default_attribute_palette(int attribute_count);

}  // namespace rfsom
