#include "rfsom/viz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rfsom {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.find('-') == 0) {
    s.erase(0, 1);  // -0.000000 -> 0.000000
  }
  return s;
}

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string hsl_hex(double hue, double saturation, double lightness) {
  const auto channel = [&](double n) {
    const double k = std::fmod(n + hue / 30.0, 12.0);
    const double a = saturation * std::min(lightness, 1.0 - lightness);
    const double c =
        lightness - a * std::max(-1.0, std::min({k - 3.0, 9.0 - k, 1.0}));
    return static_cast<int>(std::lround(c * 255.0));
  };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", channel(0.0), channel(8.0),
                channel(4.0));
  return buf;
}

std::string svg_open(int width, int height) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  return out.str();
}

/// One wedge of an M-slice coxcomb as a filled path. M = 1 degenerates to
/// a full disc drawn as two half arcs.
std::string wedge_path(double cx, double cy, double r, double angle0, double angle1,
                       const std::string& color) {
  std::ostringstream out;
  out << "<path class=\"wedge\" d=\"";
  const double x0 = cx + r * std::cos(angle0);
  const double y0 = cy + r * std::sin(angle0);
  if (angle1 - angle0 >= 2.0 * std::numbers::pi - 1e-9) {
    const double xm = cx - r * std::cos(angle0 - std::numbers::pi);
    const double ym = cy - r * std::sin(angle0 - std::numbers::pi);
    out << "M" << fmt(x0) << "," << fmt(y0) << " A" << fmt(r) << "," << fmt(r)
        << " 0 0,1 " << fmt(xm) << "," << fmt(ym) << " A" << fmt(r) << "," << fmt(r)
        << " 0 0,1 " << fmt(x0) << "," << fmt(y0) << " Z";
  } else {
    const double x1 = cx + r * std::cos(angle1);
    const double y1 = cy + r * std::sin(angle1);
    out << "M" << fmt(cx) << "," << fmt(cy) << " L" << fmt(x0) << "," << fmt(y0)
        << " A" << fmt(r) << "," << fmt(r) << " 0 0,1 " << fmt(x1) << "," << fmt(y1)
        << " Z";
  }
  out << "\" fill=\"" << color << "\"/>\n";
  return out.str();
}

}  // namespace

std::vector<std::string> default_class_palette(int class_count) {
  static const std::vector<std::string> cycle = {
      "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
      "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  std::vector<std::string> palette;
  palette.reserve(static_cast<std::size_t>(class_count));
  for (int c = 0; c < class_count; ++c) {
    palette.push_back(cycle[static_cast<std::size_t>(c) % cycle.size()]);
  }
  return palette;
}

std::vector<std::string> default_attribute_palette(int attribute_count) {
  std::vector<std::string> palette;
  palette.reserve(static_cast<std::size_t>(attribute_count));
  for (int j = 0; j < attribute_count; ++j) {
    const double hue = 360.0 * static_cast<double>(j) /
                       static_cast<double>(attribute_count);
    palette.push_back(hsl_hex(hue, 0.65, 0.5));
  }
  return palette;
}

std::string render_som_grid(const CoxcombSpec& spec) {
  require(spec.model != nullptr, "render_som_grid: no model");
  const LabeledSom& model = *spec.model;
  const int p_rows = model.grid.rows;
  const int q_cols = model.grid.cols;
  const std::size_t m = model.grid.weights.cols();
  const std::size_t c = model.class_mass.cols();
  require(m >= 1, "render_som_grid: no attributes");

  std::vector<std::string> attribute_colors = spec.attribute_colors;
  if (attribute_colors.empty()) {
    attribute_colors = default_attribute_palette(static_cast<int>(m));
  }
  require(attribute_colors.size() == m, "render_som_grid: attribute palette size");
  std::vector<std::string> class_colors = spec.class_colors;
  if (class_colors.empty()) class_colors = default_class_palette(static_cast<int>(c));
  require(class_colors.size() == c, "render_som_grid: class palette size");

  const int cell = spec.canvas_size / std::max(p_rows, q_cols);
  require(cell >= 40, "render_som_grid: canvas too small for the grid");
  const int margin = 12;
  const int grid_w = q_cols * cell;
  const int grid_h = p_rows * cell;
  const int legend_w = spec.legend ? 150 : 0;
  const int legend_h =
      spec.legend ? static_cast<int>(m + c + 2) * 16 + 8 : 0;
  const int width = 2 * margin + grid_w + legend_w;
  const int height = 2 * margin + std::max(grid_h, legend_h);

  // Display normalization: per-attribute min-max over the grid's weights.
  std::vector<double> lo(m), hi(m);
  for (std::size_t j = 0; j < m; ++j) {
    lo[j] = hi[j] = model.grid.weights(0, j);
    for (std::size_t l = 1; l < model.grid.weights.rows(); ++l) {
      lo[j] = std::min(lo[j], model.grid.weights(l, j));
      hi[j] = std::max(hi[j], model.grid.weights(l, j));
    }
  }

  std::ostringstream out;
  out << svg_open(width, height);
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  const double r_max = cell / 2.0 - 5.0;
  const double slice = 2.0 * std::numbers::pi / static_cast<double>(m);
  for (int p = 0; p < p_rows; ++p) {
    for (int q = 0; q < q_cols; ++q) {
      const auto l = static_cast<std::size_t>(p * q_cols + q);
      const double x0 = margin + q * cell;
      const double y0 = margin + p * cell;
      const double cx = x0 + cell / 2.0;
      const double cy = y0 + cell / 2.0;
      const auto weights = model.grid.weights.row(l);
      for (std::size_t j = 0; j < m; ++j) {
        const double span = hi[j] - lo[j];
        const double normalized = span > 0.0 ? (weights[j] - lo[j]) / span : 0.0;
        const double r = r_max * std::sqrt(normalized);
        const double angle0 = -std::numbers::pi / 2.0 + slice * static_cast<double>(j);
        out << wedge_path(cx, cy, r, angle0, angle0 + slice, attribute_colors[j]);
      }
      const auto label = static_cast<std::size_t>(model.neuron_labels[l]);
      out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"none\" stroke=\""
          << class_colors[label] << "\" stroke-width=\"2\"/>\n";
    }
  }

  if (spec.legend) {
    const int lx = 2 * margin + grid_w;
    int ly = margin + 8;
    out << "<text x=\"" << lx << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\" font-weight=\"bold\">"
        << "attributes</text>\n";
    ly += 6;
    for (std::size_t j = 0; j < m; ++j) {
      out << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\""
          << attribute_colors[j] << "\"/>\n"
          << "<text x=\"" << lx + 18 << "\" y=\"" << ly + 10
          << "\" font-family=\"sans-serif\" font-size=\"12\">attr " << j << "</text>\n";
      ly += 16;
    }
    ly += 12;
    out << "<text x=\"" << lx << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\" font-weight=\"bold\">"
        << "classes</text>\n";
    ly += 6;
    for (std::size_t k = 0; k < c; ++k) {
      out << "<rect x=\"" << lx << "\" y=\"" << ly
          << "\" width=\"12\" height=\"12\" fill=\"none\" stroke=\"" << class_colors[k]
          << "\" stroke-width=\"2\"/>\n"
          << "<text x=\"" << lx + 18 << "\" y=\"" << ly + 10
          << "\" font-family=\"sans-serif\" font-size=\"12\">class " << k << "</text>\n";
      ly += 16;
    }
  }

  out << "</svg>\n";
  return out.str();
}

std::string render_scatter(const ScatterSpec& spec) {
  require(spec.embedding != nullptr, "render_scatter: no embedding");
  const Matrix& points = spec.embedding->coordinates;
  require(points.rows() >= 1, "render_scatter: empty embedding");
  require(spec.labels.size() == points.rows(), "render_scatter: label count mismatch");

  int class_count = 0;
  for (int label : spec.labels) class_count = std::max(class_count, label + 1);
  std::vector<std::string> class_colors = spec.class_colors;
  if (class_colors.empty()) class_colors = default_class_palette(class_count);
  require(static_cast<int>(class_colors.size()) >= class_count,
          "render_scatter: class palette size");

  double xmin = points(0, 0), xmax = points(0, 0);
  double ymin = points(0, 1), ymax = points(0, 1);
  for (std::size_t i = 1; i < points.rows(); ++i) {
    xmin = std::min(xmin, points(i, 0));
    xmax = std::max(xmax, points(i, 0));
    ymin = std::min(ymin, points(i, 1));
    ymax = std::max(ymax, points(i, 1));
  }

  const int size = spec.canvas_size;
  const double pad = spec.padding * size;
  const double inner = size - 2.0 * pad;
  const auto map_x = [&](double x) {
    return xmax > xmin ? pad + (x - xmin) / (xmax - xmin) * inner : size / 2.0;
  };
  const auto map_y = [&](double y) {
    return ymax > ymin ? size - pad - (y - ymin) / (ymax - ymin) * inner : size / 2.0;
  };

  std::ostringstream out;
  out << svg_open(size, size);
  out << "<rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size
      << "\" fill=\"white\" stroke=\"#888888\"/>\n";
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto label = static_cast<std::size_t>(spec.labels[i]);
    out << "<circle class=\"marker\" cx=\"" << fmt(map_x(points(i, 0))) << "\" cy=\""
        << fmt(map_y(points(i, 1))) << "\" r=\"3\" fill=\"" << class_colors[label]
        << "\" fill-opacity=\"0.8\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_line_chart(const std::vector<LineSeries>& series,
                              const std::string& x_label, const std::string& y_label,
                              int width, int height) {
  require(!series.empty(), "render_line_chart: no series");
  std::vector<double> xs;
  double ymin = series.front().y.at(0);
  double ymax = ymin;
  for (const LineSeries& s : series) {
    require(s.x.size() == s.y.size(), "render_line_chart: x/y length mismatch");
    for (double x : s.x) xs.push_back(x);
    for (double y : s.y) {
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const double xmin = xs.front();
  const double xmax = xs.back();
  if (ymax == ymin) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double y_pad = 0.05 * (ymax - ymin);
  const double ylo = ymin - y_pad;
  const double yhi = ymax + y_pad;

  const double left = 70, right = 20, top = 20, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto map_x = [&](double x) {
    return xmax > xmin ? left + (x - xmin) / (xmax - xmin) * plot_w
                       : left + plot_w / 2.0;
  };
  const auto map_y = [&](double y) { return top + (yhi - y) / (yhi - ylo) * plot_h; };

  std::ostringstream out;
  out << svg_open(width, height);
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\""
      << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  for (double x : xs) {
    const double px = map_x(x);
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(top + plot_h) << "\" x2=\""
        << fmt(px) << "\" y2=\"" << fmt(top + plot_h + 5) << "\" stroke=\"#333333\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%g", x);
    out << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(top + plot_h + 20)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << label << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double y = ylo + (yhi - ylo) * t / 4.0;
    const double py = map_y(y);
    out << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(py) << "\" x2=\""
        << fmt(left) << "\" y2=\"" << fmt(py) << "\" stroke=\"#333333\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%.1f", y);
    out << "<text x=\"" << fmt(left - 9) << "\" y=\"" << fmt(py + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << label
        << "</text>\n";
  }
  out << "<text x=\"" << fmt(left + plot_w / 2.0) << "\" y=\"" << fmt(height - 18.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
      << xml_escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << fmt(top + plot_h / 2.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 18 " << fmt(top + plot_h / 2.0) << ")\">"
      << xml_escape(y_label) << "</text>\n";

  for (const LineSeries& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out << " ";
      out << fmt(map_x(s.x[i])) << "," << fmt(map_y(s.y[i]));
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << "<circle class=\"dot\" cx=\"" << fmt(map_x(s.x[i])) << "\" cy=\""
          << fmt(map_y(s.y[i])) << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";
    }
  }

  double legend_y = top + 14;
  for (const LineSeries& s : series) {
    const double lx = left + plot_w - 130;
    out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(legend_y - 4) << "\" x2=\""
        << fmt(lx + 24) << "\" y2=\"" << fmt(legend_y - 4) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(legend_y)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.name)
        << "</text>\n";
    legend_y += 18;
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace rfsom
