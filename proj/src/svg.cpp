#include "nnmanifold/svg.hpp"

#include "nnmanifold/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nnmanifold::svg {

namespace {

// Viridis sampled at 11 evenly spaced stops.
constexpr std::array<std::array<int, 3>, 11> kViridis{{
    {68, 1, 84},    {72, 36, 117},  {65, 68, 135},  {53, 95, 141},
    {42, 120, 142}, {33, 145, 140}, {34, 168, 132}, {68, 191, 112},
    {122, 209, 81}, {189, 223, 38}, {253, 231, 37},
}};

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double unit(double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.0; }

}  // namespace

std::array<int, 3> viridis(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double pos = t * static_cast<double>(kViridis.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= kViridis.size()) return kViridis.back();
  const double f = pos - static_cast<double>(lo);
  std::array<int, 3> out{};
  for (int c = 0; c < 3; ++c) {
    out[c] = static_cast<int>(std::lround(kViridis[lo][c] * (1.0 - f) + kViridis[lo + 1][c] * f));
  }
  return out;
}

std::string hex(const std::array<int, 3>& rgb) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string scatter(const MatrixXd& coordinates, const VectorXd& color_values,
                    const std::string& title) {
  require(coordinates.rows() == color_values.size(), ErrorKind::LengthMismatch,
          "one colour value per point required");
  require(coordinates.cols() >= 2 || coordinates.rows() == 0, ErrorKind::ShapeMismatch,
          "scatter needs two coordinates per point");
  const double mx = 0.05 * kWidth, my = 0.05 * kHeight;
  const double plot_w = kWidth - 2 * mx - 80.0;  // room for the colour bar
  const double plot_h = kHeight - 2 * my;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
                  "viewBox=\"0 0 800 600\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  s += "<rect x=\"" + num(mx) + "\" y=\"" + num(my) + "\" width=\"" + num(plot_w) + "\" height=\"" +
       num(plot_h) + "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  if (!title.empty()) {
    s += "<text x=\"" + num(mx) + "\" y=\"" + num(my - 8) + "\" font-size=\"14\">" + escape(title) +
         "</text>\n";
  }
  double cmin = 0.0, cmax = 0.0;
  if (color_values.size() > 0) {
    cmin = color_values.minCoeff();
    cmax = color_values.maxCoeff();
  }
  if (coordinates.rows() > 0) {
    const double xmin = coordinates.col(0).minCoeff(), xmax = coordinates.col(0).maxCoeff();
    const double ymin = coordinates.col(1).minCoeff(), ymax = coordinates.col(1).maxCoeff();
    for (Eigen::Index i = 0; i < coordinates.rows(); ++i) {
      const double x = mx + (xmax > xmin ? unit(coordinates(i, 0), xmin, xmax) : 0.5) * plot_w;
      const double y = my + (1.0 - (ymax > ymin ? unit(coordinates(i, 1), ymin, ymax) : 0.5)) * plot_h;
      s += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"6\" fill=\"" +
           hex(viridis(unit(color_values(i), cmin, cmax))) + "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
    }
  }
  // Colour bar, bottom = minimum.
  const double bx = kWidth - mx - 40.0, bh = plot_h, steps = 50;
  for (int k = 0; k < static_cast<int>(steps); ++k) {
    const double t = (k + 0.5) / steps;
    s += "<rect x=\"" + num(bx) + "\" y=\"" + num(my + (1.0 - (k + 1) / steps) * bh) +
         "\" width=\"20\" height=\"" + num(bh / steps + 0.5) + "\" fill=\"" + hex(viridis(t)) +
         "\" stroke=\"none\"/>\n";
  }
  s += "<text x=\"" + num(bx - 4) + "\" y=\"" + num(my - 4) + "\" font-size=\"11\">" +
       io::format_double(cmax) + "</text>\n";
  s += "<text x=\"" + num(bx - 4) + "\" y=\"" + num(my + bh + 14) + "\" font-size=\"11\">" +
       io::format_double(cmin) + "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string heatmap(const MatrixXd& matrix, const std::string& title) {
  const auto rows = matrix.rows(), cols = matrix.cols();
  const double left = 50.0, top = 50.0;
  const double cell = rows && cols ? std::min((kWidth - left - 20) / cols, (kHeight - top - 20) / rows) : 0.0;
  const double lo = matrix.size() ? matrix.minCoeff() : 0.0;
  const double hi = matrix.size() ? matrix.maxCoeff() : 0.0;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
                  "viewBox=\"0 0 800 600\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  if (!title.empty()) s += "<text x=\"50\" y=\"24\" font-size=\"14\">" + escape(title) + "</text>\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      s += "<rect class=\"cell\" x=\"" + num(left + j * cell) + "\" y=\"" + num(top + i * cell) +
           "\" width=\"" + num(cell) + "\" height=\"" + num(cell) + "\" fill=\"" +
           hex(viridis(unit(matrix(i, j), lo, hi))) + "\"/>\n";
    }
  }
  const bool labels = cell >= 8.0;
  if (labels) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      s += "<text x=\"" + num(left - 4) + "\" y=\"" + num(top + (i + 0.5) * cell + 4) +
           "\" font-size=\"10\" text-anchor=\"end\">" + std::to_string(i) + "</text>\n";
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      s += "<text x=\"" + num(left + (j + 0.5) * cell) + "\" y=\"" + num(top - 4) +
           "\" font-size=\"10\" text-anchor=\"middle\">" + std::to_string(j) + "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

void emit_scatter_svg(const MatrixXd& coordinates, const VectorXd& color_values,
                      const std::filesystem::path& out, const std::string& title) {
  io::write_text(out, scatter(coordinates, color_values, title));
}

void emit_heatmap_svg(const MatrixXd& matrix, const std::filesystem::path& out,
                      const std::string& title) {
  io::write_text(out, heatmap(matrix, title));
}

}  // namespace nnmanifold::svg
