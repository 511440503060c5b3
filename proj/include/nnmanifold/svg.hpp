#pragma once

#include "nnmanifold/types.hpp"

#include <array>
#include <filesystem>
#include <string>

namespace nnmanifold::svg {

/// Viridis colour for t in [0, 1] (clamped).
std::array<int, 3> viridis(double t);
std::string hex(const std::array<int, 3>& rgb);

/// 800x600 scatter, one circle per row of `coordinates`, coloured by
/// `color_values` with a colour bar. No timestamps or other volatile content.
std::string scatter(const MatrixXd& coordinates, const VectorXd& color_values,
                    const std::string& title = "");

/// Grid of cells coloured over [min, max] with row/column index labels.
std::string heatmap(const MatrixXd& matrix, const std::string& title = "");

void emit_scatter_svg(const MatrixXd& coordinates, const VectorXd& color_values,
                      const std::filesystem::path& out, const std::string& title = "");
void emit_heatmap_svg(const MatrixXd& matrix, const std::filesystem::path& out,
                      const std::string& title = "");

}  // namespace nnmanifold::svg
