#pragma once

#include "nnmanifold/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nnmanifold::io {

/// 17 significant digits, general notation; round-trips every finite double.
std::string format_double(double value);

/// Parses a decimal float. Accepts "inf"/"-inf"/"nan" spellings; the caller
/// decides whether non-finite values are allowed.
double parse_double(std::string_view text);

/// Headerless CSV of reals, one row per line. Empty lines are skipped.
MatrixXd read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& matrix);

/// Square matrix with a header row of ids and the id as first column.
struct LabeledMatrix {
  std::vector<std::string> ids;
  MatrixXd matrix;
};

LabeledMatrix read_labeled_matrix_csv(const std::filesystem::path& path);
void write_labeled_matrix_csv(const std::filesystem::path& path,
                              const std::vector<std::string>& ids, const MatrixXd& matrix);

void write_text(const std::filesystem::path& path, const std::string& contents);
std::string read_text(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view line, char sep);

}  // namespace nnmanifold::io
