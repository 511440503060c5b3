#include "nnmanifold/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nnmanifold::io {

namespace fs = std::filesystem;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  if (ec != std::errc{}) throw Error(ErrorKind::ParseError, "cannot format double");
  return std::string(buf.data(), end);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(trim(line.substr(start)));
      break;
    }
    out.emplace_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::MissingFile, "cannot write " + path.string());
  out << contents;
}

MatrixXd read_matrix_csv(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorKind::MissingFile, path.string());
  std::istringstream in(read_text(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) {
      try {
        row.push_back(parse_double(cell));
      } catch (const Error&) {
        throw Error(ErrorKind::ParseError,
                    path.string() + ":" + std::to_string(lineno) + ": bad value '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::ParseError,
                  path.string() + ":" + std::to_string(lineno) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  MatrixXd m(static_cast<Eigen::Index>(rows.size()),
             rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_matrix_csv(const fs::path& path, const MatrixXd& matrix) {
  std::string out;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out += ',';
      out += format_double(matrix(i, j));
    }
    out += '\n';
  }
  write_text(path, out);
}

LabeledMatrix read_labeled_matrix_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, path.string() + ": empty");
  auto header = split(line, ',');
  if (header.size() < 2) throw Error(ErrorKind::ParseError, path.string() + ": bad header");
  LabeledMatrix out;
  out.ids.assign(header.begin() + 1, header.end());
  const auto n = static_cast<Eigen::Index>(out.ids.size());
  out.matrix.resize(n, n);
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (row >= n || static_cast<Eigen::Index>(cells.size()) != n + 1 || cells[0] != out.ids[row]) {
      throw Error(ErrorKind::ParseError, path.string() + ": malformed row " + std::to_string(row));
    }
    for (Eigen::Index j = 0; j < n; ++j) out.matrix(row, j) = parse_double(cells[j + 1]);
    ++row;
  }
  if (row != n) throw Error(ErrorKind::ParseError, path.string() + ": expected square matrix");
  return out;
}

void write_labeled_matrix_csv(const fs::path& path, const std::vector<std::string>& ids,
                              const MatrixXd& matrix) {
  std::string out = "id";
  for (const auto& id : ids) out += ',' + id;
  out += '\n';
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    out += ids[i];
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) out += ',' + format_double(matrix(i, j));
    out += '\n';
  }
  write_text(path, out);
}

}  // namespace nnmanifold::io
