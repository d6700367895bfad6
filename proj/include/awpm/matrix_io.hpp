/*
   Copyright 2026 The awpm Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef AWPM_MATRIX_IO_HPP
#define AWPM_MATRIX_IO_HPP

// Matrix Market input, equilibration and the entry -> edge weight transform.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "awpm/errors.hpp"

namespace awpm {

/// One stored entry. Indices are 0-based; files use 1-based indices.
struct MatrixEntry {
  std::uint32_t row;
  std::uint32_t col;
  double value;

  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// Coordinate sparse matrix, entries sorted column-major (col, then row).
/// No duplicate coordinates and no stored zeros.
struct SparseMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<MatrixEntry> entries;

  std::size_t nnz() const noexcept { return entries.size(); }
};

/// Row and column scale factors, all finite and positive.
struct Scaling {
  std::vector<double> row_scale;
  std::vector<double> col_scale;
};

enum class WeightMetric { Sum, LogProduct };

inline const char* to_string(WeightMetric metric) {
  return metric == WeightMetric::Sum ? "sum" : "logproduct";
}

namespace detail {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline void sort_column_major(std::vector<MatrixEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const MatrixEntry& x, const MatrixEntry& y) {
    return x.col != y.col ? x.col < y.col : x.row < y.row;
  });
}

}  // namespace detail

/// Parses a coordinate real (or integer) Matrix Market stream, general or
/// symmetric. Symmetric storage is expanded to both triangles and explicit
/// zeros are dropped.
inline SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty input", 0);
  ++line_no;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", line_no);
  object = detail::lowercase(object);
  format = detail::lowercase(format);
  field = detail::lowercase(field);
  symmetry = detail::lowercase(symmetry);
  if (object != "matrix") throw UnsupportedFormat("object '" + object + "' is not a matrix");
  if (format != "coordinate") throw UnsupportedFormat("format '" + format + "' is not supported");
  if (field != "real" && field != "integer" && field != "double")
    throw UnsupportedFormat("field '" + field + "' is not supported");
  bool symmetric = false;
  if (symmetry == "symmetric") {
    symmetric = true;
  } else if (symmetry != "general") {
    throw UnsupportedFormat("symmetry '" + symmetry + "' is not supported");
  }

  // Size line: first non-comment, non-blank line.
  std::size_t n_rows = 0, n_cols = 0, declared = 0;
  for (;;) {
    if (!std::getline(in, line)) throw ParseError("missing size line", line_no);
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream size_line(line);
    long long r = -1, c = -1, z = -1;
    if (!(size_line >> r >> c >> z) || r < 0 || c < 0 || z < 0)
      throw ParseError("malformed size line", line_no);
    std::string extra;
    if (size_line >> extra) throw ParseError("trailing tokens on size line", line_no);
    n_rows = static_cast<std::size_t>(r);
    n_cols = static_cast<std::size_t>(c);
    declared = static_cast<std::size_t>(z);
    break;
  }
  if (symmetric && n_rows != n_cols) throw ParseError("symmetric matrix must be square", line_no);
  if (n_rows > std::numeric_limits<std::uint32_t>::max() ||
      n_cols > std::numeric_limits<std::uint32_t>::max())
    throw UnsupportedFormat("matrix dimensions exceed 32-bit indices");

  SparseMatrix A;
  A.n_rows = n_rows;
  A.n_cols = n_cols;
  A.entries.reserve(symmetric ? 2 * declared : declared);

  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    if (seen == declared) throw ParseError("more entries than declared", line_no);
    std::istringstream entry(line);
    long long r = 0, c = 0;
    double v = 0.0;
    if (!(entry >> r >> c >> v)) throw ParseError("malformed entry", line_no);
    std::string extra;
    if (entry >> extra) throw ParseError("trailing tokens in entry", line_no);
    if (r < 1 || c < 1 || static_cast<std::size_t>(r) > n_rows ||
        static_cast<std::size_t>(c) > n_cols)
      throw ParseError("index out of range", line_no);
    if (!std::isfinite(v)) throw ParseError("non-finite value", line_no);
    ++seen;
    if (v == 0.0) continue;
    auto row = static_cast<std::uint32_t>(r - 1);
    auto col = static_cast<std::uint32_t>(c - 1);
    A.entries.push_back({row, col, v});
    if (symmetric && row != col) A.entries.push_back({col, row, v});
  }
  if (seen != declared)
    throw ParseError("expected " + std::to_string(declared) + " entries, found " +
                         std::to_string(seen),
                     line_no);

  detail::sort_column_major(A.entries);
  auto dup = std::adjacent_find(A.entries.begin(), A.entries.end(),
                                [](const MatrixEntry& x, const MatrixEntry& y) {
                                  return x.row == y.row && x.col == y.col;
                                });
  if (dup != A.entries.end()) throw DuplicateEntry(dup->row + 1, dup->col + 1);
  return A;
}

inline SparseMatrix load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  return read_matrix_market(in);
}

/// Builds a matrix from arbitrary entries (0-based), enforcing the same
/// invariants as the reader.
inline SparseMatrix make_sparse_matrix(std::size_t n_rows, std::size_t n_cols,
                                       std::vector<MatrixEntry> entries) {
  SparseMatrix A{n_rows, n_cols, {}};
  A.entries.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row >= n_rows || e.col >= n_cols) throw ParseError("index out of range", 0);
    if (e.value != 0.0) A.entries.push_back(e);
  }
  detail::sort_column_major(A.entries);
  auto dup = std::adjacent_find(A.entries.begin(), A.entries.end(),
                                [](const MatrixEntry& x, const MatrixEntry& y) {
                                  return x.row == y.row && x.col == y.col;
                                });
  if (dup != A.entries.end()) throw DuplicateEntry(dup->row + 1, dup->col + 1);
  return A;
}

inline void write_matrix_market(std::ostream& out, const SparseMatrix& A) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.n_rows << ' ' << A.n_cols << ' ' << A.nnz() << '\n';
  out << std::setprecision(17);
  for (const auto& e : A.entries) out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
}

/// Row pass then column pass: b_ij = |a_ij| * r_i * c_j with
/// r_i = 1 / max_j |a_ij| and c_j = 1 / max_i |a_ij| r_i. Every column
/// maximum of the result is 1 and every row maximum is at most 1.
inline std::pair<SparseMatrix, Scaling> equilibrate(const SparseMatrix& A) {
  std::vector<double> row_max(A.n_rows, 0.0);
  for (const auto& e : A.entries) row_max[e.row] = std::max(row_max[e.row], std::abs(e.value));
  for (std::size_t i = 0; i < A.n_rows; ++i)
    if (row_max[i] == 0.0) throw EmptyRowOrColumn(true, i);

  Scaling s;
  s.row_scale.resize(A.n_rows);
  for (std::size_t i = 0; i < A.n_rows; ++i) s.row_scale[i] = 1.0 / row_max[i];

  std::vector<double> col_max(A.n_cols, 0.0);
  for (const auto& e : A.entries)
    col_max[e.col] = std::max(col_max[e.col], std::abs(e.value) * s.row_scale[e.row]);
  for (std::size_t j = 0; j < A.n_cols; ++j)
    if (col_max[j] == 0.0) throw EmptyRowOrColumn(false, j);
  s.col_scale.resize(A.n_cols);
  for (std::size_t j = 0; j < A.n_cols; ++j) s.col_scale[j] = 1.0 / col_max[j];

  SparseMatrix B{A.n_rows, A.n_cols, A.entries};
  for (auto& e : B.entries) {
    // The column maximum is pinned to exactly 1; division by the maximum
    // avoids the rounding of multiplying by its reciprocal.
    double scaled = std::abs(e.value) * s.row_scale[e.row];
    e.value = scaled == col_max[e.col] ? 1.0 : std::min(1.0, scaled / col_max[e.col]);
  }
  return {std::move(B), std::move(s)};
}

/// Sum keeps weights; LogProduct replaces each weight by its natural log so
/// that maximizing the sum maximizes the product.
inline SparseMatrix apply_metric(const SparseMatrix& B, WeightMetric metric) {
  SparseMatrix out = B;
  if (metric == WeightMetric::LogProduct)
    for (auto& e : out.entries) e.value = std::log(e.value);
  return out;
}

inline void write_scaling_vector(std::ostream& out, const std::vector<double>& scale,
                                 const std::string& comment = {}) {
  if (!comment.empty()) out << "% " << comment << '\n';
  out << std::setprecision(17);
  for (double v : scale) out << v << '\n';
}

inline std::vector<double> read_scaling_vector(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream ss(line);
    double v = 0.0;
    if (!(ss >> v) || !std::isfinite(v) || v <= 0.0)
      throw ParseError("invalid scale factor", line_no);
    out.push_back(v);
  }
  return out;
}

}  // namespace awpm

#endif  // AWPM_MATRIX_IO_HPP
