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

#ifndef AWPM_GRAPH_HPP
#define AWPM_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "awpm/errors.hpp"
#include "awpm/matrix_io.hpp"

namespace awpm {

using vertex_t = std::uint32_t;
inline constexpr vertex_t kNone = std::numeric_limits<vertex_t>::max();

/// Square weighted bipartite graph. Rows and columns are both numbered
/// 0..n-1. Edges are stored twice: column-major (rows sorted within each
/// column) and row-major (columns sorted within each row).
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// The matrix must be square; each stored entry becomes one edge.
  explicit BipartiteGraph(const SparseMatrix& A) {
    if (A.n_rows != A.n_cols)
      throw DimensionMismatch("bipartite graph needs a square matrix, got " +
                              std::to_string(A.n_rows) + "x" + std::to_string(A.n_cols));
    build(A.n_rows, A.entries);
  }

  /// Edges as (row, col, weight); duplicates are rejected.
  BipartiteGraph(std::size_t n, std::vector<MatrixEntry> edges) {
    for (const auto& e : edges)
      if (e.row >= n || e.col >= n) throw DimensionMismatch("edge endpoint out of range");
    detail::sort_column_major(edges);
    auto dup = std::adjacent_find(edges.begin(), edges.end(),
                                  [](const MatrixEntry& x, const MatrixEntry& y) {
                                    return x.row == y.row && x.col == y.col;
                                  });
    if (dup != edges.end()) throw DuplicateEntry(dup->row + 1, dup->col + 1);
    build(n, edges);
  }

  /// Dense constructor; entries equal to zero are not edges.
  static BipartiteGraph from_dense(const std::vector<std::vector<double>>& w) {
    std::vector<MatrixEntry> edges;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].size() != w.size()) throw DimensionMismatch("dense weights must be square");
      for (std::size_t j = 0; j < w[i].size(); ++j)
        if (w[i][j] != 0.0)
          edges.push_back({static_cast<vertex_t>(i), static_cast<vertex_t>(j), w[i][j]});
    }
    return BipartiteGraph(w.size(), std::move(edges));
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return col_rows_.size(); }

  std::span<const vertex_t> col_rows(vertex_t j) const {
    return {col_rows_.data() + col_ptr_[j], col_rows_.data() + col_ptr_[j + 1]};
  }
  std::span<const double> col_weights(vertex_t j) const {
    return {col_w_.data() + col_ptr_[j], col_w_.data() + col_ptr_[j + 1]};
  }
  std::span<const vertex_t> row_cols(vertex_t i) const {
    return {row_cols_.data() + row_ptr_[i], row_cols_.data() + row_ptr_[i + 1]};
  }
  std::span<const double> row_weights(vertex_t i) const {
    return {row_w_.data() + row_ptr_[i], row_w_.data() + row_ptr_[i + 1]};
  }
  std::size_t col_degree(vertex_t j) const { return col_ptr_[j + 1] - col_ptr_[j]; }
  std::size_t row_degree(vertex_t i) const { return row_ptr_[i + 1] - row_ptr_[i]; }

  /// Weight of edge {i, j} by binary search in column j. `probes`, when
  /// given, is incremented once per comparison.
  std::optional<double> weight(vertex_t i, vertex_t j, std::size_t* probes = nullptr) const {
    auto rows = col_rows(j);
    auto it = std::lower_bound(rows.begin(), rows.end(), i, [probes](vertex_t a, vertex_t b) {
      if (probes) ++*probes;
      return a < b;
    });
    if (it == rows.end() || *it != i) return std::nullopt;
    return col_w_[col_ptr_[j] + static_cast<std::size_t>(it - rows.begin())];
  }

  bool has_edge(vertex_t i, vertex_t j) const { return weight(i, j).has_value(); }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (std::size_t v = 0; v < n_; ++v)
      d = std::max({d, col_degree(static_cast<vertex_t>(v)), row_degree(static_cast<vertex_t>(v))});
    return d;
  }

 private:
  // `edges` must be sorted column-major without duplicates.
  void build(std::size_t n, const std::vector<MatrixEntry>& edges) {
    n_ = n;
    col_ptr_.assign(n + 1, 0);
    row_ptr_.assign(n + 1, 0);
    for (const auto& e : edges) {
      ++col_ptr_[e.col + 1];
      ++row_ptr_[e.row + 1];
    }
    for (std::size_t k = 0; k < n; ++k) {
      col_ptr_[k + 1] += col_ptr_[k];
      row_ptr_[k + 1] += row_ptr_[k];
    }
    col_rows_.resize(edges.size());
    col_w_.resize(edges.size());
    row_cols_.resize(edges.size());
    row_w_.resize(edges.size());
    std::vector<std::size_t> row_fill(row_ptr_.begin(), row_ptr_.end() - 1);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      col_rows_[k] = edges[k].row;
      col_w_[k] = edges[k].value;
      // Column-major input order leaves each row's columns sorted.
      auto slot = row_fill[edges[k].row]++;
      row_cols_[slot] = edges[k].col;
      row_w_[slot] = edges[k].value;
    }
  }

  std::size_t n_ = 0;
  std::vector<std::size_t> col_ptr_{0}, row_ptr_{0};
  std::vector<vertex_t> col_rows_, row_cols_;
  std::vector<double> col_w_, row_w_;
};

/// Mate maps for both sides plus cached weights of matched edges.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::size_t n)
      : mate_of_row_(n, kNone), mate_of_col_(n, kNone), row_weight_(n, 0.0), col_weight_(n, 0.0) {}

  std::size_t n() const noexcept { return mate_of_row_.size(); }

  vertex_t mate_of_row(vertex_t i) const { return mate_of_row_[i]; }
  vertex_t mate_of_col(vertex_t j) const { return mate_of_col_[j]; }
  double row_weight(vertex_t i) const { return row_weight_[i]; }
  double col_weight(vertex_t j) const { return col_weight_[j]; }

  const std::vector<vertex_t>& mates_of_rows() const noexcept { return mate_of_row_; }
  const std::vector<vertex_t>& mates_of_cols() const noexcept { return mate_of_col_; }

  /// Pairs i with j. Both must be free.
  void match(vertex_t i, vertex_t j, double w) {
    mate_of_row_[i] = j;
    mate_of_col_[j] = i;
    row_weight_[i] = w;
    col_weight_[j] = w;
  }

  /// Overwrites the row side only; used while rewiring alternating paths.
  void set_row(vertex_t i, vertex_t j, double w) {
    mate_of_row_[i] = j;
    row_weight_[i] = w;
  }
  void set_col(vertex_t j, vertex_t i, double w) {
    mate_of_col_[j] = i;
    col_weight_[j] = w;
  }

  std::size_t cardinality() const {
    return static_cast<std::size_t>(
        std::count_if(mate_of_row_.begin(), mate_of_row_.end(), [](vertex_t m) { return m != kNone; }));
  }
  bool is_perfect() const {
    return std::none_of(mate_of_row_.begin(), mate_of_row_.end(), [](vertex_t m) { return m == kNone; }) &&
           std::none_of(mate_of_col_.begin(), mate_of_col_.end(), [](vertex_t m) { return m == kNone; });
  }

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<vertex_t> mate_of_row_, mate_of_col_;
  std::vector<double> row_weight_, col_weight_;
};

/// Alternating 4-cycle i - j - mj - mi - i where {i, mi} and {mj, j} are
/// matched. The unmatched weights travel with the cycle so that it can be
/// applied without the graph.
struct Cycle4 {
  vertex_t i;   // row
  vertex_t j;   // column, the root
  vertex_t mj;  // row, current mate of j
  vertex_t mi;  // column, current mate of i
  double w_ij;
  double w_mjmi;
  double gain;

  friend bool operator==(const Cycle4&, const Cycle4&) = default;
};

/// w(i,j) + w(mj,mi) - w(i,mi) - w(mj,j), evaluated in that order everywhere.
inline double cycle_gain(double w_ij, double w_mjmi, double w_imi, double w_mjj) {
  return w_ij + w_mjmi - w_imi - w_mjj;
}

// -- validation ---------------------------------------------------------------

enum class ViolationKind { Involution, NonEdge, WeightCache, SizeMismatch };

struct Violation {
  ViolationKind kind;
  vertex_t row;
  vertex_t col;
};

struct ValidityReport {
  bool perfect = false;
  std::size_t cardinality = 0;
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
};

inline ValidityReport validate(const BipartiteGraph& G, const Matching& M) {
  ValidityReport report;
  if (M.n() != G.n()) {
    report.violations.push_back({ViolationKind::SizeMismatch, kNone, kNone});
    return report;
  }
  const auto n = static_cast<vertex_t>(G.n());
  for (vertex_t i = 0; i < n; ++i) {
    vertex_t j = M.mate_of_row(i);
    if (j == kNone) continue;
    if (j >= n || M.mate_of_col(j) != i) {
      report.violations.push_back({ViolationKind::Involution, i, j});
      continue;
    }
    auto w = G.weight(i, j);
    if (!w) {
      report.violations.push_back({ViolationKind::NonEdge, i, j});
      continue;
    }
    if (M.row_weight(i) != *w || M.col_weight(j) != *w)
      report.violations.push_back({ViolationKind::WeightCache, i, j});
  }
  for (vertex_t j = 0; j < n; ++j) {
    vertex_t i = M.mate_of_col(j);
    if (i != kNone && (i >= n || M.mate_of_row(i) != j))
      report.violations.push_back({ViolationKind::Involution, i, j});
  }
  report.cardinality = M.cardinality();
  report.perfect = report.valid() && M.is_perfect();
  return report;
}

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Involution: return "involution";
    case ViolationKind::NonEdge: return "non-edge";
    case ViolationKind::WeightCache: return "weight-cache";
    case ViolationKind::SizeMismatch: return "size-mismatch";
  }
  return "unknown";
}

/// Sum of graph weights over matched edges, in row order.
inline double matching_weight(const BipartiteGraph& G, const Matching& M) {
  auto report = validate(G, M);
  if (!report.valid()) {
    const auto& v = report.violations.front();
    throw InvalidMatching(std::string("invalid matching: ") + to_string(v.kind) + " violation at (" +
                          std::to_string(v.row) + ", " + std::to_string(v.col) + ")");
  }
  double total = 0.0;
  for (vertex_t i = 0; i < G.n(); ++i)
    if (auto j = M.mate_of_row(i); j != kNone) total += *G.weight(i, j);
  return total;
}

/// Gain of the 4-cycle through unmatched edge {i, j}, or nullopt when the
/// closing edge {mj, mi} is absent.
inline std::optional<double> gain_of(const BipartiteGraph& G, const Matching& M, vertex_t i,
                                     vertex_t j) {
  vertex_t mj = M.mate_of_col(j);
  vertex_t mi = M.mate_of_row(i);
  if (mj == kNone || mi == kNone || M.mate_of_row(mj) == kNone || M.mate_of_col(mi) == kNone)
    throw NotPerfect("gain_of: cycle vertex is unmatched");
  if (i == mj) throw InvalidMatching("gain_of: {i, j} is a matched edge");
  auto w_ij = G.weight(i, j);
  if (!w_ij) throw InvalidMatching("gain_of: {i, j} is not an edge");
  auto w_mjmi = G.weight(mj, mi);
  if (!w_mjmi) return std::nullopt;
  return cycle_gain(*w_ij, *w_mjmi, M.row_weight(i), M.col_weight(j));
}

/// Builds the cycle through unmatched edge {i, j}, or nullopt when it does not close.
inline std::optional<Cycle4> make_cycle(const BipartiteGraph& G, const Matching& M, vertex_t i,
                                        vertex_t j) {
  auto gain = gain_of(G, M, i, j);
  if (!gain) return std::nullopt;
  vertex_t mj = M.mate_of_col(j);
  vertex_t mi = M.mate_of_row(i);
  return Cycle4{i, j, mj, mi, *G.weight(i, j), *G.weight(mj, mi), *gain};
}

/// Exchanges matched and unmatched edges of `c` in place.
inline void augment_in_place(Matching& M, const Cycle4& c) {
  if (c.i == c.mj || c.j == c.mi || M.mate_of_row(c.i) != c.mi || M.mate_of_col(c.mi) != c.i ||
      M.mate_of_row(c.mj) != c.j || M.mate_of_col(c.j) != c.mj)
    throw StaleCycle();
  M.match(c.i, c.j, c.w_ij);
  M.match(c.mj, c.mi, c.w_mjmi);
}

inline Matching augment(Matching M, const Cycle4& c) {
  augment_in_place(M, c);
  return M;
}

/// The cycle that undoes `c` once `c` has been applied; its gain is -c.gain.
inline Cycle4 reverse_cycle(const Cycle4& c, double w_imi, double w_mjj) {
  return Cycle4{c.i, c.mi, c.mj, c.j, w_imi, w_mjj, cycle_gain(w_imi, w_mjj, c.w_ij, c.w_mjmi)};
}

/// Line k holds the 1-based row matched to column k.
inline void write_permutation(std::ostream& out, const Matching& M) {
  if (!M.is_perfect()) throw NotPerfect("permutation output needs a perfect matching");
  for (vertex_t j = 0; j < M.n(); ++j) out << M.mate_of_col(j) + 1 << '\n';
}

}  // namespace awpm

#endif  // AWPM_GRAPH_HPP
