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

#ifndef AWPM_TESTS_SUPPORT_HPP
#define AWPM_TESTS_SUPPORT_HPP

// Instance generators and independent reference routines shared by the
// test binaries. Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "awpm/graph.hpp"
#include "awpm/matrix_io.hpp"

namespace awpm::testing {

using Rng = std::mt19937_64;

/// Uniform weight in (0, 1].
inline double unit_weight(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return 1.0 - u(rng);
}

inline SparseMatrix random_dense_matrix(std::size_t n, Rng& rng) {
  std::vector<MatrixEntry> e;
  for (vertex_t j = 0; j < n; ++j)
    for (vertex_t i = 0; i < n; ++i) e.push_back({i, j, unit_weight(rng)});
  return make_sparse_matrix(n, n, std::move(e));
}

/// Each cell present with probability `density`; the diagonal is forced
/// when `planted_diagonal` is set. Values are signed and of varying scale.
inline SparseMatrix random_sparse_matrix(std::size_t n, double density, bool planted_diagonal,
                                         Rng& rng) {
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> mag(-3.0, 3.0);
  std::bernoulli_distribution negative(0.3);
  std::vector<MatrixEntry> e;
  for (vertex_t j = 0; j < n; ++j)
    for (vertex_t i = 0; i < n; ++i)
      if ((planted_diagonal && i == j) || keep(rng)) {
        double v = std::pow(10.0, mag(rng));
        e.push_back({i, j, negative(rng) ? -v : v});
      }
  return make_sparse_matrix(n, n, std::move(e));
}

inline BipartiteGraph random_dense_graph(std::size_t n, Rng& rng) {
  return BipartiteGraph(random_dense_matrix(n, rng));
}

/// Random graph whose positive weights are uniform in (0, 1].
inline BipartiteGraph random_graph(std::size_t n, double density, bool planted_diagonal, Rng& rng) {
  std::bernoulli_distribution keep(density);
  std::vector<MatrixEntry> e;
  for (vertex_t j = 0; j < n; ++j)
    for (vertex_t i = 0; i < n; ++i)
      if ((planted_diagonal && i == j) || keep(rng)) e.push_back({i, j, unit_weight(rng)});
  return BipartiteGraph(n, std::move(e));
}

/// A random perfect matching of G found by shuffling and a simple
/// augmenting search; returns an empty optional-like matching (n() == 0)
/// when none exists.
inline Matching random_perfect_matching(const BipartiteGraph& G, Rng& rng);

/// Kuhn's single-path augmenting search: maximum matching cardinality.
inline std::size_t reference_max_cardinality(const BipartiteGraph& G,
                                             std::vector<vertex_t>* row_of_col_out = nullptr,
                                             const std::vector<vertex_t>* column_order = nullptr) {
  const std::size_t n = G.n();
  std::vector<vertex_t> row_of_col(n, kNone), col_of_row(n, kNone);
  std::vector<char> seen(n);
  std::function<bool(vertex_t)> try_col = [&](vertex_t j) -> bool {
    for (vertex_t i : G.col_rows(j)) {
      if (seen[i]) continue;
      seen[i] = 1;
      if (col_of_row[i] == kNone || try_col(col_of_row[i])) {
        col_of_row[i] = j;
        row_of_col[j] = i;
        return true;
      }
    }
    return false;
  };
  std::size_t card = 0;
  for (std::size_t k = 0; k < n; ++k) {
    vertex_t j = column_order ? (*column_order)[k] : static_cast<vertex_t>(k);
    std::fill(seen.begin(), seen.end(), 0);
    if (try_col(j)) ++card;
  }
  if (row_of_col_out) *row_of_col_out = row_of_col;
  return card;
}

inline Matching random_perfect_matching(const BipartiteGraph& G, Rng& rng) {
  std::vector<vertex_t> order(G.n());
  std::iota(order.begin(), order.end(), vertex_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<vertex_t> row_of_col;
  if (reference_max_cardinality(G, &row_of_col, &order) != G.n()) return Matching();
  Matching M(G.n());
  for (vertex_t j = 0; j < G.n(); ++j) M.match(row_of_col[j], j, *G.weight(row_of_col[j], j));
  return M;
}

/// All perfect matchings of a small graph, as row_of_col permutations.
inline std::vector<std::vector<vertex_t>> all_perfect_matchings(const BipartiteGraph& G) {
  std::vector<std::vector<vertex_t>> out;
  std::vector<vertex_t> perm(G.n());
  std::iota(perm.begin(), perm.end(), vertex_t{0});
  do {
    bool ok = true;
    for (vertex_t j = 0; j < G.n() && ok; ++j) ok = G.has_edge(perm[j], j);
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline Matching matching_from_rows(const BipartiteGraph& G, const std::vector<vertex_t>& row_of_col) {
  Matching M(G.n());
  for (vertex_t j = 0; j < G.n(); ++j) M.match(row_of_col[j], j, *G.weight(row_of_col[j], j));
  return M;
}

/// Weight summed in column order, straight from the graph.
inline double reference_weight(const BipartiteGraph& G, const Matching& M) {
  double total = 0.0;
  for (vertex_t j = 0; j < G.n(); ++j) total += *G.weight(M.mate_of_col(j), j);
  return total;
}

/// Whether any augmenting 4-cycle exists, by exhaustive enumeration of all
/// row pairs and column pairs.
inline bool has_augmenting_4cycle(const BipartiteGraph& G, const Matching& M) {
  const auto n = static_cast<vertex_t>(G.n());
  for (vertex_t j = 0; j < n; ++j)
    for (vertex_t mi = 0; mi < n; ++mi) {
      if (j == mi) continue;
      vertex_t mj = M.mate_of_col(j), i = M.mate_of_col(mi);
      auto a = G.weight(i, j), b = G.weight(mj, mi);
      if (a && b && *a + *b - *G.weight(i, mi) - *G.weight(mj, j) > 0.0) return true;
    }
  return false;
}

}  // namespace awpm::testing

#endif  // AWPM_TESTS_SUPPORT_HPP
