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

#ifndef AWPM_ORACLE_HPP
#define AWPM_ORACLE_HPP

// Exact maximum-weight perfect matching, for ground truth.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "awpm/errors.hpp"
#include "awpm/graph.hpp"

namespace awpm {

struct MwpmResult {
  Matching matching;
  double weight = 0.0;
  /// Dual certificate (exact_mwpm only): w(i,j) <= row_dual[i] + col_dual[j]
  /// on every edge, with equality on matched edges.
  std::vector<double> row_dual;
  std::vector<double> col_dual;
};

inline constexpr std::size_t kBruteForceLimit = 10;

/// Tries all n! assignments of rows to columns; the lexicographically first
/// optimum wins.
inline MwpmResult brute_force_mwpm(const BipartiteGraph& G) {
  const std::size_t n = G.n();
  if (n > kBruteForceLimit) throw TooLarge(n, kBruteForceLimit);

  // Dense lookup; NaN marks a missing edge.
  const double missing = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> dense(n * n, missing);
  for (vertex_t j = 0; j < n; ++j) {
    auto rows = G.col_rows(j);
    auto ws = G.col_weights(j);
    for (std::size_t k = 0; k < rows.size(); ++k) dense[rows[k] * n + j] = ws[k];
  }

  std::vector<vertex_t> row_of_col(n);
  std::iota(row_of_col.begin(), row_of_col.end(), vertex_t{0});
  bool found = false;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<vertex_t> best_perm;
  do {
    double total = 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      double w = dense[row_of_col[j] * n + j];
      if (std::isnan(w)) ok = false;
      else total += w;
    }
    if (ok && (!found || total > best)) {
      found = true;
      best = total;
      best_perm = row_of_col;
    }
  } while (std::next_permutation(row_of_col.begin(), row_of_col.end()));
  if (!found) throw NoPerfectMatching();

  MwpmResult result{Matching(n), best, {}, {}};
  for (vertex_t j = 0; j < n; ++j) result.matching.match(best_perm[j], j, dense[best_perm[j] * n + j]);
  return result;
}

/// Successive shortest augmenting paths with Dijkstra on reduced costs
/// (Hungarian method, sparse). Maximization is carried out as minimization
/// of negated weights.
inline MwpmResult exact_mwpm(const BipartiteGraph& G) {
  const auto n = static_cast<vertex_t>(G.n());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Potentials for cost c = -w: reduced cost of edge (col j -> row i) is
  // c_ij + pot_col[j] - pot_row[i] >= 0, and zero on matched edges.
  std::vector<double> pot_row(n, 0.0), pot_col(n, 0.0);
  for (vertex_t i = 0; i < n; ++i) {
    auto ws = G.row_weights(i);
    if (ws.empty()) throw NoPerfectMatching();
    pot_row[i] = -*std::max_element(ws.begin(), ws.end());
  }

  std::vector<vertex_t> mate_row(n, kNone), mate_col(n, kNone);
  std::vector<double> dist_row(n), dist_col(n);
  std::vector<vertex_t> pred_row(n);
  std::vector<char> done_row(n), done_col(n);
  std::vector<vertex_t> touched_rows, touched_cols;

  using Item = std::pair<double, vertex_t>;  // (distance, row)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

  for (vertex_t source = 0; source < n; ++source) {
    std::fill(dist_row.begin(), dist_row.end(), kInf);
    std::fill(dist_col.begin(), dist_col.end(), kInf);
    std::fill(done_row.begin(), done_row.end(), 0);
    std::fill(done_col.begin(), done_col.end(), 0);
    touched_rows.clear();
    touched_cols.clear();
    heap = {};

    auto relax_from = [&](vertex_t j) {
      done_col[j] = 1;
      touched_cols.push_back(j);
      auto rows = G.col_rows(j);
      auto ws = G.col_weights(j);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        vertex_t i = rows[k];
        if (done_row[i]) continue;
        double reduced = std::max(0.0, -ws[k] + pot_col[j] - pot_row[i]);
        double d = dist_col[j] + reduced;
        if (d < dist_row[i]) {
          dist_row[i] = d;
          pred_row[i] = j;
          heap.push({d, i});
        }
      }
    };

    dist_col[source] = 0.0;
    relax_from(source);
    vertex_t sink = kNone;
    double sink_dist = kInf;
    while (!heap.empty()) {
      auto [d, i] = heap.top();
      heap.pop();
      if (done_row[i] || d > dist_row[i]) continue;
      done_row[i] = 1;
      touched_rows.push_back(i);
      if (mate_row[i] == kNone) {
        sink = i;
        sink_dist = d;
        break;
      }
      vertex_t j = mate_row[i];
      dist_col[j] = d;  // matched edges have zero reduced cost
      relax_from(j);
    }
    if (sink == kNone) throw NoPerfectMatching();

    // Finalized vertices move by (sink_dist - dist); keeps reduced costs
    // nonnegative and matched edges tight.
    for (vertex_t j : touched_cols) pot_col[j] += dist_col[j] - sink_dist;
    for (vertex_t i : touched_rows) pot_row[i] += dist_row[i] - sink_dist;

    vertex_t i = sink;
    for (;;) {
      vertex_t j = pred_row[i];
      vertex_t previous = mate_col[j];
      mate_row[i] = j;
      mate_col[j] = i;
      if (j == source) break;
      i = previous;
    }
  }

  MwpmResult result{Matching(n), 0.0, std::vector<double>(n), std::vector<double>(n)};
  for (vertex_t i = 0; i < n; ++i) {
    double w = *G.weight(i, mate_row[i]);
    result.matching.match(i, mate_row[i], w);
    result.weight += w;
    // w_ij <= pot_col[j] - pot_row[i]
    result.row_dual[i] = -pot_row[i];
  }
  for (vertex_t j = 0; j < n; ++j) result.col_dual[j] = pot_col[j];
  return result;
}

/// Largest violation of the dual certificate: max over edges of
/// w - u - v (should be <= 0) and max over matched edges of |w - u - v|.
struct CertificateCheck {
  double max_edge_excess = -std::numeric_limits<double>::infinity();
  double max_matched_slack = 0.0;
};

inline CertificateCheck check_certificate(const BipartiteGraph& G, const MwpmResult& r) {
  CertificateCheck out;
  for (vertex_t j = 0; j < G.n(); ++j) {
    auto rows = G.col_rows(j);
    auto ws = G.col_weights(j);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      double excess = ws[k] - r.row_dual[rows[k]] - r.col_dual[j];
      out.max_edge_excess = std::max(out.max_edge_excess, excess);
      if (r.matching.mate_of_col(j) == rows[k])
        out.max_matched_slack = std::max(out.max_matched_slack, std::abs(excess));
    }
  }
  return out;
}

/// w(M) / w(M*). Only meaningful when the optimum is positive.
inline double approximation_ratio(const BipartiteGraph& G, const Matching& M, double optimum) {
  if (!M.is_perfect()) throw NotPerfect();
  if (!(optimum > 0.0)) throw std::domain_error("approximation ratio needs a positive optimum");
  return matching_weight(G, M) / optimum;
}

inline double approximation_ratio(const BipartiteGraph& G, const Matching& M) {
  return approximation_ratio(G, M, exact_mwpm(G).weight);
}

}  // namespace awpm

#endif  // AWPM_ORACLE_HPP
