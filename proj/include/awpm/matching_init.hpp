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

#ifndef AWPM_MATCHING_INIT_HPP
#define AWPM_MATCHING_INIT_HPP

// Initial perfect matching: Karp-Sipser degree-1 rule and a weight-greedy
// scan for a maximal matching, then Hopcroft-Karp style augmenting paths up
// to maximum cardinality. Among admissible edges, heavier edges win.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

#include "awpm/errors.hpp"
#include "awpm/graph.hpp"

namespace awpm {

enum class TieBreak {
  WeightThenIndex,  // heavier edge first, then lower index
  IndexOnly,        // lower index first
};

namespace detail {

// Rows of every column ordered by preference.
inline std::vector<std::vector<vertex_t>> column_preference(const BipartiteGraph& G, TieBreak tb) {
  std::vector<std::vector<vertex_t>> pref(G.n());
  for (vertex_t j = 0; j < G.n(); ++j) {
    auto rows = G.col_rows(j);
    auto ws = G.col_weights(j);
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (tb == TieBreak::WeightThenIndex)
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return ws[a] > ws[b]; });
    pref[j].reserve(order.size());
    for (auto k : order) pref[j].push_back(rows[k]);
  }
  return pref;
}

}  // namespace detail

/// Maximal matching. Degree-1 vertices are matched to their only free
/// neighbor first (propagating as degrees drop); the remaining columns are
/// then scanned in ascending order, each taking its best free row.
inline Matching greedy_maximal(const BipartiteGraph& G, TieBreak tb = TieBreak::WeightThenIndex) {
  const auto n = static_cast<vertex_t>(G.n());
  Matching M(n);
  std::vector<std::size_t> row_deg(n), col_deg(n);
  for (vertex_t v = 0; v < n; ++v) {
    row_deg[v] = G.row_degree(v);
    col_deg[v] = G.col_degree(v);
  }

  // Entries >= n denote rows (v - n).
  std::deque<vertex_t> queue;
  for (vertex_t j = 0; j < n; ++j)
    if (col_deg[j] == 1) queue.push_back(j);
  for (vertex_t i = 0; i < n; ++i)
    if (row_deg[i] == 1) queue.push_back(n + i);

  auto retire_row = [&](vertex_t i) {
    for (vertex_t j : G.row_cols(i))
      if (M.mate_of_col(j) == kNone && --col_deg[j] == 1) queue.push_back(j);
  };
  auto retire_col = [&](vertex_t j) {
    for (vertex_t i : G.col_rows(j))
      if (M.mate_of_row(i) == kNone && --row_deg[i] == 1) queue.push_back(n + i);
  };

  while (!queue.empty()) {
    vertex_t v = queue.front();
    queue.pop_front();
    if (v < n) {
      vertex_t j = v;
      if (M.mate_of_col(j) != kNone || col_deg[j] != 1) continue;
      auto rows = G.col_rows(j);
      auto ws = G.col_weights(j);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (M.mate_of_row(rows[k]) != kNone) continue;
        M.match(rows[k], j, ws[k]);
        retire_row(rows[k]);
        retire_col(j);
        break;
      }
    } else {
      vertex_t i = v - n;
      if (M.mate_of_row(i) != kNone || row_deg[i] != 1) continue;
      auto cols = G.row_cols(i);
      auto ws = G.row_weights(i);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (M.mate_of_col(cols[k]) != kNone) continue;
        M.match(i, cols[k], ws[k]);
        retire_col(cols[k]);
        retire_row(i);
        break;
      }
    }
  }

  for (vertex_t j = 0; j < n; ++j) {
    if (M.mate_of_col(j) != kNone) continue;
    auto rows = G.col_rows(j);
    auto ws = G.col_weights(j);
    std::size_t best = rows.size();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (M.mate_of_row(rows[k]) != kNone) continue;
      if (best == rows.size() || (tb == TieBreak::WeightThenIndex && ws[k] > ws[best])) best = k;
    }
    if (best != rows.size()) M.match(rows[best], j, ws[best]);
  }
  return M;
}

/// Grows `init` to a maximum-cardinality matching by phases of shortest
/// augmenting paths: BFS layers from the free columns, then DFS path
/// extraction along the layers. Does not require the result to be perfect.
inline Matching maximum_cardinality_matching(const BipartiteGraph& G, Matching M,
                                             TieBreak tb = TieBreak::WeightThenIndex) {
  const auto n = static_cast<vertex_t>(G.n());
  if (M.n() != n) throw InvalidMatching("initial matching has the wrong size");
  if (auto report = validate(G, M); !report.valid())
    throw InvalidMatching("initial matching is not valid on the graph");

  const auto pref = detail::column_preference(G, tb);
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> layer(n);
  std::vector<std::size_t> cursor(n);
  std::vector<vertex_t> queue;
  queue.reserve(n);

  struct Frame {
    vertex_t col;
    vertex_t via_row;  // row through which `col` was entered
  };
  std::vector<Frame> stack;

  for (;;) {
    // BFS over columns; layer[j] is the number of matched edges on the
    // shortest alternating path from a free column to j.
    queue.clear();
    for (vertex_t j = 0; j < n; ++j) {
      if (M.mate_of_col(j) == kNone) {
        layer[j] = 0;
        queue.push_back(j);
      } else {
        layer[j] = kInf;
      }
    }
    std::size_t free_layer = kInf;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      vertex_t j = queue[head];
      if (layer[j] >= free_layer) break;
      for (vertex_t i : pref[j]) {
        vertex_t next = M.mate_of_row(i);
        if (next == kNone) {
          free_layer = std::min(free_layer, layer[j] + 1);
        } else if (layer[next] == kInf) {
          layer[next] = layer[j] + 1;
          queue.push_back(next);
        }
      }
    }
    if (free_layer == kInf) break;

    std::fill(cursor.begin(), cursor.end(), 0);
    std::size_t augmented = 0;
    for (vertex_t root = 0; root < n; ++root) {
      if (M.mate_of_col(root) != kNone) continue;
      stack.clear();
      stack.push_back({root, kNone});
      vertex_t free_row = kNone;
      while (!stack.empty() && free_row == kNone) {
        vertex_t j = stack.back().col;
        if (cursor[j] == pref[j].size()) {
          layer[j] = kInf;  // dead end for the rest of this phase
          stack.pop_back();
          continue;
        }
        vertex_t i = pref[j][cursor[j]++];
        vertex_t next = M.mate_of_row(i);
        if (next == kNone) {
          if (layer[j] + 1 == free_layer) free_row = i;
        } else if (layer[next] == layer[j] + 1) {
          stack.push_back({next, i});
        }
      }
      if (free_row == kNone) continue;
      // Flip the path: each column on the stack takes the row below it.
      vertex_t row = free_row;
      for (std::size_t k = stack.size(); k-- > 0;) {
        vertex_t j = stack[k].col;
        M.match(row, j, *G.weight(row, j));
        row = stack[k].via_row;
      }
      ++augmented;
    }
    if (augmented == 0) break;
  }
  return M;
}

/// Maximum-cardinality matching that must be perfect.
inline Matching maximum_cardinality(const BipartiteGraph& G, Matching init,
                                    TieBreak tb = TieBreak::WeightThenIndex) {
  Matching M = maximum_cardinality_matching(G, std::move(init), tb);
  if (auto card = M.cardinality(); card < G.n()) throw StructurallySingular(card, G.n());
  return M;
}

/// greedy_maximal followed by maximum_cardinality.
inline Matching initial_perfect_matching(const BipartiteGraph& G,
                                         TieBreak tb = TieBreak::WeightThenIndex) {
  return maximum_cardinality(G, greedy_maximal(G, tb), tb);
}

}  // namespace awpm

#endif  // AWPM_MATCHING_INIT_HPP
