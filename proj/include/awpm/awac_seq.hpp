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

#ifndef AWPM_AWAC_SEQ_HPP
#define AWPM_AWAC_SEQ_HPP

// Sequential augmenting 4-cycles: every round collects the best cycle rooted
// at each column, keeps a vertex-disjoint subset greedily by gain and
// applies it.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "awpm/errors.hpp"
#include "awpm/graph.hpp"

namespace awpm {

inline constexpr std::size_t kDefaultMaxIter = 20;

/// Work done by find_best_cycle.
struct CycleSearchCounters {
  std::size_t neighbors_scanned = 0;
  std::size_t edge_lookups = 0;
  std::size_t lookup_probes = 0;
};

/// Best positive-gain cycle rooted at column j (ties: lowest row i).
inline std::optional<Cycle4> find_best_cycle(const BipartiteGraph& G, const Matching& M, vertex_t j,
                                             CycleSearchCounters* counters = nullptr) {
  const vertex_t mj = M.mate_of_col(j);
  if (mj == kNone) throw NotPerfect();
  const double w_mjj = M.col_weight(j);
  auto rows = G.col_rows(j);
  auto ws = G.col_weights(j);

  std::optional<Cycle4> best;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const vertex_t i = rows[k];
    if (i == mj) continue;
    if (counters) ++counters->neighbors_scanned;
    const vertex_t mi = M.mate_of_row(i);
    if (mi == kNone) throw NotPerfect();
    if (counters) ++counters->edge_lookups;
    auto w_mjmi = G.weight(mj, mi, counters ? &counters->lookup_probes : nullptr);
    if (!w_mjmi) continue;
    double gain = cycle_gain(ws[k], *w_mjmi, M.row_weight(i), w_mjj);
    if (gain > 0.0 && (!best || gain > best->gain)) best = Cycle4{i, j, mj, mi, ws[k], *w_mjmi, gain};
  }
  return best;
}

struct AwacStats {
  std::size_t iterations = 0;      // iterations that applied at least one cycle
  std::size_t cycles_applied = 0;
  double total_gain = 0.0;
  bool converged = false;          // stopped because no augmenting 4-cycle was left
  std::vector<std::size_t> cycles_per_iteration;
  std::vector<double> gain_per_iteration;
};

/// Keeps cycles in descending gain (ties: lower root column) whose four
/// vertices are untouched by cycles kept before them.
inline std::vector<Cycle4> greedy_disjoint(std::vector<Cycle4> candidates, std::size_t n) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const Cycle4& a, const Cycle4& b) {
    return a.gain != b.gain ? a.gain > b.gain : a.j < b.j;
  });
  std::vector<char> row_used(n, 0), col_used(n, 0);
  std::vector<Cycle4> kept;
  for (const auto& c : candidates) {
    if (row_used[c.i] || row_used[c.mj] || col_used[c.j] || col_used[c.mi]) continue;
    row_used[c.i] = row_used[c.mj] = 1;
    col_used[c.j] = col_used[c.mi] = 1;
    kept.push_back(c);
  }
  return kept;
}

inline std::pair<Matching, AwacStats> awac_sequential(const BipartiteGraph& G, Matching M,
                                                      std::size_t maxiter = kDefaultMaxIter) {
  if (M.n() != G.n() || !M.is_perfect()) throw NotPerfect();
  AwacStats stats;
  std::vector<Cycle4> candidates;
  for (std::size_t iter = 0; iter < maxiter; ++iter) {
    candidates.clear();
    for (vertex_t j = 0; j < G.n(); ++j)
      if (auto c = find_best_cycle(G, M, j)) candidates.push_back(*c);
    if (candidates.empty()) {
      stats.converged = true;
      break;
    }
    auto kept = greedy_disjoint(std::move(candidates), G.n());
    candidates = {};
    double gain = 0.0;
    for (const auto& c : kept) {
      augment_in_place(M, c);
      gain += c.gain;
    }
    ++stats.iterations;
    stats.cycles_applied += kept.size();
    stats.total_gain += gain;
    stats.cycles_per_iteration.push_back(kept.size());
    stats.gain_per_iteration.push_back(gain);
  }
  return {std::move(M), std::move(stats)};
}

}  // namespace awpm

#endif  // AWPM_AWAC_SEQ_HPP
