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

#ifndef AWPM_AWAC_DIST_HPP
#define AWPM_AWAC_DIST_HPP

// Bulk-synchronous simulation of the augmenting 4-cycles protocol on a q x q
// process grid.
//
// The matrix is split into q x q blocks; process (a, b) owns the edges whose
// row lies in row block a and whose column lies in column block b. Every
// process keeps the mate and matched weight of each of its rows and columns
// (replicated along grid rows and grid columns). One round is:
//
//   A  for local edge {i, j} with i > m_j, ask the owner of {m_j, m_i}
//      whether the cycle closes, sending w(i, j).
//   B  the owner of {m_j, m_i} computes the gain and, if positive, forwards
//      the cycle to the owner of the matched edge {m_j, j}.
//   C  the owner of {m_j, j} keeps the best cycle per edge and forwards it
//      to the owner of the matched edge {i, m_i}, remembering that it did.
//   D  the owner of {i, m_i} drops every request for an edge it already
//      claimed in C, otherwise applies the best one and broadcasts the four
//      mate changes along the affected grid rows and grid columns.
//
// Each step runs all processes' compute phases (optionally on a worker
// pool), then delivers all messages in process order. Every selection is a
// maximum under (gain desc, i asc, j asc), so the outcome does not depend on
// message order, worker count or grid shape.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "awpm/awac_seq.hpp"
#include "awpm/errors.hpp"
#include "awpm/graph.hpp"

namespace awpm {

/// Contiguous near-equal blocks of [0, n): the first n % q blocks hold one
/// extra element.
struct BlockPartition {
  std::size_t n = 0;
  std::size_t q = 1;

  std::size_t begin(std::size_t block) const {
    std::size_t base = n / q, extra = n % q;
    return block * base + std::min(block, extra);
  }
  std::size_t end(std::size_t block) const { return begin(block + 1); }
  std::size_t block_of(std::size_t position) const {
    std::size_t base = n / q, extra = n % q;
    std::size_t cut = extra * (base + 1);
    return position < cut ? position / (base + 1) : extra + (position - cut) / base;
  }
};

/// Maps vertices to grid rows/columns and local slots.
struct GridLayout {
  std::size_t n = 0;
  std::size_t q = 1;
  std::uint64_t seed = 0;
  bool rows_permuted = false;
  std::vector<vertex_t> row_position;  // permuted position of each row
  std::vector<std::uint32_t> row_block, col_block;
  std::vector<std::uint32_t> row_slot, col_slot;
  std::vector<std::vector<vertex_t>> block_rows, block_cols;  // by slot

  std::size_t process(std::size_t a, std::size_t b) const { return a * q + b; }
  /// Process owning the matrix cell (row, col).
  std::size_t owner(vertex_t row, vertex_t col) const {
    return process(row_block[row], col_block[col]);
  }
};

struct ARequest {
  vertex_t mj;
  vertex_t mi;
  double w_ij;
};

/// Cycle completion (B) and local comparison (C) requests carry the whole cycle.
using BRequest = Cycle4;
using CRequest = Cycle4;

/// New mate and matched weight of one vertex.
struct MateUpdate {
  bool is_row;
  vertex_t vertex;
  vertex_t mate;
  double weight;
};

template <class Msg>
struct Envelope {
  std::size_t src;
  std::size_t dst;
  Msg msg;
};

struct SimProcess {
  std::size_t a = 0, b = 0;

  // Local block, column-major; rows within a column sorted by global id.
  std::vector<std::size_t> col_ptr;
  std::vector<vertex_t> adj_rows;
  std::vector<double> adj_w;

  // Replicated matching slices, indexed by local slot.
  std::vector<vertex_t> row_mate;
  std::vector<double> row_w;
  std::vector<vertex_t> col_mate;
  std::vector<double> col_w;

  std::vector<Envelope<ARequest>> inbox_a;
  std::vector<Envelope<BRequest>> inbox_b;
  std::vector<Envelope<CRequest>> inbox_c;
  std::vector<Envelope<MateUpdate>> inbox_d;

  // Filled by the compute phase, drained by delivery.
  std::vector<Envelope<ARequest>> out_a;
  std::vector<Envelope<BRequest>> out_b;
  std::vector<Envelope<CRequest>> out_c;
  std::vector<Envelope<MateUpdate>> out_d;

  /// Row slots whose matched edge was claimed by a C-request this round.
  std::vector<char> c_sent;
  /// Cycles this process applied in the current Step D.
  std::vector<Cycle4> applied;
  std::size_t discarded_in_d = 0;

  /// Weight of local edge (row, col) when present; both must be local.
  const double* find_edge(const GridLayout& L, vertex_t row, vertex_t col) const {
    std::size_t s = L.col_slot[col];
    auto first = adj_rows.begin() + static_cast<std::ptrdiff_t>(col_ptr[s]);
    auto last = adj_rows.begin() + static_cast<std::ptrdiff_t>(col_ptr[s + 1]);
    auto it = std::lower_bound(first, last, row);
    if (it == last || *it != row) return nullptr;
    return &adj_w[static_cast<std::size_t>(it - adj_rows.begin())];
  }
};

struct ProcessGrid {
  GridLayout layout;
  std::vector<SimProcess> processes;  // row-major over the grid
  std::size_t workers = 1;

  std::size_t q() const noexcept { return layout.q; }
  std::size_t size() const noexcept { return processes.size(); }
  SimProcess& at(std::size_t a, std::size_t b) { return processes[layout.process(a, b)]; }
  const SimProcess& at(std::size_t a, std::size_t b) const { return processes[layout.process(a, b)]; }
};

struct StepCounts {
  std::size_t messages = 0;
  std::size_t remote = 0;  // messages whose source and destination differ
};

struct StepDResult {
  std::size_t cycles_applied = 0;
  double gain = 0.0;
  std::size_t discarded = 0;  // C-requests dropped for a claimed edge
  StepCounts updates;
};

struct RoundStats {
  StepCounts a, b, c;
  StepDResult d;
  double weight_after = 0.0;
  bool slices_consistent = true;
  bool found_but_unapplied = false;
};

struct DistStats {
  std::size_t q = 1;
  std::uint64_t seed = 0;
  bool rows_permuted = false;
  std::size_t rounds = 0;
  std::size_t iterations = 0;  // rounds that applied at least one cycle
  std::size_t cycles_applied = 0;
  double total_gain = 0.0;
  bool converged = false;
  std::vector<RoundStats> per_round;
};

struct DistOptions {
  std::size_t q = 1;
  std::size_t maxiter = kDefaultMaxIter;
  std::uint64_t seed = 0;
  bool permute_rows = true;
  std::size_t workers = 1;
};

namespace detail {

/// Fisher-Yates driven by mt19937_64 so that the permutation is the same on
/// every standard library.
inline std::vector<vertex_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<vertex_t> perm(n);
  for (std::size_t k = 0; k < n; ++k) perm[k] = static_cast<vertex_t>(k);
  std::mt19937_64 rng(seed);
  for (std::size_t k = n; k > 1; --k) {
    std::size_t r = static_cast<std::size_t>(rng() % k);
    std::swap(perm[k - 1], perm[r]);
  }
  return perm;
}

template <class F>
void for_each_process(std::size_t count, std::size_t workers, F&& f) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) f(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(workers, count); ++t)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < count;) {
          try {
            f(k);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

template <class Msg>
StepCounts deliver(ProcessGrid& grid, std::vector<Envelope<Msg>> SimProcess::*outbox,
                   std::vector<Envelope<Msg>> SimProcess::*inbox) {
  StepCounts counts;
  for (auto& p : grid.processes) {
    for (auto& env : p.*outbox) {
      ++counts.messages;
      if (env.src != env.dst) ++counts.remote;
      (grid.processes[env.dst].*inbox).push_back(env);
    }
    (p.*outbox).clear();
  }
  return counts;
}

/// Order on competing cycles: larger gain, then lower i, then lower j.
inline bool preferred(const Cycle4& x, const Cycle4& y) {
  if (x.gain != y.gain) return x.gain > y.gain;
  if (x.i != y.i) return x.i < y.i;
  return x.j < y.j;
}

// Best request per key slot, in ascending slot order.
template <class KeyFn>
std::vector<const Cycle4*> best_per_slot(const std::vector<Envelope<Cycle4>>& inbox,
                                         std::size_t slots, KeyFn key) {
  std::vector<const Cycle4*> best(slots, nullptr);
  for (const auto& env : inbox) {
    auto& slot = best[key(env.msg)];
    if (!slot || preferred(env.msg, *slot)) slot = &env.msg;
  }
  return best;
}

}  // namespace detail

/// Splits G into a q x q grid, optionally permuting rows first, and scatters
/// M into the replicated slices.
inline ProcessGrid partition(const BipartiteGraph& G, const Matching& M, std::size_t q,
                             std::uint64_t seed = 0, bool permute_rows = true) {
  const std::size_t n = G.n();
  if (q == 0) throw ConfigError("grid dimension must be at least 1");
  if (q > n) throw GridTooLarge(q, n);
  if (M.n() != n || !M.is_perfect()) throw NotPerfect();

  ProcessGrid grid;
  GridLayout& L = grid.layout;
  L.n = n;
  L.q = q;
  L.seed = seed;
  L.rows_permuted = permute_rows;
  if (permute_rows) {
    L.row_position = detail::seeded_permutation(n, seed);
  } else {
    L.row_position.resize(n);
    for (std::size_t i = 0; i < n; ++i) L.row_position[i] = static_cast<vertex_t>(i);
  }

  BlockPartition blocks{n, q};
  L.row_block.resize(n);
  L.col_block.resize(n);
  L.row_slot.resize(n);
  L.col_slot.resize(n);
  L.block_rows.assign(q, {});
  L.block_cols.assign(q, {});
  std::vector<vertex_t> row_at(n);
  for (vertex_t i = 0; i < n; ++i) row_at[L.row_position[i]] = i;
  for (std::size_t pos = 0; pos < n; ++pos) {
    auto blk = static_cast<std::uint32_t>(blocks.block_of(pos));
    vertex_t i = row_at[pos];
    L.row_block[i] = blk;
    L.row_slot[i] = static_cast<std::uint32_t>(L.block_rows[blk].size());
    L.block_rows[blk].push_back(i);

    auto j = static_cast<vertex_t>(pos);
    L.col_block[j] = blk;
    L.col_slot[j] = static_cast<std::uint32_t>(L.block_cols[blk].size());
    L.block_cols[blk].push_back(j);
  }

  grid.processes.resize(q * q);
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      SimProcess& p = grid.at(a, b);
      p.a = a;
      p.b = b;
      const auto& rows = L.block_rows[a];
      const auto& cols = L.block_cols[b];
      p.row_mate.resize(rows.size());
      p.row_w.resize(rows.size());
      for (std::size_t s = 0; s < rows.size(); ++s) {
        p.row_mate[s] = M.mate_of_row(rows[s]);
        p.row_w[s] = M.row_weight(rows[s]);
      }
      p.col_mate.resize(cols.size());
      p.col_w.resize(cols.size());
      for (std::size_t s = 0; s < cols.size(); ++s) {
        p.col_mate[s] = M.mate_of_col(cols[s]);
        p.col_w[s] = M.col_weight(cols[s]);
      }
      p.c_sent.assign(rows.size(), 0);
      p.col_ptr.assign(cols.size() + 1, 0);
    }
  }

  // Scatter edges; global column order keeps each local column's rows sorted.
  for (vertex_t j = 0; j < n; ++j) {
    auto rows = G.col_rows(j);
    for (vertex_t i : rows) ++grid.processes[L.owner(i, j)].col_ptr[L.col_slot[j] + 1];
  }
  for (auto& p : grid.processes) {
    for (std::size_t s = 1; s < p.col_ptr.size(); ++s) p.col_ptr[s] += p.col_ptr[s - 1];
    p.adj_rows.resize(p.col_ptr.back());
    p.adj_w.resize(p.col_ptr.back());
  }
  std::vector<std::size_t> fill;
  for (vertex_t j = 0; j < n; ++j) {
    auto rows = G.col_rows(j);
    auto ws = G.col_weights(j);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      SimProcess& p = grid.processes[L.owner(rows[k], j)];
      // Next free position in this column: col_ptr[slot] is advanced while
      // filling and restored below.
      std::size_t& cursor = p.col_ptr[L.col_slot[j]];
      p.adj_rows[cursor] = rows[k];
      p.adj_w[cursor] = ws[k];
      ++cursor;
    }
  }
  for (auto& p : grid.processes) {
    for (std::size_t s = p.col_ptr.size() - 1; s > 0; --s) p.col_ptr[s] = p.col_ptr[s - 1];
    p.col_ptr[0] = 0;
  }
  return grid;
}

/// Step A: cycle requests.
inline StepCounts step_a(ProcessGrid& grid) {
  const GridLayout& L = grid.layout;
  detail::for_each_process(grid.size(), grid.workers, [&](std::size_t pid) {
    SimProcess& p = grid.processes[pid];
    const auto& cols = L.block_cols[p.b];
    for (std::size_t s = 0; s < cols.size(); ++s) {
      const vertex_t mj = p.col_mate[s];
      auto first = p.adj_rows.begin() + static_cast<std::ptrdiff_t>(p.col_ptr[s]);
      auto last = p.adj_rows.begin() + static_cast<std::ptrdiff_t>(p.col_ptr[s + 1]);
      for (auto it = std::upper_bound(first, last, mj); it != last; ++it) {
        const vertex_t i = *it;
        const vertex_t mi = p.row_mate[L.row_slot[i]];
        const double w_ij = p.adj_w[static_cast<std::size_t>(it - p.adj_rows.begin())];
        p.out_a.push_back({pid, L.owner(mj, mi), ARequest{mj, mi, w_ij}});
      }
    }
  });
  return detail::deliver(grid, &SimProcess::out_a, &SimProcess::inbox_a);
}

/// Step B: cycle completion and gain test.
inline StepCounts step_b(ProcessGrid& grid) {
  const GridLayout& L = grid.layout;
  detail::for_each_process(grid.size(), grid.workers, [&](std::size_t pid) {
    SimProcess& p = grid.processes[pid];
    for (const auto& env : p.inbox_a) {
      const ARequest& req = env.msg;
      const double* w_mjmi = p.find_edge(L, req.mj, req.mi);
      if (!w_mjmi) continue;
      const std::uint32_t mi_slot = L.col_slot[req.mi];
      const std::uint32_t mj_slot = L.row_slot[req.mj];
      const vertex_t i = p.col_mate[mi_slot];
      const vertex_t j = p.row_mate[mj_slot];
      const double gain = cycle_gain(req.w_ij, *w_mjmi, p.col_w[mi_slot], p.row_w[mj_slot]);
      if (gain > 0.0)
        p.out_b.push_back(
            {pid, L.owner(req.mj, j), Cycle4{i, j, req.mj, req.mi, req.w_ij, *w_mjmi, gain}});
    }
    p.inbox_a.clear();
  });
  return detail::deliver(grid, &SimProcess::out_b, &SimProcess::inbox_b);
}

/// Step C: best cycle per matched edge {m_j, j}.
inline StepCounts step_c(ProcessGrid& grid) {
  const GridLayout& L = grid.layout;
  detail::for_each_process(grid.size(), grid.workers, [&](std::size_t pid) {
    SimProcess& p = grid.processes[pid];
    auto best = detail::best_per_slot(p.inbox_b, p.row_mate.size(),
                                      [&](const Cycle4& c) { return L.row_slot[c.mj]; });
    for (std::size_t s = 0; s < best.size(); ++s) {
      if (!best[s]) continue;
      const Cycle4& c = *best[s];
      p.out_c.push_back({pid, L.owner(c.i, c.mi), c});
      p.c_sent[s] = 1;
    }
    p.inbox_b.clear();
  });
  return detail::deliver(grid, &SimProcess::out_c, &SimProcess::inbox_c);
}

/// Step D: best cycle per matched edge {i, m_i} unless that edge was claimed
/// in Step C; winners are applied and broadcast.
inline StepDResult step_d(ProcessGrid& grid) {
  const GridLayout& L = grid.layout;
  const std::size_t q = L.q;
  detail::for_each_process(grid.size(), grid.workers, [&](std::size_t pid) {
    SimProcess& p = grid.processes[pid];
    p.applied.clear();
    p.discarded_in_d = 0;
    auto best = detail::best_per_slot(p.inbox_c, p.row_mate.size(),
                                      [&](const Cycle4& c) { return L.row_slot[c.i]; });
    for (const auto& env : p.inbox_c)
      if (p.c_sent[L.row_slot[env.msg.i]]) ++p.discarded_in_d;
    for (std::size_t s = 0; s < best.size(); ++s) {
      if (!best[s] || p.c_sent[s]) continue;
      const Cycle4& c = *best[s];
      p.applied.push_back(c);
      auto along_row = [&](vertex_t row, vertex_t mate, double w) {
        for (std::size_t t = 0; t < q; ++t)
          p.out_d.push_back({pid, L.process(L.row_block[row], t), MateUpdate{true, row, mate, w}});
      };
      auto along_col = [&](vertex_t col, vertex_t mate, double w) {
        for (std::size_t t = 0; t < q; ++t)
          p.out_d.push_back({pid, L.process(t, L.col_block[col]), MateUpdate{false, col, mate, w}});
      };
      along_row(c.i, c.j, c.w_ij);
      along_col(c.j, c.i, c.w_ij);
      along_row(c.mj, c.mi, c.w_mjmi);
      along_col(c.mi, c.mj, c.w_mjmi);
    }
    p.inbox_c.clear();
  });

  StepDResult result;
  std::vector<char> row_used(L.n, 0), col_used(L.n, 0);
  for (const auto& p : grid.processes) {
    result.discarded += p.discarded_in_d;
    for (const auto& c : p.applied) {
      if (row_used[c.i] || row_used[c.mj] || col_used[c.j] || col_used[c.mi])
        throw ConflictDetected("cycles applied in one round share a vertex (row " +
                               std::to_string(c.i) + ", column " + std::to_string(c.j) + ")");
      row_used[c.i] = row_used[c.mj] = 1;
      col_used[c.j] = col_used[c.mi] = 1;
      ++result.cycles_applied;
      result.gain += c.gain;
    }
  }

  result.updates = detail::deliver(grid, &SimProcess::out_d, &SimProcess::inbox_d);
  detail::for_each_process(grid.size(), grid.workers, [&](std::size_t pid) {
    SimProcess& p = grid.processes[pid];
    for (const auto& env : p.inbox_d) {
      const MateUpdate& u = env.msg;
      if (u.is_row) {
        p.row_mate[L.row_slot[u.vertex]] = u.mate;
        p.row_w[L.row_slot[u.vertex]] = u.weight;
      } else {
        p.col_mate[L.col_slot[u.vertex]] = u.mate;
        p.col_w[L.col_slot[u.vertex]] = u.weight;
      }
    }
    p.inbox_d.clear();
    std::fill(p.c_sent.begin(), p.c_sent.end(), 0);
  });
  return result;
}

/// Global matching assembled from the slices of grid column 0 and grid row 0.
inline Matching gather(const ProcessGrid& grid) {
  const GridLayout& L = grid.layout;
  Matching M(L.n);
  for (vertex_t i = 0; i < L.n; ++i) {
    const SimProcess& p = grid.at(L.row_block[i], 0);
    M.set_row(i, p.row_mate[L.row_slot[i]], p.row_w[L.row_slot[i]]);
  }
  for (vertex_t j = 0; j < L.n; ++j) {
    const SimProcess& p = grid.at(0, L.col_block[j]);
    M.set_col(j, p.col_mate[L.col_slot[j]], p.col_w[L.col_slot[j]]);
  }
  return M;
}

/// True when every process's slices equal M restricted to its rows and columns.
inline bool slices_consistent(const ProcessGrid& grid, const Matching& M) {
  const GridLayout& L = grid.layout;
  for (const auto& p : grid.processes) {
    const auto& rows = L.block_rows[p.a];
    for (std::size_t s = 0; s < rows.size(); ++s)
      if (p.row_mate[s] != M.mate_of_row(rows[s]) || p.row_w[s] != M.row_weight(rows[s])) return false;
    const auto& cols = L.block_cols[p.b];
    for (std::size_t s = 0; s < cols.size(); ++s)
      if (p.col_mate[s] != M.mate_of_col(cols[s]) || p.col_w[s] != M.col_weight(cols[s])) return false;
  }
  return true;
}

inline bool inboxes_empty(const ProcessGrid& grid) {
  return std::all_of(grid.processes.begin(), grid.processes.end(), [](const SimProcess& p) {
    return p.inbox_a.empty() && p.inbox_b.empty() && p.inbox_c.empty() && p.inbox_d.empty();
  });
}

namespace detail {

// Sum of cached matched weights in row order.
inline double cached_weight(const Matching& M) {
  double total = 0.0;
  for (vertex_t i = 0; i < M.n(); ++i)
    if (M.mate_of_row(i) != kNone) total += M.row_weight(i);
  return total;
}

}  // namespace detail

inline std::pair<Matching, DistStats> awac_distributed(const BipartiteGraph& G, const Matching& M,
                                                       const DistOptions& opt = {}) {
  ProcessGrid grid = partition(G, M, opt.q, opt.seed, opt.permute_rows);
  grid.workers = std::max<std::size_t>(1, opt.workers);

  DistStats stats;
  stats.q = opt.q;
  stats.seed = opt.seed;
  stats.rows_permuted = opt.permute_rows;
  for (std::size_t round = 0; round < opt.maxiter; ++round) {
    RoundStats rs;
    rs.a = step_a(grid);
    rs.b = step_b(grid);
    ++stats.rounds;
    if (rs.b.messages == 0) {
      Matching current = gather(grid);
      rs.weight_after = detail::cached_weight(current);
      rs.slices_consistent = slices_consistent(grid, current);
      stats.per_round.push_back(rs);
      stats.converged = true;
      break;
    }
    rs.c = step_c(grid);
    rs.d = step_d(grid);
    Matching current = gather(grid);
    rs.weight_after = detail::cached_weight(current);
    rs.slices_consistent = slices_consistent(grid, current);
    rs.found_but_unapplied = rs.d.cycles_applied == 0;
    if (rs.d.cycles_applied > 0) ++stats.iterations;
    stats.cycles_applied += rs.d.cycles_applied;
    stats.total_gain += rs.d.gain;
    stats.per_round.push_back(rs);
  }
  return {gather(grid), std::move(stats)};
}

}  // namespace awpm

#endif  // AWPM_AWAC_DIST_HPP
