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

#ifndef AWPM_PIPELINE_HPP
#define AWPM_PIPELINE_HPP

// End-to-end driver: load -> equilibrate -> metric -> greedy -> maximum
// cardinality -> augmenting cycles -> optional exact comparison, plus the
// files a static-pivoting solver consumes.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "json.hpp"

#include "awpm/awac_dist.hpp"
#include "awpm/awac_seq.hpp"
#include "awpm/errors.hpp"
#include "awpm/graph.hpp"
#include "awpm/matching_init.hpp"
#include "awpm/matrix_io.hpp"
#include "awpm/oracle.hpp"

namespace awpm {

enum class Engine { Seq, Grid };
enum class OracleMode { Auto, On, Off };

inline constexpr std::size_t kDefaultOracleThreshold = 4096;

struct PipelineConfig {
  std::filesystem::path input;
  Engine engine = Engine::Seq;
  std::size_t grid_dim = 1;
  WeightMetric metric = WeightMetric::Sum;
  std::size_t maxiter = kDefaultMaxIter;
  std::uint64_t seed = 0;
  OracleMode oracle = OracleMode::Auto;
  std::size_t oracle_threshold = kDefaultOracleThreshold;
  std::size_t workers = 1;
};

struct PhaseTiming {
  std::string phase;
  double seconds = 0.0;
};

struct Report {
  std::string input;
  std::size_t n = 0;
  std::size_t nnz = 0;
  WeightMetric metric = WeightMetric::Sum;
  Engine engine = Engine::Seq;
  std::size_t grid_dim = 1;
  std::size_t maxiter = 0;
  std::uint64_t seed = 0;

  std::size_t greedy_cardinality = 0;
  std::size_t cardinality = 0;
  double initial_weight = 0.0;  // perfect matching before augmenting cycles
  double final_weight = 0.0;
  double original_weight = 0.0;  // sum of |a_ij| over the final matching, unscaled

  std::size_t iterations = 0;
  std::size_t rounds = 0;  // grid engine only
  std::size_t cycles_applied = 0;
  double total_gain = 0.0;
  bool converged = false;
  std::vector<RoundStats> per_round;

  bool oracle_ran = false;
  std::optional<double> optimal_weight;
  std::optional<double> approx_ratio;  // on Sum weights of the equilibrated matrix
  std::optional<double> weight_gap;    // LogProduct only: optimum minus final

  std::vector<PhaseTiming> timings;
};

struct PipelineResult {
  Report report;
  Matching matching;
  Scaling scaling;
};

/// A module error tagged with the phase that raised it.
class PipelineError : public Error {
 public:
  PipelineError(std::string phase, int exit_code, const std::string& what)
      : Error(phase + ": " + what), phase_(std::move(phase)), exit_code_(exit_code) {}
  const std::string& phase() const noexcept { return phase_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string phase_;
  int exit_code_;
};

/// 0 success, 2 structural singularity, 3 parse error, 4 config error, 1 other.
inline int exit_code_for(const std::exception& e) {
  if (auto* pe = dynamic_cast<const PipelineError*>(&e)) return pe->exit_code();
  if (dynamic_cast<const StructurallySingular*>(&e) || dynamic_cast<const EmptyRowOrColumn*>(&e) ||
      dynamic_cast<const NoPerfectMatching*>(&e))
    return 2;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const DuplicateEntry*>(&e) ||
      dynamic_cast<const UnsupportedFormat*>(&e))
    return 3;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const GridTooLarge*>(&e) ||
      dynamic_cast<const DimensionMismatch*>(&e))
    return 4;
  return 1;
}

inline const char* to_string(Engine e) { return e == Engine::Seq ? "seq" : "grid"; }
inline const char* to_string(OracleMode m) {
  return m == OracleMode::Auto ? "auto" : m == OracleMode::On ? "on" : "off";
}

namespace detail {

class PhaseRunner {
 public:
  explicit PhaseRunner(std::vector<PhaseTiming>& timings) : timings_(timings) {}

  template <class F>
  auto operator()(const std::string& phase, F&& f) -> decltype(f()) {
    auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        record(phase, start);
      } else {
        auto out = f();
        record(phase, start);
        return out;
      }
    } catch (const PipelineError&) {
      throw;
    } catch (const Error& e) {
      throw PipelineError(phase, exit_code_for(e), e.what());
    }
  }

 private:
  void record(const std::string& phase, std::chrono::steady_clock::time_point start) {
    std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
    timings_.push_back({phase, d.count()});
  }
  std::vector<PhaseTiming>& timings_;
};

}  // namespace detail

/// Runs every phase after loading on an in-memory matrix.
inline PipelineResult run_pipeline_on_matrix(const SparseMatrix& A, const PipelineConfig& cfg,
                                             std::vector<PhaseTiming> timings = {}) {
  if (cfg.engine == Engine::Grid && cfg.grid_dim == 0)
    throw PipelineError("config", 4, "grid dimension must be at least 1");
  if (cfg.workers == 0) throw PipelineError("config", 4, "worker count must be at least 1");

  PipelineResult out;
  Report& r = out.report;
  r.input = cfg.input.string();
  r.n = A.n_rows;
  r.nnz = A.nnz();
  r.metric = cfg.metric;
  r.engine = cfg.engine;
  r.grid_dim = cfg.engine == Engine::Grid ? cfg.grid_dim : 1;
  r.maxiter = cfg.maxiter;
  r.seed = cfg.seed;
  r.timings = std::move(timings);
  detail::PhaseRunner phase(r.timings);

  if (A.n_rows != A.n_cols)
    throw PipelineError("load", 4, "matrix must be square, got " + std::to_string(A.n_rows) + "x" +
                                       std::to_string(A.n_cols));

  auto [B, scaling] = phase("equilibrate", [&] { return equilibrate(A); });
  out.scaling = std::move(scaling);
  BipartiteGraph G = phase("metric", [&] { return BipartiteGraph(apply_metric(B, cfg.metric)); });

  Matching M = phase("greedy_maximal", [&] { return greedy_maximal(G); });
  r.greedy_cardinality = M.cardinality();
  M = phase("maximum_cardinality", [&] { return maximum_cardinality(G, std::move(M)); });
  r.cardinality = M.cardinality();
  r.initial_weight = matching_weight(G, M);

  if (cfg.engine == Engine::Seq) {
    auto [final_matching, stats] =
        phase("awac", [&] { return awac_sequential(G, std::move(M), cfg.maxiter); });
    M = std::move(final_matching);
    r.iterations = stats.iterations;
    r.cycles_applied = stats.cycles_applied;
    r.total_gain = stats.total_gain;
    r.converged = stats.converged;
  } else {
    DistOptions opt{cfg.grid_dim, cfg.maxiter, cfg.seed, true, cfg.workers};
    auto [final_matching, stats] = phase("awac", [&] { return awac_distributed(G, M, opt); });
    M = std::move(final_matching);
    r.iterations = stats.iterations;
    r.rounds = stats.rounds;
    r.cycles_applied = stats.cycles_applied;
    r.total_gain = stats.total_gain;
    r.converged = stats.converged;
    r.per_round = std::move(stats.per_round);
  }
  r.final_weight = matching_weight(G, M);
  for (const auto& e : A.entries)
    if (M.mate_of_col(e.col) == e.row) r.original_weight += std::abs(e.value);

  bool run_oracle = cfg.oracle == OracleMode::On ||
                    (cfg.oracle == OracleMode::Auto && r.n <= cfg.oracle_threshold);
  if (run_oracle) {
    phase("oracle", [&] {
      auto exact = exact_mwpm(G);
      r.optimal_weight = exact.weight;
      if (cfg.metric == WeightMetric::Sum) {
        r.approx_ratio = approximation_ratio(G, M, exact.weight);
      } else {
        r.weight_gap = exact.weight - r.final_weight;
        BipartiteGraph sum_graph(B);
        Matching sum_matching(M.n());
        for (vertex_t i = 0; i < M.n(); ++i)
          sum_matching.match(i, M.mate_of_row(i), *sum_graph.weight(i, M.mate_of_row(i)));
        r.approx_ratio = approximation_ratio(sum_graph, sum_matching, exact_mwpm(sum_graph).weight);
      }
    });
    r.oracle_ran = true;
  }
  out.matching = std::move(M);
  return out;
}

inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
  std::vector<PhaseTiming> timings;
  detail::PhaseRunner phase(timings);
  SparseMatrix A = phase("load", [&] { return load_matrix_market(cfg.input); });
  return run_pipeline_on_matrix(A, cfg, std::move(timings));
}

/// Report as JSON. Everything except "timings_seconds" is a deterministic
/// function of the input and the configuration.
inline nlohmann::ordered_json report_to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["input"] = r.input;
  j["n"] = r.n;
  j["nnz"] = r.nnz;
  j["metric"] = to_string(r.metric);
  j["engine"] = to_string(r.engine);
  j["grid_dim"] = r.grid_dim;
  j["maxiter"] = r.maxiter;
  j["seed"] = r.seed;
  j["greedy_cardinality"] = r.greedy_cardinality;
  j["cardinality"] = r.cardinality;
  j["initial_weight"] = r.initial_weight;
  j["final_weight"] = r.final_weight;
  j["original_weight"] = r.original_weight;
  j["iterations"] = r.iterations;
  j["cycles_applied"] = r.cycles_applied;
  j["total_gain"] = r.total_gain;
  j["converged"] = r.converged;
  if (r.engine == Engine::Grid) {
    j["rounds"] = r.rounds;
    auto rounds = nlohmann::ordered_json::array();
    for (const auto& rs : r.per_round) {
      nlohmann::ordered_json x;
      x["a_requests"] = rs.a.messages;
      x["b_requests"] = rs.b.messages;
      x["c_requests"] = rs.c.messages;
      x["d_updates"] = rs.d.updates.messages;
      x["remote_messages"] = rs.a.remote + rs.b.remote + rs.c.remote + rs.d.updates.remote;
      x["cycles_applied"] = rs.d.cycles_applied;
      x["discarded"] = rs.d.discarded;
      x["gain"] = rs.d.gain;
      x["weight_after"] = rs.weight_after;
      x["found_but_unapplied"] = rs.found_but_unapplied;
      rounds.push_back(std::move(x));
    }
    j["per_round"] = std::move(rounds);
  }
  j["oracle_ran"] = r.oracle_ran;
  if (r.optimal_weight) j["optimal_weight"] = *r.optimal_weight;
  if (r.approx_ratio) j["approx_ratio"] = *r.approx_ratio;
  if (r.weight_gap) j["weight_gap"] = *r.weight_gap;
  nlohmann::ordered_json t;
  for (const auto& pt : r.timings) t[pt.phase] = pt.seconds;
  j["timings_seconds"] = std::move(t);
  return j;
}

struct ArtifactPaths {
  std::filesystem::path permutation, row_scaling, col_scaling, report;
};

/// Writes permutation.txt, row_scaling.txt, col_scaling.txt and report.json.
inline ArtifactPaths emit_artifacts(const Report& report, const Matching& M, const Scaling& scaling,
                                    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw PipelineError("emit", 1, "cannot create '" + out_dir.string() + "': " + ec.message());

  ArtifactPaths paths{out_dir / "permutation.txt", out_dir / "row_scaling.txt",
                      out_dir / "col_scaling.txt", out_dir / "report.json"};
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw PipelineError("emit", 1, "cannot write '" + p.string() + "'");
    return f;
  };
  {
    auto f = open(paths.permutation);
    write_permutation(f, M);
  }
  {
    auto f = open(paths.row_scaling);
    write_scaling_vector(f, scaling.row_scale, "row scaling, one factor per row");
  }
  {
    auto f = open(paths.col_scaling);
    write_scaling_vector(f, scaling.col_scale, "column scaling, one factor per column");
  }
  {
    auto f = open(paths.report);
    f << report_to_json(report).dump(2) << '\n';
  }
  return paths;
}

}  // namespace awpm

#endif  // AWPM_PIPELINE_HPP
