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

// awpm: approximate-weight perfect matching for static pivoting.

#include <cstdint>
#include <exception>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "awpm/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Approximate-weight perfect matching of a sparse matrix"};
  awpm::PipelineConfig cfg;
  std::string input, out_dir;
  std::uint64_t seed = 0;

  const std::map<std::string, awpm::Engine> engines{{"seq", awpm::Engine::Seq},
                                                    {"grid", awpm::Engine::Grid}};
  const std::map<std::string, awpm::WeightMetric> metrics{
      {"sum", awpm::WeightMetric::Sum}, {"logproduct", awpm::WeightMetric::LogProduct}};
  const std::map<std::string, awpm::OracleMode> oracles{
      {"auto", awpm::OracleMode::Auto}, {"on", awpm::OracleMode::On}, {"off", awpm::OracleMode::Off}};

  app.add_option("--input", input, "Matrix Market file")->required();
  app.add_option("--engine", cfg.engine, "seq or grid")
      ->transform(CLI::CheckedTransformer(engines, CLI::ignore_case));
  app.add_option("--grid-dim", cfg.grid_dim, "process grid dimension q (p = q*q)")
      ->check(CLI::PositiveNumber);
  app.add_option("--metric", cfg.metric, "sum or logproduct")
      ->transform(CLI::CheckedTransformer(metrics, CLI::ignore_case));
  app.add_option("--maxiter", cfg.maxiter, "maximum augmenting-cycle iterations")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "seed of the row permutation (grid engine)");
  app.add_option("--oracle", cfg.oracle, "auto, on or off")
      ->transform(CLI::CheckedTransformer(oracles, CLI::ignore_case));
  app.add_option("--oracle-threshold", cfg.oracle_threshold, "largest n for --oracle auto");
  app.add_option("--out", out_dir, "directory for permutation, scalings and report");
  app.add_option("--workers", cfg.workers, "worker threads of the grid engine")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;
  }
  cfg.input = input;
  cfg.seed = seed;

  try {
    auto result = awpm::run_pipeline(cfg);
    const auto& r = result.report;
    std::cout << std::setprecision(17);
    std::cout << "n " << r.n << " nnz " << r.nnz << " metric " << awpm::to_string(r.metric)
              << " engine " << awpm::to_string(r.engine) << '\n';
    std::cout << "initial_weight " << r.initial_weight << '\n';
    std::cout << "final_weight " << r.final_weight << '\n';
    std::cout << "cycles_applied " << r.cycles_applied << " iterations " << r.iterations
              << (r.converged ? " converged" : "") << '\n';
    if (r.approx_ratio) std::cout << "approx_ratio " << *r.approx_ratio << '\n';
    if (r.weight_gap) std::cout << "weight_gap " << *r.weight_gap << '\n';
    if (!out_dir.empty()) awpm::emit_artifacts(r, result.matching, result.scaling, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "awpm: " << e.what() << '\n';
    return awpm::exit_code_for(e);
  }
  return 0;
}
