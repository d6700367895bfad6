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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "awpm/pipeline.hpp"
#include "support.hpp"

namespace awpm {
namespace {

namespace fs = std::filesystem;

const fs::path kSamples = AWPM_SAMPLES_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("awpm_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_matrix(const fs::path& dir, const std::string& name, const SparseMatrix& A) {
  auto path = dir / name;
  std::ofstream out(path);
  write_matrix_market(out, A);
  return path;
}

PipelineConfig config_for(const fs::path& input) {
  PipelineConfig cfg;
  cfg.input = input;
  return cfg;
}

TEST(RunPipeline, TwoByTwoSequentialWithOracle) {
  auto cfg = config_for(kSamples / "two_by_two.mtx");
  cfg.oracle = OracleMode::On;
  auto result = run_pipeline(cfg);
  const auto& r = result.report;
  EXPECT_EQ(result.matching.mate_of_col(0), 1u);
  EXPECT_EQ(result.matching.mate_of_col(1), 0u);
  // Equilibrated weights of the anti-diagonal are both 1; unscaled they are 3 + 2.
  EXPECT_DOUBLE_EQ(r.final_weight, 2.0);
  EXPECT_DOUBLE_EQ(r.original_weight, 5.0);
  ASSERT_TRUE(r.approx_ratio);
  EXPECT_DOUBLE_EQ(*r.approx_ratio, 1.0);
  EXPECT_TRUE(r.oracle_ran);
  EXPECT_EQ(r.cardinality, 2u);
}

TEST(RunPipeline, SingularFailsInMaximumCardinality) {
  try {
    run_pipeline(config_for(kSamples / "singular.mtx"));
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.phase(), "maximum_cardinality");
    EXPECT_EQ(e.exit_code(), 2);
  }
}

TEST(RunPipeline, ErrorsNameTheirPhase) {
  auto dir = scratch("errors");
  {
    std::ofstream(dir / "bad.mtx") << "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 q 1\n";
  }
  try {
    run_pipeline(config_for(dir / "bad.mtx"));
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.phase(), "load");
    EXPECT_EQ(e.exit_code(), 3);
  }
  auto empty_col = write_matrix(dir, "empty.mtx", make_sparse_matrix(2, 2, {{0, 0, 1.0}, {1, 0, 1.0}}));
  try {
    run_pipeline(config_for(empty_col));
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.phase(), "equilibrate");
    EXPECT_EQ(e.exit_code(), 2);
  }
  auto cfg = config_for(kSamples / "two_by_two.mtx");
  cfg.engine = Engine::Grid;
  cfg.grid_dim = 3;
  try {
    run_pipeline(cfg);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.phase(), "awac");
    EXPECT_EQ(e.exit_code(), 4);
  }
}

TEST(RunPipeline, GridOnOneProcessMatchesSequential) {
  auto seq = run_pipeline(config_for(kSamples / "two_by_two.mtx"));
  auto cfg = config_for(kSamples / "two_by_two.mtx");
  cfg.engine = Engine::Grid;
  auto grid = run_pipeline(cfg);
  EXPECT_EQ(grid.report.final_weight, seq.report.final_weight);
  EXPECT_EQ(grid.report.per_round.size(), grid.report.rounds);
}

TEST(RunPipeline, LogProductReportsGapAndSumRatio) {
  testing::Rng rng(5);
  auto dir = scratch("log");
  auto path = write_matrix(dir, "m.mtx", testing::random_sparse_matrix(30, 0.15, true, rng));
  auto cfg = config_for(path);
  cfg.metric = WeightMetric::LogProduct;
  auto r = run_pipeline(cfg).report;
  ASSERT_TRUE(r.weight_gap);
  EXPECT_GE(*r.weight_gap, -1e-9);
  ASSERT_TRUE(r.approx_ratio);
  EXPECT_LE(*r.approx_ratio, 1.0 + 1e-9);
  EXPECT_LE(r.final_weight, 1e-12);  // logs of values in (0, 1]
}

TEST(RunPipeline, ReportInvariantsOnRandomInputs) {
  testing::Rng rng(6);
  auto dir = scratch("invariants");
  for (int trial = 0; trial < 20; ++trial) {
    auto path = write_matrix(dir, "m.mtx", testing::random_sparse_matrix(40, 0.1, true, rng));
    for (auto engine : {Engine::Seq, Engine::Grid}) {
      auto cfg = config_for(path);
      cfg.engine = engine;
      cfg.grid_dim = 3;
      cfg.seed = static_cast<std::uint64_t>(trial);
      auto result = run_pipeline(cfg);
      const auto& r = result.report;
      EXPECT_GE(r.final_weight, r.initial_weight);
      ASSERT_TRUE(r.approx_ratio);
      EXPECT_LE(*r.approx_ratio, 1.0 + 1e-9);
      std::vector<char> seen(r.n, 0);
      for (vertex_t j = 0; j < r.n; ++j) {
        vertex_t i = result.matching.mate_of_col(j);
        ASSERT_LT(i, r.n);
        EXPECT_FALSE(seen[i]);
        seen[i] = 1;
      }
    }
  }
}

TEST(RunPipeline, OracleModes) {
  auto cfg = config_for(kSamples / "two_by_two.mtx");
  cfg.oracle = OracleMode::Off;
  EXPECT_FALSE(run_pipeline(cfg).report.approx_ratio);
  cfg.oracle = OracleMode::Auto;
  cfg.oracle_threshold = 1;
  EXPECT_FALSE(run_pipeline(cfg).report.oracle_ran);
  cfg.oracle_threshold = 2;
  EXPECT_TRUE(run_pipeline(cfg).report.oracle_ran);
}

TEST(EmitArtifacts, FilesAndSchema) {
  auto dir = scratch("emit");
  auto cfg = config_for(kSamples / "two_by_two.mtx");
  auto result = run_pipeline(cfg);
  auto paths = emit_artifacts(result.report, result.matching, result.scaling, dir / "out");
  EXPECT_EQ(slurp(paths.permutation), "2\n1\n");
  std::ifstream rs(paths.row_scaling);
  EXPECT_EQ(read_scaling_vector(rs), result.scaling.row_scale);
  auto report = nlohmann::json::parse(slurp(paths.report));
  EXPECT_TRUE(report.contains("approx_ratio"));
  EXPECT_EQ(report["final_weight"].get<double>(), result.report.final_weight);

  cfg.oracle = OracleMode::Off;
  auto no_oracle = run_pipeline(cfg);
  auto p2 = emit_artifacts(no_oracle.report, no_oracle.matching, no_oracle.scaling, dir / "off");
  auto report2 = nlohmann::json::parse(slurp(p2.report));
  EXPECT_FALSE(report2.contains("approx_ratio"));
  EXPECT_FALSE(report2["oracle_ran"].get<bool>());
}

TEST(EmitArtifacts, DiagonalGivesIdentityPermutation) {
  auto dir = scratch("identity");
  auto path = write_matrix(dir, "d.mtx",
                           make_sparse_matrix(4, 4, {{0, 0, 2.0}, {1, 1, 3.0}, {2, 2, 1.0}, {3, 3, 9.0}}));
  auto result = run_pipeline(config_for(path));
  auto paths = emit_artifacts(result.report, result.matching, result.scaling, dir / "out");
  EXPECT_EQ(slurp(paths.permutation), "1\n2\n3\n4\n");
}

TEST(EmitArtifacts, ReproducibleExceptTimings) {
  testing::Rng rng(8);
  auto dir = scratch("repro");
  auto path = write_matrix(dir, "m.mtx", testing::random_sparse_matrix(50, 0.08, true, rng));
  auto cfg = config_for(path);
  cfg.engine = Engine::Grid;
  cfg.grid_dim = 2;
  cfg.seed = 42;
  std::string dumps[2];
  for (int run = 0; run < 2; ++run) {
    cfg.workers = run == 0 ? 1 : 4;
    auto result = run_pipeline(cfg);
    auto paths = emit_artifacts(result.report, result.matching, result.scaling,
                                dir / ("out" + std::to_string(run)));
    auto j = nlohmann::ordered_json::parse(slurp(paths.report));
    j.erase("timings_seconds");
    dumps[run] = j.dump();
  }
  EXPECT_EQ(dumps[0], dumps[1]);
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(AWPM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST(Cli, ExitCodesAndOutputs) {
  auto dir = scratch("cli");
  auto sample = (kSamples / "two_by_two.mtx").string();
  EXPECT_EQ(run_cli("--input " + sample + " --engine grid --grid-dim 2 --metric logproduct --maxiter 5 "
                    "--seed 3 --oracle on --workers 2 --out " + (dir / "out").string()),
            0);
  EXPECT_EQ(slurp(dir / "out" / "permutation.txt"), "2\n1\n");
  EXPECT_TRUE(fs::exists(dir / "out" / "col_scaling.txt"));
  EXPECT_EQ(run_cli("--input " + (kSamples / "singular.mtx").string()), 2);
  {
    std::ofstream(dir / "bad.mtx") << "not a matrix\n";
  }
  EXPECT_EQ(run_cli("--input " + (dir / "bad.mtx").string()), 3);
  EXPECT_EQ(run_cli("--input " + sample + " --engine warp"), 4);
  EXPECT_EQ(run_cli("--engine seq"), 4);
}

}  // namespace
}  // namespace awpm
