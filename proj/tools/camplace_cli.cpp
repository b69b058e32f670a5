// Copyright 2026 The camplace Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: ingest, candidates, visibility, solve, evaluate,
// export-lp. Exit codes: 0 success, 1 an infeasible instance, 2 bad input.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "camplace/pipeline.hpp"

namespace {

constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"camplace: camera placement for coverage and triangulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> time_budget;
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--seed", seed, "random seed recorded with the run");
  app.add_option("--threads", threads, "raycasting threads, 0 = all cores");
  app.add_option("--time-budget", time_budget, "per-solve wall-clock limit in seconds");

  auto* ingest = app.add_subcommand("ingest", "voxelize the scene and write the grid");
  auto* candidates = app.add_subcommand("candidates", "generate candidate poses");
  auto* visibility = app.add_subcommand("visibility", "build the visibility matrix");
  auto* solve = app.add_subcommand("solve", "run every configured method and budget");
  auto* evaluate = app.add_subcommand("evaluate", "recompute metrics for a solution file");
  std::string solution_path;
  evaluate->add_option("--solution", solution_path, "solution JSON")->required();
  auto* export_lp = app.add_subcommand("export-lp", "write the MIP in LP format");
  int lp_budget = 0;
  std::string lp_path;
  export_lp->add_option("--budget", lp_budget, "camera budget")->required();
  export_lp->add_option("--output", lp_path, "output .lp path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInputError;
  }

  try {
    camplace::PipelineConfig cfg = camplace::load_pipeline_config(config_path);
    if (out_dir) cfg.out_dir = *out_dir;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (time_budget) {
      for (auto& s : cfg.solvers) s.time_budget = *time_budget;
    }
    cfg.validate();

    if (*ingest) {
      camplace::run_ingest(cfg, std::cerr);
    } else if (*candidates) {
      camplace::run_candidates(cfg, std::cerr);
    } else if (*visibility) {
      camplace::run_visibility(cfg, std::cerr);
    } else if (*solve) {
      const auto rows = camplace::run_solve(cfg, std::cerr);
      for (const auto& r : rows) {
        if (r.report.status == camplace::SolverStatus::kInfeasible) return kExitInfeasible;
      }
    } else if (*evaluate) {
      camplace::run_evaluate(cfg, solution_path, std::cerr);
    } else if (*export_lp) {
      camplace::run_export_lp(cfg, lp_budget, lp_path, std::cerr);
    }
  } catch (const camplace::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
