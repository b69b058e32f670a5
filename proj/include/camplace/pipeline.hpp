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

#ifndef CAMPLACE_PIPELINE_HPP_
#define CAMPLACE_PIPELINE_HPP_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "camplace/camera.hpp"
#include "camplace/geometry.hpp"
#include "camplace/io.hpp"
#include "camplace/objective.hpp"
#include "camplace/scene.hpp"
#include "camplace/solvers.hpp"
#include "camplace/visibility.hpp"

namespace camplace {

struct SolverSweep {
  Method method = Method::kProposedMip;
  std::vector<int> budgets;
  double time_budget = 60.0;
  std::optional<std::int64_t> node_limit;
};

struct PipelineConfig {
  // Exactly one scene source.
  std::optional<std::filesystem::path> synthetic_scene;
  std::optional<std::string> builtin_scene;  // "store"
  std::optional<std::filesystem::path> point_cloud;
  CloudFormat cloud_format = CloudFormat::kXyzAscii;
  int min_points = 1;

  double voxel_size = kDefaultVoxelSize;
  std::size_t max_voxels = kDefaultMaxVoxels;

  std::vector<double> free_space_heights;
  int free_space_gamma = 3;
  std::vector<Box> shelf_boxes;
  bool shelves_from_scene = false;
  int shelf_gamma = 1;
  std::optional<double> max_incidence_deg = 60.0;  // shelf targets only

  CameraIntrinsics camera;
  CandidateLattice lattice;
  std::optional<int> pixel_stride;
  int gamma_max = kDefaultGammaMax;

  std::vector<SolverSweep> solvers;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::filesystem::path out_dir = "out";

  // Throws InputError on any invalid field; called by the loaders.
  void validate() const;
};

// Parses the JSON config. Relative input paths resolve against `base_dir`;
// the output directory stays relative to the working directory. Missing
// keys take the defaults: 0.25 m voxels, 71 x 36 deg at 1780 x 720 with 5 m
// range, 1 m lattice, 30 deg yaw steps, pitches {30, 45, 60}, free-space
// planes at 0.5 m and 1.5 m with gamma 3, 60 deg incidence limit on shelf
// targets (null disables it).
PipelineConfig pipeline_config_from_json(const std::string& text,
                                         const std::filesystem::path& base_dir = ".");
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// Everything the solvers consume, with the provenance chain.
struct SceneStack {
  VoxelGrid grid;
  CoverageTarget targets;
  CandidateSet candidates;  // after pruning blocked views
  VisibilityMatrix matrix;  // after pruning
  CoverageInstance instance;
  Provenance provenance;
  std::size_t candidates_before_pruning = 0;
};

struct SceneSource {
  VoxelGrid grid;
  std::vector<Box> scene_shelves;
};

SceneSource build_grid(const PipelineConfig& cfg);
CoverageTarget build_targets(const PipelineConfig& cfg, const SceneSource& src);
RaycastConfig raycast_config(const PipelineConfig& cfg);

// Builds (or, when `cache_dir` is given, reuses files keyed by provenance)
// every stage up to the pruned visibility matrix.
SceneStack prepare_stack(const PipelineConfig& cfg,
                         const std::optional<std::filesystem::path>& cache_dir,
                         std::ostream& log);

struct SweepRow {
  Method method;
  int budget;
  SolverReport report;
  Metrics metrics;
};

// Runs every configured (method, budget) pair and writes per-run solution and
// metrics files, per-voxel coverage CSVs, sweep.csv and a timing log under
// cfg.out_dir.
std::vector<SweepRow> run_solve(const PipelineConfig& cfg, std::ostream& log);

std::string sweep_csv(const std::vector<SweepRow>& rows, std::uint64_t matrix_provenance);

// Recomputes metrics for a solution file against the current stack; throws
// InputError on a provenance mismatch.
Metrics run_evaluate(const PipelineConfig& cfg, const std::filesystem::path& solution,
                     std::ostream& log);

void run_ingest(const PipelineConfig& cfg, std::ostream& log);
void run_candidates(const PipelineConfig& cfg, std::ostream& log);
void run_visibility(const PipelineConfig& cfg, std::ostream& log);
void run_export_lp(const PipelineConfig& cfg, int budget, const std::filesystem::path& path,
                   std::ostream& log);

}  // namespace camplace

#endif  // CAMPLACE_PIPELINE_HPP_
