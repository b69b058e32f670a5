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

#include "camplace/provenance.hpp"

#include "camplace/hash.hpp"

namespace camplace {

std::uint64_t grid_hash(const VoxelGrid& grid) {
  Fnv1a h;
  h.str("grid");
  for (int a = 0; a < 3; ++a) h.f64(grid.origin()[a]).i64(grid.dims()[a]);
  h.f64(grid.voxel_size());
  h.bytes(grid.occupancy());
  return h.digest();
}

std::uint64_t targets_hash(std::uint64_t grid_hash, const CoverageTarget& targets) {
  Fnv1a h;
  h.str("targets").u64(grid_hash).u64(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    h.u64(targets.voxel_indices[k]).i64(targets.gamma[k]).str(to_string(targets.labels[k]));
  }
  return h.digest();
}

std::uint64_t candidates_hash(std::uint64_t grid_hash, const CandidateSet& c) {
  Fnv1a h;
  h.str("candidates").u64(grid_hash);
  const CameraIntrinsics& in = c.intrinsics;
  h.f64(in.hfov_deg).f64(in.vfov_deg).i64(in.width_px).i64(in.height_px).f64(in.max_range);
  h.u64(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Pose6& p = c.poses[i];
    h.f64(p.position.x()).f64(p.position.y()).f64(p.position.z());
    h.f64(p.yaw_deg).f64(p.pitch_deg).f64(p.roll_deg).i64(c.location_group[i]);
  }
  return h.digest();
}

std::uint64_t matrix_provenance(std::uint64_t targets_hash, std::uint64_t candidates_hash,
                                const RaycastConfig& cfg) {
  Fnv1a h;
  h.str("matrix").u64(targets_hash).u64(candidates_hash);
  h.i64(cfg.pixel_stride).f64(cfg.max_range);
  h.i64(cfg.max_incidence_deg.has_value() ? 1 : 0).f64(cfg.max_incidence_deg.value_or(0.0));
  return h.digest();
}

std::uint64_t matrix_provenance(const VoxelGrid& grid, const CoverageTarget& targets,
                                const CandidateSet& candidates, const RaycastConfig& cfg) {
  const std::uint64_t g = grid_hash(grid);
  return matrix_provenance(targets_hash(g, targets), candidates_hash(g, candidates), cfg);
}

}  // namespace camplace
