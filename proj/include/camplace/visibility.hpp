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

#ifndef CAMPLACE_VISIBILITY_HPP_
#define CAMPLACE_VISIBILITY_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "camplace/camera.hpp"
#include "camplace/geometry.hpp"

namespace camplace {

// Fixed-length bit array packed into 64-bit words, LSB first.
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t j) const { return (words_[j >> 6] >> (j & 63)) & 1u; }
  void set(std::size_t j) { words_[j >> 6] |= std::uint64_t{1} << (j & 63); }
  void reset(std::size_t j) { words_[j >> 6] &= ~(std::uint64_t{1} << (j & 63)); }
  std::size_t count() const;
  bool none() const { return count() == 0; }
  std::vector<std::uint32_t> indices() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const BitRow&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct VisibilityMatrix {
  std::size_t n_g = 0;
  std::size_t n_p = 0;
  std::vector<BitRow> rows;
  std::uint64_t provenance = 0;

  bool test(std::size_t i, std::size_t j) const { return rows[i].test(j); }
};

struct RaycastConfig {
  int pixel_stride = 1;
  std::optional<double> max_incidence_deg;
  double max_range = 5.0;

  void validate() const;
};

// Largest stride whose neighbouring sampled rays stay within one voxel of each
// other at max_range, never less than 1.
int default_pixel_stride(const CameraIntrinsics& intr, double voxel_size);

RaycastConfig make_raycast_config(const CameraIntrinsics& intr, double voxel_size,
                                  std::optional<int> pixel_stride = std::nullopt,
                                  std::optional<double> max_incidence_deg = std::nullopt);

// One cell crossed by a ray: [t_enter, t_exit) along the ray, in meters.
struct RayStep {
  std::size_t voxel;
  double t_enter;
  double t_exit;
  bool occupied;
};

// Exact voxel walk (Amanatides-Woo). Calls `visit` for every cell the ray
// enters with t_enter < max_range, in order, stopping after the first occupied
// cell or when `visit` returns false. Rays starting outside the grid are
// clipped to the grid box first.
void walk_ray(const VoxelGrid& grid, const Vec3& origin, const Vec3& direction,
              double max_range, const std::function<bool(const RayStep&)>& visit);

struct RaycastResult {
  std::optional<std::size_t> hit;
  std::vector<std::size_t> traversed;
};

RaycastResult raycast(const VoxelGrid& grid, const Vec3& origin, const Vec3& direction,
                      double max_range);

// True iff the angle between -ray_direction and normal is at most the limit.
bool incidence_ok(const Vec3& ray_direction, const Vec3& normal, double max_incidence_deg);

// Maps grid voxel index to target column (-1 when not a target).
class TargetLookup {
 public:
  TargetLookup(const VoxelGrid& grid, const CoverageTarget& targets);
  int column(std::size_t voxel) const { return column_[voxel]; }

 private:
  std::vector<int> column_;
};

// Pixel coordinates sampled along one image axis: 0, s, 2s, ... plus the last.
std::vector<int> sampled_pixels(int extent, int stride);

BitRow camera_view(const VoxelGrid& grid, const CoverageTarget& targets,
                   const CameraIntrinsics& intr, const Pose6& pose,
                   const RaycastConfig& cfg);
BitRow camera_view(const VoxelGrid& grid, const CoverageTarget& targets,
                   const TargetLookup& lookup, const CameraIntrinsics& intr,
                   const Pose6& pose, const RaycastConfig& cfg);

// Rows are computed in parallel over `threads` workers (0 = hardware
// concurrency); the result does not depend on the thread count.
VisibilityMatrix build_matrix(const VoxelGrid& grid, const CoverageTarget& targets,
                              const CandidateSet& candidates, const RaycastConfig& cfg,
                              unsigned threads = 1);

// Drops candidates whose rows are empty and renumbers location groups in
// order of first appearance.
std::pair<CandidateSet, VisibilityMatrix> prune_blocked(const CandidateSet& candidates,
                                                        const VisibilityMatrix& v);

}  // namespace camplace

#endif  // CAMPLACE_VISIBILITY_HPP_
