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

#include "camplace/visibility.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "camplace/hash.hpp"
#include "camplace/provenance.hpp"

namespace camplace {

std::size_t BitRow::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::uint32_t> BitRow::indices() const {
  std::vector<std::uint32_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

void RaycastConfig::validate() const {
  if (pixel_stride < 1) throw InputError("pixel_stride must be at least 1");
  if (!(max_range > 0.0) || !std::isfinite(max_range)) {
    throw InputError("max_range must be finite and positive");
  }
  if (max_incidence_deg && !(*max_incidence_deg > 0.0 && *max_incidence_deg <= 90.0)) {
    throw InputError("max_incidence_deg must lie in (0, 90]");
  }
}

int default_pixel_stride(const CameraIntrinsics& intr, double voxel_size) {
  // Angular pixel density of a tan-projection is lowest at the image center.
  const double to_rad = std::numbers::pi / 180.0;
  const double ppr_h = intr.width_px / (2.0 * std::tan(intr.hfov_deg * to_rad / 2.0));
  const double ppr_v = intr.height_px / (2.0 * std::tan(intr.vfov_deg * to_rad / 2.0));
  const double stride = std::floor(std::min(ppr_h, ppr_v) * voxel_size / intr.max_range);
  return std::max(1, static_cast<int>(stride));
}

RaycastConfig make_raycast_config(const CameraIntrinsics& intr, double voxel_size,
                                  std::optional<int> pixel_stride,
                                  std::optional<double> max_incidence_deg) {
  RaycastConfig cfg;
  cfg.pixel_stride = pixel_stride.value_or(default_pixel_stride(intr, voxel_size));
  cfg.max_incidence_deg = max_incidence_deg;
  cfg.max_range = intr.max_range;
  cfg.validate();
  return cfg;
}

void walk_ray(const VoxelGrid& grid, const Vec3& origin, const Vec3& direction,
              double max_range, const std::function<bool(const RayStep&)>& visit) {
  const double len = direction.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw InputError("ray direction must be non-zero");
  const Vec3 d = direction / len;
  const Vec3 lo = grid.min_corner(), hi = grid.max_corner();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Clip against the grid box.
  double t0 = 0.0, t1 = kInf;
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (origin[a] < lo[a] || origin[a] >= hi[a]) return;
      continue;
    }
    double ta = (lo[a] - origin[a]) / d[a], tb = (hi[a] - origin[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 > t1 || t0 >= max_range) return;

  const double size = grid.voxel_size();
  const auto& dims = grid.dims();
  const Vec3 start = origin + t0 * d;
  int cell[3], step[3];
  double t_max[3], t_delta[3];
  for (int a = 0; a < 3; ++a) {
    const int c = static_cast<int>(std::floor((start[a] - lo[a]) / size));
    cell[a] = std::clamp(c, 0, dims[a] - 1);
    if (d[a] > 0.0) {
      step[a] = 1;
      t_max[a] = (lo[a] + (cell[a] + 1) * size - origin[a]) / d[a];
      t_delta[a] = size / d[a];
    } else if (d[a] < 0.0) {
      step[a] = -1;
      t_max[a] = (lo[a] + cell[a] * size - origin[a]) / d[a];
      t_delta[a] = -size / d[a];
    } else {
      step[a] = 0;
      t_max[a] = kInf;
      t_delta[a] = kInf;
    }
  }

  double t_enter = t0;
  while (true) {
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    const std::size_t voxel = grid.linear(cell[0], cell[1], cell[2]);
    const bool occ = grid.occupied(voxel);
    const double t_exit = std::max(t_enter, t_max[axis]);
    if (!visit(RayStep{voxel, t_enter, t_exit, occ}) || occ) return;
    t_enter = t_exit;
    if (t_enter >= max_range) return;
    cell[axis] += step[axis];
    if (cell[axis] < 0 || cell[axis] >= dims[axis]) return;
    t_max[axis] += t_delta[axis];
  }
}

RaycastResult raycast(const VoxelGrid& grid, const Vec3& origin, const Vec3& direction,
                      double max_range) {
  RaycastResult out;
  walk_ray(grid, origin, direction, max_range, [&](const RayStep& s) {
    if (s.occupied) {
      out.hit = s.voxel;
    } else {
      out.traversed.push_back(s.voxel);
    }
    return true;
  });
  return out;
}

bool incidence_ok(const Vec3& ray_direction, const Vec3& normal, double max_incidence_deg) {
  const double cos_angle = -ray_direction.dot(normal);
  return cos_angle >= std::cos(max_incidence_deg * std::numbers::pi / 180.0) - 1e-9;
}

TargetLookup::TargetLookup(const VoxelGrid& grid, const CoverageTarget& targets)
    : column_(grid.size(), -1) {
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (targets.voxel_indices[k] >= grid.size()) {
      throw InputError("target voxel index out of bounds");
    }
    column_[targets.voxel_indices[k]] = static_cast<int>(k);
  }
}

std::vector<int> sampled_pixels(int extent, int stride) {
  std::vector<int> out;
  for (int p = 0; p < extent; p += stride) out.push_back(p);
  if (out.back() != extent - 1) out.push_back(extent - 1);
  return out;
}

BitRow camera_view(const VoxelGrid& grid, const CoverageTarget& targets,
                   const CameraIntrinsics& intr, const Pose6& pose,
                   const RaycastConfig& cfg) {
  return camera_view(grid, targets, TargetLookup(grid, targets), intr, pose, cfg);
}

BitRow camera_view(const VoxelGrid& grid, const CoverageTarget& targets,
                   const TargetLookup& lookup, const CameraIntrinsics& intr,
                   const Pose6& pose, const RaycastConfig& cfg) {
  BitRow row(targets.size());
  if (const auto cell = grid.locate(pose.position);
      cell && grid.occupied(grid.linear(*cell))) {
    return row;
  }
  const std::vector<int> xs = sampled_pixels(intr.width_px, cfg.pixel_stride);
  const std::vector<int> ys = sampled_pixels(intr.height_px, cfg.pixel_stride);
  for (int py : ys) {
    for (int px : xs) {
      const Ray ray = pixel_ray(intr, pose, px, py);
      walk_ray(grid, ray.origin, ray.direction, cfg.max_range, [&](const RayStep& s) {
        const int col = lookup.column(s.voxel);
        if (col < 0) return true;
        if (!s.occupied) {
          row.set(static_cast<std::size_t>(col));
          return true;
        }
        if (cfg.max_incidence_deg) {
          const auto normal = grid.surface_normal(s.voxel);
          if (!normal || !incidence_ok(ray.direction, *normal, *cfg.max_incidence_deg)) {
            return true;
          }
        }
        row.set(static_cast<std::size_t>(col));
        return true;
      });
    }
  }
  return row;
}

VisibilityMatrix build_matrix(const VoxelGrid& grid, const CoverageTarget& targets,
                              const CandidateSet& candidates, const RaycastConfig& cfg,
                              unsigned threads) {
  cfg.validate();
  VisibilityMatrix v;
  v.n_g = candidates.size();
  v.n_p = targets.size();
  v.rows.assign(v.n_g, BitRow(v.n_p));
  v.provenance = matrix_provenance(grid, targets, candidates, cfg);
  if (v.n_g == 0) return v;

  const TargetLookup lookup(grid, targets);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, v.n_g));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < v.n_g; i = next++) {
      v.rows[i] = camera_view(grid, targets, lookup, candidates.intrinsics,
                              candidates.poses[i], cfg);
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return v;
}

std::pair<CandidateSet, VisibilityMatrix> prune_blocked(const CandidateSet& candidates,
                                                        const VisibilityMatrix& v) {
  if (candidates.size() != v.n_g || v.rows.size() != v.n_g) {
    throw InputError("candidate count does not match matrix rows");
  }
  CandidateSet kept;
  kept.intrinsics = candidates.intrinsics;
  VisibilityMatrix out;
  out.n_p = v.n_p;
  out.provenance = Fnv1a().str("pruned").u64(v.provenance).digest();
  std::vector<int> remap(static_cast<std::size_t>(candidates.group_count()), -1);
  int next_group = 0;
  for (std::size_t i = 0; i < v.n_g; ++i) {
    if (v.rows[i].none()) continue;
    int& g = remap[static_cast<std::size_t>(candidates.location_group[i])];
    if (g < 0) g = next_group++;
    kept.poses.push_back(candidates.poses[i]);
    kept.location_group.push_back(g);
    out.rows.push_back(v.rows[i]);
  }
  out.n_g = out.rows.size();
  return {std::move(kept), std::move(out)};
}

}  // namespace camplace
