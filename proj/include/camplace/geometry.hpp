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

#ifndef CAMPLACE_GEOMETRY_HPP_
#define CAMPLACE_GEOMETRY_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace camplace {

// World frame, meters, Z up.
using Vec3 = Eigen::Vector3d;

// Raised for malformed inputs: unparsable files, invalid configuration,
// arguments that violate an operation's preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

struct PointCloud {
  std::vector<Vec3> points;
  // Either empty or the same length as `points`.
  std::vector<Rgb> colors;

  bool has_colors() const { return !colors.empty(); }
};

enum class CloudFormat { kXyzAscii, kPlyAscii };

// Parses an ASCII point cloud. Throws InputError with the 1-based line number
// on the first malformed or non-finite line, and on an empty file.
PointCloud load_point_cloud(const std::filesystem::path& path,
                            CloudFormat format);

// Axis-aligned box with inclusive bounds.
struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

struct GridIndex {
  int x = 0, y = 0, z = 0;
  bool operator==(const GridIndex&) const = default;
};

// Regular occupancy lattice. Linear index = ix + nx * (iy + ny * iz).
// Voxel (ix,iy,iz) spans [origin + size*i, origin + size*(i+1)) per axis.
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(const Vec3& origin, double voxel_size, std::array<int, 3> dims);

  const Vec3& origin() const { return origin_; }
  double voxel_size() const { return voxel_size_; }
  const std::array<int, 3>& dims() const { return dims_; }
  std::size_t size() const { return occupancy_.size(); }
  std::size_t occupied_count() const;

  std::size_t linear(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(dims_[0]) *
               (static_cast<std::size_t>(iy) +
                static_cast<std::size_t>(dims_[1]) * static_cast<std::size_t>(iz));
  }
  std::size_t linear(const GridIndex& g) const { return linear(g.x, g.y, g.z); }
  GridIndex unravel(std::size_t index) const;
  bool in_bounds(int ix, int iy, int iz) const {
    return ix >= 0 && iy >= 0 && iz >= 0 && ix < dims_[0] && iy < dims_[1] &&
           iz < dims_[2];
  }

  Vec3 center(std::size_t index) const;
  Vec3 min_corner() const { return origin_; }
  Vec3 max_corner() const;

  // Cell containing `p` under half-open intervals, or nullopt when outside.
  // Coordinates within 1e-9 voxels of a face are taken to lie on it.
  std::optional<GridIndex> locate(const Vec3& p) const;
  // As locate(), but a point on the max face is assigned to the last cell on
  // that axis.
  std::optional<GridIndex> locate_inclusive(const Vec3& p) const;

  bool occupied(std::size_t index) const { return occupancy_[index] != 0; }
  bool occupied(int ix, int iy, int iz) const {
    return occupancy_[linear(ix, iy, iz)] != 0;
  }
  void set_occupied(std::size_t index, bool value) {
    occupancy_[index] = value ? 1 : 0;
  }

  // Unit vector from the voxel center toward the centroid of its unoccupied
  // in-grid 6-neighbours. Absent for free voxels, fully enclosed voxels, and
  // voxels whose free neighbours are balanced (centroid at the center).
  std::optional<Vec3> surface_normal(std::size_t index) const;

  const std::vector<std::uint8_t>& occupancy() const { return occupancy_; }

 private:
  Vec3 origin_ = Vec3::Zero();
  double voxel_size_ = 1.0;
  std::array<int, 3> dims_{0, 0, 0};
  std::vector<std::uint8_t> occupancy_;
};

inline constexpr double kDefaultVoxelSize = 0.25;
inline constexpr std::size_t kDefaultMaxVoxels = 50'000'000;
inline constexpr int kDefaultGammaMax = 3;

// Bins the cloud into a grid whose origin is snapped down to a multiple of
// `voxel_size`. A voxel is occupied iff it holds at least `min_points` points.
VoxelGrid voxelize(const PointCloud& cloud, double voxel_size, int min_points = 1,
                   std::size_t max_voxels = kDefaultMaxVoxels);

enum class RegionLabel { kFreeSpace, kShelf, kCustom };

const char* to_string(RegionLabel label);
RegionLabel region_label_from_string(const std::string& s);

struct CoverageTarget {
  std::vector<std::size_t> voxel_indices;
  std::vector<int> gamma;
  std::vector<RegionLabel> labels;

  std::size_t size() const { return voxel_indices.size(); }
  bool empty() const { return voxel_indices.empty(); }
  void push_back(std::size_t index, int g, RegionLabel label) {
    voxel_indices.push_back(index);
    gamma.push_back(g);
    labels.push_back(label);
  }
};

// Free voxels in the z-slabs containing each height. Heights are measured
// from the grid floor (origin z).
CoverageTarget build_free_space_targets(const VoxelGrid& grid,
                                        const std::vector<double>& heights,
                                        int gamma);

// Occupied voxels whose centers lie inside any of the boxes, ascending index.
CoverageTarget label_shelf_targets(const VoxelGrid& grid,
                                   const std::vector<Box>& boxes, int gamma);

// Concatenates target sets; throws InputError on a repeated voxel.
CoverageTarget merge_targets(const std::vector<CoverageTarget>& parts);

// Checks index range, uniqueness and gamma in [0, gamma_max].
void validate_targets(const VoxelGrid& grid, const CoverageTarget& targets,
                      int gamma_max = kDefaultGammaMax);

}  // namespace camplace

#endif  // CAMPLACE_GEOMETRY_HPP_
