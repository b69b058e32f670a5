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

#ifndef CAMPLACE_CAMERA_HPP_
#define CAMPLACE_CAMERA_HPP_

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "camplace/geometry.hpp"

namespace camplace {

struct CameraIntrinsics {
  double hfov_deg = 71.0;
  double vfov_deg = 36.0;
  int width_px = 1780;
  int height_px = 720;
  double max_range = 5.0;

  // Throws InputError unless 0 < fov < 180, sizes > 0 and range is finite > 0.
  void validate() const;
  bool operator==(const CameraIntrinsics&) const = default;
};

// Angles in degrees. Construct through make_pose() to get normalized angles.
struct Pose6 {
  Vec3 position = Vec3::Zero();
  double yaw_deg = 0.0;    // [0, 360)
  double pitch_deg = 0.0;  // [-90, 90], positive tilts the optical axis down
  double roll_deg = 0.0;   // (-180, 180]
};

Pose6 make_pose(const Vec3& position, double yaw_deg, double pitch_deg,
                double roll_deg = 0.0);

// Camera-to-world rotation: extrinsic yaw about world Z, then pitch about the
// camera's Y, then roll about the camera's X. At zero angles the optical axis
// is world +X, image right is world -Y, image down is world -Z.
Eigen::Matrix3d camera_rotation(const Pose6& pose);

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
};

// Ray through the center of pixel (px, py) under a tan-projection pinhole.
Ray pixel_ray(const CameraIntrinsics& intr, const Pose6& pose, int px, int py);

struct CandidateSet {
  std::vector<Pose6> poses;
  std::vector<int> location_group;
  CameraIntrinsics intrinsics;

  std::size_t size() const { return poses.size(); }
  int group_count() const;
};

struct CandidateLattice {
  double spacing = 1.0;
  // Height above the grid floor. Unset: center of the highest slab that holds
  // a free voxel.
  std::optional<double> mount_height;
  double yaw_step_deg = 30.0;
  std::vector<double> pitch_values_deg{30.0, 45.0, 60.0};
};

// One pose per (lattice point, yaw, pitch), roll fixed at zero. Lattice points
// start at the grid's XY origin and include the far boundary; points inside
// occupied voxels are skipped. Order: lattice row (Y) major, then column (X),
// then yaw, then pitch.
CandidateSet generate_candidates(const VoxelGrid& room, const CandidateLattice& lattice,
                                 const CameraIntrinsics& intr);

// Throws InputError when groups are not a valid compact labelling of the
// positions (equal positions share a group, distinct positions never do).
void validate_candidates(const CandidateSet& candidates);

}  // namespace camplace

#endif  // CAMPLACE_CAMERA_HPP_
