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

#include "camplace/camera.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include <Eigen/Geometry>

namespace camplace {
namespace {

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

void CameraIntrinsics::validate() const {
  if (!(hfov_deg > 0.0 && hfov_deg < 180.0) || !(vfov_deg > 0.0 && vfov_deg < 180.0)) {
    throw InputError("field of view must lie in (0, 180) degrees");
  }
  if (width_px <= 0 || height_px <= 0) throw InputError("image size must be positive");
  if (!(max_range > 0.0) || !std::isfinite(max_range)) {
    throw InputError("max_range must be finite and positive");
  }
}

Pose6 make_pose(const Vec3& position, double yaw_deg, double pitch_deg,
                double roll_deg) {
  if (!position.allFinite() || !std::isfinite(yaw_deg) || !std::isfinite(pitch_deg) ||
      !std::isfinite(roll_deg)) {
    throw InputError("pose must be finite");
  }
  if (pitch_deg < -90.0 || pitch_deg > 90.0) {
    throw InputError("pitch must lie in [-90, 90] degrees");
  }
  Pose6 p;
  p.position = position;
  p.yaw_deg = std::fmod(yaw_deg, 360.0);
  if (p.yaw_deg < 0.0) p.yaw_deg += 360.0;
  if (p.yaw_deg >= 360.0) p.yaw_deg = 0.0;
  p.pitch_deg = pitch_deg;
  double r = std::fmod(roll_deg, 360.0);
  if (r > 180.0) r -= 360.0;
  if (r <= -180.0) r += 360.0;
  p.roll_deg = r;
  return p;
}

Eigen::Matrix3d camera_rotation(const Pose6& pose) {
  using Eigen::AngleAxisd;
  return (AngleAxisd(deg2rad(pose.yaw_deg), Vec3::UnitZ()) *
          AngleAxisd(deg2rad(pose.pitch_deg), Vec3::UnitY()) *
          AngleAxisd(deg2rad(pose.roll_deg), Vec3::UnitX()))
      .toRotationMatrix();
}

Ray pixel_ray(const CameraIntrinsics& intr, const Pose6& pose, int px, int py) {
  if (px < 0 || py < 0 || px >= intr.width_px || py >= intr.height_px) {
    throw InputError("pixel (" + std::to_string(px) + ", " + std::to_string(py) +
                     ") outside the image");
  }
  const double u = 2.0 * (px + 0.5) / intr.width_px - 1.0;
  const double v = 2.0 * (py + 0.5) / intr.height_px - 1.0;
  const Vec3 local(1.0, -u * std::tan(deg2rad(intr.hfov_deg) / 2.0),
                   -v * std::tan(deg2rad(intr.vfov_deg) / 2.0));
  return {pose.position, (camera_rotation(pose) * local).normalized()};
}

int CandidateSet::group_count() const {
  if (location_group.empty()) return 0;
  return *std::max_element(location_group.begin(), location_group.end()) + 1;
}

CandidateSet generate_candidates(const VoxelGrid& room, const CandidateLattice& lattice,
                                 const CameraIntrinsics& intr) {
  intr.validate();
  if (!(lattice.spacing > 0.0)) throw InputError("lattice spacing must be positive");
  if (!(lattice.yaw_step_deg > 0.0) || lattice.yaw_step_deg > 360.0) {
    throw InputError("yaw step must lie in (0, 360] degrees");
  }
  const double yaw_steps = 360.0 / lattice.yaw_step_deg;
  if (std::abs(yaw_steps - std::round(yaw_steps)) > 1e-9) {
    throw InputError("yaw step must divide 360 degrees");
  }
  if (lattice.pitch_values_deg.empty()) throw InputError("at least one pitch is required");

  const double size = room.voxel_size();
  const auto& dims = room.dims();
  double z;
  if (lattice.mount_height) {
    if (*lattice.mount_height < 0.0 || *lattice.mount_height >= dims[2] * size) {
      throw InputError("mount height lies outside the grid");
    }
    z = room.origin().z() + *lattice.mount_height;
  } else {
    int top = -1;
    for (int iz = dims[2] - 1; iz >= 0 && top < 0; --iz) {
      for (int iy = 0; iy < dims[1] && top < 0; ++iy) {
        for (int ix = 0; ix < dims[0]; ++ix) {
          if (!room.occupied(ix, iy, iz)) {
            top = iz;
            break;
          }
        }
      }
    }
    if (top < 0) throw InputError("grid has no free voxel to mount cameras in");
    z = room.origin().z() + (top + 0.5) * size;
  }

  const double ex = dims[0] * size, ey = dims[1] * size;
  const int nx = static_cast<int>(std::floor(ex / lattice.spacing + 1e-9)) + 1;
  const int ny = static_cast<int>(std::floor(ey / lattice.spacing + 1e-9)) + 1;
  const int n_yaw = static_cast<int>(std::round(yaw_steps));

  CandidateSet out;
  out.intrinsics = intr;
  int group = 0;
  for (int ly = 0; ly < ny; ++ly) {
    for (int lx = 0; lx < nx; ++lx) {
      const Vec3 p(room.origin().x() + lx * lattice.spacing,
                   room.origin().y() + ly * lattice.spacing, z);
      const auto cell = room.locate_inclusive(p);
      if (!cell || room.occupied(room.linear(*cell))) continue;
      for (int k = 0; k < n_yaw; ++k) {
        for (double pitch : lattice.pitch_values_deg) {
          out.poses.push_back(make_pose(p, k * lattice.yaw_step_deg, pitch, 0.0));
          out.location_group.push_back(group);
        }
      }
      ++group;
    }
  }
  if (out.poses.empty()) throw InputError("no lattice point lies in a free voxel");
  return out;
}

void validate_candidates(const CandidateSet& candidates) {
  candidates.intrinsics.validate();
  if (candidates.location_group.size() != candidates.poses.size()) {
    throw InputError("location_group length differs from pose count");
  }
  using Key = std::tuple<double, double, double>;
  std::map<Key, int> group_of_position;
  std::map<int, Key> position_of_group;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Vec3& p = candidates.poses[i].position;
    const Key key{p.x(), p.y(), p.z()};
    const int g = candidates.location_group[i];
    if (g < 0) throw InputError("negative location group");
    auto [it, inserted] = group_of_position.emplace(key, g);
    if (!inserted && it->second != g) {
      throw InputError("candidates at the same position carry different groups");
    }
    auto [jt, fresh] = position_of_group.emplace(g, key);
    if (!fresh && jt->second != key) {
      throw InputError("location group " + std::to_string(g) +
                       " spans distinct positions");
    }
  }
  if (!position_of_group.empty() &&
      position_of_group.rbegin()->first + 1 != static_cast<int>(position_of_group.size())) {
    throw InputError("location groups are not numbered compactly");
  }
}

}  // namespace camplace
