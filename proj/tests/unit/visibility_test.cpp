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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "oracles.hpp"

namespace camplace {
namespace {

VoxelGrid line_grid() { return VoxelGrid(Vec3::Zero(), 0.25, {10, 1, 1}); }

std::vector<std::size_t> iota(std::size_t a, std::size_t b) {
  std::vector<std::size_t> v;
  for (std::size_t i = a; i <= b; ++i) v.push_back(i);
  return v;
}

TEST(Raycast, EmptyLine) {
  const RaycastResult r = raycast(line_grid(), Vec3(0.125, 0.125, 0.125), Vec3(1, 0, 0), 5.0);
  EXPECT_FALSE(r.hit);
  EXPECT_EQ(r.traversed, iota(0, 9));
}

TEST(Raycast, StopsAtFirstBlocker) {
  VoxelGrid g = line_grid();
  g.set_occupied(5, true);
  g.set_occupied(7, true);
  const RaycastResult r = raycast(g, Vec3(0.125, 0.125, 0.125), Vec3(1, 0, 0), 5.0);
  ASSERT_TRUE(r.hit);
  EXPECT_EQ(*r.hit, 5u);
  EXPECT_EQ(r.traversed, iota(0, 4));
}

TEST(Raycast, ShortRange) {
  const RaycastResult r = raycast(line_grid(), Vec3(0.125, 0.125, 0.125), Vec3(1, 0, 0), 0.3);
  EXPECT_FALSE(r.hit);
  EXPECT_EQ(r.traversed, iota(0, 1));
}

TEST(Raycast, OutsideOriginClipsToGrid) {
  const RaycastResult r = raycast(line_grid(), Vec3(-1.0, 0.125, 0.125), Vec3(1, 0, 0), 2.0);
  // Enters at t = 1, so cells up to t < 2 (x < 1.0) are visited.
  EXPECT_EQ(r.traversed, iota(0, 3));
  EXPECT_TRUE(raycast(line_grid(), Vec3(-1.0, 5, 0.125), Vec3(1, 0, 0), 9).traversed.empty());
  EXPECT_TRUE(raycast(line_grid(), Vec3(-1.0, 0.1, 0.1), Vec3(-1, 0, 0), 9).traversed.empty());
}

TEST(Raycast, NegativeAndDiagonalDirections) {
  const RaycastResult r = raycast(line_grid(), Vec3(2.4, 0.125, 0.125), Vec3(-1, 0, 0), 10.0);
  std::vector<std::size_t> expect;
  for (int i = 9; i >= 0; --i) expect.push_back(i);
  EXPECT_EQ(r.traversed, expect);
  VoxelGrid g(Vec3::Zero(), 1.0, {3, 3, 1});
  const RaycastResult d = raycast(g, Vec3(0.5, 0.2, 0.5), Vec3(1, 1, 0).normalized(), 10);
  // x reaches its next face first (0.5 vs 0.8), then the axes alternate.
  EXPECT_EQ(d.traversed, (std::vector<std::size_t>{0, 1, 4, 5, 8}));
}

TEST(Raycast, ZeroDirectionRejected) {
  EXPECT_THROW(raycast(line_grid(), Vec3::Zero(), Vec3::Zero(), 1.0), InputError);
}

TEST(WalkRay, EnterExitParameters) {
  std::vector<RayStep> steps;
  walk_ray(line_grid(), Vec3(0.125, 0.125, 0.125), Vec3(2, 0, 0), 0.6, [&](const RayStep& s) {
    steps.push_back(s);
    return true;
  });
  ASSERT_EQ(steps.size(), 3u);
  EXPECT_DOUBLE_EQ(steps[0].t_enter, 0.0);
  EXPECT_DOUBLE_EQ(steps[0].t_exit, 0.125);
  EXPECT_DOUBLE_EQ(steps[2].t_enter, 0.375);
}

TEST(Incidence, Examples) {
  EXPECT_TRUE(incidence_ok(Vec3(1, 0, 0), Vec3(-1, 0, 0), 30));
  EXPECT_FALSE(incidence_ok(Vec3(1, 0, 0), Vec3(0, 0, 1), 30));
  const double c = std::cos(std::numbers::pi / 4);
  EXPECT_TRUE(incidence_ok(Vec3(1, 0, 0), -Vec3(c, c, 0), 45));
  EXPECT_FALSE(incidence_ok(Vec3(1, 0, 0), -Vec3(c, c, 0), 44.9));
}

TEST(DefaultStride, MatchesCentrePixelDensity) {
  const CameraIntrinsics intr;
  const double ppr_v = 720.0 / (2.0 * std::tan(18.0 * std::numbers::pi / 180.0));
  EXPECT_EQ(default_pixel_stride(intr, 0.25), static_cast<int>(std::floor(ppr_v * 0.25 / 5.0)));
  EXPECT_EQ(default_pixel_stride(intr, 0.25), 55);
  EXPECT_EQ(default_pixel_stride(intr, 0.0001), 1);
}

TEST(SampledPixels, IncludesLast) {
  EXPECT_EQ(sampled_pixels(10, 4), (std::vector<int>{0, 4, 8, 9}));
  EXPECT_EQ(sampled_pixels(9, 4), (std::vector<int>{0, 4, 8}));
  EXPECT_EQ(sampled_pixels(1, 55), (std::vector<int>{0}));
}

// Wall of shelf voxels two meters in front of a camera looking along +X.
struct WallScene {
  VoxelGrid grid{Vec3(-0.5, -4, -2), 0.25, {12, 32, 16}};
  CoverageTarget targets;
  WallScene() {
    for (int z = 0; z < 16; ++z)
      for (int y = 0; y < 32; ++y)
        for (int x = 10; x < 12; ++x) grid.set_occupied(grid.linear(x, y, z), true);
    targets = label_shelf_targets(grid, {{Vec3(1.9, -5, -3), Vec3(2.2, 5, 3)}}, 1);
  }
};

TEST(CameraView, HeadOnWallMatchesFrustum) {
  const WallScene s;
  const CameraIntrinsics intr;
  const Pose6 pose = make_pose(Vec3(0.01, 0.02, 0.03), 0, 0, 0);
  const RaycastConfig cfg = make_raycast_config(intr, 0.25);
  const BitRow row = camera_view(s.grid, s.targets, intr, pose, cfg);
  const double th = std::tan(35.5 * std::numbers::pi / 180), tv = std::tan(18 * std::numbers::pi / 180);
  int checked_in = 0;
  for (std::size_t j = 0; j < s.targets.size(); ++j) {
    const Vec3 c = s.grid.center(s.targets.voxel_indices[j]);
    bool all_in = true, all_out = true;
    for (int dy : {-1, 1})
      for (int dz : {-1, 1}) {
        const Vec3 q = Vec3(2.0, c.y() + dy * 0.125, c.z() + dz * 0.125) - pose.position;
        const bool in = std::abs(q.y() / q.x()) <= th && std::abs(q.z() / q.x()) <= tv;
        all_in &= in;
        all_out &= !in;
      }
    if (all_in) {
      ++checked_in;
      EXPECT_TRUE(row.test(j)) << "voxel inside frustum missed: " << c.transpose();
    }
    if (all_out) EXPECT_FALSE(row.test(j)) << "voxel outside frustum set: " << c.transpose();
  }
  EXPECT_GT(checked_in, 30);
}

TEST(CameraView, GrazingViewFailsIncidenceLimit) {
  const WallScene s;
  CameraIntrinsics narrow;
  narrow.hfov_deg = 10;
  narrow.vfov_deg = 10;
  narrow.width_px = 64;
  narrow.height_px = 64;
  const Pose6 pose = make_pose(Vec3(0.01, -2.0, 0.03), 60, 0, 0);
  const BitRow open = camera_view(s.grid, s.targets, narrow, pose, make_raycast_config(narrow, 0.25, 1));
  EXPECT_GT(open.count(), 0u);
  const BitRow limited =
      camera_view(s.grid, s.targets, narrow, pose, make_raycast_config(narrow, 0.25, 1, 30.0));
  EXPECT_EQ(limited.count(), 0u);
}

TEST(CameraView, FacingAwayIsEmpty) {
  const WallScene s;
  const CameraIntrinsics intr;
  const BitRow row = camera_view(s.grid, s.targets, intr, make_pose(Vec3(0, 0, 0), 180, 0, 0),
                                 make_raycast_config(intr, 0.25));
  EXPECT_TRUE(row.none());
}

TEST(CameraView, CameraInsideSolidSeesNothing) {
  const WallScene s;
  const CameraIntrinsics intr;
  const BitRow row = camera_view(s.grid, s.targets, intr, make_pose(Vec3(2.1, 0, 0), 180, 0, 0),
                                 make_raycast_config(intr, 0.25));
  EXPECT_TRUE(row.none());
}

TEST(CameraView, FreeTargetsCountedWhenTraversed) {
  VoxelGrid g(Vec3::Zero(), 0.25, {20, 4, 4});
  CoverageTarget t;
  t.push_back(g.linear(5, 2, 2), 3, RegionLabel::kFreeSpace);
  t.push_back(g.linear(19, 2, 2), 3, RegionLabel::kFreeSpace);  // beyond range 4 m? x = 4.875
  CameraIntrinsics intr;
  intr.max_range = 4.0;
  const BitRow row = camera_view(g, t, intr, make_pose(Vec3(0.01, 0.55, 0.55), 0, 0, 0),
                                 make_raycast_config(intr, 0.25, 5));
  EXPECT_TRUE(row.test(0));
  EXPECT_FALSE(row.test(1));
}

CandidateSet two_cameras(const Pose6& a, const Pose6& b) {
  CandidateSet c;
  c.poses = {a, b};
  c.location_group = {0, 1};
  return c;
}

TEST(BuildMatrix, NoCandidates) {
  const WallScene s;
  const VisibilityMatrix v = build_matrix(s.grid, s.targets, CandidateSet{}, make_raycast_config({}, 0.25));
  EXPECT_EQ(v.n_g, 0u);
  EXPECT_EQ(v.n_p, s.targets.size());
}

TEST(BuildMatrix, MirroredCamerasSeeEqualCounts) {
  // Room symmetric about y = 2; cameras mirrored across it.
  VoxelGrid g(Vec3::Zero(), 0.25, {24, 16, 8});
  for (int z = 0; z < 8; ++z)
    for (int y = 0; y < 16; ++y) g.set_occupied(g.linear(23, y, z), true);
  for (int z = 0; z < 4; ++z)
    for (int y = 6; y < 10; ++y) g.set_occupied(g.linear(12, y, z), true);
  CoverageTarget t = merge_targets({build_free_space_targets(g, {0.6}, 1),
                                    label_shelf_targets(g, {{Vec3(0, 0, 0), Vec3(6, 4, 2)}}, 1)});
  const CameraIntrinsics intr;
  const auto c = two_cameras(make_pose(Vec3(0.3, 1.0, 1.6), 30, 30, 0),
                             make_pose(Vec3(0.3, 3.0, 1.6), 330, 30, 0));
  // Stride 3 divides width - 1, so the sampled columns are mirror-symmetric.
  const VisibilityMatrix v = build_matrix(g, t, c, make_raycast_config(intr, 0.25, 3));
  EXPECT_GT(v.rows[0].count(), 0u);
  EXPECT_EQ(v.rows[0].count(), v.rows[1].count());
}

TEST(BuildMatrix, ThreadCountDoesNotMatter) {
  testing::Rng rng(21);
  const auto scene = testing::random_scene(rng);
  CandidateSet c;
  std::uniform_real_distribution<double> yaw(0, 360), pitch(-30, 60);
  for (int i = 0; i < 24; ++i) {
    c.poses.push_back(make_pose(testing::random_free_point(rng, scene.grid), yaw(rng), pitch(rng)));
    c.location_group.push_back(i);
  }
  const RaycastConfig cfg = make_raycast_config({}, 0.25, 20, 70.0);
  const VisibilityMatrix a = build_matrix(scene.grid, scene.targets, c, cfg, 1);
  const VisibilityMatrix b = build_matrix(scene.grid, scene.targets, c, cfg, 4);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.provenance, b.provenance);
}

TEST(PruneBlocked, Examples) {
  CandidateSet c;
  for (int i = 0; i < 3; ++i) {
    c.poses.push_back(make_pose(Vec3(i, 0, 0), 0, 0));
    c.location_group.push_back(i);
  }
  VisibilityMatrix v;
  v.n_g = 3;
  v.n_p = 4;
  v.rows.assign(3, BitRow(4));
  auto [none_kept, empty] = prune_blocked(c, v);
  EXPECT_EQ(none_kept.size(), 0u);
  EXPECT_EQ(empty.n_g, 0u);

  v.rows[1].set(2);
  auto [one, m1] = prune_blocked(c, v);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.location_group[0], 0);
  EXPECT_EQ(one.poses[0].position.x(), 1.0);
  EXPECT_TRUE(m1.rows[0].test(2));

  for (auto& r : v.rows) r.set(0);
  auto [all, m3] = prune_blocked(c, v);
  EXPECT_EQ(all.location_group, c.location_group);
  EXPECT_EQ(m3.rows, v.rows);
  EXPECT_NE(m3.provenance, v.provenance);
}

struct RandomCameras {
  testing::RandomScene scene;
  CandidateSet candidates;
};

RandomCameras random_cameras(testing::Rng& rng, int n) {
  RandomCameras out{testing::random_scene(rng), {}};
  std::uniform_real_distribution<double> yaw(0, 360), pitch(-45, 75);
  out.candidates.intrinsics.width_px = 96;
  out.candidates.intrinsics.height_px = 48;
  out.candidates.intrinsics.max_range = 3.0;
  for (int i = 0; i < n; ++i) {
    out.candidates.poses.push_back(
        make_pose(testing::random_free_point(rng, out.scene.grid), yaw(rng), pitch(rng)));
    out.candidates.location_group.push_back(i);
  }
  return out;
}

// Denser sampling along a divisor chain only adds sampled pixels, so no
// free-space bit can disappear.
TEST(VisibilityProperty, StrideMonotoneOnDivisorChain) {
  testing::Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rc = random_cameras(rng, 6);
    std::vector<BitRow> prev;
    for (int stride : {16, 8, 4, 2, 1}) {
      RaycastConfig cfg{stride, std::nullopt, rc.candidates.intrinsics.max_range};
      const VisibilityMatrix v = build_matrix(rc.scene.grid, rc.scene.targets, rc.candidates, cfg);
      if (!prev.empty()) {
        for (std::size_t i = 0; i < v.n_g; ++i)
          for (std::size_t j = 0; j < v.n_p; ++j) {
            if (prev[i].test(j)) ASSERT_TRUE(v.rows[i].test(j)) << "stride " << stride;
          }
      }
      prev = v.rows;
    }
  }
}

TEST(VisibilityProperty, RangeBound) {
  testing::Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rc = random_cameras(rng, 8);
    const double range = rc.candidates.intrinsics.max_range;
    RaycastConfig cfg{2, std::nullopt, range};
    const VisibilityMatrix v = build_matrix(rc.scene.grid, rc.scene.targets, rc.candidates, cfg);
    for (std::size_t i = 0; i < v.n_g; ++i)
      for (std::size_t j : v.rows[i].indices()) {
        const double d = (rc.scene.grid.center(rc.scene.targets.voxel_indices[j]) -
                          rc.candidates.poses[i].position).norm();
        ASSERT_LE(d, range + 0.25 * std::sqrt(3.0));
      }
  }
}

// A set shelf bit needs an unobstructed line to the voxel. The voxel centre
// can sit behind the surface at grazing angles, so the check aims at points
// on the voxel's faces that border free space and face the camera.
bool reachable(const VoxelGrid& g, const Vec3& o, std::size_t voxel) {
  const GridIndex c = g.unravel(voxel);
  const Vec3 centre = g.center(voxel);
  const double h = g.voxel_size() / 2.0;
  const int off[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (const auto& n : off) {
    const Vec3 normal(n[0], n[1], n[2]);
    if (!g.in_bounds(c.x + n[0], c.y + n[1], c.z + n[2]) ||
        g.occupied(c.x + n[0], c.y + n[1], c.z + n[2])) {
      continue;
    }
    const Vec3 face = centre + h * normal;
    if ((o - face).dot(normal) <= 0.0) continue;
    // Two tangent axes spanning the face.
    const Vec3 u = normal.x() != 0 ? Vec3(0, 1, 0) : Vec3(1, 0, 0);
    const Vec3 v = normal.cross(u);
    for (int a = -8; a <= 8; ++a)
      for (int b = -8; b <= 8; ++b) {
        // Aim slightly inside the voxel so the hit cell is well defined.
        const Vec3 p = face + (a / 8.5) * h * u + (b / 8.5) * h * v - 1e-6 * normal;
        const Vec3 to = p - o;
        const RaycastResult r = raycast(g, o, to.normalized(), to.norm() + 1e-3);
        if (r.hit && *r.hit == voxel) return true;
      }
  }
  return false;
}

TEST(VisibilityProperty, OcclusionSoundness) {
  testing::Rng rng(41);
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto rc = random_cameras(rng, 8);
    RaycastConfig cfg{2, std::nullopt, rc.candidates.intrinsics.max_range};
    const VisibilityMatrix v = build_matrix(rc.scene.grid, rc.scene.targets, rc.candidates, cfg);
    for (std::size_t i = 0; i < v.n_g; ++i)
      for (std::size_t j : v.rows[i].indices()) {
        if (rc.scene.targets.labels[j] != RegionLabel::kShelf) continue;
        ++checked;
        EXPECT_TRUE(reachable(rc.scene.grid, rc.candidates.poses[i].position,
                              rc.scene.targets.voxel_indices[j]))
            << "camera " << i << " target " << j;
      }
  }
  EXPECT_GT(checked, 100);
}

TEST(VisibilityProperty, AgreesWithMarchingOracle) {
  testing::Rng rng(43);
  std::size_t pairs = 0, disagree = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto rc = random_cameras(rng, 4);
    for (std::size_t i = 0; i < rc.candidates.size(); ++i) {
      RaycastConfig cfg{3, 60.0, rc.candidates.intrinsics.max_range};
      const BitRow row = camera_view(rc.scene.grid, rc.scene.targets, rc.candidates.intrinsics,
                                     rc.candidates.poses[i], cfg);
      const auto view = testing::march_view(rc.scene.grid, rc.scene.targets, rc.candidates.intrinsics,
                                            rc.candidates.poses[i], 3, 60.0);
      std::vector<std::size_t> disputed;
      for (std::size_t j = 0; j < rc.scene.targets.size(); ++j) {
        ++pairs;
        if (row.test(j) != static_cast<bool>(view.seen[j])) disputed.push_back(j);
      }
      disagree += disputed.size();
      const auto why = testing::explain(rc.scene.grid, rc.scene.targets, rc.candidates.intrinsics, view,
                                        60.0, disputed);
      for (std::size_t j : disputed) EXPECT_TRUE(why[j]) << "unexplained disagreement at target " << j;
    }
  }
  EXPECT_LE(disagree * 20, pairs);
}

TEST(RaycastConfig, Validate) {
  EXPECT_THROW((RaycastConfig{0, std::nullopt, 5}.validate()), InputError);
  EXPECT_THROW((RaycastConfig{1, 0.0, 5}.validate()), InputError);
  EXPECT_THROW((RaycastConfig{1, 91.0, 5}.validate()), InputError);
  EXPECT_NO_THROW((RaycastConfig{1, 90.0, 5}.validate()));
}

}  // namespace
}  // namespace camplace
