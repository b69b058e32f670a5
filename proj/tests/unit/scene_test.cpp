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

#include "camplace/scene.hpp"

#include <gtest/gtest.h>

namespace camplace {
namespace {

TEST(Rasterize, ShoeboxDimsAndShell) {
  SyntheticScene s;
  s.room = {Vec3(0, 0, 0), Vec3(10, 8, 3)};
  s.voxel_size = 0.25;
  const VoxelGrid g = rasterize(s);
  EXPECT_EQ(g.dims(), (std::array<int, 3>{40, 32, 12}));
  // Shell count: everything minus the 38 x 30 x 10 interior.
  EXPECT_EQ(g.occupied_count(), 40u * 32 * 12 - 38u * 30 * 10);
  EXPECT_TRUE(g.occupied(0, 5, 5));
  EXPECT_TRUE(g.occupied(39, 5, 5));
  EXPECT_TRUE(g.occupied(5, 5, 0));
  EXPECT_TRUE(g.occupied(5, 5, 11));
  EXPECT_FALSE(g.occupied(5, 5, 5));
}

TEST(Rasterize, OpenRoomAndBoxes) {
  SyntheticScene s;
  s.room = {Vec3(0, 0, 0), Vec3(2, 2, 2)};
  s.voxel_size = 0.5;
  s.walls = s.floor = s.ceiling = false;
  s.solids.push_back({Vec3(0, 0, 0), Vec3(1, 1, 1)});
  const VoxelGrid g = rasterize(s);
  EXPECT_EQ(g.occupied_count(), 8u);
}

TEST(Rasterize, Limits) {
  SyntheticScene s;
  s.room = {Vec3(0, 0, 0), Vec3(10, 10, 10)};
  s.voxel_size = 0.01;
  EXPECT_THROW(rasterize(s, 1000), InputError);
  s.voxel_size = 0.0;
  EXPECT_THROW(rasterize(s), InputError);
}

TEST(SceneJson, RoundTrip) {
  const SyntheticScene s = make_store_scene();
  const SyntheticScene t = scene_from_json_text(scene_to_json_text(s));
  EXPECT_EQ(t.shelves.size(), 4u);
  EXPECT_EQ(t.solids.size(), 1u);
  EXPECT_EQ(t.room.max, s.room.max);
  EXPECT_EQ(rasterize(t).occupancy(), rasterize(s).occupancy());
}

TEST(SceneJson, Errors) {
  EXPECT_THROW(scene_from_json_text("{"), InputError);
  EXPECT_THROW(scene_from_json_text(R"({"voxel_size": 0.25})"), InputError);
  EXPECT_THROW(scene_from_json_text(R"({"room": {"min": [0,0,0], "max": [1,0,1]}})"), InputError);
}

TEST(StoreScene, ShelvesAreSolid) {
  const SyntheticScene s = make_store_scene();
  const VoxelGrid g = rasterize(s);
  EXPECT_EQ(g.dims(), (std::array<int, 3>{40, 32, 12}));
  const auto shelf_cell = g.locate(Vec3(5.0, 1.6, 1.0));
  ASSERT_TRUE(shelf_cell);
  EXPECT_TRUE(g.occupied(g.linear(*shelf_cell)));
  const auto aisle = g.locate(Vec3(5.0, 2.5, 1.0));
  EXPECT_FALSE(g.occupied(g.linear(*aisle)));
}

}  // namespace
}  // namespace camplace
