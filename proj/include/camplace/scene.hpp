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

#ifndef CAMPLACE_SCENE_HPP_
#define CAMPLACE_SCENE_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "camplace/geometry.hpp"

namespace camplace {

// A room described by axis-aligned solids, rasterized straight to a grid.
// The grid spans `room` exactly; walls, floor and ceiling are one voxel thick
// and lie inside the room extent.
struct SyntheticScene {
  Box room;
  double voxel_size = kDefaultVoxelSize;
  bool walls = true;
  bool floor = true;
  bool ceiling = true;
  std::vector<Box> solids;
  // Rasterized as solids and also reported as shelf label boxes.
  std::vector<Box> shelves;
};

// Voxels whose centers fall inside a solid or shelf box are occupied.
VoxelGrid rasterize(const SyntheticScene& scene,
                    std::size_t max_voxels = kDefaultMaxVoxels);

SyntheticScene load_scene(const std::filesystem::path& path);
SyntheticScene scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const SyntheticScene& scene);

// 10 x 8 x 3 m convenience store: four 6 m shelf rows (0.5 m deep, 1.75 m
// tall) running along X, and one pillar near the east wall.
SyntheticScene make_store_scene(double voxel_size = kDefaultVoxelSize);

}  // namespace camplace

#endif  // CAMPLACE_SCENE_HPP_
