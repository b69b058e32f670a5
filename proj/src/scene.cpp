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

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace camplace {
namespace {

using nlohmann::json;

Vec3 vec_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw InputError(std::string("scene: '") + what + "' must be [x, y, z]");
  }
  Vec3 v(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  if (!v.allFinite()) throw InputError(std::string("scene: '") + what + "' not finite");
  return v;
}

Box box_from_json(const json& j) {
  Box b{vec_from_json(j.at("min"), "min"), vec_from_json(j.at("max"), "max")};
  if (!(b.max.array() > b.min.array()).all()) {
    throw InputError("scene: box must satisfy max > min on every axis");
  }
  return b;
}

json box_to_json(const Box& b) {
  return {{"min", {b.min.x(), b.min.y(), b.min.z()}},
          {"max", {b.max.x(), b.max.y(), b.max.z()}}};
}

void fill_box(VoxelGrid& grid, const Box& box) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (box.contains(grid.center(i))) grid.set_occupied(i, true);
  }
}

}  // namespace

VoxelGrid rasterize(const SyntheticScene& scene, std::size_t max_voxels) {
  if (!(scene.voxel_size > 0.0)) throw InputError("voxel_size must be positive");
  const Vec3 extent = scene.room.max - scene.room.min;
  std::array<int, 3> dims{};
  double total = 1.0;
  for (int a = 0; a < 3; ++a) {
    const double n = std::round(extent[a] / scene.voxel_size);
    if (n < 1.0) throw InputError("scene: room is smaller than one voxel");
    total *= n;
    dims[a] = static_cast<int>(n);
  }
  if (total > static_cast<double>(max_voxels)) {
    throw InputError("scene grid would exceed the limit of " +
                     std::to_string(max_voxels) + " voxels");
  }
  VoxelGrid grid(scene.room.min, scene.voxel_size, dims);
  const auto [nx, ny, nz] = dims;
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        const bool wall = scene.walls && (ix == 0 || iy == 0 || ix == nx - 1 ||
                                          iy == ny - 1);
        const bool fl = scene.floor && iz == 0;
        const bool ce = scene.ceiling && iz == nz - 1;
        if (wall || fl || ce) grid.set_occupied(grid.linear(ix, iy, iz), true);
      }
    }
  }
  for (const Box& b : scene.solids) fill_box(grid, b);
  for (const Box& b : scene.shelves) fill_box(grid, b);
  return grid;
}

SyntheticScene scene_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("scene: invalid JSON: ") + e.what());
  }
  try {
    SyntheticScene s;
    s.room = box_from_json(j.at("room"));
    s.voxel_size = j.value("voxel_size", kDefaultVoxelSize);
    s.walls = j.value("walls", true);
    s.floor = j.value("floor", true);
    s.ceiling = j.value("ceiling", true);
    for (const json& b : j.value("solids", json::array())) s.solids.push_back(box_from_json(b));
    for (const json& b : j.value("shelves", json::array())) s.shelves.push_back(box_from_json(b));
    return s;
  } catch (const json::exception& e) {
    throw InputError(std::string("scene: ") + e.what());
  }
}

SyntheticScene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scene '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return scene_from_json_text(buf.str());
}

std::string scene_to_json_text(const SyntheticScene& scene) {
  json j;
  j["room"] = box_to_json(scene.room);
  j["voxel_size"] = scene.voxel_size;
  j["walls"] = scene.walls;
  j["floor"] = scene.floor;
  j["ceiling"] = scene.ceiling;
  j["solids"] = json::array();
  for (const Box& b : scene.solids) j["solids"].push_back(box_to_json(b));
  j["shelves"] = json::array();
  for (const Box& b : scene.shelves) j["shelves"].push_back(box_to_json(b));
  return j.dump(2);
}

SyntheticScene make_store_scene(double voxel_size) {
  SyntheticScene s;
  s.room = {Vec3(0, 0, 0), Vec3(10, 8, 3)};
  s.voxel_size = voxel_size;
  for (double y : {1.5, 3.0, 4.5, 6.0}) {
    s.shelves.push_back({Vec3(2.0, y, 0.0), Vec3(8.0, y + 0.5, 1.75)});
  }
  s.solids.push_back({Vec3(8.75, 3.75, 0.0), Vec3(9.25, 4.25, 3.0)});
  return s;
}

}  // namespace camplace
