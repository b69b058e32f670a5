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

#include "camplace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace camplace {
namespace {

std::string at_line(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

// Parses every whitespace-separated token of `line` as a double.
bool parse_numbers(const std::string& line, std::vector<double>* out) {
  out->clear();
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') return false;
    out->push_back(v);
  }
  return true;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

Rgb to_rgb(double r, double g, double b) {
  auto clamp = [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  };
  return {clamp(r), clamp(g), clamp(b)};
}

PointCloud load_xyz(std::ifstream& in, const std::filesystem::path& path) {
  PointCloud cloud;
  std::string line;
  std::vector<double> values;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line) || line.front() == '#') continue;
    if (!parse_numbers(line, &values) || (values.size() != 3 && values.size() != 6)) {
      throw InputError(at_line(path, line_no) + "expected 'x y z [r g b]'");
    }
    if (!std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); })) {
      throw InputError(at_line(path, line_no) + "non-finite value");
    }
    const bool colored = values.size() == 6;
    if (!cloud.points.empty() && colored != cloud.has_colors()) {
      throw InputError(at_line(path, line_no) + "inconsistent color columns");
    }
    cloud.points.emplace_back(values[0], values[1], values[2]);
    if (colored) cloud.colors.push_back(to_rgb(values[3], values[4], values[5]));
  }
  return cloud;
}

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> properties;
  bool has_list = false;
};

PointCloud load_ply(std::ifstream& in, const std::filesystem::path& path) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<PlyElement> elements;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream words(line);
    std::string keyword;
    words >> keyword;
    if (line_no == 1) {
      if (keyword != "ply") throw InputError(at_line(path, 1) + "missing 'ply' magic");
      continue;
    }
    if (keyword == "format") {
      std::string fmt;
      words >> fmt;
      if (fmt != "ascii") {
        throw InputError(at_line(path, line_no) + "only ASCII PLY is supported");
      }
    } else if (keyword == "element") {
      PlyElement e;
      if (!(words >> e.name >> e.count)) {
        throw InputError(at_line(path, line_no) + "malformed element line");
      }
      elements.push_back(e);
    } else if (keyword == "property") {
      if (elements.empty()) {
        throw InputError(at_line(path, line_no) + "property before element");
      }
      std::string type, name;
      words >> type;
      if (type == "list") {
        elements.back().has_list = true;
        continue;
      }
      words >> name;
      elements.back().properties.push_back(name);
    } else if (keyword == "end_header") {
      header_done = true;
      break;
    } else if (keyword != "comment" && keyword != "obj_info" && !keyword.empty()) {
      throw InputError(at_line(path, line_no) + "unknown header keyword '" +
                       keyword + "'");
    }
  }
  if (!header_done) throw InputError(path.string() + ": missing end_header");

  PointCloud cloud;
  std::vector<double> values;
  for (const PlyElement& e : elements) {
    const bool is_vertex = e.name == "vertex";
    int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1;
    for (int k = 0; k < static_cast<int>(e.properties.size()); ++k) {
      const std::string& p = e.properties[k];
      if (p == "x") ix = k;
      else if (p == "y") iy = k;
      else if (p == "z") iz = k;
      else if (p == "red") ir = k;
      else if (p == "green") ig = k;
      else if (p == "blue") ib = k;
    }
    if (is_vertex && (ix < 0 || iy < 0 || iz < 0)) {
      throw InputError(path.string() + ": vertex element lacks x/y/z properties");
    }
    const bool colored = ir >= 0 && ig >= 0 && ib >= 0;
    for (std::size_t n = 0; n < e.count; ++n) {
      if (!std::getline(in, line)) {
        throw InputError(at_line(path, line_no + 1) + "unexpected end of file");
      }
      ++line_no;
      if (!is_vertex) continue;
      if (!parse_numbers(line, &values) ||
          (!e.has_list && values.size() != e.properties.size()) ||
          values.size() < e.properties.size()) {
        throw InputError(at_line(path, line_no) + "malformed vertex line");
      }
      const Vec3 p(values[ix], values[iy], values[iz]);
      if (!p.allFinite()) throw InputError(at_line(path, line_no) + "non-finite value");
      cloud.points.push_back(p);
      if (colored) cloud.colors.push_back(to_rgb(values[ir], values[ig], values[ib]));
    }
  }
  return cloud;
}

}  // namespace

PointCloud load_point_cloud(const std::filesystem::path& path, CloudFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open point cloud '" + path.string() + "'");
  PointCloud cloud =
      format == CloudFormat::kXyzAscii ? load_xyz(in, path) : load_ply(in, path);
  if (cloud.points.empty()) {
    throw InputError("point cloud '" + path.string() + "' contains no points");
  }
  return cloud;
}

VoxelGrid::VoxelGrid(const Vec3& origin, double voxel_size, std::array<int, 3> dims)
    : origin_(origin), voxel_size_(voxel_size), dims_(dims) {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
    throw InputError("voxel_size must be positive");
  }
  if (!origin.allFinite()) throw InputError("grid origin must be finite");
  if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0) {
    throw InputError("grid dims must be positive");
  }
  occupancy_.assign(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 0);
}

std::size_t VoxelGrid::occupied_count() const {
  return static_cast<std::size_t>(
      std::count(occupancy_.begin(), occupancy_.end(), std::uint8_t{1}));
}

GridIndex VoxelGrid::unravel(std::size_t index) const {
  const std::size_t nx = dims_[0], ny = dims_[1];
  return {static_cast<int>(index % nx), static_cast<int>((index / nx) % ny),
          static_cast<int>(index / (nx * ny))};
}

Vec3 VoxelGrid::center(std::size_t index) const {
  const GridIndex g = unravel(index);
  return origin_ + voxel_size_ * Vec3(g.x + 0.5, g.y + 0.5, g.z + 0.5);
}

Vec3 VoxelGrid::max_corner() const {
  return origin_ + voxel_size_ * Vec3(dims_[0], dims_[1], dims_[2]);
}

namespace {

// floor() that treats values within 1e-9 of an integer as that integer, so a
// point computed as origin + k * size lands in cell k despite rounding.
double snapped_floor(double rel) {
  const double r = std::round(rel);
  return std::abs(rel - r) <= 1e-9 ? r : std::floor(rel);
}

}  // namespace

std::optional<GridIndex> VoxelGrid::locate(const Vec3& p) const {
  const Vec3 rel = (p - origin_) / voxel_size_;
  std::array<int, 3> c{};
  for (int a = 0; a < 3; ++a) {
    const double f = snapped_floor(rel[a]);
    if (!(f >= 0.0) || f >= dims_[a]) return std::nullopt;
    c[a] = static_cast<int>(f);
  }
  return GridIndex{c[0], c[1], c[2]};
}

std::optional<GridIndex> VoxelGrid::locate_inclusive(const Vec3& p) const {
  const Vec3 rel = (p - origin_) / voxel_size_;
  std::array<int, 3> c{};
  for (int a = 0; a < 3; ++a) {
    double f = snapped_floor(rel[a]);
    if (f == dims_[a]) f = dims_[a] - 1;
    if (!(f >= 0.0) || f >= dims_[a]) return std::nullopt;
    c[a] = static_cast<int>(f);
  }
  return GridIndex{c[0], c[1], c[2]};
}

std::optional<Vec3> VoxelGrid::surface_normal(std::size_t index) const {
  if (!occupied(index)) return std::nullopt;
  static constexpr int kOffsets[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                         {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
  const GridIndex g = unravel(index);
  Vec3 sum = Vec3::Zero();
  int free_count = 0;
  for (const auto& o : kOffsets) {
    const int x = g.x + o[0], y = g.y + o[1], z = g.z + o[2];
    if (!in_bounds(x, y, z) || occupied(x, y, z)) continue;
    sum += Vec3(o[0], o[1], o[2]);
    ++free_count;
  }
  if (free_count == 0) return std::nullopt;
  // Offsets are relative to the center, so the centroid direction is the sum.
  const double norm = sum.norm();
  if (norm < 1e-12) return std::nullopt;
  return sum / norm;
}

VoxelGrid voxelize(const PointCloud& cloud, double voxel_size, int min_points,
                   std::size_t max_voxels) {
  if (!(voxel_size > 0.0)) throw InputError("voxel_size must be positive");
  if (min_points < 1) throw InputError("min_points must be at least 1");
  if (cloud.points.empty()) throw InputError("cannot voxelize an empty point cloud");

  Vec3 lo = cloud.points.front(), hi = cloud.points.front();
  for (const Vec3& p : cloud.points) {
    if (!p.allFinite()) throw InputError("point cloud contains non-finite points");
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  Vec3 origin;
  std::array<int, 3> dims{};
  double total = 1.0;
  for (int a = 0; a < 3; ++a) {
    origin[a] = std::floor(lo[a] / voxel_size) * voxel_size;
    const double cells = std::ceil((hi[a] - origin[a]) / voxel_size - 1e-9);
    const double n = std::max(1.0, cells);
    total *= n;
    if (total > static_cast<double>(max_voxels)) {
      throw InputError("voxel grid would exceed the limit of " +
                       std::to_string(max_voxels) + " voxels");
    }
    dims[a] = static_cast<int>(n);
  }

  VoxelGrid grid(origin, voxel_size, dims);
  std::vector<int> counts(grid.size(), 0);
  for (const Vec3& p : cloud.points) {
    const auto g = grid.locate_inclusive(p);
    if (g) ++counts[grid.linear(*g)];
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] >= min_points) grid.set_occupied(i, true);
  }
  return grid;
}

const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::kFreeSpace:
      return "free-space-plane";
    case RegionLabel::kShelf:
      return "shelf";
    case RegionLabel::kCustom:
      return "custom";
  }
  return "custom";
}

RegionLabel region_label_from_string(const std::string& s) {
  if (s == "free-space-plane") return RegionLabel::kFreeSpace;
  if (s == "shelf") return RegionLabel::kShelf;
  if (s == "custom") return RegionLabel::kCustom;
  throw InputError("unknown region label '" + s + "'");
}

CoverageTarget build_free_space_targets(const VoxelGrid& grid,
                                        const std::vector<double>& heights,
                                        int gamma) {
  if (gamma < 0) throw InputError("gamma must be non-negative");
  const auto& d = grid.dims();
  const double extent = d[2] * grid.voxel_size();
  CoverageTarget out;
  std::vector<int> slabs;
  for (double h : heights) {
    if (!std::isfinite(h) || h < 0.0 || h >= extent) {
      std::ostringstream msg;
      msg << "height " << h << " m lies outside the grid's vertical extent [0, "
          << extent << ")";
      throw InputError(msg.str());
    }
    const int slab = static_cast<int>(std::floor(h / grid.voxel_size()));
    if (std::find(slabs.begin(), slabs.end(), slab) != slabs.end()) continue;
    slabs.push_back(slab);
    for (int iy = 0; iy < d[1]; ++iy) {
      for (int ix = 0; ix < d[0]; ++ix) {
        const std::size_t idx = grid.linear(ix, iy, slab);
        if (!grid.occupied(idx)) out.push_back(idx, gamma, RegionLabel::kFreeSpace);
      }
    }
  }
  return out;
}

CoverageTarget label_shelf_targets(const VoxelGrid& grid,
                                   const std::vector<Box>& boxes, int gamma) {
  if (gamma < 0) throw InputError("gamma must be non-negative");
  for (const Box& b : boxes) {
    if (!(b.max.array() > b.min.array()).all()) {
      throw InputError("shelf box must satisfy max > min on every axis");
    }
  }
  CoverageTarget out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.occupied(i)) continue;
    const Vec3 c = grid.center(i);
    if (std::any_of(boxes.begin(), boxes.end(),
                    [&](const Box& b) { return b.contains(c); })) {
      out.push_back(i, gamma, RegionLabel::kShelf);
    }
  }
  return out;
}

CoverageTarget merge_targets(const std::vector<CoverageTarget>& parts) {
  CoverageTarget out;
  std::unordered_set<std::size_t> seen;
  for (const CoverageTarget& part : parts) {
    for (std::size_t k = 0; k < part.size(); ++k) {
      if (!seen.insert(part.voxel_indices[k]).second) {
        throw InputError("voxel " + std::to_string(part.voxel_indices[k]) +
                         " appears in more than one target set");
      }
      out.push_back(part.voxel_indices[k], part.gamma[k], part.labels[k]);
    }
  }
  return out;
}

void validate_targets(const VoxelGrid& grid, const CoverageTarget& targets,
                      int gamma_max) {
  if (targets.gamma.size() != targets.size() || targets.labels.size() != targets.size()) {
    throw InputError("target arrays differ in length");
  }
  std::unordered_set<std::size_t> seen;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const std::size_t idx = targets.voxel_indices[k];
    if (idx >= grid.size()) {
      throw InputError("target voxel " + std::to_string(idx) + " is out of bounds");
    }
    if (!seen.insert(idx).second) {
      throw InputError("target voxel " + std::to_string(idx) + " is repeated");
    }
    if (targets.gamma[k] < 0 || targets.gamma[k] > gamma_max) {
      throw InputError("target gamma " + std::to_string(targets.gamma[k]) +
                       " outside [0, " + std::to_string(gamma_max) + "]");
    }
  }
}

}  // namespace camplace
