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

#include "camplace/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "camplace/hash.hpp"
#include "camplace/provenance.hpp"
#include "json.hpp"

namespace camplace {
namespace {

using nlohmann::json;

constexpr char kGridFormat[] = "camplace-grid";
constexpr char kTargetsFormat[] = "camplace-targets";
constexpr char kCandidatesFormat[] = "camplace-candidates";
constexpr char kSolutionFormat[] = "camplace-solution";

std::uint64_t hash_from_hex(const std::string& s) {
  if (s.size() != 16) throw InputError("malformed hash '" + s + "'");
  std::size_t pos = 0;
  const std::uint64_t v = std::stoull(s, &pos, 16);
  if (pos != s.size()) throw InputError("malformed hash '" + s + "'");
  return v;
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

void expect_format(const json& j, const char* format) {
  if (j.value("format", std::string()) != format) {
    throw InputError(std::string("expected a ") + format + " document");
  }
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
std::uint64_t get_le(const std::vector<std::uint8_t>& in, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_occupancy_rle(const std::vector<std::uint8_t>& occupancy) {
  std::vector<std::uint8_t> out;
  auto put_varint = [&](std::uint64_t v) {
    do {
      std::uint8_t b = v & 0x7f;
      v >>= 7;
      if (v) b |= 0x80;
      out.push_back(b);
    } while (v);
  };
  std::uint8_t value = 0;
  std::uint64_t run = 0;
  for (std::uint8_t o : occupancy) {
    const std::uint8_t bit = o ? 1 : 0;
    if (bit != value) {
      put_varint(run);
      value = bit;
      run = 0;
    }
    ++run;
  }
  put_varint(run);
  return out;
}

std::vector<std::uint8_t> decode_occupancy_rle(const std::vector<std::uint8_t>& rle,
                                               std::size_t expected_size) {
  std::vector<std::uint8_t> out;
  out.reserve(expected_size);
  std::uint8_t value = 0;
  std::size_t pos = 0;
  while (pos < rle.size()) {
    std::uint64_t run = 0;
    int shift = 0;
    while (true) {
      if (pos >= rle.size() || shift > 63) throw InputError("truncated occupancy run");
      const std::uint8_t b = rle[pos++];
      run |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      shift += 7;
      if (!(b & 0x80)) break;
    }
    if (out.size() + run > expected_size) throw InputError("occupancy runs overflow the grid");
    out.insert(out.end(), run, value);
    value ^= 1;
  }
  if (out.size() != expected_size) throw InputError("occupancy runs do not cover the grid");
  return out;
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

std::vector<std::uint8_t> from_hex(const std::string& hex) {
  if (hex.size() % 2) throw InputError("odd-length hex string");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw InputError(std::string("invalid hex digit '") + c + "'");
  };
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

std::string grid_to_text(const VoxelGrid& grid) {
  json h;
  h["format"] = kGridFormat;
  h["version"] = 1;
  h["origin"] = {grid.origin().x(), grid.origin().y(), grid.origin().z()};
  h["voxel_size"] = grid.voxel_size();
  h["dims"] = {grid.dims()[0], grid.dims()[1], grid.dims()[2]};
  h["occupied_count"] = grid.occupied_count();
  h["encoding"] = "rle-varint-hex";
  h["hash"] = hash_to_hex(grid_hash(grid));
  return h.dump() + "\n" + to_hex(encode_occupancy_rle(grid.occupancy())) + "\n";
}

VoxelGrid grid_from_text(const std::string& text) {
  const auto nl = text.find('\n');
  if (nl == std::string::npos) throw InputError("grid file lacks a payload line");
  const json h = parse_json(text.substr(0, nl), "grid header");
  expect_format(h, kGridFormat);
  std::string payload = text.substr(nl + 1);
  while (!payload.empty() && (payload.back() == '\n' || payload.back() == '\r')) payload.pop_back();
  try {
    const auto& o = h.at("origin");
    const auto& d = h.at("dims");
    VoxelGrid grid(Vec3(o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>()),
                   h.at("voxel_size").get<double>(),
                   {d.at(0).get<int>(), d.at(1).get<int>(), d.at(2).get<int>()});
    const auto occ = decode_occupancy_rle(from_hex(payload), grid.size());
    for (std::size_t i = 0; i < occ.size(); ++i) grid.set_occupied(i, occ[i] != 0);
    if (grid.occupied_count() != h.at("occupied_count").get<std::size_t>()) {
      throw InputError("grid occupied_count does not match the payload");
    }
    return grid;
  } catch (const json::exception& e) {
    throw InputError(std::string("grid header: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

void write_grid(const std::filesystem::path& path, const VoxelGrid& grid) {
  write_text_file(path, grid_to_text(grid));
}

VoxelGrid read_grid(const std::filesystem::path& path) {
  return grid_from_text(read_text_file(path));
}

void write_targets(const std::filesystem::path& path, const CoverageTarget& targets,
                   std::uint64_t grid_hash) {
  json j;
  j["format"] = kTargetsFormat;
  j["version"] = 1;
  j["grid_hash"] = hash_to_hex(grid_hash);
  j["hash"] = hash_to_hex(targets_hash(grid_hash, targets));
  j["targets"] = json::array();
  for (std::size_t k = 0; k < targets.size(); ++k) {
    j["targets"].push_back({{"index", targets.voxel_indices[k]},
                            {"gamma", targets.gamma[k]},
                            {"label", to_string(targets.labels[k])}});
  }
  write_text_file(path, j.dump(1) + "\n");
}

TargetsFile read_targets(const std::filesystem::path& path) {
  const json j = parse_json(read_text_file(path), "targets");
  expect_format(j, kTargetsFormat);
  try {
    TargetsFile f;
    f.grid_hash = hash_from_hex(j.at("grid_hash").get<std::string>());
    for (const json& t : j.at("targets")) {
      f.targets.push_back(t.at("index").get<std::size_t>(), t.at("gamma").get<int>(),
                          region_label_from_string(t.at("label").get<std::string>()));
    }
    f.hash = targets_hash(f.grid_hash, f.targets);
    if (hash_to_hex(f.hash) != j.at("hash").get<std::string>()) {
      throw InputError("targets file hash does not match its contents");
    }
    return f;
  } catch (const json::exception& e) {
    throw InputError(std::string("targets: ") + e.what());
  }
}

std::string candidates_to_json_text(const CandidateSet& c, std::uint64_t grid_hash) {
  json j;
  j["format"] = kCandidatesFormat;
  j["version"] = 1;
  j["grid_hash"] = hash_to_hex(grid_hash);
  j["hash"] = hash_to_hex(candidates_hash(grid_hash, c));
  const CameraIntrinsics& in = c.intrinsics;
  j["intrinsics"] = {{"hfov_deg", in.hfov_deg},   {"vfov_deg", in.vfov_deg},
                     {"width_px", in.width_px},   {"height_px", in.height_px},
                     {"max_range", in.max_range}};
  j["candidates"] = json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Pose6& p = c.poses[i];
    j["candidates"].push_back({{"x", p.position.x()},
                               {"y", p.position.y()},
                               {"z", p.position.z()},
                               {"yaw", p.yaw_deg},
                               {"pitch", p.pitch_deg},
                               {"roll", p.roll_deg},
                               {"location_group", c.location_group[i]}});
  }
  return j.dump(1) + "\n";
}

CandidatesFile candidates_from_json_text(const std::string& text) {
  const json j = parse_json(text, "candidates");
  expect_format(j, kCandidatesFormat);
  try {
    CandidatesFile f;
    f.grid_hash = hash_from_hex(j.at("grid_hash").get<std::string>());
    const json& in = j.at("intrinsics");
    f.candidates.intrinsics = {in.at("hfov_deg").get<double>(), in.at("vfov_deg").get<double>(),
                               in.at("width_px").get<int>(), in.at("height_px").get<int>(),
                               in.at("max_range").get<double>()};
    for (const json& p : j.at("candidates")) {
      f.candidates.poses.push_back(
          make_pose(Vec3(p.at("x").get<double>(), p.at("y").get<double>(), p.at("z").get<double>()),
                    p.at("yaw").get<double>(), p.at("pitch").get<double>(),
                    p.at("roll").get<double>()));
      f.candidates.location_group.push_back(p.at("location_group").get<int>());
    }
    validate_candidates(f.candidates);
    f.hash = candidates_hash(f.grid_hash, f.candidates);
    return f;
  } catch (const json::exception& e) {
    throw InputError(std::string("candidates: ") + e.what());
  }
}

void write_candidates(const std::filesystem::path& path, const CandidateSet& c,
                      std::uint64_t grid_hash) {
  write_text_file(path, candidates_to_json_text(c, grid_hash));
}

CandidatesFile read_candidates(const std::filesystem::path& path) {
  return candidates_from_json_text(read_text_file(path));
}

std::vector<std::uint8_t> matrix_to_bytes(const VisibilityMatrix& v) {
  std::vector<std::uint8_t> out{'C', 'P', 'V', 'M'};
  put_u32(out, kMatrixFormatVersion);
  put_u64(out, v.n_g);
  put_u64(out, v.n_p);
  put_u64(out, v.provenance);
  const std::size_t row_bytes = (v.n_p + 7) / 8;
  for (const BitRow& r : v.rows) {
    for (std::size_t b = 0; b < row_bytes; ++b) {
      out.push_back(static_cast<std::uint8_t>(r.words()[b / 8] >> (8 * (b % 8))));
    }
  }
  return out;
}

VisibilityMatrix matrix_from_bytes(const std::vector<std::uint8_t>& in) {
  constexpr std::size_t kHeader = 4 + 4 + 8 + 8 + 8;
  if (in.size() < kHeader || in[0] != 'C' || in[1] != 'P' || in[2] != 'V' || in[3] != 'M') {
    throw InputError("not a CPVM visibility matrix");
  }
  if (get_le(in, 4, 4) != kMatrixFormatVersion) throw InputError("unsupported CPVM version");
  VisibilityMatrix v;
  v.n_g = get_le(in, 8, 8);
  v.n_p = get_le(in, 16, 8);
  v.provenance = get_le(in, 24, 8);
  const std::size_t row_bytes = (v.n_p + 7) / 8;
  if (in.size() != kHeader + v.n_g * row_bytes) throw InputError("CPVM payload size mismatch");
  v.rows.assign(v.n_g, BitRow(v.n_p));
  for (std::size_t i = 0; i < v.n_g; ++i) {
    for (std::size_t j = 0; j < v.n_p; ++j) {
      if ((in[kHeader + i * row_bytes + j / 8] >> (j % 8)) & 1) v.rows[i].set(j);
    }
  }
  return v;
}

void write_matrix(const std::filesystem::path& path, const VisibilityMatrix& v) {
  const auto bytes = matrix_to_bytes(v);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

VisibilityMatrix read_matrix(const std::filesystem::path& path) {
  const std::string s = read_text_file(path);
  return matrix_from_bytes(std::vector<std::uint8_t>(s.begin(), s.end()));
}

Metrics compute_metrics(const CoverageInstance& inst, const Selection& x) {
  const CoverageProfile p = coverage_profile(inst, x);
  Metrics m;
  m.deficit_cost = deficit_cost(p.counts, inst.gamma);
  const std::int64_t denom = inst.gamma_sq_sum();
  m.coverage_gap = denom > 0 ? static_cast<double>(m.deficit_cost) / static_cast<double>(denom) : 0.0;
  m.nontriangulatable_fraction = inst.n_p > 0 ? nontriangulatable_fraction(p.counts) : 0.0;
  m.satisfied = std::count(p.deficits.begin(), p.deficits.end(), 0);
  m.cameras = x.count();
  return m;
}

namespace {

json provenance_json(const Provenance& p) {
  return {{"grid", hash_to_hex(p.grid)},
          {"targets", hash_to_hex(p.targets)},
          {"candidates", hash_to_hex(p.candidates)},
          {"matrix", hash_to_hex(p.matrix)}};
}

json metrics_json(const Metrics& m) {
  return {{"deficit_cost", m.deficit_cost},
          {"coverage_gap", m.coverage_gap},
          {"nontriangulatable_fraction", m.nontriangulatable_fraction},
          {"satisfied", m.satisfied},
          {"cameras", m.cameras}};
}

}  // namespace

std::string solution_to_json_text(const SolverReport& r, const CandidateSet& c,
                                  const CoverageInstance& inst, const Provenance& prov) {
  json j;
  j["format"] = kSolutionFormat;
  j["version"] = 1;
  j["method"] = to_string(r.method);
  j["budget"] = r.selection.budget;
  j["effective_budget"] = r.effective_budget;
  j["selected"] = json::array();
  for (int i : r.selection.indices()) {
    const Pose6& p = c.poses[static_cast<std::size_t>(i)];
    j["selected"].push_back({{"index", i},
                             {"x", p.position.x()},
                             {"y", p.position.y()},
                             {"z", p.position.z()},
                             {"yaw", p.yaw_deg},
                             {"pitch", p.pitch_deg},
                             {"roll", p.roll_deg},
                             {"location_group", c.location_group[static_cast<std::size_t>(i)]}});
  }
  j["objective"] = r.objective;
  j["objective_sense"] = r.sense == Sense::kMinimize ? "minimize" : "maximize";
  j["best_bound"] = r.best_bound;
  j["status"] = to_string(r.status);
  j["nodes_explored"] = r.nodes_explored;
  j["metrics"] = metrics_json(compute_metrics(inst, r.selection));
  j["provenance"] = provenance_json(prov);
  j["warnings"] = r.warnings;
  return j.dump(1) + "\n";
}

SolutionFile solution_from_json_text(const std::string& text) {
  const json j = parse_json(text, "solution");
  expect_format(j, kSolutionFormat);
  try {
    SolutionFile s;
    s.method = j.at("method").get<std::string>();
    s.budget = j.at("budget").get<int>();
    for (const json& e : j.at("selected")) s.selected.push_back(e.at("index").get<int>());
    s.objective = j.at("objective").get<std::int64_t>();
    s.sense = j.at("objective_sense").get<std::string>();
    s.best_bound = j.at("best_bound").get<std::int64_t>();
    s.status = j.at("status").get<std::string>();
    s.matrix_provenance = hash_from_hex(j.at("provenance").at("matrix").get<std::string>());
    return s;
  } catch (const json::exception& e) {
    throw InputError(std::string("solution: ") + e.what());
  }
}

SolutionFile read_solution(const std::filesystem::path& path) {
  return solution_from_json_text(read_text_file(path));
}

std::string metrics_to_json_text(const Metrics& m, const Provenance& prov,
                                 const std::string& counts_csv_path) {
  json j = metrics_json(m);
  j["per_voxel_counts_path"] = counts_csv_path;
  j["provenance"] = provenance_json(prov);
  return j.dump(1) + "\n";
}

std::string coverage_csv(const VoxelGrid& grid, const CoverageTarget& targets,
                         const std::vector<int>& counts) {
  std::ostringstream out;
  out << "x,y,z,count,gamma,label\n";
  out << std::setprecision(10);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const Vec3 c = grid.center(targets.voxel_indices[k]);
    out << c.x() << ',' << c.y() << ',' << c.z() << ',' << counts[k] << ',' << targets.gamma[k]
        << ',' << to_string(targets.labels[k]) << '\n';
  }
  return out.str();
}

}  // namespace camplace
