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

#ifndef CAMPLACE_IO_HPP_
#define CAMPLACE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "camplace/camera.hpp"
#include "camplace/geometry.hpp"
#include "camplace/solvers.hpp"
#include "camplace/visibility.hpp"

namespace camplace {

// Occupancy run-length code: LEB128 varint run lengths, alternating runs of
// free and occupied voxels, starting with free (possibly a zero-length run).
std::vector<std::uint8_t> encode_occupancy_rle(const std::vector<std::uint8_t>& occupancy);
std::vector<std::uint8_t> decode_occupancy_rle(const std::vector<std::uint8_t>& rle,
                                               std::size_t expected_size);
std::string to_hex(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> from_hex(const std::string& hex);

// Two lines: a compact JSON header, then the hex-encoded run-length code.
std::string grid_to_text(const VoxelGrid& grid);
VoxelGrid grid_from_text(const std::string& text);
void write_grid(const std::filesystem::path& path, const VoxelGrid& grid);
VoxelGrid read_grid(const std::filesystem::path& path);

struct TargetsFile {
  CoverageTarget targets;
  std::uint64_t grid_hash = 0;
  std::uint64_t hash = 0;
};
void write_targets(const std::filesystem::path& path, const CoverageTarget& targets,
                   std::uint64_t grid_hash);
TargetsFile read_targets(const std::filesystem::path& path);

struct CandidatesFile {
  CandidateSet candidates;
  std::uint64_t grid_hash = 0;
  std::uint64_t hash = 0;
};
std::string candidates_to_json_text(const CandidateSet& candidates, std::uint64_t grid_hash);
CandidatesFile candidates_from_json_text(const std::string& text);
void write_candidates(const std::filesystem::path& path, const CandidateSet& candidates,
                      std::uint64_t grid_hash);
CandidatesFile read_candidates(const std::filesystem::path& path);

// "CPVM" binary: magic, u32 version, u64 n_g, u64 n_p, u64 provenance (all
// little-endian), then n_g rows of ceil(n_p / 8) bytes, bit j of a row at
// byte j / 8, bit position j % 8.
inline constexpr std::uint32_t kMatrixFormatVersion = 1;
std::vector<std::uint8_t> matrix_to_bytes(const VisibilityMatrix& v);
VisibilityMatrix matrix_from_bytes(const std::vector<std::uint8_t>& bytes);
void write_matrix(const std::filesystem::path& path, const VisibilityMatrix& v);
VisibilityMatrix read_matrix(const std::filesystem::path& path);

struct Provenance {
  std::uint64_t grid = 0;
  std::uint64_t targets = 0;
  std::uint64_t candidates = 0;
  std::uint64_t matrix = 0;
};

struct Metrics {
  std::int64_t deficit_cost = 0;
  double coverage_gap = 0.0;
  double nontriangulatable_fraction = 0.0;
  std::int64_t satisfied = 0;
  int cameras = 0;
};

// Recomputes every metric from the selection, independent of solver output.
Metrics compute_metrics(const CoverageInstance& inst, const Selection& x);

struct SolutionFile {
  std::string method;
  int budget = 0;
  std::vector<int> selected;
  std::int64_t objective = 0;
  std::string sense;
  std::int64_t best_bound = 0;
  std::string status;
  std::uint64_t matrix_provenance = 0;
};

// Deterministic solution document; wall-clock time is kept out of it.
std::string solution_to_json_text(const SolverReport& report, const CandidateSet& candidates,
                                  const CoverageInstance& inst, const Provenance& provenance);
SolutionFile solution_from_json_text(const std::string& text);
SolutionFile read_solution(const std::filesystem::path& path);

std::string metrics_to_json_text(const Metrics& m, const Provenance& provenance,
                                 const std::string& counts_csv_path);

// x,y,z,count,gamma,label per target, in target order.
std::string coverage_csv(const VoxelGrid& grid, const CoverageTarget& targets,
                         const std::vector<int>& counts);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace camplace

#endif  // CAMPLACE_IO_HPP_
