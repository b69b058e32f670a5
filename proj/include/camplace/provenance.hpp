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

#ifndef CAMPLACE_PROVENANCE_HPP_
#define CAMPLACE_PROVENANCE_HPP_

#include <cstdint>

#include "camplace/camera.hpp"
#include "camplace/geometry.hpp"
#include "camplace/visibility.hpp"

namespace camplace {

// Each stage hash folds in the hash of the stage it was derived from, so the
// matrix hash pins the whole chain grid -> targets -> candidates -> matrix.
std::uint64_t grid_hash(const VoxelGrid& grid);
std::uint64_t targets_hash(std::uint64_t grid_hash, const CoverageTarget& targets);
std::uint64_t candidates_hash(std::uint64_t grid_hash, const CandidateSet& candidates);
std::uint64_t matrix_provenance(std::uint64_t targets_hash, std::uint64_t candidates_hash,
                                const RaycastConfig& cfg);
std::uint64_t matrix_provenance(const VoxelGrid& grid, const CoverageTarget& targets,
                                const CandidateSet& candidates, const RaycastConfig& cfg);

}  // namespace camplace

#endif  // CAMPLACE_PROVENANCE_HPP_
