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

#ifndef CAMPLACE_OBJECTIVE_HPP_
#define CAMPLACE_OBJECTIVE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "camplace/visibility.hpp"

namespace camplace {

// The combinatorial core of a placement problem: which targets each candidate
// sees, the required overlap per target, and the location group per candidate.
struct CoverageInstance {
  std::size_t n_p = 0;
  std::vector<std::vector<std::uint32_t>> rows;  // sorted target columns per candidate
  std::vector<int> gamma;
  std::vector<int> group;
  int n_groups = 0;

  std::size_t n_g() const { return rows.size(); }
  // Sum of gamma_j^2; the deficit cost of the empty selection.
  std::int64_t gamma_sq_sum() const;
  // Throws InputError when arrays disagree or a group id is out of range.
  void validate() const;
};

CoverageInstance make_instance(const VisibilityMatrix& v, const std::vector<int>& gamma,
                               const std::vector<int>& location_group);

// Camera selection x over the candidate pool.
struct Selection {
  std::vector<std::uint8_t> chosen;
  int budget = 0;

  static Selection empty(std::size_t n_g, int budget) {
    return {std::vector<std::uint8_t>(n_g, 0), budget};
  }
  static Selection of(std::size_t n_g, int budget, std::span<const int> indices);
  std::vector<int> indices() const;
  int count() const;
};

// Throws InputError if the selection exceeds its budget or picks two
// candidates from one location group.
void check_feasible(const CoverageInstance& inst, const Selection& x);

struct CoverageProfile {
  std::vector<int> counts;
  std::vector<int> deficits;
};

CoverageProfile coverage_profile(const CoverageInstance& inst, const Selection& x);

// Sum over targets of max(gamma_j - count_j, 0)^2. Exact integer.
std::int64_t deficit_cost(const CoverageInstance& inst, const Selection& x);
std::int64_t deficit_cost(std::span<const int> counts, std::span<const int> gamma);

// deficit_cost / sum gamma_j^2.
double coverage_gap(const CoverageInstance& inst, const Selection& x);

// Fraction of targets seen by fewer than two selected cameras.
double nontriangulatable_fraction(const CoverageInstance& inst, const Selection& x);
double nontriangulatable_fraction(std::span<const int> counts);

// Number of targets with count_j >= gamma_j.
std::int64_t satisfied_count(const CoverageInstance& inst, const Selection& x);

// deficit_cost(x) - deficit_cost(x + {i}), via the closed form
// sum over seen targets with deficit d > 0 of (2d - 1).
std::int64_t marginal_gain(const CoverageInstance& inst, const Selection& x, int i);
std::int64_t marginal_gain(std::span<const std::uint32_t> row,
                           std::span<const int> deficits);

}  // namespace camplace

#endif  // CAMPLACE_OBJECTIVE_HPP_
