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

#include "camplace/objective.hpp"

#include <algorithm>
#include <string>

namespace camplace {

std::int64_t CoverageInstance::gamma_sq_sum() const {
  std::int64_t s = 0;
  for (int g : gamma) s += static_cast<std::int64_t>(g) * g;
  return s;
}

void CoverageInstance::validate() const {
  if (gamma.size() != n_p) throw InputError("gamma length differs from target count");
  if (group.size() != rows.size()) throw InputError("group length differs from candidate count");
  for (int g : gamma) {
    if (g < 0) throw InputError("gamma must be non-negative");
  }
  for (int g : group) {
    if (g < 0 || g >= n_groups) throw InputError("location group out of range");
  }
  for (const auto& row : rows) {
    for (std::uint32_t j : row) {
      if (j >= n_p) throw InputError("visibility column out of range");
    }
  }
}

CoverageInstance make_instance(const VisibilityMatrix& v, const std::vector<int>& gamma,
                               const std::vector<int>& location_group) {
  if (v.rows.size() != v.n_g) throw InputError("matrix row count mismatch");
  CoverageInstance inst;
  inst.n_p = v.n_p;
  inst.gamma = gamma;
  inst.group = location_group;
  inst.rows.reserve(v.n_g);
  for (const BitRow& r : v.rows) {
    if (r.size() != v.n_p) throw InputError("matrix row length mismatch");
    inst.rows.push_back(r.indices());
  }
  inst.n_groups =
      location_group.empty() ? 0 : *std::max_element(location_group.begin(), location_group.end()) + 1;
  inst.validate();
  return inst;
}

Selection Selection::of(std::size_t n_g, int budget, std::span<const int> indices) {
  Selection x = empty(n_g, budget);
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= n_g) {
      throw InputError("selected index " + std::to_string(i) + " out of range");
    }
    x.chosen[static_cast<std::size_t>(i)] = 1;
  }
  return x;
}

std::vector<int> Selection::indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (chosen[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

int Selection::count() const {
  return static_cast<int>(std::count(chosen.begin(), chosen.end(), std::uint8_t{1}));
}

void check_feasible(const CoverageInstance& inst, const Selection& x) {
  if (x.chosen.size() != inst.n_g()) throw InputError("selection length mismatch");
  if (x.count() > x.budget) throw InputError("selection exceeds its budget");
  std::vector<std::uint8_t> used(static_cast<std::size_t>(inst.n_groups), 0);
  for (int i : x.indices()) {
    auto& u = used[static_cast<std::size_t>(inst.group[static_cast<std::size_t>(i)])];
    if (u) throw InputError("two selected cameras share a location");
    u = 1;
  }
}

CoverageProfile coverage_profile(const CoverageInstance& inst, const Selection& x) {
  if (x.chosen.size() != inst.n_g()) throw InputError("selection length mismatch");
  CoverageProfile p;
  p.counts.assign(inst.n_p, 0);
  for (std::size_t i = 0; i < inst.n_g(); ++i) {
    if (!x.chosen[i]) continue;
    for (std::uint32_t j : inst.rows[i]) ++p.counts[j];
  }
  p.deficits.resize(inst.n_p);
  for (std::size_t j = 0; j < inst.n_p; ++j) {
    p.deficits[j] = std::max(inst.gamma[j] - p.counts[j], 0);
  }
  return p;
}

std::int64_t deficit_cost(std::span<const int> counts, std::span<const int> gamma) {
  if (counts.size() != gamma.size()) throw InputError("counts and gamma differ in length");
  std::int64_t cost = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const std::int64_t d = std::max(gamma[j] - counts[j], 0);
    cost += d * d;
  }
  return cost;
}

std::int64_t deficit_cost(const CoverageInstance& inst, const Selection& x) {
  return deficit_cost(coverage_profile(inst, x).counts, inst.gamma);
}

double coverage_gap(const CoverageInstance& inst, const Selection& x) {
  const std::int64_t denom = inst.gamma_sq_sum();
  if (denom <= 0) throw InputError("coverage gap undefined: all target gammas are zero");
  return static_cast<double>(deficit_cost(inst, x)) / static_cast<double>(denom);
}

double nontriangulatable_fraction(std::span<const int> counts) {
  if (counts.empty()) throw InputError("nontriangulatable fraction of an empty target set");
  const auto below = std::count_if(counts.begin(), counts.end(), [](int c) { return c < 2; });
  return static_cast<double>(below) / static_cast<double>(counts.size());
}

double nontriangulatable_fraction(const CoverageInstance& inst, const Selection& x) {
  return nontriangulatable_fraction(coverage_profile(inst, x).counts);
}

std::int64_t satisfied_count(const CoverageInstance& inst, const Selection& x) {
  const CoverageProfile p = coverage_profile(inst, x);
  return std::count(p.deficits.begin(), p.deficits.end(), 0);
}

std::int64_t marginal_gain(std::span<const std::uint32_t> row,
                           std::span<const int> deficits) {
  std::int64_t gain = 0;
  for (std::uint32_t j : row) {
    const int d = deficits[j];
    if (d > 0) gain += 2 * d - 1;
  }
  return gain;
}

std::int64_t marginal_gain(const CoverageInstance& inst, const Selection& x, int i) {
  if (i < 0 || static_cast<std::size_t>(i) >= inst.n_g()) {
    throw InputError("candidate index out of range");
  }
  if (x.chosen[static_cast<std::size_t>(i)]) {
    throw InputError("candidate " + std::to_string(i) + " is already selected");
  }
  return marginal_gain(inst.rows[static_cast<std::size_t>(i)],
                       coverage_profile(inst, x).deficits);
}

}  // namespace camplace
