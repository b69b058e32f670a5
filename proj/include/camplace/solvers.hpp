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

#ifndef CAMPLACE_SOLVERS_HPP_
#define CAMPLACE_SOLVERS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "camplace/mip_model.hpp"
#include "camplace/objective.hpp"

namespace camplace {

enum class Method { kProposedMip, kProposedGreedy, kGreedyBinary, kZhaoMip, kExhaustive };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct SolverConfig {
  Method method = Method::kProposedMip;
  int budget = 1;
  double time_budget = 60.0;  // seconds, wall clock
  int gamma_max = kDefaultGammaMax;
  std::uint64_t seed = 0;
  // Deterministic work cap on branch-and-bound nodes; unset means unlimited.
  std::optional<std::int64_t> node_limit;

  void validate() const;
};

enum class SolverStatus { kOptimal, kTimeLimitIncumbent, kInfeasible, kHeuristic };

const char* to_string(SolverStatus s);

// Which way `objective` and `best_bound` point. The proposed formulation
// minimizes the squared deficit; the binary-satisfaction baseline maximizes
// the number of targets reaching their gamma.
enum class Sense { kMinimize, kMaximize };

struct TracePoint {
  std::int64_t nodes;
  std::int64_t incumbent;
  std::int64_t bound;
};

struct SolverReport {
  Method method = Method::kProposedMip;
  Selection selection;
  Sense sense = Sense::kMinimize;
  std::int64_t objective = 0;
  std::int64_t best_bound = 0;
  SolverStatus status = SolverStatus::kHeuristic;
  double elapsed_s = 0.0;
  std::int64_t nodes_explored = 0;
  int effective_budget = 0;
  std::vector<TracePoint> trace;
  std::vector<std::string> warnings;
};

// Greedy on the squared-deficit gain, one camera per location, lowest index
// on ties. Stops at the budget or when no candidate lowers the cost.
SolverReport solve_greedy_proposed(const CoverageInstance& inst, const SolverConfig& cfg);

// Greedy on the number of newly satisfied targets. When no candidate
// satisfies a new target it falls back to the candidate seeing the most
// never-seen targets, then the most unsatisfied targets.
SolverReport solve_greedy_binary(const CoverageInstance& inst, const SolverConfig& cfg);

// Depth-first branch-and-bound over x for the squared-deficit MILP. Branches
// on the candidate with the largest marginal gain (include first); a node's
// bound adds the best k single-camera gains over distinct unused locations.
SolverReport solve_mip(const MipModel& model, const SolverConfig& cfg);

// Binary-satisfaction baseline: maximize the number of targets with
// count_j >= gamma_j under the same budget and location constraints, solved
// by the same search with a hit-counting bound.
SolverReport solve_zhao(const CoverageInstance& inst, const SolverConfig& cfg);

enum class Utility { kSquaredDeficit, kSatisfied };

inline constexpr double kEnumerationCap = 1e7;

// Number of feasible selections (at most `budget` cameras, one per location).
double count_feasible_selections(const CoverageInstance& inst, int budget);

// Exhaustive search. Throws InputError when the selection count exceeds
// kEnumerationCap.
SolverReport enumerate_exact(const CoverageInstance& inst, const SolverConfig& cfg,
                             Utility utility = Utility::kSquaredDeficit);

// Dispatches on cfg.method.
SolverReport solve(const CoverageInstance& inst, const SolverConfig& cfg);

}  // namespace camplace

#endif  // CAMPLACE_SOLVERS_HPP_
