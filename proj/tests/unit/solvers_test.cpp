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

#include "camplace/solvers.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

namespace camplace {
namespace {

CoverageInstance instance(std::size_t n_p, std::vector<std::vector<std::uint32_t>> rows,
                          std::vector<int> gamma, std::vector<int> group = {}) {
  CoverageInstance in;
  in.n_p = n_p;
  in.rows = std::move(rows);
  in.gamma = std::move(gamma);
  if (group.empty()) {
    for (std::size_t i = 0; i < in.rows.size(); ++i) group.push_back(static_cast<int>(i));
  }
  in.group = std::move(group);
  in.n_groups = 0;
  for (int g : in.group) in.n_groups = std::max(in.n_groups, g + 1);
  return in;
}

// Four targets needing three views each, budget 3. Saturating two targets
// leaves the other two at one view.
CoverageInstance zhao_critique() {
  return instance(4, {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {2, 3}}, {3, 3, 3, 3});
}

SolverConfig config(Method m, int budget) {
  SolverConfig cfg;
  cfg.method = m;
  cfg.budget = budget;
  return cfg;
}

void expect_location_feasible(const CoverageInstance& in, const SolverReport& r, int budget) {
  EXPECT_LE(r.selection.count(), budget);
  std::vector<int> used(in.n_groups, 0);
  for (int i : r.selection.indices()) EXPECT_EQ(used[in.group[i]]++, 0);
}

TEST(GreedyProposed, StopsWhenOneCameraCoversEverything) {
  const auto in = instance(3, {{0, 1}, {0, 1, 2}, {2}}, {1, 1, 1});
  const auto r = solve_greedy_proposed(in, config(Method::kProposedGreedy, 3));
  EXPECT_EQ(r.selection.indices(), std::vector<int>{1});
  EXPECT_EQ(r.objective, 0);
  EXPECT_EQ(r.status, SolverStatus::kHeuristic);
}

TEST(GreedyProposed, OnePerLocation) {
  const auto in = instance(2, {{0, 1}, {0, 1}}, {2, 2}, {0, 0});
  const auto r = solve_greedy_proposed(in, config(Method::kProposedGreedy, 2));
  EXPECT_EQ(r.selection.indices(), std::vector<int>{0});
  EXPECT_EQ(r.objective, 2);
  EXPECT_EQ(r.effective_budget, 1);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(GreedyProposed, NothingVisibleGivesEmptySelection) {
  const auto in = instance(2, {{}, {}}, {2, 1});
  const auto r = solve_greedy_proposed(in, config(Method::kProposedGreedy, 2));
  EXPECT_EQ(r.selection.count(), 0);
  EXPECT_EQ(r.objective, 5);
}

TEST(GreedyProposed, TieGoesToLowestIndex) {
  const auto in = instance(2, {{0}, {1}, {0}}, {1, 1});
  const auto r = solve_greedy_proposed(in, config(Method::kProposedGreedy, 1));
  EXPECT_EQ(r.selection.indices(), std::vector<int>{0});
}

TEST(GreedyBinary, GammaOneFollowsMaxCoverage) {
  testing::Rng rng(301);
  testing::InstanceShape shape;
  shape.max_gamma = 1;
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = testing::random_instance(rng, shape);
    const int budget = 1 + trial % 4;
    const auto r = solve_greedy_binary(in, config(Method::kGreedyBinary, budget));
    // Max-coverage greedy, same tie-break.
    std::vector<int> chosen;
    std::vector<std::uint8_t> covered(in.n_p, 0), used(in.n_groups, 0);
    for (int step = 0; step < budget; ++step) {
      int best = -1, best_gain = 0;
      for (std::size_t i = 0; i < in.n_g(); ++i) {
        if (used[in.group[i]]) continue;
        int gain = 0;
        for (auto j : in.rows[i]) gain += covered[j] ? 0 : 1;
        if (gain > best_gain) best = static_cast<int>(i), best_gain = gain;
      }
      if (best < 0) break;
      chosen.push_back(best);
      used[in.group[best]] = 1;
      for (auto j : in.rows[best]) covered[j] = 1;
    }
    std::sort(chosen.begin(), chosen.end());
    ASSERT_EQ(r.selection.indices(), chosen) << "trial " << trial;
  }
}

TEST(GreedyBinary, DegenerateStartStillSelects) {
  const auto in = instance(3, {{0, 1}, {1, 2}, {0}}, {3, 3, 3});
  const auto r = solve_greedy_binary(in, config(Method::kGreedyBinary, 2));
  EXPECT_EQ(r.selection.count(), 2);
  // Reported as deficit cost so sweeps compare methods on one scale.
  EXPECT_EQ(r.sense, Sense::kMinimize);
  EXPECT_EQ(r.objective, deficit_cost(in, r.selection));
  EXPECT_EQ(satisfied_count(in, r.selection), 0);
}

TEST(SolveMip, MatchesBruteForce) {
  testing::Rng rng(311);
  for (int trial = 0; trial < 60; ++trial) {
    const auto in = testing::random_instance(rng);
    const int budget = 1 + trial % 4;
    const auto cfg = config(Method::kProposedMip, budget);
    const auto r = solve_mip(build_mip(in, budget, cfg.gamma_max), cfg);
    const auto oracle = testing::brute_force(in, budget);
    ASSERT_EQ(r.status, SolverStatus::kOptimal);
    ASSERT_EQ(r.objective, oracle.best_deficit) << "trial " << trial;
    ASSERT_EQ(r.best_bound, r.objective);
    ASSERT_EQ(r.objective, deficit_cost(in, r.selection));
    expect_location_feasible(in, r, budget);
    ASSERT_EQ(enumerate_exact(in, cfg).objective, oracle.best_deficit);
  }
}

TEST(SolveMip, OrderingAgainstGreedy) {
  testing::Rng rng(313);
  int greedy_worse_than_binary = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = testing::random_instance(rng);
    const int budget = 1 + trial % 4;
    const auto mip = solve(in, config(Method::kProposedMip, budget));
    const auto greedy = solve(in, config(Method::kProposedGreedy, budget));
    const auto binary = solve(in, config(Method::kGreedyBinary, budget));
    ASSERT_LE(mip.objective, greedy.objective);
    ASSERT_LE(mip.objective, deficit_cost(in, binary.selection));
    if (greedy.objective > deficit_cost(in, binary.selection)) ++greedy_worse_than_binary;
  }
  // Greedy is a heuristic, so the greedy/binary order can flip on some draws;
  // it should hold on the large majority.
  EXPECT_LE(greedy_worse_than_binary, 15);
}

TEST(SolveMip, GreedyApproximationBound) {
  testing::Rng rng(317);
  int near_optimal = 0;
  const int trials = 60;
  for (int trial = 0; trial < trials; ++trial) {
    const auto in = testing::random_instance(rng);
    const int budget = 1 + trial % 4;
    const auto oracle = testing::brute_force(in, budget);
    const auto greedy = solve_greedy_proposed(in, config(Method::kProposedGreedy, budget));
    const std::int64_t opt_utility = in.gamma_sq_sum() - oracle.best_deficit;
    const std::int64_t utility = in.gamma_sq_sum() - greedy.objective;
    ASSERT_GE(2 * utility, opt_utility);
    if (utility >= (1.0 - std::exp(-1.0)) * static_cast<double>(opt_utility)) ++near_optimal;
    ASSERT_LE(greedy.best_bound, oracle.best_deficit);
  }
  EXPECT_GE(near_optimal, trials * 9 / 10);
}

TEST(SolveMip, SaturatingInstanceReachesZero) {
  const auto in = instance(3, {{0, 1}, {1, 2}, {0, 2}, {0, 1, 2}}, {2, 2, 2}, {0, 1, 2, 2});
  const auto r = solve(in, config(Method::kProposedMip, 5));
  EXPECT_EQ(r.objective, 0);
  EXPECT_EQ(r.status, SolverStatus::kOptimal);
}

TEST(SolveMip, TraceIsMonotone) {
  testing::Rng rng(331);
  testing::InstanceShape shape;
  shape.max_candidates = 40;
  shape.max_targets = 80;
  shape.max_groups = 20;
  for (int trial = 0; trial < 10; ++trial) {
    const auto in = testing::random_instance(rng, shape);
    const auto r = solve(in, config(Method::kProposedMip, 5));
    ASSERT_FALSE(r.trace.empty());
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      ASSERT_GE(r.trace[k].nodes, r.trace[k - 1].nodes);
      ASSERT_LE(r.trace[k].incumbent, r.trace[k - 1].incumbent);
      ASSERT_GE(r.trace[k].bound, r.trace[k - 1].bound);
    }
    ASSERT_EQ(r.trace.back().incumbent, r.objective);
    ASSERT_LE(r.best_bound, r.objective);
  }
}

CoverageInstance large_instance() {
  testing::Rng rng(337);
  testing::InstanceShape shape;
  shape.max_candidates = 400;
  shape.max_targets = 600;
  shape.max_groups = 100;
  shape.min_density = 0.05;
  shape.max_density = 0.1;
  CoverageInstance in;
  do {
    in = testing::random_instance(rng, shape);
  } while (in.n_g() < 200);
  return in;
}

TEST(SolveMip, TinyTimeBudgetReturnsIncumbent) {
  const auto in = large_instance();
  auto cfg = config(Method::kProposedMip, 12);
  cfg.time_budget = 0.001;
  const auto r = solve(in, cfg);
  EXPECT_EQ(r.status, SolverStatus::kTimeLimitIncumbent);
  expect_location_feasible(in, r, 12);
  EXPECT_NO_THROW(check_feasible(in, r.selection));
  EXPECT_EQ(r.objective, deficit_cost(in, r.selection));
  EXPECT_LE(r.best_bound, r.objective);
}

TEST(SolveMip, NodeLimitIsDeterministic) {
  const auto in = large_instance();
  auto cfg = config(Method::kProposedMip, 8);
  cfg.node_limit = 500;
  const auto a = solve(in, cfg);
  const auto b = solve(in, cfg);
  EXPECT_EQ(a.status, SolverStatus::kTimeLimitIncumbent);
  EXPECT_EQ(a.selection.chosen, b.selection.chosen);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.best_bound, b.best_bound);
  EXPECT_EQ(a.nodes_explored, b.nodes_explored);
  // The first dive reproduces greedy, so the incumbent never loses to it.
  EXPECT_LE(a.objective, solve(in, config(Method::kProposedGreedy, 8)).objective);
}

TEST(SolveZhao, GammaOneIsMaxCoverage) {
  testing::Rng rng(341);
  testing::InstanceShape shape;
  shape.max_gamma = 1;
  for (int trial = 0; trial < 40; ++trial) {
    const auto in = testing::random_instance(rng, shape);
    const int budget = 1 + trial % 4;
    const auto r = solve_zhao(in, config(Method::kZhaoMip, budget));
    ASSERT_EQ(r.status, SolverStatus::kOptimal);
    ASSERT_EQ(r.objective, testing::brute_force(in, budget).best_satisfied);
  }
}

TEST(SolveZhao, MatchesBruteForceAnyGamma) {
  testing::Rng rng(343);
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = testing::random_instance(rng);
    const int budget = 1 + trial % 4;
    const auto cfg = config(Method::kZhaoMip, budget);
    const auto r = solve_zhao(in, cfg);
    const auto oracle = testing::brute_force(in, budget);
    ASSERT_EQ(r.objective, oracle.best_satisfied) << "trial " << trial;
    ASSERT_EQ(r.objective, satisfied_count(in, r.selection));
    ASSERT_GE(r.best_bound, r.objective);
    ASSERT_EQ(enumerate_exact(in, cfg, Utility::kSatisfied).objective, oracle.best_satisfied);
    expect_location_feasible(in, r, budget);
  }
}

TEST(SolveZhao, PrefersSaturationOverSpread) {
  const auto in = zhao_critique();
  const auto zhao = solve(in, config(Method::kZhaoMip, 3));
  const auto mip = solve(in, config(Method::kProposedMip, 3));
  EXPECT_EQ(zhao.selection.indices(), (std::vector<int>{0, 1, 3}));
  EXPECT_EQ(zhao.objective, 2);
  EXPECT_EQ(deficit_cost(in, zhao.selection), 8);
  EXPECT_EQ(mip.selection.indices(), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(mip.objective, 3);
  EXPECT_EQ(satisfied_count(in, mip.selection), 1);
}

TEST(SolveZhao, FullCoverageSatisfiesAll) {
  const auto in = instance(3, {{0, 1, 2}, {0, 1, 2}, {1}}, {2, 2, 2});
  const auto r = solve(in, config(Method::kZhaoMip, 2));
  EXPECT_EQ(r.objective, 3);
  EXPECT_EQ(deficit_cost(in, r.selection), 0);
}

TEST(EnumerateExact, SingleCandidate) {
  const auto seen = instance(1, {{0}}, {2});
  EXPECT_EQ(enumerate_exact(seen, config(Method::kExhaustive, 1)).selection.count(), 1);
  const auto unseen = instance(1, {{}}, {2});
  const auto r = enumerate_exact(unseen, config(Method::kExhaustive, 1));
  EXPECT_EQ(r.selection.count(), 0);
  EXPECT_EQ(r.objective, 4);
}

TEST(EnumerateExact, CapExceeded) {
  CoverageInstance in;
  in.n_p = 1;
  in.gamma = {1};
  for (int i = 0; i < 200; ++i) {
    in.rows.push_back({0});
    in.group.push_back(i);
  }
  in.n_groups = 200;
  EXPECT_LT(count_feasible_selections(in, 2), kEnumerationCap);
  EXPECT_GT(count_feasible_selections(in, 5), kEnumerationCap);
  EXPECT_THROW(enumerate_exact(in, config(Method::kExhaustive, 5)), InputError);
}

TEST(EnumerateExact, CountsSelections) {
  // Groups of sizes 2 and 3, budget 2: 1 + 5 + 6.
  const auto in = instance(1, {{0}, {0}, {0}, {0}, {0}}, {1}, {0, 0, 1, 1, 1});
  EXPECT_EQ(count_feasible_selections(in, 2), 12.0);
  EXPECT_EQ(count_feasible_selections(in, 1), 6.0);
}

TEST(SolverConfig, Validation) {
  auto cfg = config(Method::kProposedMip, 0);
  EXPECT_THROW(cfg.validate(), InputError);
  cfg.budget = 1;
  cfg.time_budget = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg.time_budget = 1;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_THROW(method_from_string("simplex"), InputError);
  for (Method m : {Method::kProposedMip, Method::kProposedGreedy, Method::kGreedyBinary,
                   Method::kZhaoMip, Method::kExhaustive}) {
    EXPECT_EQ(method_from_string(to_string(m)), m);
  }
}

TEST(Solve, Deterministic) {
  testing::Rng rng(347);
  testing::InstanceShape shape;
  shape.max_candidates = 60;
  shape.max_targets = 100;
  shape.max_groups = 20;
  const auto in = testing::random_instance(rng, shape);
  for (Method m : {Method::kProposedMip, Method::kProposedGreedy, Method::kGreedyBinary,
                   Method::kZhaoMip}) {
    const auto a = solve(in, config(m, 4));
    const auto b = solve(in, config(m, 4));
    EXPECT_EQ(a.selection.chosen, b.selection.chosen) << to_string(m);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.nodes_explored, b.nodes_explored);
  }
}

}  // namespace
}  // namespace camplace
