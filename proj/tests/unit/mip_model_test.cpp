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

#include "camplace/mip_model.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "camplace/solvers.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace camplace {
namespace {

CoverageInstance single_voxel(int n_g, int gamma) {
  CoverageInstance in;
  in.n_p = 1;
  in.gamma = {gamma};
  for (int i = 0; i < n_g; ++i) {
    in.rows.push_back({0});
    in.group.push_back(i);
  }
  in.n_groups = n_g;
  return in;
}

TEST(BuildMip, SingleUncoveredVoxelCostsNine) {
  const MipModel m = build_mip(single_voxel(0, 3), 1, 3);
  const Selection x = Selection::empty(0, 1);
  EXPECT_EQ(min_auxiliary_objective(m, x, 0), 9);
  const auto values = complete_assignment(m, x);
  EXPECT_TRUE(m.lp.feasible(values));
  EXPECT_EQ(m.lp.objective_value(values), 9);
  EXPECT_EQ(values[m.pl_var[0][3]], 1);
  EXPECT_EQ(values[m.f_var[0][3]], 3);
  EXPECT_EQ(values[m.q_var[0]], 3);
}

TEST(BuildMip, PieceWeightsGiveSquares) {
  // Deficit d costs d * d through piece d.
  for (int d = 0; d <= 3; ++d) {
    const MipModel m = build_mip(single_voxel(3 - d, 3), 3, 3);
    const Selection all = Selection::of(3 - d, 3, [&] {
      std::vector<int> v;
      for (int i = 0; i < 3 - d; ++i) v.push_back(i);
      return v;
    }());
    EXPECT_EQ(min_auxiliary_objective(m, all, 0), d * d) << "deficit " << d;
  }
}

TEST(BuildMip, FullCoverageUsesPieceZero) {
  const MipModel m = build_mip(single_voxel(3, 3), 3, 3);
  SolverConfig cfg;
  cfg.budget = 3;
  const SolverReport r = solve_mip(m, cfg);
  EXPECT_EQ(r.objective, 0);
  EXPECT_EQ(r.status, SolverStatus::kOptimal);
  const auto values = complete_assignment(m, r.selection);
  EXPECT_EQ(values[m.pl_var[0][0]], 1);
  EXPECT_TRUE(m.lp.feasible(values));
}

TEST(BuildMip, RejectsGammaAboveMax) {
  EXPECT_THROW(build_mip(single_voxel(1, 4), 1, 3), InputError);
  EXPECT_NO_THROW(build_mip(single_voxel(1, 4), 1, 4));
}

TEST(BuildMip, LowerBoundClamp) {
  const MipModel m = build_mip(single_voxel(5, 2), 2, 3);
  EXPECT_EQ(m.lb[0], -3.0);
  const MipModel n = build_mip(single_voxel(1, 2), 1, 3);
  EXPECT_EQ(n.lb[0], -0.5);
}

// For every feasible x, minimizing over the auxiliaries reproduces the squared
// deficit of every target.
TEST(MipProperty, AuxiliaryMinimumEqualsSquaredDeficit) {
  testing::Rng rng(201);
  testing::InstanceShape shape;
  shape.max_candidates = 6;
  shape.max_targets = 4;
  shape.max_groups = 6;
  for (int trial = 0; trial < 25; ++trial) {
    const auto in = testing::random_instance(rng, shape);
    const int n = static_cast<int>(in.n_g());
    const MipModel m = build_mip(in, n, 3);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> chosen;
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1u) chosen.push_back(i);
      }
      if (!testing::feasible_set(in, chosen, n)) continue;
      const Selection x = Selection::of(in.n_g(), n, chosen);
      std::int64_t total = 0;
      for (std::size_t j = 0; j < in.n_p; ++j) {
        const auto best = min_auxiliary_objective(m, x, j);
        ASSERT_TRUE(best.has_value());
        total += *best;
      }
      ASSERT_EQ(total, testing::direct_deficit(in, chosen));
      const auto values = complete_assignment(m, x);
      ASSERT_TRUE(m.lp.feasible(values));
      ASSERT_EQ(m.lp.objective_value(values), total);
    }
  }
}

TEST(MipProperty, OptimumObjectiveEqualsDeficitOfItsSelection) {
  testing::Rng rng(203);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = testing::random_instance(rng);
    SolverConfig cfg;
    cfg.budget = 1 + trial % 4;
    const MipModel m = build_mip(in, cfg.budget, 3);
    const SolverReport r = solve_mip(m, cfg);
    ASSERT_EQ(r.objective, testing::direct_deficit(in, r.selection.indices()));
    const auto values = complete_assignment(m, r.selection);
    ASSERT_TRUE(m.lp.feasible(values));
    ASSERT_EQ(m.lp.objective_value(values), r.objective);
  }
}

TEST(LinearModel, InfeasibleAssignmentsDetected) {
  const MipModel m = build_mip(single_voxel(2, 2), 1, 3);
  const Selection both = Selection::of(2, 2, std::vector<int>{0, 1});
  auto values = complete_assignment(m, both);
  EXPECT_FALSE(m.lp.feasible(values));  // budget 1 exceeded
  const Selection one = Selection::of(2, 1, std::vector<int>{0});
  values = complete_assignment(m, one);
  EXPECT_TRUE(m.lp.feasible(values));
  values[m.q_var[0]] = 0;  // epigraph violated: deficit is 1
  EXPECT_FALSE(m.lp.feasible(values));
}

TEST(ExportLp, SingleVoxelObjectiveLine) {
  std::ostringstream out;
  write_lp(build_mip(single_voxel(0, 3), 1, 3), out);
  const std::string lp = out.str();
  EXPECT_NE(lp.find("Minimize\n obj: 0 f_0_0 + 1 f_0_1 + 2 f_0_2 + 3 f_0_3\n"), std::string::npos) << lp;
  for (const char* section : {"Subject To\n", "Bounds\n", "Binaries", "Generals", "End\n"}) {
    EXPECT_NE(lp.find(section), std::string::npos) << section;
  }
  EXPECT_NE(lp.find(" epi_0: 1 Q_0 >= 3\n"), std::string::npos) << lp;
  EXPECT_NE(lp.find(" piece_0: 1 pl_0_0 + 1 pl_0_1 + 1 pl_0_2 + 1 pl_0_3 = 1\n"), std::string::npos);
}

TEST(ExportLp, EmptyTargetSet) {
  CoverageInstance in;
  in.rows = {{}, {}};
  in.group = {0, 0};
  in.n_groups = 1;
  std::ostringstream out;
  write_lp(build_mip(in, 2, 3), out);
  const std::string lp = out.str();
  EXPECT_NE(lp.find(" obj: 0\n"), std::string::npos) << lp;
  EXPECT_NE(lp.find(" budget: 1 x_0 + 1 x_1 <= 2\n"), std::string::npos) << lp;
  EXPECT_NE(lp.find(" loc_0: 1 x_0 + 1 x_1 <= 1\n"), std::string::npos) << lp;
  EXPECT_EQ(lp.find("epi_"), std::string::npos);
}

TEST(ExportLp, WritesFileAndRejectsBadPath) {
  testing::TempDir dir;
  const MipModel m = build_mip(single_voxel(2, 3), 1, 3);
  export_lp(m, dir.path() / "m.lp");
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "m.lp"));
  EXPECT_THROW(export_lp(m, dir.path() / "missing" / "m.lp"), InputError);
}

}  // namespace
}  // namespace camplace
