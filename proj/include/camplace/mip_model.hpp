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

#ifndef CAMPLACE_MIP_MODEL_HPP_
#define CAMPLACE_MIP_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "camplace/objective.hpp"

namespace camplace {

// A small all-integer linear model: integer bounds, integer coefficients.
struct LinearModel {
  static constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

  enum class VarType { kBinary, kInteger };
  enum class Sense { kLessEqual, kGreaterEqual, kEqual };

  struct Variable {
    std::string name;
    VarType type = VarType::kInteger;
    std::int64_t lower = 0;
    std::int64_t upper = kInfinity;
  };
  struct Term {
    int var;
    std::int64_t coef;
  };
  struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::kLessEqual;
    std::int64_t rhs = 0;
  };

  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  std::vector<Term> objective;  // minimized

  int add_variable(std::string name, VarType type, std::int64_t lower, std::int64_t upper);
  void add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                      std::int64_t rhs);

  bool satisfies(const Constraint& c, const std::vector<std::int64_t>& values) const;
  bool within_bounds(int var, std::int64_t value) const;
  // All bounds and all constraints hold.
  bool feasible(const std::vector<std::int64_t>& values) const;
  std::int64_t objective_value(const std::vector<std::int64_t>& values) const;
};

// Placement problem as a MILP: binary camera variables x_i, an epigraph
// variable Q_j per target, and an incremental piecewise model with one
// indicator pl_j^k and one value f_j^k per piece k = 0..gamma_max. The
// objective sum_k k * f_j^k equals the squared deficit at the optimum.
//
// Per target j, with c_j = sum_i V_ij x_i and n_j the number of candidates
// seeing j:
//   epi_j:    Q_j + c_j >= gamma_j                 (Q_j >= 0 by bounds)
//   link_j:   Q_j - sum_k f_j^k <= 0
//   lo_j_k:   f_j^k - lo_k pl_j^k >= 0
//   hi_j_k:   f_j^k - hi_k pl_j^k <= 0
//   piece_j:  sum_k pl_j^k = 1
// where piece 0 spans (lb_j, 0.5], piece k spans (k - 0.5, k + 0.5] and the
// last piece (gamma_max - 0.5, gamma_j], each tightened to integer endpoints,
// and lb_j = min(gamma_j - n_j, -0.5). Plus budget: sum_i x_i <= N_s and
// loc_l: sum_{i in group l} x_i <= 1.
struct MipModel {
  LinearModel lp;
  CoverageInstance instance;
  int budget = 0;
  int gamma_max = 0;

  std::vector<int> x_var;
  std::vector<int> q_var;
  std::vector<std::vector<int>> pl_var;  // [j][k]
  std::vector<std::vector<int>> f_var;   // [j][k]
  std::vector<double> lb;                // per target
  // Constraints whose auxiliary variables belong to target j.
  std::vector<std::vector<int>> target_constraints;
};

MipModel build_mip(const CoverageInstance& instance, int budget, int gamma_max);

// Optimal auxiliary values for a fixed x in closed form: Q_j = d_j,
// pl_j^{d_j} = 1, f_j^{d_j} = d_j (f_j^0 = 0 when d_j = 0).
std::vector<std::int64_t> complete_assignment(const MipModel& model, const Selection& x);

// Minimum of target j's objective terms over every integer assignment of its
// auxiliary variables (Q_j in [0, gamma_j + 1]) that satisfies its
// constraints, with x fixed. nullopt when no assignment is feasible.
std::optional<std::int64_t> min_auxiliary_objective(const MipModel& model,
                                                    const Selection& x, std::size_t j);

// Writes CPLEX LP text. Variables are named x_i, Q_j, pl_j_k, f_j_k.
void write_lp(const MipModel& model, std::ostream& out);
void export_lp(const MipModel& model, const std::filesystem::path& path);

}  // namespace camplace

#endif  // CAMPLACE_MIP_MODEL_HPP_
