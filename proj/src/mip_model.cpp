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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace camplace {

using Sense = LinearModel::Sense;
using VarType = LinearModel::VarType;

int LinearModel::add_variable(std::string name, VarType type, std::int64_t lower,
                              std::int64_t upper) {
  variables.push_back({std::move(name), type, lower, upper});
  return static_cast<int>(variables.size()) - 1;
}

void LinearModel::add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                                 std::int64_t rhs) {
  constraints.push_back({std::move(name), std::move(terms), sense, rhs});
}

bool LinearModel::satisfies(const Constraint& c,
                            const std::vector<std::int64_t>& values) const {
  std::int64_t lhs = 0;
  for (const Term& t : c.terms) lhs += t.coef * values[static_cast<std::size_t>(t.var)];
  switch (c.sense) {
    case Sense::kLessEqual:
      return lhs <= c.rhs;
    case Sense::kGreaterEqual:
      return lhs >= c.rhs;
    case Sense::kEqual:
      return lhs == c.rhs;
  }
  return false;
}

bool LinearModel::within_bounds(int var, std::int64_t value) const {
  const Variable& v = variables[static_cast<std::size_t>(var)];
  return value >= v.lower && value <= v.upper;
}

bool LinearModel::feasible(const std::vector<std::int64_t>& values) const {
  if (values.size() != variables.size()) return false;
  for (std::size_t v = 0; v < variables.size(); ++v) {
    if (!within_bounds(static_cast<int>(v), values[v])) return false;
  }
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](const Constraint& c) { return satisfies(c, values); });
}

std::int64_t LinearModel::objective_value(const std::vector<std::int64_t>& values) const {
  std::int64_t obj = 0;
  for (const Term& t : objective) obj += t.coef * values[static_cast<std::size_t>(t.var)];
  return obj;
}

MipModel build_mip(const CoverageInstance& instance, int budget, int gamma_max) {
  instance.validate();
  if (budget < 0) throw InputError("budget must be non-negative");
  if (gamma_max < 1) throw InputError("gamma_max must be at least 1");
  for (int g : instance.gamma) {
    if (g > gamma_max) {
      throw InputError("target gamma " + std::to_string(g) + " exceeds gamma_max " +
                       std::to_string(gamma_max));
    }
  }

  MipModel m;
  m.instance = instance;
  m.budget = budget;
  m.gamma_max = gamma_max;
  LinearModel& lp = m.lp;
  const std::size_t n_g = instance.n_g(), n_p = instance.n_p;

  for (std::size_t i = 0; i < n_g; ++i) {
    m.x_var.push_back(lp.add_variable("x_" + std::to_string(i), VarType::kBinary, 0, 1));
  }
  std::vector<std::vector<LinearModel::Term>> seen_by(n_p);
  for (std::size_t i = 0; i < n_g; ++i) {
    for (std::uint32_t j : instance.rows[i]) seen_by[j].push_back({m.x_var[i], 1});
  }

  const int pieces = gamma_max + 1;
  m.pl_var.resize(n_p);
  m.f_var.resize(n_p);
  m.target_constraints.resize(n_p);
  for (std::size_t j = 0; j < n_p; ++j) {
    const std::string js = std::to_string(j);
    const int gamma = instance.gamma[j];
    const double lb = std::min(static_cast<double>(gamma) -
                                   static_cast<double>(seen_by[j].size()),
                               -0.5);
    m.lb.push_back(lb);
    m.q_var.push_back(lp.add_variable("Q_" + js, VarType::kInteger, 0, LinearModel::kInfinity));

    // Integer endpoints of the half-open piece intervals (lo, hi].
    std::vector<std::int64_t> lo(pieces), hi(pieces);
    lo[0] = static_cast<std::int64_t>(std::floor(lb)) + 1;
    hi[0] = 0;
    for (int k = 1; k < pieces; ++k) {
      lo[k] = k;
      hi[k] = k == gamma_max ? gamma : k;
    }
    for (int k = 0; k < pieces; ++k) {
      const std::string ks = js + "_" + std::to_string(k);
      m.pl_var[j].push_back(lp.add_variable("pl_" + ks, VarType::kBinary, 0, 1));
      m.f_var[j].push_back(lp.add_variable("f_" + ks, VarType::kInteger,
                                           std::min<std::int64_t>(lo[k], 0),
                                           std::max<std::int64_t>(hi[k], 0)));
    }

    auto add = [&](std::string name, std::vector<LinearModel::Term> terms, Sense s,
                   std::int64_t rhs) {
      m.target_constraints[j].push_back(static_cast<int>(lp.constraints.size()));
      lp.add_constraint(std::move(name), std::move(terms), s, rhs);
    };
    std::vector<LinearModel::Term> epi{{m.q_var[j], 1}};
    epi.insert(epi.end(), seen_by[j].begin(), seen_by[j].end());
    add("epi_" + js, std::move(epi), Sense::kGreaterEqual, gamma);

    std::vector<LinearModel::Term> link{{m.q_var[j], 1}};
    for (int k = 0; k < pieces; ++k) link.push_back({m.f_var[j][k], -1});
    add("link_" + js, std::move(link), Sense::kLessEqual, 0);

    std::vector<LinearModel::Term> one;
    for (int k = 0; k < pieces; ++k) {
      const std::string ks = js + "_" + std::to_string(k);
      add("lo_" + ks, {{m.f_var[j][k], 1}, {m.pl_var[j][k], -lo[k]}}, Sense::kGreaterEqual, 0);
      add("hi_" + ks, {{m.f_var[j][k], 1}, {m.pl_var[j][k], -hi[k]}}, Sense::kLessEqual, 0);
      one.push_back({m.pl_var[j][k], 1});
      lp.objective.push_back({m.f_var[j][k], k});
    }
    add("piece_" + js, std::move(one), Sense::kEqual, 1);
  }

  std::vector<LinearModel::Term> all;
  for (int v : m.x_var) all.push_back({v, 1});
  lp.add_constraint("budget", std::move(all), Sense::kLessEqual, budget);
  std::vector<std::vector<LinearModel::Term>> groups(static_cast<std::size_t>(instance.n_groups));
  for (std::size_t i = 0; i < n_g; ++i) {
    groups[static_cast<std::size_t>(instance.group[i])].push_back({m.x_var[i], 1});
  }
  for (std::size_t l = 0; l < groups.size(); ++l) {
    lp.add_constraint("loc_" + std::to_string(l), std::move(groups[l]), Sense::kLessEqual, 1);
  }
  return m;
}

std::vector<std::int64_t> complete_assignment(const MipModel& model, const Selection& x) {
  if (x.chosen.size() != model.instance.n_g()) throw InputError("selection length mismatch");
  std::vector<std::int64_t> values(model.lp.variables.size(), 0);
  for (std::size_t i = 0; i < model.x_var.size(); ++i) {
    values[static_cast<std::size_t>(model.x_var[i])] = x.chosen[i] ? 1 : 0;
  }
  const CoverageProfile prof = coverage_profile(model.instance, x);
  for (std::size_t j = 0; j < model.instance.n_p; ++j) {
    const int d = prof.deficits[j];
    values[static_cast<std::size_t>(model.q_var[j])] = d;
    values[static_cast<std::size_t>(model.pl_var[j][static_cast<std::size_t>(d)])] = 1;
    values[static_cast<std::size_t>(model.f_var[j][static_cast<std::size_t>(d)])] = d;
  }
  return values;
}

std::optional<std::int64_t> min_auxiliary_objective(const MipModel& model,
                                                    const Selection& x, std::size_t j) {
  const LinearModel& lp = model.lp;
  std::vector<std::int64_t> values(lp.variables.size(), 0);
  for (std::size_t i = 0; i < model.x_var.size(); ++i) {
    values[static_cast<std::size_t>(model.x_var[i])] = x.chosen[i] ? 1 : 0;
  }
  // Enumerate the auxiliary variables of target j as an odometer.
  std::vector<int> vars{model.q_var[j]};
  vars.insert(vars.end(), model.pl_var[j].begin(), model.pl_var[j].end());
  vars.insert(vars.end(), model.f_var[j].begin(), model.f_var[j].end());
  std::vector<std::int64_t> lo, hi;
  for (int v : vars) {
    const auto& var = lp.variables[static_cast<std::size_t>(v)];
    lo.push_back(var.lower);
    hi.push_back(v == model.q_var[j] ? model.instance.gamma[j] + 1 : var.upper);
  }
  std::vector<std::int64_t> objective_coef(lp.variables.size(), 0);
  for (const auto& t : lp.objective) objective_coef[static_cast<std::size_t>(t.var)] += t.coef;

  std::optional<std::int64_t> best;
  for (std::size_t k = 0; k < vars.size(); ++k) values[static_cast<std::size_t>(vars[k])] = lo[k];
  while (true) {
    const bool ok = std::all_of(
        model.target_constraints[j].begin(), model.target_constraints[j].end(),
        [&](int c) { return lp.satisfies(lp.constraints[static_cast<std::size_t>(c)], values); });
    if (ok) {
      std::int64_t obj = 0;
      for (int v : vars) obj += objective_coef[static_cast<std::size_t>(v)] * values[static_cast<std::size_t>(v)];
      if (!best || obj < *best) best = obj;
    }
    std::size_t k = 0;
    for (; k < vars.size(); ++k) {
      auto& val = values[static_cast<std::size_t>(vars[k])];
      if (val < hi[k]) {
        ++val;
        break;
      }
      val = lo[k];
    }
    if (k == vars.size()) break;
  }
  return best;
}

namespace {

void write_terms(std::ostream& out, const LinearModel& lp,
                 const std::vector<LinearModel::Term>& terms, bool keep_zero) {
  constexpr int kTermsPerLine = 8;
  int written = 0;
  for (const auto& t : terms) {
    if (t.coef == 0 && !keep_zero) continue;
    if (written > 0 && written % kTermsPerLine == 0) out << "\n   ";
    const std::string& name = lp.variables[static_cast<std::size_t>(t.var)].name;
    if (written == 0) {
      out << (t.coef < 0 ? "- " : "") << (t.coef < 0 ? -t.coef : t.coef) << ' ' << name;
    } else {
      out << (t.coef < 0 ? " - " : " + ") << (t.coef < 0 ? -t.coef : t.coef) << ' ' << name;
    }
    ++written;
  }
  if (written == 0) out << '0';
}

}  // namespace

void write_lp(const MipModel& model, std::ostream& out) {
  const LinearModel& lp = model.lp;
  out << "\\ camera placement: squared coverage deficit, piecewise-linear form\n";
  out << "\\ targets " << model.instance.n_p << ", candidates " << model.instance.n_g()
      << ", budget " << model.budget << ", gamma_max " << model.gamma_max << "\n";
  out << "Minimize\n obj: ";
  write_terms(out, lp, lp.objective, true);
  out << "\nSubject To\n";
  for (const auto& c : lp.constraints) {
    if (c.terms.empty()) continue;
    out << ' ' << c.name << ": ";
    write_terms(out, lp, c.terms, false);
    switch (c.sense) {
      case LinearModel::Sense::kLessEqual:
        out << " <= ";
        break;
      case LinearModel::Sense::kGreaterEqual:
        out << " >= ";
        break;
      case LinearModel::Sense::kEqual:
        out << " = ";
        break;
    }
    out << c.rhs << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : lp.variables) {
    if (v.type == LinearModel::VarType::kBinary) continue;
    if (v.upper == LinearModel::kInfinity) {
      out << ' ' << v.name << " >= " << v.lower << '\n';
    } else {
      out << ' ' << v.lower << " <= " << v.name << " <= " << v.upper << '\n';
    }
  }
  std::ostringstream bin, gen;
  int nb = 0, ng = 0;
  for (const auto& v : lp.variables) {
    if (v.type == LinearModel::VarType::kBinary) {
      bin << (nb++ % 10 == 0 ? "\n " : " ") << v.name;
    } else {
      gen << (ng++ % 10 == 0 ? "\n " : " ") << v.name;
    }
  }
  if (nb > 0) out << "Binaries" << bin.str() << '\n';
  if (ng > 0) out << "Generals" << gen.str() << '\n';
  out << "End\n";
}

void export_lp(const MipModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write LP file '" + path.string() + "'");
  write_lp(model, out);
  if (!out) throw InputError("failed writing LP file '" + path.string() + "'");
}

}  // namespace camplace
