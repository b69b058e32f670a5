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

#include <algorithm>
#include <chrono>
#include <numeric>

namespace camplace {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Caps the budget at the number of locations, recording a warning.
int effective_budget(const CoverageInstance& inst, const SolverConfig& cfg,
                     std::vector<std::string>* warnings) {
  if (cfg.budget > inst.n_groups) {
    warnings->push_back("budget " + std::to_string(cfg.budget) + " exceeds the " +
                        std::to_string(inst.n_groups) +
                        " available locations; capped at the location count");
    return inst.n_groups;
  }
  return cfg.budget;
}

// Sum of the k largest values.
std::int64_t top_k_sum(std::vector<std::int64_t>& values, int k) {
  if (k <= 0 || values.empty()) return 0;
  const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), values.size());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(kk) - 1,
                   values.end(), std::greater<>());
  return std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(kk),
                         std::int64_t{0});
}

// Utility sum gamma^2 - deficit_cost, tracked incrementally.
class SquaredDeficitModel {
 public:
  explicit SquaredDeficitModel(const CoverageInstance& inst)
      : inst_(inst), counts_(inst.n_p, 0) {}

  std::int64_t utility() const { return utility_; }
  std::int64_t max_utility() const { return inst_.gamma_sq_sum(); }

  // (gain, tie-break score, bound contribution)
  struct Eval {
    std::int64_t gain, score, bound;
  };
  Eval evaluate(std::size_t i, int /*remaining*/) const {
    std::int64_t g = 0;
    for (std::uint32_t j : inst_.rows[i]) {
      const int d = inst_.gamma[j] - counts_[j];
      if (d > 0) g += 2 * d - 1;
    }
    return {g, g, g};
  }
  std::int64_t bound_extra(std::vector<std::int64_t>& group_best, int remaining) const {
    return top_k_sum(group_best, remaining);
  }
  void apply(std::size_t i) {
    for (std::uint32_t j : inst_.rows[i]) {
      const int d = inst_.gamma[j] - counts_[j];
      if (d > 0) utility_ += 2 * d - 1;
      ++counts_[j];
    }
  }
  void undo(std::size_t i) {
    for (std::uint32_t j : inst_.rows[i]) {
      --counts_[j];
      const int d = inst_.gamma[j] - counts_[j];
      if (d > 0) utility_ -= 2 * d - 1;
    }
  }

 private:
  const CoverageInstance& inst_;
  std::vector<int> counts_;
  std::int64_t utility_ = 0;
};

// Utility = number of targets with count_j >= gamma_j. Not submodular for
// gamma >= 2, so the bound counts hits: a target with deficit d needs d more
// cameras to see it, so each hit is worth at most 1/d of a target. Weights are
// scaled by lcm(1..gamma_max) to stay integral.
class SatisfiedModel {
 public:
  SatisfiedModel(const CoverageInstance& inst, int gamma_max)
      : inst_(inst), counts_(inst.n_p, 0) {
    for (int k = 1; k <= std::max(gamma_max, 1); ++k) scale_ = std::lcm(scale_, std::int64_t{k});
    for (int g : inst.gamma) utility_ += g <= 0 ? 1 : 0;
  }

  std::int64_t utility() const { return utility_; }
  std::int64_t max_utility() const { return static_cast<std::int64_t>(inst_.n_p); }

  struct Eval {
    std::int64_t gain, score, bound;
  };
  Eval evaluate(std::size_t i, int remaining) const {
    std::int64_t g = 0, w = 0;
    for (std::uint32_t j : inst_.rows[i]) {
      const int d = inst_.gamma[j] - counts_[j];
      if (d <= 0 || d > remaining) continue;
      if (d == 1) ++g;
      w += scale_ / d;
    }
    return {g, w, w};
  }
  std::int64_t bound_extra(std::vector<std::int64_t>& group_best, int remaining) const {
    const std::int64_t by_hits = top_k_sum(group_best, remaining) / scale_;
    std::int64_t reachable = 0;
    for (std::size_t j = 0; j < inst_.n_p; ++j) {
      const int d = inst_.gamma[j] - counts_[j];
      if (d > 0 && d <= remaining) ++reachable;
    }
    return std::min(by_hits, reachable);
  }
  void apply(std::size_t i) {
    for (std::uint32_t j : inst_.rows[i]) {
      if (++counts_[j] == inst_.gamma[j]) ++utility_;
    }
  }
  void undo(std::size_t i) {
    for (std::uint32_t j : inst_.rows[i]) {
      if (counts_[j]-- == inst_.gamma[j]) --utility_;
    }
  }

 private:
  const CoverageInstance& inst_;
  std::vector<int> counts_;
  std::int64_t utility_ = 0;
  std::int64_t scale_ = 1;
};

// Depth-first branch-and-bound maximizing a model's utility over selections
// with at most `budget` cameras and at most one per location.
template <class Model>
class BranchAndBound {
 public:
  BranchAndBound(const CoverageInstance& inst, Model& model, int budget,
                 Clock::time_point deadline, std::optional<std::int64_t> node_limit)
      : inst_(inst),
        model_(model),
        budget_(budget),
        deadline_(deadline),
        node_limit_(node_limit),
        excluded_(inst.n_g(), 0),
        group_used_(static_cast<std::size_t>(inst.n_groups), 0),
        group_best_(static_cast<std::size_t>(inst.n_groups), -1),
        chosen_(inst.n_g(), 0) {}

  void run() { visit(model_.max_utility()); }

  bool aborted() const { return aborted_; }
  std::int64_t nodes() const { return nodes_; }
  std::int64_t incumbent() const { return incumbent_; }
  const std::vector<std::uint8_t>& incumbent_selection() const { return best_; }
  // Upper bound on the optimal utility.
  std::int64_t upper_bound() const {
    if (!aborted_) return incumbent_;
    return std::clamp(open_bound_, incumbent_, model_.max_utility());
  }
  // (nodes, incumbent utility, utility upper bound) at each improvement.
  const std::vector<TracePoint>& trace() const { return trace_; }

 private:
  std::int64_t open_bound(std::int64_t subtree_bound) const {
    std::int64_t b = subtree_bound;
    for (std::int64_t p : pending_) b = std::max(b, p);
    return b;
  }

  void visit(std::int64_t parent_bound) {
    if ((node_limit_ && nodes_ >= *node_limit_) || Clock::now() >= deadline_) {
      aborted_ = true;
      open_bound_ = open_bound(parent_bound);
      return;
    }
    ++nodes_;
    const std::int64_t u = model_.utility();
    if (u > incumbent_) {
      incumbent_ = u;
      best_ = chosen_;
      const std::int64_t ub = std::clamp(open_bound(parent_bound), u, model_.max_utility());
      trace_.push_back({nodes_, u, std::min(ub, trace_.empty() ? ub : trace_.back().bound)});
    }
    const int remaining = budget_ - depth_;
    if (remaining <= 0) return;

    std::int64_t best_gain = -1, best_score = -1;
    std::size_t best_i = 0;
    touched_.clear();
    for (std::size_t i = 0; i < inst_.n_g(); ++i) {
      const auto g = static_cast<std::size_t>(inst_.group[i]);
      if (excluded_[i] || group_used_[g]) continue;
      const auto e = model_.evaluate(i, remaining);
      if (e.gain == 0 && e.score == 0) continue;
      if (group_best_[g] < 0) touched_.push_back(g);
      group_best_[g] = std::max(group_best_[g], e.bound);
      if (e.gain > best_gain || (e.gain == best_gain && e.score > best_score)) {
        best_gain = e.gain;
        best_score = e.score;
        best_i = i;
      }
    }
    values_.clear();
    for (std::size_t g : touched_) {
      values_.push_back(group_best_[g]);
      group_best_[g] = -1;
    }
    if (best_gain < 0) return;
    std::vector<std::int64_t> vals = values_;
    const std::int64_t bound =
        std::min(u + model_.bound_extra(vals, remaining), parent_bound);
    if (bound <= incumbent_) return;

    const auto g = static_cast<std::size_t>(inst_.group[best_i]);
    pending_.push_back(bound);
    model_.apply(best_i);
    group_used_[g] = 1;
    chosen_[best_i] = 1;
    ++depth_;
    visit(bound);
    --depth_;
    chosen_[best_i] = 0;
    group_used_[g] = 0;
    model_.undo(best_i);
    pending_.pop_back();
    if (aborted_) return;

    excluded_[best_i] = 1;
    visit(bound);
    excluded_[best_i] = 0;
  }

  const CoverageInstance& inst_;
  Model& model_;
  int budget_;
  Clock::time_point deadline_;
  std::optional<std::int64_t> node_limit_;

  std::vector<std::uint8_t> excluded_, group_used_;
  std::vector<std::int64_t> group_best_;
  std::vector<std::size_t> touched_;
  std::vector<std::int64_t> values_;
  std::vector<std::uint8_t> chosen_;
  std::vector<std::int64_t> pending_;
  int depth_ = 0;

  std::int64_t nodes_ = 0;
  std::int64_t incumbent_ = -1;
  std::vector<std::uint8_t> best_;
  bool aborted_ = false;
  std::int64_t open_bound_ = 0;
  std::vector<TracePoint> trace_;
};

template <class Model>
SolverReport run_search(const CoverageInstance& inst, Model& model, const SolverConfig& cfg,
                        Sense sense) {
  cfg.validate();
  const auto start = Clock::now();
  SolverReport r;
  r.method = cfg.method;
  r.sense = sense;
  r.effective_budget = effective_budget(inst, cfg, &r.warnings);
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.time_budget));
  BranchAndBound<Model> bnb(inst, model, r.effective_budget, deadline, cfg.node_limit);
  bnb.run();

  r.selection = Selection{bnb.incumbent_selection(), cfg.budget};
  if (r.selection.chosen.empty()) r.selection = Selection::empty(inst.n_g(), cfg.budget);
  r.nodes_explored = bnb.nodes();
  r.status = bnb.aborted() ? SolverStatus::kTimeLimitIncumbent : SolverStatus::kOptimal;
  const std::int64_t total = model.max_utility();
  if (sense == Sense::kMinimize) {
    r.objective = total - bnb.incumbent();
    r.best_bound = total - bnb.upper_bound();
    for (const TracePoint& t : bnb.trace()) {
      r.trace.push_back({t.nodes, total - t.incumbent, total - t.bound});
    }
  } else {
    r.objective = bnb.incumbent();
    r.best_bound = bnb.upper_bound();
    r.trace = bnb.trace();
  }
  r.elapsed_s = seconds_since(start);
  return r;
}

// Lowest-index argmax over feasible candidates of a lexicographic key.
template <class KeyFn>
std::optional<std::size_t> pick(const CoverageInstance& inst,
                                const std::vector<std::uint8_t>& group_used, KeyFn key) {
  std::optional<std::size_t> best;
  decltype(key(std::size_t{0})) best_key{};
  for (std::size_t i = 0; i < inst.n_g(); ++i) {
    if (group_used[static_cast<std::size_t>(inst.group[i])]) continue;
    const auto k = key(i);
    if (!best || k > best_key) {
      best = i;
      best_key = k;
    }
  }
  return best;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::kProposedMip:
      return "proposed-mip";
    case Method::kProposedGreedy:
      return "proposed-greedy";
    case Method::kGreedyBinary:
      return "greedy-binary";
    case Method::kZhaoMip:
      return "zhao-mip";
    case Method::kExhaustive:
      return "exhaustive";
  }
  return "unknown";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::kProposedMip, Method::kProposedGreedy, Method::kGreedyBinary,
                   Method::kZhaoMip, Method::kExhaustive}) {
    if (s == to_string(m)) return m;
  }
  throw InputError("unknown solver method '" + s + "'");
}

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::kOptimal:
      return "optimal";
    case SolverStatus::kTimeLimitIncumbent:
      return "time-limit-incumbent";
    case SolverStatus::kInfeasible:
      return "infeasible";
    case SolverStatus::kHeuristic:
      return "heuristic";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (budget < 1) throw InputError("budget must be at least 1");
  if (!(time_budget > 0.0)) throw InputError("time_budget must be positive");
  if (gamma_max < 1) throw InputError("gamma_max must be at least 1");
  if (node_limit && *node_limit < 1) throw InputError("node_limit must be positive");
}

SolverReport solve_greedy_proposed(const CoverageInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  SolverReport r;
  r.method = Method::kProposedGreedy;
  r.status = SolverStatus::kHeuristic;
  r.effective_budget = effective_budget(inst, cfg, &r.warnings);
  r.selection = Selection::empty(inst.n_g(), cfg.budget);

  SquaredDeficitModel model(inst);
  std::vector<std::uint8_t> group_used(static_cast<std::size_t>(inst.n_groups), 0);
  // Root bound: best k single gains over distinct locations.
  {
    std::vector<std::int64_t> per_group(static_cast<std::size_t>(inst.n_groups), 0);
    for (std::size_t i = 0; i < inst.n_g(); ++i) {
      auto& v = per_group[static_cast<std::size_t>(inst.group[i])];
      v = std::max(v, model.evaluate(i, r.effective_budget).gain);
    }
    const std::int64_t ub = std::min(inst.gamma_sq_sum(), top_k_sum(per_group, r.effective_budget));
    r.best_bound = inst.gamma_sq_sum() - ub;
  }
  for (int step = 0; step < r.effective_budget; ++step) {
    const auto best =
        pick(inst, group_used, [&](std::size_t i) { return model.evaluate(i, 0).gain; });
    if (!best || model.evaluate(*best, 0).gain <= 0) break;
    model.apply(*best);
    group_used[static_cast<std::size_t>(inst.group[*best])] = 1;
    r.selection.chosen[*best] = 1;
    ++r.nodes_explored;
  }
  r.objective = inst.gamma_sq_sum() - model.utility();
  r.elapsed_s = seconds_since(start);
  return r;
}

SolverReport solve_greedy_binary(const CoverageInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  SolverReport r;
  r.method = Method::kGreedyBinary;
  r.status = SolverStatus::kHeuristic;
  r.effective_budget = effective_budget(inst, cfg, &r.warnings);
  r.selection = Selection::empty(inst.n_g(), cfg.budget);

  std::vector<int> counts(inst.n_p, 0);
  std::vector<std::uint8_t> group_used(static_cast<std::size_t>(inst.n_groups), 0);
  struct Key {
    std::int64_t newly_satisfied, never_seen, unsatisfied;
    auto operator<=>(const Key&) const = default;
  };
  auto key = [&](std::size_t i) {
    Key k{0, 0, 0};
    for (std::uint32_t j : inst.rows[i]) {
      const int d = inst.gamma[j] - counts[j];
      if (d == 1) ++k.newly_satisfied;
      if (counts[j] == 0) ++k.never_seen;
      if (d > 0) ++k.unsatisfied;
    }
    return k;
  };
  for (int step = 0; step < r.effective_budget; ++step) {
    const auto best = pick(inst, group_used, key);
    if (!best || key(*best) == Key{0, 0, 0}) break;
    for (std::uint32_t j : inst.rows[*best]) ++counts[j];
    group_used[static_cast<std::size_t>(inst.group[*best])] = 1;
    r.selection.chosen[*best] = 1;
    ++r.nodes_explored;
  }
  r.objective = deficit_cost(counts, inst.gamma);
  r.best_bound = 0;
  r.elapsed_s = seconds_since(start);
  return r;
}

SolverReport solve_mip(const MipModel& model, const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.method = Method::kProposedMip;
  c.budget = model.budget;
  SquaredDeficitModel utility(model.instance);
  return run_search(model.instance, utility, c, Sense::kMinimize);
}

SolverReport solve_zhao(const CoverageInstance& inst, const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.method = Method::kZhaoMip;
  SatisfiedModel utility(inst, cfg.gamma_max);
  return run_search(inst, utility, c, Sense::kMaximize);
}

double count_feasible_selections(const CoverageInstance& inst, int budget) {
  std::vector<double> sizes(static_cast<std::size_t>(inst.n_groups), 0.0);
  for (int g : inst.group) sizes[static_cast<std::size_t>(g)] += 1.0;
  const int k = std::max(0, std::min(budget, inst.n_groups));
  std::vector<double> ways(static_cast<std::size_t>(k) + 1, 0.0);
  ways[0] = 1.0;
  for (double s : sizes) {
    for (int m = k; m >= 1; --m) ways[static_cast<std::size_t>(m)] += ways[static_cast<std::size_t>(m) - 1] * s;
  }
  return std::accumulate(ways.begin(), ways.end(), 0.0);
}

SolverReport enumerate_exact(const CoverageInstance& inst, const SolverConfig& cfg,
                             Utility utility) {
  cfg.validate();
  const double combos = count_feasible_selections(inst, cfg.budget);
  if (combos > kEnumerationCap) {
    throw InputError("exhaustive search over " + std::to_string(combos) +
                     " selections exceeds the cap; use solve_mip instead");
  }
  const auto start = Clock::now();
  SolverReport r;
  r.method = Method::kExhaustive;
  r.status = SolverStatus::kOptimal;
  r.sense = utility == Utility::kSquaredDeficit ? Sense::kMinimize : Sense::kMaximize;
  r.effective_budget = effective_budget(inst, cfg, &r.warnings);

  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(inst.n_groups));
  for (std::size_t i = 0; i < inst.n_g(); ++i) {
    members[static_cast<std::size_t>(inst.group[i])].push_back(i);
  }
  std::vector<int> counts(inst.n_p, 0);
  std::vector<std::uint8_t> chosen(inst.n_g(), 0), best_chosen = chosen;
  std::int64_t best = -1;
  auto score = [&] {
    if (utility == Utility::kSquaredDeficit) {
      return inst.gamma_sq_sum() - deficit_cost(counts, inst.gamma);
    }
    std::int64_t s = 0;
    for (std::size_t j = 0; j < inst.n_p; ++j) s += counts[j] >= inst.gamma[j] ? 1 : 0;
    return s;
  };
  auto recurse = [&](auto&& self, std::size_t g, int left) -> void {
    if (g == members.size() || left == 0) {
      ++r.nodes_explored;
      const std::int64_t s = score();
      if (s > best) {
        best = s;
        best_chosen = chosen;
      }
      return;
    }
    self(self, g + 1, left);
    for (std::size_t i : members[g]) {
      for (std::uint32_t j : inst.rows[i]) ++counts[j];
      chosen[i] = 1;
      self(self, g + 1, left - 1);
      chosen[i] = 0;
      for (std::uint32_t j : inst.rows[i]) --counts[j];
    }
  };
  recurse(recurse, 0, r.effective_budget);

  r.selection = Selection{best_chosen, cfg.budget};
  r.objective = utility == Utility::kSquaredDeficit ? inst.gamma_sq_sum() - best : best;
  r.best_bound = r.objective;
  r.elapsed_s = seconds_since(start);
  return r;
}

SolverReport solve(const CoverageInstance& inst, const SolverConfig& cfg) {
  switch (cfg.method) {
    case Method::kProposedMip:
      return solve_mip(build_mip(inst, cfg.budget, cfg.gamma_max), cfg);
    case Method::kProposedGreedy:
      return solve_greedy_proposed(inst, cfg);
    case Method::kGreedyBinary:
      return solve_greedy_binary(inst, cfg);
    case Method::kZhaoMip:
      return solve_zhao(inst, cfg);
    case Method::kExhaustive:
      return enumerate_exact(inst, cfg);
  }
  throw InputError("unknown solver method");
}

}  // namespace camplace
