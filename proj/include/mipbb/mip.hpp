// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mipbb/features.hpp"
#include "mipbb/lp.hpp"
#include "mipbb/types.hpp"

namespace mipbb {

struct MipModel {
  LpProblem lp;
  std::vector<VarType> integrality;

  int num_vars() const { return lp.num_vars(); }
  int num_integer() const;
  void validate() const;
};

struct BnbNode {
  int id = 0;
  std::optional<int> parent_id;
  int depth = 0;
  BoundMap bound_changes;           // accumulated from the root
  double dual_bound = -kInf;        // parent relaxation objective (min view)
  std::optional<int> branched_var;  // variable split at the parent
  bool is_left_child = false;
  bool is_prio_child = false;
  double estimate = 0.0;
  std::optional<double> policy_score;
  double branch_frac = 0.0;         // fractional part of the parent's LP value
};

struct SearchBounds {
  double primal_bound = kInf; // min view
  double dual_bound = -kInf;  // min view
  std::optional<std::vector<double>> incumbent;
  std::vector<std::vector<double>> incumbent_history;
};

/// Per-variable, per-direction running means for pseudo-costs and inference
/// counts. Directions: left = downward branch, right = upward branch.
/// Unobserved entries report 1.0 so priorities are defined from node one.
class PseudoCostTable {
 public:
  PseudoCostTable() = default;
  explicit PseudoCostTable(int num_vars) : stats_(num_vars) {}

  double pseudo_down(int var) const { return mean_or_init(stats_[var].pseudo[0]); }
  double pseudo_up(int var) const { return mean_or_init(stats_[var].pseudo[1]); }
  double infer_left(int var) const { return mean_or_init(stats_[var].infer[0]); }
  double infer_right(int var) const { return mean_or_init(stats_[var].infer[1]); }
  long pseudo_count(int var, bool down) const { return stats_[var].pseudo[down ? 0 : 1].count; }

  void add_pseudo_obs(int var, bool down, double gain_per_frac) {
    stats_[var].pseudo[down ? 0 : 1].add(gain_per_frac);
  }
  void add_infer_obs(int var, bool left, double inferences) {
    stats_[var].infer[left ? 0 : 1].add(inferences);
  }

 private:
  struct Stat {
    double mean = 0.0;
    long count = 0;
    void add(double v) { ++count; mean += (v - mean) / static_cast<double>(count); }
  };
  struct VarStats {
    std::array<Stat, 2> pseudo; // [down, up]
    std::array<Stat, 2> infer;  // [left, right]
  };
  static double mean_or_init(const Stat& s) { return s.count == 0 ? 1.0 : s.mean; }
  std::vector<VarStats> stats_;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, LimitReached };

enum class NodeAction { Branch, Incumbent, SkippedBound, PrunedBound, Infeasible, PolicyPruned, LpError };

struct NodeEvent {
  int id = 0;
  std::optional<int> parent;
  int depth = 0;
  NodeAction action = NodeAction::Branch;
  std::string reason;
  BoundMap bounds; // populated only when record_event_bounds is on
};

std::string node_events_to_jsonl(const std::vector<NodeEvent>& events);

struct SolveResult {
  SolveStatus status = SolveStatus::LimitReached;
  double best_objective = 0.0; // original sense; meaningless without incumbent
  std::optional<std::vector<double>> incumbent;
  long nodes_processed = 0;
  double solving_time = 0.0;
  double final_gap = kInf;
  std::optional<int> first_leaf_depth;
  std::vector<NodeEvent> event_log;
  long lp_iterations = 0;
  long node_failures = 0;
  long policy_pruned = 0;
  SearchBounds bounds; // final search bounds (min view)
};

struct SolveLimits {
  double time_seconds = kInf;
  long max_nodes = -1; // negative: unlimited
  bool stop_at_first_leaf = false;
};

// ---------------------------------------------------------------------------
// Standalone operations.

/// Relative primal/dual gap. 0 when the bounds coincide; +inf when signs
/// differ, either bound is infinite, or the smaller magnitude is 0 with
/// distinct bounds.
double integrality_gap(double primal_bound, double dual_bound);

/// Gap between a found objective and the known optimum (same formula).
double optimality_gap(double found_objective, double optimal_objective);

enum class PrioSide { Left, Right, None };

/// Brancher child priority: P_L = I_L*(V_r - V + 1) vs P_R = I_R*(V - V_r + 1).
PrioSide prio_child(double infer_left, double infer_right, double value, double root_value);

/// BestEstimate node score: dual bound plus, per fractional variable, the
/// cheaper pseudo-cost completion min(psi_down*f, psi_up*(1-f)).
double best_estimate_score(double dual_bound, std::span<const std::pair<int, double>> fractionals,
                           const PseudoCostTable& pc);

struct BranchVariable {
  int var = -1;
  double value = 0.0;
  double frac = 0.0;        // value - floor(value)
  double floor_bound = 0.0;
};

/// Most-fractional integer variable, ties broken by lowest index. Empty when
/// the point is integer feasible.
std::optional<BranchVariable> pick_branch_variable(const MipModel& model,
                                                   std::span<const double> values,
                                                   double int_tol = 1e-6);

/// Child bound-change maps for a floor split of `var`, given the parent's
/// accumulated changes and the variable's effective bounds at the parent.
std::pair<BoundMap, BoundMap> child_bound_changes(const BoundMap& parent, int var,
                                                  double floor_bound, double eff_lb,
                                                  double eff_ub);

// ---------------------------------------------------------------------------
// Open-node bookkeeping shared by the engine and the selectors.

struct OpenNodeEntry {
  int id = 0;
  double dual_bound = 0.0;
  double estimate = 0.0;
  int depth = 0;
  long insertion_order = 0;
  double policy_score = 0.0;
};

class OpenNodeSet {
 public:
  void insert(const OpenNodeEntry& e);
  void erase(int id);
  bool contains(int id) const { return nodes_.count(id) != 0; }
  const OpenNodeEntry& at(int id) const { return nodes_.at(id); }
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  double min_dual_bound() const; // +inf when empty

  auto begin() const { return nodes_.begin(); }
  auto end() const { return nodes_.end(); }

 private:
  std::map<int, OpenNodeEntry> nodes_; // id order gives deterministic scans
  std::multiset<double> duals_;
};

struct BranchChildren {
  int left_id = 0;
  int right_id = 0;
  bool left_is_prio = false;
  bool right_is_prio = false;
};

struct BranchInfo {
  int node_id = 0;
  int depth = 0;
  BranchChildren children;
  const FeatureVector* features = nullptr; // set only for wants_features selectors
};

/// Filled by a selector from on_children to steer the engine: children can be
/// dropped (heuristic pruning) and annotated with policy scores; the
/// preferred child is what a plunging selector will pick next.
struct ChildDirective {
  bool keep_left = true;
  bool keep_right = true;
  bool has_scores = false;
  double score_left = 0.0;
  double score_right = 0.0;
  int preferred_child = -1;
};

class NodeSelector {
 public:
  virtual ~NodeSelector() = default;
  virtual const char* name() const = 0;
  virtual void reset() {}
  virtual int select(const OpenNodeSet& open) = 0;
  virtual void on_children(const BranchInfo& info, ChildDirective& out) {
    (void)info;
    (void)out;
  }
  virtual void on_leaf() {}
  virtual bool wants_features() const { return false; }
};

struct BranchObservation {
  BranchSnapshot snapshot;
  FeatureVector features;
  int left_id = 0;
  int right_id = 0;
  const BoundMap* parent_bounds = nullptr; // valid only during the callback
};

using BranchObserver = std::function<void(const BranchObservation&)>;
using SolutionObserver = std::function<void(const std::vector<double>&, double /*obj, min view*/)>;

struct EngineOptions {
  SimplexOptions lp;
  double int_tol = 1e-6;
  double incumbent_improve_eps = 1e-9;
  bool record_events = true;
  bool record_event_bounds = false;
};

class BranchAndBound {
 public:
  explicit BranchAndBound(const MipModel& model, EngineOptions opts = {});

  SolveResult solve(NodeSelector& selector, const SolveLimits& limits = {});

  void set_branch_observer(BranchObserver obs) { branch_observer_ = std::move(obs); }
  void set_solution_observer(SolutionObserver obs) { solution_observer_ = std::move(obs); }

  const MipModel& model() const { return model_; }
  const PseudoCostTable& pseudo_costs() const { return pc_; }

 private:
  struct NodeOutcome;
  void process_node(int id, SolveResult& result, NodeSelector& selector, bool& leaf);

  const MipModel& model_;
  EngineOptions opts_;
  bool maximize_ = false;
  double obj_inf_norm_ = 1.0;

  SimplexWorkspace lp_ws_;
  std::deque<BnbNode> nodes_;
  OpenNodeSet open_;
  SearchBounds bounds_;
  PseudoCostTable pc_;
  std::vector<double> root_values_;
  std::vector<double> inc_sum_; // running sum of incumbent values per var

  std::vector<BasisStatus> prev_basis_;
  std::vector<long> last_basis_change_;
  long lp_count_ = 0;
  long lp_iters_total_ = 0;
  int max_depth_seen_ = 0;
  long insertions_ = 0;

  BranchObserver branch_observer_;
  SolutionObserver solution_observer_;
};

/// Minimization-view objective of an LP solution of `model`.
double min_view_objective(const MipModel& model, const LpSolution& sol);

} // namespace mipbb
