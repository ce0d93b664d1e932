// SPDX-License-Identifier: Apache-2.0
#include "mipbb/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace mipbb {

int MipModel::num_integer() const {
  int k = 0;
  for (VarType t : integrality)
    if (is_integer_type(t)) ++k;
  return k;
}

void MipModel::validate() const {
  lp.validate();
  if (static_cast<int>(integrality.size()) != lp.num_vars())
    throw std::invalid_argument("MipModel: integrality size mismatch");
  if (num_integer() < 1) throw std::invalid_argument("MipModel: needs at least one integer var");
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (integrality[j] == VarType::Binary) {
      const auto& [lo, hi] = lp.var_bounds[j];
      if (lo < -1e-9 || hi > 1.0 + 1e-9)
        throw std::invalid_argument("MipModel: binary variable with bounds outside [0,1]");
    }
  }
}

double min_view_objective(const MipModel& model, const LpSolution& sol) {
  return model.lp.sense == Sense::Maximize ? -sol.objective_value : sol.objective_value;
}

double integrality_gap(double primal_bound, double dual_bound) {
  if (primal_bound == dual_bound && std::isfinite(primal_bound)) return 0.0;
  if (!std::isfinite(primal_bound) || !std::isfinite(dual_bound)) return kInf;
  if ((primal_bound > 0) != (dual_bound > 0) || primal_bound == 0.0 || dual_bound == 0.0)
    return kInf;
  const double denom = std::min(std::fabs(primal_bound), std::fabs(dual_bound));
  return std::fabs(primal_bound - dual_bound) / denom;
}

double optimality_gap(double found_objective, double optimal_objective) {
  return integrality_gap(found_objective, optimal_objective);
}

PrioSide prio_child(double infer_left, double infer_right, double value, double root_value) {
  const double p_left = infer_left * (root_value - value + 1.0);
  const double p_right = infer_right * (value - root_value + 1.0);
  if (p_left > p_right) return PrioSide::Left;
  if (p_left < p_right) return PrioSide::Right;
  return PrioSide::None;
}

double best_estimate_score(double dual_bound, std::span<const std::pair<int, double>> fractionals,
                           const PseudoCostTable& pc) {
  double score = dual_bound;
  for (const auto& [var, f] : fractionals) {
    score += std::min(pc.pseudo_down(var) * f, pc.pseudo_up(var) * (1.0 - f));
  }
  return score;
}

std::optional<BranchVariable> pick_branch_variable(const MipModel& model,
                                                   std::span<const double> values,
                                                   double int_tol) {
  BranchVariable best;
  double best_score = int_tol;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (!is_integer_type(model.integrality[j])) continue;
    const double v = values[j];
    const double fl = std::floor(v);
    const double f = v - fl;
    const double score = std::min(f, 1.0 - f);
    if (score > best_score) {
      best_score = score;
      best = BranchVariable{j, v, f, fl};
    }
  }
  if (best.var < 0) return std::nullopt;
  return best;
}

std::pair<BoundMap, BoundMap> child_bound_changes(const BoundMap& parent, int var,
                                                  double floor_bound, double eff_lb,
                                                  double eff_ub) {
  BoundMap left = parent;
  BoundMap right = parent;
  left[var] = {eff_lb, std::min(eff_ub, floor_bound)};
  right[var] = {std::max(eff_lb, floor_bound + 1.0), eff_ub};
  return {left, right};
}

void OpenNodeSet::insert(const OpenNodeEntry& e) {
  auto [it, fresh] = nodes_.emplace(e.id, e);
  if (!fresh) throw std::logic_error("OpenNodeSet: duplicate id");
  duals_.insert(e.dual_bound);
}

void OpenNodeSet::erase(int id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw std::logic_error("OpenNodeSet: erase of unknown id");
  duals_.erase(duals_.find(it->second.dual_bound));
  nodes_.erase(it);
}

double OpenNodeSet::min_dual_bound() const {
  return duals_.empty() ? kInf : *duals_.begin();
}

namespace {

const char* action_name(NodeAction a) {
  switch (a) {
    case NodeAction::Branch: return "branch";
    case NodeAction::Incumbent: return "incumbent";
    case NodeAction::SkippedBound: return "skip";
    case NodeAction::PrunedBound: return "prune";
    case NodeAction::Infeasible: return "infeasible";
    case NodeAction::PolicyPruned: return "policy_prune";
    case NodeAction::LpError: return "lp_error";
  }
  return "?";
}

} // namespace

std::string node_events_to_jsonl(const std::vector<NodeEvent>& events) {
  std::ostringstream out;
  for (const auto& e : events) {
    nlohmann::json j;
    j["id"] = e.id;
    if (e.parent) j["parent"] = *e.parent; else j["parent"] = nullptr;
    j["depth"] = e.depth;
    j["action"] = action_name(e.action);
    j["reason"] = e.reason;
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& [var, bd] : e.bounds) {
      bounds.push_back({var, bd.first, bd.second});
    }
    j["bounds"] = bounds;
    out << j.dump() << '\n';
  }
  return out.str();
}

BranchAndBound::BranchAndBound(const MipModel& model, EngineOptions opts)
    : model_(model), opts_(opts) {
  model_.validate();
  maximize_ = model_.lp.sense == Sense::Maximize;
  obj_inf_norm_ = 0.0;
  for (double c : model_.lp.objective) obj_inf_norm_ = std::max(obj_inf_norm_, std::fabs(c));
  if (obj_inf_norm_ == 0.0) obj_inf_norm_ = 1.0;
}

SolveResult BranchAndBound::solve(NodeSelector& selector, const SolveLimits& limits) {
  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();

  nodes_.clear();
  open_ = OpenNodeSet{};
  bounds_ = SearchBounds{};
  pc_ = PseudoCostTable(model_.num_vars());
  root_values_.clear();
  inc_sum_.assign(model_.num_vars(), 0.0);
  prev_basis_.assign(model_.num_vars(), BasisStatus::Basic);
  last_basis_change_.assign(model_.num_vars(), 0);
  lp_count_ = 0;
  lp_iters_total_ = 0;
  max_depth_seen_ = 0;
  insertions_ = 0;

  SolveResult result;
  selector.reset();

  BnbNode root;
  root.id = 0;
  root.dual_bound = -kInf;
  nodes_.push_back(root);
  open_.insert(OpenNodeEntry{0, -kInf, -kInf, 0, insertions_++, 0.0});

  bool hit_limit = false;
  bool stopped_at_leaf = false;
  while (!open_.empty()) {
    const double elapsed = std::chrono::duration<double>(Clock::now() - t_start).count();
    if (elapsed >= limits.time_seconds ||
        (limits.max_nodes >= 0 && result.nodes_processed >= limits.max_nodes)) {
      hit_limit = true;
      break;
    }
    const int id = selector.select(open_);
    open_.erase(id);
    ++result.nodes_processed;
    bool leaf = false;
    process_node(id, result, selector, leaf);
    nodes_[id].bound_changes.clear(); // children carry their own copies
    if (leaf) {
      if (!result.first_leaf_depth) result.first_leaf_depth = nodes_[id].depth;
      selector.on_leaf();
      if (limits.stop_at_first_leaf) {
        stopped_at_leaf = true;
        break;
      }
    }
    // The global dual bound only ever improves (minimization view).
    const double open_min = std::min(open_.min_dual_bound(), bounds_.primal_bound);
    if (std::isfinite(open_min)) bounds_.dual_bound = std::max(bounds_.dual_bound, open_min);
  }

  if (hit_limit) {
    result.status = SolveStatus::LimitReached;
    result.final_gap = integrality_gap(bounds_.primal_bound, bounds_.dual_bound);
  } else if (open_.empty() && result.policy_pruned == 0) {
    if (bounds_.incumbent) {
      result.status = SolveStatus::Optimal;
      bounds_.dual_bound = bounds_.primal_bound;
      result.final_gap = 0.0;
    } else {
      result.status = SolveStatus::Infeasible;
      result.final_gap = 0.0;
    }
  } else {
    // First-leaf stop or heuristic (policy-pruned) exhaustion.
    result.status = bounds_.incumbent ? SolveStatus::Feasible : SolveStatus::LimitReached;
    result.final_gap = integrality_gap(bounds_.primal_bound, bounds_.dual_bound);
  }
  (void)stopped_at_leaf;
  if (bounds_.incumbent) {
    result.incumbent = bounds_.incumbent;
    result.best_objective = maximize_ ? -bounds_.primal_bound : bounds_.primal_bound;
  }
  result.lp_iterations = lp_iters_total_;
  result.bounds = bounds_;
  result.solving_time = std::chrono::duration<double>(Clock::now() - t_start).count();
  return result;
}

void BranchAndBound::process_node(int id, SolveResult& result, NodeSelector& selector,
                                  bool& leaf) {
  BnbNode& node = nodes_[id];
  max_depth_seen_ = std::max(max_depth_seen_, node.depth);

  auto log_event = [&](NodeAction action, const std::string& reason) {
    if (!opts_.record_events) return;
    NodeEvent e;
    e.id = node.id;
    e.parent = node.parent_id;
    e.depth = node.depth;
    e.action = action;
    e.reason = reason;
    if (opts_.record_event_bounds) e.bounds = node.bound_changes;
    result.event_log.push_back(std::move(e));
  };

  // Algorithm order: dual-bound skip, relaxation, infeasibility, bound
  // pruning, integrality, branching.
  if (node.dual_bound >= bounds_.primal_bound - 1e-9) {
    log_event(NodeAction::SkippedBound, "bound_pre");
    leaf = true;
    return;
  }

  LpSolution rel;
  try {
    rel = lp_ws_.solve(model_.lp, [&] {
      auto b = model_.lp.var_bounds;
      for (const auto& [var, bd] : node.bound_changes) {
        b[var].first = std::max(b[var].first, bd.first);
        b[var].second = std::min(b[var].second, bd.second);
        if (b[var].first > b[var].second) throw InvalidNodeError("contradictory node bounds");
      }
      return b;
    }(), opts_.lp);
  } catch (const InvalidNodeError&) {
    log_event(NodeAction::Infeasible, "infeasible");
    leaf = true;
    return;
  } catch (const SimplexError& e) {
    ++result.node_failures;
    log_event(NodeAction::LpError, e.what());
    leaf = true;
    return;
  }

  if (rel.status == LpStatus::Infeasible) {
    log_event(NodeAction::Infeasible, "infeasible");
    leaf = true;
    return;
  }
  if (rel.status == LpStatus::Unbounded) {
    ++result.node_failures;
    log_event(NodeAction::LpError, "unbounded relaxation");
    leaf = true;
    return;
  }

  ++lp_count_;
  lp_iters_total_ += rel.iterations;
  for (int j = 0; j < model_.num_vars(); ++j) {
    if (lp_count_ == 1 || rel.basis_status[j] != prev_basis_[j]) {
      prev_basis_[j] = rel.basis_status[j];
      last_basis_change_[j] = lp_count_;
    }
  }
  if (node.id == 0) root_values_ = rel.values;

  const double obj = min_view_objective(model_, rel);

  // Pseudo-cost observation for the branching that created this node.
  if (node.branched_var && std::isfinite(node.dual_bound)) {
    const double dist = node.is_left_child ? node.branch_frac : 1.0 - node.branch_frac;
    if (dist > 1e-9) {
      pc_.add_pseudo_obs(*node.branched_var, node.is_left_child,
                         std::max(0.0, obj - node.dual_bound) / dist);
    }
  }

  if (obj > bounds_.primal_bound + 1e-9) {
    log_event(NodeAction::PrunedBound, "bound_post");
    leaf = true;
    return;
  }

  const auto branch_var = pick_branch_variable(model_, rel.values, opts_.int_tol);
  if (!branch_var) {
    // Integer feasible.
    leaf = true;
    if (solution_observer_) solution_observer_(rel.values, obj);
    if (obj < bounds_.primal_bound - opts_.incumbent_improve_eps || !bounds_.incumbent) {
      bounds_.incumbent = rel.values;
      bounds_.incumbent_history.push_back(rel.values);
      for (int j = 0; j < model_.num_vars(); ++j) inc_sum_[j] += rel.values[j];
      log_event(NodeAction::Incumbent, "incumbent");
    } else {
      log_event(NodeAction::Incumbent, "feasible_not_improving");
    }
    bounds_.primal_bound = std::min(bounds_.primal_bound, obj);
    return;
  }

  // Branch: floor split of the most fractional variable.
  const int v = branch_var->var;
  auto eff_bounds = model_.lp.var_bounds[v];
  if (auto it = node.bound_changes.find(v); it != node.bound_changes.end()) {
    eff_bounds.first = std::max(eff_bounds.first, it->second.first);
    eff_bounds.second = std::min(eff_bounds.second, it->second.second);
  }
  auto [left_bounds, right_bounds] =
      child_bound_changes(node.bound_changes, v, branch_var->floor_bound, eff_bounds.first,
                          eff_bounds.second);

  const double root_value = root_values_.empty() ? branch_var->value : root_values_[v];
  const PrioSide prio = prio_child(pc_.infer_left(v), pc_.infer_right(v), branch_var->value,
                                   root_value);

  // One propagation pass per child to observe inference counts; the
  // deductions are counted, not applied, so every node differs from its
  // parent by exactly one bound change.
  auto count_inferences = [&](const BoundMap& child) -> double {
    std::vector<std::pair<double, double>> b = model_.lp.var_bounds;
    for (const auto& [var, bd] : child) {
      b[var].first = std::max(b[var].first, bd.first);
      b[var].second = std::min(b[var].second, bd.second);
    }
    int count = 0;
    const int n = model_.num_vars();
    for (const auto& row : model_.lp.rows) {
      // Activity bounds of the row over the current box.
      double min_act = 0.0, max_act = 0.0;
      bool min_inf = false, max_inf = false;
      for (int j = 0; j < n; ++j) {
        const double a = row.coefs[j];
        if (a == 0.0) continue;
        const double lo = a > 0 ? b[j].first : b[j].second;
        const double hi = a > 0 ? b[j].second : b[j].first;
        if (std::isfinite(lo)) min_act += a * lo; else min_inf = true;
        if (std::isfinite(hi)) max_act += a * hi; else max_inf = true;
      }
      for (int j = 0; j < n; ++j) {
        const double a = row.coefs[j];
        if (a == 0.0 || j == v) continue;
        // <= rows bound from above, >= from below, = both.
        if ((row.rel == Relation::LessEqual || row.rel == Relation::Equal) && !min_inf) {
          const double contrib = a > 0 ? a * b[j].first : a * b[j].second;
          const double slack = row.rhs - (min_act - contrib);
          double new_lo = b[j].first, new_hi = b[j].second;
          if (a > 0) new_hi = slack / a; else new_lo = slack / a;
          if (is_integer_type(model_.integrality[j])) {
            new_hi = std::floor(new_hi + 1e-9);
            new_lo = std::ceil(new_lo - 1e-9);
          }
          if (a > 0 && new_hi < b[j].second - 1e-9) { b[j].second = new_hi; ++count; }
          if (a < 0 && new_lo > b[j].first + 1e-9) { b[j].first = new_lo; ++count; }
        }
        if ((row.rel == Relation::GreaterEqual || row.rel == Relation::Equal) && !max_inf) {
          const double contrib = a > 0 ? a * b[j].second : a * b[j].first;
          const double surplus = row.rhs - (max_act - contrib);
          double new_lo = b[j].first, new_hi = b[j].second;
          if (a > 0) new_lo = surplus / a; else new_hi = surplus / a;
          if (is_integer_type(model_.integrality[j])) {
            new_hi = std::floor(new_hi + 1e-9);
            new_lo = std::ceil(new_lo - 1e-9);
          }
          if (a > 0 && new_lo > b[j].first + 1e-9) { b[j].first = new_lo; ++count; }
          if (a < 0 && new_hi < b[j].second - 1e-9) { b[j].second = new_hi; ++count; }
        }
      }
    }
    return static_cast<double>(count);
  };
  const double infer_l = count_inferences(left_bounds);
  const double infer_r = count_inferences(right_bounds);

  // Child estimates: parent BestEstimate score with the branched variable's
  // min-completion replaced by the directional cost.
  std::vector<std::pair<int, double>> fracs;
  for (int j = 0; j < model_.num_vars(); ++j) {
    if (!is_integer_type(model_.integrality[j])) continue;
    const double f = rel.values[j] - std::floor(rel.values[j]);
    if (std::min(f, 1.0 - f) > opts_.int_tol) fracs.push_back({j, f});
  }
  const double base_score = best_estimate_score(obj, fracs, pc_);
  const double f_v = branch_var->frac;
  const double min_v = std::min(pc_.pseudo_down(v) * f_v, pc_.pseudo_up(v) * (1.0 - f_v));
  const double left_estimate = base_score - min_v + pc_.pseudo_down(v) * f_v;
  const double right_estimate = base_score - min_v + pc_.pseudo_up(v) * (1.0 - f_v);

  pc_.add_infer_obs(v, true, infer_l);
  pc_.add_infer_obs(v, false, infer_r);

  BnbNode left;
  left.id = static_cast<int>(nodes_.size());
  left.parent_id = node.id;
  left.depth = node.depth + 1;
  left.bound_changes = std::move(left_bounds);
  left.dual_bound = obj;
  left.branched_var = v;
  left.is_left_child = true;
  left.is_prio_child = prio == PrioSide::Left;
  left.estimate = left_estimate;
  left.branch_frac = f_v;
  BnbNode right = left;
  right.id = left.id + 1;
  right.bound_changes = std::move(right_bounds);
  right.is_left_child = false;
  right.is_prio_child = prio == PrioSide::Right;
  right.estimate = right_estimate;

  BranchInfo info;
  info.node_id = node.id;
  info.depth = node.depth;
  info.children = BranchChildren{left.id, right.id, left.is_prio_child, right.is_prio_child};

  const bool need_features = selector.wants_features() || static_cast<bool>(branch_observer_);
  BranchSnapshot snap;
  FeatureVector fv;
  if (need_features) {
    snap.node_id = node.id;
    snap.depth = node.depth;
    snap.branched_var = v;
    snap.branch_value = branch_var->value;
    snap.floor_bound = branch_var->floor_bound;
    snap.var_type = model_.integrality[v];
    snap.obj_coef = maximize_ ? -model_.lp.objective[v] : model_.lp.objective[v];
    snap.obj_inf_norm = obj_inf_norm_;
    snap.var_lb = eff_bounds.first;
    snap.var_ub = eff_bounds.second;
    snap.basis = rel.basis_status[v];
    snap.reduced_cost = maximize_ ? -rel.reduced_costs[v] : rel.reduced_costs[v];
    snap.age = lp_count_ > 0
                   ? static_cast<double>(lp_count_ - last_basis_change_[v]) /
                         static_cast<double>(lp_count_)
                   : 0.0;
    snap.has_incumbent = bounds_.incumbent.has_value();
    if (snap.has_incumbent) {
      snap.inc_val = (*bounds_.incumbent)[v];
      snap.avg_inc_val = inc_sum_[v] / static_cast<double>(bounds_.incumbent_history.size());
    }
    snap.left_lb = obj;
    snap.right_lb = obj;
    snap.left_estimate = left_estimate;
    snap.right_estimate = right_estimate;
    snap.left_is_prio = left.is_prio_child;
    snap.right_is_prio = right.is_prio_child;
    snap.primal_bound = bounds_.primal_bound;
    snap.dual_bound = std::isfinite(bounds_.dual_bound) ? bounds_.dual_bound : obj;
    snap.sb_lp_iters = 0;
    snap.node_lp_iters = lp_iters_total_;
    snap.max_depth = max_depth_seen_;
    fv = extract_features(snap);
    info.features = &fv;
  }

  ChildDirective directive;
  selector.on_children(info, directive);
  if (!directive.keep_left && !directive.keep_right) directive.keep_left = true;

  if (directive.has_scores) {
    left.policy_score = directive.score_left;
    right.policy_score = directive.score_right;
  }

  log_event(NodeAction::Branch, "branch");
  nodes_.push_back(left);
  nodes_.push_back(right);
  auto queue_child = [&](const BnbNode& child, bool keep) {
    if (keep) {
      open_.insert(OpenNodeEntry{child.id, child.dual_bound, child.estimate, child.depth,
                                 insertions_++, child.policy_score.value_or(0.0)});
    } else {
      ++result.policy_pruned;
      if (opts_.record_events) {
        NodeEvent e;
        e.id = child.id;
        e.parent = node.id;
        e.depth = child.depth;
        e.action = NodeAction::PolicyPruned;
        e.reason = "policy";
        if (opts_.record_event_bounds) e.bounds = child.bound_changes;
        result.event_log.push_back(std::move(e));
      }
    }
  };
  queue_child(nodes_[left.id], directive.keep_left);
  queue_child(nodes_[right.id], directive.keep_right);

  if (branch_observer_) {
    BranchObservation obs;
    obs.snapshot = snap;
    obs.features = fv;
    obs.left_id = left.id;
    obs.right_id = right.id;
    obs.parent_bounds = &node.bound_changes;
    branch_observer_(obs);
  }
  leaf = false;
}

} // namespace mipbb
