// SPDX-License-Identifier: Apache-2.0
#include "mipbb/selectors.hpp"

#include <stdexcept>

namespace mipbb {

int select_dfs(const OpenNodeSet& open) {
  int best = -1;
  int best_depth = -1;
  long best_order = -1;
  for (const auto& [id, e] : open) {
    if (e.depth > best_depth || (e.depth == best_depth && e.insertion_order > best_order)) {
      best = id;
      best_depth = e.depth;
      best_order = e.insertion_order;
    }
  }
  return best;
}

int select_bfs(const OpenNodeSet& open) {
  int best = -1;
  int best_depth = 0;
  long best_order = 0;
  for (const auto& [id, e] : open) {
    if (best < 0 || e.depth < best_depth ||
        (e.depth == best_depth && e.insertion_order < best_order)) {
      best = id;
      best_depth = e.depth;
      best_order = e.insertion_order;
    }
  }
  return best;
}

int select_best_bound(const OpenNodeSet& open) {
  int best = -1;
  double best_bound = kInf;
  for (const auto& [id, e] : open) {
    if (best < 0 || e.dual_bound < best_bound) { // id order breaks ties low
      best = id;
      best_bound = e.dual_bound;
    }
  }
  return best;
}

int select_min_estimate(const OpenNodeSet& open) {
  int best = -1;
  double best_est = kInf;
  for (const auto& [id, e] : open) {
    if (best < 0 || e.estimate < best_est) {
      best = id;
      best_est = e.estimate;
    }
  }
  return best;
}

int select_max_score(const OpenNodeSet& open) {
  int best = -1;
  double best_score = -kInf;
  for (const auto& [id, e] : open) {
    if (best < 0 || e.policy_score > best_score) {
      best = id;
      best_score = e.policy_score;
    }
  }
  return best;
}

int select_restart_dfs(const OpenNodeSet& open, RestartDfsState& state, long restart_interval) {
  ++state.counter;
  if (state.counter >= restart_interval) {
    state.counter = 0;
    return select_best_bound(open);
  }
  return select_dfs(open);
}

void BestEstimateSelector::reset() {
  plunge_.length = 0;
  plunge_.plunge_start_depth = 0;
  last_children_.reset();
  aborts_ = 0;
}

void BestEstimateSelector::on_children(const BranchInfo& info, ChildDirective& out) {
  (void)out;
  last_children_ = info.children;
}

void BestEstimateSelector::on_leaf() {
  last_children_.reset();
  plunge_.length = 0;
}

int BestEstimateSelector::select(const OpenNodeSet& open) {
  if (last_children_) {
    if (plunge_.length < plunge_.abort_cap) {
      const auto& c = *last_children_;
      int pick = c.right_is_prio ? c.right_id : c.left_id; // prio right, else left
      if (!open.contains(pick)) pick = pick == c.left_id ? c.right_id : c.left_id;
      if (open.contains(pick)) {
        ++plunge_.length;
        last_children_.reset();
        return pick;
      }
    } else {
      ++aborts_;
    }
  }
  last_children_.reset();
  plunge_.length = 0;
  const int id = select_min_estimate(open);
  plunge_.plunge_start_depth = open.at(id).depth;
  return id;
}

std::unique_ptr<NodeSelector> make_selector(const std::string& name) {
  if (name == "dfs") return std::make_unique<DfsSelector>();
  if (name == "bfs") return std::make_unique<BfsSelector>();
  if (name == "restartdfs") return std::make_unique<RestartDfsSelector>();
  if (name == "bestestimate") return std::make_unique<BestEstimateSelector>();
  throw std::invalid_argument("unknown selector: " + name);
}

} // namespace mipbb
