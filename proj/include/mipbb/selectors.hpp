// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>

#include "mipbb/mip.hpp"

namespace mipbb {

// Pure selection rules, shared by the selector classes and the ML policy's
// on_leaf delegation. Preconditions: open is nonempty.

/// Deepest node, ties broken by most recent insertion (LIFO).
int select_dfs(const OpenNodeSet& open);

/// FIFO by depth.
int select_bfs(const OpenNodeSet& open);

/// Lowest dual bound, ties broken by lower id.
int select_best_bound(const OpenNodeSet& open);

/// Lowest estimate, ties broken by lower id.
int select_min_estimate(const OpenNodeSet& open);

/// Highest policy score, ties broken by lower id.
int select_max_score(const OpenNodeSet& open);

/// DFS that returns the best-bound node on every restart_interval-th call.
struct RestartDfsState {
  long counter = 0;
};
int select_restart_dfs(const OpenNodeSet& open, RestartDfsState& state, long restart_interval);

struct PlungeState {
  int plunge_start_depth = 0;
  int length = 0;
  int abort_cap = 14;
};

class DfsSelector : public NodeSelector {
 public:
  const char* name() const override { return "dfs"; }
  int select(const OpenNodeSet& open) override { return select_dfs(open); }
};

class BfsSelector : public NodeSelector {
 public:
  const char* name() const override { return "bfs"; }
  int select(const OpenNodeSet& open) override { return select_bfs(open); }
};

class RestartDfsSelector : public NodeSelector {
 public:
  explicit RestartDfsSelector(long restart_interval = 100) : interval_(restart_interval) {}
  const char* name() const override { return "restartdfs"; }
  void reset() override { state_ = {}; }
  int select(const OpenNodeSet& open) override {
    return select_restart_dfs(open, state_, interval_);
  }

 private:
  long interval_;
  RestartDfsState state_;
};

/// BestEstimate with plunging: keep taking the just-created priority child
/// until a leaf or the plunge-depth cap, then jump to the open node with the
/// lowest estimate.
class BestEstimateSelector : public NodeSelector {
 public:
  explicit BestEstimateSelector(int plunge_abort_cap = 14) { plunge_.abort_cap = plunge_abort_cap; }
  const char* name() const override { return "bestestimate"; }
  void reset() override;
  int select(const OpenNodeSet& open) override;
  void on_children(const BranchInfo& info, ChildDirective& out) override;
  void on_leaf() override;

  long plunge_aborts() const { return aborts_; }

 private:
  PlungeState plunge_;
  std::optional<BranchChildren> last_children_;
  long aborts_ = 0;
};

/// Factory for the baseline selectors: dfs, bfs, restartdfs, bestestimate.
std::unique_ptr<NodeSelector> make_selector(const std::string& name);

} // namespace mipbb
