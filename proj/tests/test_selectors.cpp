// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "mipbb/mip.hpp"
#include "mipbb/selectors.hpp"

using namespace mipbb;

namespace {

OpenNodeEntry entry(int id, int depth, long order, double dual = 0.0, double est = 0.0,
                    double score = 0.0) {
  return OpenNodeEntry{id, dual, est, depth, order, score};
}

MipModel knapsack_like(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> coef(1, 9);
  MipModel m;
  m.lp.objective.resize(n);
  for (auto& c : m.lp.objective) c = -coef(rng);
  m.lp.var_bounds.assign(n, {0.0, 1.0});
  m.integrality.assign(n, VarType::Binary);
  LpRow row;
  row.coefs.resize(n);
  double tot = 0;
  for (auto& a : row.coefs) {
    a = coef(rng);
    tot += a;
  }
  row.rel = Relation::LessEqual;
  row.rhs = tot / 2.0 + 0.25;
  m.lp.rows.push_back(row);
  return m;
}

} // namespace

TEST_CASE("dfs: singleton, LIFO tie-break, deepest after backtrack") {
  OpenNodeSet open;
  open.insert(entry(0, 0, 0));
  CHECK(select_dfs(open) == 0);

  open.erase(0);
  open.insert(entry(1, 1, 1)); // left inserted first
  open.insert(entry(2, 1, 2)); // right inserted second
  CHECK(select_dfs(open) == 2);

  // Simulated backtrack: deep frontier exhausted, shallower nodes remain.
  open.erase(2);
  open.insert(entry(3, 2, 3));
  open.insert(entry(4, 2, 4));
  open.erase(4);
  open.erase(3);
  CHECK(select_dfs(open) == 1);
}

TEST_CASE("bfs is FIFO by depth") {
  OpenNodeSet open;
  open.insert(entry(5, 2, 7));
  open.insert(entry(6, 1, 8));
  open.insert(entry(7, 1, 9));
  CHECK(select_bfs(open) == 6);
}

TEST_CASE("restart dfs") {
  RestartDfsState st;
  OpenNodeSet open;
  open.insert(entry(1, 3, 1, 5.0));
  open.insert(entry(2, 1, 2, 3.0));

  SUBCASE("pass-through phase behaves like dfs") {
    CHECK(select_restart_dfs(open, st, 100) == select_dfs(open));
    CHECK(st.counter == 1);
  }
  SUBCASE("R-th selection returns the best bound and resets") {
    st.counter = 99;
    CHECK(select_restart_dfs(open, st, 100) == 2); // dual 3.0
    CHECK(st.counter == 0);
  }
  SUBCASE("R=1 degenerates to best-first") {
    for (int i = 0; i < 3; ++i) CHECK(select_restart_dfs(open, st, 1) == 2);
  }
}

TEST_CASE("best estimate selector plunges on the priority child") {
  BestEstimateSelector sel(14);
  sel.reset();
  OpenNodeSet open;
  open.insert(entry(1, 1, 1, 0.0, 10.0));
  open.insert(entry(2, 1, 2, 0.0, 20.0));

  BranchInfo info;
  info.children = BranchChildren{1, 2, false, true}; // right is priority
  ChildDirective dir;
  sel.on_children(info, dir);
  CHECK(sel.select(open) == 2);

  // Leaf reached: next selection is global minimum estimate.
  open.erase(2);
  open.insert(entry(3, 2, 3, 0.0, 30.0));
  sel.on_leaf();
  CHECK(sel.select(open) == 1); // estimate 10 < 30
}

TEST_CASE("best estimate selector: no prio falls back to left, cap aborts") {
  BestEstimateSelector sel(2);
  sel.reset();
  OpenNodeSet open;
  open.insert(entry(1, 1, 1, 0.0, 10.0));
  open.insert(entry(2, 1, 2, 0.0, 5.0));

  BranchInfo info;
  info.children = BranchChildren{1, 2, false, false};
  ChildDirective dir;
  sel.on_children(info, dir);
  CHECK(sel.select(open) == 1); // none -> left child

  open.erase(1);
  open.insert(entry(3, 2, 3, 0.0, 50.0));
  open.insert(entry(4, 2, 4, 0.0, 40.0));
  info.children = BranchChildren{3, 4, true, false};
  sel.on_children(info, dir);
  CHECK(sel.select(open) == 3); // plunge length 2 after this

  open.erase(3);
  open.insert(entry(5, 3, 5, 0.0, 60.0));
  open.insert(entry(6, 3, 6, 0.0, 70.0));
  info.children = BranchChildren{5, 6, true, false};
  sel.on_children(info, dir);
  CHECK(sel.select(open) == 2); // cap hit: global min estimate wins
  CHECK(sel.plunge_aborts() == 1);
}

TEST_CASE("max score selection breaks ties toward lower id") {
  OpenNodeSet open;
  open.insert(entry(3, 1, 1, 0, 0, 0.8));
  open.insert(entry(7, 1, 2, 0, 0, 0.6));
  CHECK(select_max_score(open) == 3);
  open.insert(entry(9, 1, 3, 0, 0, 0.8));
  CHECK(select_max_score(open) == 3); // tie with id 9 -> lower id
}

TEST_CASE("restart dfs with huge interval reproduces the dfs node sequence") {
  std::mt19937 rng(17);
  const auto model = knapsack_like(rng, 10);

  EngineOptions opts;
  BranchAndBound a(model, opts), b(model, opts);
  DfsSelector dfs;
  RestartDfsSelector rd(1L << 60);
  const auto ra = a.solve(dfs);
  const auto rb = b.solve(rd);
  REQUIRE(ra.status == SolveStatus::Optimal);
  REQUIRE(rb.status == SolveStatus::Optimal);
  CHECK(ra.best_objective == rb.best_objective);
  REQUIRE(ra.event_log.size() == rb.event_log.size());
  for (size_t i = 0; i < ra.event_log.size(); ++i) {
    CHECK(ra.event_log[i].id == rb.event_log[i].id);
    CHECK(ra.event_log[i].action == rb.event_log[i].action);
  }
}

TEST_CASE("all baselines find the same optimum") {
  std::mt19937 rng(23);
  for (int k = 0; k < 5; ++k) {
    const auto model = knapsack_like(rng, 12);
    double reference = 0.0;
    bool first = true;
    for (const auto* name : {"dfs", "bfs", "restartdfs", "bestestimate"}) {
      auto sel = make_selector(name);
      BranchAndBound bb(model);
      const auto r = bb.solve(*sel);
      REQUIRE(r.status == SolveStatus::Optimal);
      if (first) {
        reference = r.best_objective;
        first = false;
      } else {
        CHECK(r.best_objective == doctest::Approx(reference).epsilon(1e-9));
      }
    }
  }
}
