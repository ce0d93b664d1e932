// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>

#include "mipbb/instances.hpp"
#include "mipbb/selectors.hpp"

using namespace mipbb;

TEST_CASE("set cover structure and dimensions") {
  const auto spec = make_spec(ProblemClass::SetCover, Scale::Desk, 1);
  const auto m = generate(spec);
  CHECK(m.num_vars() == 500);
  CHECK(m.lp.num_rows() == 250);
  CHECK(m.lp.sense == Sense::Minimize);
  for (const auto& row : m.lp.rows) {
    CHECK(row.rel == Relation::GreaterEqual);
    CHECK(row.rhs == 1.0);
    int nz = 0;
    for (double a : row.coefs) {
      CHECK((a == 0.0 || a == 1.0));
      if (a != 0.0) ++nz;
    }
    CHECK(nz >= 2);
  }
  for (double c : m.lp.objective) {
    CHECK(c >= 1.0);
    CHECK(c <= 100.0);
  }
}

TEST_CASE("paper-scale dimensions match the experiment sizes") {
  const auto sc = make_spec(ProblemClass::SetCover, Scale::Paper, 3);
  CHECK(sc.params.sc_cols == 2000);
  CHECK(sc.params.sc_rows == 1000);
  const auto hard = make_spec(ProblemClass::SetCover, Scale::Hard, 3);
  CHECK(hard.params.sc_cols == 4000);
  CHECK(hard.params.sc_rows == 2000);
  const auto fl = make_spec(ProblemClass::Facility, Scale::Paper, 3);
  const auto flm = generate(fl);
  int binaries = 0, continuous = 0;
  for (auto t : flm.integrality) (t == VarType::Binary ? binaries : continuous)++;
  CHECK(binaries == 150);
  CHECK(continuous == 22500);
  CHECK(flm.lp.num_rows() == 300);
  const auto is = make_spec(ProblemClass::IndSet, Scale::Paper, 3);
  CHECK(is.params.is_nodes == 1000);
  const auto ca = make_spec(ProblemClass::CAuctions, Scale::Paper, 3);
  CHECK(ca.params.ca_bids == 1200);
}

TEST_CASE("independent set rows are edge pairs") {
  const auto m = generate(make_spec(ProblemClass::IndSet, Scale::Desk, 5));
  CHECK(m.lp.sense == Sense::Maximize);
  CHECK(m.num_vars() == 250);
  for (const auto& row : m.lp.rows) {
    CHECK(row.rel == Relation::LessEqual);
    CHECK(row.rhs == 1.0);
    int nz = 0;
    for (double a : row.coefs) {
      CHECK((a == 0.0 || a == 1.0));
      if (a != 0.0) ++nz;
    }
    CHECK(nz == 2);
  }
}

TEST_CASE("facility has one binary block and feasible capacity") {
  const auto m = generate(make_spec(ProblemClass::Facility, Scale::Desk, 5));
  int binaries = 0;
  for (int j = 0; j < m.num_vars(); ++j) {
    if (m.integrality[j] == VarType::Binary) {
      ++binaries;
      CHECK(j < 35); // binary block is the prefix
    }
  }
  CHECK(binaries == 35);
  CHECK(m.lp.num_rows() == 70);
}

TEST_CASE("combinatorial auction rows are packing rows") {
  const auto m = generate(make_spec(ProblemClass::CAuctions, Scale::Desk, 5));
  CHECK(m.lp.sense == Sense::Maximize);
  CHECK(m.num_vars() == 300);
  CHECK(m.lp.num_rows() >= 10);
  for (const auto& row : m.lp.rows) {
    CHECK(row.rel == Relation::LessEqual);
    CHECK(row.rhs == 1.0);
  }
}

TEST_CASE("determinism: same seed gives byte-identical serialization") {
  for (auto cls : {ProblemClass::SetCover, ProblemClass::IndSet, ProblemClass::Facility,
                   ProblemClass::CAuctions}) {
    const auto a = instance_to_json(generate(make_spec(cls, Scale::Desk, 7)));
    const auto b = instance_to_json(generate(make_spec(cls, Scale::Desk, 7)));
    CHECK(a == b);
    const auto c = instance_to_json(generate(make_spec(cls, Scale::Desk, 8)));
    CHECK(a != c);
  }
}

TEST_CASE("instance round trip is exact") {
  const auto m = generate(make_spec(ProblemClass::SetCover, Scale::Desk, 11));
  const auto text = instance_to_json(m);
  const auto back = instance_from_json(text);
  CHECK(instance_to_json(back) == text);
  CHECK(back.lp.objective == m.lp.objective);
  CHECK(back.lp.var_bounds == m.lp.var_bounds);
}

TEST_CASE("truncated instance file reports a parse error") {
  const auto m = toy_model();
  auto text = instance_to_json(m);
  text.resize(text.size() / 2);
  CHECK_THROWS_AS((void)instance_from_json(text), std::invalid_argument);
}

TEST_CASE("toy model loads, round-trips and solves to its optimum") {
  const auto m = toy_model();
  const auto back = instance_from_json(instance_to_json(m));
  CHECK(back.lp.objective == m.lp.objective);

  BranchAndBound bb(m);
  DfsSelector dfs;
  const auto r = bb.solve(dfs);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.best_objective == doctest::Approx(-4.4).epsilon(1e-9));
  REQUIRE(r.incumbent.has_value());
  CHECK((*r.incumbent)[0] == doctest::Approx(2.0));
  CHECK((*r.incumbent)[1] == doctest::Approx(3.0));
}

TEST_CASE("toy model reproduces the walkthrough branching pattern") {
  const auto m = toy_model();
  const auto root = solve_lp(m.lp);
  REQUIRE(root.status == LpStatus::Optimal);
  CHECK(root.values[0] == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(root.values[1] == doctest::Approx(3.0).epsilon(1e-9));

  // left child x1 <= 2 branches x2 at 3.5
  const auto left = solve_lp_with_overrides(m.lp, {{0, {0.0, 2.0}}});
  REQUIRE(left.status == LpStatus::Optimal);
  CHECK(left.values[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(left.values[1] == doctest::Approx(3.5).epsilon(1e-9));

  // right child x1 >= 3 is an infeasible leaf
  const auto right = solve_lp_with_overrides(m.lp, {{0, {3.0, 10.0}}});
  CHECK(right.status == LpStatus::Infeasible);

  // x1 <= 2 and x2 >= 4 branches x1 at 0.7
  const auto deep = solve_lp_with_overrides(m.lp, {{0, {0.0, 2.0}}, {1, {4.0, 10.0}}});
  REQUIRE(deep.status == LpStatus::Optimal);
  CHECK(deep.values[0] == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(deep.values[1] == doctest::Approx(4.0).epsilon(1e-9));
}
