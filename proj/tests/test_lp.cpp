// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "mipbb/lp.hpp"

using namespace mipbb;

namespace {

// Vertex-enumeration oracle: intersect every n-subset of {rows as equalities,
// bounds as equalities}, keep feasible points, take the best objective.
// Valid for fully boxed problems, where a feasible LP has a vertex optimum.
std::optional<double> vertex_enum_optimum(const LpProblem& p) {
  const int n = p.num_vars();
  struct Eq {
    std::vector<double> a;
    double b;
  };
  std::vector<Eq> pool;
  for (const auto& row : p.rows) pool.push_back({row.coefs, row.rhs});
  for (int j = 0; j < n; ++j) {
    std::vector<double> unit(n, 0.0);
    unit[j] = 1.0;
    pool.push_back({unit, p.var_bounds[j].first});
    pool.push_back({unit, p.var_bounds[j].second});
  }

  std::optional<double> best;
  std::vector<int> idx(n);
  const int pool_n = static_cast<int>(pool.size());

  auto feasible = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j) {
      if (x[j] < p.var_bounds[j].first - 1e-7 || x[j] > p.var_bounds[j].second + 1e-7)
        return false;
    }
    for (const auto& row : p.rows) {
      double act = 0.0;
      for (int j = 0; j < n; ++j) act += row.coefs[j] * x[j];
      switch (row.rel) {
        case Relation::LessEqual:
          if (act > row.rhs + 1e-7) return false;
          break;
        case Relation::GreaterEqual:
          if (act < row.rhs - 1e-7) return false;
          break;
        case Relation::Equal:
          if (std::fabs(act - row.rhs) > 1e-7) return false;
          break;
      }
    }
    return true;
  };

  auto try_subset = [&]() {
    // Solve the n x n system with partial pivoting.
    std::vector<std::vector<double>> m(n, std::vector<double>(n + 1));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m[i][j] = pool[idx[i]].a[j];
      m[i][n] = pool[idx[i]].b;
    }
    for (int c = 0; c < n; ++c) {
      int piv = c;
      for (int r = c + 1; r < n; ++r)
        if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
      if (std::fabs(m[piv][c]) < 1e-9) return; // singular subset
      std::swap(m[c], m[piv]);
      for (int r = 0; r < n; ++r) {
        if (r == c) continue;
        const double f = m[r][c] / m[c][c];
        if (f == 0.0) continue;
        for (int k = c; k <= n; ++k) m[r][k] -= f * m[c][k];
      }
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
    if (!feasible(x)) return;
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += p.objective[j] * x[j];
    if (p.sense == Sense::Maximize) obj = -obj;
    if (!best || obj < *best) best = obj;
  };

  // iterate over all n-subsets of the pool
  std::vector<int> comb(n);
  for (int i = 0; i < n; ++i) comb[i] = i;
  for (;;) {
    idx = comb;
    try_subset();
    int i = n - 1;
    while (i >= 0 && comb[i] == pool_n - n + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int k = i + 1; k < n; ++k) comb[k] = comb[k - 1] + 1;
  }
  if (best && p.sense == Sense::Maximize) best = -*best;
  return best;
}

LpProblem random_boxed_lp(std::mt19937& rng, int n, int m) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> rhs(-8, 8);
  std::uniform_int_distribution<int> rel3(0, 2);
  LpProblem p;
  p.objective.resize(n);
  for (auto& c : p.objective) c = coef(rng);
  p.var_bounds.assign(n, {0.0, 4.0});
  for (int i = 0; i < m; ++i) {
    LpRow row;
    row.coefs.resize(n);
    bool nonzero = false;
    for (auto& a : row.coefs) {
      a = coef(rng);
      nonzero |= a != 0;
    }
    if (!nonzero) row.coefs[0] = 1.0;
    const int r = rel3(rng);
    row.rel = r == 0 ? Relation::LessEqual : (r == 1 ? Relation::GreaterEqual : Relation::Equal);
    row.rhs = rhs(rng);
    p.rows.push_back(std::move(row));
  }
  return p;
}

} // namespace

TEST_CASE("single variable bound case") {
  LpProblem p;
  p.objective = {1.0};
  p.var_bounds = {{0.0, 10.0}};
  p.rows.push_back({{1.0}, Relation::GreaterEqual, 3.0});
  const auto sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.values[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(sol.objective_value == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("contradictory rows are infeasible") {
  LpProblem p;
  p.objective = {0.0};
  p.var_bounds = {{-kInf, kInf}};
  p.rows.push_back({{1.0}, Relation::GreaterEqual, 1.0});
  p.rows.push_back({{1.0}, Relation::LessEqual, 0.0});
  const auto sol = solve_lp(p);
  CHECK(sol.status == LpStatus::Infeasible);
}

TEST_CASE("unbounded detection") {
  LpProblem p;
  p.objective = {-1.0};
  p.var_bounds = {{0.0, kInf}};
  p.rows.push_back({{-1.0}, Relation::LessEqual, 0.0});
  const auto sol = solve_lp(p);
  CHECK(sol.status == LpStatus::Unbounded);
}

TEST_CASE("maximization sense") {
  LpProblem p;
  p.sense = Sense::Maximize;
  p.objective = {1.0, 1.0};
  p.var_bounds = {{0.0, 5.0}, {0.0, 5.0}};
  p.rows.push_back({{1.0, 2.0}, Relation::LessEqual, 8.0});
  const auto sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(6.5).epsilon(1e-9)); // x=(5, 1.5)
}

TEST_CASE("reduced costs and basis statuses at optimum") {
  LpProblem p;
  p.objective = {2.0, 3.0};
  p.var_bounds = {{0.0, 10.0}, {0.0, 10.0}};
  p.rows.push_back({{1.0, 1.0}, Relation::GreaterEqual, 4.0});
  const auto sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(8.0).epsilon(1e-9)); // all on x1
  for (int j = 0; j < 2; ++j) {
    if (sol.basis_status[j] == BasisStatus::Basic)
      CHECK(sol.reduced_costs[j] == doctest::Approx(0.0));
  }
  // Minimization optimality: nonbasic-at-lower variables have rc >= -tol.
  for (int j = 0; j < 2; ++j) {
    if (sol.basis_status[j] == BasisStatus::Lower) CHECK(sol.reduced_costs[j] >= -1e-7);
  }
}

TEST_CASE("free variable gets zero basis status when unused") {
  LpProblem p;
  p.objective = {1.0, 0.0};
  p.var_bounds = {{0.0, 1.0}, {-kInf, kInf}};
  p.rows.push_back({{1.0, 0.0}, Relation::GreaterEqual, 0.5});
  const auto sol = solve_lp(p);
  REQUIRE(sol.status == LpStatus::Optimal);
  if (sol.basis_status[1] != BasisStatus::Basic) {
    CHECK(sol.basis_status[1] == BasisStatus::Zero);
    CHECK(sol.values[1] == doctest::Approx(0.0));
  }
}

TEST_CASE("bound overrides") {
  LpProblem p;
  p.objective = {-1.0, -1.0};
  p.var_bounds = {{0.0, 1.0}, {0.0, 1.0}};
  p.rows.push_back({{1.0, 1.0}, Relation::LessEqual, 1.5});

  SUBCASE("fixing a binary to 0 equals the restricted problem") {
    const auto sol = solve_lp_with_overrides(p, {{0, {0.0, 0.0}}});
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.values[0] == doctest::Approx(0.0));
    CHECK(sol.objective_value == doctest::Approx(-1.0).epsilon(1e-9));
  }
  SUBCASE("empty override map is the identity") {
    const auto a = solve_lp(p);
    const auto b = solve_lp_with_overrides(p, {});
    CHECK(a.objective_value == b.objective_value);
    CHECK(a.status == b.status);
  }
  SUBCASE("contradictory override raises invalid-node") {
    CHECK_THROWS_AS((void)solve_lp_with_overrides(p, {{0, {2.0, 1.0}}}), InvalidNodeError);
  }
}

TEST_CASE("determinism: repeated solves bit-identical") {
  std::mt19937 rng(99);
  for (int k = 0; k < 10; ++k) {
    const auto p = random_boxed_lp(rng, 5, 4);
    const auto a = solve_lp(p);
    const auto b = solve_lp(p);
    CHECK(a.status == b.status);
    if (a.status == LpStatus::Optimal) {
      CHECK(a.objective_value == b.objective_value); // bit identical
      CHECK(a.values == b.values);
    }
  }
}

TEST_CASE("random boxed LPs match vertex enumeration") {
  std::mt19937 rng(2024);
  int solved = 0, infeasible = 0;
  for (int k = 0; k < 60; ++k) {
    const auto p = random_boxed_lp(rng, 5, 4);
    const auto oracle = vertex_enum_optimum(p);
    const auto sol = solve_lp(p);
    if (oracle) {
      ++solved;
      REQUIRE(sol.status == LpStatus::Optimal);
      CHECK(sol.objective_value == doctest::Approx(*oracle).epsilon(1e-6));
      // primal feasibility of the reported point
      for (int j = 0; j < p.num_vars(); ++j) {
        CHECK(sol.values[j] >= p.var_bounds[j].first - 1e-7);
        CHECK(sol.values[j] <= p.var_bounds[j].second + 1e-7);
      }
    } else {
      ++infeasible;
      CHECK(sol.status == LpStatus::Infeasible);
    }
  }
  CHECK(solved > 10); // the seed must exercise both outcomes
  CHECK(infeasible > 0);
}
