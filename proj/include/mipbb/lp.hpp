// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mipbb {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Sense { Minimize, Maximize };

struct LpRow {
  std::vector<double> coefs; // dense, one per variable
  Relation rel = Relation::LessEqual;
  double rhs = 0.0;
};

struct LpProblem {
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<std::pair<double, double>> var_bounds; // (lower, upper), +-inf allowed
  Sense sense = Sense::Minimize;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  // Throws std::invalid_argument when a structural invariant is broken.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

enum class BasisStatus { Lower, Basic, Upper, Zero };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  std::vector<double> reduced_costs;       // in the problem's original sense
  std::vector<BasisStatus> basis_status;   // per structural variable
  long iterations = 0;                     // simplex pivots spent
};

struct SimplexOptions {
  long max_pivots = 50000;
  double feas_tol = 1e-7;
  double pivot_tol = 1e-10;
  long bland_after_degenerate = 1000;
};

class SimplexError : public std::runtime_error {
 public:
  enum class Kind { IterationLimit, NumericalInstability };
  SimplexError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class InvalidNodeError : public std::runtime_error {
 public:
  explicit InvalidNodeError(const std::string& what) : std::runtime_error(what) {}
};

using BoundMap = std::map<int, std::pair<double, double>>;

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& opts = {});

/// Solves the problem with per-variable (lower, upper) overrides applied on
/// top of the base bounds. Overrides with lower > upper raise InvalidNodeError.
LpSolution solve_lp_with_overrides(const LpProblem& problem, const BoundMap& overrides,
                                   const SimplexOptions& opts = {});

/// Reusable workspace so a branch-and-bound run does not reallocate the
/// tableau for every node relaxation. Not thread-safe; one per solve.
class SimplexWorkspace {
 public:
  LpSolution solve(const LpProblem& problem, const std::vector<std::pair<double, double>>& bounds,
                   const SimplexOptions& opts);

 private:
  std::vector<double> tab_;
  std::vector<double> cost_;
  std::vector<double> dual_;
  std::vector<double> xval_;
  std::vector<double> lb_, ub_;
  std::vector<int> basis_;
  std::vector<int> state_;
};

} // namespace mipbb
