// SPDX-License-Identifier: Apache-2.0
#include "mipbb/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace mipbb {

void LpProblem::validate() const {
  const int n = num_vars();
  if (static_cast<int>(var_bounds.size()) != n)
    throw std::invalid_argument("LpProblem: bounds size mismatch");
  for (const auto& r : rows) {
    if (static_cast<int>(r.coefs.size()) != n)
      throw std::invalid_argument("LpProblem: row width mismatch");
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("LpProblem: non-finite rhs");
  }
  for (const auto& [lo, hi] : var_bounds) {
    if (lo > hi) throw std::invalid_argument("LpProblem: lower bound above upper");
  }
}

namespace {

enum VState : int { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFree = 3 };

constexpr double kDropTol = 1e-13; // treat tableau entries below this as zero

} // namespace

LpSolution SimplexWorkspace::solve(const LpProblem& p,
                                   const std::vector<std::pair<double, double>>& vb,
                                   const SimplexOptions& opts) {
  const int m = p.num_rows();
  const int ns = p.num_vars();
  const bool maximize = p.sense == Sense::Maximize;
  const double ftol = opts.feas_tol;
  const double ptol = opts.pivot_tol;

  // Internal minimization costs.
  std::vector<double> cmin(ns);
  for (int j = 0; j < ns; ++j) cmin[j] = maximize ? -p.objective[j] : p.objective[j];

  // Column layout: structurals, one slack per row, artificials appended for
  // rows whose initial residual does not fit the slack bounds.
  const int slack0 = ns;
  lb_.assign(ns + m, 0.0);
  ub_.assign(ns + m, 0.0);
  for (int j = 0; j < ns; ++j) {
    lb_[j] = vb[j].first;
    ub_[j] = vb[j].second;
  }
  for (int i = 0; i < m; ++i) {
    switch (p.rows[i].rel) {
      case Relation::LessEqual:
        lb_[slack0 + i] = 0.0;
        ub_[slack0 + i] = kInf;
        break;
      case Relation::GreaterEqual:
        lb_[slack0 + i] = -kInf;
        ub_[slack0 + i] = 0.0;
        break;
      case Relation::Equal:
        lb_[slack0 + i] = 0.0;
        ub_[slack0 + i] = 0.0;
        break;
    }
  }

  state_.assign(ns + m, kAtLower);
  xval_.assign(ns + m, 0.0);
  for (int j = 0; j < ns; ++j) {
    const bool lf = std::isfinite(lb_[j]);
    const bool uf = std::isfinite(ub_[j]);
    if (lf && uf) {
      if (cmin[j] >= 0.0) {
        state_[j] = kAtLower;
        xval_[j] = lb_[j];
      } else {
        state_[j] = kAtUpper;
        xval_[j] = ub_[j];
      }
    } else if (lf) {
      state_[j] = kAtLower;
      xval_[j] = lb_[j];
    } else if (uf) {
      state_[j] = kAtUpper;
      xval_[j] = ub_[j];
    } else {
      state_[j] = kFree;
      xval_[j] = 0.0;
    }
  }

  // Residuals with all structurals at their initial values; decide per row
  // whether the slack can be basic or an artificial is needed.
  std::vector<double> resid(m);
  for (int i = 0; i < m; ++i) {
    double acc = p.rows[i].rhs;
    const auto& coefs = p.rows[i].coefs;
    for (int j = 0; j < ns; ++j)
      if (coefs[j] != 0.0 && xval_[j] != 0.0) acc -= coefs[j] * xval_[j];
    resid[i] = acc;
  }

  std::vector<int> art_row;    // row of each artificial column
  std::vector<int> art_sign;   // +1 or -1 coefficient
  std::vector<int> row_art(m, -1);
  std::vector<double> slack_init(m, 0.0);
  std::vector<bool> slack_basic(m, false);
  for (int i = 0; i < m; ++i) {
    const double slo = lb_[slack0 + i], sup = ub_[slack0 + i];
    if (resid[i] >= slo - ftol && resid[i] <= sup + ftol) {
      slack_basic[i] = true;
      slack_init[i] = std::clamp(resid[i], slo, sup);
    } else {
      const double v = std::clamp(resid[i], slo, sup); // nearest finite bound
      slack_init[i] = v;
      const double rho = resid[i] - v;
      row_art[i] = static_cast<int>(art_row.size());
      art_row.push_back(i);
      art_sign.push_back(rho >= 0.0 ? 1 : -1);
    }
  }
  const int na = static_cast<int>(art_row.size());
  const int art0 = ns + m;
  const int W = ns + m + na;
  const int stride = W + 1; // rhs appended to each row

  lb_.resize(W);
  ub_.resize(W);
  state_.resize(W);
  xval_.resize(W);
  for (int a = 0; a < na; ++a) {
    lb_[art0 + a] = 0.0;
    ub_[art0 + a] = kInf;
  }

  tab_.assign(static_cast<size_t>(m) * stride, 0.0);
  basis_.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    double* row = &tab_[static_cast<size_t>(i) * stride];
    const auto& coefs = p.rows[i].coefs;
    for (int j = 0; j < ns; ++j) row[j] = coefs[j];
    row[slack0 + i] = 1.0;
    row[W] = p.rows[i].rhs;
    if (row_art[i] >= 0) {
      const int a = row_art[i];
      row[art0 + a] = static_cast<double>(art_sign[a]);
      if (art_sign[a] < 0) { // scale so the basic column is +1
        for (int k = 0; k <= W; ++k) row[k] = -row[k];
      }
      basis_[i] = art0 + a;
      state_[art0 + a] = kBasic;
      xval_[art0 + a] = std::fabs(resid[i] - slack_init[i]);
      state_[slack0 + i] = slack_init[i] <= lb_[slack0 + i] ? kAtLower : kAtUpper;
      if (!std::isfinite(lb_[slack0 + i]) && slack_init[i] == 0.0 &&
          !std::isfinite(ub_[slack0 + i]))
        state_[slack0 + i] = kFree;
      xval_[slack0 + i] = slack_init[i];
    } else {
      basis_[i] = slack0 + i;
      state_[slack0 + i] = kBasic;
      xval_[slack0 + i] = slack_init[i];
    }
  }

  cost_.assign(W, 0.0);
  dual_.assign(W, 0.0);

  long pivots = 0;
  long degenerate_pivots = 0;
  bool bland = false;

  auto rebuild_duals = [&]() {
    for (int j = 0; j < W; ++j) dual_[j] = cost_[j];
    for (int i = 0; i < m; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &tab_[static_cast<size_t>(i) * stride];
      for (int j = 0; j < W; ++j) dual_[j] -= cb * row[j];
    }
    for (int i = 0; i < m; ++i) dual_[basis_[i]] = 0.0;
  };

  auto refresh_basics = [&]() {
    for (int i = 0; i < m; ++i) {
      const double* row = &tab_[static_cast<size_t>(i) * stride];
      double v = row[W];
      for (int j = 0; j < W; ++j) {
        if (state_[j] != kBasic && xval_[j] != 0.0 && row[j] != 0.0) v -= row[j] * xval_[j];
      }
      xval_[basis_[i]] = v;
    }
  };

  auto do_pivot = [&](int r, int q) {
    double* rr = &tab_[static_cast<size_t>(r) * stride];
    const double piv = rr[q];
    const double inv = 1.0 / piv;
    for (int k = 0; k <= W; ++k) rr[k] *= inv;
    rr[q] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      double* ri = &tab_[static_cast<size_t>(i) * stride];
      const double f = ri[q];
      if (std::fabs(f) <= kDropTol) {
        ri[q] = 0.0;
        continue;
      }
      for (int k = 0; k <= W; ++k) ri[k] -= f * rr[k];
      ri[q] = 0.0;
    }
    const double fd = dual_[q];
    if (std::fabs(fd) > kDropTol) {
      for (int k = 0; k < W; ++k) dual_[k] -= fd * rr[k];
    }
    dual_[q] = 0.0;
  };

  // Entering candidate: most attractive reduced cost (Dantzig), or the
  // lowest-index eligible column once Bland's rule is active.
  std::vector<char> banned(W, 0);
  auto select_entering = [&](int& q_out, int& sigma_out) -> bool {
    int q = -1, sigma = 0;
    double best = 0.0;
    for (int j = 0; j < W; ++j) {
      if (state_[j] == kBasic || banned[j]) continue;
      if (ub_[j] - lb_[j] < 1e-14) continue; // fixed, cannot move
      const double d = dual_[j];
      double score = 0.0;
      int s = 0;
      if ((state_[j] == kAtLower || state_[j] == kFree) && d < -ftol) {
        score = -d;
        s = 1;
      } else if ((state_[j] == kAtUpper || state_[j] == kFree) && d > ftol) {
        score = d;
        s = -1;
      } else {
        continue;
      }
      if (bland) {
        q_out = j;
        sigma_out = s;
        return true;
      }
      if (score > best) {
        best = score;
        q = j;
        sigma = s;
      }
    }
    if (q < 0) return false;
    q_out = q;
    sigma_out = sigma;
    return true;
  };

  enum class Phase1Result { Done, IterationLimit };
  enum class RunResult { Optimal, Unbounded };

  auto iterate = [&]() -> RunResult {
    int stalls = 0;
    std::fill(banned.begin(), banned.end(), 0);
    bool duals_fresh = true;
    rebuild_duals();
    long since_rebuild = 0;
    for (;;) {
      int q = -1, sigma = 0;
      if (!select_entering(q, sigma)) {
        if (duals_fresh) return RunResult::Optimal;
        rebuild_duals();
        duals_fresh = true;
        std::fill(banned.begin(), banned.end(), 0);
        continue;
      }
      if (pivots >= opts.max_pivots)
        throw SimplexError(SimplexError::Kind::IterationLimit, "simplex pivot limit reached");

      // Ratio test; sigma is the direction the entering variable moves.
      double t = kInf;
      const bool can_flip = std::isfinite(lb_[q]) && std::isfinite(ub_[q]);
      const double t_flip = can_flip ? ub_[q] - lb_[q] : kInf;
      int leave_row = -1;
      double leave_piv = 0.0;
      bool tiny_blockers = false;
      for (int i = 0; i < m; ++i) {
        const double a = tab_[static_cast<size_t>(i) * stride + q];
        if (std::fabs(a) <= ptol) {
          if (std::fabs(a) > kDropTol) tiny_blockers = true;
          continue;
        }
        const int B = basis_[i];
        const double delta = -sigma * a; // change in x_B per unit step
        double ti;
        if (delta > 0.0) {
          if (!std::isfinite(ub_[B])) continue;
          ti = (ub_[B] - xval_[B]) / delta;
        } else {
          if (!std::isfinite(lb_[B])) continue;
          ti = (lb_[B] - xval_[B]) / delta;
        }
        if (ti < 0.0) ti = 0.0;
        bool better;
        if (leave_row < 0) {
          better = true;
        } else if (bland) {
          better = ti < t - 1e-12 ||
                   (ti < t + 1e-12 && basis_[i] < basis_[leave_row]);
        } else {
          better = ti < t - 1e-9 ||
                   (ti < t + 1e-9 && std::fabs(a) > std::fabs(leave_piv));
        }
        if (better) {
          t = std::min(t, ti);
          leave_row = i;
          leave_piv = a;
        }
      }

      if (leave_row < 0 && !std::isfinite(t_flip)) {
        if (tiny_blockers) {
          banned[q] = 1;
          if (++stalls > 64)
            throw SimplexError(SimplexError::Kind::NumericalInstability,
                               "simplex stalled on tiny pivots");
          continue;
        }
        return RunResult::Unbounded;
      }

      ++pivots;
      duals_fresh = false;
      if (++since_rebuild >= 512) {
        refresh_basics();
        rebuild_duals();
        duals_fresh = true;
        since_rebuild = 0;
      }

      if (t_flip <= (leave_row < 0 ? kInf : t)) {
        // Bound flip: entering variable jumps to its opposite bound.
        const double step = sigma * t_flip;
        for (int i = 0; i < m; ++i) {
          const double a = tab_[static_cast<size_t>(i) * stride + q];
          if (a != 0.0) xval_[basis_[i]] -= step * a;
        }
        state_[q] = state_[q] == kAtLower ? kAtUpper : kAtLower;
        xval_[q] = state_[q] == kAtLower ? lb_[q] : ub_[q];
        stalls = 0;
        std::fill(banned.begin(), banned.end(), 0);
        continue;
      }

      if (std::fabs(leave_piv) <= ptol) {
        banned[q] = 1;
        if (++stalls > 64)
          throw SimplexError(SimplexError::Kind::NumericalInstability,
                             "simplex stalled on tiny pivots");
        continue;
      }

      if (t < 1e-9) {
        if (++degenerate_pivots > opts.bland_after_degenerate) bland = true;
      }

      const double step = sigma * t;
      for (int i = 0; i < m; ++i) {
        const double a = tab_[static_cast<size_t>(i) * stride + q];
        if (a != 0.0) xval_[basis_[i]] -= step * a;
      }
      const int leaving = basis_[leave_row];
      const double delta_l = -sigma * leave_piv;
      state_[leaving] = delta_l > 0.0 ? kAtUpper : kAtLower;
      xval_[leaving] = delta_l > 0.0 ? ub_[leaving] : lb_[leaving];
      xval_[q] += step;
      state_[q] = kBasic;
      basis_[leave_row] = q;
      do_pivot(leave_row, q);
      stalls = 0;
      std::fill(banned.begin(), banned.end(), 0);
    }
  };

  // Phase 1: minimize the sum of artificials.
  if (na > 0) {
    for (int a = 0; a < na; ++a) cost_[art0 + a] = 1.0;
    const RunResult r = iterate();
    (void)r; // phase-1 objective is bounded below by 0
    refresh_basics();
    double infeas = 0.0;
    for (int a = 0; a < na; ++a) infeas += xval_[art0 + a];
    if (infeas > ftol) {
      LpSolution sol;
      sol.status = LpStatus::Infeasible;
      sol.iterations = pivots;
      return sol;
    }
    // Drive remaining basic artificials out, then pin all of them at zero.
    for (int i = 0; i < m; ++i) {
      if (basis_[i] < art0) continue;
      const double* row = &tab_[static_cast<size_t>(i) * stride];
      int q = -1;
      double best = ptol;
      for (int j = 0; j < art0; ++j) {
        if (state_[j] == kBasic) continue;
        if (std::fabs(row[j]) > best) {
          best = std::fabs(row[j]);
          q = j;
        }
      }
      if (q >= 0) {
        const int art = basis_[i];
        state_[art] = kAtLower;
        xval_[art] = 0.0;
        state_[q] = kBasic;
        basis_[i] = q;
        do_pivot(i, q);
        ++pivots;
        refresh_basics();
      }
    }
    for (int a = 0; a < na; ++a) {
      lb_[art0 + a] = 0.0;
      ub_[art0 + a] = 0.0;
      cost_[art0 + a] = 0.0;
      if (state_[art0 + a] != kBasic) xval_[art0 + a] = 0.0;
    }
  }

  // Phase 2 with the real objective.
  for (int j = 0; j < ns; ++j) cost_[j] = cmin[j];
  for (int j = ns; j < W; ++j) cost_[j] = 0.0;
  refresh_basics();
  const RunResult r2 = iterate();
  refresh_basics();

  LpSolution sol;
  sol.iterations = pivots;
  if (r2 == RunResult::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  sol.status = LpStatus::Optimal;
  sol.values.resize(ns);
  for (int j = 0; j < ns; ++j) {
    double v = xval_[j];
    if (std::isfinite(lb_[j]) && v < lb_[j] && v > lb_[j] - 1e-6) v = lb_[j];
    if (std::isfinite(ub_[j]) && v > ub_[j] && v < ub_[j] + 1e-6) v = ub_[j];
    sol.values[j] = v;
  }
  double obj = 0.0;
  for (int j = 0; j < ns; ++j) obj += p.objective[j] * sol.values[j];
  sol.objective_value = obj;

  rebuild_duals();
  sol.reduced_costs.resize(ns);
  sol.basis_status.resize(ns);
  for (int j = 0; j < ns; ++j) {
    if (state_[j] == kBasic) {
      sol.reduced_costs[j] = 0.0;
      sol.basis_status[j] = BasisStatus::Basic;
    } else {
      sol.reduced_costs[j] = maximize ? -dual_[j] : dual_[j];
      switch (state_[j]) {
        case kAtLower: sol.basis_status[j] = BasisStatus::Lower; break;
        case kAtUpper: sol.basis_status[j] = BasisStatus::Upper; break;
        default: sol.basis_status[j] = BasisStatus::Zero; break;
      }
    }
  }
  return sol;
}

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& opts) {
  problem.validate();
  SimplexWorkspace ws;
  return ws.solve(problem, problem.var_bounds, opts);
}

LpSolution solve_lp_with_overrides(const LpProblem& problem, const BoundMap& overrides,
                                   const SimplexOptions& opts) {
  problem.validate();
  auto bounds = problem.var_bounds;
  for (const auto& [var, bd] : overrides) {
    if (var < 0 || var >= problem.num_vars())
      throw InvalidNodeError("bound override for unknown variable");
    if (bd.first > bd.second) throw InvalidNodeError("bound override with lower > upper");
    auto& [lo, hi] = bounds[var];
    lo = std::max(lo, bd.first);
    hi = std::min(hi, bd.second);
    if (lo > hi) throw InvalidNodeError("bound override contradicts base bounds");
  }
  SimplexWorkspace ws;
  return ws.solve(problem, bounds, opts);
}

} // namespace mipbb
