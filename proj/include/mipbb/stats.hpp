// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace mipbb {

/// Shifted geometric mean: exp(mean(ln(v_i + shift))) - shift.
/// The standard MIP benchmark average; values must be nonnegative.
double shifted_geo_mean(std::span<const double> values, double shift = 1.0);

/// Harmonic mean of two positive values: 2ab/(a+b).
/// Throws std::invalid_argument on nonpositive input; callers that compare
/// policies select a zero-gap policy outright instead of calling this.
double harmonic_mean2(double a, double b);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;          // two-sided
  bool degenerate = false; // zero-variance differences
  std::string stars;       // "***", "**", "*", "." or ""
};

/// Paired two-sided t-test on equal-length samples paired by index.
/// Zero-variance differences: p=1 if the mean difference is 0, else p->0
/// with the degenerate flag set.
TTestResult paired_t_test(std::span<const double> x, std::span<const double> y);

/// Significance stars for a p-value: *** <0.001, ** <0.01, * <0.05, . <0.1.
std::string significance_stars(double p);

/// Regularized incomplete beta function I_x(a, b) via continued fraction.
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value for a t statistic with `dof` degrees of freedom.
double t_test_p_value(double t, int dof);

} // namespace mipbb
