// SPDX-License-Identifier: Apache-2.0
#include "mipbb/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mipbb {

double shifted_geo_mean(std::span<const double> values, double shift) {
  if (values.empty()) throw std::invalid_argument("shifted_geo_mean: empty input");
  double acc = 0.0;
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("shifted_geo_mean: negative value");
    acc += std::log(v + shift);
  }
  return std::exp(acc / static_cast<double>(values.size())) - shift;
}

double harmonic_mean2(double a, double b) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("harmonic_mean2: nonpositive input");
  return 2.0 * a * b / (a + b);
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  if (p < 0.1) return ".";
  return "";
}

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-14;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double t_test_p_value(double t, int dof) {
  if (dof < 1) throw std::invalid_argument("t_test_p_value: dof < 1");
  const double v = static_cast<double>(dof);
  const double x = v / (v + t * t);
  return incomplete_beta(v / 2.0, 0.5, x);
}

TTestResult paired_t_test(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("paired_t_test: length mismatch");
  const size_t n = x.size();
  if (n < 2) throw std::invalid_argument("paired_t_test: need at least 2 pairs");

  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) mean += x[i] - y[i];
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = (x[i] - y[i]) - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(n - 1);

  TTestResult r;
  if (var <= 0.0) {
    r.degenerate = true;
    if (mean == 0.0) {
      r.t = 0.0;
      r.p = 1.0;
    } else {
      r.t = mean > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
  } else {
    r.t = mean / std::sqrt(var / static_cast<double>(n));
    r.p = t_test_p_value(r.t, static_cast<int>(n) - 1);
  }
  r.stars = significance_stars(r.p);
  return r;
}

} // namespace mipbb
