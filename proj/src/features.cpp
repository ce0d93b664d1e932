// SPDX-License-Identifier: Apache-2.0
#include "mipbb/features.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "mipbb/mip.hpp"

namespace mipbb {

std::array<double, kNumRawFeatures> FeatureVector::to_raw() const {
  return {type_onehot[0], type_onehot[1], type_onehot[2], type_onehot[3],
          coef,
          has_lb, has_ub,
          sol_is_at_lb, sol_is_at_ub,
          sol_frac,
          basis_onehot[0], basis_onehot[1], basis_onehot[2], basis_onehot[3],
          reduced_cost,
          age,
          sol_val, inc_val, avg_inc_val,
          left_node_lb, left_node_estimate, left_node_branch_bound, left_node_is_prio,
          right_node_lb, right_node_estimate, right_node_branch_bound, right_node_is_prio,
          global_upper_bound, global_lower_bound,
          integrality_gap, gap_is_infinite,
          depth,
          n_strongbranch_lp_iterations, n_node_lp_iterations,
          max_depth};
}

FeatureVector FeatureVector::from_raw(const std::array<double, kNumRawFeatures>& r) {
  FeatureVector f;
  f.type_onehot = {r[0], r[1], r[2], r[3]};
  f.coef = r[4];
  f.has_lb = r[5];
  f.has_ub = r[6];
  f.sol_is_at_lb = r[7];
  f.sol_is_at_ub = r[8];
  f.sol_frac = r[9];
  f.basis_onehot = {r[10], r[11], r[12], r[13]};
  f.reduced_cost = r[14];
  f.age = r[15];
  f.sol_val = r[16];
  f.inc_val = r[17];
  f.avg_inc_val = r[18];
  f.left_node_lb = r[19];
  f.left_node_estimate = r[20];
  f.left_node_branch_bound = r[21];
  f.left_node_is_prio = r[22];
  f.right_node_lb = r[23];
  f.right_node_estimate = r[24];
  f.right_node_branch_bound = r[25];
  f.right_node_is_prio = r[26];
  f.global_upper_bound = r[27];
  f.global_lower_bound = r[28];
  f.integrality_gap = r[29];
  f.gap_is_infinite = r[30];
  f.depth = r[31];
  f.n_strongbranch_lp_iterations = r[32];
  f.n_node_lp_iterations = r[33];
  f.max_depth = r[34];
  return f;
}

const std::array<const char*, kNumRawFeatures>& FeatureVector::raw_names() {
  static const std::array<const char*, kNumRawFeatures> names = {
      "type_binary", "type_integer", "type_impl_integer", "type_continuous",
      "coef",
      "has_lb", "has_ub",
      "sol_is_at_lb", "sol_is_at_ub",
      "sol_frac",
      "basis_lower", "basis_basic", "basis_upper", "basis_zero",
      "reduced_cost",
      "age",
      "sol_val", "inc_val", "avg_inc_val",
      "left_node_lb", "left_node_estimate", "left_node_branch_bound", "left_node_is_prio",
      "right_node_lb", "right_node_estimate", "right_node_branch_bound", "right_node_is_prio",
      "global_upper_bound", "global_lower_bound",
      "integrality_gap", "gap_is_infinite",
      "depth",
      "n_strongbranch_lp_iterations", "n_node_lp_iterations",
      "max_depth"};
  return names;
}

const std::array<bool, kNumRawFeatures>& FeatureVector::categorical_mask() {
  static const std::array<bool, kNumRawFeatures> mask = {
      true, true, true, true,   // type one-hot
      false,                    // coef
      true, true,               // has_lb, has_ub
      true, true,               // sol_is_at_lb/ub
      false,                    // sol_frac
      true, true, true, true,   // basis one-hot
      false, false,             // reduced_cost, age
      false, false, false,      // sol_val, inc_val, avg_inc_val
      false, false, false, true,      // left node (is_prio categorical)
      false, false, false, true,      // right node
      false, false,             // global bounds
      false, true,              // gap, gap_is_infinite
      false,                    // depth
      false, false,             // lp iteration counters
      false};                   // max_depth
  return mask;
}

FeatureVector extract_features(const BranchSnapshot& s) {
  FeatureVector f;
  switch (s.var_type) {
    case VarType::Binary: f.type_onehot[0] = 1; break;
    case VarType::Integer: f.type_onehot[1] = 1; break;
    case VarType::ImpliedInteger: f.type_onehot[2] = 1; break;
    case VarType::Continuous: f.type_onehot[3] = 1; break;
  }
  f.coef = s.obj_coef / s.obj_inf_norm;
  f.has_lb = std::isfinite(s.var_lb) ? 1.0 : 0.0;
  f.has_ub = std::isfinite(s.var_ub) ? 1.0 : 0.0;
  f.sol_is_at_lb = std::isfinite(s.var_lb) && std::fabs(s.branch_value - s.var_lb) <= 1e-6;
  f.sol_is_at_ub = std::isfinite(s.var_ub) && std::fabs(s.branch_value - s.var_ub) <= 1e-6;
  f.sol_frac = s.branch_value - std::floor(s.branch_value);
  switch (s.basis) {
    case BasisStatus::Lower: f.basis_onehot[0] = 1; break;
    case BasisStatus::Basic: f.basis_onehot[1] = 1; break;
    case BasisStatus::Upper: f.basis_onehot[2] = 1; break;
    case BasisStatus::Zero: f.basis_onehot[3] = 1; break;
  }
  f.reduced_cost = s.reduced_cost / s.obj_inf_norm;
  f.age = s.age;
  f.sol_val = s.branch_value;
  f.inc_val = s.has_incumbent ? s.inc_val : 0.0;
  f.avg_inc_val = s.has_incumbent ? s.avg_inc_val : 0.0;
  f.left_node_lb = s.left_lb;
  f.left_node_estimate = s.left_estimate;
  f.left_node_branch_bound = s.floor_bound;
  f.left_node_is_prio = s.left_is_prio ? 1.0 : 0.0;
  f.right_node_lb = s.right_lb;
  f.right_node_estimate = s.right_estimate;
  f.right_node_branch_bound = s.floor_bound + 1.0;
  f.right_node_is_prio = s.right_is_prio ? 1.0 : 0.0;
  f.global_upper_bound = s.has_incumbent ? s.primal_bound : 0.0;
  f.global_lower_bound = std::isfinite(s.dual_bound) ? s.dual_bound : 0.0;
  const double gap = integrality_gap(s.primal_bound, s.dual_bound);
  f.gap_is_infinite = std::isfinite(gap) ? 0.0 : 1.0;
  f.integrality_gap = std::isfinite(gap) ? gap : 0.0;
  f.depth = static_cast<double>(s.depth);
  f.n_strongbranch_lp_iterations = static_cast<double>(s.sb_lp_iters);
  f.n_node_lp_iterations = static_cast<double>(s.node_lp_iters);
  f.max_depth = static_cast<double>(s.max_depth);
  return f;
}

Preprocessor Preprocessor::fit(const std::vector<std::array<double, kNumRawFeatures>>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("Preprocessor::fit: need at least 2 samples");
  const auto& cat = FeatureVector::categorical_mask();
  const double n = static_cast<double>(rows.size());

  Preprocessor p;
  for (int j = 0; j < kNumRawFeatures; ++j) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r[j];
    mean /= n;
    double var = 0.0;
    for (const auto& r : rows) {
      const double d = r[j] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / n); // population std
    if (sd <= 1e-12) continue;            // constant feature: dropped
    p.kept_.push_back(j);
    p.categorical_.push_back(cat[j]);
    p.mean_.push_back(cat[j] ? 0.0 : mean);
    p.std_.push_back(cat[j] ? 1.0 : sd);
  }
  if (p.kept_.empty()) throw std::invalid_argument("Preprocessor::fit: all features constant");
  return p;
}

Preprocessor Preprocessor::identity() {
  Preprocessor p;
  for (int j = 0; j < kNumRawFeatures; ++j) {
    p.kept_.push_back(j);
    p.categorical_.push_back(true);
    p.mean_.push_back(0.0);
    p.std_.push_back(1.0);
  }
  return p;
}

std::vector<double> Preprocessor::transform(const std::array<double, kNumRawFeatures>& raw) const {
  std::vector<double> out(kept_.size());
  for (size_t k = 0; k < kept_.size(); ++k) {
    out[k] = (raw[kept_[k]] - mean_[k]) / std_[k];
  }
  return out;
}

std::vector<double> Preprocessor::inverse_transform(const std::vector<double>& z) const {
  if (z.size() != kept_.size())
    throw std::invalid_argument("Preprocessor::inverse_transform: dimension mismatch");
  std::vector<double> out(z.size());
  for (size_t k = 0; k < z.size(); ++k) out[k] = z[k] * std_[k] + mean_[k];
  return out;
}

std::string Preprocessor::to_json() const {
  nlohmann::json j;
  j["kept"] = kept_;
  j["mean"] = mean_;
  j["std"] = std_;
  j["categorical"] = categorical_;
  return j.dump();
}

Preprocessor Preprocessor::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Preprocessor p;
  p.kept_ = j.at("kept").get<std::vector<int>>();
  p.mean_ = j.at("mean").get<std::vector<double>>();
  p.std_ = j.at("std").get<std::vector<double>>();
  p.categorical_ = j.at("categorical").get<std::vector<bool>>();
  if (p.mean_.size() != p.kept_.size() || p.std_.size() != p.kept_.size())
    throw std::invalid_argument("Preprocessor::from_json: inconsistent arrays");
  return p;
}

} // namespace mipbb
