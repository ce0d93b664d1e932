// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "mipbb/lp.hpp"
#include "mipbb/types.hpp"

namespace mipbb {

// Raw feature layout: 13 variable fields (two of them 4-way one-hots),
// 8 node fields and 8 global fields -> 35 values once expanded.
constexpr int kNumRawFeatures = 35;

struct FeatureVector {
  // Variable features of the branched variable.
  std::array<double, 4> type_onehot{};  // binary, integer, impl. integer, continuous
  double coef = 0.0;                    // objective coefficient, normalized
  double has_lb = 0.0;
  double has_ub = 0.0;
  double sol_is_at_lb = 0.0;
  double sol_is_at_ub = 0.0;
  double sol_frac = 0.0;
  std::array<double, 4> basis_onehot{}; // lower, basic, upper, zero
  double reduced_cost = 0.0;            // normalized
  double age = 0.0;                     // normalized LP age
  double sol_val = 0.0;
  double inc_val = 0.0;
  double avg_inc_val = 0.0;
  // Node features (left then right child).
  double left_node_lb = 0.0;
  double left_node_estimate = 0.0;
  double left_node_branch_bound = 0.0;
  double left_node_is_prio = 0.0;
  double right_node_lb = 0.0;
  double right_node_estimate = 0.0;
  double right_node_branch_bound = 0.0;
  double right_node_is_prio = 0.0;
  // Global features.
  double global_upper_bound = 0.0;
  double global_lower_bound = 0.0;
  double integrality_gap = 0.0;
  double gap_is_infinite = 0.0;
  double depth = 0.0;
  double n_strongbranch_lp_iterations = 0.0;
  double n_node_lp_iterations = 0.0;
  double max_depth = 0.0;

  std::array<double, kNumRawFeatures> to_raw() const;
  static FeatureVector from_raw(const std::array<double, kNumRawFeatures>& raw);
  static const std::array<const char*, kNumRawFeatures>& raw_names();
  // One-hot members and 0/1 indicators; these skip standardization.
  static const std::array<bool, kNumRawFeatures>& categorical_mask();
};

/// Everything the extractor needs about the engine state at a node whose two
/// children were just created. All objective-space values are in the
/// engine's minimization view.
struct BranchSnapshot {
  int node_id = 0;
  int depth = 0;
  int branched_var = 0;
  double branch_value = 0.0;
  double floor_bound = 0.0;
  VarType var_type = VarType::Binary;
  double obj_coef = 0.0;
  double obj_inf_norm = 1.0;
  double var_lb = -kInf;
  double var_ub = kInf;
  BasisStatus basis = BasisStatus::Basic;
  double reduced_cost = 0.0;
  double age = 0.0;
  bool has_incumbent = false;
  double inc_val = 0.0;
  double avg_inc_val = 0.0;
  double left_lb = 0.0;
  double right_lb = 0.0;
  double left_estimate = 0.0;
  double right_estimate = 0.0;
  bool left_is_prio = false;
  bool right_is_prio = false;
  double primal_bound = kInf; // +inf when no incumbent
  double dual_bound = -kInf;
  long sb_lp_iters = 0;
  long node_lp_iters = 0;
  int max_depth = 0;
};

FeatureVector extract_features(const BranchSnapshot& s);

/// Dataset preprocessing: drops constant columns, z-scores the kept
/// non-categorical ones and passes categorical columns through.
class Preprocessor {
 public:
  static Preprocessor fit(const std::vector<std::array<double, kNumRawFeatures>>& rows);
  static Preprocessor identity();

  std::vector<double> transform(const std::array<double, kNumRawFeatures>& raw) const;
  std::vector<double> transform(const FeatureVector& fv) const { return transform(fv.to_raw()); }
  // Maps a transformed vector back to the kept raw coordinates.
  std::vector<double> inverse_transform(const std::vector<double>& z) const;

  int output_dim() const { return static_cast<int>(kept_.size()); }
  const std::vector<int>& kept_indices() const { return kept_; }

  std::string to_json() const;
  static Preprocessor from_json(const std::string& text);

 private:
  std::vector<int> kept_;
  std::vector<double> mean_; // per kept feature; 0 for categorical
  std::vector<double> std_;  // per kept feature; 1 for categorical
  std::vector<bool> categorical_;
};

} // namespace mipbb
