// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "mipbb/mip.hpp"

namespace mipbb {

enum class ProblemClass { SetCover, IndSet, Facility, CAuctions };
enum class Scale { Desk, Paper, Hard };

ProblemClass problem_class_from_string(const std::string& s);
std::string to_string(ProblemClass c);
std::string to_string(Scale s);
Scale scale_from_string(const std::string& s);

/// Per-class generator knobs. Defaults follow the cited generator's
/// documented settings; dimensions come from the scale tables below.
struct GeneratorParams {
  // set cover
  int sc_rows = 0;
  int sc_cols = 0;
  double sc_density = 0.05;
  int sc_max_cost = 100;
  // maximum independent set
  int is_nodes = 0;
  int is_affinity = 4;
  // capacitated facility location
  int fl_customers = 0;
  int fl_facilities = 0;
  double fl_ratio = 5.0;
  // combinatorial auctions
  int ca_items = 0;
  int ca_bids = 0;
  double ca_value_deviation = 0.5;
  double ca_add_item_prob = 0.9;
  double ca_additivity = 0.2;
};

struct InstanceSpec {
  ProblemClass problem_class = ProblemClass::SetCover;
  Scale scale = Scale::Desk;
  std::uint64_t seed = 0;
  GeneratorParams params; // filled from (class, scale) by make_spec

  std::string name() const;
};

/// Canonical spec for a (class, scale, seed) triple with the dimension table
/// applied. Desk dimensions keep full pipelines fast; paper/hard match the
/// reported experiment sizes.
InstanceSpec make_spec(ProblemClass c, Scale s, std::uint64_t seed);

MipModel generate(const InstanceSpec& spec);

/// Two-variable toy used in walkthrough tests: branches x1 at 2.5, then x2 at
/// 3.5 under x1<=2, then x1 at 0.7 under x2>=4.
MipModel toy_model();

void write_instance(const MipModel& model, const std::string& path);
MipModel read_instance(const std::string& path);
std::string instance_to_json(const MipModel& model);
MipModel instance_from_json(const std::string& text);

} // namespace mipbb
