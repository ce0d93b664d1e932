// SPDX-License-Identifier: Apache-2.0
#include "mipbb/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mipbb {

ProblemClass problem_class_from_string(const std::string& s) {
  if (s == "setcover") return ProblemClass::SetCover;
  if (s == "indset") return ProblemClass::IndSet;
  if (s == "facility") return ProblemClass::Facility;
  if (s == "cauctions") return ProblemClass::CAuctions;
  throw std::invalid_argument("unknown problem class: " + s);
}

std::string to_string(ProblemClass c) {
  switch (c) {
    case ProblemClass::SetCover: return "setcover";
    case ProblemClass::IndSet: return "indset";
    case ProblemClass::Facility: return "facility";
    case ProblemClass::CAuctions: return "cauctions";
  }
  return "?";
}

std::string to_string(Scale s) {
  switch (s) {
    case Scale::Desk: return "desk";
    case Scale::Paper: return "paper";
    case Scale::Hard: return "hard";
  }
  return "?";
}

Scale scale_from_string(const std::string& s) {
  if (s == "desk") return Scale::Desk;
  if (s == "paper") return Scale::Paper;
  if (s == "hard") return Scale::Hard;
  throw std::invalid_argument("unknown scale: " + s);
}

std::string InstanceSpec::name() const {
  return to_string(problem_class) + "_" + std::to_string(seed);
}

InstanceSpec make_spec(ProblemClass c, Scale s, std::uint64_t seed) {
  InstanceSpec spec;
  spec.problem_class = c;
  spec.scale = s;
  spec.seed = seed;
  GeneratorParams& p = spec.params;
  switch (c) {
    case ProblemClass::SetCover:
      if (s == Scale::Desk) { p.sc_cols = 500; p.sc_rows = 250; }
      else if (s == Scale::Paper) { p.sc_cols = 2000; p.sc_rows = 1000; }
      else { p.sc_cols = 4000; p.sc_rows = 2000; }
      break;
    case ProblemClass::IndSet:
      p.is_nodes = s == Scale::Desk ? 250 : 1000;
      break;
    case ProblemClass::Facility:
      if (s == Scale::Desk) { p.fl_customers = 35; p.fl_facilities = 35; }
      else { p.fl_customers = 150; p.fl_facilities = 150; }
      break;
    case ProblemClass::CAuctions:
      if (s == Scale::Desk) { p.ca_items = 100; p.ca_bids = 300; }
      else { p.ca_items = 500; p.ca_bids = 1200; }
      break;
  }
  return spec;
}

namespace {

using Rng = std::mt19937_64;

Rng make_rng(const InstanceSpec& spec) {
  // Mix the class in so distinct classes with the same seed differ.
  return Rng(spec.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(spec.problem_class));
}

MipModel generate_set_cover(const InstanceSpec& spec) {
  const auto& p = spec.params;
  const int rows = p.sc_rows, cols = p.sc_cols;
  Rng rng = make_rng(spec);
  std::uniform_int_distribution<int> cost(1, p.sc_max_cost);
  std::uniform_int_distribution<int> row_pick(0, rows - 1);

  // Column degree ~ Binomial(rows, density), at least 1; then patch rows so
  // every row is covered by at least 2 columns.
  std::binomial_distribution<int> degree(rows, p.sc_density);
  std::vector<std::vector<int>> col_rows(cols);
  std::vector<int> row_cover(rows, 0);
  for (int j = 0; j < cols; ++j) {
    const int d = std::max(1, degree(rng));
    std::vector<char> used(rows, 0);
    for (int t = 0; t < d; ++t) {
      int r = row_pick(rng);
      while (used[r]) r = row_pick(rng);
      used[r] = 1;
      col_rows[j].push_back(r);
      ++row_cover[r];
    }
  }
  std::uniform_int_distribution<int> col_pick(0, cols - 1);
  for (int r = 0; r < rows; ++r) {
    while (row_cover[r] < 2) {
      const int j = col_pick(rng);
      if (std::find(col_rows[j].begin(), col_rows[j].end(), r) != col_rows[j].end()) continue;
      col_rows[j].push_back(r);
      ++row_cover[r];
    }
  }

  MipModel m;
  m.lp.sense = Sense::Minimize;
  m.lp.objective.resize(cols);
  for (auto& c : m.lp.objective) c = cost(rng);
  m.lp.var_bounds.assign(cols, {0.0, 1.0});
  m.integrality.assign(cols, VarType::Binary);
  m.lp.rows.assign(rows, LpRow{std::vector<double>(cols, 0.0), Relation::GreaterEqual, 1.0});
  for (int j = 0; j < cols; ++j)
    for (int r : col_rows[j]) m.lp.rows[r].coefs[j] = 1.0;
  return m;
}

MipModel generate_indset(const InstanceSpec& spec) {
  const auto& p = spec.params;
  const int n = p.is_nodes;
  const int aff = p.is_affinity;
  Rng rng = make_rng(spec);

  // Barabasi-Albert preferential attachment with `aff` edges per new node.
  std::vector<std::pair<int, int>> edges;
  std::vector<int> degree_bag; // node id repeated once per incident edge
  for (int v = aff; v < n; ++v) {
    std::vector<int> targets;
    if (v == aff) {
      for (int u = 0; u < aff; ++u) targets.push_back(u);
    } else {
      std::vector<char> used(v, 0);
      std::uniform_int_distribution<size_t> pick(0, degree_bag.size() - 1);
      std::uniform_int_distribution<int> uni(0, v - 1);
      while (static_cast<int>(targets.size()) < aff) {
        int u = degree_bag[pick(rng)];
        if (used[u]) {
          u = uni(rng);
          if (used[u]) continue;
        }
        used[u] = 1;
        targets.push_back(u);
      }
    }
    for (int u : targets) {
      edges.push_back({u, v});
      degree_bag.push_back(u);
      degree_bag.push_back(v);
    }
  }

  MipModel m;
  m.lp.sense = Sense::Maximize;
  m.lp.objective.assign(n, 1.0);
  m.lp.var_bounds.assign(n, {0.0, 1.0});
  m.integrality.assign(n, VarType::Binary);
  m.lp.rows.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    LpRow row{std::vector<double>(n, 0.0), Relation::LessEqual, 1.0};
    row.coefs[u] = 1.0;
    row.coefs[v] = 1.0;
    m.lp.rows.push_back(std::move(row));
  }
  return m;
}

MipModel generate_facility(const InstanceSpec& spec) {
  const auto& p = spec.params;
  const int nc = p.fl_customers, nf = p.fl_facilities;
  Rng rng = make_rng(spec);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> demand_d(5, 35);
  std::uniform_int_distribution<int> capacity_d(10, 160);
  std::uniform_int_distribution<int> fixed_a(100, 110);
  std::uniform_int_distribution<int> fixed_b(0, 90);

  std::vector<double> cx(nc), cy(nc), fx(nf), fy(nf);
  for (int i = 0; i < nc; ++i) { cx[i] = unit(rng); cy[i] = unit(rng); }
  for (int j = 0; j < nf; ++j) { fx[j] = unit(rng); fy[j] = unit(rng); }
  std::vector<double> demand(nc), capacity(nf), fixed(nf);
  double total_demand = 0, total_capacity = 0;
  for (int i = 0; i < nc; ++i) { demand[i] = demand_d(rng); total_demand += demand[i]; }
  for (int j = 0; j < nf; ++j) {
    capacity[j] = capacity_d(rng);
    total_capacity += capacity[j];
    fixed[j] = fixed_a(rng) * std::sqrt(capacity[j]) + fixed_b(rng);
  }
  for (int j = 0; j < nf; ++j)
    capacity[j] = std::round(capacity[j] * p.fl_ratio * total_demand / total_capacity);

  // Variables: open_j (binary) first, then assignment fractions y_ij.
  const int n = nf + nc * nf;
  auto yidx = [&](int i, int j) { return nf + i * nf + j; };

  MipModel m;
  m.lp.sense = Sense::Minimize;
  m.lp.objective.assign(n, 0.0);
  m.lp.var_bounds.assign(n, {0.0, 1.0});
  m.integrality.assign(n, VarType::Continuous);
  for (int j = 0; j < nf; ++j) {
    m.lp.objective[j] = fixed[j];
    m.integrality[j] = VarType::Binary;
  }
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nf; ++j) {
      const double dx = cx[i] - fx[j], dy = cy[i] - fy[j];
      m.lp.objective[yidx(i, j)] = 10.0 * std::sqrt(dx * dx + dy * dy) * demand[i];
    }

  // One demand row per customer, one capacity row per facility.
  for (int i = 0; i < nc; ++i) {
    LpRow row{std::vector<double>(n, 0.0), Relation::Equal, 1.0};
    for (int j = 0; j < nf; ++j) row.coefs[yidx(i, j)] = 1.0;
    m.lp.rows.push_back(std::move(row));
  }
  for (int j = 0; j < nf; ++j) {
    LpRow row{std::vector<double>(n, 0.0), Relation::LessEqual, 0.0};
    for (int i = 0; i < nc; ++i) row.coefs[yidx(i, j)] = demand[i];
    row.coefs[j] = -capacity[j];
    m.lp.rows.push_back(std::move(row));
  }
  return m;
}

MipModel generate_cauctions(const InstanceSpec& spec) {
  const auto& p = spec.params;
  const int items = p.ca_items, bids = p.ca_bids;
  Rng rng = make_rng(spec);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> value_d(1.0, 100.0);

  std::vector<double> common(items);
  for (auto& v : common) v = value_d(rng);
  // Arbitrary pairwise relationships: symmetric compatibility weights decide
  // which items co-occur in a bundle.
  std::vector<double> compat(static_cast<size_t>(items) * items, 0.0);
  for (int i = 0; i < items; ++i)
    for (int j = i + 1; j < items; ++j) {
      const double w = unit(rng);
      compat[i * items + j] = w;
      compat[j * items + i] = w;
    }

  std::uniform_int_distribution<int> item_pick(0, items - 1);
  std::vector<std::vector<int>> bundles(bids);
  std::vector<double> price(bids);
  for (int b = 0; b < bids; ++b) {
    std::vector<char> in(items, 0);
    std::vector<int> bundle{item_pick(rng)};
    in[bundle[0]] = 1;
    while (unit(rng) < p.ca_add_item_prob && static_cast<int>(bundle.size()) < items) {
      double total = 0.0;
      std::vector<double> w(items, 0.0);
      for (int i = 0; i < items; ++i) {
        if (in[i]) continue;
        double acc = 0.0;
        for (int u : bundle) acc += compat[u * items + i];
        w[i] = acc;
        total += acc;
      }
      if (total <= 0.0) break;
      double roll = unit(rng) * total;
      int chosen = -1;
      for (int i = 0; i < items; ++i) {
        if (in[i]) continue;
        roll -= w[i];
        if (roll <= 0.0) { chosen = i; break; }
      }
      if (chosen < 0) break;
      in[chosen] = 1;
      bundle.push_back(chosen);
    }
    double value = 0.0;
    for (int u : bundle)
      value += common[u] * (1.0 + p.ca_value_deviation * (2.0 * unit(rng) - 1.0));
    value += std::pow(static_cast<double>(bundle.size()), 1.0 + p.ca_additivity);
    price[b] = std::max(1.0, value);
    bundles[b] = std::move(bundle);
  }

  MipModel m;
  m.lp.sense = Sense::Maximize;
  m.lp.objective = price;
  m.lp.var_bounds.assign(bids, {0.0, 1.0});
  m.integrality.assign(bids, VarType::Binary);
  // XOR row per item appearing in at least two bids.
  std::vector<std::vector<int>> item_bids(items);
  for (int b = 0; b < bids; ++b)
    for (int u : bundles[b]) item_bids[u].push_back(b);
  for (int u = 0; u < items; ++u) {
    if (item_bids[u].size() < 2) continue;
    LpRow row{std::vector<double>(bids, 0.0), Relation::LessEqual, 1.0};
    for (int b : item_bids[u]) row.coefs[b] = 1.0;
    m.lp.rows.push_back(std::move(row));
  }
  return m;
}

} // namespace

MipModel generate(const InstanceSpec& spec) {
  MipModel m;
  switch (spec.problem_class) {
    case ProblemClass::SetCover: m = generate_set_cover(spec); break;
    case ProblemClass::IndSet: m = generate_indset(spec); break;
    case ProblemClass::Facility: m = generate_facility(spec); break;
    case ProblemClass::CAuctions: m = generate_cauctions(spec); break;
  }
  m.validate();
  return m;
}

MipModel toy_model() {
  MipModel m;
  m.lp.sense = Sense::Minimize;
  m.lp.objective = {-1.0, -0.8};
  m.lp.var_bounds = {{0.0, 10.0}, {0.0, 10.0}};
  m.integrality = {VarType::Integer, VarType::Integer};
  m.lp.rows.push_back({{1.0, 0.0}, Relation::LessEqual, 2.5});
  m.lp.rows.push_back({{1.0, 7.0}, Relation::LessEqual, 28.7});
  m.lp.rows.push_back({{5.0, 13.0}, Relation::LessEqual, 55.5});
  m.lp.rows.push_back({{1.0, 1.0}, Relation::LessEqual, 5.5});
  return m;
}

namespace {

nlohmann::json bound_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double bound_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw std::invalid_argument("bad bound string: " + s);
  }
  return j.get<double>();
}

char vartype_code(VarType t) {
  switch (t) {
    case VarType::Binary: return 'B';
    case VarType::Integer: return 'I';
    case VarType::ImpliedInteger: return 'K';
    case VarType::Continuous: return 'C';
  }
  return '?';
}

VarType vartype_from_code(char c) {
  switch (c) {
    case 'B': return VarType::Binary;
    case 'I': return VarType::Integer;
    case 'K': return VarType::ImpliedInteger;
    case 'C': return VarType::Continuous;
  }
  throw std::invalid_argument(std::string("bad variable type code: ") + c);
}

const char* relation_code(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Equal: return "=";
  }
  return "?";
}

Relation relation_from_code(const std::string& s) {
  if (s == "<=") return Relation::LessEqual;
  if (s == ">=") return Relation::GreaterEqual;
  if (s == "=") return Relation::Equal;
  throw std::invalid_argument("bad relation code: " + s);
}

} // namespace

std::string instance_to_json(const MipModel& model) {
  nlohmann::json j;
  j["sense"] = model.lp.sense == Sense::Minimize ? "min" : "max";
  j["objective"] = model.lp.objective;
  nlohmann::json bounds = nlohmann::json::array();
  for (const auto& [lo, hi] : model.lp.var_bounds)
    bounds.push_back({bound_to_json(lo), bound_to_json(hi)});
  j["bounds"] = bounds;
  std::string integ;
  for (VarType t : model.integrality) integ.push_back(vartype_code(t));
  j["integrality"] = integ;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : model.lp.rows) {
    rows.push_back({{"coefs", row.coefs}, {"rel", relation_code(row.rel)}, {"rhs", row.rhs}});
  }
  j["rows"] = rows;
  return j.dump();
}

MipModel instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("instance parse error: ") + e.what());
  }
  MipModel m;
  try {
    m.lp.sense = j.at("sense").get<std::string>() == "max" ? Sense::Maximize : Sense::Minimize;
    m.lp.objective = j.at("objective").get<std::vector<double>>();
    for (const auto& b : j.at("bounds"))
      m.lp.var_bounds.push_back({bound_from_json(b.at(0)), bound_from_json(b.at(1))});
    for (char c : j.at("integrality").get<std::string>())
      m.integrality.push_back(vartype_from_code(c));
    for (const auto& row : j.at("rows")) {
      m.lp.rows.push_back(LpRow{row.at("coefs").get<std::vector<double>>(),
                                relation_from_code(row.at("rel").get<std::string>()),
                                row.at("rhs").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance schema error: ") + e.what());
  }
  m.validate();
  return m;
}

void write_instance(const MipModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << instance_to_json(model) << '\n';
}

MipModel read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for read: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

} // namespace mipbb
