// Copyright 2026 The mpbt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpbt/analysis.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "json.hpp"
#include "mpbt/error.h"
#include "mpbt/exact.h"
#include "mpbt/initialize.h"
#include "mpbt/instance_io.h"

namespace mpbt {

double PoaRatio(const BroadcastTree& ne_tree, const BroadcastTree& opt_tree,
                const NetworkInstance& instance) {
  return NetworkPower(ne_tree, instance) / NetworkPower(opt_tree, instance);
}

double PoaFormula(int n, double alpha, double p_c) {
  return (1.0 + p_c) / (n * (1.0 / std::pow(n, alpha) + p_c));
}

double LinePcThreshold(int n, double alpha) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "the line threshold needs n >= 2");
  if (n == 2) return 1.0 - 1.0 / std::pow(2.0, alpha - 1.0);
  return (1.0 - 1.0 / std::pow(n, alpha - 1.0)) / (n - 2);
}

namespace {

BroadcastTree ChainTree(const NetworkInstance& line) {
  ActionProfile parents(line.size(), kNoNode);
  for (NodeIndex i = 1; i < line.size(); ++i) parents[i] = i - 1;
  return BroadcastTree::FromParents(line, parents);
}

BroadcastTree BroadcastFromSource(const NetworkInstance& line) {
  ActionProfile parents(line.size(), 0);
  parents[0] = kNoNode;
  return BroadcastTree::FromParents(line, parents);
}

}  // namespace

LineReport VerifyLineInstance(int n, double alpha, double p_c, double epsilon, int node_limit) {
  const double threshold = LinePcThreshold(n, alpha);
  if (p_c > threshold) {
    throw Error(ErrorCode::kPreconditionViolated,
                "p_c = " + std::to_string(p_c) + " exceeds the line threshold " +
                    std::to_string(threshold));
  }
  const NetworkInstance line = LineInstance(n, alpha, p_c, epsilon);
  LineReport report;
  report.n = n;
  report.alpha = alpha;
  report.p_c = p_c;
  report.epsilon = epsilon;
  const BroadcastTree chain = ChainTree(line);
  const BroadcastTree bcast = BroadcastFromSource(line);
  report.chain_power = NetworkPower(chain, line);
  report.bcast_power = NetworkPower(bcast, line);
  report.poa_formula = PoaFormula(n, alpha, p_c);
  if (n <= node_limit) {
    const BroadcastTree opt = SolveExact(line, node_limit);
    report.optimum_power = NetworkPower(opt, line);
    report.optimum_profile = opt.profile();
    report.chain_optimal =
        report.chain_power <= *report.optimum_power * (1.0 + 1e-12) + 1e-15;
  }
  report.bcast_verdict = CheckNashEquilibrium(bcast, CostScheme::Marginal(), line);
  return report;
}

std::string LineReportToJson(const LineReport& report) {
  nlohmann::ordered_json doc;
  doc["n"] = report.n;
  doc["alpha"] = report.alpha;
  doc["p_c"] = report.p_c;
  doc["epsilon"] = report.epsilon;
  doc["threshold"] = LinePcThreshold(report.n, report.alpha);
  doc["chain_power"] = report.chain_power;
  doc["bcast_power"] = report.bcast_power;
  doc["poa_formula"] = report.poa_formula;
  doc["optimum_power"] = report.optimum_power ? nlohmann::ordered_json(*report.optimum_power)
                                              : nlohmann::ordered_json(nullptr);
  doc["chain_optimal"] = report.chain_optimal ? nlohmann::ordered_json(*report.chain_optimal)
                                              : nlohmann::ordered_json(nullptr);
  if (report.optimum_profile) {
    nlohmann::ordered_json parents = nlohmann::ordered_json::array();
    for (NodeIndex p : *report.optimum_profile) {
      parents.push_back(p == kNoNode ? nlohmann::ordered_json(nullptr)
                                     : nlohmann::ordered_json(p));
    }
    doc["optimum_parents"] = parents;
  }
  const NashVerdict& v = report.bcast_verdict;
  doc["bcast_is_ne"] = v.is_equilibrium;
  if (!v.is_equilibrium) {
    doc["improving_deviation"] = {{"node", v.node},
                                  {"target", v.target},
                                  {"current_cost", v.current_cost},
                                  {"deviation_cost", v.deviation_cost}};
  }
  return doc.dump(2);
}

std::vector<PoaSweepRow> PoaSweep(const std::vector<int>& ns, const std::vector<double>& alphas,
                                  const std::vector<double>& p_cs, double epsilon) {
  std::vector<PoaSweepRow> rows;
  for (int n : ns) {
    for (double alpha : alphas) {
      for (double p_c : p_cs) {
        const NetworkInstance line = LineInstance(n, alpha, p_c, epsilon);
        const BroadcastTree bcast = BroadcastFromSource(line);
        PoaSweepRow row;
        row.n = n;
        row.alpha = alpha;
        row.p_c = p_c;
        row.chain_power = NetworkPower(ChainTree(line), line);
        row.bcast_power = NetworkPower(bcast, line);
        row.poa_formula = PoaFormula(n, alpha, p_c);
        row.bcast_is_ne =
            CheckNashEquilibrium(bcast, CostScheme::Marginal(), line).is_equilibrium;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void WritePoaCsv(std::ostream& out, const std::vector<PoaSweepRow>& rows) {
  out << "N,alpha,p_c,chain_power,bcast_power,poa_formula,bcast_is_ne\n";
  const auto old_precision = out.precision(12);
  for (const PoaSweepRow& r : rows) {
    out << r.n << ',' << r.alpha << ',' << r.p_c << ',' << r.chain_power << ','
        << r.bcast_power << ',' << r.poa_formula << ',' << (r.bcast_is_ne ? 1 : 0) << '\n';
  }
  out.precision(old_precision);
}

namespace {

// Summed cost of every child of j and k other than i.
double OthersCost(const BroadcastTree& tree, NodeIndex i, NodeIndex j, NodeIndex k,
                  const CostScheme& scheme, const NetworkInstance& instance) {
  double total = 0.0;
  for (NodeIndex parent : {j, k}) {
    for (NodeIndex c : tree.children(parent)) {
      if (c != i) total += CurrentCost(c, tree, scheme, instance);
    }
  }
  return total;
}

}  // namespace

DeviationDecomposition DecomposeDeviation(const BroadcastTree& tree, NodeIndex i, NodeIndex k,
                                          const CostScheme& scheme,
                                          const NetworkInstance& instance) {
  const NodeIndex j = tree.parent(i);
  if (j == k) return {};
  BroadcastTree moved = tree;
  ApplyAction(moved, i, k, instance);
  DeviationDecomposition d;
  d.delta_cost = CurrentCost(i, moved, scheme, instance) - CurrentCost(i, tree, scheme, instance);
  d.delta_network_power =
      NetworkPower(moved, instance, scheme.power) - NetworkPower(tree, instance, scheme.power);
  d.delta_others = OthersCost(moved, i, j, k, scheme, instance) -
                   OthersCost(tree, i, j, k, scheme, instance);
  return d;
}

bool BbMisalignmentCheck(const BroadcastTree& tree, NodeIndex i, NodeIndex k,
                         const CostScheme& scheme, const NetworkInstance& instance) {
  if (!scheme.budget_balanced()) {
    throw Error(ErrorCode::kSchemeNotBudgetBalanced,
                std::string(SchemeName(scheme.kind)) + " is not budget balanced");
  }
  if (tree.parent(i) == k) return false;
  const double before = CurrentCost(i, tree, scheme, instance);
  const double after = CostAt(i, k, tree, scheme, instance);
  if (!StrictlyBetter(after, before)) return false;
  const DeviationDecomposition d = DecomposeDeviation(tree, i, k, scheme, instance);
  return d.delta_others > -d.delta_cost;
}

std::optional<EsCycleWitness> SearchEsCycle(const EsCycleSearchOptions& options) {
  if (options.min_nodes < 2 || options.max_nodes < options.min_nodes) {
    throw Error(ErrorCode::kInvalidArgument, "bad node range for the cycle search");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> size(options.min_nodes, options.max_nodes);
  const CostScheme es = CostScheme::EqualShare();
  for (long candidate = 1; candidate <= options.max_candidates; ++candidate) {
    RandomInstanceParams params;
    params.area_side = options.area_side;
    params.node_count = size(rng);
    const NetworkInstance instance = GenerateRandomInstance(params, rng());
    if (!instance.connected()) continue;
    const std::uint64_t seed = rng();
    BroadcastTree start = InitializeTree(instance, InitPolicy::kGreedyJoin, es, seed);
    BrdOptions brd;
    brd.seed = seed;
    brd.round_cap = options.round_cap;
    brd.record_steps = false;
    GameTrace trace = RunBestResponseDynamics(start, es, instance, brd);
    if (trace.outcome == Outcome::kCycleDetected) {
      return EsCycleWitness{instance, start.profile(), brd, std::move(trace.cycle_witness),
                            candidate};
    }
  }
  return std::nullopt;
}

bool ReplayEsCycle(const NetworkInstance& instance, const std::vector<ActionProfile>& cycle) {
  if (cycle.size() < 3 || cycle.front() != cycle.back()) return false;
  const CostScheme es = CostScheme::EqualShare();
  for (std::size_t k = 0; k + 1 < cycle.size(); ++k) {
    const BroadcastTree tree = BroadcastTree::FromParents(instance, cycle[k]);
    if (!ValidateTree(tree, instance).valid) return false;
    NodeIndex mover = kNoNode;
    for (NodeIndex i = 0; i < instance.size(); ++i) {
      if (cycle[k][i] == cycle[k + 1][i]) continue;
      if (mover != kNoNode) return false;
      mover = i;
    }
    if (mover == kNoNode) return false;
    const auto response = FindBestResponse(mover, tree, es, instance);
    if (!response || response->parent != cycle[k + 1][mover]) return false;
  }
  return true;
}

namespace {

nlohmann::ordered_json ProfileToJson(const ActionProfile& profile,
                                     const NetworkInstance& instance) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (NodeIndex p : profile) {
    out.push_back(p == kNoNode ? nlohmann::ordered_json(nullptr)
                               : nlohmann::ordered_json(instance.id(p)));
  }
  return out;
}

ActionProfile ProfileFromJson(const nlohmann::json& doc, const NetworkInstance& instance) {
  if (!doc.is_array() || static_cast<int>(doc.size()) != instance.size()) {
    throw Error(ErrorCode::kParseError, "profile length does not match the instance");
  }
  ActionProfile profile;
  for (const auto& v : doc) {
    if (v.is_null()) {
      profile.push_back(kNoNode);
      continue;
    }
    const auto index = instance.index_of(v.get<int>());
    if (!index) throw Error(ErrorCode::kParseError, "unknown node id in profile");
    profile.push_back(*index);
  }
  return profile;
}

}  // namespace

std::string EsWitnessToJson(const EsCycleWitness& witness) {
  nlohmann::ordered_json doc;
  doc["instance"] = nlohmann::ordered_json::parse(InstanceToJson(witness.instance));
  doc["start"] = ProfileToJson(witness.start, witness.instance);
  doc["schedule"] = std::string(ScheduleName(witness.brd.schedule));
  doc["seed"] = witness.brd.seed;
  doc["round_cap"] = witness.brd.round_cap;
  doc["candidates"] = witness.candidates;
  nlohmann::ordered_json cycle = nlohmann::ordered_json::array();
  for (const ActionProfile& p : witness.cycle) cycle.push_back(ProfileToJson(p, witness.instance));
  doc["cycle"] = std::move(cycle);
  return doc.dump(2) + "\n";
}

EsCycleWitness EsWitnessFromJson(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  try {
    NetworkInstance instance = InstanceFromJson(doc.at("instance").dump());
    EsCycleWitness w{instance, ProfileFromJson(doc.at("start"), instance), BrdOptions{}, {},
                     doc.value("candidates", 0L)};
    w.brd.schedule = ParseSchedule(doc.value("schedule", std::string("random-permutation")));
    w.brd.seed = doc.at("seed").get<std::uint64_t>();
    w.brd.round_cap = doc.value("round_cap", 200);
    w.brd.record_steps = false;
    for (const auto& p : doc.at("cycle")) w.cycle.push_back(ProfileFromJson(p, instance));
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

LinearFit FitLine(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "a line fit needs two or more points");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kInvalidArgument, "a line fit needs distinct xs");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

LinearFit FitPowerLaw(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (double x : xs) lx.push_back(std::log(x));
  for (double y : ys) ly.push_back(std::log(y));
  return FitLine(lx, ly);
}

}  // namespace mpbt
