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

#include "mpbt/game.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "mpbt/error.h"

namespace mpbt {

std::string_view SchemeName(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kMarginal: return "mc";
    case SchemeKind::kShapley: return "sv";
    case SchemeKind::kEqualShare: return "es";
  }
  return "?";
}

SchemeKind ParseScheme(std::string_view name) {
  if (name == "mc") return SchemeKind::kMarginal;
  if (name == "sv") return SchemeKind::kShapley;
  if (name == "es") return SchemeKind::kEqualShare;
  throw Error(ErrorCode::kInvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

void Validate(const CostScheme& scheme) {
  if (scheme.power.fixed_transmit_power && !(*scheme.power.fixed_transmit_power > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "fixed transmit power must be positive");
  }
}

namespace {

// Sorted per-child totals P^uni = p_c + p^uni under the scheme's regime.
std::vector<double> SortedDemands(NodeIndex j, std::span<const NodeIndex> group,
                                  const NetworkInstance& instance,
                                  const PowerModel& model) {
  std::vector<double> demands;
  demands.reserve(group.size());
  for (NodeIndex c : group) demands.push_back(LinkTotalPower(j, c, instance, model));
  std::sort(demands.begin(), demands.end());
  return demands;
}

double ShapleyCost(NodeIndex i, NodeIndex j, std::span<const NodeIndex> group,
                   const NetworkInstance& instance, const PowerModel& model) {
  const std::vector<double> demands = SortedDemands(j, group, instance, model);
  const double own = LinkTotalPower(j, i, instance, model);
  // Tied demands contribute zero increments, so any tied rank gives the
  // same share.
  const std::size_t rank =
      std::lower_bound(demands.begin(), demands.end(), own) - demands.begin() + 1;
  const std::size_t m = demands.size();
  double cost = 0.0;
  double previous = 0.0;
  for (std::size_t n = 1; n <= rank; ++n) {
    cost += (demands[n - 1] - previous) / static_cast<double>(m + 1 - n);
    previous = demands[n - 1];
  }
  return cost;
}

double HarmonicNumber(std::size_t k) {
  double h = 0.0;
  for (std::size_t n = 1; n <= k; ++n) h += 1.0 / static_cast<double>(n);
  return h;
}

double ShapleyNodePotential(NodeIndex j, std::span<const NodeIndex> group,
                            const NetworkInstance& instance,
                            const PowerModel& model) {
  const std::vector<double> demands = SortedDemands(j, group, instance, model);
  const std::size_t m = demands.size();
  double phi = 0.0;
  double previous = 0.0;
  for (std::size_t n = 1; n <= m; ++n) {
    phi += (demands[n - 1] - previous) * HarmonicNumber(m + 1 - n);
    previous = demands[n - 1];
  }
  return phi;
}

std::vector<NodeIndex> GroupWith(const BroadcastTree& tree, NodeIndex j, NodeIndex i) {
  std::vector<NodeIndex> group = tree.children(j);
  if (!std::binary_search(group.begin(), group.end(), i)) {
    group.insert(std::upper_bound(group.begin(), group.end(), i), i);
  }
  return group;
}

double SumNodePowers(const BroadcastTree& tree, const NetworkInstance& instance,
                     const PowerModel& model) {
  double total = 0.0;
  for (int j = 0; j < tree.size(); ++j) {
    total += NodePower(j, tree.children(j), instance, model);
  }
  return total;
}

}  // namespace

double ShareCost(const CostScheme& scheme, NodeIndex i, NodeIndex j,
                 std::span<const NodeIndex> group, const NetworkInstance& instance) {
  if (std::find(group.begin(), group.end(), i) == group.end()) {
    throw Error(ErrorCode::kNotAChild, std::to_string(instance.id(i)) +
                                           " is not in the child set of " +
                                           std::to_string(instance.id(j)));
  }
  const PowerModel& model = scheme.power;
  switch (scheme.kind) {
    case SchemeKind::kMarginal: {
      std::vector<NodeIndex> rest;
      rest.reserve(group.size());
      for (NodeIndex c : group) {
        if (c != i) rest.push_back(c);
      }
      return NodePower(j, group, instance, model) - NodePower(j, rest, instance, model);
    }
    case SchemeKind::kShapley:
      return ShapleyCost(i, j, group, instance, model);
    case SchemeKind::kEqualShare:
      return NodePower(j, group, instance, model) / static_cast<double>(group.size());
  }
  return 0.0;
}

double CurrentCost(NodeIndex i, const BroadcastTree& tree, const CostScheme& scheme,
                   const NetworkInstance& instance) {
  const NodeIndex j = tree.parent(i);
  if (j == kNoNode) return kInfeasible;
  return ShareCost(scheme, i, j, tree.children(j), instance);
}

double CostAt(NodeIndex i, NodeIndex j, const BroadcastTree& tree,
              const CostScheme& scheme, const NetworkInstance& instance) {
  const std::vector<NodeIndex> group = GroupWith(tree, j, i);
  return ShareCost(scheme, i, j, group, instance);
}

std::vector<NodeIndex> ActionSet(NodeIndex i, const BroadcastTree& tree,
                                 const NetworkInstance& instance,
                                 const PowerModel& model) {
  std::vector<NodeIndex> actions;
  if (i == tree.source()) return actions;
  for (NodeIndex j : instance.neighbors(i)) {
    if (instance.link_usable(j, i, model) && tree.connected(j) && !tree.on_route(i, j)) {
      actions.push_back(j);
    }
  }
  return actions;
}

int InformationEntries(SchemeKind kind, std::size_t group_size) {
  switch (kind) {
    case SchemeKind::kEqualShare: return 1;
    case SchemeKind::kMarginal: return 2;
    case SchemeKind::kShapley: return static_cast<int>(group_size);
  }
  return 0;
}

bool StrictlyBetter(double candidate, double current) {
  if (current == kInfeasible) return candidate != kInfeasible;
  return candidate < current - kImprovementTolerance * std::max(1.0, std::abs(current));
}

std::optional<BestResponse> FindBestResponse(NodeIndex i, const BroadcastTree& tree,
                                             const CostScheme& scheme,
                                             const NetworkInstance& instance,
                                             long* information) {
  const std::vector<NodeIndex> actions = ActionSet(i, tree, instance, scheme.power);
  if (actions.empty()) {
    throw Error(ErrorCode::kEmptyActionSet,
                "node " + std::to_string(instance.id(i)) + " has no available parent");
  }
  const NodeIndex current = tree.parent(i);
  const double current_cost = CurrentCost(i, tree, scheme, instance);
  NodeIndex best = kNoNode;
  double best_cost = kInfeasible;
  for (NodeIndex j : actions) {
    const std::vector<NodeIndex> group = GroupWith(tree, j, i);
    if (information) *information += InformationEntries(scheme.kind, group.size());
    if (j == current) continue;
    const double c = ShareCost(scheme, i, j, group, instance);
    if (best == kNoNode || StrictlyBetter(c, best_cost)) {
      best = j;
      best_cost = c;
    }
  }
  if (best == kNoNode || !StrictlyBetter(best_cost, current_cost)) return std::nullopt;
  return BestResponse{best, best_cost, current_cost};
}

std::string_view ScheduleName(Schedule schedule) {
  switch (schedule) {
    case Schedule::kRandomPermutation: return "random-permutation";
    case Schedule::kRoundRobin: return "round-robin";
    case Schedule::kRandomSingle: return "random-single";
  }
  return "?";
}

Schedule ParseSchedule(std::string_view name) {
  if (name == "random-permutation") return Schedule::kRandomPermutation;
  if (name == "round-robin") return Schedule::kRoundRobin;
  if (name == "random-single") return Schedule::kRandomSingle;
  throw Error(ErrorCode::kInvalidArgument, "unknown schedule '" + std::string(name) + "'");
}

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kConvergedNE: return "converged";
    case Outcome::kCycleDetected: return "cycle";
    case Outcome::kCapExceeded: return "cap-exceeded";
  }
  return "?";
}

GameTrace RunBestResponseDynamics(BroadcastTree tree, const CostScheme& scheme,
                                  const NetworkInstance& instance,
                                  const BrdOptions& options) {
  Validate(scheme);
  if (!tree.complete()) {
    throw Error(ErrorCode::kInvalidTree, "dynamics need a complete tree");
  }
  GameTrace trace{.steps = {}, .cycle_witness = {}, .final_tree = tree};
  BroadcastTree& state = trace.final_tree;
  const std::vector<NodeIndex> receivers = instance.receivers();
  std::mt19937_64 rng(options.seed);

  std::unordered_map<ActionProfile, std::size_t, ActionProfileHash> seen;
  std::vector<ActionProfile> history;
  seen.emplace(state.profile(), 0);
  history.push_back(state.profile());

  std::vector<NodeIndex> order = receivers;
  for (int round = 1; round <= options.round_cap; ++round) {
    switch (options.schedule) {
      case Schedule::kRandomPermutation:
        std::shuffle(order.begin(), order.end(), rng);
        break;
      case Schedule::kRoundRobin:
        break;
      case Schedule::kRandomSingle: {
        std::uniform_int_distribution<std::size_t> pick(0, receivers.size() - 1);
        for (NodeIndex& v : order) v = receivers[pick(rng)];
        break;
      }
    }
    bool changed = false;
    for (NodeIndex i : order) {
      const auto response =
          FindBestResponse(i, state, scheme, instance, &trace.information_entries);
      if (!response) continue;
      TraceStep step;
      if (options.record_steps) {
        step.iteration = trace.changes;
        step.round = round;
        step.node = i;
        step.old_parent = state.parent(i);
        step.new_parent = response->parent;
        step.cost_before = response->current_cost;
        step.cost_after = response->cost;
        step.potential_before = SchemePotential(state, scheme, instance);
        step.network_power_before = SumNodePowers(state, instance, scheme.power);
      }
      ApplyAction(state, i, response->parent, instance);
      ++trace.changes;
      changed = true;
      if (options.record_steps) {
        step.potential_after = SchemePotential(state, scheme, instance);
        step.network_power_after = SumNodePowers(state, instance, scheme.power);
        trace.steps.push_back(step);
      }
      const auto [it, inserted] = seen.emplace(state.profile(), history.size());
      if (!inserted) {
        trace.cycle_witness.assign(history.begin() + static_cast<long>(it->second),
                                   history.end());
        trace.cycle_witness.push_back(state.profile());
        trace.rounds = round;
        trace.outcome = Outcome::kCycleDetected;
        return trace;
      }
      history.push_back(state.profile());
    }
    trace.rounds = round;
    if (!changed) {
      if (options.schedule != Schedule::kRandomSingle ||
          CheckNashEquilibrium(state, scheme, instance).is_equilibrium) {
        trace.outcome = Outcome::kConvergedNE;
        return trace;
      }
    }
  }
  trace.outcome = Outcome::kCapExceeded;
  return trace;
}

NashVerdict CheckNashEquilibrium(const BroadcastTree& tree, const CostScheme& scheme,
                                 const NetworkInstance& instance) {
  for (NodeIndex i : instance.receivers()) {
    const auto response = FindBestResponse(i, tree, scheme, instance);
    if (response) {
      return NashVerdict{false, i, response->parent, response->current_cost,
                         response->cost};
    }
  }
  return NashVerdict{};
}

double Potential(const BroadcastTree& tree, const NetworkInstance& instance,
                 const PowerModel& model) {
  return NetworkPower(tree, instance, model);
}

std::optional<double> SchemePotential(const BroadcastTree& tree,
                                      const CostScheme& scheme,
                                      const NetworkInstance& instance) {
  switch (scheme.kind) {
    case SchemeKind::kMarginal:
      return SumNodePowers(tree, instance, scheme.power);
    case SchemeKind::kEqualShare:
      if (!scheme.power.fixed_transmit_power) return std::nullopt;
      [[fallthrough]];
    case SchemeKind::kShapley: {
      double phi = 0.0;
      for (int j = 0; j < tree.size(); ++j) {
        phi += ShapleyNodePotential(j, tree.children(j), instance, scheme.power);
      }
      return phi;
    }
  }
  return std::nullopt;
}

DeviationDeltas CheckExactPotential(const BroadcastTree& tree, NodeIndex i,
                                    NodeIndex j, const CostScheme& scheme,
                                    const NetworkInstance& instance) {
  if (tree.parent(i) == j) return {};
  const double before = CurrentCost(i, tree, scheme, instance);
  const double after = CostAt(i, j, tree, scheme, instance);
  BroadcastTree moved = tree;
  ApplyAction(moved, i, j, instance);
  return DeviationDeltas{after - before, Potential(moved, instance, scheme.power) -
                                             Potential(tree, instance, scheme.power)};
}

double BudgetBalanceResidual(NodeIndex j, const BroadcastTree& tree,
                             const CostScheme& scheme, const NetworkInstance& instance) {
  const auto& group = tree.children(j);
  if (group.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "node " + std::to_string(instance.id(j)) +
                                                 " serves no children");
  }
  double paid = 0.0;
  for (NodeIndex i : group) paid += ShareCost(scheme, i, j, group, instance);
  return paid - NodePower(j, group, instance, scheme.power);
}

std::string TraceToJsonLines(const GameTrace& trace, const NetworkInstance& instance,
                             const CostScheme& scheme) {
  auto id_or_null = [&](NodeIndex v) -> nlohmann::ordered_json {
    if (v == kNoNode) return nullptr;
    return instance.id(v);
  };
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (!v) return nullptr;
    return *v;
  };
  std::ostringstream out;
  for (const TraceStep& s : trace.steps) {
    nlohmann::ordered_json line;
    line["iteration"] = s.iteration;
    line["round"] = s.round;
    line["node"] = id_or_null(s.node);
    line["old_parent"] = id_or_null(s.old_parent);
    line["new_parent"] = id_or_null(s.new_parent);
    line["cost_before"] = s.cost_before;
    line["cost_after"] = s.cost_after;
    line["potential_before"] = opt(s.potential_before);
    line["potential_after"] = opt(s.potential_after);
    line["network_power_before"] = s.network_power_before;
    line["network_power_after"] = s.network_power_after;
    out << line.dump() << '\n';
  }
  nlohmann::ordered_json summary;
  summary["summary"] = true;
  summary["scheme"] = SchemeName(scheme.kind);
  if (scheme.power.fixed_transmit_power) {
    summary["fixed_transmit_power"] = *scheme.power.fixed_transmit_power;
  }
  summary["outcome"] = OutcomeName(trace.outcome);
  summary["rounds"] = trace.rounds;
  summary["changes"] = trace.changes;
  summary["information_entries"] = trace.information_entries;
  summary["network_power"] = SumNodePowers(trace.final_tree, instance, scheme.power);
  if (!trace.cycle_witness.empty()) {
    nlohmann::ordered_json witness = nlohmann::ordered_json::array();
    for (const ActionProfile& p : trace.cycle_witness) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (NodeIndex v : p) row.push_back(id_or_null(v));
      witness.push_back(std::move(row));
    }
    summary["cycle_witness"] = std::move(witness);
  }
  out << summary.dump() << '\n';
  return out.str();
}

}  // namespace mpbt
