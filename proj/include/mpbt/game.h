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

// Non-cooperative cost-sharing game over broadcast trees: every receiver
// picks a parent, pays a share of that parent's power, and best-responds
// until nobody can lower its cost.

#ifndef MPBT_GAME_H_
#define MPBT_GAME_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mpbt/netmodel.h"
#include "mpbt/tree.h"

namespace mpbt {

enum class SchemeKind {
  kMarginal,    // MC: the extra power the child imposes on its parent
  kShapley,     // SV: prefix-sum Shapley value of the max-rule cost
  kEqualShare,  // ES: parent power split evenly
};

std::string_view SchemeName(SchemeKind kind);
SchemeKind ParseScheme(std::string_view name);

struct CostScheme {
  SchemeKind kind = SchemeKind::kMarginal;
  // Fixed transmit power and circuitry accounting. A fixed power turns the
  // game into its fixed-power variant; dropping circuitry reproduces
  // benchmarks that only account for radiated power.
  PowerModel power;

  static CostScheme Marginal() { return {SchemeKind::kMarginal, {}}; }
  static CostScheme Shapley() { return {SchemeKind::kShapley, {}}; }
  static CostScheme EqualShare() { return {SchemeKind::kEqualShare, {}}; }

  bool budget_balanced() const { return kind != SchemeKind::kMarginal; }
};

// Throws InvalidArgument when the fixed power is not positive.
void Validate(const CostScheme& scheme);

// Cost of child i served by j together with the rest of `group`, which must
// contain i. Throws NotAChild if i is not in the group.
double ShareCost(const CostScheme& scheme, NodeIndex i, NodeIndex j,
                 std::span<const NodeIndex> group,
                 const NetworkInstance& instance);

// Cost i pays now (at its current parent).
double CurrentCost(NodeIndex i, const BroadcastTree& tree,
                   const CostScheme& scheme, const NetworkInstance& instance);

// Cost i would pay after switching to j, all other choices fixed.
double CostAt(NodeIndex i, NodeIndex j, const BroadcastTree& tree,
              const CostScheme& scheme, const NetworkInstance& instance);

// Neighbors of i that are connected to the source and not in i's subtree.
std::vector<NodeIndex> ActionSet(NodeIndex i, const BroadcastTree& tree,
                                 const NetworkInstance& instance,
                                 const PowerModel& model = {});

// Entries a node must learn about a parent to evaluate its cost there:
// 1 for ES (group size), 2 for MC (two largest demands), |M_j| for SV.
int InformationEntries(SchemeKind kind, std::size_t group_size);

inline constexpr double kImprovementTolerance = 1e-12;

// True when `candidate` beats `current` by more than the strict-improvement
// threshold 1e-12 * max(1, |current|).
bool StrictlyBetter(double candidate, double current);

struct BestResponse {
  NodeIndex parent = kNoNode;
  double cost = 0.0;
  double current_cost = 0.0;
};

// Cheapest parent for i. Returns a value only on a strict improvement over
// the current cost; ties keep the current parent, then favour the lowest
// index. Throws EmptyActionSet when i has no available parent.
std::optional<BestResponse> FindBestResponse(NodeIndex i,
                                             const BroadcastTree& tree,
                                             const CostScheme& scheme,
                                             const NetworkInstance& instance,
                                             long* information = nullptr);

enum class Schedule {
  kRandomPermutation,  // every round visits all receivers in a fresh order
  kRoundRobin,         // every round visits receivers by increasing index
  kRandomSingle,       // every round draws |W| receivers with replacement
};

std::string_view ScheduleName(Schedule schedule);
Schedule ParseSchedule(std::string_view name);

struct BrdOptions {
  Schedule schedule = Schedule::kRandomPermutation;
  std::uint64_t seed = 1;
  int round_cap = 1000;
  bool record_steps = true;
};

enum class Outcome { kConvergedNE, kCycleDetected, kCapExceeded };
std::string_view OutcomeName(Outcome outcome);

struct TraceStep {
  long iteration = 0;  // index of the committed change, from 0
  int round = 0;
  NodeIndex node = kNoNode;
  NodeIndex old_parent = kNoNode;
  NodeIndex new_parent = kNoNode;
  double cost_before = 0.0;
  double cost_after = 0.0;
  // Scheme potential (see SchemePotential); empty where none exists.
  std::optional<double> potential_before;
  std::optional<double> potential_after;
  double network_power_before = 0.0;
  double network_power_after = 0.0;
};

struct GameTrace {
  std::vector<TraceStep> steps;
  Outcome outcome = Outcome::kCapExceeded;
  int rounds = 0;
  long changes = 0;  // committed action changes
  long information_entries = 0;
  // On CycleDetected: profiles from the first occurrence of the repeated
  // profile up to and including its recurrence.
  std::vector<ActionProfile> cycle_witness;
  BroadcastTree final_tree;
};

// Best-response dynamics from a complete valid tree.
GameTrace RunBestResponseDynamics(BroadcastTree tree, const CostScheme& scheme,
                                  const NetworkInstance& instance,
                                  const BrdOptions& options = {});

struct NashVerdict {
  bool is_equilibrium = true;
  // Improving deviation when not an equilibrium.
  NodeIndex node = kNoNode;
  NodeIndex target = kNoNode;
  double current_cost = 0.0;
  double deviation_cost = 0.0;
};

// Exhaustive unilateral-deviation check.
NashVerdict CheckNashEquilibrium(const BroadcastTree& tree,
                                 const CostScheme& scheme,
                                 const NetworkInstance& instance);

// Network power under the scheme's power regime; the exact potential of the
// MC game.
double Potential(const BroadcastTree& tree, const NetworkInstance& instance,
                 const PowerModel& model = {});

// Exact potential of the scheme's game: the network power for MC, the
// Hart-Mas-Colell potential sum_j sum_n (P_n - P_{n-1}) H(|M_j| + 1 - n) for
// SV, and the same expression for ES with a fixed transmit power (where ES
// equals SV). Empty for power-controlled ES, which has none.
std::optional<double> SchemePotential(const BroadcastTree& tree,
                                      const CostScheme& scheme,
                                      const NetworkInstance& instance);

struct DeviationDeltas {
  double delta_cost = 0.0;       // change in the mover's cost
  double delta_potential = 0.0;  // change in network power
};

// Deltas for i switching to j, without committing the switch.
DeviationDeltas CheckExactPotential(const BroadcastTree& tree, NodeIndex i,
                                    NodeIndex j, const CostScheme& scheme,
                                    const NetworkInstance& instance);

// Sum of the children's costs minus the parent's power.
double BudgetBalanceResidual(NodeIndex j, const BroadcastTree& tree,
                             const CostScheme& scheme,
                             const NetworkInstance& instance);

// One JSON object per step, then a summary object.
std::string TraceToJsonLines(const GameTrace& trace,
                             const NetworkInstance& instance,
                             const CostScheme& scheme);

}  // namespace mpbt

#endif  // MPBT_GAME_H_
