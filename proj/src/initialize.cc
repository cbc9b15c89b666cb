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

#include "mpbt/initialize.h"

#include <algorithm>
#include <random>
#include <string>

#include "mpbt/baselines.h"
#include "mpbt/error.h"

namespace mpbt {

std::string_view InitPolicyName(InitPolicy policy) {
  switch (policy) {
    case InitPolicy::kGreedyJoin: return "greedy-join";
    case InitPolicy::kBipInit: return "bip-init";
    case InitPolicy::kMinPowerPath: return "min-power-path";
  }
  return "?";
}

InitPolicy ParseInitPolicy(std::string_view name) {
  if (name == "greedy-join") return InitPolicy::kGreedyJoin;
  if (name == "bip-init") return InitPolicy::kBipInit;
  if (name == "min-power-path") return InitPolicy::kMinPowerPath;
  throw Error(ErrorCode::kInvalidArgument, "unknown init policy '" + std::string(name) + "'");
}

namespace {

BroadcastTree GreedyJoin(const NetworkInstance& instance, const CostScheme& scheme,
                         std::uint64_t seed) {
  BroadcastTree tree(instance);
  std::vector<NodeIndex> order = instance.receivers();
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t remaining = order.size();
  while (remaining > 0) {
    bool progress = false;
    for (NodeIndex i : order) {
      if (tree.connected(i)) continue;
      NodeIndex best = kNoNode;
      double best_cost = kInfeasible;
      for (NodeIndex j : ActionSet(i, tree, instance, scheme.power)) {
        const double c = CostAt(i, j, tree, scheme, instance);
        if (best == kNoNode || StrictlyBetter(c, best_cost)) {
          best = j;
          best_cost = c;
        }
      }
      if (best == kNoNode) continue;
      ApplyAction(tree, i, best, instance);
      --remaining;
      progress = true;
    }
    if (!progress) {
      throw Error(scheme.power.fixed_transmit_power ? ErrorCode::kDisconnectedAtFixedPower
                                                    : ErrorCode::kDisconnected,
                  std::to_string(remaining) + " receivers cannot reach the source");
    }
  }
  return tree;
}

}  // namespace

BroadcastTree InitializeTree(const NetworkInstance& instance, InitPolicy policy,
                             const CostScheme& scheme, std::uint64_t seed) {
  switch (policy) {
    case InitPolicy::kGreedyJoin:
      return GreedyJoin(instance, scheme, seed);
    case InitPolicy::kBipInit:
      return Bip(instance);
    case InitPolicy::kMinPowerPath:
      return ShortestPathTree(instance);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown init policy");
}

}  // namespace mpbt
