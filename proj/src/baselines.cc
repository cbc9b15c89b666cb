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

#include "mpbt/baselines.h"

#include <algorithm>
#include <string>
#include <tuple>

#include "mpbt/error.h"
#include "mpbt/initialize.h"

namespace mpbt {

BroadcastTree Bip(const NetworkInstance& instance, const BaselineOptions& options) {
  BroadcastTree tree(instance);
  std::vector<double> tx(instance.size(), 0.0);
  int remaining = instance.receiver_count();
  while (remaining > 0) {
    NodeIndex best_parent = kNoNode;
    NodeIndex best_child = kNoNode;
    double best_increment = kInfeasible;
    for (NodeIndex j = 0; j < instance.size(); ++j) {
      if (!tree.connected(j)) continue;
      for (NodeIndex u : instance.coverage(j)) {
        if (tree.connected(u)) continue;
        const double p = instance.unicast_power(u, j);
        double increment = std::max(0.0, p - tx[j]);
        if (options.circuitry_aware && tree.children(j).empty()) {
          increment += instance.node(j).p_c;
        }
        if (increment < best_increment) {
          best_increment = increment;
          best_parent = j;
          best_child = u;
        }
      }
    }
    if (best_parent == kNoNode) {
      throw Error(ErrorCode::kDisconnected,
                  std::to_string(remaining) + " receivers cannot reach the source");
    }
    ApplyAction(tree, best_child, best_parent, instance);
    tx[best_parent] = std::max(tx[best_parent], instance.unicast_power(best_child, best_parent));
    --remaining;
  }
  return tree;
}

namespace {

double TxPower(const BroadcastTree& tree, const NetworkInstance& instance, NodeIndex j) {
  double tx = 0.0;
  for (NodeIndex c : tree.children(j)) tx = std::max(tx, instance.unicast_power(c, j));
  return tx;
}

}  // namespace

BroadcastTree Sweep(BroadcastTree tree, const NetworkInstance& instance, long* moves) {
  long count = 0;
  std::vector<double> tx(instance.size(), 0.0);
  for (NodeIndex j = 0; j < instance.size(); ++j) tx[j] = TxPower(tree, instance, j);
  // A node only moves to a transmitter ranked strictly above its current
  // parent by (power desc, index asc); with powers never increasing this
  // terminates.
  auto ranks_above = [&](NodeIndex a, NodeIndex b) {
    return std::make_tuple(-tx[a], a) < std::make_tuple(-tx[b], b);
  };
  for (;;) {
    std::vector<NodeIndex> order;
    for (NodeIndex j = 0; j < instance.size(); ++j) {
      if (tx[j] > 0.0) order.push_back(j);
    }
    std::sort(order.begin(), order.end(), ranks_above);
    bool moved = false;
    for (NodeIndex t : order) {
      if (tree.children(t).empty()) continue;
      for (NodeIndex c : instance.coverage(t)) {
        const NodeIndex old = tree.parent(c);
        if (old == t || instance.unicast_power(c, t) > tx[t]) continue;
        if (!ranks_above(t, old) || tree.on_route(c, t)) continue;
        ApplyAction(tree, c, t, instance);
        tx[old] = TxPower(tree, instance, old);
        ++count;
        moved = true;
      }
    }
    if (!moved) break;
  }
  if (moves) *moves = count;
  return tree;
}

BroadcastTree ShortestPathTree(const NetworkInstance& instance,
                               const BaselineOptions& options) {
  const int n = instance.size();
  std::vector<double> dist(n, kInfeasible);
  std::vector<NodeIndex> parent(n, kNoNode);
  dist[instance.source()] = 0.0;
  for (int pass = 0; pass < n - 1; ++pass) {
    bool relaxed = false;
    for (NodeIndex j = 0; j < n; ++j) {
      if (dist[j] == kInfeasible) continue;
      for (NodeIndex i : instance.coverage(j)) {
        double w = instance.unicast_power(i, j);
        if (options.circuitry_aware) w += instance.node(j).p_c;
        if (dist[j] + w < dist[i]) {
          dist[i] = dist[j] + w;
          parent[i] = j;
          relaxed = true;
        }
      }
    }
    if (!relaxed) break;
  }
  for (NodeIndex i = 0; i < n; ++i) {
    if (dist[i] == kInfeasible) {
      throw Error(ErrorCode::kDisconnected,
                  "node " + std::to_string(instance.id(i)) + " cannot reach the source");
    }
  }
  return BroadcastTree::FromParents(instance, parent);
}

BaselineRun Bdp(const NetworkInstance& instance, const BaselineOptions& options) {
  BroadcastTree start = ShortestPathTree(instance, options);
  CostScheme scheme = CostScheme::Marginal();
  scheme.power.include_circuitry = options.circuitry_aware;
  BrdOptions brd;
  brd.schedule = Schedule::kRoundRobin;
  brd.record_steps = false;
  GameTrace trace = RunBestResponseDynamics(std::move(start), scheme, instance, brd);
  return BaselineRun{std::move(trace.final_tree),
                     instance.receiver_count() + trace.changes,
                     trace.outcome == Outcome::kConvergedNE};
}

CostScheme GbbtcScheme(double fixed_power) {
  CostScheme scheme = CostScheme::EqualShare();
  scheme.power = PowerModel::Fixed(fixed_power, /*include_circuitry=*/false);
  return scheme;
}

GameTrace Gbbtc(const NetworkInstance& instance, double fixed_power,
                const BrdOptions& options) {
  const CostScheme scheme = GbbtcScheme(fixed_power);
  Validate(scheme);
  if (!instance.connected(scheme.power)) {
    throw Error(ErrorCode::kDisconnectedAtFixedPower,
                "links within " + std::to_string(fixed_power) + " W do not span the network");
  }
  BroadcastTree start = InitializeTree(instance, InitPolicy::kGreedyJoin, scheme, options.seed);
  return RunBestResponseDynamics(std::move(start), scheme, instance, options);
}

}  // namespace mpbt
