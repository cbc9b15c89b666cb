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

// Reference heuristics for minimum-power broadcast: BIP, the BIP sweep pass,
// BDP and GBBTC. Like their published versions they size trees by radiated
// power only unless asked to account for circuitry.

#ifndef MPBT_BASELINES_H_
#define MPBT_BASELINES_H_

#include <cstdint>

#include "mpbt/game.h"
#include "mpbt/netmodel.h"
#include "mpbt/tree.h"

namespace mpbt {

struct BaselineOptions {
  // Charge p_c when a node starts transmitting.
  bool circuitry_aware = false;
};

// Broadcast incremental power: grow from the source, each step adding the
// uncovered node with the smallest incremental power at some connected
// transmitter. Ties go to the lowest (transmitter, node) pair.
BroadcastTree Bip(const NetworkInstance& instance, const BaselineOptions& options = {});

// Reassigns nodes already inside a stronger transmitter's emission to it,
// strongest transmitters first, until no move is possible. Never raises any
// node's power. `moves` receives the number of reassignments.
BroadcastTree Sweep(BroadcastTree tree, const NetworkInstance& instance,
                    long* moves = nullptr);

// Bellman-Ford minimum-power routes (edge weight p_uni, plus p_c when
// circuitry-aware). Throws Disconnected.
BroadcastTree ShortestPathTree(const NetworkInstance& instance,
                               const BaselineOptions& options = {});

struct BaselineRun {
  BroadcastTree tree;
  long iterations = 0;
  bool converged = true;
};

// Broadcast decremental power: shortest-path start, then nodes switch
// parents while that strictly lowers the transmit power they impose.
BaselineRun Bdp(const NetworkInstance& instance, const BaselineOptions& options = {});

// Equal-share game at one fixed transmit power, circuitry ignored. Throws
// DisconnectedAtFixedPower when the fixed-power graph does not span.
GameTrace Gbbtc(const NetworkInstance& instance, double fixed_power,
                const BrdOptions& options = {});

// Scheme GBBTC plays.
CostScheme GbbtcScheme(double fixed_power);

}  // namespace mpbt

#endif  // MPBT_BASELINES_H_
