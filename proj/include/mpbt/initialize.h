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

#ifndef MPBT_INITIALIZE_H_
#define MPBT_INITIALIZE_H_

#include <cstdint>
#include <string_view>

#include "mpbt/game.h"
#include "mpbt/netmodel.h"
#include "mpbt/tree.h"

namespace mpbt {

enum class InitPolicy {
  // Unconnected receivers, visited in a seeded order, join the parent that
  // is cheapest for them under the active scheme; passes repeat until
  // everybody is connected.
  kGreedyJoin,
  kBipInit,       // broadcast incremental power tree
  kMinPowerPath,  // shortest-path tree under unicast-power edge weights
};

std::string_view InitPolicyName(InitPolicy policy);
InitPolicy ParseInitPolicy(std::string_view name);

// Complete valid starting tree. Throws Disconnected (or
// DisconnectedAtFixedPower when the scheme fixes the transmit power) if some
// receiver cannot be reached.
BroadcastTree InitializeTree(const NetworkInstance& instance, InitPolicy policy,
                             const CostScheme& scheme = {}, std::uint64_t seed = 1);

}  // namespace mpbt

#endif  // MPBT_INITIALIZE_H_
