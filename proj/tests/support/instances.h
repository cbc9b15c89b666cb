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

// Hand-built instances and independent reference computations shared by the
// unit and acceptance tests. Nothing here calls the library's power or cost
// code; the references are written from the model definitions directly.
#ifndef MPBT_TESTS_SUPPORT_INSTANCES_H_
#define MPBT_TESTS_SUPPORT_INSTANCES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mpbt/netmodel.h"
#include "mpbt/tree.h"

namespace mpbt::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Abstract instance from an explicit symmetric or directed link table.
// `links` maps (child id, parent id) to the required power.
inline NetworkInstance AbstractInstance(const std::vector<int>& ids, int source,
                                        const std::map<std::pair<int, int>, double>& links,
                                        double p_c, double p_max) {
  std::vector<NodeParams> nodes;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    nodes.push_back(NodeParams{ids[k], {static_cast<double>(k), 0.0}, p_max, p_c, 0.5});
  }
  const std::size_t n = ids.size();
  std::vector<double> req(n * n, kInf);
  auto pos = [&](int id) {
    return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
  };
  for (const auto& [key, p] : links) req[pos(key.first) * n + pos(key.second)] = p;
  return NetworkInstance::FromRequiredPowers(nodes, source, req);
}

// Ids used by the two-group deviation example.
enum DeviationId { kS = 0, kJ = 1, kK = 2, kI = 3, kL = 4, kM = 5 };

// Source S feeds relays j and k. j serves i (6) and l (5); k serves m (1)
// and could serve i at 3. No circuitry power.
inline NetworkInstance DeviationInstance() {
  return AbstractInstance({kS, kJ, kK, kI, kL, kM}, kS,
                          {{{kJ, kS}, 2.0},
                           {{kK, kS}, 2.0},
                           {{kI, kJ}, 6.0},
                           {{kL, kJ}, 5.0},
                           {{kM, kK}, 1.0},
                           {{kI, kK}, 3.0}},
                          0.0, 100.0);
}

inline BroadcastTree DeviationStart(const NetworkInstance& inst) {
  ActionProfile parents(inst.size(), kNoNode);
  parents[kJ] = kS;
  parents[kK] = kS;
  parents[kI] = kJ;
  parents[kL] = kJ;
  parents[kM] = kK;
  return BroadcastTree::FromParents(inst, parents);
}

// Five-node toy instance for the integer program (source 0, receivers 1-4).
inline NetworkInstance ToyMilpInstance() {
  const std::vector<std::pair<std::pair<int, int>, double>> sym = {
      {{0, 1}, 2.0}, {{0, 2}, 1.0}, {{0, 3}, 3.0}, {{0, 4}, 12.0}, {{1, 2}, 4.0},
      {{1, 3}, 4.0}, {{1, 4}, 5.0}, {{2, 3}, 1.0}, {{2, 4}, 2.0},  {{3, 4}, 1.5}};
  std::map<std::pair<int, int>, double> links;
  for (const auto& [ab, p] : sym) {
    links[{ab.first, ab.second}] = p;
    links[{ab.second, ab.first}] = p;
  }
  return AbstractInstance({0, 1, 2, 3, 4}, 0, links, 0.5, 10.0);
}

// Network power of a parent vector computed from the required powers only.
// Returns +inf for invalid vectors.
inline double ReferencePower(const NetworkInstance& inst, const ActionProfile& parents,
                             bool circuitry = true) {
  const int n = inst.size();
  std::vector<double> demand(n, -1.0);
  for (int i = 0; i < n; ++i) {
    if (i == inst.source()) continue;
    const int p = parents[i];
    if (p < 0 || p == i) return kInf;
    const double req = inst.required_power(i, p);
    if (!(req <= inst.node(p).p_max)) return kInf;
    // Walk to the source.
    int v = i, steps = 0;
    while (v != inst.source() && steps <= n) {
      v = parents[v];
      if (v < 0) return kInf;
      ++steps;
    }
    if (v != inst.source()) return kInf;
    demand[p] = std::max(demand[p], req);
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    if (demand[j] >= 0) total += (circuitry ? inst.node(j).p_c : 0.0) + demand[j];
  }
  return total;
}

// Shapley value of child `who` in the max-rule cost game
// c(A) = p_c + max_{a in A} p_a (0 for the empty set), by averaging marginal
// contributions over every ordering.
inline double ReferenceShapley(const std::vector<double>& demands, double p_c, std::size_t who) {
  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), 0);
  double total = 0.0;
  long count = 0;
  do {
    double current = -1.0;
    for (std::size_t k : order) {
      if (k == who) {
        const double before = current < 0 ? 0.0 : p_c + current;
        const double after = p_c + std::max(current, demands[k]);
        total += after - before;
        break;
      }
      current = std::max(current, demands[k]);
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return total / static_cast<double>(count);
}

// Dijkstra over unicast-power edge weights; returns distances from the
// source.
inline std::vector<double> DijkstraDistances(const NetworkInstance& inst) {
  const int n = inst.size();
  std::vector<double> dist(n, kInf);
  dist[inst.source()] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.push({0.0, inst.source()});
  while (!queue.empty()) {
    const auto [d, j] = queue.top();
    queue.pop();
    if (d > dist[j]) continue;
    for (int i = 0; i < n; ++i) {
      if (i == j || i == inst.source()) continue;
      const double w = inst.required_power(i, j);
      if (!(w <= inst.node(j).p_max)) continue;
      if (d + w < dist[i]) {
        dist[i] = d + w;
        queue.push({dist[i], i});
      }
    }
  }
  return dist;
}

// Connected geometric instance: redraws until every receiver is reachable.
inline NetworkInstance ConnectedRandomInstance(int node_count, std::uint64_t seed,
                                               double area_side = 250.0) {
  RandomInstanceParams params;
  params.node_count = node_count;
  params.area_side = area_side;
  std::mt19937_64 rng(seed);
  while (true) {
    NetworkInstance inst = GenerateRandomInstance(params, rng());
    if (inst.connected()) return inst;
  }
}

// Uniformly random valid parent vector grown from the source.
inline ActionProfile RandomTreeProfile(const NetworkInstance& inst, std::mt19937_64& rng) {
  ActionProfile parents(inst.size(), kNoNode);
  std::vector<char> in_tree(inst.size(), 0);
  in_tree[inst.source()] = 1;
  int remaining = inst.receiver_count();
  while (remaining > 0) {
    std::vector<std::pair<int, int>> links;
    for (int j = 0; j < inst.size(); ++j) {
      if (!in_tree[j]) continue;
      for (int i : inst.coverage(j)) {
        if (!in_tree[i]) links.push_back({i, j});
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, links.size() - 1);
    const auto [i, j] = links[pick(rng)];
    parents[i] = j;
    in_tree[i] = 1;
    --remaining;
  }
  return parents;
}

}  // namespace mpbt::testing

#endif  // MPBT_TESTS_SUPPORT_INSTANCES_H_
