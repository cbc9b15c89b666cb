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

#include "mpbt/tree.h"

#include <algorithm>
#include <deque>
#include <ostream>

#include "json.hpp"
#include "mpbt/error.h"

namespace mpbt {

std::size_t ActionProfileHash::operator()(const ActionProfile& profile) const noexcept {
  // FNV-1a over the parent indices.
  std::uint64_t h = 1469598103934665603ULL;
  for (NodeIndex p : profile) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(p));
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

BroadcastTree::BroadcastTree(const NetworkInstance& instance)
    : source_(instance.source()),
      parent_(instance.size(), kNoNode),
      children_(instance.size()),
      route_(instance.size()) {
  route_[source_] = {source_};
}

BroadcastTree BroadcastTree::FromParents(const NetworkInstance& instance,
                                         std::span<const NodeIndex> parents) {
  if (static_cast<int>(parents.size()) != instance.size()) {
    throw Error(ErrorCode::kInvalidArgument, "parent vector has the wrong length");
  }
  BroadcastTree tree(instance);
  for (int i = 0; i < instance.size(); ++i) {
    const NodeIndex p = parents[i];
    if (i == tree.source_ || p == kNoNode) continue;
    if (p < 0 || p >= instance.size() || p == i) {
      throw Error(ErrorCode::kInvalidArgument, "parent index out of range");
    }
    tree.parent_[i] = p;
    tree.children_[p].push_back(i);
  }
  tree.RefreshRoutes(tree.source_);
  return tree;
}

bool BroadcastTree::complete() const {
  return std::all_of(route_.begin(), route_.end(),
                     [](const auto& r) { return !r.empty(); });
}

bool BroadcastTree::on_route(NodeIndex ancestor, NodeIndex node) const {
  const auto& r = route_[node];
  return std::find(r.begin(), r.end(), ancestor) != r.end();
}

std::vector<NodeIndex> BroadcastTree::transmitters() const {
  std::vector<NodeIndex> out;
  for (int j = 0; j < size(); ++j) {
    if (!children_[j].empty()) out.push_back(j);
  }
  return out;
}

void BroadcastTree::Relink(NodeIndex i, NodeIndex j) {
  const NodeIndex old = parent_[i];
  if (old != kNoNode) {
    auto& siblings = children_[old];
    siblings.erase(std::find(siblings.begin(), siblings.end(), i));
  }
  parent_[i] = j;
  auto& kids = children_[j];
  kids.insert(std::upper_bound(kids.begin(), kids.end(), i), i);
  RefreshRoutes(i);
}

void BroadcastTree::RefreshRoutes(NodeIndex root) {
  // Breadth-first over the subtree so every parent route is final before its
  // children extend it. The visited set keeps the walk finite on cyclic maps.
  std::vector<char> seen(parent_.size(), 0);
  std::deque<NodeIndex> queue{root};
  seen[root] = 1;
  while (!queue.empty()) {
    const NodeIndex v = queue.front();
    queue.pop_front();
    if (v == source_) {
      route_[v] = {source_};
    } else if (const NodeIndex p = parent_[v]; p != kNoNode && !route_[p].empty()) {
      route_[v] = route_[p];
      route_[v].push_back(v);
    } else {
      route_[v].clear();
    }
    for (NodeIndex c : children_[v]) {
      if (!seen[c]) {
        seen[c] = 1;
        queue.push_back(c);
      }
    }
  }
}

void ApplyAction(BroadcastTree& tree, NodeIndex i, NodeIndex j,
                 const NetworkInstance& instance) {
  if (i == tree.source()) {
    throw Error(ErrorCode::kInvalidArgument, "the source has no parent");
  }
  if (tree.parent(i) == j) return;
  if (!instance.can_reach(j, i)) {
    throw Error(ErrorCode::kNotNeighbor, std::to_string(instance.id(j)) +
                                             " cannot reach " +
                                             std::to_string(instance.id(i)));
  }
  if (!tree.connected(j)) {
    throw Error(ErrorCode::kParentDisconnected,
                std::to_string(instance.id(j)) + " is not connected to the source");
  }
  if (tree.on_route(i, j)) {
    throw Error(ErrorCode::kCycleWouldForm, std::to_string(instance.id(j)) +
                                                " descends from " +
                                                std::to_string(instance.id(i)));
  }
  tree.Relink(i, j);
}

BroadcastTree RelinkUnchecked(BroadcastTree tree, NodeIndex i, NodeIndex j) {
  ActionProfile parents = tree.parent_;
  parents[i] = j;
  // Rebuild from scratch so cyclic maps get consistent (empty) routes.
  BroadcastTree out(tree);
  out.parent_ = parents;
  for (auto& c : out.children_) c.clear();
  for (int v = 0; v < out.size(); ++v) {
    if (parents[v] != kNoNode) out.children_[parents[v]].push_back(v);
  }
  for (auto& r : out.route_) r.clear();
  out.RefreshRoutes(out.source_);
  return out;
}

std::vector<NodeIndex> Descendants(const BroadcastTree& tree, NodeIndex i) {
  std::vector<NodeIndex> out;
  for (int v = 0; v < tree.size(); ++v) {
    if (v != i && tree.connected(v) && tree.on_route(i, v)) out.push_back(v);
  }
  return out;
}

TreeVerdict ValidateTree(const BroadcastTree& tree,
                         const NetworkInstance& instance) {
  TreeVerdict verdict;
  auto report = [&](bool& flag, std::string msg) {
    flag = false;
    verdict.valid = false;
    verdict.violations.push_back(std::move(msg));
  };
  const int n = tree.size();
  if (n != instance.size()) {
    report(verdict.consistent, "tree and instance sizes differ");
    return verdict;
  }
  const NodeIndex s = tree.source();
  if (tree.parent(s) != kNoNode) report(verdict.consistent, "source has a parent");

  for (int i = 0; i < n; ++i) {
    if (i == s) continue;
    // Walk the parent chain; more than n steps means a cycle.
    NodeIndex v = i;
    int steps = 0;
    while (v != kNoNode && v != s && steps <= n) {
      v = tree.parent(v);
      ++steps;
    }
    if (steps > n) {
      report(verdict.acyclic, "node " + std::to_string(instance.id(i)) + " lies on a cycle");
    } else if (v == kNoNode) {
      report(verdict.complete, "node " + std::to_string(instance.id(i)) + " is not connected");
    }
    const NodeIndex p = tree.parent(i);
    if (p != kNoNode && !instance.can_reach(p, i)) {
      report(verdict.feasible, "edge " + std::to_string(instance.id(p)) + " -> " +
                                   std::to_string(instance.id(i)) +
                                   " exceeds the parent's power budget");
    }
  }
  for (int j = 0; j < n; ++j) {
    for (NodeIndex c : tree.children(j)) {
      if (tree.parent(c) != j) {
        report(verdict.consistent, "child set of " + std::to_string(instance.id(j)) +
                                       " disagrees with parent map");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    const NodeIndex p = tree.parent(i);
    if (p != kNoNode) {
      const auto& kids = tree.children(p);
      if (!std::binary_search(kids.begin(), kids.end(), i)) {
        report(verdict.consistent, "node " + std::to_string(instance.id(i)) +
                                       " missing from its parent's child set");
      }
    }
    // Independent route walk must agree with the stored route.
    if (verdict.acyclic) {
      std::vector<NodeIndex> walk;
      NodeIndex v = i;
      while (v != kNoNode) {
        walk.push_back(v);
        if (v == s) break;
        v = tree.parent(v);
      }
      std::reverse(walk.begin(), walk.end());
      const bool reaches = !walk.empty() && walk.front() == s;
      if (reaches && walk != tree.route(i)) {
        report(verdict.consistent,
               "route of " + std::to_string(instance.id(i)) + " is stale");
      }
    }
  }
  return verdict;
}

std::vector<double> NodePowers(const BroadcastTree& tree,
                               const NetworkInstance& instance,
                               const PowerModel& model) {
  std::vector<double> powers(tree.size(), 0.0);
  for (int j = 0; j < tree.size(); ++j) {
    powers[j] = NodePower(j, tree.children(j), instance, model);
  }
  return powers;
}

double NetworkPower(const BroadcastTree& tree, const NetworkInstance& instance,
                    const PowerModel& model) {
  const TreeVerdict verdict = ValidateTree(tree, instance);
  if (!verdict.valid) {
    throw Error(ErrorCode::kInvalidTree, verdict.violations.front());
  }
  double total = 0.0;
  try {
    for (double p : NodePowers(tree, instance, model)) total += p;
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidTree, e.what());
  }
  return total;
}

std::string TreeToJson(const BroadcastTree& tree, const NetworkInstance& instance,
                       const PowerModel& model) {
  nlohmann::ordered_json doc;
  doc["source"] = instance.id(tree.source());
  nlohmann::ordered_json parents = nlohmann::ordered_json::array();
  const std::vector<double> powers = NodePowers(tree, instance, model);
  double total = 0.0;
  for (int i = 0; i < tree.size(); ++i) {
    nlohmann::ordered_json rec;
    rec["id"] = instance.id(i);
    if (tree.parent(i) == kNoNode) {
      rec["parent"] = nullptr;
    } else {
      rec["parent"] = instance.id(tree.parent(i));
    }
    rec["node_power"] = powers[i];
    parents.push_back(std::move(rec));
    total += powers[i];
  }
  doc["nodes"] = std::move(parents);
  doc["network_power"] = total;
  doc["transmitters"] = tree.transmitters().size();
  if (model.fixed_transmit_power) {
    doc["fixed_transmit_power"] = *model.fixed_transmit_power;
  }
  return doc.dump(2);
}

BroadcastTree TreeFromJson(const std::string& text, const NetworkInstance& instance) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  ActionProfile parents(instance.size(), kNoNode);
  try {
    for (const auto& rec : doc.at("nodes")) {
      const auto child = instance.index_of(rec.at("id").get<int>());
      if (!child) throw Error(ErrorCode::kParseError, "unknown node id");
      if (!rec.at("parent").is_null()) {
        const auto p = instance.index_of(rec.at("parent").get<int>());
        if (!p) throw Error(ErrorCode::kParseError, "unknown parent id");
        parents[*child] = *p;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return BroadcastTree::FromParents(instance, parents);
}

void WriteDot(std::ostream& out, const BroadcastTree& tree,
              const NetworkInstance& instance) {
  out << "digraph broadcast_tree {\n";
  for (int i = 0; i < tree.size(); ++i) {
    const auto& pos = instance.node(i).position;
    out << "  n" << instance.id(i) << " [label=\"" << instance.id(i) << "\""
        << (i == tree.source() ? ", shape=doublecircle" : "") << ", pos=\""
        << pos.x << "," << pos.y << "!\"];\n";
  }
  for (int i = 0; i < tree.size(); ++i) {
    const NodeIndex p = tree.parent(i);
    if (p == kNoNode) continue;
    out << "  n" << instance.id(p) << " -> n" << instance.id(i) << " [label=\""
        << instance.required_power(i, p) << "\"];\n";
  }
  out << "}\n";
}

}  // namespace mpbt
