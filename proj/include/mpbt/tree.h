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

// Broadcast-tree state: parent assignments, child sets and source routes.

#ifndef MPBT_TREE_H_
#define MPBT_TREE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mpbt/netmodel.h"

namespace mpbt {

// Parent of every node by index; kNoNode for the source and for receivers
// that have not chosen a parent.
using ActionProfile = std::vector<NodeIndex>;

struct ActionProfileHash {
  std::size_t operator()(const ActionProfile& profile) const noexcept;
};

class BroadcastTree {
 public:
  // Tree holding only the source.
  explicit BroadcastTree(const NetworkInstance& instance);

  // Tree from a raw parent vector. No feasibility checks; nodes whose parent
  // chain does not reach the source (including cycles) stay disconnected.
  static BroadcastTree FromParents(const NetworkInstance& instance,
                                   std::span<const NodeIndex> parents);

  int size() const { return static_cast<int>(parent_.size()); }
  NodeIndex source() const { return source_; }
  NodeIndex parent(NodeIndex i) const { return parent_[i]; }
  // Sorted child set M_j.
  const std::vector<NodeIndex>& children(NodeIndex j) const { return children_[j]; }
  // Nodes from the source down to i, source first. Empty when i is not
  // connected to the source.
  const std::vector<NodeIndex>& route(NodeIndex i) const { return route_[i]; }
  bool connected(NodeIndex i) const { return !route_[i].empty(); }
  bool complete() const;
  // True when `ancestor` lies on the route of `node` (node itself included).
  bool on_route(NodeIndex ancestor, NodeIndex node) const;

  // Nodes with a nonempty child set.
  std::vector<NodeIndex> transmitters() const;
  const ActionProfile& profile() const { return parent_; }

  bool operator==(const BroadcastTree& other) const {
    return parent_ == other.parent_;
  }

 private:
  friend void ApplyAction(BroadcastTree& tree, NodeIndex i, NodeIndex j,
                          const NetworkInstance& instance);
  friend BroadcastTree RelinkUnchecked(BroadcastTree tree, NodeIndex i,
                                       NodeIndex j);

  void Relink(NodeIndex i, NodeIndex j);
  void RefreshRoutes(NodeIndex root);

  NodeIndex source_;
  ActionProfile parent_;
  std::vector<std::vector<NodeIndex>> children_;
  std::vector<std::vector<NodeIndex>> route_;
};

// Makes j the parent of i and recomputes the routes in i's subtree. Throws
// NotNeighbor (j cannot reach i), ParentDisconnected (j not connected to the
// source) or CycleWouldForm (j lies in i's subtree). Re-selecting the
// current parent is a no-op.
void ApplyAction(BroadcastTree& tree, NodeIndex i, NodeIndex j,
                 const NetworkInstance& instance);

// Relinks without any check; for building deliberately broken trees.
BroadcastTree RelinkUnchecked(BroadcastTree tree, NodeIndex i, NodeIndex j);

// All nodes whose route contains i, excluding i.
std::vector<NodeIndex> Descendants(const BroadcastTree& tree, NodeIndex i);

struct TreeVerdict {
  bool valid = true;
  bool complete = true;
  bool acyclic = true;
  bool feasible = true;
  bool consistent = true;
  std::vector<std::string> violations;
};

TreeVerdict ValidateTree(const BroadcastTree& tree,
                         const NetworkInstance& instance);

// Sum of node powers over all nodes. Throws InvalidTree unless the tree is
// valid (for `model`'s link set).
double NetworkPower(const BroadcastTree& tree, const NetworkInstance& instance,
                    const PowerModel& model = {});

// Per-node power by index.
std::vector<double> NodePowers(const BroadcastTree& tree,
                               const NetworkInstance& instance,
                               const PowerModel& model = {});

// JSON document with the parent map and derived metrics.
std::string TreeToJson(const BroadcastTree& tree, const NetworkInstance& instance,
                       const PowerModel& model = {});
BroadcastTree TreeFromJson(const std::string& text,
                           const NetworkInstance& instance);

// Graphviz rendering; edges labelled with the unicast power.
void WriteDot(std::ostream& out, const BroadcastTree& tree,
              const NetworkInstance& instance);

}  // namespace mpbt

#endif  // MPBT_TREE_H_
