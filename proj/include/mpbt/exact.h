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

// Exact minimum-power broadcast: the flow-based integer program with its
// reachability encoding, tree reconstruction from a solution, and two
// in-process optimum solvers.
//
// Variable naming in exported models (ids are node ids, not indices):
//   t_<i>_<j>  binary, 1 when transmitter j sizes its power to reach i
//   d_<i>_<j>  continuous, flow on link j -> i (nodes downstream of i, i
//              included)
//   y_<i>_<j>  continuous, 1 when i lies within j's emission
#ifndef MPBT_EXACT_H_
#define MPBT_EXACT_H_

#include <map>
#include <string>
#include <vector>

#include "mpbt/lp_format.h"
#include "mpbt/netmodel.h"
#include "mpbt/tree.h"

namespace mpbt {

// Row-major binary matrix over the receivers in increasing index order.
struct ReachabilityMatrix {
  NodeIndex transmitter = kNoNode;
  std::vector<NodeIndex> receivers;
  std::vector<int> entries;

  int dimension() const { return static_cast<int>(receivers.size()); }
  int at(int row, int col) const { return entries[row * dimension() + col]; }
};

// Entry (i, l) is 1 when j, transmitting just loud enough to reach i, also
// reaches l. Rows and columns of j itself are zero.
ReachabilityMatrix BuildReachabilityMatrix(const NetworkInstance& instance,
                                           NodeIndex j);

std::string TVar(const NetworkInstance& instance, NodeIndex i, NodeIndex j);
std::string DVar(const NetworkInstance& instance, NodeIndex i, NodeIndex j);
std::string YVar(const NetworkInstance& instance, NodeIndex i, NodeIndex j);

struct MilpModel {
  LinearProgram program;
  std::vector<ReachabilityMatrix> reach;  // by transmitter index
  int receiver_count = 0;

  int binary_count() const;
};

// Throws Disconnected when some receiver cannot be reached.
MilpModel BuildMilp(const NetworkInstance& instance);

// Throws IoError.
void ExportLp(const MilpModel& model, const std::string& path);

struct MilpSolution {
  std::map<std::string, double> values;  // missing variables read as 0
  double objective = 0.0;

  double value(const std::string& name) const;
};

// Assignment induced by a broadcast tree: each transmitter's t points at
// its most demanding child, d counts the nodes below each link, y follows.
MilpSolution MilpSolutionFromTree(const BroadcastTree& tree,
                                  const NetworkInstance& instance,
                                  const MilpModel& model);

struct FeasibilityReport {
  bool feasible = true;
  double objective = 0.0;
  std::vector<std::string> violations;
};

inline constexpr double kMilpTolerance = 1e-6;

FeasibilityReport CheckMilpFeasibility(const MilpModel& model,
                                       const MilpSolution& solution,
                                       double tolerance = kMilpTolerance);

// Solver output as text. One assignment per line, "name = value" or
// "name value"; blank lines and lines starting with '#' are skipped, except
// that a comment or entry named "objective" sets the objective. Throws
// ParseError or IoError.
MilpSolution ParseSolution(const std::string& text);
MilpSolution ReadSolutionFile(const std::string& path);

// Breadth-first reconstruction from the source over the emission variables
// (y = R^T t): every transmitter reached so far adopts the still uncovered
// nodes inside its emission. Throws InfeasibleSolution when a receiver is
// never covered or a t value is not binary.
BroadcastTree TreeFromMilpSolution(const NetworkInstance& instance,
                                   const MilpModel& model,
                                   const MilpSolution& solution);

// Depth-first branch-and-bound over parent assignments. Throws
// LimitExceeded when there are more than `node_limit` receivers, and
// Disconnected.
BroadcastTree SolveExact(const NetworkInstance& instance, int node_limit = 10);

// Enumerates every parent vector; at most 7 receivers. Throws LimitExceeded
// and Disconnected.
BroadcastTree BruteForceOptimum(const NetworkInstance& instance);

}  // namespace mpbt

#endif  // MPBT_EXACT_H_
