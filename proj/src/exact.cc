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

#include "mpbt/exact.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "mpbt/baselines.h"
#include "mpbt/error.h"

namespace mpbt {

namespace {

void RequireConnected(const NetworkInstance& instance) {
  if (!instance.connected()) {
    throw Error(ErrorCode::kDisconnected, "some receiver is unreachable from the source");
  }
}

std::string Var(char prefix, const NetworkInstance& instance, NodeIndex i, NodeIndex j) {
  return std::string(1, prefix) + "_" + std::to_string(instance.id(i)) + "_" +
         std::to_string(instance.id(j));
}

}  // namespace

ReachabilityMatrix BuildReachabilityMatrix(const NetworkInstance& instance, NodeIndex j) {
  ReachabilityMatrix r;
  r.transmitter = j;
  r.receivers = instance.receivers();
  const int n = r.dimension();
  r.entries.assign(static_cast<std::size_t>(n) * n, 0);
  for (int row = 0; row < n; ++row) {
    const NodeIndex i = r.receivers[row];
    if (i == j || !instance.can_reach(j, i)) continue;
    const double reach = instance.unicast_power(i, j);
    for (int col = 0; col < n; ++col) {
      const NodeIndex l = r.receivers[col];
      if (l == j) continue;
      if (instance.unicast_power(l, j) <= reach) r.entries[row * n + col] = 1;
    }
  }
  return r;
}

std::string TVar(const NetworkInstance& instance, NodeIndex i, NodeIndex j) {
  return Var('t', instance, i, j);
}
std::string DVar(const NetworkInstance& instance, NodeIndex i, NodeIndex j) {
  return Var('d', instance, i, j);
}
std::string YVar(const NetworkInstance& instance, NodeIndex i, NodeIndex j) {
  return Var('y', instance, i, j);
}

int MilpModel::binary_count() const {
  return static_cast<int>(std::count_if(
      program.variables.begin(), program.variables.end(),
      [](const Variable& v) { return v.type == VariableType::kBinary; }));
}

MilpModel BuildMilp(const NetworkInstance& instance) {
  RequireConnected(instance);
  MilpModel model;
  model.receiver_count = instance.receiver_count();
  const double n = model.receiver_count;
  const NodeIndex s = instance.source();
  const std::vector<NodeIndex> w = instance.receivers();
  LinearProgram& lp = model.program;

  for (NodeIndex j = 0; j < instance.size(); ++j) {
    model.reach.push_back(BuildReachabilityMatrix(instance, j));
  }

  // Transmitters in index order; the source is no different from a relay
  // except for its flow balance.
  for (NodeIndex j = 0; j < instance.size(); ++j) {
    for (NodeIndex i : w) {
      if (i == j) continue;
      Variable t{TVar(instance, i, j), VariableType::kBinary, 0.0, 1.0, true};
      if (!instance.can_reach(j, i)) t.upper = 0.0;
      lp.variables.push_back(t);
      if (instance.can_reach(j, i)) {
        lp.objective.push_back({t.name, instance.node(j).p_c + instance.unicast_power(i, j)});
      }
    }
  }
  for (NodeIndex j = 0; j < instance.size(); ++j) {
    for (NodeIndex i : w) {
      if (i != j) lp.variables.push_back({DVar(instance, i, j)});
    }
  }
  for (NodeIndex j = 0; j < instance.size(); ++j) {
    for (NodeIndex i : w) {
      if (i != j) lp.variables.push_back({YVar(instance, i, j)});
    }
  }

  auto name_of = [&](const char* block, NodeIndex j) {
    return std::string(block) + "_" + std::to_string(instance.id(j));
  };

  // (a) the source transmits once; relays at most once.
  for (NodeIndex j = 0; j < instance.size(); ++j) {
    LinearConstraint c{name_of("tx", j), {}, j == s ? Sense::kEqual : Sense::kLessEqual, 1.0};
    for (NodeIndex i : w) {
      if (i != j) c.terms.push_back({TVar(instance, i, j), 1.0});
    }
    lp.constraints.push_back(std::move(c));
  }
  // (b) flow: the source emits N units, every receiver keeps one.
  for (NodeIndex j = 0; j < instance.size(); ++j) {
    LinearConstraint c{name_of("flow", j), {}, Sense::kEqual, j == s ? n : -1.0};
    for (NodeIndex i : w) {
      if (i != j) c.terms.push_back({DVar(instance, i, j), 1.0});
    }
    if (j != s) {
      for (NodeIndex l = 0; l < instance.size(); ++l) {
        if (l != j) c.terms.push_back({DVar(instance, j, l), -1.0});
      }
    }
    lp.constraints.push_back(std::move(c));
  }
  // (c) emission vector y_j = R_j^T t_j.
  for (NodeIndex j = 0; j < instance.size(); ++j) {
    const ReachabilityMatrix& r = model.reach[j];
    for (int col = 0; col < r.dimension(); ++col) {
      const NodeIndex l = r.receivers[col];
      if (l == j) continue;
      LinearConstraint c{"emit_" + std::to_string(instance.id(l)) + "_" +
                             std::to_string(instance.id(j)),
                         {{YVar(instance, l, j), 1.0}}, Sense::kEqual, 0.0};
      for (int row = 0; row < r.dimension(); ++row) {
        if (r.at(row, col)) c.terms.push_back({TVar(instance, r.receivers[row], j), -1.0});
      }
      lp.constraints.push_back(std::move(c));
    }
  }
  // (d) flow only on links inside an emission.
  for (NodeIndex j = 0; j < instance.size(); ++j) {
    for (NodeIndex i : w) {
      if (i == j) continue;
      lp.constraints.push_back({"link_" + std::to_string(instance.id(i)) + "_" +
                                    std::to_string(instance.id(j)),
                                {{DVar(instance, i, j), 1.0}, {YVar(instance, i, j), -n}},
                                Sense::kLessEqual,
                                0.0});
    }
  }
  return model;
}

void ExportLp(const MilpModel& model, const std::string& path) {
  WriteLpFile(path, model.program);
}

double MilpSolution::value(const std::string& name) const {
  const auto it = values.find(name);
  return it == values.end() ? 0.0 : it->second;
}

MilpSolution MilpSolutionFromTree(const BroadcastTree& tree, const NetworkInstance& instance,
                                  const MilpModel& model) {
  const TreeVerdict verdict = ValidateTree(tree, instance);
  if (!verdict.valid) throw Error(ErrorCode::kInvalidTree, verdict.violations.front());
  MilpSolution sol;
  for (const Variable& v : model.program.variables) sol.values[v.name] = 0.0;
  for (NodeIndex j = 0; j < instance.size(); ++j) {
    const std::vector<NodeIndex>& kids = tree.children(j);
    if (kids.empty()) continue;
    NodeIndex far = kids.front();
    for (NodeIndex i : kids) {
      if (instance.unicast_power(i, j) > instance.unicast_power(far, j)) far = i;
    }
    sol.values[TVar(instance, far, j)] = 1.0;
    sol.objective += instance.node(j).p_c + instance.unicast_power(far, j);
    const ReachabilityMatrix& r = model.reach[j];
    const int row = static_cast<int>(
        std::find(r.receivers.begin(), r.receivers.end(), far) - r.receivers.begin());
    for (int col = 0; col < r.dimension(); ++col) {
      if (r.at(row, col)) sol.values[YVar(instance, r.receivers[col], j)] = 1.0;
    }
  }
  for (NodeIndex i : instance.receivers()) {
    sol.values[DVar(instance, i, tree.parent(i))] =
        1.0 + static_cast<double>(Descendants(tree, i).size());
  }
  return sol;
}

FeasibilityReport CheckMilpFeasibility(const MilpModel& model, const MilpSolution& solution,
                                       double tolerance) {
  FeasibilityReport report;
  auto fail = [&](std::string what) {
    report.feasible = false;
    report.violations.push_back(std::move(what));
  };
  for (const Variable& v : model.program.variables) {
    const double x = solution.value(v.name);
    if (x < v.lower - tolerance) fail(v.name + " below its lower bound");
    if (v.has_upper && x > v.upper + tolerance) fail(v.name + " above its upper bound");
    if (v.type == VariableType::kBinary && std::abs(x - std::round(x)) > tolerance) {
      fail(v.name + " is not binary");
    }
  }
  for (const auto& [name, x] : solution.values) {
    (void)x;
    const bool known = std::any_of(model.program.variables.begin(), model.program.variables.end(),
                                   [&](const Variable& v) { return v.name == name; });
    if (!known) fail("unknown variable " + name);
  }
  for (const LinearConstraint& c : model.program.constraints) {
    double lhs = 0.0;
    for (const LinearTerm& t : c.terms) lhs += t.coefficient * solution.value(t.variable);
    const bool ok = c.sense == Sense::kLessEqual      ? lhs <= c.rhs + tolerance
                    : c.sense == Sense::kGreaterEqual ? lhs >= c.rhs - tolerance
                                                      : std::abs(lhs - c.rhs) <= tolerance;
    if (!ok) fail("constraint " + c.name + " violated");
  }
  for (const LinearTerm& t : model.program.objective) {
    report.objective += t.coefficient * solution.value(t.variable);
  }
  return report;
}

MilpSolution ParseSolution(const std::string& text) {
  MilpSolution sol;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), '=', ' ');
    std::replace(line.begin(), line.end(), ':', ' ');
    std::istringstream fields(line);
    std::string name;
    if (!(fields >> name)) continue;
    bool comment = false;
    if (name[0] == '#') {
      comment = true;
      if (name == "#") {
        if (!(fields >> name)) continue;
      } else {
        name.erase(0, 1);
      }
    }
    std::string lowered = name;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lowered == "objective") {
      std::string word;
      while (fields >> word) {
        try {
          std::size_t used = 0;
          const double v = std::stod(word, &used);
          if (used == word.size()) {
            sol.objective = v;
            break;
          }
        } catch (const std::exception&) {
        }
      }
      continue;
    }
    if (comment) continue;
    std::string value;
    if (!(fields >> value)) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": missing value");
    }
    try {
      std::size_t used = 0;
      sol.values[name] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": bad value '" + value + "'");
    }
  }
  return sol;
}

MilpSolution ReadSolutionFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseSolution(text.str());
}

BroadcastTree TreeFromMilpSolution(const NetworkInstance& instance, const MilpModel& model,
                                   const MilpSolution& solution) {
  const int n = instance.size();
  // Emission sets from t through the reachability matrices.
  std::vector<std::vector<char>> emits(n, std::vector<char>(n, 0));
  for (NodeIndex j = 0; j < n; ++j) {
    const ReachabilityMatrix& r = model.reach[j];
    for (int row = 0; row < r.dimension(); ++row) {
      const NodeIndex i = r.receivers[row];
      if (i == j) continue;
      const double t = solution.value(TVar(instance, i, j));
      if (std::abs(t - std::round(t)) > kMilpTolerance) {
        throw Error(ErrorCode::kInfeasibleSolution, TVar(instance, i, j) + " is not binary");
      }
      if (std::round(t) == 0.0) continue;
      if (!instance.can_reach(j, i)) {
        throw Error(ErrorCode::kInfeasibleSolution, TVar(instance, i, j) + " uses an infeasible link");
      }
      for (int col = 0; col < r.dimension(); ++col) {
        if (r.at(row, col)) emits[j][r.receivers[col]] = 1;
      }
    }
  }

  std::vector<NodeIndex> parents(n, kNoNode);
  std::vector<char> covered(n, 0);
  covered[instance.source()] = 1;
  std::deque<NodeIndex> queue{instance.source()};
  while (!queue.empty()) {
    const NodeIndex j = queue.front();
    queue.pop_front();
    for (NodeIndex i = 0; i < n; ++i) {
      if (emits[j][i] && !covered[i]) {
        covered[i] = 1;
        parents[i] = j;
        queue.push_back(i);
      }
    }
  }
  for (NodeIndex i = 0; i < n; ++i) {
    if (!covered[i]) {
      throw Error(ErrorCode::kInfeasibleSolution,
                  "node " + std::to_string(instance.id(i)) + " is never covered");
    }
  }
  return BroadcastTree::FromParents(instance, parents);
}

namespace {

// Branch-and-bound state: receivers in connection order, each picking a
// parent; max_demand[j] is the largest unicast power j currently serves.
class ExactSearch {
 public:
  explicit ExactSearch(const NetworkInstance& instance) : inst_(instance) {
    const int n = instance.size();
    // Breadth-first order from the source so early choices are connected.
    std::vector<char> seen(n, 0);
    std::deque<NodeIndex> queue{instance.source()};
    seen[instance.source()] = 1;
    while (!queue.empty()) {
      const NodeIndex j = queue.front();
      queue.pop_front();
      for (NodeIndex i : instance.coverage(j)) {
        if (!seen[i]) {
          seen[i] = 1;
          order_.push_back(i);
          queue.push_back(i);
        }
      }
    }
    for (NodeIndex i = 0; i < n; ++i) {
      std::vector<NodeIndex> options = instance.neighbors(i);
      std::stable_sort(options.begin(), options.end(), [&](NodeIndex a, NodeIndex b) {
        return instance.unicast_power(i, a) < instance.unicast_power(i, b);
      });
      options_.push_back(std::move(options));
    }
    parent_.assign(n, kNoNode);
    max_demand_.assign(n, -1.0);
  }

  BroadcastTree Run() {
    const BroadcastTree start = ShortestPathTree(inst_, {.circuitry_aware = true});
    best_ = start.profile();
    best_power_ = NetworkPower(start, inst_);
    Visit(0, 0.0);
    return BroadcastTree::FromParents(inst_, best_);
  }

 private:
  double Increment(NodeIndex i, NodeIndex j) const {
    const double p = inst_.unicast_power(i, j);
    if (max_demand_[j] < 0.0) return inst_.node(j).p_c + p;
    return std::max(0.0, p - max_demand_[j]);
  }

  bool ClosesCycle(NodeIndex i, NodeIndex j) const {
    for (NodeIndex k = j; k != kNoNode; k = parent_[k]) {
      if (k == i) return true;
    }
    return false;
  }

  double LowerBound(std::size_t depth, double power) const {
    double extra = 0.0;
    for (std::size_t k = depth; k < order_.size(); ++k) {
      const NodeIndex i = order_[k];
      double cheapest = std::numeric_limits<double>::infinity();
      for (NodeIndex j : options_[i]) cheapest = std::min(cheapest, Increment(i, j));
      extra = std::max(extra, cheapest);
    }
    return power + extra;
  }

  void Visit(std::size_t depth, double power) {
    if (LowerBound(depth, power) >= best_power_) return;
    if (depth == order_.size()) {
      best_power_ = power;
      best_ = parent_;
      return;
    }
    const NodeIndex i = order_[depth];
    for (NodeIndex j : options_[i]) {
      if (ClosesCycle(i, j)) continue;
      const double saved = max_demand_[j];
      const double inc = Increment(i, j);
      parent_[i] = j;
      max_demand_[j] = std::max(saved, inst_.unicast_power(i, j));
      Visit(depth + 1, power + inc);
      max_demand_[j] = saved;
      parent_[i] = kNoNode;
    }
  }

  const NetworkInstance& inst_;
  std::vector<NodeIndex> order_;
  std::vector<std::vector<NodeIndex>> options_;
  ActionProfile parent_;
  std::vector<double> max_demand_;
  ActionProfile best_;
  double best_power_ = std::numeric_limits<double>::infinity();
};

}  // namespace

BroadcastTree SolveExact(const NetworkInstance& instance, int node_limit) {
  if (instance.receiver_count() > node_limit) {
    throw Error(ErrorCode::kLimitExceeded,
                std::to_string(instance.receiver_count()) + " receivers exceed the limit of " +
                    std::to_string(node_limit));
  }
  RequireConnected(instance);
  return ExactSearch(instance).Run();
}

BroadcastTree BruteForceOptimum(const NetworkInstance& instance) {
  constexpr int kMaxReceivers = 7;
  if (instance.receiver_count() > kMaxReceivers) {
    throw Error(ErrorCode::kLimitExceeded, "brute force handles at most 7 receivers");
  }
  RequireConnected(instance);
  const int n = instance.size();
  const NodeIndex s = instance.source();
  const std::vector<NodeIndex> w = instance.receivers();
  // Odometer over parent choices: digit k is receiver w[k]'s parent index.
  std::vector<NodeIndex> digit(w.size(), 0);
  ActionProfile parents(n, kNoNode), best;
  double best_power = std::numeric_limits<double>::infinity();
  while (true) {
    bool valid = true;
    for (std::size_t k = 0; k < w.size() && valid; ++k) {
      parents[w[k]] = digit[k];
      valid = digit[k] != w[k] && instance.can_reach(digit[k], w[k]);
    }
    for (std::size_t k = 0; k < w.size() && valid; ++k) {
      // Every chain must hit the source within n steps.
      NodeIndex v = w[k];
      int steps = 0;
      while (v != s && steps <= n) {
        v = parents[v];
        ++steps;
      }
      valid = v == s;
    }
    if (valid) {
      std::vector<double> demand(n, -1.0);
      for (NodeIndex i : w) {
        demand[parents[i]] = std::max(demand[parents[i]], instance.unicast_power(i, parents[i]));
      }
      double power = 0.0;
      for (NodeIndex j = 0; j < n; ++j) {
        if (demand[j] >= 0.0) power += instance.node(j).p_c + demand[j];
      }
      if (power < best_power) {
        best_power = power;
        best = parents;
      }
    }
    std::size_t k = 0;
    while (k < digit.size() && ++digit[k] == n) digit[k++] = 0;
    if (k == digit.size()) break;
  }
  return BroadcastTree::FromParents(instance, best);
}

}  // namespace mpbt
