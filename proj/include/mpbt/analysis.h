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

// Efficiency and misalignment diagnostics: price-of-anarchy ratios, the
// line-topology construction, cost decompositions for budget-balanced
// deviations, and small curve fits used by the experiment summaries.
#ifndef MPBT_ANALYSIS_H_
#define MPBT_ANALYSIS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpbt/game.h"
#include "mpbt/netmodel.h"
#include "mpbt/tree.h"

namespace mpbt {

// network_power(ne) / network_power(opt).
double PoaRatio(const BroadcastTree& ne_tree, const BroadcastTree& opt_tree,
                const NetworkInstance& instance);

// Ratio of the single-broadcast profile to the all-unicast chain on the
// normalized line with n receivers: (1 + p_c) / (n (1/n^alpha + p_c)).
double PoaFormula(int n, double alpha, double p_c);

// Circuitry level below which the chain is claimed optimal on the line:
// 1 - 1/2^(alpha-1) for n = 2, (1 - 1/n^(alpha-1)) / (n - 2) otherwise.
// Throws InvalidArgument for n < 2.
double LinePcThreshold(int n, double alpha);

struct LineReport {
  int n = 0;
  double alpha = 0.0;
  double p_c = 0.0;
  double epsilon = 0.0;
  double chain_power = 0.0;
  double bcast_power = 0.0;
  double poa_formula = 0.0;
  // Filled when the exact solver ran (n within the node limit).
  std::optional<double> optimum_power;
  std::optional<bool> chain_optimal;
  std::optional<ActionProfile> optimum_profile;
  // Marginal-contribution verdict on the single-broadcast profile.
  NashVerdict bcast_verdict;
};

// Builds the line, evaluates both profiles and, for n <= node_limit, the
// optimum. Throws PreconditionViolated when p_c exceeds LinePcThreshold.
LineReport VerifyLineInstance(int n, double alpha, double p_c, double epsilon = 0.0,
                              int node_limit = 10);

std::string LineReportToJson(const LineReport& report);

struct PoaSweepRow {
  int n = 0;
  double alpha = 0.0;
  double p_c = 0.0;
  double chain_power = 0.0;
  double bcast_power = 0.0;
  double poa_formula = 0.0;
  bool bcast_is_ne = false;
};

// Every (n, alpha, p_c) combination; no optimum search.
std::vector<PoaSweepRow> PoaSweep(const std::vector<int>& ns, const std::vector<double>& alphas,
                                  const std::vector<double>& p_cs, double epsilon = 0.0);
void WritePoaCsv(std::ostream& out, const std::vector<PoaSweepRow>& rows);

// Cost changes caused by i leaving its parent j for k.
struct DeviationDecomposition {
  double delta_cost = 0.0;           // mover
  double delta_network_power = 0.0;  // under the scheme's power regime
  double delta_others = 0.0;         // other children of j and k
};

DeviationDecomposition DecomposeDeviation(const BroadcastTree& tree, NodeIndex i, NodeIndex k,
                                          const CostScheme& scheme,
                                          const NetworkInstance& instance);

// True when i's switch to k strictly lowers its cost while the other
// children of the old and new parent lose more than i gains, i.e. the
// network power went up. False for non-improving switches. Throws
// SchemeNotBudgetBalanced for MC.
bool BbMisalignmentCheck(const BroadcastTree& tree, NodeIndex i, NodeIndex k,
                         const CostScheme& scheme, const NetworkInstance& instance);

struct EsCycleSearchOptions {
  long max_candidates = 100000;
  int min_nodes = 3;  // |Q|, source included
  int max_nodes = 8;
  double area_side = 100.0;
  std::uint64_t seed = 1;
  int round_cap = 200;
};

// Instance on which power-controlled equal-share dynamics revisit a
// profile.
struct EsCycleWitness {
  NetworkInstance instance;
  ActionProfile start;
  BrdOptions brd;
  std::vector<ActionProfile> cycle;  // first profile repeated at the end
  long candidates = 0;               // instances tried, this one included
};

// Random small geometric instances, each started from a seeded greedy join.
std::optional<EsCycleWitness> SearchEsCycle(const EsCycleSearchOptions& options = {});

// True when every profile is a complete valid tree, consecutive profiles
// differ in one node whose move is a strictly improving best response under
// power-controlled equal share, and the sequence closes on itself.
bool ReplayEsCycle(const NetworkInstance& instance, const std::vector<ActionProfile>& cycle);

std::string EsWitnessToJson(const EsCycleWitness& witness);
// Throws ParseError.
EsCycleWitness EsWitnessFromJson(const std::string& text);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = slope x + intercept. Needs two distinct xs.
LinearFit FitLine(const std::vector<double>& xs, const std::vector<double>& ys);

// Fit of log y against log x.
LinearFit FitPowerLaw(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace mpbt

#endif  // MPBT_ANALYSIS_H_
