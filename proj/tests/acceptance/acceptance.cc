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

// Acceptance checks. Each criterion prints one PASS/FAIL line with the
// measured values; the exit status is nonzero when any selected check fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mpbt/analysis.h"
#include "mpbt/error.h"
#include "mpbt/exact.h"
#include "mpbt/experiment.h"
#include "mpbt/game.h"
#include "mpbt/initialize.h"
#include "mpbt/tree.h"
#include "support/instances.h"

namespace mpbt {
namespace {

using namespace testing;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

bool Close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Power of j's transmission under power control with circuitry.
double ParentPower(const NetworkInstance& inst, const ActionProfile& parents, NodeIndex j) {
  double demand = -1.0;
  for (NodeIndex v = 0; v < inst.size(); ++v) {
    if (v != inst.source() && parents[v] == j) demand = std::max(demand, inst.required_power(v, j));
  }
  return demand < 0 ? 0.0 : inst.node(j).p_c + demand;
}

int GroupSize(const ActionProfile& parents, NodeIndex j) {
  return static_cast<int>(std::count(parents.begin(), parents.end(), j));
}

double MarginalCost(const NetworkInstance& inst, const ActionProfile& parents, NodeIndex i) {
  const NodeIndex j = parents[i];
  ActionProfile without = parents;
  without[i] = kNoNode;
  return ParentPower(inst, parents, j) - ParentPower(inst, without, j);
}

double EqualShareCost(const NetworkInstance& inst, const ActionProfile& parents, NodeIndex i) {
  return ParentPower(inst, parents, parents[i]) / GroupSize(parents, parents[i]);
}

Verdict Ac1() {
  std::mt19937_64 rng(101);
  long deviations = 0;
  int instances = 0;
  double worst = 0.0;
  while (instances < 100 || deviations < 10000) {
    const int n = 10 + instances % 21;
    const NetworkInstance inst = ConnectedRandomInstance(n, 7000 + instances, 200.0);
    ++instances;
    for (int t = 0; t < 5; ++t) {
      const ActionProfile start = RandomTreeProfile(inst, rng);
      const BroadcastTree tree = BroadcastTree::FromParents(inst, start);
      for (NodeIndex i : inst.receivers()) {
        for (NodeIndex k : ActionSet(i, tree, inst)) {
          if (k == start[i]) continue;
          ActionProfile moved = start;
          moved[i] = k;
          const double dc = MarginalCost(inst, moved, i) - MarginalCost(inst, start, i);
          const double dp = ReferencePower(inst, moved) - ReferencePower(inst, start);
          const double lib = CostAt(i, k, tree, CostScheme::Marginal(), inst) -
                             CurrentCost(i, tree, CostScheme::Marginal(), inst);
          const double scale = std::max(1.0, std::abs(ReferencePower(inst, start)));
          worst = std::max({worst, std::abs(dc - dp) / scale, std::abs(lib - dp) / scale});
          ++deviations;
        }
      }
    }
  }
  return {worst <= 1e-9, Fmt("%.0f deviations on %.0f instances, max |dC - dP| = %.3g",
                             deviations, instances, worst)};
}

Verdict Ac2() {
  int converged[2] = {0, 0}, certified[2] = {0, 0};
  const int total = 1000;
  long rounds = 0;
  for (int k = 0; k < total; ++k) {
    const int n = 5 + k % 36;
    const NetworkInstance inst = ConnectedRandomInstance(n, 11000 + k, 250.0);
    const CostScheme schemes[2] = {CostScheme::Marginal(), CostScheme::Shapley()};
    for (int s = 0; s < 2; ++s) {
      BrdOptions options;
      options.seed = 500 + k;
      options.record_steps = false;
      const GameTrace trace = RunBestResponseDynamics(
          InitializeTree(inst, InitPolicy::kGreedyJoin, schemes[s], options.seed), schemes[s],
          inst, options);
      rounds = std::max<long>(rounds, trace.rounds);
      if (trace.outcome != Outcome::kConvergedNE) continue;
      ++converged[s];
      certified[s] += CheckNashEquilibrium(trace.final_tree, schemes[s], inst).is_equilibrium;
    }
  }
  const bool pass = converged[0] == total && converged[1] == total && certified[0] == total &&
                    certified[1] == total;
  return {pass, Fmt("MC converged %.0f/1000 certified %.0f; SV converged %.0f certified %.0f",
                    converged[0], certified[0], converged[1], certified[1]) +
                    Fmt(", max rounds %.0f", rounds)};
}

Verdict Ac3() {
  int ne = 0;
  for (int k = 0; k < 100; ++k) {
    const NetworkInstance inst = ConnectedRandomInstance(3 + k % 6, 13000 + k, 150.0);
    const BroadcastTree opt = BruteForceOptimum(inst);
    bool stable = true;
    for (NodeIndex i : inst.receivers()) {
      const double now = MarginalCost(inst, opt.profile(), i);
      for (NodeIndex k2 : ActionSet(i, opt, inst)) {
        ActionProfile moved = opt.profile();
        moved[i] = k2;
        if (MarginalCost(inst, moved, i) < now - 1e-12 * std::max(1.0, now)) stable = false;
      }
    }
    ne += stable && CheckNashEquilibrium(opt, CostScheme::Marginal(), inst).is_equilibrium;
  }
  return {ne == 100, Fmt("%.0f/100 brute-force optima are MC equilibria", ne)};
}

Verdict Ac4() {
  const NetworkInstance inst = DeviationInstance();
  const BroadcastTree tree = DeviationStart(inst);
  ActionProfile moved = tree.profile();
  moved[kI] = kK;
  const ActionProfile& start = tree.profile();
  const double saving = EqualShareCost(inst, start, kI) - EqualShareCost(inst, moved, kI);
  const double others = (EqualShareCost(inst, moved, kL) - EqualShareCost(inst, start, kL)) +
                        (EqualShareCost(inst, moved, kM) - EqualShareCost(inst, start, kM));
  const double dp = ReferencePower(inst, moved) - ReferencePower(inst, start);
  const DeviationDecomposition d =
      DecomposeDeviation(tree, kI, kK, CostScheme::EqualShare(), inst);
  const bool pass = Close(saving, 1.5) && Close(others, 2.5) && Close(dp, 1.0) &&
                    Close(-d.delta_cost, saving) && Close(d.delta_others, others) &&
                    Close(d.delta_network_power, dp) &&
                    BbMisalignmentCheck(tree, kI, kK, CostScheme::EqualShare(), inst);
  return {pass, Fmt("mover saves %.3g, others pay %.3g more, network power +%.3g", saving,
                    others, dp)};
}

Verdict Ac5() {
  std::ifstream in(std::string(MPBT_FIXTURES) + "/es_cycle_witness.json");
  std::optional<EsCycleWitness> found;
  std::string source = "fixture";
  if (in.good()) {
    std::stringstream buf;
    buf << in.rdbuf();
    found = EsWitnessFromJson(buf.str());
  } else {
    found = SearchEsCycle();
    if (!found) return {false, "no fixture and the search found no cycle"};
    source = "search";
  }
  const EsCycleWitness& w = *found;
  const NetworkInstance& inst = w.instance;
  bool valid = w.cycle.size() >= 3 && w.cycle.front() == w.cycle.back();
  for (std::size_t s = 0; valid && s + 1 < w.cycle.size(); ++s) {
    const ActionProfile& a = w.cycle[s];
    const ActionProfile& b = w.cycle[s + 1];
    NodeIndex mover = kNoNode;
    int diffs = 0;
    for (NodeIndex v = 0; v < inst.size(); ++v) {
      if (a[v] != b[v]) {
        ++diffs;
        mover = v;
      }
    }
    valid = diffs == 1 && ReferencePower(inst, a) < kInf && ReferencePower(inst, b) < kInf &&
            EqualShareCost(inst, b, mover) < EqualShareCost(inst, a, mover) - 1e-12;
  }
  const bool replay = ReplayEsCycle(inst, w.cycle);
  return {valid && replay, "cycle of " + std::to_string(w.cycle.size() - 1) +
                               " improving moves on |Q|=" + std::to_string(inst.size()) +
                               " from " + source + (valid ? ", independently checked" : "")};
}

Verdict Ac6() {
  int trees = 0;
  double worst = 0.0, worst_identity = 0.0;
  std::mt19937_64 rng(66);
  for (int k = 0; trees < 100; ++k) {
    const NetworkInstance inst = ConnectedRandomInstance(6 + k % 20, 15000 + k, 200.0);
    const CostScheme scheme = k % 2 ? CostScheme::Shapley() : CostScheme::EqualShare();
    BrdOptions options;
    options.seed = k;
    options.record_steps = false;
    options.round_cap = 200;
    const GameTrace trace = RunBestResponseDynamics(
        InitializeTree(inst, InitPolicy::kGreedyJoin, scheme, k), scheme, inst, options);
    if (trace.outcome != Outcome::kConvergedNE) continue;
    ++trees;
    const BroadcastTree& tree = trace.final_tree;
    for (NodeIndex j : tree.transmitters()) {
      double sum = 0.0;
      for (NodeIndex i : inst.receivers())
        if (tree.parent(i) == j) sum += CurrentCost(i, tree, scheme, inst);
      worst = std::max(worst, std::abs(sum - ParentPower(inst, tree.profile(), j)));
    }
    // Budget balance turns a unilateral deviation into
    // dC_i = dP - (change in the other children's costs).
    const ActionProfile random = RandomTreeProfile(inst, rng);
    const BroadcastTree other = BroadcastTree::FromParents(inst, random);
    for (NodeIndex i : inst.receivers()) {
      for (NodeIndex t : ActionSet(i, other, inst)) {
        if (t == random[i]) continue;
        const DeviationDecomposition d = DecomposeDeviation(other, i, t, scheme, inst);
        ActionProfile moved = random;
        moved[i] = t;
        const double dp = ReferencePower(inst, moved) - ReferencePower(inst, random);
        worst_identity = std::max(worst_identity,
                                  std::abs(d.delta_cost - (dp - d.delta_others)));
      }
    }
  }
  return {worst <= 1e-9 && worst_identity <= 1e-9,
          Fmt("100 converged trees, max residual %.3g; max identity error %.3g", worst,
              worst_identity)};
}

Verdict Ac7() {
  const NetworkInstance toy = ToyMilpInstance();
  const ReachabilityMatrix r = BuildReachabilityMatrix(toy, toy.source());
  const bool matrix = r.entries == std::vector<int>{1, 1, 0, 0, 0, 1, 0, 0,
                                                    1, 1, 1, 0, 0, 0, 0, 0};
  int agree = 0, feasible = 0;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const NetworkInstance inst = ConnectedRandomInstance(2 + k % 7, 17000 + k, 150.0);
    const MilpModel model = BuildMilp(inst);
    const BroadcastTree bb = SolveExact(inst);
    const MilpSolution sol = MilpSolutionFromTree(bb, inst, model);
    const FeasibilityReport report = CheckMilpFeasibility(model, sol);
    feasible += report.feasible;
    const BroadcastTree rebuilt = TreeFromMilpSolution(inst, model, sol);
    const double bf = ReferencePower(inst, BruteForceOptimum(inst).profile());
    const double got = ReferencePower(inst, rebuilt.profile());
    const double err = std::abs(got - bf) / std::max(1.0, bf);
    worst = std::max(worst, std::max(err, std::abs(report.objective - bf) / std::max(1.0, bf)));
    agree += err <= 1e-9;
  }
  return {matrix && agree == 200 && feasible == 200,
          std::string(matrix ? "R_S matches" : "R_S differs") +
              Fmt("; %.0f/200 feasible, %.0f/200 optima agree, max rel error %.3g", feasible,
                  agree, worst)};
}

Verdict Ac8() {
  const bool thr = LinePcThreshold(2, 3.0) == 0.75;
  bool slopes = true;
  std::string detail = thr ? "threshold(2,3)=0.75" : "threshold(2,3) wrong";
  for (double alpha : {2.0, 3.0, 4.0}) {
    std::vector<double> xs, ys;
    for (int n : {2, 4, 8, 16}) {
      const NetworkInstance line = LineInstance(n, alpha, 1e-6);
      ActionProfile chain(line.size(), kNoNode), bcast(line.size(), 0);
      bcast[0] = kNoNode;
      for (NodeIndex v = 1; v < line.size(); ++v) chain[v] = v - 1;
      xs.push_back(n);
      ys.push_back(ReferencePower(line, bcast) / ReferencePower(line, chain));
    }
    const LinearFit fit = FitPowerLaw(xs, ys);
    const bool ok = fit.slope >= 0.95 * (alpha - 1.0) && std::exp(fit.intercept) > 0.0;
    slopes = slopes && ok;
    detail += Fmt("; alpha=%.0f slope %.3f c %.3f", alpha, fit.slope, std::exp(fit.intercept));
  }
  int optimal = 0, points = 0;
  std::string misses;
  for (int n : {2, 3, 4}) {
    const double t = LinePcThreshold(n, 3.0);
    for (double pc : {1e-6, 0.25 * t, 0.5 * t, t}) {
      ++points;
      const LineReport r = VerifyLineInstance(n, 3.0, pc);
      if (r.chain_optimal.value_or(false)) {
        ++optimal;
      } else {
        misses += Fmt(" (N=%.0f p_c=%.4g chain %.4g opt %.4g)", n, pc, r.chain_power,
                      r.optimum_power.value_or(NAN));
      }
    }
  }
  detail += Fmt("; chain optimal at %.0f/%.0f grid points", optimal, points) + misses;
  return {thr && slopes && optimal == points, detail};
}

ExperimentConfig SimulationConfig(std::vector<int> sizes, int runs, std::vector<Algorithm> algos) {
  ExperimentConfig c;
  c.node_counts = std::move(sizes);
  c.runs = runs;
  c.algorithms = std::move(algos);
  c.seed = 2026;
  return c;
}

Verdict Ac9() {
  const ExperimentResult r =
      RunExperiment(SimulationConfig({40}, 200,
                                {Algorithm::kCsgMc, Algorithm::kCsgSv, Algorithm::kBipSweep,
                                 Algorithm::kGbbtc}));
  const double mc = r.find(Algorithm::kCsgMc, 40).mean_normalized_power;
  const double sv = r.find(Algorithm::kCsgSv, 40).mean_normalized_power;
  const double bipsw = r.find(Algorithm::kBipSweep, 40).mean_normalized_power;
  const double gbbtc = r.find(Algorithm::kGbbtc, 40).mean_normalized_power;
  const bool pass = mc <= 0.75 * gbbtc && mc <= bipsw && mc <= sv;
  return {pass, Fmt("mean P^ at |Q|=40: MC %.4f SV %.4f BIPSW %.4f", mc, sv, bipsw) +
                    Fmt(" GBBTC %.4f (MC/GBBTC %.3f)", gbbtc, mc / gbbtc)};
}

Verdict Ac10() {
  const std::vector<int> sizes{10, 20, 30, 40};
  const ExperimentResult r =
      RunExperiment(SimulationConfig(sizes, 100, {Algorithm::kCsgMc, Algorithm::kCsgSv}));
  std::vector<double> xs, ys;
  bool below = true;
  std::string detail = "mean iterations MC/SV:";
  for (int n : sizes) {
    const double mc = r.find(Algorithm::kCsgMc, n).mean_iterations;
    const double sv = r.find(Algorithm::kCsgSv, n).mean_iterations;
    below = below && mc <= sv;
    xs.push_back(n);
    ys.push_back(mc);
    detail += Fmt(" %.0f:%.2f/%.2f", n, mc, sv);
  }
  const LinearFit fit = FitLine(xs, ys);
  detail += Fmt("; MC linear fit R^2 %.4f", fit.r2);
  return {fit.r2 >= 0.9 && below, detail};
}

Verdict Ac11() {
  double means[2];
  const double pcs[2] = {25.0, 150.0};
  for (int k = 0; k < 2; ++k) {
    ExperimentConfig c = SimulationConfig({30}, 200, {Algorithm::kCsgMc});
    c.p_c_low_mw = c.p_c_high_mw = pcs[k];
    means[k] = RunExperiment(c).find(Algorithm::kCsgMc, 30).mean_transmitters;
  }
  return {means[1] < means[0],
          Fmt("mean |T| at |Q|=30: %.3f at p_c=25 mW, %.3f at p_c=150 mW", means[0], means[1])};
}

const std::map<std::string, std::function<Verdict()>>& Checks() {
  static const std::map<std::string, std::function<Verdict()>> checks = {
      {"AC1", Ac1}, {"AC2", Ac2}, {"AC3", Ac3}, {"AC4", Ac4},  {"AC5", Ac5},  {"AC6", Ac6},
      {"AC7", Ac7}, {"AC8", Ac8}, {"AC9", Ac9}, {"AC10", Ac10}, {"AC11", Ac11}};
  return checks;
}

}  // namespace
}  // namespace mpbt

int main(int argc, char** argv) {
  std::vector<std::string> selected;
  for (int k = 1; k < argc; ++k) selected.push_back(argv[k]);
  if (selected.empty()) {
    for (int k = 1; k <= 11; ++k) selected.push_back("AC" + std::to_string(k));
  }
  bool all = true;
  for (const std::string& name : selected) {
    const auto it = mpbt::Checks().find(name);
    if (it == mpbt::Checks().end()) {
      std::printf("%s FAIL: unknown criterion\n", name.c_str());
      all = false;
      continue;
    }
    mpbt::Verdict v;
    try {
      v = it->second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
