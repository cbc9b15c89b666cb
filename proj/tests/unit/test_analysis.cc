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

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mpbt/analysis.h"
#include "mpbt/error.h"
#include "mpbt/game.h"
#include "support/instances.h"

namespace mpbt {
namespace {

using namespace testing;

TEST_CASE("price of anarchy closed form") {
  // (1 + p_c) / (N (N^-alpha + p_c))
  CHECK(PoaFormula(4, 3.0, 0.01) == doctest::Approx(1.01 / (4.0 * (1.0 / 64.0 + 0.01))));
  CHECK(PoaFormula(4, 3.0, 0.01) == doctest::Approx(9.8537).epsilon(1e-4));
  CHECK(PoaFormula(1, 2.0, 0.3) == doctest::Approx(1.0));
  // Without circuitry the ratio is N^(alpha-1).
  CHECK(PoaFormula(8, 2.0, 0.0) == doctest::Approx(8.0));
  CHECK(PoaFormula(8, 4.0, 0.0) == doctest::Approx(512.0));
}

TEST_CASE("line circuitry thresholds") {
  CHECK(LinePcThreshold(2, 3.0) == 0.75);
  CHECK(LinePcThreshold(4, 3.0) == doctest::Approx(0.46875));
  for (int n = 3; n < 20; ++n) CHECK(LinePcThreshold(n + 1, 3.0) < LinePcThreshold(n, 3.0));
  CHECK_THROWS_AS(LinePcThreshold(1, 3.0), Error);
}

TEST_CASE("two-receiver line report") {
  const LineReport r = VerifyLineInstance(2, 3.0, 0.1);
  CHECK(r.chain_power == doctest::Approx(0.45));
  CHECK(r.bcast_power == doctest::Approx(1.1));
  CHECK(r.poa_formula == doctest::Approx(1.1 / 0.45));
  REQUIRE(r.optimum_power.has_value());
  CHECK(*r.optimum_power == doctest::Approx(0.45));
  CHECK(*r.chain_optimal);
  // The far node gains by relaying through its neighbour: 0.225 < 0.875.
  CHECK_FALSE(r.bcast_verdict.is_equilibrium);
  CHECK(r.bcast_verdict.node == 2);
  CHECK(r.bcast_verdict.target == 1);
  CHECK(r.bcast_verdict.current_cost == doctest::Approx(0.875));
  CHECK(r.bcast_verdict.deviation_cost == doctest::Approx(0.225));
  CHECK(r.bcast_power / r.chain_power == doctest::Approx(r.poa_formula));
  const std::string json = LineReportToJson(r);
  CHECK(json.find("\"threshold\"") != std::string::npos);
  CHECK(json.find("\"chain_optimal\"") != std::string::npos);
}

TEST_CASE("line reports above the threshold are refused") {
  try {
    VerifyLineInstance(2, 3.0, 0.8);
    FAIL("expected PreconditionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPreconditionViolated);
  }
}

TEST_CASE("line reports beyond the solver limit skip the optimum") {
  const LineReport r = VerifyLineInstance(12, 3.0, 1e-4, 0.0, 10);
  CHECK_FALSE(r.optimum_power.has_value());
  CHECK_FALSE(r.chain_optimal.has_value());
  CHECK(r.chain_power == doctest::Approx(12.0 * (1e-4 + std::pow(12.0, -3.0))));
  CHECK(r.bcast_power == doctest::Approx(1.0001));
}

TEST_CASE("broadcast verdict on lines matches the far node's best deviation") {
  // Only the farthest node pays under MC; its best move is to its neighbour,
  // costing p_c + N^-alpha against 1 - ((N-1)/N)^alpha.
  for (int n : {2, 3, 4, 6, 8, 12}) {
    for (double alpha : {2.0, 3.0, 4.0}) {
      for (double frac : {0.0, 0.5, 1.0}) {
        const double pc = frac * LinePcThreshold(n, alpha);
        const double stay = 1.0 - std::pow((n - 1.0) / n, alpha);
        const double move = pc + std::pow(n, -alpha);
        const bool expected = !(move < stay - 1e-12);
        CAPTURE(n);
        CAPTURE(alpha);
        CAPTURE(pc);
        const LineReport r = VerifyLineInstance(n, alpha, pc, 0.0, 0);
        CHECK(r.bcast_verdict.is_equilibrium == expected);
        if (!expected) CHECK(r.bcast_verdict.node == n);
      }
    }
  }
}

TEST_CASE("sweep rows and csv") {
  const auto rows = PoaSweep({2, 4}, {2.0, 3.0}, {0.0, 0.01});
  REQUIRE(rows.size() == 8);
  for (const PoaSweepRow& row : rows) {
    CHECK(row.bcast_power / row.chain_power == doctest::Approx(row.poa_formula));
  }
  std::ostringstream out;
  WritePoaCsv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "N,alpha,p_c,chain_power,bcast_power,poa_formula,bcast_is_ne");
  int count = 0;
  while (std::getline(in, line)) count += !line.empty();
  CHECK(count == 8);
}

TEST_CASE("equal-share deviation that helps the mover hurts the others") {
  const NetworkInstance inst = DeviationInstance();
  const BroadcastTree tree = DeviationStart(inst);
  const CostScheme es = CostScheme::EqualShare();
  const DeviationDecomposition d = DecomposeDeviation(tree, kI, kK, es, inst);
  CHECK(d.delta_cost == doctest::Approx(-1.5));
  CHECK(d.delta_others == doctest::Approx(2.5));
  CHECK(d.delta_network_power == doctest::Approx(1.0));
  CHECK(BbMisalignmentCheck(tree, kI, kK, es, inst));
  CHECK(BbMisalignmentCheck(tree, kI, kK, CostScheme::Shapley(), inst) ==
        (DecomposeDeviation(tree, kI, kK, CostScheme::Shapley(), inst).delta_cost < 0 &&
         DecomposeDeviation(tree, kI, kK, CostScheme::Shapley(), inst).delta_network_power > 0));
  try {
    BbMisalignmentCheck(tree, kI, kK, CostScheme::Marginal(), inst);
    FAIL("expected SchemeNotBudgetBalanced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchemeNotBudgetBalanced);
  }
}

TEST_CASE("deviation decomposition identity on random deviations") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const NetworkInstance inst = ConnectedRandomInstance(5 + trial % 10, 900 + trial, 150.0);
    const BroadcastTree tree = BroadcastTree::FromParents(inst, RandomTreeProfile(inst, rng));
    for (const CostScheme& scheme : {CostScheme::Shapley(), CostScheme::EqualShare()}) {
      for (NodeIndex i : inst.receivers()) {
        for (NodeIndex k : ActionSet(i, tree, inst)) {
          if (k == tree.parent(i)) continue;
          const DeviationDecomposition d = DecomposeDeviation(tree, i, k, scheme, inst);
          ActionProfile moved = tree.profile();
          const NodeIndex j = moved[i];
          moved[i] = k;
          const BroadcastTree after = BroadcastTree::FromParents(inst, moved);
          const double dp = ReferencePower(inst, moved) - ReferencePower(inst, tree.profile());
          double others = 0.0;
          for (NodeIndex v : inst.receivers()) {
            if (v == i || (tree.parent(v) != j && tree.parent(v) != k)) continue;
            others += CurrentCost(v, after, scheme, inst) - CurrentCost(v, tree, scheme, inst);
          }
          const double dc = CurrentCost(i, after, scheme, inst) - CurrentCost(i, tree, scheme, inst);
          CHECK(d.delta_network_power == doctest::Approx(dp).epsilon(1e-9));
          CHECK(d.delta_others == doctest::Approx(others).epsilon(1e-9));
          CHECK(d.delta_cost == doctest::Approx(dc).epsilon(1e-9));
          CHECK(std::abs(dc - (dp - others)) <= 1e-9 * std::max(1.0, std::abs(dp)));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("equal-share cycle witness survives a json round trip") {
  std::ifstream in(std::string(MPBT_FIXTURES) + "/es_cycle_witness.json");
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  const EsCycleWitness w = EsWitnessFromJson(buf.str());
  CHECK(w.cycle.size() >= 3);
  CHECK(w.cycle.front() == w.cycle.back());
  CHECK(ReplayEsCycle(w.instance, w.cycle));
  const EsCycleWitness again = EsWitnessFromJson(EsWitnessToJson(w));
  CHECK(again.cycle == w.cycle);
  CHECK(again.start == w.start);
  CHECK(ReplayEsCycle(again.instance, again.cycle));
  for (NodeIndex a = 0; a < w.instance.size(); ++a)
    for (NodeIndex b = 0; b < w.instance.size(); ++b)
      if (a != b) CHECK(again.instance.required_power(a, b) == w.instance.required_power(a, b));
  // Tampering with one step breaks the replay.
  std::vector<ActionProfile> broken = w.cycle;
  broken.erase(broken.begin() + 1);
  CHECK_FALSE(ReplayEsCycle(w.instance, broken));
}

TEST_CASE("small search finds nothing with zero candidates") {
  EsCycleSearchOptions opts;
  opts.max_candidates = 0;
  CHECK_FALSE(SearchEsCycle(opts).has_value());
}

TEST_CASE("least-squares fits") {
  const LinearFit exact = FitLine({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(exact.slope == doctest::Approx(2.0));
  CHECK(exact.intercept == doctest::Approx(1.0));
  CHECK(exact.r2 == doctest::Approx(1.0));
  const LinearFit noisy = FitLine({0, 1, 2, 3}, {0, 1, 0, 1});
  // Slope 0.2, intercept 0.2, r2 = 0.2 by hand.
  CHECK(noisy.slope == doctest::Approx(0.2));
  CHECK(noisy.intercept == doctest::Approx(0.2));
  CHECK(noisy.r2 == doctest::Approx(0.2));
  const LinearFit law = FitPowerLaw({2, 4, 8, 16}, {3 * 4.0, 3 * 16.0, 3 * 64.0, 3 * 256.0});
  CHECK(law.slope == doctest::Approx(2.0));
  CHECK(std::exp(law.intercept) == doctest::Approx(3.0));
  CHECK_THROWS_AS(FitLine({1}, {1}), Error);
}

}  // namespace
}  // namespace mpbt
