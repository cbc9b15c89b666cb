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

// Seeded Monte-Carlo experiments: algorithm dispatch, per-run metrics and
// CSV assembly.
#ifndef MPBT_EXPERIMENT_H_
#define MPBT_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpbt/game.h"
#include "mpbt/initialize.h"
#include "mpbt/netmodel.h"
#include "mpbt/tree.h"

namespace mpbt {

enum class Algorithm {
  kCsgMc,     // cost-sharing game, marginal contribution
  kCsgSv,     // cost-sharing game, Shapley value
  kCsgEs,     // cost-sharing game, equal share at the fixed transmit power
  kBip,
  kBipSweep,  // BIP followed by the sweep pass
  kBdp,
  kGbbtc,
  kExact,
};

std::string_view AlgorithmName(Algorithm algorithm);
Algorithm ParseAlgorithm(std::string_view name);
const std::vector<Algorithm>& AllAlgorithms();

// Powers in the configuration file are in mW; accessors return watts.
struct ExperimentConfig {
  double area_side = 250.0;
  std::vector<int> node_counts{10, 20, 30, 40, 50};  // |Q|, source included
  int runs = 100;
  std::vector<Algorithm> algorithms{Algorithm::kCsgMc, Algorithm::kCsgSv, Algorithm::kCsgEs,
                                    Algorithm::kBipSweep, Algorithm::kBdp, Algorithm::kGbbtc};
  double fixed_power_mw = 200.0;
  ChannelParams channel;
  double p_max_low_mw = 150.0, p_max_high_mw = 250.0;
  double p_c_low_mw = 50.0, p_c_high_mw = 100.0;
  double eta = 0.3;
  std::uint64_t seed = 1;
  Schedule schedule = Schedule::kRandomPermutation;
  InitPolicy init = InitPolicy::kGreedyJoin;
  int round_cap = 1000;
  int exact_limit = 10;
  bool circuitry_aware_baselines = false;
  // Instances that fail the connectivity requirement are redrawn up to
  // this many times.
  int max_instance_attempts = 100000;
  int workers = 1;
  bool include_timing = false;
  std::string output;          // per-run CSV
  std::string summary_output;  // per (algorithm, |Q|) CSV

  double fixed_power() const { return fixed_power_mw * 1e-3; }
  RandomInstanceParams instance_params(int node_count) const;
};

// Throws InvalidArgument.
void Validate(const ExperimentConfig& config);
// Unknown keys are rejected. Throws ParseError or InvalidArgument.
ExperimentConfig ConfigFromJson(const std::string& text);
std::string ConfigToJson(const ExperimentConfig& config);

struct RunMetrics {
  std::string status = "ok";  // "ok" or an error code name
  std::string outcome;        // dynamics outcome for game runs
  double network_power = 0.0;
  double normalized_power = 0.0;  // network power / mean(p_c + p_max)
  long iterations = 0;
  int transmitters = 0;
  bool converged = false;
  double wall_ms = 0.0;
};

struct AlgorithmResult {
  std::optional<BroadcastTree> tree;
  PowerModel reporting_model;  // regime the network power is reported under
  std::optional<GameTrace> trace;
  std::optional<CostScheme> scheme;
  RunMetrics metrics;
};

// Scheme a game algorithm plays; empty for the heuristics.
std::optional<CostScheme> AlgorithmScheme(Algorithm algorithm, const ExperimentConfig& config);

// Runs one algorithm. Library errors are reported in metrics.status rather
// than thrown.
AlgorithmResult RunAlgorithm(Algorithm algorithm, const NetworkInstance& instance,
                             const ExperimentConfig& config, std::uint64_t seed,
                             bool record_steps = false);

// Mixes several values into one well-spread 64-bit seed.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0);

// Draws connected instances for run `run` at `node_count`; when a
// fixed-power algorithm is requested the fixed-power graph must span too.
// Throws LimitExceeded after max_instance_attempts draws.
NetworkInstance DrawInstance(const ExperimentConfig& config, int node_count, int run,
                             int* attempts = nullptr);

struct ExperimentRow {
  std::uint64_t seed = 0;
  int node_count = 0;
  int run = 0;
  Algorithm algorithm = Algorithm::kCsgMc;
  RunMetrics metrics;
};

struct SummaryRow {
  Algorithm algorithm = Algorithm::kCsgMc;
  int node_count = 0;
  int runs = 0;  // successful runs
  int failures = 0;
  double mean_normalized_power = 0.0, std_normalized_power = 0.0;
  double mean_network_power = 0.0, std_network_power = 0.0;
  double mean_iterations = 0.0, std_iterations = 0.0;
  double mean_transmitters = 0.0, std_transmitters = 0.0;
  double converged_fraction = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;  // by (node count, run, algorithm)
  std::vector<SummaryRow> summary;  // by (node count, algorithm)

  const SummaryRow& find(Algorithm algorithm, int node_count) const;
};

ExperimentResult RunExperiment(const ExperimentConfig& config);
std::vector<SummaryRow> Summarize(const std::vector<ExperimentRow>& rows,
                                  const ExperimentConfig& config);

void WriteRunsCsv(std::ostream& out, const std::vector<ExperimentRow>& rows,
                  bool include_timing = false);
void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace mpbt

#endif  // MPBT_EXPERIMENT_H_
