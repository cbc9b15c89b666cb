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

// Command-line front end: instance generation, single runs, Monte-Carlo
// experiments, line-topology sweeps and MILP export/import.
//
// Exit codes: 0 success, 2 invalid input, 3 infeasible or disconnected
// instance, 4 dynamics that did not converge.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpbt/analysis.h"
#include "mpbt/error.h"
#include "mpbt/exact.h"
#include "mpbt/experiment.h"
#include "mpbt/instance_io.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNotConverged = 4;

int ExitCodeFor(mpbt::ErrorCode code) {
  switch (code) {
    case mpbt::ErrorCode::kDisconnected:
    case mpbt::ErrorCode::kDisconnectedAtFixedPower:
    case mpbt::ErrorCode::kInfeasibleChild:
    case mpbt::ErrorCode::kInfeasibleSolution:
    case mpbt::ErrorCode::kEmptyActionSet:
      return kExitInfeasible;
    default:
      return kExitInvalid;
  }
}

void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    mpbt::WriteTextFile(path, text);
  }
}

template <typename T>
std::vector<T> SplitList(const std::string& text) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream field(item);
    T value;
    if (!(field >> value) || !(field >> std::ws).eof()) {
      throw mpbt::Error(mpbt::ErrorCode::kInvalidArgument, "bad list item '" + item + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw mpbt::Error(mpbt::ErrorCode::kInvalidArgument, "empty list");
  return out;
}

struct GenArgs {
  std::string config;
  int nodes = 10;
  std::uint64_t seed = 1;
  bool raw = false;
  std::string out;
};

int CmdGen(const GenArgs& a) {
  mpbt::ExperimentConfig config;
  if (!a.config.empty()) config = mpbt::ConfigFromJson(mpbt::ReadTextFile(a.config));
  config.seed = a.seed;
  config.node_counts = {a.nodes};
  mpbt::Validate(config);
  const mpbt::NetworkInstance instance =
      a.raw ? mpbt::GenerateRandomInstance(config.instance_params(a.nodes), a.seed)
            : mpbt::DrawInstance(config, a.nodes, 0);
  Emit(a.out, mpbt::InstanceToJson(instance));
  return kExitOk;
}

struct RunArgs {
  std::string instance;
  std::string algo = "csg";
  std::string scheme = "mc";
  double fixed_power_mw = 0.0;
  std::uint64_t seed = 1;
  int rounds_cap = 1000;
  int exact_limit = 10;
  std::string schedule = "random-permutation";
  std::string init = "greedy-join";
  bool circuitry_aware = false;
  std::string out;
  std::string trace;
};

int CmdRun(const RunArgs& a) {
  const mpbt::NetworkInstance instance = mpbt::ReadInstanceFile(a.instance);
  if (a.algo == "milp-export") {
    mpbt::ExportLp(mpbt::BuildMilp(instance), a.out.empty() ? "model.lp" : a.out);
    return kExitOk;
  }
  mpbt::ExperimentConfig config;
  config.seed = a.seed;
  config.round_cap = a.rounds_cap;
  config.exact_limit = a.exact_limit;
  config.schedule = mpbt::ParseSchedule(a.schedule);
  config.init = mpbt::ParseInitPolicy(a.init);
  config.circuitry_aware_baselines = a.circuitry_aware;
  if (a.fixed_power_mw > 0) config.fixed_power_mw = a.fixed_power_mw;

  mpbt::AlgorithmResult result;
  std::string label = a.algo;
  if (a.algo == "csg") {
    // Free-standing game run: the scheme and power regime come from flags.
    mpbt::CostScheme scheme;
    scheme.kind = mpbt::ParseScheme(a.scheme);
    if (a.fixed_power_mw > 0) scheme.power = mpbt::PowerModel::Fixed(a.fixed_power_mw * 1e-3);
    mpbt::Validate(scheme);
    label = "csg-" + a.scheme;
    const mpbt::BroadcastTree start = mpbt::InitializeTree(instance, config.init, scheme, a.seed);
    mpbt::GameTrace trace = mpbt::RunBestResponseDynamics(
        start, scheme, instance, {config.schedule, a.seed, a.rounds_cap, true});
    result.tree = trace.final_tree;
    result.reporting_model = scheme.power;
    result.scheme = scheme;
    result.metrics.outcome = std::string(mpbt::OutcomeName(trace.outcome));
    result.metrics.converged = trace.outcome == mpbt::Outcome::kConvergedNE;
    result.metrics.iterations =
        (config.init == mpbt::InitPolicy::kGreedyJoin ? instance.receiver_count() : 0) +
        trace.changes;
    result.metrics.network_power =
        mpbt::NetworkPower(*result.tree, instance, result.reporting_model);
    result.metrics.normalized_power =
        result.metrics.network_power / instance.mean_power_budget();
    result.metrics.transmitters = static_cast<int>(result.tree->transmitters().size());
    result.trace = std::move(trace);
  } else {
    result = mpbt::RunAlgorithm(mpbt::ParseAlgorithm(a.algo), instance, config, a.seed, true);
    if (result.metrics.status != "ok") {
      std::cerr << "error: " << result.metrics.status << "\n";
      for (mpbt::ErrorCode code :
           {mpbt::ErrorCode::kDisconnected, mpbt::ErrorCode::kDisconnectedAtFixedPower,
            mpbt::ErrorCode::kInfeasibleChild, mpbt::ErrorCode::kEmptyActionSet}) {
        if (result.metrics.status == mpbt::ErrorCodeName(code)) return kExitInfeasible;
      }
      return kExitInvalid;
    }
  }

  if (!a.out.empty()) {
    mpbt::WriteTextFile(a.out,
                        mpbt::TreeToJson(*result.tree, instance, result.reporting_model) + "\n");
  }
  if (!a.trace.empty() && result.trace && result.scheme) {
    mpbt::WriteTextFile(a.trace, mpbt::TraceToJsonLines(*result.trace, instance, *result.scheme));
  }
  const mpbt::RunMetrics& m = result.metrics;
  nlohmann::ordered_json record;
  record["algorithm"] = label;
  record["outcome"] = m.outcome;
  record["converged"] = m.converged;
  record["network_power"] = m.network_power;
  record["normalized_power"] = m.normalized_power;
  record["iterations"] = m.iterations;
  record["transmitters"] = m.transmitters;
  if (result.trace) record["rounds"] = result.trace->rounds;
  std::cout << record.dump() << "\n";
  if (result.trace && result.trace->outcome != mpbt::Outcome::kConvergedNE) {
    return kExitNotConverged;
  }
  return kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::string summary;
  int workers = 0;
  bool timing = false;
};

int CmdExperiment(const ExperimentArgs& a) {
  mpbt::ExperimentConfig config = mpbt::ConfigFromJson(mpbt::ReadTextFile(a.config));
  if (!a.out.empty()) config.output = a.out;
  if (!a.summary.empty()) config.summary_output = a.summary;
  if (a.workers > 0) config.workers = a.workers;
  if (a.timing) config.include_timing = true;
  const mpbt::ExperimentResult result = mpbt::RunExperiment(config);
  std::ostringstream runs, summary;
  mpbt::WriteRunsCsv(runs, result.rows, config.include_timing);
  mpbt::WriteSummaryCsv(summary, result.summary);
  Emit(config.output, runs.str());
  if (!config.summary_output.empty()) {
    mpbt::WriteTextFile(config.summary_output, summary.str());
  } else {
    std::cerr << summary.str();
  }
  return kExitOk;
}

struct PoaArgs {
  std::string ns = "2,4,8,16";
  std::string alphas = "3";
  std::string p_cs = "0.000001";
  double epsilon = 0.0;
  bool verify = false;
  int exact_limit = 10;
  std::string out;
  std::string report;
};

int CmdPoa(const PoaArgs& a) {
  const auto ns = SplitList<int>(a.ns);
  const auto alphas = SplitList<double>(a.alphas);
  const auto p_cs = SplitList<double>(a.p_cs);
  std::vector<mpbt::PoaSweepRow> rows;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (int n : ns) {
    for (double alpha : alphas) {
      for (double p_c : p_cs) {
        if (p_c > mpbt::LinePcThreshold(n, alpha)) {
          std::cerr << "skipped N=" << n << " alpha=" << alpha << " p_c=" << p_c
                    << ": above the line threshold\n";
          continue;
        }
        const auto row = mpbt::PoaSweep({n}, {alpha}, {p_c}, a.epsilon);
        rows.insert(rows.end(), row.begin(), row.end());
        if (a.verify) {
          reports.push_back(nlohmann::ordered_json::parse(mpbt::LineReportToJson(
              mpbt::VerifyLineInstance(n, alpha, p_c, a.epsilon, a.exact_limit))));
        }
      }
    }
  }
  std::ostringstream csv;
  mpbt::WritePoaCsv(csv, rows);
  Emit(a.out, csv.str());
  if (a.verify) {
    if (a.report.empty()) {
      std::cerr << reports.dump(2) << "\n";
    } else {
      mpbt::WriteTextFile(a.report, reports.dump(2) + "\n");
    }
  }
  return kExitOk;
}

struct MilpArgs {
  std::string instance;
  std::string out;
  std::string solution;
};

int CmdMilpExport(const MilpArgs& a) {
  const mpbt::NetworkInstance instance = mpbt::ReadInstanceFile(a.instance);
  const mpbt::MilpModel model = mpbt::BuildMilp(instance);
  if (a.solution.empty()) {
    if (a.out.empty() || a.out == "-") {
      mpbt::WriteLp(std::cout, model.program);
    } else {
      mpbt::ExportLp(model, a.out);
    }
    return kExitOk;
  }
  // With a solver's solution file: rebuild and print the tree instead.
  const mpbt::MilpSolution solution = mpbt::ReadSolutionFile(a.solution);
  const mpbt::BroadcastTree tree = mpbt::TreeFromMilpSolution(instance, model, solution);
  Emit(a.out, mpbt::TreeToJson(tree, instance) + "\n");
  return kExitOk;
}

struct SearchArgs {
  long candidates = 100000;
  int max_nodes = 8;
  double area = 100.0;
  std::uint64_t seed = 1;
  std::string out;
};

int CmdEsSearch(const SearchArgs& a) {
  mpbt::EsCycleSearchOptions options;
  options.max_candidates = a.candidates;
  options.max_nodes = a.max_nodes;
  options.area_side = a.area;
  options.seed = a.seed;
  const auto witness = mpbt::SearchEsCycle(options);
  if (!witness) {
    std::cerr << "no cycle found in " << a.candidates << " candidates\n";
    return kExitNotConverged;
  }
  Emit(a.out, mpbt::EsWitnessToJson(*witness));
  std::cerr << "cycle of length " << witness->cycle.size() - 1 << " after "
            << witness->candidates << " candidates\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-power broadcast trees: games, heuristics and exact optima"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--config", gen.config, "Experiment config supplying the ranges");
  gen_cmd->add_option("--nodes", gen.nodes, "Total node count |Q|, source included");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_flag("--raw", gen.raw, "Skip the connectivity redraws");
  gen_cmd->add_option("--out", gen.out, "Output path (stdout when absent)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Build one broadcast tree");
  run_cmd->add_option("--instance", run.instance, "Instance JSON")->required();
  run_cmd->add_option("--algo", run.algo,
                      "csg, bip, bipsw, bdp, gbbtc, exact or milp-export");
  run_cmd->add_option("--scheme", run.scheme, "Cost scheme for csg: mc, sv or es");
  run_cmd->add_option("--fixed-power-mw", run.fixed_power_mw, "Fixed transmit power [mW]");
  run_cmd->add_option("--seed", run.seed, "Seed for the schedule and the initial tree");
  run_cmd->add_option("--rounds-cap", run.rounds_cap, "Round cap for the dynamics");
  run_cmd->add_option("--exact-limit", run.exact_limit, "Receiver limit of the exact solver");
  run_cmd->add_option("--schedule", run.schedule,
                      "random-permutation, round-robin or random-single");
  run_cmd->add_option("--init", run.init, "greedy-join, bip-init or min-power-path");
  run_cmd->add_flag("--circuitry-aware", run.circuitry_aware,
                    "Let the heuristics charge circuitry power");
  run_cmd->add_option("--out", run.out, "Tree JSON (LP file for milp-export)");
  run_cmd->add_option("--trace", run.trace, "Trace JSON lines for game runs");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a Monte-Carlo sweep");
  exp_cmd->add_option("--config", exp.config, "Experiment config JSON")->required();
  exp_cmd->add_option("--out", exp.out, "Per-run CSV (overrides the config)");
  exp_cmd->add_option("--summary", exp.summary, "Summary CSV (overrides the config)");
  exp_cmd->add_option("--workers", exp.workers, "Worker threads");
  exp_cmd->add_flag("--timing", exp.timing, "Add wall-clock column");

  PoaArgs poa;
  auto* poa_cmd = app.add_subcommand("poa", "Line-topology price-of-anarchy sweep");
  poa_cmd->add_option("--n", poa.ns, "Comma-separated receiver counts");
  poa_cmd->add_option("--alpha", poa.alphas, "Comma-separated path-loss exponents");
  poa_cmd->add_option("--pc", poa.p_cs, "Comma-separated normalized circuitry powers");
  poa_cmd->add_option("--epsilon", poa.epsilon, "Perturbation on relay links");
  poa_cmd->add_flag("--verify", poa.verify, "Also solve each line exactly");
  poa_cmd->add_option("--exact-limit", poa.exact_limit, "Receiver limit for --verify");
  poa_cmd->add_option("--out", poa.out, "CSV path (stdout when absent)");
  poa_cmd->add_option("--report", poa.report, "JSON reports for --verify");

  MilpArgs milp;
  auto* milp_cmd = app.add_subcommand("milp-export", "Write the integer program as an LP file");
  milp_cmd->add_option("--instance", milp.instance, "Instance JSON")->required();
  milp_cmd->add_option("--out", milp.out, "LP path, or tree JSON with --solution");
  milp_cmd->add_option("--solution", milp.solution,
                       "Solver output (name = value lines) to turn into a tree");

  SearchArgs search;
  auto* search_cmd =
      app.add_subcommand("es-search", "Search for equal-share best-response cycles");
  search_cmd->add_option("--max-candidates", search.candidates, "Instances to try");
  search_cmd->add_option("--max-nodes", search.max_nodes, "Largest |Q|");
  search_cmd->add_option("--area", search.area, "Area side [m]");
  search_cmd->add_option("--seed", search.seed, "Search seed");
  search_cmd->add_option("--out", search.out, "Witness JSON (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*gen_cmd) return CmdGen(gen);
    if (*run_cmd) return CmdRun(run);
    if (*exp_cmd) return CmdExperiment(exp);
    if (*poa_cmd) return CmdPoa(poa);
    if (*milp_cmd) return CmdMilpExport(milp);
    if (*search_cmd) return CmdEsSearch(search);
  } catch (const mpbt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
  return kExitInvalid;
}
