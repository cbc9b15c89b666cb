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

#include "mpbt/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "mpbt/baselines.h"
#include "mpbt/error.h"
#include "mpbt/exact.h"

namespace mpbt {

namespace {

struct AlgorithmInfo {
  Algorithm algorithm;
  std::string_view name;
};

constexpr AlgorithmInfo kAlgorithms[] = {
    {Algorithm::kCsgMc, "csg-mc"}, {Algorithm::kCsgSv, "csg-sv"},
    {Algorithm::kCsgEs, "csg-es"}, {Algorithm::kBip, "bip"},
    {Algorithm::kBipSweep, "bipsw"}, {Algorithm::kBdp, "bdp"},
    {Algorithm::kGbbtc, "gbbtc"},  {Algorithm::kExact, "exact"},
};

bool UsesFixedPower(Algorithm a) { return a == Algorithm::kCsgEs || a == Algorithm::kGbbtc; }

void Check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

std::string_view AlgorithmName(Algorithm algorithm) {
  for (const AlgorithmInfo& info : kAlgorithms) {
    if (info.algorithm == algorithm) return info.name;
  }
  return "?";
}

Algorithm ParseAlgorithm(std::string_view name) {
  for (const AlgorithmInfo& info : kAlgorithms) {
    if (info.name == name) return info.algorithm;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

const std::vector<Algorithm>& AllAlgorithms() {
  static const std::vector<Algorithm> all = [] {
    std::vector<Algorithm> v;
    for (const AlgorithmInfo& info : kAlgorithms) v.push_back(info.algorithm);
    return v;
  }();
  return all;
}

RandomInstanceParams ExperimentConfig::instance_params(int node_count) const {
  RandomInstanceParams p;
  p.area_side = area_side;
  p.node_count = node_count;
  p.p_max_low = p_max_low_mw * 1e-3;
  p.p_max_high = p_max_high_mw * 1e-3;
  p.p_c_low = p_c_low_mw * 1e-3;
  p.p_c_high = p_c_high_mw * 1e-3;
  p.eta = eta;
  p.channel = channel;
  return p;
}

void Validate(const ExperimentConfig& c) {
  Check(c.area_side > 0, "area_side must be positive");
  Check(!c.node_counts.empty(), "node_counts must not be empty");
  for (int n : c.node_counts) Check(n >= 2, "node counts must be >= 2");
  Check(c.runs >= 1, "runs must be >= 1");
  Check(!c.algorithms.empty(), "algorithms must not be empty");
  Check(c.fixed_power_mw > 0, "fixed_power_mw must be positive");
  Check(c.p_max_low_mw > 0 && c.p_max_low_mw <= c.p_max_high_mw, "bad p_max range");
  Check(c.p_c_low_mw >= 0 && c.p_c_low_mw <= c.p_c_high_mw, "bad p_c range");
  Check(c.eta > 0 && c.eta < 1, "eta must lie in (0, 1)");
  Check(c.round_cap >= 1, "round_cap must be >= 1");
  Check(c.exact_limit >= 1, "exact_limit must be >= 1");
  Check(c.max_instance_attempts >= 1, "max_instance_attempts must be >= 1");
  Check(c.workers >= 1, "workers must be >= 1");
  for (int n : c.node_counts) Validate(c.instance_params(n));
}

ExperimentConfig ConfigFromJson(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  static const char* kKeys[] = {
      "area_side", "node_counts", "runs", "algorithms", "fixed_power_mw", "channel",
      "p_max_mw", "p_c_mw", "eta", "seed", "schedule", "init", "round_cap", "exact_limit",
      "circuitry_aware_baselines", "max_instance_attempts", "workers", "include_timing",
      "output", "summary_output"};
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
    }
  }
  if (!doc.contains("seed")) throw Error(ErrorCode::kInvalidArgument, "config needs a seed");
  ExperimentConfig c;
  try {
    c.area_side = doc.value("area_side", c.area_side);
    c.node_counts = doc.value("node_counts", c.node_counts);
    c.runs = doc.value("runs", c.runs);
    if (doc.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& name : doc.at("algorithms")) {
        c.algorithms.push_back(ParseAlgorithm(name.get<std::string>()));
      }
    }
    c.fixed_power_mw = doc.value("fixed_power_mw", c.fixed_power_mw);
    if (doc.contains("channel")) {
      const auto& ch = doc.at("channel");
      c.channel.wavelength = ch.value("wavelength", c.channel.wavelength);
      c.channel.ref_distance = ch.value("ref_distance", c.channel.ref_distance);
      c.channel.alpha = ch.value("alpha", c.channel.alpha);
      if (ch.contains("gamma_th_db")) c.channel.gamma_th = DbToLinear(ch.at("gamma_th_db"));
      if (ch.contains("noise_dbm")) c.channel.sigma2 = DbmToWatts(ch.at("noise_dbm"));
    }
    if (doc.contains("p_max_mw")) {
      const auto r = doc.at("p_max_mw").get<std::vector<double>>();
      Check(r.size() == 2, "p_max_mw must be [low, high]");
      c.p_max_low_mw = r[0];
      c.p_max_high_mw = r[1];
    }
    if (doc.contains("p_c_mw")) {
      const auto r = doc.at("p_c_mw").get<std::vector<double>>();
      Check(r.size() == 2, "p_c_mw must be [low, high]");
      c.p_c_low_mw = r[0];
      c.p_c_high_mw = r[1];
    }
    c.eta = doc.value("eta", c.eta);
    c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("schedule")) c.schedule = ParseSchedule(doc.at("schedule").get<std::string>());
    if (doc.contains("init")) c.init = ParseInitPolicy(doc.at("init").get<std::string>());
    c.round_cap = doc.value("round_cap", c.round_cap);
    c.exact_limit = doc.value("exact_limit", c.exact_limit);
    c.circuitry_aware_baselines = doc.value("circuitry_aware_baselines", false);
    c.max_instance_attempts = doc.value("max_instance_attempts", c.max_instance_attempts);
    c.workers = doc.value("workers", c.workers);
    c.include_timing = doc.value("include_timing", false);
    c.output = doc.value("output", std::string());
    c.summary_output = doc.value("summary_output", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  Validate(c);
  return c;
}

std::string ConfigToJson(const ExperimentConfig& c) {
  nlohmann::ordered_json doc;
  doc["area_side"] = c.area_side;
  doc["node_counts"] = c.node_counts;
  doc["runs"] = c.runs;
  nlohmann::ordered_json algos = nlohmann::ordered_json::array();
  for (Algorithm a : c.algorithms) algos.push_back(std::string(AlgorithmName(a)));
  doc["algorithms"] = algos;
  doc["fixed_power_mw"] = c.fixed_power_mw;
  doc["channel"] = {{"wavelength", c.channel.wavelength},
                    {"ref_distance", c.channel.ref_distance},
                    {"alpha", c.channel.alpha},
                    {"gamma_th_db", LinearToDb(c.channel.gamma_th)},
                    {"noise_dbm", WattsToDbm(c.channel.sigma2)}};
  doc["p_max_mw"] = {c.p_max_low_mw, c.p_max_high_mw};
  doc["p_c_mw"] = {c.p_c_low_mw, c.p_c_high_mw};
  doc["eta"] = c.eta;
  doc["seed"] = c.seed;
  doc["schedule"] = std::string(ScheduleName(c.schedule));
  doc["init"] = std::string(InitPolicyName(c.init));
  doc["round_cap"] = c.round_cap;
  doc["exact_limit"] = c.exact_limit;
  doc["circuitry_aware_baselines"] = c.circuitry_aware_baselines;
  doc["max_instance_attempts"] = c.max_instance_attempts;
  doc["workers"] = c.workers;
  doc["include_timing"] = c.include_timing;
  doc["output"] = c.output;
  doc["summary_output"] = c.summary_output;
  return doc.dump(2) + "\n";
}

std::optional<CostScheme> AlgorithmScheme(Algorithm algorithm, const ExperimentConfig& config) {
  switch (algorithm) {
    case Algorithm::kCsgMc: return CostScheme::Marginal();
    case Algorithm::kCsgSv: return CostScheme::Shapley();
    case Algorithm::kCsgEs: {
      CostScheme s = CostScheme::EqualShare();
      s.power = PowerModel::Fixed(config.fixed_power());
      return s;
    }
    case Algorithm::kGbbtc: return GbbtcScheme(config.fixed_power());
    default: return std::nullopt;
  }
}

AlgorithmResult RunAlgorithm(Algorithm algorithm, const NetworkInstance& instance,
                             const ExperimentConfig& config, std::uint64_t seed,
                             bool record_steps) {
  AlgorithmResult result;
  result.scheme = AlgorithmScheme(algorithm, config);
  const BaselineOptions baseline{config.circuitry_aware_baselines};
  const BrdOptions brd{config.schedule, seed, config.round_cap, record_steps};
  const long receivers = instance.receiver_count();
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (algorithm) {
      case Algorithm::kCsgMc:
      case Algorithm::kCsgSv:
      case Algorithm::kCsgEs: {
        const CostScheme& scheme = *result.scheme;
        BroadcastTree tree = InitializeTree(instance, config.init, scheme, seed);
        result.trace = RunBestResponseDynamics(std::move(tree), scheme, instance, brd);
        result.reporting_model = scheme.power;
        result.metrics.iterations =
            (config.init == InitPolicy::kGreedyJoin ? receivers : 0) + result.trace->changes;
        break;
      }
      case Algorithm::kBip:
        result.tree = Bip(instance, baseline);
        result.metrics.iterations = receivers;
        result.metrics.converged = true;
        break;
      case Algorithm::kBipSweep: {
        long moves = 0;
        result.tree = Sweep(Bip(instance, baseline), instance, &moves);
        result.metrics.iterations = receivers + moves;
        result.metrics.converged = true;
        break;
      }
      case Algorithm::kBdp: {
        BaselineRun run = Bdp(instance, baseline);
        result.tree = std::move(run.tree);
        result.metrics.iterations = run.iterations;
        result.metrics.converged = run.converged;
        break;
      }
      case Algorithm::kGbbtc:
        result.trace = Gbbtc(instance, config.fixed_power(), brd);
        // Circuitry is ignored while forming the tree but charged when
        // reporting.
        result.reporting_model = PowerModel::Fixed(config.fixed_power());
        result.metrics.iterations = receivers + result.trace->changes;
        break;
      case Algorithm::kExact:
        result.tree = SolveExact(instance, config.exact_limit);
        result.metrics.converged = true;
        break;
    }
    if (result.trace) {
      result.tree = result.trace->final_tree;
      result.metrics.outcome = std::string(OutcomeName(result.trace->outcome));
      result.metrics.converged = result.trace->outcome == Outcome::kConvergedNE;
    }
    result.metrics.network_power = NetworkPower(*result.tree, instance, result.reporting_model);
    result.metrics.normalized_power =
        result.metrics.network_power / instance.mean_power_budget();
    result.metrics.transmitters = static_cast<int>(result.tree->transmitters().size());
  } catch (const Error& e) {
    result.metrics.status = std::string(ErrorCodeName(e.code()));
    result.metrics.converged = false;
    result.metrics.network_power = std::nan("");
    result.metrics.normalized_power = std::nan("");
  }
  result.metrics.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  // splitmix64 finalizer applied over the inputs in turn
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(master);
  h = mix(h ^ a);
  h = mix(h ^ b);
  h = mix(h ^ c);
  return h;
}

NetworkInstance DrawInstance(const ExperimentConfig& config, int node_count, int run,
                             int* attempts) {
  const bool need_fixed =
      std::any_of(config.algorithms.begin(), config.algorithms.end(), UsesFixedPower);
  const RandomInstanceParams params = config.instance_params(node_count);
  const PowerModel fixed = PowerModel::Fixed(config.fixed_power());
  for (int attempt = 0; attempt < config.max_instance_attempts; ++attempt) {
    NetworkInstance inst = GenerateRandomInstance(
        params, DeriveSeed(config.seed, static_cast<std::uint64_t>(node_count),
                           static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(attempt)));
    if (inst.connected() && (!need_fixed || inst.connected(fixed))) {
      if (attempts) *attempts = attempt + 1;
      return inst;
    }
  }
  throw Error(ErrorCode::kLimitExceeded,
              "no connected instance with " + std::to_string(node_count) + " nodes after " +
                  std::to_string(config.max_instance_attempts) + " draws");
}

const SummaryRow& ExperimentResult::find(Algorithm algorithm, int node_count) const {
  for (const SummaryRow& r : summary) {
    if (r.algorithm == algorithm && r.node_count == node_count) return r;
  }
  throw Error(ErrorCode::kInvalidArgument, "no summary row for " +
                                               std::string(AlgorithmName(algorithm)) + " at " +
                                               std::to_string(node_count));
}

namespace {

std::vector<ExperimentRow> RunTask(const ExperimentConfig& config, int node_count, int run) {
  std::vector<ExperimentRow> rows;
  std::optional<NetworkInstance> instance;
  std::string failure;
  try {
    instance = DrawInstance(config, node_count, run);
  } catch (const Error& e) {
    failure = std::string(ErrorCodeName(e.code()));
  }
  for (Algorithm a : config.algorithms) {
    ExperimentRow row;
    row.seed = config.seed;
    row.node_count = node_count;
    row.run = run;
    row.algorithm = a;
    if (instance) {
      const std::uint64_t seed =
          DeriveSeed(config.seed ^ 0x5bd1e995ULL, static_cast<std::uint64_t>(node_count),
                     static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(a) + 1);
      row.metrics = RunAlgorithm(a, *instance, config, seed).metrics;
    } else {
      row.metrics.status = failure;
      row.metrics.network_power = row.metrics.normalized_power = std::nan("");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct MeanStd {
  double mean = 0.0, stddev = 0.0;
};

MeanStd Moments(const std::vector<double>& xs) {
  MeanStd m;
  if (xs.empty()) return {std::nan(""), std::nan("")};
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

}  // namespace

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  Validate(config);
  std::vector<std::pair<int, int>> tasks;
  for (int n : config.node_counts) {
    for (int run = 0; run < config.runs; ++run) tasks.emplace_back(n, run);
  }
  std::vector<std::vector<ExperimentRow>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      slots[k] = RunTask(config, tasks[k].first, tasks[k].second);
    }
  };
  const int threads = std::min<int>(config.workers, static_cast<int>(tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  ExperimentResult result;
  for (auto& slot : slots) {
    for (auto& row : slot) result.rows.push_back(std::move(row));
  }
  result.summary = Summarize(result.rows, config);
  return result;
}

std::vector<SummaryRow> Summarize(const std::vector<ExperimentRow>& rows,
                                  const ExperimentConfig& config) {
  std::vector<SummaryRow> summary;
  for (int n : config.node_counts) {
    for (Algorithm a : config.algorithms) {
      std::vector<double> norm, power, iters, tx;
      int failures = 0, converged = 0;
      for (const ExperimentRow& r : rows) {
        if (r.node_count != n || r.algorithm != a) continue;
        if (r.metrics.status != "ok") {
          ++failures;
          continue;
        }
        norm.push_back(r.metrics.normalized_power);
        power.push_back(r.metrics.network_power);
        iters.push_back(static_cast<double>(r.metrics.iterations));
        tx.push_back(r.metrics.transmitters);
        if (r.metrics.converged) ++converged;
      }
      SummaryRow s;
      s.algorithm = a;
      s.node_count = n;
      s.runs = static_cast<int>(norm.size());
      s.failures = failures;
      const MeanStd mn = Moments(norm), mp = Moments(power), mi = Moments(iters),
                    mt = Moments(tx);
      s.mean_normalized_power = mn.mean;
      s.std_normalized_power = mn.stddev;
      s.mean_network_power = mp.mean;
      s.std_network_power = mp.stddev;
      s.mean_iterations = mi.mean;
      s.std_iterations = mi.stddev;
      s.mean_transmitters = mt.mean;
      s.std_transmitters = mt.stddev;
      s.converged_fraction = s.runs ? static_cast<double>(converged) / s.runs : 0.0;
      summary.push_back(s);
    }
  }
  return summary;
}

void WriteRunsCsv(std::ostream& out, const std::vector<ExperimentRow>& rows,
                  bool include_timing) {
  out << "seed,node_count,run,algorithm,status,outcome,converged,network_power,"
         "normalized_power,iterations,transmitters";
  if (include_timing) out << ",wall_ms";
  out << '\n';
  const auto old_precision = out.precision(12);
  for (const ExperimentRow& r : rows) {
    const RunMetrics& m = r.metrics;
    out << r.seed << ',' << r.node_count << ',' << r.run << ',' << AlgorithmName(r.algorithm)
        << ',' << m.status << ',' << m.outcome << ',' << (m.converged ? 1 : 0) << ','
        << m.network_power << ',' << m.normalized_power << ',' << m.iterations << ','
        << m.transmitters;
    if (include_timing) out << ',' << m.wall_ms;
    out << '\n';
  }
  out.precision(old_precision);
}

void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "algorithm,node_count,runs,failures,mean_normalized_power,std_normalized_power,"
         "mean_network_power,std_network_power,mean_iterations,std_iterations,"
         "mean_transmitters,std_transmitters,converged_fraction\n";
  const auto old_precision = out.precision(12);
  for (const SummaryRow& s : rows) {
    out << AlgorithmName(s.algorithm) << ',' << s.node_count << ',' << s.runs << ','
        << s.failures << ',' << s.mean_normalized_power << ',' << s.std_normalized_power << ','
        << s.mean_network_power << ',' << s.std_network_power << ',' << s.mean_iterations << ','
        << s.std_iterations << ',' << s.mean_transmitters << ',' << s.std_transmitters << ','
        << s.converged_fraction << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mpbt
