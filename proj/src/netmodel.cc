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

#include "mpbt/netmodel.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "mpbt/error.h"

namespace mpbt {

double Distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }
double LinearToDb(double linear) { return 10.0 * std::log10(linear); }
double DbmToWatts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double WattsToDbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double ChannelGain(double distance, const ChannelParams& channel) {
  const double l0 = channel.ref_distance;
  const double d = std::max(distance, l0);
  const double near = channel.wavelength / (4.0 * std::numbers::pi * l0);
  return near * near * std::pow(l0 / d, channel.alpha);
}

double RequiredPower(double gain, double eta, const ChannelParams& channel) {
  return channel.gamma_th * channel.sigma2 / (eta * gain);
}

namespace {

void CheckNodes(const std::vector<NodeParams>& nodes, int source_id) {
  if (nodes.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "an instance needs at least 2 nodes");
  }
  std::set<int> ids;
  for (const NodeParams& n : nodes) {
    if (!ids.insert(n.id).second) {
      throw Error(ErrorCode::kDuplicateNodeId, "node id " + std::to_string(n.id));
    }
    if (!(n.p_max > 0.0) || !(n.p_c >= 0.0) || !(n.eta > 0.0 && n.eta < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "node " + std::to_string(n.id) +
                      " needs p_max > 0, p_c >= 0 and 0 < eta < 1");
    }
  }
  if (!ids.contains(source_id)) {
    throw Error(ErrorCode::kSourceMissing, "source id " + std::to_string(source_id));
  }
}

NodeIndex IndexOfId(const std::vector<NodeParams>& nodes, int id) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return static_cast<NodeIndex>(i);
  }
  return kNoNode;
}

}  // namespace

NetworkInstance NetworkInstance::Build(std::vector<NodeParams> nodes,
                                       int source_id,
                                       const ChannelParams& channel) {
  CheckNodes(nodes, source_id);
  if (!(channel.wavelength > 0 && channel.ref_distance > 0 && channel.alpha > 0 &&
        channel.gamma_th > 0 && channel.sigma2 > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "channel parameters must be positive");
  }
  NetworkInstance inst;
  inst.nodes_ = std::move(nodes);
  inst.source_ = IndexOfId(inst.nodes_, source_id);
  inst.channel_ = channel;
  const int n = inst.size();
  inst.gain_.assign(static_cast<std::size_t>(n) * n, 0.0);
  inst.required_.assign(static_cast<std::size_t>(n) * n, kInfeasible);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double g = ChannelGain(
          Distance(inst.nodes_[i].position, inst.nodes_[j].position), channel);
      inst.gain_[static_cast<std::size_t>(i) * n + j] = g;
      if (i != inst.source_) {
        inst.required_[static_cast<std::size_t>(i) * n + j] =
            RequiredPower(g, inst.nodes_[j].eta, channel);
      }
    }
  }
  inst.Finalize();
  return inst;
}

NetworkInstance NetworkInstance::FromRequiredPowers(std::vector<NodeParams> nodes,
                                                    int source_id,
                                                    std::vector<double> required) {
  CheckNodes(nodes, source_id);
  const std::size_t n = nodes.size();
  if (required.size() != n * n) {
    throw Error(ErrorCode::kInvalidArgument, "required-power matrix must be n x n");
  }
  NetworkInstance inst;
  inst.nodes_ = std::move(nodes);
  inst.source_ = IndexOfId(inst.nodes_, source_id);
  inst.required_ = std::move(required);
  for (std::size_t i = 0; i < n; ++i) {
    inst.required_[i * n + i] = kInfeasible;
    inst.required_[static_cast<std::size_t>(inst.source_) * n + i] = kInfeasible;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(inst.required_[i * n + j]) || inst.required_[i * n + j] < 0) {
        throw Error(ErrorCode::kInvalidArgument, "required powers must be >= 0");
      }
    }
  }
  inst.Finalize();
  return inst;
}

void NetworkInstance::Finalize() {
  const int n = size();
  unicast_.assign(static_cast<std::size_t>(n) * n, kInfeasible);
  neighbors_.assign(n, {});
  coverage_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double req = required_power(i, j);
      if (i != j && i != source_ && req <= nodes_[j].p_max) {
        unicast_[static_cast<std::size_t>(i) * n + j] = req;
        neighbors_[i].push_back(j);
        coverage_[j].push_back(i);
      }
    }
  }
}

std::optional<NodeIndex> NetworkInstance::index_of(int id) const {
  const NodeIndex i = IndexOfId(nodes_, id);
  if (i == kNoNode) return std::nullopt;
  return i;
}

std::vector<NodeIndex> NetworkInstance::receivers() const {
  std::vector<NodeIndex> out;
  out.reserve(nodes_.size() - 1);
  for (int i = 0; i < size(); ++i) {
    if (i != source_) out.push_back(i);
  }
  return out;
}

double NetworkInstance::gain(NodeIndex i, NodeIndex j) const {
  if (gain_.empty()) return 0.0;
  return gain_[static_cast<std::size_t>(i) * size() + j];
}

bool NetworkInstance::link_usable(NodeIndex parent, NodeIndex child,
                                  const PowerModel& model) const {
  const double p = unicast_power(child, parent);
  if (p == kInfeasible) return false;
  return !model.fixed_transmit_power || p <= *model.fixed_transmit_power;
}

double NetworkInstance::mean_power_budget() const {
  double sum = 0.0;
  for (const NodeParams& n : nodes_) sum += n.p_c + n.p_max;
  return sum / static_cast<double>(nodes_.size());
}

bool NetworkInstance::connected(const PowerModel& model) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::deque<NodeIndex> queue{source_};
  seen[source_] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const NodeIndex j = queue.front();
    queue.pop_front();
    for (NodeIndex i : coverage_[j]) {
      if (!seen[i] && link_usable(j, i, model)) {
        seen[i] = 1;
        ++reached;
        queue.push_back(i);
      }
    }
  }
  return reached == size();
}

double RequiredUnicastPower(NodeIndex child, NodeIndex parent,
                            const NetworkInstance& instance) {
  return instance.required_power(child, parent);
}

double TransmitPower(NodeIndex parent, std::span<const NodeIndex> children,
                     const NetworkInstance& instance, const PowerModel& model) {
  double tx = 0.0;
  for (NodeIndex c : children) {
    if (!instance.link_usable(parent, c, model)) {
      throw Error(ErrorCode::kInfeasibleChild,
                  "node " + std::to_string(instance.id(c)) + " is not served by " +
                      std::to_string(instance.id(parent)));
    }
    tx = std::max(tx, instance.unicast_power(c, parent));
  }
  if (children.empty()) return 0.0;
  return model.fixed_transmit_power ? *model.fixed_transmit_power : tx;
}

double NodePower(NodeIndex parent, std::span<const NodeIndex> children,
                 const NetworkInstance& instance, const PowerModel& model) {
  if (children.empty()) return 0.0;
  const double circuitry = model.include_circuitry ? instance.node(parent).p_c : 0.0;
  return circuitry + TransmitPower(parent, children, instance, model);
}

double LinkTotalPower(NodeIndex parent, NodeIndex child,
                      const NetworkInstance& instance, const PowerModel& model) {
  const NodeIndex one[] = {child};
  return NodePower(parent, one, instance, model);
}

void Validate(const RandomInstanceParams& p) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (!(p.area_side > 0)) fail("area side must be positive");
  if (p.node_count < 2) fail("node count must be at least 2");
  if (!(p.p_max_low > 0 && p.p_max_low <= p.p_max_high)) fail("bad p_max range");
  if (!(p.p_c_low >= 0 && p.p_c_low <= p.p_c_high)) fail("bad p_c range");
  if (!(p.eta > 0 && p.eta < 1)) fail("eta must lie in (0, 1)");
}

NetworkInstance GenerateRandomInstance(const RandomInstanceParams& params,
                                       std::uint64_t seed) {
  Validate(params);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, params.area_side);
  std::uniform_real_distribution<double> p_max(params.p_max_low, params.p_max_high);
  std::uniform_real_distribution<double> p_c(params.p_c_low, params.p_c_high);
  std::vector<NodeParams> nodes(params.node_count);
  for (int i = 0; i < params.node_count; ++i) {
    nodes[i].id = i;
    nodes[i].position.x = coord(rng);
    nodes[i].position.y = coord(rng);
  }
  for (NodeParams& n : nodes) {
    n.p_max = params.p_max_low == params.p_max_high ? params.p_max_low : p_max(rng);
    n.p_c = params.p_c_low == params.p_c_high ? params.p_c_low : p_c(rng);
    n.eta = params.eta;
  }
  std::uniform_int_distribution<int> pick(0, params.node_count - 1);
  const int source = pick(rng);
  return NetworkInstance::Build(std::move(nodes), source, params.channel);
}

NetworkInstance LineInstance(int receivers, double alpha, double p_c,
                             double epsilon) {
  if (receivers < 1) {
    throw Error(ErrorCode::kInvalidArgument, "line needs at least one receiver");
  }
  const int n = receivers + 1;
  const double spacing = 1.0 / receivers;
  std::vector<NodeParams> nodes(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = NodeParams{i, {i * spacing, 0.0}, 1.0, p_c, 0.5};
  }
  std::vector<double> required(static_cast<std::size_t>(n) * n, kInfeasible);
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double p = std::pow(std::abs(i - j) / static_cast<double>(receivers), alpha);
      if (j != 0) p += epsilon;
      required[static_cast<std::size_t>(i) * n + j] = p;
    }
  }
  return NetworkInstance::FromRequiredPowers(std::move(nodes), 0, std::move(required));
}

}  // namespace mpbt
