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

// Geometry, channel and power primitives for multi-hop broadcast.
//
// Conventions used throughout the library:
//  * Nodes are addressed by their position in NetworkInstance::nodes()
//    (NodeIndex). NodeParams::id is an external label used for I/O only.
//  * Link quantities are indexed (child, parent): unicast_power(i, j) is the
//    transmit power node j needs so that node i decodes its message.
//  * All powers are in watts. Decibel conversion happens at I/O boundaries.

#ifndef MPBT_NETMODEL_H_
#define MPBT_NETMODEL_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace mpbt {

using NodeIndex = int;
inline constexpr NodeIndex kNoNode = -1;
inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double Distance(const Position& a, const Position& b);

struct NodeParams {
  int id = 0;
  Position position;
  double p_max = 0.0;  // maximum transmit power [W]
  double p_c = 0.0;    // circuitry power paid whenever the node transmits [W]
  double eta = 0.3;    // power amplifier efficiency, in (0, 1)
};

struct ChannelParams {
  double wavelength = 0.125;  // [m]
  double ref_distance = 1.0;  // l0 [m]
  double alpha = 3.0;         // path-loss exponent
  double gamma_th = 10.0;     // required SNR, linear
  double sigma2 = 1e-12;      // noise plus interference power [W]
};

double DbToLinear(double db);
double LinearToDb(double linear);
double DbmToWatts(double dbm);
double WattsToDbm(double watts);

// Path-loss gain (lambda / (4 pi l0))^2 (l0 / d)^alpha. Distances below the
// reference distance are clamped to it.
double ChannelGain(double distance, const ChannelParams& channel);

// gamma_th * sigma2 / (eta * gain).
double RequiredPower(double gain, double eta, const ChannelParams& channel);

// Optional transmit-power regime applied on top of an instance. The default
// is power control with circuitry: a transmitter spends
// p_c + max over its children of the unicast power. With a fixed transmit
// power every transmitter emits exactly that power and can only serve
// children whose unicast requirement does not exceed it.
struct PowerModel {
  std::optional<double> fixed_transmit_power;
  bool include_circuitry = true;

  static PowerModel Controlled() { return {}; }
  static PowerModel Fixed(double watts, bool include_circuitry = true) {
    return PowerModel{watts, include_circuitry};
  }
};

class NetworkInstance {
 public:
  // Geometric instance: gains from positions, unicast powers from the SNR
  // threshold. Throws DuplicateNodeId, SourceMissing or InvalidArgument.
  static NetworkInstance Build(std::vector<NodeParams> nodes, int source_id,
                               const ChannelParams& channel);

  // Abstract instance with explicit required powers, row-major
  // required[child * n + parent]. Entries may be kInfeasible. Positions are
  // kept for rendering only.
  static NetworkInstance FromRequiredPowers(std::vector<NodeParams> nodes,
                                            int source_id,
                                            std::vector<double> required);

  int size() const { return static_cast<int>(nodes_.size()); }
  int receiver_count() const { return size() - 1; }
  NodeIndex source() const { return source_; }
  const std::vector<NodeParams>& nodes() const { return nodes_; }
  const NodeParams& node(NodeIndex i) const { return nodes_[i]; }
  int id(NodeIndex i) const { return nodes_[i].id; }
  std::optional<NodeIndex> index_of(int id) const;

  // Receivers (every node except the source) in increasing index order.
  std::vector<NodeIndex> receivers() const;

  bool has_channel() const { return channel_.has_value(); }
  const std::optional<ChannelParams>& channel() const { return channel_; }

  // Channel gain between two nodes; 0 for abstract instances.
  double gain(NodeIndex i, NodeIndex j) const;

  // Power parent needs to reach child, regardless of its budget.
  double required_power(NodeIndex child, NodeIndex parent) const {
    return required_[static_cast<std::size_t>(child) * size() + parent];
  }
  // Required power when within the parent's budget, kInfeasible otherwise.
  double unicast_power(NodeIndex child, NodeIndex parent) const {
    return unicast_[static_cast<std::size_t>(child) * size() + parent];
  }
  bool can_reach(NodeIndex parent, NodeIndex child) const {
    return unicast_power(child, parent) != kInfeasible;
  }
  // Link usable under a power regime: feasible and, with a fixed transmit
  // power, within that power.
  bool link_usable(NodeIndex parent, NodeIndex child,
                   const PowerModel& model) const;

  // Parents able to reach `child` (its neighbor set), increasing order.
  const std::vector<NodeIndex>& neighbors(NodeIndex child) const {
    return neighbors_[child];
  }
  // Children reachable from `parent`, increasing order.
  const std::vector<NodeIndex>& coverage(NodeIndex parent) const {
    return coverage_[parent];
  }

  // Mean of p_c + p_max over all nodes.
  double mean_power_budget() const;

  // True when every receiver can be reached from the source through links
  // usable under `model`.
  bool connected(const PowerModel& model = {}) const;

 private:
  NetworkInstance() = default;
  void Finalize();

  std::vector<NodeParams> nodes_;
  NodeIndex source_ = 0;
  std::optional<ChannelParams> channel_;
  std::vector<double> gain_;
  std::vector<double> required_;
  std::vector<double> unicast_;
  std::vector<std::vector<NodeIndex>> neighbors_;
  std::vector<std::vector<NodeIndex>> coverage_;
};

// Same as instance.required_power(child, parent).
double RequiredUnicastPower(NodeIndex child, NodeIndex parent,
                            const NetworkInstance& instance);

// Transmit power of `parent` when serving `children` under `model`. Zero
// for an empty set. Throws InfeasibleChild if a child is not served.
double TransmitPower(NodeIndex parent, std::span<const NodeIndex> children,
                     const NetworkInstance& instance,
                     const PowerModel& model = {});

// Total power at a node: 0 without children, otherwise circuitry plus
// transmit power.
double NodePower(NodeIndex parent, std::span<const NodeIndex> children,
                 const NetworkInstance& instance,
                 const PowerModel& model = {});

// Power a single child would impose when served alone (p_c + p_uni).
double LinkTotalPower(NodeIndex parent, NodeIndex child,
                      const NetworkInstance& instance,
                      const PowerModel& model = {});

struct RandomInstanceParams {
  double area_side = 250.0;  // [m]
  int node_count = 10;       // |Q|, source included
  double p_max_low = 0.150, p_max_high = 0.250;
  double p_c_low = 0.050, p_c_high = 0.100;
  double eta = 0.3;
  ChannelParams channel;
};

void Validate(const RandomInstanceParams& params);

// Positions uniform in [0, side]^2, budgets uniform in their ranges, source
// drawn uniformly. Deterministic in `seed`.
NetworkInstance GenerateRandomInstance(const RandomInstanceParams& params,
                                       std::uint64_t seed);

// Source plus `receivers` nodes evenly spaced on the unit segment, in
// normalized units: the unicast power over distance d is d^alpha, p_max = 1
// and every node has circuitry power p_c. `epsilon` is added to every
// receiver-to-receiver link.
NetworkInstance LineInstance(int receivers, double alpha, double p_c,
                             double epsilon = 0.0);

}  // namespace mpbt

#endif  // MPBT_NETMODEL_H_
