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

#include "mpbt/instance_io.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mpbt/error.h"

namespace mpbt {

std::string InstanceToJson(const NetworkInstance& instance) {
  nlohmann::ordered_json doc;
  doc["source"] = instance.id(instance.source());
  if (instance.has_channel()) {
    const ChannelParams& c = *instance.channel();
    doc["channel"] = {{"wavelength", c.wavelength},
                      {"ref_distance", c.ref_distance},
                      {"alpha", c.alpha},
                      {"gamma_th_db", LinearToDb(c.gamma_th)},
                      {"noise_dbm", WattsToDbm(c.sigma2)}};
  }
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const NodeParams& n : instance.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"x", n.position.x},
                     {"y", n.position.y},
                     {"p_max", n.p_max},
                     {"p_c", n.p_c},
                     {"eta", n.eta}});
  }
  doc["nodes"] = std::move(nodes);
  if (!instance.has_channel()) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (NodeIndex i = 0; i < instance.size(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (NodeIndex j = 0; j < instance.size(); ++j) {
        const double p = instance.required_power(i, j);
        row.push_back(p == kInfeasible ? nlohmann::ordered_json(nullptr)
                                       : nlohmann::ordered_json(p));
      }
      rows.push_back(std::move(row));
    }
    doc["required_power"] = std::move(rows);
  }
  return doc.dump(2) + "\n";
}

NetworkInstance InstanceFromJson(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  try {
    std::vector<NodeParams> nodes;
    for (const auto& rec : doc.at("nodes")) {
      NodeParams n;
      n.id = rec.at("id").get<int>();
      n.position = {rec.value("x", 0.0), rec.value("y", 0.0)};
      n.p_max = rec.at("p_max").get<double>();
      n.p_c = rec.at("p_c").get<double>();
      n.eta = rec.value("eta", 0.3);
      nodes.push_back(n);
    }
    const int source = doc.at("source").get<int>();
    if (doc.contains("required_power")) {
      const auto& rows = doc.at("required_power");
      const std::size_t n = nodes.size();
      if (rows.size() != n) throw Error(ErrorCode::kParseError, "required_power must be n x n");
      std::vector<double> required;
      for (const auto& row : rows) {
        if (row.size() != n) throw Error(ErrorCode::kParseError, "required_power must be n x n");
        for (const auto& v : row) required.push_back(v.is_null() ? kInfeasible : v.get<double>());
      }
      return NetworkInstance::FromRequiredPowers(std::move(nodes), source, std::move(required));
    }
    const auto& c = doc.at("channel");
    ChannelParams channel;
    channel.wavelength = c.value("wavelength", channel.wavelength);
    channel.ref_distance = c.value("ref_distance", channel.ref_distance);
    channel.alpha = c.value("alpha", channel.alpha);
    channel.gamma_th = DbToLinear(c.value("gamma_th_db", LinearToDb(channel.gamma_th)));
    channel.sigma2 = DbmToWatts(c.value("noise_dbm", WattsToDbm(channel.sigma2)));
    return NetworkInstance::Build(std::move(nodes), source, channel);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  if (path.empty()) throw Error(ErrorCode::kIoError, "empty output path");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

void WriteInstanceFile(const std::string& path, const NetworkInstance& instance) {
  WriteTextFile(path, InstanceToJson(instance));
}

NetworkInstance ReadInstanceFile(const std::string& path) {
  return InstanceFromJson(ReadTextFile(path));
}

}  // namespace mpbt
