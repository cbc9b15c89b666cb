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

// JSON persistence for network instances.
//
// {
//   "source": <id>,
//   "channel": {"wavelength": m, "ref_distance": m, "alpha": x,
//               "gamma_th_db": dB, "noise_dbm": dBm},
//   "nodes": [{"id": n, "x": m, "y": m, "p_max": W, "p_c": W, "eta": x}, ...],
//   "required_power": [[W or null, ...], ...]
// }
//
// Geometric instances carry "channel"; abstract ones carry
// "required_power" instead (row = child, column = parent, in node order,
// null for links that cannot be formed).
#ifndef MPBT_INSTANCE_IO_H_
#define MPBT_INSTANCE_IO_H_

#include <string>

#include "mpbt/netmodel.h"

namespace mpbt {

std::string InstanceToJson(const NetworkInstance& instance);
// Throws ParseError plus the errors of NetworkInstance::Build.
NetworkInstance InstanceFromJson(const std::string& text);

// Throw IoError.
void WriteInstanceFile(const std::string& path, const NetworkInstance& instance);
NetworkInstance ReadInstanceFile(const std::string& path);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace mpbt

#endif  // MPBT_INSTANCE_IO_H_
