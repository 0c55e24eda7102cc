// Copyright 2026 The MRFC Authors
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

#ifndef MRFC_NETWORK_IO_HPP_
#define MRFC_NETWORK_IO_HPP_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "mrfc/network.hpp"

namespace mrfc {

// Network file schema (JSON, strict: unknown keys are rejected):
//
//   {
//     "format": "mrfc-network",
//     "version": 1,
//     "nodes": <int >= 2>,
//     "links": [{"tx": <int>, "rx": <int>, "capacity": <number > 0>}, ...],
//     "sessions": [{"src": <int>, "dst": <int>,
//                   "utility": {"family": "log", "weight": <number > 0>}
//                            | {"family": "alpha_fair", "weight": w,
//                               "alpha": a}}, ...]
//   }
inline constexpr const char* kNetworkFormat = "mrfc-network";
inline constexpr int kNetworkFormatVersion = 1;

nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& doc);

Instance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const Instance& instance);

// Writes `content` to a sibling temporary and renames it over `path`, so a
// failed write never leaves a partial file behind.
void write_file_atomically(const std::filesystem::path& path,
                           const std::string& content);

// Throws InvalidInputError naming the first key of `object` not in `allowed`.
void reject_unknown_keys(const nlohmann::json& object,
                         std::initializer_list<const char*> allowed,
                         const char* context);

}  // namespace mrfc

#endif  // MRFC_NETWORK_IO_HPP_
