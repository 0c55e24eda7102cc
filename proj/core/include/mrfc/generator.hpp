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

#ifndef MRFC_GENERATOR_HPP_
#define MRFC_GENERATOR_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "mrfc/network.hpp"

namespace mrfc {

// Random wireless-style instance: nodes uniform in a square region, links in
// both directions between every pair within `link_range`, capacity given by
// the spectral efficiency log2(1 + P d^-gamma / noise).
struct GeneratorParams {
  double region = 800.0;    // side of the square region, meters
  int nodes = 10;
  int sessions = 3;
  double link_range = 400.0;  // meters
  double power = 0.1;         // watts (100 mW)
  double path_loss = 3.5;
  double noise = 1e-10;       // watts
  double min_distance = 1.0;  // distances are clamped below this
  std::uint64_t seed = 1;
  int max_attempts = 1000;

  void validate() const;
};

struct GeneratedInstance {
  Instance instance;
  std::vector<std::pair<double, double>> positions;
  int attempts = 0;
};

double link_capacity(const GeneratorParams& params, double distance);

GeneratedInstance generate_random_network(const GeneratorParams& params);

}  // namespace mrfc

#endif  // MRFC_GENERATOR_HPP_
