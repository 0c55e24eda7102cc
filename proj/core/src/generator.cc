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

#include "mrfc/generator.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <string>

#include "mrfc/errors.hpp"

namespace mrfc {

void GeneratorParams::validate() const {
  if (nodes < 2)
    throw InvalidInputError("generator needs at least 2 nodes, got " +
                            std::to_string(nodes));
  if (sessions < 1) throw InvalidInputError("generator needs at least 1 session");
  if (!(region > 0.0)) throw InvalidInputError("region must be positive");
  if (!(link_range > 0.0)) throw InvalidInputError("link range must be positive");
  if (!(power > 0.0) || !(noise > 0.0))
    throw InvalidInputError("power and noise must be positive");
  if (!(path_loss > 0.0)) throw InvalidInputError("path loss must be positive");
  if (!(min_distance > 0.0))
    throw InvalidInputError("min distance must be positive");
  if (max_attempts < 1) throw InvalidInputError("max attempts must be >= 1");
}

double link_capacity(const GeneratorParams& params, double distance) {
  const double d = std::max(distance, params.min_distance);
  return std::log2(1.0 + params.power * std::pow(d, -params.path_loss) /
                             params.noise);
}

namespace {

bool connected(int n, const std::vector<Link>& links) {
  std::vector<std::vector<int>> adj(n);
  for (const Link& k : links) {
    adj[k.tx].push_back(k.rx);
    adj[k.rx].push_back(k.tx);
  }
  std::vector<bool> seen(n, false);
  std::deque<int> queue{0};
  seen[0] = true;
  int count = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        queue.push_back(v);
      }
    }
  }
  return count == n;
}

}  // namespace

GeneratedInstance generate_random_network(const GeneratorParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> coord(0.0, params.region);

  for (int attempt = 1; attempt <= params.max_attempts; ++attempt) {
    std::vector<std::pair<double, double>> pos(params.nodes);
    for (auto& p : pos) {
      p.first = coord(rng);
      p.second = coord(rng);
    }
    std::vector<Link> links;
    for (int i = 0; i < params.nodes; ++i) {
      for (int j = i + 1; j < params.nodes; ++j) {
        const double d = std::hypot(pos[i].first - pos[j].first,
                                    pos[i].second - pos[j].second);
        if (d > params.link_range) continue;
        const double c = link_capacity(params, d);
        links.push_back({i, j, c});
        links.push_back({j, i, c});
      }
    }
    if (links.empty() || !connected(params.nodes, links)) continue;

    // Links come in both directions, so every src/dst pair is reachable.
    std::uniform_int_distribution<int> pick(0, params.nodes - 1);
    std::vector<Session> sessions(params.sessions);
    for (auto& s : sessions) {
      s.src = pick(rng);
      do {
        s.dst = pick(rng);
      } while (s.dst == s.src);
      s.utility = UtilitySpec::Log(1.0);
    }
    Network net = Network::Create(params.nodes, std::move(links));
    return {Instance::Create(std::move(net), std::move(sessions)), std::move(pos),
            attempt};
  }
  throw InvalidInputError(
      "could not draw a connected network with " + std::to_string(params.nodes) +
      " nodes in a " + std::to_string(params.region) + " m region with link range " +
      std::to_string(params.link_range) + " m after " +
      std::to_string(params.max_attempts) +
      " attempts; increase the range or shrink the region");
}

}  // namespace mrfc
