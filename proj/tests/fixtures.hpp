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

#ifndef MRFC_TESTS_FIXTURES_HPP_
#define MRFC_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <random>
#include <vector>

#include "mrfc/generator.hpp"
#include "mrfc/network.hpp"
#include "mrfc/objective.hpp"

namespace mrfc::testing {

// The 5-node, 6-link example network (0-based ids):
//   l0: 0->3, l1: 0->1, l2: 3->4, l3: 1->4, l4: 1->2, l5: 4->2
// with session 0: 0->2 and session 1: 0->4.
inline Network six_link_network(double capacity = 1.0) {
  return Network::Create(5, {{0, 3, capacity},
                             {0, 1, capacity},
                             {3, 4, capacity},
                             {1, 4, capacity},
                             {1, 2, capacity},
                             {4, 2, capacity}});
}

inline Instance six_link_instance(int sessions = 2, double capacity = 1.0) {
  std::vector<Session> s{{0, 2, UtilitySpec::Log()}};
  if (sessions > 1) s.push_back({0, 4, UtilitySpec::Log()});
  return Instance::Create(six_link_network(capacity), std::move(s));
}

inline Instance two_node_instance(double capacity = 2.0) {
  return Instance::Create(Network::Create(2, {{0, 1, capacity}}),
                          {{0, 1, UtilitySpec::Log()}});
}

// Five nodes with bidirectional links on the pairs
// 0-1, 0-3, 1-2, 1-3, 1-4, 2-4, 3-4 (unit capacities) and two sessions,
// 3 -> 0 and 4 -> 2.
inline Instance five_node_instance(double capacity = 1.0) {
  std::vector<Link> links;
  for (auto [a, b] : std::vector<std::pair<int, int>>{
           {0, 1}, {0, 3}, {1, 2}, {1, 3}, {1, 4}, {2, 4}, {3, 4}}) {
    links.push_back({a, b, capacity});
    links.push_back({b, a, capacity});
  }
  return Instance::Create(Network::Create(5, std::move(links)),
                          {{3, 0, UtilitySpec::Log()}, {4, 2, UtilitySpec::Log()}});
}

// Random bidirectional instance from the generator with a range large
// enough to be connected quickly at small sizes.
inline Instance random_instance(std::uint64_t seed, int nodes, int sessions) {
  GeneratorParams p;
  p.seed = seed;
  p.nodes = nodes;
  p.sessions = sessions;
  p.link_range = nodes <= 5 ? 600.0 : 400.0;
  return generate_random_network(p).instance;
}

// Strictly interior point drawn independently of the library's sampler:
// each link is filled to a uniform fraction in [0.1, 0.9] split across
// sessions by random positive weights; rates are uniform in [0.05, 1].
inline PrimalPoint random_point(const Instance& instance, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int links = instance.link_count();
  const int sessions = instance.session_count();
  PrimalPoint y(links, sessions);
  for (int f = 0; f < sessions; ++f) y.s(f) = 0.05 + 0.95 * unit(rng);
  for (int l = 0; l < links; ++l) {
    const double fill = 0.1 + 0.8 * unit(rng);
    std::vector<double> weight(sessions);
    double total = 0.0;
    for (auto& v : weight) total += (v = 0.1 + unit(rng));
    const double cap = instance.network().link(l).capacity;
    for (int f = 0; f < sessions; ++f) y.x(l, f) = fill * cap * weight[f] / total;
  }
  return y;
}

// Random connected instance small enough for dense checks: a random
// spanning tree made bidirectional plus extra random links, capacities in
// [0.5, 2], sessions between distinct random nodes.
inline Instance random_small_instance(std::mt19937_64& rng, int nodes, int sessions,
                                      int extra_links) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  std::vector<Link> links;
  for (int n = 1; n < nodes; ++n) {
    const int parent = std::uniform_int_distribution<int>(0, n - 1)(rng);
    links.push_back({parent, n, 0.5 + 1.5 * unit(rng)});
    links.push_back({n, parent, 0.5 + 1.5 * unit(rng)});
  }
  for (int k = 0; k < extra_links; ++k) {
    const int a = pick(rng);
    int b = pick(rng);
    if (a == b) b = (a + 1) % nodes;
    links.push_back({a, b, 0.5 + 1.5 * unit(rng)});
  }
  std::vector<Session> s;
  for (int f = 0; f < sessions; ++f) {
    const int src = pick(rng);
    int dst = pick(rng);
    if (dst == src) dst = (src + 1) % nodes;
    s.push_back({src, dst, UtilitySpec::Log()});
  }
  return Instance::Create(Network::Create(nodes, std::move(links)), std::move(s));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace mrfc::testing

#endif  // MRFC_TESTS_FIXTURES_HPP_
