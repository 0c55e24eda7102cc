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

#include "mrfc/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "mrfc/errors.hpp"

namespace mrfc {

Network Network::Create(int node_count, std::vector<Link> links) {
  if (node_count < 2)
    throw InvalidInputError("network needs at least 2 nodes, got " +
                            std::to_string(node_count));
  if (links.empty()) throw InvalidInputError("network has no links");
  for (std::size_t l = 0; l < links.size(); ++l) {
    const Link& k = links[l];
    const std::string tag = "link " + std::to_string(l);
    if (k.tx < 0 || k.tx >= node_count || k.rx < 0 || k.rx >= node_count)
      throw InvalidInputError(tag + " has an endpoint outside [0, " +
                              std::to_string(node_count) + ")");
    if (k.tx == k.rx) throw InvalidInputError(tag + " is a self-loop");
    if (!(k.capacity > 0.0) || !std::isfinite(k.capacity))
      throw InvalidInputError(tag + " must have positive finite capacity");
  }

  Network net;
  net.node_count_ = node_count;
  net.links_ = std::move(links);
  net.out_.resize(node_count);
  net.in_.resize(node_count);
  net.incident_.resize(node_count);
  net.neighbors_.resize(node_count);
  for (int l = 0; l < net.link_count(); ++l) {
    const Link& k = net.links_[l];
    net.out_[k.tx].push_back(l);
    net.in_[k.rx].push_back(l);
    net.incident_[k.tx].push_back(l);
    net.incident_[k.rx].push_back(l);
    net.neighbors_[k.tx].push_back(k.rx);
    net.neighbors_[k.rx].push_back(k.tx);
  }
  for (auto& nb : net.neighbors_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }

  // Weak connectivity over the undirected neighbor relation.
  std::vector<bool> seen(node_count, false);
  std::deque<int> queue{0};
  seen[0] = true;
  int count = 1;
  while (!queue.empty()) {
    const int n = queue.front();
    queue.pop_front();
    for (int m : net.neighbors_[n]) {
      if (!seen[m]) {
        seen[m] = true;
        ++count;
        queue.push_back(m);
      }
    }
  }
  if (count != node_count) {
    const auto it = std::find(seen.begin(), seen.end(), false);
    throw InvalidInputError("network is not connected: node " +
                            std::to_string(it - seen.begin()) +
                            " is unreachable from node 0");
  }
  return net;
}

std::vector<int> Network::links_between(int n1, int n2) const {
  std::vector<int> out;
  for (int l : incident_[n1]) {
    const Link& k = links_[l];
    if ((k.tx == n1 && k.rx == n2) || (k.tx == n2 && k.rx == n1))
      out.push_back(l);
  }
  return out;
}

bool Network::adjacent(int n1, int n2) const {
  const auto& nb = neighbors_[n1];
  return std::binary_search(nb.begin(), nb.end(), n2);
}

int Network::other_end(int l, int n) const {
  const Link& k = links_[l];
  return k.tx == n ? k.rx : k.tx;
}

bool Network::shares_endpoint(int l1, int l2) const {
  const Link& a = links_[l1];
  const Link& b = links_[l2];
  return a.tx == b.tx || a.tx == b.rx || a.rx == b.tx || a.rx == b.rx;
}

double Network::max_capacity() const {
  double c = 0.0;
  for (const Link& k : links_) c = std::max(c, k.capacity);
  return c;
}

double Network::min_capacity() const {
  double c = links_.front().capacity;
  for (const Link& k : links_) c = std::min(c, k.capacity);
  return c;
}

std::vector<bool> reachable_from(const Network& network, int from) {
  std::vector<bool> seen(network.node_count(), false);
  std::deque<int> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    const int n = queue.front();
    queue.pop_front();
    for (int l : network.out_links(n)) {
      const int m = network.link(l).rx;
      if (!seen[m]) {
        seen[m] = true;
        queue.push_back(m);
      }
    }
  }
  return seen;
}

Instance Instance::Create(Network network, std::vector<Session> sessions) {
  if (sessions.empty()) throw InvalidInputError("instance has no sessions");
  const int n = network.node_count();
  for (std::size_t f = 0; f < sessions.size(); ++f) {
    const Session& s = sessions[f];
    const std::string tag = "session " + std::to_string(f);
    if (s.src < 0 || s.src >= n || s.dst < 0 || s.dst >= n)
      throw InvalidInputError(tag + " has an endpoint outside [0, " +
                              std::to_string(n) + ")");
    if (s.src == s.dst)
      throw InvalidInputError(tag + " has src == dst");
    if (!reachable_from(network, s.src)[s.dst])
      throw InvalidInputError(tag + ": destination " + std::to_string(s.dst) +
                              " is not reachable from source " +
                              std::to_string(s.src));
  }
  return Instance(std::move(network), std::move(sessions));
}

std::vector<int> Instance::links_touching_destination(int n, int f) const {
  const int d = sessions_[f].dst;
  std::vector<int> out;
  for (int l : network_.incident_links(n)) {
    const Link& k = network_.link(l);
    if (k.tx == d || k.rx == d) out.push_back(l);
  }
  return out;
}

}  // namespace mrfc
