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

#ifndef MRFC_NETWORK_HPP_
#define MRFC_NETWORK_HPP_

#include <span>
#include <vector>

#include "mrfc/utility.hpp"

namespace mrfc {

// Node, link and session ids are dense 0-based indices.
struct Link {
  int tx = 0;
  int rx = 0;
  double capacity = 0.0;  // flow units per unit time

  bool operator==(const Link&) const = default;
};

// Capacitated directed graph. Immutable after Create(); parallel links are
// allowed, self-loops are not, and the graph must be weakly connected.
class Network {
 public:
  static Network Create(int node_count, std::vector<Link> links);

  int node_count() const { return node_count_; }
  int link_count() const { return static_cast<int>(links_.size()); }
  const Link& link(int l) const { return links_[l]; }
  std::span<const Link> links() const { return links_; }

  // Out(n), In(n) and Phi(n) = In(n) u Out(n), each in increasing link order.
  std::span<const int> out_links(int n) const { return out_[n]; }
  std::span<const int> in_links(int n) const { return in_[n]; }
  std::span<const int> incident_links(int n) const { return incident_[n]; }
  // Distinct nodes sharing at least one link with n.
  std::span<const int> neighbors(int n) const { return neighbors_[n]; }

  // Gamma(n1, n2): links joining n1 and n2 in either direction.
  std::vector<int> links_between(int n1, int n2) const;
  bool adjacent(int n1, int n2) const;
  // The endpoint of l that is not n. Requires n to be an endpoint.
  int other_end(int l, int n) const;
  bool shares_endpoint(int l1, int l2) const;

  double max_capacity() const;
  double min_capacity() const;

  bool operator==(const Network& other) const {
    return node_count_ == other.node_count_ && links_ == other.links_;
  }

 private:
  Network() = default;

  int node_count_ = 0;
  std::vector<Link> links_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<int>> neighbors_;
};

struct Session {
  int src = 0;
  int dst = 0;
  UtilitySpec utility;

  bool operator==(const Session&) const = default;
};

// A network together with its sessions. Create() checks src != dst and that
// every destination is reachable from its source along directed links.
class Instance {
 public:
  static Instance Create(Network network, std::vector<Session> sessions);

  const Network& network() const { return network_; }
  std::span<const Session> sessions() const { return sessions_; }
  const Session& session(int f) const { return sessions_[f]; }
  int node_count() const { return network_.node_count(); }
  int link_count() const { return network_.link_count(); }
  int session_count() const { return static_cast<int>(sessions_.size()); }

  // Psi(n, f): links at n with an endpoint equal to dst(f).
  std::vector<int> links_touching_destination(int n, int f) const;

  bool operator==(const Instance&) const = default;

 private:
  Instance(Network network, std::vector<Session> sessions)
      : network_(std::move(network)), sessions_(std::move(sessions)) {}

  Network network_;
  std::vector<Session> sessions_;
};

// Nodes reachable from `from` along directed links (including `from`).
std::vector<bool> reachable_from(const Network& network, int from);

}  // namespace mrfc

#endif  // MRFC_NETWORK_HPP_
