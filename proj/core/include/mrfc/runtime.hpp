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

#ifndef MRFC_RUNTIME_HPP_
#define MRFC_RUNTIME_HPP_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "mrfc/dual_splitting.hpp"
#include "mrfc/network.hpp"
#include "mrfc/newton_primal.hpp"
#include "mrfc/objective.hpp"

namespace mrfc {

enum class EntityKind { kNode, kLink };

struct EntityId {
  EntityKind kind = EntityKind::kNode;
  int index = 0;

  static EntityId Node(int n) { return {EntityKind::kNode, n}; }
  static EntityId Link(int l) { return {EntityKind::kLink, l}; }
  bool operator==(const EntityId&) const = default;
};

std::string describe(EntityId id);

enum class Phase {
  kLinkPrepare,      // links derive slack and norm from their own flows
  kDualRound,        // one Jacobi round of local dual updates
  kSourceDirection,  // Delta s_f at each source
  kLinkDirection,    // Delta x_l at each link
  kDecrement,
  kLineSearch,
  kUpdate,
};
inline constexpr int kPhaseCount = 7;
const char* phase_name(Phase phase);

struct PhaseCounts {
  long own_reads = 0;
  long neighbor_reads = 0;
  long aggregations = 0;  // network-wide sum/min/max reductions
};

struct LocalityViolation {
  Phase phase;
  EntityId reader;
  EntityId owner;
  std::string field;
};

// Append-only record of every state read made during a distributed run.
// A read is legal if the owner is the reader itself or one hop away: a node
// may read its incident links and adjacent nodes, a link may read its two
// endpoints and the links sharing an endpoint with it.
class AccessLedger {
 public:
  AccessLedger(const Network& network, bool strict) : network_(&network), strict_(strict) {}

  // Records the read; on a violation, appends it and (in strict mode) throws
  // InvariantError naming reader, owner and field.
  void record(Phase phase, EntityId reader, EntityId owner, const char* field);
  void aggregate(Phase phase) { ++counts_[static_cast<int>(phase)].aggregations; }

  bool one_hop(EntityId reader, EntityId owner) const;
  const PhaseCounts& counts(Phase phase) const {
    return counts_[static_cast<int>(phase)];
  }
  std::span<const LocalityViolation> violations() const { return violations_; }

 private:
  const Network* network_;
  bool strict_;
  std::array<PhaseCounts, kPhaseCount> counts_{};
  std::vector<LocalityViolation> violations_;
};

struct LocalityReport {
  std::array<PhaseCounts, kPhaseCount> phases{};
  std::vector<LocalityViolation> violations;

  bool clean() const { return violations.empty(); }
  const PhaseCounts& operator[](Phase p) const { return phases[static_cast<int>(p)]; }
};

// Lockstep message-passing simulation of the Newton iteration. Every node
// owns its multipliers w~_n^(.) and, at a source, the session rate and its
// step; every link owns its flows, their step and its derived slack and
// norm. All computation goes through per-entity reads that the ledger
// checks for one-hop locality. Global scalars (decrement, line-search
// objective, residual norm) are explicit network-wide reductions.
class DistributedRuntime {
 public:
  DistributedRuntime(const Instance& instance, const PrimalPoint& y,
                     const DualPoint& w, bool strict = true);

  // Observer views, not part of the simulated protocol.
  PrimalPoint primal() const;
  DualPoint duals() const;
  LocalityReport report() const;
  const AccessLedger& ledger() const { return ledger_; }

  struct Round {
    std::vector<double> next;      // reduced order
    std::vector<double> residual;  // (G w - rhs) at the current duals
    double relative_residual = 0.0;
  };
  // One Jacobi round from the committed duals; does not commit.
  Round dual_round(double t, double alpha);
  void commit_duals(std::span<const double> reduced);
  // Rounds until the relative residual is below config.inner_tol.
  DualSolveResult solve_duals(double t, const SplitConfig& config);

  PrimalDirection compute_direction(double t);
  double decrement(double t);
  double slope(double t);
  // Largest step keeping every coordinate and slack nonnegative (may be inf).
  double boundary_step();
  bool interior_at(double step);
  // Objective at y + step * direction; +inf if any entity leaves the domain.
  double objective_at(double step, double t);
  // ||M~ (y~ + step * direction)||_1: each node sums its own balance rows.
  double balance_at(double step);
  // Max-reduction of |w~| over all nodes.
  double largest_multiplier();
  void apply_step(double step);

 private:
  std::span<const double> node_w(Phase p, EntityId reader, int n);
  double node_rate(Phase p, EntityId reader, int f);
  double node_rate_step(Phase p, EntityId reader, int f);
  std::span<const double> link_x(Phase p, EntityId reader, int l);
  std::span<const double> link_dx(Phase p, EntityId reader, int l);
  double link_delta(Phase p, EntityId reader, int l);
  double link_sq_norm_of(Phase p, EntityId reader, int l);
  void prepare_links();

  const Instance* instance_;
  int sessions_;
  double floor_;
  AccessLedger ledger_;
  // Node-owned.
  std::vector<double> w_;   // n * F + f
  std::vector<double> s_;   // held by src(f)
  std::vector<double> ds_;  // held by src(f)
  // Link-owned.
  std::vector<double> x_;   // l * F + f
  std::vector<double> dx_;
  std::vector<double> delta_;
  std::vector<double> sq_norm_;
  // Per-node snapshot buffers reused across dual rounds.
  std::vector<NodeNeighborhood> views_;
};

}  // namespace mrfc

#endif  // MRFC_RUNTIME_HPP_
