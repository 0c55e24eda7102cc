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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "mrfc/errors.hpp"
#include "mrfc/generator.hpp"
#include "mrfc/incidence.hpp"
#include "mrfc/network.hpp"
#include "mrfc/network_io.hpp"

namespace mrfc {
namespace {

using testing::six_link_instance;
using testing::six_link_network;

TEST(NetworkTest, SixLinkIncidenceMatchesHandWrittenMatrix) {
  const Matrix a = build_incidence(six_link_network());
  const double expected[5][6] = {{1, 1, 0, 0, 0, 0},
                                 {0, -1, 0, 1, 1, 0},
                                 {0, 0, 0, 0, -1, -1},
                                 {-1, 0, 1, 0, 0, 0},
                                 {0, 0, -1, -1, 0, 1}};
  ASSERT_EQ(a.rows(), 5u);
  ASSERT_EQ(a.cols(), 6u);
  for (int n = 0; n < 5; ++n)
    for (int l = 0; l < 6; ++l) EXPECT_EQ(a(n, l), expected[n][l]) << n << "," << l;
}

TEST(NetworkTest, ReducedIncidenceDropsDestinationRowAndHasFullRank) {
  const Instance inst = six_link_instance();
  for (int f = 0; f < 2; ++f) {
    const ReducedIncidence r = reduced_incidence(inst.network(), inst.session(f));
    ASSERT_EQ(r.a.rows(), 4u);
    EXPECT_EQ(matrix_rank(r.a), 4);
    const Matrix full = build_incidence(inst.network());
    for (int row = 0; row < 4; ++row)
      for (int l = 0; l < 6; ++l)
        EXPECT_EQ(r.a(row, l), full(r.node_of(row), l));
    for (int row = 0; row < 4; ++row)
      EXPECT_EQ(r.b[row], r.node_of(row) == inst.session(f).src ? 1.0 : 0.0);
  }
}

TEST(NetworkTest, ReducedRowRoundTrips) {
  for (int dst = 0; dst < 6; ++dst) {
    EXPECT_EQ(reduced_row(dst, dst), -1);
    for (int row = 0; row < 5; ++row) {
      const int n = node_of_reduced_row(row, dst);
      EXPECT_NE(n, dst);
      EXPECT_EQ(reduced_row(n, dst), row);
    }
  }
}

TEST(NetworkTest, LinkColumnListsEndpointsOutsideDestination) {
  const Instance inst = six_link_instance();
  const ReducedIncidence r = reduced_incidence(inst.network(), inst.session(0));
  const SparseColumn c5 = link_column(r, 5);  // 4 -> 2, dst 2
  ASSERT_EQ(c5.size, 1);
  EXPECT_EQ(c5.entries[0].first, r.row_of(4));
  EXPECT_EQ(c5.entries[0].second, 1.0);
  const SparseColumn c0 = link_column(r, 0);
  EXPECT_EQ(c0.size, 2);
}

TEST(NetworkTest, AdjacencyQueries) {
  const Network net = six_link_network();
  EXPECT_TRUE(net.adjacent(0, 3));
  EXPECT_TRUE(net.adjacent(3, 0));
  EXPECT_FALSE(net.adjacent(0, 4));
  EXPECT_EQ(net.links_between(1, 4), std::vector<int>{3});
  EXPECT_EQ(net.other_end(4, 1), 2);
  EXPECT_TRUE(net.shares_endpoint(0, 2));
  EXPECT_FALSE(net.shares_endpoint(0, 5));
  EXPECT_EQ(std::vector<int>(net.out_links(1).begin(), net.out_links(1).end()),
            (std::vector<int>{3, 4}));
  EXPECT_EQ(std::vector<int>(net.in_links(2).begin(), net.in_links(2).end()),
            (std::vector<int>{4, 5}));
}

TEST(NetworkTest, LinksTouchingDestination) {
  const Instance inst = six_link_instance();
  // Session 0 ends at node 2: node 1 reaches it through l4, node 4 through l5.
  EXPECT_EQ(inst.links_touching_destination(1, 0), std::vector<int>{4});
  EXPECT_EQ(inst.links_touching_destination(4, 0), std::vector<int>{5});
  EXPECT_TRUE(inst.links_touching_destination(0, 0).empty());
}

TEST(NetworkTest, RejectsMalformedNetworks) {
  EXPECT_THROW(Network::Create(1, {{0, 0, 1.0}}), InvalidInputError);
  EXPECT_THROW(Network::Create(2, {{0, 0, 1.0}}), InvalidInputError);
  EXPECT_THROW(Network::Create(2, {{0, 1, 0.0}}), InvalidInputError);
  EXPECT_THROW(Network::Create(2, {{0, 2, 1.0}}), InvalidInputError);
  EXPECT_THROW(Network::Create(3, {{0, 1, 1.0}}), InvalidInputError);
  EXPECT_THROW(Network::Create(2, {{0, 1, std::nan("")}}), InvalidInputError);
}

TEST(NetworkTest, RejectsUnreachableOrDegenerateSessions) {
  const Network net = six_link_network();
  EXPECT_THROW(Instance::Create(net, {{2, 0, UtilitySpec::Log()}}), InvalidInputError);
  EXPECT_THROW(Instance::Create(net, {{1, 1, UtilitySpec::Log()}}), InvalidInputError);
  EXPECT_THROW(Instance::Create(net, {}), InvalidInputError);
}

TEST(NetworkTest, ReduceIncidenceRejectsRankDeficientMatrix) {
  Matrix m(3, 2);
  m(0, 0) = 1;
  m(1, 0) = -1;  // node 2 has no links
  EXPECT_THROW(reduce_incidence(m, 0, 1), InvalidInputError);
}

TEST(UtilityTest, LogAndAlphaFairDerivativesMatchFiniteDifferences) {
  for (const UtilitySpec u : {UtilitySpec::Log(2.0), UtilitySpec::AlphaFair(1.5, 2.0),
                              UtilitySpec::AlphaFair(1.0, 0.5)}) {
    for (double s : {0.1, 0.7, 3.0}) {
      const double h = 1e-6 * s;
      EXPECT_NEAR(u.first(s), (u.value(s + h) - u.value(s - h)) / (2 * h),
                  1e-6 * std::abs(u.first(s)));
      EXPECT_NEAR(u.second(s), (u.first(s + h) - u.first(s - h)) / (2 * h),
                  1e-5 * std::abs(u.second(s)));
      EXPECT_NEAR(u.inverse_marginal(u.first(s)), s, 1e-12 * s);
    }
  }
  EXPECT_THROW(UtilitySpec::AlphaFair(1.0, 1.0), InvalidInputError);
  EXPECT_THROW(UtilitySpec::Log(0.0), InvalidInputError);
}

TEST(GeneratorTest, CapacityFollowsSpectralEfficiency) {
  GeneratorParams p;
  for (double d : {10.0, 100.0, 350.0}) {
    const double snr = p.power * std::pow(d, -p.path_loss) / p.noise;
    EXPECT_NEAR(link_capacity(p, d), std::log2(1.0 + snr), 1e-12);
  }
  EXPECT_EQ(link_capacity(p, 0.1), link_capacity(p, p.min_distance));
}

TEST(GeneratorTest, SameSeedSameInstance) {
  GeneratorParams p;
  p.seed = 42;
  const GeneratedInstance a = generate_random_network(p);
  const GeneratedInstance b = generate_random_network(p);
  EXPECT_EQ(a.instance, b.instance);
  EXPECT_EQ(a.positions, b.positions);
  p.seed = 43;
  EXPECT_NE(generate_random_network(p).instance, a.instance);
}

TEST(GeneratorTest, LinksAreBidirectionalAndWithinRange) {
  GeneratorParams p;
  p.seed = 5;
  const GeneratedInstance g = generate_random_network(p);
  const Network& net = g.instance.network();
  EXPECT_EQ(net.node_count(), p.nodes);
  EXPECT_EQ(g.instance.session_count(), p.sessions);
  for (const Link& l : net.links()) {
    const auto [ax, ay] = g.positions[l.tx];
    const auto [bx, by] = g.positions[l.rx];
    EXPECT_LE(std::hypot(ax - bx, ay - by), p.link_range);
    EXPECT_TRUE(net.adjacent(l.rx, l.tx));
    EXPECT_EQ(net.links_between(l.tx, l.rx).size(), 2u);
  }
}

TEST(GeneratorTest, RejectsInvalidParameters) {
  GeneratorParams p;
  p.nodes = 1;
  EXPECT_THROW(generate_random_network(p), InvalidInputError);
  p = {};
  p.link_range = -1;
  EXPECT_THROW(generate_random_network(p), InvalidInputError);
}

TEST(NetworkIoTest, JsonRoundTrip) {
  const Instance inst = Instance::Create(
      six_link_network(2.5), {{0, 2, UtilitySpec::Log(3.0)},
                          {0, 4, UtilitySpec::AlphaFair(1.0, 2.0)}});
  EXPECT_EQ(instance_from_json(instance_to_json(inst)), inst);
}

TEST(NetworkIoTest, FileRoundTripIsByteStable) {
  const auto dir = std::filesystem::temp_directory_path() / "mrfc_netio_test";
  std::filesystem::create_directories(dir);
  const Instance inst = testing::random_instance(3, 10, 3);
  write_instance(dir / "a.json", inst);
  const Instance back = read_instance(dir / "a.json");
  EXPECT_EQ(back, inst);
  write_instance(dir / "b.json", back);
  std::ifstream a(dir / "a.json"), b(dir / "b.json");
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
  std::filesystem::remove_all(dir);
}

TEST(NetworkIoTest, StrictSchema) {
  nlohmann::json doc = instance_to_json(six_link_instance());
  auto bad = doc;
  bad["extra"] = 1;
  EXPECT_THROW(instance_from_json(bad), InvalidInputError);
  bad = doc;
  bad["version"] = 2;
  EXPECT_THROW(instance_from_json(bad), InvalidInputError);
  bad = doc;
  bad["links"][0]["capacity"] = 0.0;
  EXPECT_THROW(instance_from_json(bad), InvalidInputError);
  bad = doc;
  bad["links"][0]["colour"] = "red";
  EXPECT_THROW(instance_from_json(bad), InvalidInputError);
  bad = doc;
  bad["sessions"][0]["utility"]["family"] = "linear";
  EXPECT_THROW(instance_from_json(bad), InvalidInputError);
  bad = doc;
  bad["nodes"] = "five";
  EXPECT_THROW(instance_from_json(bad), InvalidInputError);
  EXPECT_THROW(read_instance("/nonexistent/mrfc.json"), InvalidInputError);
}

}  // namespace
}  // namespace mrfc
