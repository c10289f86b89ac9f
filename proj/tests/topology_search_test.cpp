// Copyright 2026 The vodsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "vodsim/topology_search.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"

namespace vodsim {
namespace {

constexpr Tick kUnbounded = 1'000'000;

SearchSession unbounded_from(NodeId origin) { return SearchSession{0, kUnbounded, 0, origin}; }

StorageTopology from_random(const oracle::RandomGraph& g) {
  std::vector<Edge> edges;
  for (auto [a, b] : g.edges) edges.emplace_back(a, b);
  return StorageTopology(g.n, {g.apps.begin(), g.apps.end()}, {g.dbs.begin(), g.dbs.end()}, edges);
}

TEST(BuildTopology, SingleAppSingleDb) {
  const auto t = build_topology({1, 1, Interconnect::ring});
  EXPECT_EQ(t.num_nodes(), 2u);
  EXPECT_EQ(t.num_edges(), 1u);
  EXPECT_TRUE(t.is_connected());
}

TEST(BuildTopology, FourteenRing) {
  const auto t = build_topology({14, 1, Interconnect::ring});
  EXPECT_EQ(t.num_nodes(), 28u);
  EXPECT_EQ(t.num_edges(), 28u);  // 14 ring + 14 leaf
  // App-server diameter by an independent all-pairs computation.
  std::vector<std::pair<unsigned, unsigned>> edges;
  for (auto [a, b] : t.edges()) edges.emplace_back(a, b);
  const auto d = oracle::floyd_warshall(t.num_nodes(), edges);
  int diameter = 0;
  for (NodeId a : t.app_servers())
    for (NodeId b : t.app_servers()) diameter = std::max(diameter, d[a][b]);
  EXPECT_EQ(diameter, 7);
}

TEST(BuildTopology, SixByFiveLeaves) {
  const auto t = build_topology({6, 5, Interconnect::ring});
  EXPECT_EQ(t.num_nodes(), 36u);
  EXPECT_EQ(t.db_nodes().size(), 30u);
  for (NodeId db : t.db_nodes()) {
    EXPECT_EQ(t.degree(db), 1u);
    EXPECT_TRUE(t.is_app_server(t.neighbors(db).front()));
  }
}

TEST(BuildTopology, InterconnectShapes) {
  EXPECT_EQ(build_topology({2, 1, Interconnect::ring}).num_edges(), 3u);
  EXPECT_EQ(build_topology({5, 1, Interconnect::chain}).num_edges(), 4u + 5u);
  EXPECT_EQ(build_topology({5, 2, Interconnect::complete}).num_edges(), 10u + 10u);
  for (auto ic : {Interconnect::ring, Interconnect::chain, Interconnect::complete}) {
    for (std::size_t apps : {1u, 2u, 3u, 8u}) {
      const auto t = build_topology({apps, 3, ic});
      EXPECT_TRUE(t.is_connected());
      for (NodeId v = 0; v < t.num_nodes(); ++v) {
        for (NodeId w : t.neighbors(v)) {
          EXPECT_NE(v, w);
          const auto& back = t.neighbors(w);
          EXPECT_TRUE(std::binary_search(back.begin(), back.end(), v));
        }
      }
    }
  }
}

TEST(BuildTopology, RejectsEmptyConfig) {
  EXPECT_THROW(build_topology({0, 1, Interconnect::ring}), std::invalid_argument);
  EXPECT_THROW(build_topology({3, 0, Interconnect::ring}), std::invalid_argument);
}

TEST(StorageTopology, RejectsSelfLoopsAndDuplicateRoles) {
  EXPECT_THROW(StorageTopology(2, {0}, {1}, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(StorageTopology(2, {0}, {0}, {{0, 1}}), std::invalid_argument);
  EXPECT_THROW(StorageTopology(2, {0}, {1}, {{0, 2}}), std::invalid_argument);
}

TEST(StorageTopology, EdgeListExport) {
  const auto t = build_topology({3, 1, Interconnect::ring});
  std::ostringstream out;
  t.write_edge_list(out);
  EXPECT_EQ(out.str(), "0 1\n0 2\n0 3\n1 2\n1 4\n2 5\n");
}

TEST(PlaceContent, SingleDbHoldsEverything) {
  const auto t = build_topology({1, 1, Interconnect::ring});
  Rng rng(1);
  const auto p = place_content(t, 50, 3, rng);
  for (VideoId v = 0; v < 50; ++v) EXPECT_EQ(p.holders(v), std::vector<NodeId>{1});
}

TEST(PlaceContent, FullReplicationEverywhere) {
  const auto t = build_topology({4, 2, Interconnect::ring});
  Rng rng(1);
  const auto p = place_content(t, 20, 8, rng);
  for (VideoId v = 0; v < 20; ++v) EXPECT_EQ(p.holders(v), t.db_nodes());
}

TEST(PlaceContent, ReplicasAreDistinctDbNodes) {
  const auto t = build_topology({7, 3, Interconnect::ring});
  Rng rng(3);
  const auto p = place_content(t, 200, 4, rng);
  for (VideoId v = 0; v < 200; ++v) {
    const auto& h = p.holders(v);
    ASSERT_EQ(h.size(), 4u);
    ASSERT_EQ(std::set<NodeId>(h.begin(), h.end()).size(), 4u);
    for (NodeId n : h) ASSERT_TRUE(t.is_db_node(n));
  }
}

TEST(PlaceContent, LoadSpreadForFixedSeed) {
  const auto t = build_topology({14, 1, Interconnect::ring});
  Rng rng(2024);
  const auto p = place_content(t, 100, 2, rng);
  std::size_t total = 0;
  for (NodeId db : t.db_nodes()) {
    // Counted from the holder lists, independent of ContentPlacement::load.
    std::size_t load = 0;
    for (VideoId v = 0; v < 100; ++v) {
      const auto& h = p.holders(v);
      load += std::count(h.begin(), h.end(), db);
    }
    EXPECT_EQ(load, p.load(db));
    EXPECT_GE(load, 8u);
    EXPECT_LE(load, 22u);
    total += load;
  }
  EXPECT_EQ(total, 200u);
}

TEST(PlaceContent, DeterministicAndEmptyCatalog) {
  const auto t = build_topology({5, 2, Interconnect::ring});
  Rng a(9), b(9);
  const auto pa = place_content(t, 30, 2, a);
  const auto pb = place_content(t, 30, 2, b);
  for (VideoId v = 0; v < 30; ++v) EXPECT_EQ(pa.holders(v), pb.holders(v));
  EXPECT_EQ(place_content(t, 0, 2, a).num_videos(), 0u);
  EXPECT_THROW(place_content(t, 3, 0, a), std::invalid_argument);
}

TEST(SessionSearch, OwnLeafIsOneHop) {
  const auto t = build_topology({4, 1, Interconnect::ring});
  ContentPlacement p(1, t.num_nodes());
  p.add_replica(0, 4 + 2);  // leaf of app server 2
  const auto r = session_search(t, p, 0, unbounded_from(2), 0);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.node, 6u);
  EXPECT_EQ(*r.hops, 1u);
}

TEST(SessionSearch, NotPlacedAnywhere) {
  const auto t = build_topology({6, 2, Interconnect::ring});
  ContentPlacement p(3, t.num_nodes());
  const auto r = session_search(t, p, 1, unbounded_from(0), 0);
  EXPECT_EQ(r.outcome, SearchOutcome::not_found);
  EXPECT_FALSE(r.node.has_value());
  EXPECT_FALSE(r.hops.has_value());
  EXPECT_LE(r.examinations, t.num_nodes() + 2 * t.num_edges());
}

TEST(SessionSearch, OppositeSideOfFourteenRing) {
  const auto t = build_topology({14, 1, Interconnect::ring});
  ContentPlacement p(1, t.num_nodes());
  const NodeId target = 14 + 7;  // leaf of app server 7
  p.add_replica(0, target);
  const auto r = session_search(t, p, 0, unbounded_from(0), 0);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.hops, 8u);
  std::vector<std::pair<unsigned, unsigned>> edges;
  for (auto [a, b] : t.edges()) edges.emplace_back(a, b);
  EXPECT_EQ(static_cast<int>(*r.hops), oracle::floyd_warshall(t.num_nodes(), edges)[0][target]);
}

TEST(SessionSearch, UnknownOriginIsDomainError) {
  const auto t = build_topology({3, 1, Interconnect::ring});
  ContentPlacement p(1, t.num_nodes());
  EXPECT_THROW(session_search(t, p, 0, unbounded_from(4), 0), std::domain_error);
  EXPECT_THROW(session_search(t, p, 0, unbounded_from(99), 0), std::domain_error);
}

TEST(SessionSearch, ExpiresWhenDeadlinePassesBeforeMatch) {
  const auto t = build_topology({14, 1, Interconnect::ring});
  ContentPlacement p(1, t.num_nodes());
  p.add_replica(0, 14 + 7);  // 8 hops from app 0; found while expanding depth 7
  // Expanding depth d happens at now + d; the match needs depth 7 < deadline.
  EXPECT_TRUE(session_search(t, p, 0, SearchSession{0, 8, 0, 0}, 0).found());
  EXPECT_EQ(session_search(t, p, 0, SearchSession{0, 7, 0, 0}, 0).outcome, SearchOutcome::expired);
  // Starting late in the session leaves less budget.
  EXPECT_EQ(session_search(t, p, 0, SearchSession{0, 10, 0, 0}, 3).outcome, SearchOutcome::expired);
  EXPECT_TRUE(session_search(t, p, 0, SearchSession{0, 10, 0, 0}, 2).found());
}

TEST(SessionSearch, QueueOverflowIsReported) {
  const auto t = build_topology({6, 1, Interconnect::complete});
  ContentPlacement p(1, t.num_nodes());
  const auto r = session_search(t, p, 0, SearchSession{0, kUnbounded, 2, 0}, 0);
  EXPECT_EQ(r.outcome, SearchOutcome::queue_overflow);
  EXPECT_FALSE(r.node.has_value());
}

TEST(SessionSearch, EquidistantTieGoesToLowerId) {
  const auto t = build_topology({6, 1, Interconnect::ring});
  ContentPlacement p(1, t.num_nodes());
  p.add_replica(0, 6 + 1);
  p.add_replica(0, 6 + 5);
  const auto r = session_search(t, p, 0, unbounded_from(0), 0);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.hops, 2u);
  EXPECT_EQ(*r.node, 7u);
}

TEST(SessionSearch, MinimalOnRandomGraphs) {
  std::mt19937 gen(31337);
  for (int trial = 0; trial < 250; ++trial) {
    const auto g = oracle::random_connected_graph(gen, 50);
    const auto t = from_random(g);
    const auto d = oracle::floyd_warshall(g.n, g.edges);
    ContentPlacement p(1, g.n);
    const std::size_t replicas = std::uniform_int_distribution<std::size_t>(1, g.dbs.size())(gen);
    std::vector<unsigned> dbs = g.dbs;
    std::shuffle(dbs.begin(), dbs.end(), gen);
    for (std::size_t i = 0; i < replicas; ++i) p.add_replica(0, dbs[i]);
    for (unsigned origin : g.apps) {
      const auto r = session_search(t, p, 0, unbounded_from(origin), 0);
      int nearest = -1;
      for (NodeId h : p.holders(0)) {
        if (nearest < 0 || d[origin][h] < nearest) nearest = d[origin][h];
      }
      ASSERT_TRUE(r.found());
      ASSERT_EQ(static_cast<int>(*r.hops), nearest);
      ASSERT_EQ(d[origin][*r.node], nearest);
      ASSERT_LE(r.examinations, t.num_nodes() + 2 * t.num_edges());
    }
  }
}

TEST(SessionSearch, AddingReplicaNeverIncreasesHops) {
  std::mt19937 gen(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_connected_graph(gen, 40);
    const auto t = from_random(g);
    ContentPlacement p(1, g.n);
    p.add_replica(0, g.dbs[gen() % g.dbs.size()]);
    const unsigned origin = g.apps[gen() % g.apps.size()];
    auto prev = session_search(t, p, 0, unbounded_from(origin), 0);
    for (unsigned db : g.dbs) {
      p.add_replica(0, db);
      const auto next = session_search(t, p, 0, unbounded_from(origin), 0);
      ASSERT_LE(*next.hops, *prev.hops);
      prev = next;
    }
  }
}

TEST(SessionSearch, DeterministicResult) {
  const auto t = build_topology({8, 2, Interconnect::ring});
  Rng rng(77);
  const auto p = place_content(t, 100, 3, rng);
  for (VideoId v = 0; v < 100; ++v) {
    EXPECT_EQ(session_search(t, p, v, unbounded_from(3), 0), session_search(t, p, v, unbounded_from(3), 0));
  }
}

TEST(HopDistance, Basics) {
  const auto t = build_topology({5, 1, Interconnect::chain});
  EXPECT_EQ(hop_distance(t, 2, 2), 0u);
  EXPECT_EQ(hop_distance(t, 0, 1), 1u);
  EXPECT_EQ(hop_distance(t, 5, 9), 6u);  // leaf 0 to leaf 4 along the chain
}

TEST(HopDistance, DisconnectedIsError) {
  StorageTopology t(4, {0, 2}, {1, 3}, {{0, 1}, {2, 3}});
  EXPECT_FALSE(t.is_connected());
  EXPECT_THROW(hop_distance(t, 0, 3), std::domain_error);
  EXPECT_THROW(hop_distance(t, 0, 9), std::out_of_range);
}

TEST(HopDistance, MatchesAllPairsOracle) {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_connected_graph(gen, 50);
    const auto t = from_random(g);
    const auto d = oracle::floyd_warshall(g.n, g.edges);
    for (NodeId a = 0; a < g.n; ++a)
      for (NodeId b = 0; b < g.n; ++b) ASSERT_EQ(static_cast<int>(hop_distance(t, a, b)), d[a][b]);
  }
}

}  // namespace
}  // namespace vodsim
