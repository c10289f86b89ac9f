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

#pragma once

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vodsim/random.hpp"
#include "vodsim/types.hpp"

namespace vodsim {

enum class Interconnect { ring, chain, complete };

inline const char* to_string(Interconnect ic) {
  switch (ic) {
    case Interconnect::ring: return "ring";
    case Interconnect::chain: return "chain";
    case Interconnect::complete: return "complete";
  }
  return "?";
}

inline std::optional<Interconnect> parse_interconnect(const std::string& name) {
  if (name == "ring") return Interconnect::ring;
  if (name == "chain") return Interconnect::chain;
  if (name == "complete") return Interconnect::complete;
  return std::nullopt;
}

struct TopologyConfig {
  std::size_t num_app_servers = 1;
  std::size_t db_per_app = 1;
  Interconnect interconnect = Interconnect::ring;

  bool operator==(const TopologyConfig&) const = default;
};

using Edge = std::pair<NodeId, NodeId>;

/**
 * @brief Undirected graph of application servers and database nodes.
 *
 * Adjacency lists are kept sorted so every traversal expands neighbours in
 * ascending node id order.
 */
class StorageTopology {
 public:
  StorageTopology(std::size_t num_nodes, std::vector<NodeId> app_servers,
                  std::vector<NodeId> db_nodes, const std::vector<Edge>& edges)
      : adjacency_(num_nodes),
        roles_(num_nodes, Role::none),
        app_servers_(std::move(app_servers)),
        db_nodes_(std::move(db_nodes)) {
    std::sort(app_servers_.begin(), app_servers_.end());
    std::sort(db_nodes_.begin(), db_nodes_.end());
    for (NodeId n : app_servers_) assign_role(n, Role::app);
    for (NodeId n : db_nodes_) assign_role(n, Role::db);
    for (const auto& [a, b] : edges) {
      if (a >= num_nodes || b >= num_nodes) throw std::invalid_argument("edge endpoint out of range");
      if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      num_edges_ += list.size();
    }
    num_edges_ /= 2;
  }

  std::size_t num_nodes() const noexcept { return adjacency_.size(); }
  std::size_t num_edges() const noexcept { return num_edges_; }
  const std::vector<NodeId>& app_servers() const noexcept { return app_servers_; }
  const std::vector<NodeId>& db_nodes() const noexcept { return db_nodes_; }
  const std::vector<NodeId>& neighbors(NodeId n) const { return adjacency_.at(n); }
  std::size_t degree(NodeId n) const { return neighbors(n).size(); }
  bool is_app_server(NodeId n) const { return n < roles_.size() && roles_[n] == Role::app; }
  bool is_db_node(NodeId n) const { return n < roles_.size() && roles_[n] == Role::db; }
  const std::optional<TopologyConfig>& config() const noexcept { return config_; }

  /// Every edge once as (low, high), sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (NodeId a = 0; a < adjacency_.size(); ++a) {
      for (NodeId b : adjacency_[a]) {
        if (a < b) out.emplace_back(a, b);
      }
    }
    return out;
  }

  bool is_connected() const {
    if (adjacency_.empty()) return true;
    std::vector<char> seen(num_nodes(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : adjacency_[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == num_nodes();
  }

  /// Writes `node_a node_b` per line.
  void write_edge_list(std::ostream& out) const {
    for (const auto& [a, b] : edges()) out << a << ' ' << b << '\n';
  }

 private:
  enum class Role : std::uint8_t { none, app, db };

  void assign_role(NodeId n, Role role) {
    if (n >= roles_.size()) throw std::invalid_argument("node id out of range");
    if (roles_[n] != Role::none) {
      throw std::invalid_argument("node " + std::to_string(n) + " listed twice");
    }
    roles_[n] = role;
  }

  friend StorageTopology build_topology(const TopologyConfig& config);

  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<Role> roles_;
  std::vector<NodeId> app_servers_;
  std::vector<NodeId> db_nodes_;
  std::size_t num_edges_ = 0;
  std::optional<TopologyConfig> config_;
};

/// Application servers take ids [0, A) and are wired by the interconnect.
/// Database leaves follow, db_per_app per server, in server order: the j-th
/// leaf of server a is A + a * db_per_app + j.
inline StorageTopology build_topology(const TopologyConfig& config) {
  if (config.num_app_servers == 0) throw std::invalid_argument("num_app_servers must be at least 1");
  if (config.db_per_app == 0) throw std::invalid_argument("db_per_app must be at least 1");
  const auto apps = static_cast<NodeId>(config.num_app_servers);
  const auto per = static_cast<NodeId>(config.db_per_app);

  std::vector<Edge> edges;
  switch (config.interconnect) {
    case Interconnect::ring:
      if (apps == 2) {
        edges.emplace_back(0, 1);
      } else if (apps > 2) {
        for (NodeId a = 0; a < apps; ++a) edges.emplace_back(a, (a + 1) % apps);
      }
      break;
    case Interconnect::chain:
      for (NodeId a = 0; a + 1 < apps; ++a) edges.emplace_back(a, a + 1);
      break;
    case Interconnect::complete:
      for (NodeId a = 0; a < apps; ++a)
        for (NodeId b = a + 1; b < apps; ++b) edges.emplace_back(a, b);
      break;
  }

  std::vector<NodeId> app_ids(apps);
  std::vector<NodeId> db_ids;
  db_ids.reserve(static_cast<std::size_t>(apps) * per);
  for (NodeId a = 0; a < apps; ++a) {
    app_ids[a] = a;
    for (NodeId j = 0; j < per; ++j) {
      const NodeId leaf = apps + a * per + j;
      db_ids.push_back(leaf);
      edges.emplace_back(a, leaf);
    }
  }
  StorageTopology topo(static_cast<std::size_t>(apps) * (per + 1), std::move(app_ids),
                       std::move(db_ids), edges);
  topo.config_ = config;
  return topo;
}

/**
 * @brief Which database nodes hold which videos.
 *
 * Holders per video are sorted; a dense membership table answers
 * holds(video, node) in constant time.
 */
class ContentPlacement {
 public:
  ContentPlacement(std::size_t num_videos, std::size_t num_nodes, std::size_t replication = 1)
      : num_nodes_(num_nodes),
        replication_(replication),
        holders_(num_videos),
        member_(num_videos * num_nodes, 0) {}

  std::size_t num_videos() const noexcept { return holders_.size(); }
  std::size_t replication() const noexcept { return replication_; }
  const std::vector<NodeId>& holders(VideoId video) const { return holders_.at(video); }

  bool holds(VideoId video, NodeId node) const {
    if (video >= holders_.size() || node >= num_nodes_) return false;
    return member_[static_cast<std::size_t>(video) * num_nodes_ + node] != 0;
  }

  void add_replica(VideoId video, NodeId node) {
    if (video >= holders_.size()) throw std::out_of_range("video id out of range");
    if (node >= num_nodes_) throw std::out_of_range("node id out of range");
    auto& slot = member_[static_cast<std::size_t>(video) * num_nodes_ + node];
    if (slot) return;
    slot = 1;
    auto& list = holders_[video];
    list.insert(std::upper_bound(list.begin(), list.end(), node), node);
  }

  /// Number of videos stored on `node`.
  std::size_t load(NodeId node) const {
    std::size_t n = 0;
    for (std::size_t v = 0; v < holders_.size(); ++v) n += member_[v * num_nodes_ + node];
    return n;
  }

 private:
  std::size_t num_nodes_;
  std::size_t replication_;
  std::vector<std::vector<NodeId>> holders_;
  std::vector<std::uint8_t> member_;
};

/// Assigns every video to min(replication, |db_nodes|) distinct database
/// nodes chosen uniformly without replacement.
template <class URBG>
ContentPlacement place_content(const StorageTopology& topology, std::size_t catalog_size,
                               std::size_t replication, URBG& rng) {
  if (replication == 0) throw std::invalid_argument("replication must be at least 1");
  const auto& dbs = topology.db_nodes();
  ContentPlacement placement(catalog_size, topology.num_nodes(), replication);
  if (dbs.empty()) return placement;
  const std::size_t copies = std::min(replication, dbs.size());
  std::vector<NodeId> pool = dbs;
  for (std::size_t v = 0; v < catalog_size; ++v) {
    // Partial Fisher-Yates over the pool; the pool stays a permutation.
    for (std::size_t i = 0; i < copies; ++i) {
      const std::size_t j = i + uniform_index(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      placement.add_replica(static_cast<VideoId>(v), pool[i]);
    }
  }
  return placement;
}

struct SearchSession {
  Tick t_start = 0;
  Tick duration = 1;
  std::size_t queue_capacity = 0;  // 0 means |V|
  NodeId origin = 0;
};

enum class SearchOutcome { found, not_found, expired, queue_overflow };

inline const char* to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::found: return "found";
    case SearchOutcome::not_found: return "not_found";
    case SearchOutcome::expired: return "expired";
    case SearchOutcome::queue_overflow: return "queue_overflow";
  }
  return "?";
}

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::not_found;
  std::optional<NodeId> node;
  std::optional<std::uint32_t> hops;
  // Node pops plus edge scans performed; bounded by |V| + 2|E|.
  std::size_t examinations = 0;

  bool found() const noexcept { return outcome == SearchOutcome::found; }
  bool operator==(const SearchResult&) const = default;
};

/**
 * @brief Session-bounded breadth-first search for a video from an
 * application server.
 *
 * The FIFO queue is seeded with the origin only. A node popped at BFS depth d
 * is expanded at simulated time now + d (one tick per hop); if that reaches
 * t_start + duration the search expires. The first database node discovered
 * that holds the video is returned with its hop distance, which is minimal
 * because BFS discovers nodes in nondecreasing distance order. Each node is
 * enqueued at most once.
 */
inline SearchResult session_search(const StorageTopology& topology,
                                   const ContentPlacement& placement, VideoId video,
                                   const SearchSession& session, Tick now) {
  if (!topology.is_app_server(session.origin)) {
    throw std::domain_error("search origin " + std::to_string(session.origin) +
                            " is not an application server");
  }
  if (session.duration <= 0) throw std::invalid_argument("session duration must be positive");
  if (now < session.t_start) throw std::invalid_argument("search starts before its session");

  const std::size_t capacity =
      session.queue_capacity == 0 ? topology.num_nodes() : session.queue_capacity;
  const Tick deadline = session.t_start + session.duration;

  SearchResult result;
  std::vector<char> visited(topology.num_nodes(), 0);
  std::vector<std::uint32_t> depth(topology.num_nodes(), 0);
  std::deque<NodeId> queue;
  queue.push_back(session.origin);
  visited[session.origin] = 1;

  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    ++result.examinations;
    if (now + static_cast<Tick>(depth[v]) >= deadline) {
      result.outcome = SearchOutcome::expired;
      return result;
    }
    for (NodeId w : topology.neighbors(v)) {
      ++result.examinations;
      if (visited[w]) continue;
      visited[w] = 1;
      depth[w] = depth[v] + 1;
      if (topology.is_db_node(w) && placement.holds(video, w)) {
        result.outcome = SearchOutcome::found;
        result.node = w;
        result.hops = depth[w];
        return result;
      }
      if (queue.size() >= capacity) {
        result.outcome = SearchOutcome::queue_overflow;
        return result;
      }
      queue.push_back(w);
    }
  }
  result.outcome = SearchOutcome::not_found;
  return result;
}

/// Exact shortest-path edge count between two nodes.
inline std::uint32_t hop_distance(const StorageTopology& topology, NodeId a, NodeId b) {
  if (a >= topology.num_nodes() || b >= topology.num_nodes()) {
    throw std::out_of_range("node id out of range");
  }
  if (a == b) return 0;
  std::vector<std::int64_t> dist(topology.num_nodes(), -1);
  std::deque<NodeId> queue{a};
  dist[a] = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : topology.neighbors(v)) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[v] + 1;
      if (w == b) return static_cast<std::uint32_t>(dist[w]);
      queue.push_back(w);
    }
  }
  throw std::domain_error("nodes " + std::to_string(a) + " and " + std::to_string(b) +
                          " are unreachable from each other");
}

}  // namespace vodsim
