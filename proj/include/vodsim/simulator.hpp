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
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vodsim/capacity_model.hpp"
#include "vodsim/lrfu_cache.hpp"
#include "vodsim/popularity.hpp"
#include "vodsim/random.hpp"
#include "vodsim/topology_search.hpp"
#include "vodsim/types.hpp"

// Test builds define VODSIM_CHECK_INVARIANTS so the engine verifies request
// conservation and B(s) <= C(s) after every tick.
#ifdef VODSIM_CHECK_INVARIANTS
#define VODSIM_INVARIANT(cond, msg) \
  do {                              \
    if (!(cond)) throw std::logic_error(std::string("invariant violated: ") + (msg)); \
  } while (0)
#else
#define VODSIM_INVARIANT(cond, msg) \
  do {                              \
  } while (0)
#endif

namespace vodsim {

enum class Arrival { fixed, poisson };

struct CatalogParams {
  std::size_t n_videos = 1000;
  double alpha = 0.8;
  bool operator==(const CatalogParams&) const = default;
};

struct CacheParams {
  std::size_t capacity = 20;
  double lambda = 0.5;
  bool prewarm = false;  // fill with the most popular ranks before tick 0
  bool operator==(const CacheParams&) const = default;
};

struct SessionParams {
  Tick duration_ticks = 60;
  Tick total_ticks = 600;
  bool operator==(const SessionParams&) const = default;
};

struct CapacityParams {
  double session_capacity_bps = 1e15;
  double loss_threshold = 0.1;
  bool operator==(const CapacityParams&) const = default;
};

struct SimConfig {
  std::uint64_t seed = 1;
  std::string tick_unit = "1 s";
  TopologyConfig topology{};
  CatalogParams catalog{};
  CacheParams cache{};
  SessionParams session{};
  CapacityParams capacity{};
  BandwidthDemand stream{8e9, 2.0};
  std::size_t replication = 1;
  double request_rate = 1.0;  // requests per tick
  Arrival arrival = Arrival::fixed;
  std::size_t queue_capacity = 0;  // 0 means |V|

  bool operator==(const SimConfig& o) const {
    return seed == o.seed && tick_unit == o.tick_unit && topology == o.topology &&
           catalog == o.catalog && cache == o.cache && session == o.session &&
           capacity == o.capacity && stream.size_bits == o.stream.size_bits &&
           stream.duration_s == o.stream.duration_s && replication == o.replication &&
           request_rate == o.request_rate && arrival == o.arrival &&
           queue_capacity == o.queue_capacity;
  }
};

/// Every constraint violation in `config`, as "field: message". Empty when valid.
inline std::vector<std::string> validate(const SimConfig& config) {
  std::vector<std::string> out;
  auto fail = [&](const std::string& field, const std::string& msg) {
    out.push_back(field + ": " + msg);
  };
  if (config.topology.num_app_servers < 1) fail("topology.num_app_servers", "must be at least 1");
  if (config.topology.db_per_app < 1) fail("topology.db_per_app", "must be at least 1");
  if (config.catalog.n_videos < 1) fail("catalog.n_videos", "must be at least 1");
  if (!(config.catalog.alpha > 0.0 && config.catalog.alpha <= 1.0)) {
    fail("catalog.alpha", "alpha must be in (0,1]");
  }
  if (config.cache.capacity < 1) fail("cache.capacity", "must be at least 1");
  if (!(config.cache.lambda >= 0.0) || !std::isfinite(config.cache.lambda)) {
    fail("cache.lambda", "must be a finite non-negative real");
  }
  if (config.session.duration_ticks <= 0) fail("session.duration_ticks", "session duration must be positive");
  if (config.session.total_ticks < config.session.duration_ticks) {
    fail("session.total_ticks", "must be at least the session duration");
  }
  if (!(config.capacity.session_capacity_bps > 0.0)) {
    fail("capacity.session_capacity_bps", "must be positive");
  }
  if (!(config.capacity.loss_threshold > 0.0 && config.capacity.loss_threshold < 1.0)) {
    fail("capacity.loss_threshold", "must be in (0,1)");
  }
  if (!(config.stream.size_bits > 0.0)) fail("stream.size_bits", "must be positive");
  if (!(config.stream.duration_s > 0.0)) fail("stream.duration_s", "must be positive");
  if (config.replication < 1) fail("replication", "must be at least 1");
  if (!(config.request_rate > 0.0) || !std::isfinite(config.request_rate)) {
    fail("request_rate", "must be positive");
  }
  return out;
}

struct SessionStats {
  std::size_t index = 0;
  Tick start_tick = 0;
  std::uint64_t requests = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t admitted = 0;
  std::uint64_t dropped = 0;
  double aggregate_bps = 0.0;
  double capacity_bps = 0.0;

  double hit_ratio() const {
    return requests == 0 ? 0.0 : static_cast<double>(cache_hits) / static_cast<double>(requests);
  }
  bool operator==(const SessionStats&) const = default;
};

struct SimMetrics {
  std::map<std::uint32_t, std::uint64_t> hop_histogram;
  std::uint64_t total_requests = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  std::uint64_t admitted = 0;
  std::uint64_t dropped = 0;
  std::uint64_t served = 0;
  std::uint64_t expired = 0;
  std::uint64_t not_found = 0;
  std::uint64_t queue_overflow = 0;
  double hit_ratio = 0.0;
  std::uint64_t score = 0;
  std::vector<SessionStats> sessions;

  bool operator==(const SimMetrics&) const = default;
};

/// Sum over the histogram of served count times hop count. Lower is better.
inline std::uint64_t score(const SimMetrics& metrics) {
  std::uint64_t total = 0;
  for (const auto& [hops, count] : metrics.hop_histogram) total += count * hops;
  return total;
}

/// Mean hop count of served requests; 0 when nothing was served.
inline double mean_hops(const SimMetrics& metrics) {
  std::uint64_t n = 0;
  for (const auto& [hops, count] : metrics.hop_histogram) n += count;
  return n == 0 ? 0.0 : static_cast<double>(score(metrics)) / static_cast<double>(n);
}

/// Hop count with the most served requests; ties go to the smaller hop.
inline std::uint32_t modal_hop(const SimMetrics& metrics) {
  std::uint32_t best = 0;
  std::uint64_t best_count = 0;
  for (const auto& [hops, count] : metrics.hop_histogram) {
    if (count > best_count) {
      best = hops;
      best_count = count;
    }
  }
  return best;
}

/// State visible to a per-tick observer after the tick has been processed.
struct TickSnapshot {
  Tick tick = 0;
  std::size_t session = 0;
  std::uint64_t session_offered = 0;
  std::uint64_t session_admitted = 0;
  std::uint64_t session_dropped = 0;
  double aggregate_bps = 0.0;
  double capacity_bps = 0.0;
  const SimMetrics* metrics = nullptr;
};

using TickObserver = std::function<void(const TickSnapshot&)>;

/// True when every generated request is accounted for exactly once.
inline bool requests_conserved(const SimMetrics& m) {
  std::uint64_t hist = 0;
  for (const auto& [hops, count] : m.hop_histogram) hist += count;
  return hist == m.served &&
         m.served + m.dropped + m.expired + m.not_found + m.queue_overflow + m.cache_hits ==
             m.total_requests &&
         m.cache_hits + m.cache_misses == m.total_requests &&
         m.admitted + m.dropped == m.cache_misses;
}

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::vector<std::string>& problems)
      : std::invalid_argument(join(problems)), problems_(problems) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string s = "invalid simulation config";
    for (const auto& x : p) s += "; " + x;
    return s;
  }
  std::vector<std::string> problems_;
};

namespace detail {

// Independent, reproducible engine per concern so that, e.g., changing the
// arrival process does not perturb content placement.
inline Rng make_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  return Rng(seq);
}

enum Stream : std::uint32_t { placement = 1, requests = 2, arrivals = 3, viewers = 4 };

}  // namespace detail

/**
 * @brief Discrete-event run of the delivery pipeline.
 *
 * Per tick: deliver searches whose data arrives now (release the origin's
 * load, store the video in the web cache), then generate the tick's requests.
 * Each request samples a rank, consults the cache, and on a miss passes
 * admission against the current session's capacity, is assigned to the
 * least loaded application server and searched for in storage. A found
 * video arrives hops ticks later.
 */
class Simulation {
 public:
  explicit Simulation(SimConfig config)
      : config_(std::move(config)),
        catalog_(checked(config_).catalog.n_videos, config_.catalog.alpha),
        topology_(build_topology(config_.topology)),
        placement_(make_placement()),
        cache_(config_.cache.capacity, config_.cache.lambda),
        load_(topology_.app_servers().size(), 0),
        request_rng_(detail::make_stream(config_.seed, detail::requests)),
        arrival_rng_(detail::make_stream(config_.seed, detail::arrivals)) {}

  /// Runs over a caller-supplied storage domain; config.topology and
  /// config.replication are ignored.
  Simulation(SimConfig config, StorageTopology topology, ContentPlacement placement)
      : config_(std::move(config)),
        catalog_(checked(config_).catalog.n_videos, config_.catalog.alpha),
        topology_(std::move(topology)),
        placement_(std::move(placement)),
        cache_(config_.cache.capacity, config_.cache.lambda),
        load_(topology_.app_servers().size(), 0),
        request_rng_(detail::make_stream(config_.seed, detail::requests)),
        arrival_rng_(detail::make_stream(config_.seed, detail::arrivals)) {
    if (topology_.app_servers().empty()) throw std::invalid_argument("topology has no application server");
  }

  const StorageTopology& topology() const noexcept { return topology_; }
  const ContentPlacement& placement() const noexcept { return placement_; }
  const ZipfCatalog& catalog() const noexcept { return catalog_; }

  SimMetrics run(const TickObserver& observer = {}) {
    SimMetrics m;
    const double rate = config_.stream.rate();
    const Tick span = config_.session.duration_ticks;

    if (config_.cache.prewarm) {
      const std::size_t warm = std::min(config_.cache.capacity, config_.catalog.n_videos);
      for (std::size_t r = warm; r >= 1; --r) cache_.insert(static_cast<VideoId>(r - 1), 0);
    }

    SessionCapacity session(config_.capacity.session_capacity_bps);
    Tick session_start = 0;
    for (Tick tick = 0; tick < config_.session.total_ticks; ++tick) {
      if (tick % span == 0) {
        session = SessionCapacity(config_.capacity.session_capacity_bps);
        session_start = tick;
        m.sessions.push_back(SessionStats{m.sessions.size(), tick, 0, 0, 0, 0, 0.0,
                                          config_.capacity.session_capacity_bps});
      }
      SessionStats& stats = m.sessions.back();

      while (!pending_.empty() && pending_.top().at <= tick) {
        const Delivery d = pending_.top();
        pending_.pop();
        --load_[d.origin_slot];
        cache_.insert(d.video, tick);
      }

      const std::uint64_t arrivals = arrivals_at(tick);
      for (std::uint64_t i = 0; i < arrivals; ++i) {
        const auto video = static_cast<VideoId>(catalog_.sample(request_rng_) - 1);
        ++m.total_requests;
        ++stats.requests;
        if (cache_.lookup(video, tick).hit()) {
          ++m.cache_hits;
          ++stats.cache_hits;
          continue;
        }
        ++m.cache_misses;
        if (session.admit(rate) == Admission::drop) {
          ++m.dropped;
          ++stats.dropped;
          continue;
        }
        ++m.admitted;
        ++stats.admitted;

        const std::size_t slot = least_loaded();
        SearchSession search{session_start, span, config_.queue_capacity,
                             topology_.app_servers()[slot]};
        const SearchResult result = session_search(topology_, placement_, video, search, tick);
        switch (result.outcome) {
          case SearchOutcome::found:
            ++m.served;
            ++m.hop_histogram[*result.hops];
            ++load_[slot];
            pending_.push(Delivery{tick + static_cast<Tick>(*result.hops), next_seq_++, slot, video});
            break;
          case SearchOutcome::expired: ++m.expired; break;
          case SearchOutcome::not_found: ++m.not_found; break;
          case SearchOutcome::queue_overflow: ++m.queue_overflow; break;
        }
      }

      stats.aggregate_bps = session.aggregate();
      VODSIM_INVARIANT(requests_conserved(m), "request conservation");
      VODSIM_INVARIANT(session.aggregate() <= session.capacity(), "B(s) <= C(s)");
      VODSIM_INVARIANT(session.admitted() + session.dropped() == session.offered(),
                       "admitted + dropped == offered");
      if (observer) {
        observer(TickSnapshot{tick, m.sessions.size() - 1, session.offered(), session.admitted(),
                              session.dropped(), session.aggregate(), session.capacity(), &m});
      }
    }

    const std::uint64_t refs = cache_.hits() + cache_.misses();
    m.hit_ratio = refs == 0 ? 0.0 : cache_.hit_ratio();
    m.score = score(m);
    return m;
  }

 private:
  struct Delivery {
    Tick at;
    std::uint64_t seq;
    std::size_t origin_slot;
    VideoId video;
    bool operator>(const Delivery& o) const { return at != o.at ? at > o.at : seq > o.seq; }
  };

  static const SimConfig& checked(const SimConfig& config) {
    auto problems = validate(config);
    if (!problems.empty()) throw ConfigError(problems);
    return config;
  }

  ContentPlacement make_placement() {
    Rng rng = detail::make_stream(config_.seed, detail::placement);
    return place_content(topology_, config_.catalog.n_videos, config_.replication, rng);
  }

  std::uint64_t arrivals_at(Tick tick) {
    const double r = config_.request_rate;
    if (config_.arrival == Arrival::poisson) return poisson(arrival_rng_, r);
    // Fixed rate with fractional carry: floor((t+1)r) - floor(tr).
    const auto before = static_cast<std::uint64_t>(std::floor(static_cast<double>(tick) * r));
    const auto after = static_cast<std::uint64_t>(std::floor(static_cast<double>(tick + 1) * r));
    return after - before;
  }

  // Application servers are sorted by id, so the first minimum is the
  // lowest id among the least loaded.
  std::size_t least_loaded() const {
    return static_cast<std::size_t>(std::min_element(load_.begin(), load_.end()) - load_.begin());
  }

  SimConfig config_;
  ZipfCatalog catalog_;
  StorageTopology topology_;
  ContentPlacement placement_;
  LrfuCache<VideoId> cache_;
  std::vector<std::uint64_t> load_;
  Rng request_rng_;
  Rng arrival_rng_;
  std::priority_queue<Delivery, std::vector<Delivery>, std::greater<>> pending_;
  std::uint64_t next_seq_ = 0;
};

/// Runs one simulation. Throws ConfigError before any event if the config
/// is invalid.
inline SimMetrics run(const SimConfig& config, const TickObserver& observer = {}) {
  return Simulation(config).run(observer);
}

struct ClusterPoint {
  std::size_t clusters = 0;
  double rate_bps = 0.0;
  std::size_t streams = 0;
  double total_bps = 0.0;
  double per_viewer_bps = 0.0;
  bool operator==(const ClusterPoint&) const = default;
};

/**
 * @brief Bandwidth needed to serve a viewer population as viewer clusters
 * are formed.
 *
 * `viewers` requests are drawn from the config's catalog. Viewers asking for
 * the same video can be merged into one cluster fed by a single shared
 * stream. With c clusters the c largest same-video groups share a stream
 * each and every other viewer receives a unicast stream, so adding a cluster
 * never increases the required bandwidth. c = 0 is the unclustered case.
 */
inline std::vector<ClusterPoint> run_cluster_sweep(const SimConfig& config,
                                                   std::span<const std::size_t> cluster_counts,
                                                   double per_viewer_rate, std::size_t viewers) {
  if (!(per_viewer_rate > 0.0)) throw std::invalid_argument("per-viewer rate must be positive");
  std::vector<ClusterPoint> series;
  if (cluster_counts.empty()) return series;

  const ZipfCatalog catalog(config.catalog.n_videos, config.catalog.alpha);
  Rng rng = detail::make_stream(config.seed, detail::viewers);
  std::map<std::size_t, std::size_t> demand;
  for (std::size_t v = 0; v < viewers; ++v) ++demand[catalog.sample(rng)];

  std::vector<std::pair<std::size_t, std::size_t>> groups(demand.begin(), demand.end());
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::size_t> clustered_viewers(groups.size() + 1, 0);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    clustered_viewers[i + 1] = clustered_viewers[i] + groups[i].second;
  }

  series.reserve(cluster_counts.size());
  for (std::size_t c : cluster_counts) {
    const std::size_t used = std::min(c, groups.size());
    const std::size_t streams = used + (viewers - clustered_viewers[used]);
    ClusterPoint p;
    p.clusters = c;
    p.rate_bps = per_viewer_rate;
    p.streams = streams;
    p.total_bps = static_cast<double>(streams) * per_viewer_rate;
    p.per_viewer_bps = viewers == 0 ? 0.0 : p.total_bps / static_cast<double>(viewers);
    series.push_back(p);
  }
  return series;
}

}  // namespace vodsim
