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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vodsim/types.hpp"

namespace vodsim {

enum class CacheOutcome { hit, miss };

template <class Key>
struct AccessResult {
  CacheOutcome outcome;
  std::optional<Key> evicted;

  bool hit() const noexcept { return outcome == CacheOutcome::hit; }
};

/**
 * @brief Bounded cache scored by the LRFU rule.
 *
 * Each resident entry carries a hit count that decays by 2^(-lambda) per tick
 * and gains 1 on every reference:
 *
 *     referenced:      count <- 1 + 2^(-lambda * dt) * count
 *     not referenced:  count <- 2^(-lambda * dt) * count
 *
 * Decay is applied lazily from the entry's last update, which is the same
 * value eager per-tick decay would produce. The victim on insert pressure is
 * the entry with the smallest decayed count; ties go to the least recently
 * updated entry, then to the smallest key.
 *
 * lambda = 0 yields LFU ordering and large lambda yields LRU ordering.
 */
template <class Key, class Compare = std::less<Key>>
class LrfuCache {
 public:
  struct Entry {
    double hit_count = 0.0;
    Tick last_update = 0;
  };

  LrfuCache(std::size_t capacity, double lambda) : capacity_(capacity), lambda_(lambda) {
    if (capacity == 0) throw std::invalid_argument("cache capacity must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("lambda must be a finite non-negative real");
    }
  }

  std::size_t capacity() const noexcept { return capacity_; }
  double lambda() const noexcept { return lambda_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool full() const noexcept { return entries_.size() >= capacity_; }
  bool contains(const Key& key) const { return entries_.count(key) != 0; }
  std::uint64_t hits() const noexcept { return hits_; }
  std::uint64_t misses() const noexcept { return misses_; }
  const std::map<Key, Entry, Compare>& entries() const noexcept { return entries_; }

  /// References `key` at `now`, admitting it on a miss.
  AccessResult<Key> reference(const Key& key, Tick now) {
    auto result = lookup(key, now);
    if (!result.hit()) result.evicted = insert(key, now);
    return result;
  }

  /// References `key` at `now` without admitting it on a miss. Hit and miss
  /// counters are updated either way.
  AccessResult<Key> lookup(const Key& key, Tick now) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      ++misses_;
      return {CacheOutcome::miss, std::nullopt};
    }
    touch(it->second, now);
    ++hits_;
    return {CacheOutcome::hit, std::nullopt};
  }

  /// Admits `key` with a fresh count of 1, evicting first if the cache is
  /// full. A resident key is referenced instead. Counters are not touched.
  std::optional<Key> insert(const Key& key, Tick now) {
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      touch(it->second, now);
      return std::nullopt;
    }
    std::optional<Key> victim;
    if (full()) victim = evict_victim(now);
    entries_.emplace(key, Entry{1.0, now});
    return victim;
  }

  /// Hit count of a resident entry decayed to `now`. Does not mutate.
  double decayed_count(const Key& key, Tick now) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw std::out_of_range("key not resident in cache");
    return decay(it->second, now);
  }

  /// Removes and returns the entry with the minimum decayed count at `now`.
  Key evict_victim(Tick now) {
    if (!full()) throw std::logic_error("evict_victim called on a cache that is not full");
    auto victim = entries_.begin();
    double victim_count = decay(victim->second, now);
    for (auto it = std::next(entries_.begin()); it != entries_.end(); ++it) {
      const double count = decay(it->second, now);
      // Map iteration is in key order, so strict comparisons keep the
      // smallest key on a full tie.
      if (count < victim_count ||
          (count == victim_count && it->second.last_update < victim->second.last_update)) {
        victim = it;
        victim_count = count;
      }
    }
    Key key = victim->first;
    entries_.erase(victim);
    return key;
  }

  double hit_ratio() const {
    const std::uint64_t total = hits_ + misses_;
    if (total == 0) throw std::domain_error("hit ratio undefined before any reference");
    return static_cast<double>(hits_) / static_cast<double>(total);
  }

 private:
  double decay(const Entry& entry, Tick now) const {
    if (now < entry.last_update) throw std::domain_error("time moved backwards for cache entry");
    if (entry.hit_count == 0.0) return 0.0;
    return entry.hit_count * std::exp2(-lambda_ * static_cast<double>(now - entry.last_update));
  }

  void touch(Entry& entry, Tick now) {
    entry.hit_count = 1.0 + decay(entry, now);
    entry.last_update = now;
  }

  std::size_t capacity_;
  double lambda_;
  std::map<Key, Entry, Compare> entries_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

/// One line of a `tick,key` reference trace.
struct TraceRecord {
  Tick tick = 0;
  std::string key;
};

/// Parses a `tick,key` trace, one reference per line. Blank lines and lines
/// starting with '#' are skipped.
inline std::vector<TraceRecord> read_trace(std::istream& in) {
  std::vector<TraceRecord> trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == line.size()) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected tick,key");
    }
    TraceRecord rec;
    std::size_t used = 0;
    try {
      rec.tick = std::stoll(line.substr(0, comma), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != comma) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad tick");
    }
    if (!trace.empty() && rec.tick < trace.back().tick) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": ticks must not decrease");
    }
    rec.key = line.substr(comma + 1);
    trace.push_back(std::move(rec));
  }
  return trace;
}

/// Feeds a trace through `cache`, returning the outcome of each reference.
template <class Compare>
std::vector<AccessResult<std::string>> replay(LrfuCache<std::string, Compare>& cache,
                                              const std::vector<TraceRecord>& trace) {
  std::vector<AccessResult<std::string>> out;
  out.reserve(trace.size());
  for (const auto& rec : trace) out.push_back(cache.reference(rec.key, rec.tick));
  return out;
}

}  // namespace vodsim
