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

// Independent reference implementations used only by the tests. None of
// these share code paths with the library they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace vodsim::oracle {

/// Kahan-Babuska-Neumaier sum in the given order.
inline double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0;
  double c = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

/// Zipf normalization summed from rank 1 upwards with long double.
inline double zipf_norm(std::size_t n, double alpha) {
  long double h = 0.0L;
  for (std::size_t i = 1; i <= n; ++i) h += 1.0L / std::pow(static_cast<long double>(i), alpha);
  return static_cast<double>(h);
}

/// Exact binomial pmf for rho = num/den as a ratio of 128-bit integers.
inline long double binomial_exact(unsigned n, unsigned k, unsigned num, unsigned den) {
  using u128 = unsigned __int128;
  u128 choose = 1;
  for (unsigned i = 1; i <= k; ++i) choose = choose * (n - k + i) / i;
  u128 top = choose;
  for (unsigned i = 0; i < k; ++i) top *= num;
  for (unsigned i = 0; i < n - k; ++i) top *= (den - num);
  u128 bottom = 1;
  for (unsigned i = 0; i < n; ++i) bottom *= den;
  return static_cast<long double>(top) / static_cast<long double>(bottom);
}

/// Applies the two-branch LRFU rule to every resident entry at every tick.
class EagerLrfu {
 public:
  EagerLrfu(std::size_t capacity, double lambda) : capacity_(capacity), lambda_(lambda) {}

  struct Entry {
    double count = 0.0;
    std::int64_t last = 0;
  };

  /// Returns (hit, evicted key if any).
  std::pair<bool, std::optional<std::string>> reference(const std::string& key, std::int64_t t) {
    advance_to(t);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      it->second.count = 1.0 + it->second.count;
      it->second.last = t;
      return {true, std::nullopt};
    }
    std::optional<std::string> evicted;
    if (entries_.size() == capacity_) {
      auto victim = entries_.end();
      for (auto e = entries_.begin(); e != entries_.end(); ++e) {
        if (victim == entries_.end()) {
          victim = e;
          continue;
        }
        const double a = e->second.count;
        const double b = victim->second.count;
        const bool equal = std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
        if ((!equal && a < b) || (equal && e->second.last < victim->second.last)) victim = e;
      }
      evicted = victim->first;
      entries_.erase(victim);
    }
    entries_[key] = Entry{1.0, t};
    return {false, evicted};
  }

  const std::map<std::string, Entry>& entries() const { return entries_; }

  void advance_to(std::int64_t t) {
    const double factor = std::pow(2.0, -lambda_);
    for (; now_ < t; ++now_) {
      for (auto& [k, e] : entries_) e.count *= factor;
    }
  }

 private:
  std::size_t capacity_;
  double lambda_;
  std::int64_t now_ = 0;
  std::map<std::string, Entry> entries_;
};

/// In-cache LFU: evicts the smallest reference count, then the least
/// recently referenced, then the smallest key.
class ReferenceLfu {
 public:
  explicit ReferenceLfu(std::size_t capacity) : capacity_(capacity) {}

  std::optional<std::string> reference(const std::string& key, std::int64_t t) {
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      ++it->second.first;
      it->second.second = t;
      return std::nullopt;
    }
    std::optional<std::string> evicted;
    if (entries_.size() == capacity_) {
      auto victim = entries_.begin();
      for (auto e = entries_.begin(); e != entries_.end(); ++e) {
        if (e->second < victim->second) victim = e;
      }
      evicted = victim->first;
      entries_.erase(victim);
    }
    entries_[key] = {1, t};
    return evicted;
  }

 private:
  std::size_t capacity_;
  std::map<std::string, std::pair<std::uint64_t, std::int64_t>> entries_;
};

/// Plain LRU over a recency map.
class ReferenceLru {
 public:
  explicit ReferenceLru(std::size_t capacity) : capacity_(capacity) {}

  std::optional<std::string> reference(const std::string& key, std::int64_t t) {
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      it->second = t;
      return std::nullopt;
    }
    std::optional<std::string> evicted;
    if (entries_.size() == capacity_) {
      auto victim = std::min_element(entries_.begin(), entries_.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
      evicted = victim->first;
      entries_.erase(victim);
    }
    entries_[key] = t;
    return evicted;
  }

 private:
  std::size_t capacity_;
  std::map<std::string, std::int64_t> entries_;
};

/// All-pairs shortest path edge counts; -1 for unreachable.
inline std::vector<std::vector<int>> floyd_warshall(std::size_t n,
                                                    const std::vector<std::pair<unsigned, unsigned>>& edges) {
  constexpr int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [a, b] : edges) {
    d[a][b] = 1;
    d[b][a] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (auto& row : d)
    for (int& x : row)
      if (x >= inf) x = -1;
  return d;
}

struct RandomGraph {
  std::size_t n = 0;
  std::vector<std::pair<unsigned, unsigned>> edges;
  std::vector<unsigned> apps;
  std::vector<unsigned> dbs;
};

/// Connected graph on 2..max_nodes vertices: a random spanning tree plus
/// extra chords. Roughly a third of the vertices are application servers,
/// the rest database nodes, with at least one of each.
inline RandomGraph random_connected_graph(std::mt19937& gen, std::size_t max_nodes) {
  RandomGraph g;
  g.n = std::uniform_int_distribution<std::size_t>(2, max_nodes)(gen);
  for (unsigned v = 1; v < g.n; ++v) {
    g.edges.emplace_back(std::uniform_int_distribution<unsigned>(0, v - 1)(gen), v);
  }
  const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, g.n)(gen);
  for (std::size_t i = 0; i < extra; ++i) {
    unsigned a = std::uniform_int_distribution<unsigned>(0, g.n - 1)(gen);
    unsigned b = std::uniform_int_distribution<unsigned>(0, g.n - 1)(gen);
    if (a != b) g.edges.emplace_back(a, b);
  }
  std::vector<unsigned> order(g.n);
  for (unsigned v = 0; v < g.n; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), gen);
  const std::size_t apps = std::max<std::size_t>(1, g.n / 3);
  g.apps.assign(order.begin(), order.begin() + apps);
  g.dbs.assign(order.begin() + apps, order.end());
  return g;
}

}  // namespace vodsim::oracle
