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
#include <span>
#include <stdexcept>
#include <vector>

#include "vodsim/popularity.hpp"

namespace vodsim {

/// Size and channel occupancy of one transfer; the rate is derived.
struct BandwidthDemand {
  double size_bits = 0.0;
  double duration_s = 0.0;

  double rate() const {
    if (!(duration_s > 0.0)) throw std::domain_error("transfer duration must be positive");
    if (!(size_bits > 0.0)) throw std::domain_error("transfer size must be positive");
    return size_bits / duration_s;
  }
};

/// Required rate in bits per second for one transfer.
inline double bandwidth_demand(const BandwidthDemand& d) { return d.rate(); }

/// A cache miss: the popularity rank that missed and what importing it costs.
struct MissDemand {
  std::size_t rank = 1;
  BandwidthDemand demand;
};

struct AggregateDemand {
  /// Plain sum of miss rates; the quantity admission compares to capacity.
  double plain = 0.0;
  /// Sum of rates scaled by the popularity mass of the cache-resident head,
  /// sum_i (sum_{j<=C} p(j)) * rate_i.
  double weighted = 0.0;
  /// Diagnostic closed form loss_threshold * sum_i p(rank_i) * C^(1-alpha) * rate_i.
  double approximation = 0.0;
};

/**
 * @brief Binomial model of how many storage servers can stream a session.
 *
 * Each of n_servers is independently "enthusiastic" (holds the content and
 * keeps a live link for the whole session) with probability rho. The pmf is
 * anchored at its mode in log space and filled outwards by the ratio
 * recurrence, then renormalized, which keeps it accurate for N up to 1e4 and
 * beyond.
 */
class EnthusiasmModel {
 public:
  explicit EnthusiasmModel(std::size_t n_servers, double rho = 0.5, double loss_threshold = 0.1)
      : n_(n_servers), rho_(rho), loss_threshold_(loss_threshold) {
    if (n_servers == 0) throw std::invalid_argument("n_servers must be positive");
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must be in [0,1]");
    if (!(loss_threshold > 0.0 && loss_threshold < 1.0)) {
      throw std::invalid_argument("loss_threshold must be in (0,1)");
    }
    build_table();
  }

  std::size_t n_servers() const noexcept { return n_; }
  double rho() const noexcept { return rho_; }
  double loss_threshold() const noexcept { return loss_threshold_; }

  /// P(exactly k servers are enthusiastic).
  double pmf(std::size_t k) const {
    if (k > n_) throw std::domain_error("k out of range [0, N]");
    return pmf_[k];
  }

  /// P(at least k servers are enthusiastic).
  double tail(std::size_t k) const {
    if (k > n_) throw std::domain_error("k out of range [0, N]");
    return tail_[k];
  }

  /// Largest k' such that P(X >= k') >= target; at most N.
  std::size_t min_active_servers(double target) const {
    if (!(target > 0.0 && target < 1.0)) throw std::domain_error("target must be in (0,1)");
    // tail_ is nonincreasing; P(X >= 0) = 1 always clears the target.
    std::size_t k = 0;
    while (k < n_ && tail_[k + 1] >= target) ++k;
    return k;
  }

 private:
  void build_table() {
    pmf_.assign(n_ + 1, 0.0);
    if (rho_ == 0.0) {
      pmf_[0] = 1.0;
    } else if (rho_ == 1.0) {
      pmf_[n_] = 1.0;
    } else {
      const double n = static_cast<double>(n_);
      auto mode = static_cast<std::size_t>(std::floor((n + 1.0) * rho_));
      if (mode > n_) mode = n_;
      const double m = static_cast<double>(mode);
      const double log_mode = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) -
                              std::lgamma(n - m + 1.0) + m * std::log(rho_) +
                              (n - m) * std::log1p(-rho_);
      pmf_[mode] = std::exp(log_mode);
      const double odds = rho_ / (1.0 - rho_);
      for (std::size_t k = mode; k < n_; ++k) {
        pmf_[k + 1] = pmf_[k] * (static_cast<double>(n_ - k) / static_cast<double>(k + 1)) * odds;
      }
      for (std::size_t k = mode; k > 0; --k) {
        pmf_[k - 1] = pmf_[k] * (static_cast<double>(k) / static_cast<double>(n_ - k + 1)) / odds;
      }
      double total = 0.0;
      double carry = 0.0;
      for (double p : pmf_) {
        const double t = total + p;
        carry += std::abs(total) >= std::abs(p) ? (total - t) + p : (p - t) + total;
        total = t;
      }
      total += carry;
      for (double& p : pmf_) p /= total;
    }
    tail_.assign(n_ + 2, 0.0);
    for (std::size_t k = n_ + 1; k-- > 0;) tail_[k] = tail_[k + 1] + pmf_[k];
    tail_[0] = 1.0;
  }

  std::size_t n_;
  double rho_;
  double loss_threshold_;
  std::vector<double> pmf_;
  std::vector<double> tail_;
};

inline double enthusiastic_pmf(const EnthusiasmModel& model, std::size_t k) { return model.pmf(k); }

inline std::size_t min_active_servers(const EnthusiasmModel& model, double target) {
  return model.min_active_servers(target);
}

/// Aggregate import bandwidth of a session's cache-miss stream.
inline AggregateDemand aggregate_demand(std::span<const MissDemand> misses,
                                        const EnthusiasmModel& model, std::size_t cache_size,
                                        const ZipfCatalog& catalog) {
  AggregateDemand out;
  if (misses.empty()) return out;
  const std::size_t head = std::min(cache_size, catalog.n_videos());
  const double head_mass = head == 0 ? 0.0 : catalog.cdf(head);
  const double cache_factor =
      std::pow(static_cast<double>(cache_size), 1.0 - catalog.alpha());
  for (const auto& miss : misses) {
    const double rate = miss.demand.rate();
    out.plain += rate;
    out.approximation += catalog.pmf(miss.rank) * cache_factor * rate;
  }
  out.weighted = head_mass * out.plain;
  out.approximation *= model.loss_threshold();
  return out;
}

enum class Admission { admit, drop };

/**
 * @brief Aggregate bit rate B(s) of one session against its capacity C(s).
 *
 * A request is admitted iff B(s) + incoming <= C(s).
 */
class SessionCapacity {
 public:
  explicit SessionCapacity(double capacity_bps) : capacity_(capacity_bps) {
    if (!(capacity_bps > 0.0)) throw std::invalid_argument("session capacity must be positive");
  }

  double capacity() const noexcept { return capacity_; }
  double aggregate() const noexcept { return aggregate_; }
  std::uint64_t admitted() const noexcept { return admitted_; }
  std::uint64_t dropped() const noexcept { return dropped_; }
  std::uint64_t offered() const noexcept { return admitted_ + dropped_; }

  Admission admit(double incoming_bps) {
    if (!(incoming_bps >= 0.0)) throw std::domain_error("incoming rate must be non-negative");
    if (aggregate_ + incoming_bps <= capacity_) {
      aggregate_ += incoming_bps;
      ++admitted_;
      return Admission::admit;
    }
    ++dropped_;
    return Admission::drop;
  }

 private:
  double capacity_;
  double aggregate_ = 0.0;
  std::uint64_t admitted_ = 0;
  std::uint64_t dropped_ = 0;
};

}  // namespace vodsim
