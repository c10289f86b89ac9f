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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "vodsim/random.hpp"

namespace vodsim {

/// Raised by the asymptotic popularity forms when alpha == 1, where the
/// closed form divides by (1 - alpha).
class UnsupportedAsymptote : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/**
 * @brief Zipf-like popularity law over a catalog of ranked videos.
 *
 * Rank i (1-based) is requested with probability (1/i^alpha) / H, where H is
 * the exact normalization over the whole catalog. The asymptotic cumulative
 * form (k/N)^(1-alpha) is exposed separately for model analysis; sampling
 * always uses the exact pmf.
 *
 * Immutable after construction.
 */
class ZipfCatalog {
 public:
  ZipfCatalog(std::size_t n_videos, double alpha) : n_videos_(n_videos), alpha_(alpha) {
    if (n_videos == 0) throw std::invalid_argument("n_videos must be at least 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");

    delta_ = (1.0 - alpha) / std::pow(static_cast<double>(n_videos), 1.0 - alpha);

    // Neumaier summation from the smallest term upwards.
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t i = n_videos; i >= 1; --i) {
      const double term = weight(i);
      const double t = sum + term;
      carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
      sum = t;
    }
    norm_ = sum + carry;

    cdf_.resize(n_videos);
    double acc = 0.0;
    carry = 0.0;
    for (std::size_t i = 1; i <= n_videos; ++i) {
      const double term = weight(i) / norm_;
      const double t = acc + term;
      carry += std::abs(acc) >= std::abs(term) ? (acc - t) + term : (term - t) + acc;
      acc = t;
      cdf_[i - 1] = std::min(acc + carry, 1.0);
    }
    cdf_.back() = 1.0;
  }

  std::size_t n_videos() const noexcept { return n_videos_; }
  double alpha() const noexcept { return alpha_; }
  double delta() const noexcept { return delta_; }
  double norm() const noexcept { return norm_; }

  /// Exact probability of requesting `rank`.
  double pmf(std::size_t rank) const {
    check_rank(rank, "rank");
    return weight(rank) / norm_;
  }

  /// Exact cumulative probability of ranks 1..rank.
  double cdf(std::size_t rank) const {
    check_rank(rank, "rank");
    return cdf_[rank - 1];
  }

  /// Asymptotic probability that a request targets one of the k most
  /// popular videos, (k/N)^(1-alpha).
  double psi(std::size_t k) const {
    check_rank(k, "k");
    check_asymptote();
    return std::pow(static_cast<double>(k) / static_cast<double>(n_videos_), 1.0 - alpha_);
  }

  /// Probability that a request falls outside the k most popular videos.
  double p_unpopular(std::size_t k_popular) const { return 1.0 - psi(k_popular); }

  /// Draws a rank by inverse transform over the exact cumulative table.
  template <class URBG>
  std::size_t sample(URBG& rng) const {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::size_t>(it - cdf_.begin()) + 1;
  }

 private:
  double weight(std::size_t rank) const {
    return 1.0 / std::pow(static_cast<double>(rank), alpha_);
  }

  void check_rank(std::size_t rank, const char* what) const {
    if (rank < 1 || rank > n_videos_) {
      throw std::domain_error(std::string(what) + " out of range [1, " +
                              std::to_string(n_videos_) + "]: " + std::to_string(rank));
    }
  }

  void check_asymptote() const {
    if (alpha_ == 1.0) {
      throw UnsupportedAsymptote("asymptotic popularity form undefined for alpha == 1");
    }
  }

  std::size_t n_videos_;
  double alpha_;
  double delta_ = 0.0;
  double norm_ = 0.0;
  std::vector<double> cdf_;
};

}  // namespace vodsim
