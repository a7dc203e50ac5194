// Copyright 2026 The prior-adapt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prior_adapt/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prior_adapt/error.hpp"

namespace prior_adapt {

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample_categorical(const Eigen::Ref<const Eigen::VectorXd>& weights, Rng& rng) {
  const double total = weights.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::validation, "categorical weights have no mass");
  const double u = uniform01(rng) * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) <= 0.0) continue;
    cumulative += weights(i);
    last_positive = static_cast<std::size_t>(i);
    if (u < cumulative) return last_positive;
  }
  return last_positive;
}

void shuffle_indices(std::vector<std::size_t>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(values[i - 1], values[j]);
  }
}

std::vector<std::size_t> allocate_counts(const Eigen::VectorXd& priors, std::size_t n) {
  const auto k = static_cast<std::size_t>(priors.size());
  std::vector<std::size_t> counts(k, 0);
  std::vector<double> remainder(k, 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double share = priors(static_cast<Eigen::Index>(i)) * static_cast<double>(n);
    const double base = std::floor(share);
    counts[i] = static_cast<std::size_t>(base);
    remainder[i] = share - base;
    assigned += counts[i];
  }
  if (assigned < n && !(priors.array() > 0.0).any()) {
    throw Error(ErrorCode::validation, "cannot allocate samples over all-zero priors");
  }
  // Floors never overshoot for priors summing to 1; hand out the shortfall by
  // largest remainder.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t r = 0; assigned < n; r = (r + 1) % k) {
    if (priors(static_cast<Eigen::Index>(order[r])) <= 0.0) continue;
    ++counts[order[r]];
    ++assigned;
  }
  return counts;
}

std::vector<std::size_t> stratified_labels(const Eigen::VectorXd& priors, std::size_t n, Rng& rng) {
  const auto counts = allocate_counts(priors, n);
  std::vector<std::size_t> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < counts.size(); ++c) labels.insert(labels.end(), counts[c], c);
  shuffle_indices(labels, rng);
  return labels;
}

}  // namespace prior_adapt
