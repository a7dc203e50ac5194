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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace prior_adapt {

using Rng = std::mt19937_64;

/// Named random substreams. Each (seed, stream, index) triple seeds an
/// independent generator, so splits drawn from different streams never share
/// draws and results do not depend on evaluation order.
enum class Stream : std::uint64_t {
  classifier = 1,
  confusion = 2,
  transfer = 3,
  test = 4,
  pool = 5,
  partition = 6,
  drift = 7,
  suite = 8,
};

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(Rng& rng);

/// Index drawn with probabilities proportional to the nonnegative weights.
std::size_t sample_categorical(const Eigen::Ref<const Eigen::VectorXd>& weights, Rng& rng);

/// Fisher-Yates shuffle.
void shuffle_indices(std::vector<std::size_t>& values, Rng& rng);

/// Splits n items across classes in proportion to the priors by largest
/// remainder; ties go to the lowest class index. Counts sum to n exactly.
std::vector<std::size_t> allocate_counts(const Eigen::VectorXd& priors, std::size_t n);

/// Class labels with exactly allocate_counts(priors, n) members, shuffled.
std::vector<std::size_t> stratified_labels(const Eigen::VectorXd& priors, std::size_t n, Rng& rng);

}  // namespace prior_adapt
