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

#include <gtest/gtest.h>

#include <numeric>

#include "prior_adapt/error.hpp"
#include "prior_adapt/random.hpp"

namespace {

using namespace prior_adapt;

TEST(Random, SubstreamsAreDeterministicAndDistinct) {
  Rng a = make_rng(5, Stream::transfer, 0);
  Rng b = make_rng(5, Stream::transfer, 0);
  Rng c = make_rng(5, Stream::test, 0);
  Rng d = make_rng(5, Stream::transfer, 1);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

TEST(Random, Uniform01Range) {
  Rng rng = make_rng(1, Stream::suite);
  double lo = 1, hi = 0, sum = 0;
  for (int i = 0; i < 100'000; ++i) {
    const double u = uniform01(rng);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 100'000, 0.5, 0.005);
}

TEST(Random, CategoricalFrequencies) {
  Rng rng = make_rng(2, Stream::suite);
  Eigen::VectorXd w(4);
  w << 0.1, 0.0, 0.6, 0.3;
  std::vector<int> hits(4, 0);
  const int n = 200'000;
  for (int i = 0; i < n; ++i) ++hits[sample_categorical(w, rng)];
  EXPECT_EQ(hits[1], 0);
  EXPECT_NEAR(hits[0] / double(n), 0.1, 0.005);
  EXPECT_NEAR(hits[2] / double(n), 0.6, 0.005);
  EXPECT_THROW(sample_categorical(Eigen::VectorXd::Zero(3), rng), Error);
}

TEST(Random, ShuffleIsAPermutation) {
  Rng rng = make_rng(3, Stream::suite);
  std::vector<std::size_t> v(100);
  std::iota(v.begin(), v.end(), std::size_t{0});
  shuffle_indices(v, rng);
  std::vector<std::size_t> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_FALSE(std::is_sorted(v.begin(), v.end()));
}

TEST(Random, LargestRemainderAllocation) {
  Eigen::VectorXd p(3);
  p << 0.5, 0.3, 0.2;
  EXPECT_EQ(allocate_counts(p, 10), (std::vector<std::size_t>{5, 3, 2}));
  p << 1.0 / 3, 1.0 / 3, 1.0 / 3;
  EXPECT_EQ(allocate_counts(p, 10), (std::vector<std::size_t>{4, 3, 3}));
  p << 0.0, 0.7, 0.3;
  const auto counts = allocate_counts(p, 7);
  EXPECT_EQ(counts[0], 0u);
  EXPECT_EQ(counts[1] + counts[2], 7u);
  EXPECT_THROW(allocate_counts(Eigen::VectorXd::Zero(3), 5), Error);
}

TEST(Random, StratifiedLabelsHonourCounts) {
  Rng rng = make_rng(4, Stream::suite);
  Eigen::VectorXd p(4);
  p << 0.25, 0.25, 0.0, 0.5;
  const auto labels = stratified_labels(p, 40, rng);
  std::vector<int> hits(4, 0);
  for (auto l : labels) ++hits[l];
  EXPECT_EQ(hits, (std::vector<int>{10, 10, 0, 20}));
}

}  // namespace
