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

#include <random>

#include <benchmark/benchmark.h>
#include <Eigen/Core>

#include "prior_adapt/simplex_solver.hpp"

namespace {

using prior_adapt::project_simplex;
using prior_adapt::solve_simplex_lsq;

// Column-stochastic H with the given diagonal; columns are confusion rows.
Eigen::MatrixXd make_observation_matrix(Eigen::Index k, double diagonal, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd h(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      h(i, j) = i == j ? 0.0 : u(rng);
      off += h(i, j);
    }
    for (Eigen::Index i = 0; i < k; ++i) h(i, j) = i == j ? diagonal : (1.0 - diagonal) * h(i, j) / off;
  }
  return h;
}

Eigen::VectorXd random_simplex(Eigen::Index k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd v(k);
  for (Eigen::Index i = 0; i < k; ++i) v(i) = e(rng);
  return v / v.sum();
}

void BM_ProjectSimplex(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd y(state.range(0));
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = n(rng);
  for (auto _ : state) benchmark::DoNotOptimize(project_simplex(y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProjectSimplex)->RangeMultiplier(4)->Range(16, 16384)->Complexity();

void BM_SolveSimplexLsq(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Eigen::Index k = state.range(0);
  const Eigen::MatrixXd h = make_observation_matrix(k, 0.7, rng);
  const Eigen::VectorXd c = h * random_simplex(k, rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_simplex_lsq(h, c));
  state.SetComplexityN(k);
}
BENCHMARK(BM_SolveSimplexLsq)->Arg(10)->Arg(50)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LuSolve(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Eigen::Index k = state.range(0);
  const Eigen::MatrixXd h = make_observation_matrix(k, 0.7, rng);
  const Eigen::VectorXd c = h * random_simplex(k, rng);
  for (auto _ : state) benchmark::DoNotOptimize(prior_adapt::solve_linear(h, c));
}
BENCHMARK(BM_LuSolve)->Arg(10)->Arg(50)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
