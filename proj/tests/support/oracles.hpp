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

// Reference computations used as independent oracles by the tests. Nothing
// here calls the solver or estimators under test.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "prior_adapt/catalog.hpp"
#include "prior_adapt/model.hpp"

namespace oracle {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random point on the simplex; with `sparse`, roughly a third of the entries are zero.
inline Eigen::VectorXd random_simplex(Eigen::Index k, Rng& rng, bool sparse = false) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd v(k);
  for (Eigen::Index i = 0; i < k; ++i) v(i) = e(rng);
  if (sparse) {
    for (Eigen::Index i = 0; i < k; ++i) {
      if (uniform(rng) < 1.0 / 3.0) v(i) = 0.0;
    }
    if (v.sum() == 0.0) v(0) = 1.0;
  }
  return v / v.sum();
}

/// Row-normalized confusion with diagonal in [diag_lo, diag_hi]; off-diagonal
/// mass spread with random weights.
inline Eigen::MatrixXd random_confusion_rows(Eigen::Index k, Rng& rng, double diag_lo = 0.6,
                                             double diag_hi = 0.9) {
  Eigen::MatrixXd rows(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double d = uniform(rng, diag_lo, diag_hi);
    double off = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      rows(j, i) = i == j ? 0.0 : uniform(rng, 0.01, 1.0);
      off += rows(j, i);
    }
    for (Eigen::Index i = 0; i < k; ++i) rows(j, i) = i == j ? d : (1.0 - d) * rows(j, i) / off;
    rows.row(j) /= rows.row(j).sum();
  }
  return rows;
}

/// Any row-stochastic matrix, not necessarily diagonally dominant.
inline Eigen::MatrixXd random_stochastic_rows(Eigen::Index k, Rng& rng) {
  Eigen::MatrixXd rows(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) rows(j, i) = uniform(rng, 0.01, 1.0);
    rows.row(j) /= rows.row(j).sum();
  }
  return rows;
}

inline prior_adapt::ConfusionMatrix confusion(const Eigen::MatrixXd& rows) {
  return prior_adapt::ConfusionMatrix(prior_adapt::ClassCatalog::numbered(static_cast<std::size_t>(rows.rows())),
                                      rows);
}

/// H v with H the transpose of the confusion rows, written out as sums.
inline Eigen::VectorXd forward(const Eigen::MatrixXd& confusion_rows, const Eigen::VectorXd& v) {
  const Eigen::Index k = confusion_rows.rows();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) c(i) += confusion_rows(j, i) * v(j);
  }
  return c;
}

inline double objective(const Eigen::MatrixXd& confusion_rows, const Eigen::VectorXd& c, const Eigen::VectorXd& v) {
  return (forward(confusion_rows, v) - c).squaredNorm();
}

struct GridMinimum {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd argmin;
};

/// Exhaustive search over the 2-simplex grid {(a, b, 1-a-b)/n}.
inline GridMinimum simplex_grid_minimum(const Eigen::MatrixXd& confusion_rows, const Eigen::VectorXd& c,
                                        int n = 1000) {
  GridMinimum best;
  Eigen::VectorXd v(3);
  const Eigen::Matrix3d h = confusion_rows.transpose();
  const Eigen::Vector3d target = c;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; a + b <= n; ++b) {
      v << static_cast<double>(a) / n, static_cast<double>(b) / n, static_cast<double>(n - a - b) / n;
      const double f = (h * Eigen::Vector3d(v) - target).squaredNorm();
      if (f < best.value) {
        best.value = f;
        best.argmin = v;
      }
    }
  }
  return best;
}

/// Brute-force line search over v = (t, 1 - t), t in [0, 1].
inline GridMinimum line_search_minimum(const Eigen::MatrixXd& confusion_rows, const Eigen::VectorXd& c,
                                       double step = 1e-6) {
  GridMinimum best;
  const auto n = static_cast<long>(1.0 / step + 0.5);
  Eigen::VectorXd v(2);
  for (long s = 0; s <= n; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(n);
    v << t, 1.0 - t;
    const double f = objective(confusion_rows, c, v);
    if (f < best.value) {
      best.value = f;
      best.argmin = v;
    }
  }
  return best;
}

/// Frank-Wolfe gap g'v - min(g) of the simplex least-squares problem.
inline double frank_wolfe_gap(const Eigen::MatrixXd& confusion_rows, const Eigen::VectorXd& c,
                              const Eigen::VectorXd& v) {
  const Eigen::VectorXd r = forward(confusion_rows, v) - c;
  const Eigen::VectorXd g = 2.0 * confusion_rows * r;
  return g.dot(v) - g.minCoeff();
}

/// Histogram of the last min(n, window) decisions, recounted from scratch.
inline std::vector<std::uint64_t> trailing_counts(const std::vector<std::size_t>& stream, std::size_t end,
                                                  std::size_t window, std::size_t k) {
  std::vector<std::uint64_t> counts(k, 0);
  const std::size_t begin = end > window ? end - window : 0;
  for (std::size_t i = begin; i < end; ++i) ++counts[stream[i]];
  return counts;
}

/// Random score vector with a random number of exact zeros and occasional ties.
inline Eigen::VectorXd random_scores(Eigen::Index k, Rng& rng) {
  Eigen::VectorXd s(k);
  std::gamma_distribution<double> g(0.5, 1.0);
  for (Eigen::Index i = 0; i < k; ++i) s(i) = g(rng);
  if (uniform(rng) < 0.05) s(static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(k))) = s.maxCoeff();
  if (s.sum() == 0.0) s.setOnes();
  return s / s.sum();
}

}  // namespace oracle
