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

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "prior_adapt/model.hpp"
#include "prior_adapt/simplex_solver.hpp"

namespace prior_adapt {

/// Per-class precision P(w_i | C_i) and recall P(C_i | w_i) read off a
/// confusion matrix.
struct PrecisionRecallTable {
  Eigen::VectorXd precision;
  Eigen::VectorXd recall;
  /// False where column i carries no mass; precision(i) is then 0.
  std::vector<bool> precision_defined;
};

/// Recall is the confusion diagonal. Precision weights each confusion row by
/// the assumed class priors (uniform by default, i.e. a balanced test set).
PrecisionRecallTable precision_recall(const ConfusionMatrix& confusion,
                                      const std::optional<PriorEstimate>& assumed_priors = {});

/// P(w_i) = N_i / N.
PriorEstimate estimate_naive(const DecisionHistogram& histogram);

/// P(w_i) proportional to Precision_i * N_i / (Recall_i * N), renormalized to
/// the simplex. Throws degenerate_recall when a class with N_i > 0 has zero
/// recall, insufficient_data when nothing survives.
///
/// Precision depends on the class mix of the data it was measured on, so with
/// strongly skewed deployment priors the balanced-set precision is biased.
PriorEstimate estimate_precision_recall(const DecisionHistogram& histogram,
                                        const PrecisionRecallTable& table);

/// Solves H v = c exactly, maps negative entries to 0 and renormalizes.
/// Throws singular_matrix or ill_conditioned (condition estimate above 1e12).
PriorEstimate estimate_matrix_inverse(const ConfusionMatrix& confusion,
                                      const DecisionHistogram& histogram);
/// Same, from a normalized observation vector c.
PriorEstimate estimate_matrix_inverse(const ConfusionMatrix& confusion, const Eigen::VectorXd& c);

/// Least-squares fit of H v = c over the probability simplex. Throws
/// ConvergenceError (carrying the best iterate) when the iteration cap is hit.
PriorEstimate estimate_qp(const ConfusionMatrix& confusion, const DecisionHistogram& histogram,
                          const SolverOptions& options = {});
PriorEstimate estimate_qp(const ConfusionMatrix& confusion, const Eigen::VectorXd& c,
                          const SolverOptions& options = {});

/// Wraps known priors; throws validation when they are not on the simplex.
PriorEstimate estimate_ground_truth(const Eigen::VectorXd& priors);

/// ||H v - c||_2 for the confusion's observation matrix.
double observation_residual(const ConfusionMatrix& confusion, const Eigen::VectorXd& c,
                            const Eigen::VectorXd& v);

}  // namespace prior_adapt
