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

#include "prior_adapt/estimators.hpp"

#include <cmath>
#include <string>

#include "prior_adapt/error.hpp"

namespace prior_adapt {

PrecisionRecallTable precision_recall(const ConfusionMatrix& confusion,
                                      const std::optional<PriorEstimate>& assumed_priors) {
  const auto k = static_cast<Eigen::Index>(confusion.size());
  const Eigen::MatrixXd& rows = confusion.rows();
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(k);
  if (assumed_priors) {
    require_dimension(assumed_priors->size(), confusion.size(), "assumed priors");
    weights = assumed_priors->values();
  }

  PrecisionRecallTable table;
  table.recall = rows.diagonal();
  table.precision = Eigen::VectorXd::Zero(k);
  table.precision_defined.assign(static_cast<std::size_t>(k), false);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double column_mass = rows.col(i).dot(weights);
    if (column_mass > 0.0) {
      table.precision(i) = rows(i, i) * weights(i) / column_mass;
      table.precision_defined[static_cast<std::size_t>(i)] = true;
    }
  }
  return table;
}

PriorEstimate estimate_naive(const DecisionHistogram& histogram) {
  return PriorEstimate(histogram.normalized(), Method::naive);
}

PriorEstimate estimate_precision_recall(const DecisionHistogram& histogram,
                                        const PrecisionRecallTable& table) {
  const auto k = histogram.size();
  require_dimension(static_cast<std::size_t>(table.precision.size()), k, "precision table");
  require_dimension(static_cast<std::size_t>(table.recall.size()), k, "recall table");
  if (histogram.total() == 0) throw Error(ErrorCode::insufficient_data, "no decisions observed");

  // The common factor 1/N cancels in the renormalization. Taking the ratio
  // first makes precision == recall reproduce N_i / N bit for bit.
  Eigen::VectorXd raw(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const auto n_i = histogram.counts()[i];
    if (n_i == 0) {
      raw(idx) = 0.0;
      continue;
    }
    if (!(table.recall(idx) > 0.0)) {
      throw Error(ErrorCode::degenerate_recall,
                  "class " + std::to_string(i) + " was observed but has zero recall");
    }
    raw(idx) = (table.precision(idx) / table.recall(idx)) * static_cast<double>(n_i);
  }
  const double sum = raw.sum();
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::insufficient_data, "precision-corrected frequencies are all zero");
  }
  return PriorEstimate(raw / sum, Method::precision_recall);
}

double observation_residual(const ConfusionMatrix& confusion, const Eigen::VectorXd& c,
                            const Eigen::VectorXd& v) {
  return (confusion.rows().transpose() * v - c).norm();
}

namespace {

void check_observation(const ConfusionMatrix& confusion, const Eigen::VectorXd& c) {
  require_dimension(static_cast<std::size_t>(c.size()), confusion.size(), "observation vector");
  if (!c.allFinite()) throw Error(ErrorCode::validation, "observation vector has non-finite entries");
}

}  // namespace

PriorEstimate estimate_matrix_inverse(const ConfusionMatrix& confusion,
                                      const DecisionHistogram& histogram) {
  require_dimension(histogram.size(), confusion.size(), "decision histogram");
  return estimate_matrix_inverse(confusion, histogram.normalized());
}

PriorEstimate estimate_matrix_inverse(const ConfusionMatrix& confusion, const Eigen::VectorXd& c) {
  check_observation(confusion, c);
  const LinearSolution solution = solve_linear(confusion.observation_matrix(), c);
  if (solution.ill_conditioned) {
    throw Error(ErrorCode::ill_conditioned,
                "confusion matrix is ill-conditioned (condition estimate " +
                    std::to_string(solution.condition_estimate) + ")");
  }

  Eigen::VectorXd clipped = solution.v.cwiseMax(0.0);
  EstimateDiagnostics diagnostics;
  diagnostics.clipped_mass = (clipped - solution.v).sum();
  diagnostics.condition_estimate = solution.condition_estimate;
  const double sum = clipped.sum();
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::insufficient_data, "inverse solution has no positive mass");
  }
  clipped /= sum;
  diagnostics.residual = observation_residual(confusion, c, clipped);
  return PriorEstimate(std::move(clipped), Method::matrix_inverse, diagnostics);
}

PriorEstimate estimate_qp(const ConfusionMatrix& confusion, const DecisionHistogram& histogram,
                          const SolverOptions& options) {
  require_dimension(histogram.size(), confusion.size(), "decision histogram");
  return estimate_qp(confusion, histogram.normalized(), options);
}

PriorEstimate estimate_qp(const ConfusionMatrix& confusion, const Eigen::VectorXd& c,
                          const SolverOptions& options) {
  check_observation(confusion, c);
  const SimplexLsqResult result = solve_simplex_lsq(confusion.observation_matrix(), c, options);

  EstimateDiagnostics diagnostics;
  diagnostics.residual = std::sqrt(result.report.squared_residual);
  diagnostics.iterations = result.report.iterations;
  diagnostics.converged = result.report.converged;
  diagnostics.kkt_violation = result.report.kkt_violation;
  return PriorEstimate(result.v, Method::quadratic_program, diagnostics);
}

PriorEstimate estimate_ground_truth(const Eigen::VectorXd& priors) {
  return PriorEstimate(priors, Method::ground_truth);
}

}  // namespace prior_adapt
