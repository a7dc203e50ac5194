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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "prior_adapt/catalog.hpp"

namespace prior_adapt {

inline constexpr double kScoreSumTolerance = 1e-6;
inline constexpr double kConfusionRowTolerance = 1e-9;
inline constexpr double kSimplexTolerance = 1e-9;

/// One classifier output: softmax scores standing in for P(w_i | x), plus the
/// true class when it is known (evaluation data).
class ScoreRecord {
 public:
  /// Rejects scores outside [0,1] or summing to 1 +/- kScoreSumTolerance.
  /// Scores are never renormalized on ingestion.
  explicit ScoreRecord(Eigen::VectorXd scores, std::optional<std::size_t> true_label = {});

  const Eigen::VectorXd& scores() const noexcept { return scores_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(scores_.size()); }
  const std::optional<std::size_t>& true_label() const noexcept { return true_label_; }

 private:
  Eigen::VectorXd scores_;
  std::optional<std::size_t> true_label_;
};

/// Row-normalized confusion matrix. Row j, column i holds P(C_i | w_j): the
/// probability of deciding class i when the truth is class j.
class ConfusionMatrix {
 public:
  /// Accepts rows already normalized to 1 (within kConfusionRowTolerance).
  ConfusionMatrix(ClassCatalog catalog, Eigen::MatrixXd rows,
                  std::vector<std::uint64_t> sample_counts = {});

  /// Row-normalizes a nonnegative count (or weight) matrix. An all-zero row
  /// is a validation error naming the row's label.
  static ConfusionMatrix from_counts(ClassCatalog catalog, const Eigen::MatrixXd& counts);

  const ClassCatalog& catalog() const noexcept { return catalog_; }
  std::size_t size() const noexcept { return catalog_.size(); }
  const Eigen::MatrixXd& rows() const noexcept { return rows_; }
  double operator()(std::size_t true_class, std::size_t decided) const {
    return rows_(static_cast<Eigen::Index>(true_class), static_cast<Eigen::Index>(decided));
  }
  const std::vector<std::uint64_t>& sample_counts() const noexcept { return sample_counts_; }

  /// The observation model matrix H whose column j is confusion row j, so that
  /// the decision frequencies satisfy c = H v for class priors v.
  Eigen::MatrixXd observation_matrix() const { return rows_.transpose(); }

 private:
  ClassCatalog catalog_;
  Eigen::MatrixXd rows_;
  std::vector<std::uint64_t> sample_counts_;
};

/// Counts N_i of deployment decisions per class.
class DecisionHistogram {
 public:
  explicit DecisionHistogram(std::vector<std::uint64_t> counts);

  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return counts_.size(); }

  /// Decision frequencies c_i = N_i / N. Throws insufficient_data when N = 0.
  Eigen::VectorXd normalized() const;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

enum class Method {
  naive,
  precision_recall,
  matrix_inverse,
  quadratic_program,
  ground_truth,
  uniform,
};

std::string_view to_string(Method method) noexcept;
/// Accepts the canonical names plus the short aliases "pr", "inverse" and "qp".
std::optional<Method> parse_method(std::string_view name) noexcept;
/// Row title used in report tables ("Matrix inverse", ...).
std::string_view display_name(Method method) noexcept;

struct EstimateDiagnostics {
  std::optional<double> residual;  // ||Hv - c||_2
  std::optional<std::size_t> iterations;
  std::optional<bool> converged;
  std::optional<double> kkt_violation;
  std::optional<double> condition_estimate;
  double clipped_mass = 0.0;
};

/// A point on the probability simplex: estimated priors P(w_k) and the method
/// that produced them.
class PriorEstimate {
 public:
  /// Throws validation unless every value is in [0,1] and they sum to 1
  /// within kSimplexTolerance.
  PriorEstimate(Eigen::VectorXd values, Method method, EstimateDiagnostics diagnostics = {});

  static PriorEstimate uniform(std::size_t k);

  const Eigen::VectorXd& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_(static_cast<Eigen::Index>(i)); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  Method method() const noexcept { return method_; }
  const EstimateDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  Eigen::VectorXd values_;
  Method method_;
  EstimateDiagnostics diagnostics_;
};

/// Decision policy that multiplies each score by its class prior. Holds the
/// prior weights and the ratios alpha_i = P(w_i) / (1/K).
class AdaptedPolicy {
 public:
  explicit AdaptedPolicy(const PriorEstimate& priors);

  /// Policy from arbitrary nonnegative prior weights (not necessarily summing
  /// to 1). Decisions only depend on the weights up to a positive factor.
  static AdaptedPolicy from_weights(Eigen::VectorXd weights);

  const Eigen::VectorXd& prior_weights() const noexcept { return prior_weights_; }
  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(prior_weights_.size()); }
  std::optional<Method> method() const noexcept { return method_; }

 private:
  AdaptedPolicy(Eigen::VectorXd weights, std::optional<Method> method);

  Eigen::VectorXd prior_weights_;
  Eigen::VectorXd alpha_;
  std::optional<Method> method_;
};

struct AdaptedDecision {
  std::size_t index = 0;
  /// Every prior-weighted score was zero; the baseline decision was used.
  bool fallback = false;
};

/// Index of the largest score; ties go to the lowest index.
std::size_t argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& values);

std::size_t decide_baseline(const ScoreRecord& record);
std::size_t decide_baseline(const ClassCatalog& catalog, const ScoreRecord& record);

/// Unnormalized corrected posteriors r_i = P(w_i) * s_i.
Eigen::VectorXd reweight(const ScoreRecord& record, const AdaptedPolicy& policy);

/// Divides by the sum when it is positive; returns the input otherwise.
Eigen::VectorXd normalize_for_display(const Eigen::VectorXd& values);

AdaptedDecision decide_adapted(const ScoreRecord& record, const AdaptedPolicy& policy);

}  // namespace prior_adapt
