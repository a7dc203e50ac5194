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

#include "prior_adapt/model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "prior_adapt/error.hpp"

namespace prior_adapt {

namespace {

bool all_finite(const Eigen::Ref<const Eigen::VectorXd>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i))) return false;
  }
  return true;
}

}  // namespace

ScoreRecord::ScoreRecord(Eigen::VectorXd scores, std::optional<std::size_t> true_label)
    : scores_(std::move(scores)), true_label_(true_label) {
  if (scores_.size() < 2) throw Error(ErrorCode::validation, "a score vector needs at least two entries");
  if (!all_finite(scores_)) throw Error(ErrorCode::validation, "scores must be finite");
  for (Eigen::Index i = 0; i < scores_.size(); ++i) {
    if (scores_(i) < 0.0 || scores_(i) > 1.0) {
      throw Error(ErrorCode::validation,
                  "score " + std::to_string(i) + " is outside [0,1]: " + std::to_string(scores_(i)));
    }
  }
  const double sum = scores_.sum();
  if (std::abs(sum - 1.0) > kScoreSumTolerance) {
    throw Error(ErrorCode::validation, "scores sum to " + std::to_string(sum) + ", not 1");
  }
  if (true_label_ && *true_label_ >= size()) {
    throw Error(ErrorCode::validation, "true label index out of range");
  }
}

ConfusionMatrix::ConfusionMatrix(ClassCatalog catalog, Eigen::MatrixXd rows,
                                 std::vector<std::uint64_t> sample_counts)
    : catalog_(std::move(catalog)), rows_(std::move(rows)), sample_counts_(std::move(sample_counts)) {
  const auto k = catalog_.size();
  require_dimension(static_cast<std::size_t>(rows_.rows()), k, "confusion matrix rows");
  require_dimension(static_cast<std::size_t>(rows_.cols()), k, "confusion matrix columns");
  if (sample_counts_.empty()) sample_counts_.assign(k, 0);
  require_dimension(sample_counts_.size(), k, "confusion sample counts");
  for (Eigen::Index j = 0; j < rows_.rows(); ++j) {
    const auto& label = catalog_.label(static_cast<std::size_t>(j));
    if (!all_finite(rows_.row(j).transpose())) {
      throw Error(ErrorCode::validation, "confusion row '" + label + "' has non-finite entries");
    }
    if ((rows_.row(j).array() < 0.0).any() || (rows_.row(j).array() > 1.0).any()) {
      throw Error(ErrorCode::validation, "confusion row '" + label + "' has entries outside [0,1]");
    }
    if (std::abs(rows_.row(j).sum() - 1.0) > kConfusionRowTolerance) {
      throw Error(ErrorCode::validation, "confusion row '" + label + "' is not normalized");
    }
  }
}

ConfusionMatrix ConfusionMatrix::from_counts(ClassCatalog catalog, const Eigen::MatrixXd& counts) {
  const auto k = catalog.size();
  require_dimension(static_cast<std::size_t>(counts.rows()), k, "confusion count rows");
  require_dimension(static_cast<std::size_t>(counts.cols()), k, "confusion count columns");
  Eigen::MatrixXd rows(counts.rows(), counts.cols());
  std::vector<std::uint64_t> samples(k, 0);
  for (Eigen::Index j = 0; j < counts.rows(); ++j) {
    const auto& label = catalog.label(static_cast<std::size_t>(j));
    if (!all_finite(counts.row(j).transpose()) || (counts.row(j).array() < 0.0).any()) {
      throw Error(ErrorCode::validation, "confusion row '" + label + "' has negative or non-finite entries");
    }
    const double sum = counts.row(j).sum();
    if (sum <= 0.0) throw Error(ErrorCode::validation, "confusion row '" + label + "' is all zeros");
    rows.row(j) = counts.row(j) / sum;
    if (sum == std::floor(sum)) samples[static_cast<std::size_t>(j)] = static_cast<std::uint64_t>(sum);
  }
  return ConfusionMatrix(std::move(catalog), std::move(rows), std::move(samples));
}

DecisionHistogram::DecisionHistogram(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
  if (counts_.size() < 2) throw Error(ErrorCode::validation, "a histogram needs at least two classes");
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

Eigen::VectorXd DecisionHistogram::normalized() const {
  if (total_ == 0) throw Error(ErrorCode::insufficient_data, "no decisions observed");
  Eigen::VectorXd c(static_cast<Eigen::Index>(counts_.size()));
  const auto n = static_cast<double>(total_);
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    c(static_cast<Eigen::Index>(i)) = static_cast<double>(counts_[i]) / n;
  }
  return c;
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::naive: return "naive";
    case Method::precision_recall: return "precision_recall";
    case Method::matrix_inverse: return "matrix_inverse";
    case Method::quadratic_program: return "quadratic_program";
    case Method::ground_truth: return "ground_truth";
    case Method::uniform: return "uniform";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  if (name == "naive") return Method::naive;
  if (name == "precision_recall" || name == "pr") return Method::precision_recall;
  if (name == "matrix_inverse" || name == "inverse") return Method::matrix_inverse;
  if (name == "quadratic_program" || name == "qp") return Method::quadratic_program;
  if (name == "ground_truth") return Method::ground_truth;
  if (name == "uniform" || name == "baseline") return Method::uniform;
  return std::nullopt;
}

std::string_view display_name(Method method) noexcept {
  switch (method) {
    case Method::naive: return "Naive";
    case Method::precision_recall: return "Precision/recall";
    case Method::matrix_inverse: return "Matrix inverse";
    case Method::quadratic_program: return "Quadratic programming";
    case Method::ground_truth: return "Ground truth";
    case Method::uniform: return "Baseline";
  }
  return "Unknown";
}

PriorEstimate::PriorEstimate(Eigen::VectorXd values, Method method, EstimateDiagnostics diagnostics)
    : values_(std::move(values)), method_(method), diagnostics_(diagnostics) {
  if (values_.size() < 2) throw Error(ErrorCode::validation, "a prior estimate needs at least two classes");
  if (!all_finite(values_)) throw Error(ErrorCode::validation, "prior estimate has non-finite values");
  if ((values_.array() < 0.0).any() || (values_.array() > 1.0).any()) {
    throw Error(ErrorCode::validation, "prior estimate has values outside [0,1]");
  }
  if (std::abs(values_.sum() - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::validation,
                "prior estimate sums to " + std::to_string(values_.sum()) + ", not 1");
  }
}

PriorEstimate PriorEstimate::uniform(std::size_t k) {
  const auto n = static_cast<Eigen::Index>(k);
  return PriorEstimate(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(k)), Method::uniform);
}

AdaptedPolicy::AdaptedPolicy(Eigen::VectorXd weights, std::optional<Method> method)
    : prior_weights_(std::move(weights)), method_(method) {
  if (prior_weights_.size() < 2) throw Error(ErrorCode::validation, "a policy needs at least two classes");
  if (!all_finite(prior_weights_) || (prior_weights_.array() < 0.0).any()) {
    throw Error(ErrorCode::validation, "prior weights must be finite and nonnegative");
  }
  alpha_ = prior_weights_ * static_cast<double>(prior_weights_.size());
}

AdaptedPolicy::AdaptedPolicy(const PriorEstimate& priors) : AdaptedPolicy(priors.values(), priors.method()) {}

AdaptedPolicy AdaptedPolicy::from_weights(Eigen::VectorXd weights) {
  return AdaptedPolicy(std::move(weights), std::nullopt);
}

std::size_t argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& values) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values(i) > values(best)) best = i;
  }
  return static_cast<std::size_t>(best);
}

std::size_t decide_baseline(const ScoreRecord& record) { return argmax_lowest(record.scores()); }

std::size_t decide_baseline(const ClassCatalog& catalog, const ScoreRecord& record) {
  require_dimension(record.size(), catalog.size(), "score record");
  return decide_baseline(record);
}

Eigen::VectorXd reweight(const ScoreRecord& record, const AdaptedPolicy& policy) {
  require_dimension(record.size(), policy.size(), "score record");
  return policy.prior_weights().cwiseProduct(record.scores());
}

Eigen::VectorXd normalize_for_display(const Eigen::VectorXd& values) {
  const double sum = values.sum();
  if (sum > 0.0) return values / sum;
  return values;
}

AdaptedDecision decide_adapted(const ScoreRecord& record, const AdaptedPolicy& policy) {
  const Eigen::VectorXd products = reweight(record, policy);
  if ((products.array() == 0.0).all()) return {decide_baseline(record), true};
  return {argmax_lowest(products), false};
}

}  // namespace prior_adapt
