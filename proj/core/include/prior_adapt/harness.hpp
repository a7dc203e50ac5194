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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "prior_adapt/catalog.hpp"
#include "prior_adapt/model.hpp"
#include "prior_adapt/random.hpp"
#include "prior_adapt/simplex_solver.hpp"

namespace prior_adapt {

inline constexpr double kDefaultSharpness = 50.0;

/// Stand-in for a trained network: a ground-truth confusion matrix plus a
/// concentration parameter shaping the emitted score vectors.
struct SyntheticClassifier {
  ConfusionMatrix confusion;
  double sharpness = kDefaultSharpness;
};

struct SyntheticClassifierOptions {
  double diagonal_min = 0.65;
  double diagonal_max = 0.85;
  double sharpness = kDefaultSharpness;
  std::uint64_t seed = 1;
};

/// Random confusion whose row j has a diagonal drawn uniformly from
/// [diagonal_min, diagonal_max] and the rest spread over the other classes
/// with exponential weights.
SyntheticClassifier make_synthetic_classifier(const ClassCatalog& catalog,
                                              const SyntheticClassifierOptions& options);

/// Draws the intended decision d from confusion row `true_class`, then a
/// Dirichlet score vector with concentration 1 + sharpness * q, where q is
/// column d of the confusion normalized to sum 1 (the balanced-prior
/// posterior over true classes given decision d). The largest entry is
/// swapped onto d when needed, so argmax(scores) == d always and the long-run
/// decision frequencies match the confusion row.
ScoreRecord generate_record(const SyntheticClassifier& classifier, std::size_t true_class, Rng& rng);

/// Empirical row-normalized confusion from baseline decisions on
/// samples_per_class generated records of each class.
ConfusionMatrix estimate_confusion(const SyntheticClassifier& classifier,
                                   std::size_t samples_per_class, Rng& rng);

struct DriftSegment {
  std::size_t start = 0;  // index into the deployment stream
  Eigen::VectorXd priors;
};

/// One deployment context: the classes that occur and their mixture.
struct ScenarioSpec {
  std::string name;
  ClassCatalog catalog;
  std::vector<std::size_t> active_classes;
  /// Length K, zero outside active_classes.
  Eigen::VectorXd true_priors;
  std::size_t transfer_size = 0;
  std::size_t test_size = 0;
  /// Overrides the classifier's concentration when set.
  std::optional<double> sharpness;
  std::vector<DriftSegment> drift;
  /// Monitor window for drift runs; defaults to transfer_size.
  std::optional<std::size_t> window;
  std::size_t reestimate_every = 50;
  std::uint64_t seed = 0;

  /// Throws validation naming the offending field.
  void validate() const;
};

/// Scenario with priors given over the active classes only (uniform if empty).
ScenarioSpec make_scenario(std::string name, const ClassCatalog& catalog,
                           std::vector<std::size_t> active_classes,
                           std::vector<double> active_priors, std::size_t transfer_size,
                           std::size_t test_size, std::uint64_t seed);

/// Methods evaluated per scenario, in report order.
inline constexpr std::array<Method, 6> kEvaluationMethods = {
    Method::uniform,        Method::naive,        Method::precision_recall,
    Method::matrix_inverse, Method::quadratic_program, Method::ground_truth,
};

struct EvaluationRow {
  Method method = Method::uniform;
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  /// Sample standard deviation across successful folds (0 for one fold).
  double std_accuracy = 0.0;
  Eigen::VectorXd mean_priors;
  /// Mean ||v_hat - v_true||_1 across successful folds.
  double prior_l1_error = 0.0;
  std::size_t failed_folds = 0;
  std::string last_error;

  bool available() const noexcept { return !fold_accuracies.empty(); }
};

struct ScenarioResult {
  std::string name;
  std::vector<EvaluationRow> rows;  // in kEvaluationMethods order

  const EvaluationRow& row(Method method) const;
};

struct HarnessOptions {
  /// Estimators use this H when set.
  std::optional<ConfusionMatrix> confusion;
  /// Otherwise use the generator's true rows (ablation) ...
  bool use_true_confusion = false;
  /// ... or an empirical confusion from this many records per class.
  std::size_t confusion_samples_per_class = 50;
  SolverOptions solver;
  /// Worker threads for run_suite; 0 means hardware concurrency.
  std::size_t threads = 1;
};

/// The H the estimators will use for this scenario under `options`.
ConfusionMatrix resolve_confusion(const ScenarioSpec& spec, const SyntheticClassifier& classifier,
                                  const HarnessOptions& options);

/// One transfer/test split drawn from independent substreams.
ScenarioResult run_scenario(const ScenarioSpec& spec, const SyntheticClassifier& classifier,
                            const HarnessOptions& options = {});

/// Fixed sample pool for cross-validation: transfer_size + test_size records,
/// stratified by the true priors. Record i has sample id i.
std::vector<ScoreRecord> make_sample_pool(const ScenarioSpec& spec, const SyntheticClassifier& classifier);

struct FoldPartition {
  std::vector<std::size_t> transfer;  // sample ids, ascending
  std::vector<std::size_t> test;
};

/// Splits the pool class by class so that each fold keeps the stratified
/// transfer/test sizes but draws a different mixture of samples.
FoldPartition partition_fold(const std::vector<ScoreRecord>& pool, const ScenarioSpec& spec,
                             std::size_t fold);

/// Mean and standard deviation per method over `folds` re-partitions of one
/// pool. Throws validation when folds < 2 or the pool cannot be split.
ScenarioResult cross_validate(const ScenarioSpec& spec, const SyntheticClassifier& classifier,
                              std::size_t folds = 10, const HarnessOptions& options = {});

struct DriftSegmentResult {
  std::size_t start = 0;
  std::size_t length = 0;
  /// Accuracy per method, in kDriftMethods order.
  std::vector<double> accuracy;
};

inline constexpr std::array<Method, 5> kDriftMethods = {
    Method::uniform, Method::naive, Method::matrix_inverse, Method::quadratic_program,
    Method::ground_truth,
};

struct DriftResult {
  std::string name;
  std::size_t window = 0;
  std::size_t reestimate_every = 0;
  std::vector<DriftSegmentResult> segments;
};

/// Streams transfer_size + test_size records whose priors change at the drift
/// segment starts. Priors are re-estimated from a windowed monitor every
/// reestimate_every decisions; until the first estimate a method decides
/// like the baseline. Ground truth uses the current segment's priors.
DriftResult run_drift(const ScenarioSpec& spec, const SyntheticClassifier& classifier,
                      const HarnessOptions& options = {});

/// Deployment stream of a scenario (drift-aware), as written by the simulate
/// command. Segment index per record is returned alongside.
struct SimulatedStream {
  std::vector<ScoreRecord> records;
  std::vector<std::size_t> segment;
};
SimulatedStream simulate_stream(const ScenarioSpec& spec, const SyntheticClassifier& classifier);

struct EvaluationSuite {
  ClassCatalog catalog;
  SyntheticClassifierOptions classifier;
  std::vector<ScenarioSpec> scenarios;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  /// Generator rows to use instead of a random classifier.
  std::optional<ConfusionMatrix> fixed_confusion;
};

SyntheticClassifier make_suite_classifier(const EvaluationSuite& suite);

/// Twelve contexts over a 36-class catalog, three active classes each with
/// equal priors, 20 transfer and 30 test records per active class.
EvaluationSuite default_suite(std::uint64_t seed = 2024);

/// Builds the classifier, estimates H once for the whole suite (unless the
/// options supply one) and cross-validates every scenario. Scenarios run in
/// parallel; results come back in scenario order.
std::vector<ScenarioResult> run_suite(const EvaluationSuite& suite, const HarnessOptions& options = {});

}  // namespace prior_adapt
