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

#include "prior_adapt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

#include "prior_adapt/error.hpp"
#include "prior_adapt/estimators.hpp"
#include "prior_adapt/stream_monitor.hpp"

namespace prior_adapt {

namespace {

void validate_simplex(const Eigen::VectorXd& v, const std::string& field) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)) || v(i) < 0.0 || v(i) > 1.0) {
      throw Error(ErrorCode::validation, field + "[" + std::to_string(i) + "] is outside [0,1]");
    }
  }
  if (std::abs(v.sum() - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::validation, field + " must sum to 1 (sums to " + std::to_string(v.sum()) + ")");
  }
}

SyntheticClassifier with_sharpness(const ScenarioSpec& spec, const SyntheticClassifier& classifier) {
  SyntheticClassifier out = classifier;
  if (spec.sharpness) out.sharpness = *spec.sharpness;
  return out;
}

std::vector<ScoreRecord> generate_records(const SyntheticClassifier& classifier,
                                          const std::vector<std::size_t>& labels, Rng& rng) {
  std::vector<ScoreRecord> records;
  records.reserve(labels.size());
  for (auto label : labels) records.push_back(generate_record(classifier, label, rng));
  return records;
}

struct FoldOutcome {
  std::optional<double> accuracy;
  Eigen::VectorXd priors;
  std::string error;
};

PriorEstimate estimate_with(Method method, const ConfusionMatrix& confusion,
                            const DecisionHistogram& histogram, const Eigen::VectorXd& true_priors,
                            const SolverOptions& solver) {
  switch (method) {
    case Method::uniform: return PriorEstimate::uniform(confusion.size());
    case Method::naive: return estimate_naive(histogram);
    case Method::precision_recall:
      return estimate_precision_recall(histogram, precision_recall(confusion));
    case Method::matrix_inverse: return estimate_matrix_inverse(confusion, histogram);
    case Method::quadratic_program: return estimate_qp(confusion, histogram, solver);
    case Method::ground_truth: return estimate_ground_truth(true_priors);
  }
  throw Error(ErrorCode::validation, "unknown method");
}

double accuracy_of(Method method, const AdaptedPolicy& policy, const std::vector<const ScoreRecord*>& test) {
  std::size_t correct = 0;
  for (const ScoreRecord* record : test) {
    const std::size_t decision =
        method == Method::uniform ? decide_baseline(*record) : decide_adapted(*record, policy).index;
    if (decision == *record->true_label()) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::vector<FoldOutcome> evaluate_split(const ConfusionMatrix& confusion,
                                        const std::vector<const ScoreRecord*>& transfer,
                                        const std::vector<const ScoreRecord*>& test,
                                        const Eigen::VectorXd& true_priors, const SolverOptions& solver) {
  StreamMonitor monitor(confusion.catalog());
  for (const ScoreRecord* record : transfer) monitor.ingest_scored(*record);
  const DecisionHistogram histogram = monitor.snapshot();

  std::vector<FoldOutcome> outcomes;
  outcomes.reserve(kEvaluationMethods.size());
  for (Method method : kEvaluationMethods) {
    FoldOutcome outcome;
    try {
      const PriorEstimate estimate = estimate_with(method, confusion, histogram, true_priors, solver);
      outcome.accuracy = accuracy_of(method, AdaptedPolicy(estimate), test);
      outcome.priors = estimate.values();
    } catch (const Error& e) {
      outcome.error = e.what();
    }
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

ScenarioResult aggregate(const ScenarioSpec& spec, const std::vector<std::vector<FoldOutcome>>& folds) {
  ScenarioResult result;
  result.name = spec.name;
  const auto k = static_cast<Eigen::Index>(spec.catalog.size());
  for (std::size_t m = 0; m < kEvaluationMethods.size(); ++m) {
    EvaluationRow row;
    row.method = kEvaluationMethods[m];
    row.mean_priors = Eigen::VectorXd::Zero(k);
    for (const auto& fold : folds) {
      const FoldOutcome& outcome = fold[m];
      if (!outcome.accuracy) {
        ++row.failed_folds;
        row.last_error = outcome.error;
        continue;
      }
      row.fold_accuracies.push_back(*outcome.accuracy);
      row.mean_priors += outcome.priors;
      row.prior_l1_error += (outcome.priors - spec.true_priors).lpNorm<1>();
    }
    const auto n = static_cast<double>(row.fold_accuracies.size());
    if (n > 0) {
      row.mean_priors /= n;
      row.prior_l1_error /= n;
      double sum = 0.0;
      for (double a : row.fold_accuracies) sum += a;
      row.mean_accuracy = sum / n;
      if (n > 1) {
        double ss = 0.0;
        for (double a : row.fold_accuracies) ss += (a - row.mean_accuracy) * (a - row.mean_accuracy);
        row.std_accuracy = std::sqrt(ss / (n - 1.0));
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::vector<const ScoreRecord*> pointers(const std::vector<ScoreRecord>& records) {
  std::vector<const ScoreRecord*> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(&r);
  return out;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

SyntheticClassifier make_synthetic_classifier(const ClassCatalog& catalog,
                                              const SyntheticClassifierOptions& options) {
  if (!(options.diagonal_min >= 0.0) || !(options.diagonal_max <= 1.0) ||
      options.diagonal_min > options.diagonal_max) {
    throw Error(ErrorCode::validation, "diagonal range must satisfy 0 <= min <= max <= 1");
  }
  if (!(options.sharpness > 0.0)) throw Error(ErrorCode::validation, "sharpness must be positive");
  const auto k = static_cast<Eigen::Index>(catalog.size());
  Rng rng = make_rng(options.seed, Stream::classifier);
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double diagonal =
        options.diagonal_min + (options.diagonal_max - options.diagonal_min) * uniform01(rng);
    Eigen::VectorXd off(k);
    for (Eigen::Index i = 0; i < k; ++i) off(i) = i == j ? 0.0 : -std::log1p(-uniform01(rng));
    rows.row(j) = (off * ((1.0 - diagonal) / off.sum())).transpose();
    rows(j, j) = diagonal;
    rows.row(j) /= rows.row(j).sum();
  }
  return {ConfusionMatrix(catalog, std::move(rows)), options.sharpness};
}

ScoreRecord generate_record(const SyntheticClassifier& classifier, std::size_t true_class, Rng& rng) {
  const auto& confusion = classifier.confusion;
  if (true_class >= confusion.size()) throw Error(ErrorCode::validation, "true class out of range");
  const auto k = static_cast<Eigen::Index>(confusion.size());
  const Eigen::Index decided =
      static_cast<Eigen::Index>(sample_categorical(confusion.rows().row(static_cast<Eigen::Index>(true_class)).transpose(), rng));

  const Eigen::VectorXd column = confusion.rows().col(decided);
  const double column_mass = column.sum();
  Eigen::VectorXd draws(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double concentration = 1.0 + classifier.sharpness * column(i) / column_mass;
    std::gamma_distribution<double> gamma(concentration, 1.0);
    draws(i) = gamma(rng);
  }
  Eigen::Index top = 0;
  draws.maxCoeff(&top);
  if (top != decided) std::swap(draws(top), draws(decided));
  return ScoreRecord(draws / draws.sum(), true_class);
}

ConfusionMatrix estimate_confusion(const SyntheticClassifier& classifier, std::size_t samples_per_class,
                                   Rng& rng) {
  if (samples_per_class < 1) throw Error(ErrorCode::validation, "samples_per_class must be at least 1");
  const auto k = static_cast<Eigen::Index>(classifier.confusion.size());
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (std::size_t s = 0; s < samples_per_class; ++s) {
      const ScoreRecord record = generate_record(classifier, static_cast<std::size_t>(j), rng);
      counts(j, static_cast<Eigen::Index>(decide_baseline(record))) += 1.0;
    }
  }
  return ConfusionMatrix::from_counts(classifier.confusion.catalog(), counts);
}

void ScenarioSpec::validate() const {
  const std::string where = "scenario '" + name + "': ";
  const auto k = catalog.size();
  if (static_cast<std::size_t>(true_priors.size()) != k) {
    throw Error(ErrorCode::validation, where + "true_priors must have one entry per class");
  }
  if (active_classes.empty()) throw Error(ErrorCode::validation, where + "active_classes is empty");
  std::set<std::size_t> active;
  for (std::size_t i = 0; i < active_classes.size(); ++i) {
    if (active_classes[i] >= k) {
      throw Error(ErrorCode::validation, where + "active_classes[" + std::to_string(i) + "] is out of range");
    }
    if (!active.insert(active_classes[i]).second) {
      throw Error(ErrorCode::validation, where + "active_classes[" + std::to_string(i) + "] is a duplicate");
    }
  }
  validate_simplex(true_priors, where + "true_priors");
  for (std::size_t i = 0; i < k; ++i) {
    if (true_priors(static_cast<Eigen::Index>(i)) > 0.0 && !active.contains(i)) {
      throw Error(ErrorCode::validation,
                  where + "true_priors[" + std::to_string(i) + "] is positive for an inactive class");
    }
  }
  if (transfer_size < 1) throw Error(ErrorCode::validation, where + "transfer_size must be at least 1");
  if (test_size < 1) throw Error(ErrorCode::validation, where + "test_size must be at least 1");
  if (sharpness && !(*sharpness > 0.0)) throw Error(ErrorCode::validation, where + "sharpness must be positive");
  if (window && *window < 1) throw Error(ErrorCode::validation, where + "window must be at least 1");
  if (reestimate_every < 1) throw Error(ErrorCode::validation, where + "reestimate_every must be at least 1");
  const std::size_t total = transfer_size + test_size;
  for (std::size_t s = 0; s < drift.size(); ++s) {
    const std::string field = where + "drift[" + std::to_string(s) + "]";
    if (s == 0 && drift[s].start != 0) throw Error(ErrorCode::validation, field + ".start must be 0");
    if (s > 0 && drift[s].start <= drift[s - 1].start) {
      throw Error(ErrorCode::validation, field + ".start must increase");
    }
    if (drift[s].start >= total) throw Error(ErrorCode::validation, field + ".start is past the stream end");
    if (static_cast<std::size_t>(drift[s].priors.size()) != k) {
      throw Error(ErrorCode::validation, field + ".priors must have one entry per class");
    }
    validate_simplex(drift[s].priors, field + ".priors");
  }
}

ScenarioSpec make_scenario(std::string name, const ClassCatalog& catalog,
                           std::vector<std::size_t> active_classes, std::vector<double> active_priors,
                           std::size_t transfer_size, std::size_t test_size, std::uint64_t seed) {
  if (active_priors.empty()) {
    active_priors.assign(active_classes.size(), 1.0 / static_cast<double>(active_classes.size()));
  }
  require_dimension(active_priors.size(), active_classes.size(), "active priors");
  Eigen::VectorXd priors = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(catalog.size()));
  for (std::size_t i = 0; i < active_classes.size(); ++i) {
    if (active_classes[i] >= catalog.size()) throw Error(ErrorCode::validation, "active class out of range");
    priors(static_cast<Eigen::Index>(active_classes[i])) = active_priors[i];
  }
  ScenarioSpec spec{.name = std::move(name),
                    .catalog = catalog,
                    .active_classes = std::move(active_classes),
                    .true_priors = std::move(priors),
                    .transfer_size = transfer_size,
                    .test_size = test_size,
                    .sharpness = std::nullopt,
                    .drift = {},
                    .window = std::nullopt,
                    .reestimate_every = 50,
                    .seed = seed};
  spec.validate();
  return spec;
}

const EvaluationRow& ScenarioResult::row(Method method) const {
  for (const auto& r : rows) {
    if (r.method == method) return r;
  }
  throw Error(ErrorCode::validation, "no row for method " + std::string(to_string(method)));
}

ConfusionMatrix resolve_confusion(const ScenarioSpec& spec, const SyntheticClassifier& classifier,
                                  const HarnessOptions& options) {
  if (options.confusion) {
    require_dimension(options.confusion->size(), spec.catalog.size(), "harness confusion");
    return *options.confusion;
  }
  if (options.use_true_confusion) return classifier.confusion;
  Rng rng = make_rng(spec.seed, Stream::confusion);
  return estimate_confusion(classifier, options.confusion_samples_per_class, rng);
}

ScenarioResult run_scenario(const ScenarioSpec& spec, const SyntheticClassifier& base_classifier,
                            const HarnessOptions& options) {
  spec.validate();
  require_dimension(base_classifier.confusion.size(), spec.catalog.size(), "classifier");
  const SyntheticClassifier classifier = with_sharpness(spec, base_classifier);
  const ConfusionMatrix confusion = resolve_confusion(spec, classifier, options);

  Rng transfer_rng = make_rng(spec.seed, Stream::transfer);
  const auto transfer_labels = stratified_labels(spec.true_priors, spec.transfer_size, transfer_rng);
  const auto transfer = generate_records(classifier, transfer_labels, transfer_rng);
  Rng test_rng = make_rng(spec.seed, Stream::test);
  const auto test_labels = stratified_labels(spec.true_priors, spec.test_size, test_rng);
  const auto test = generate_records(classifier, test_labels, test_rng);

  return aggregate(spec, {evaluate_split(confusion, pointers(transfer), pointers(test), spec.true_priors,
                                         options.solver)});
}

std::vector<ScoreRecord> make_sample_pool(const ScenarioSpec& spec, const SyntheticClassifier& classifier) {
  const auto transfer_counts = allocate_counts(spec.true_priors, spec.transfer_size);
  const auto test_counts = allocate_counts(spec.true_priors, spec.test_size);
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < transfer_counts.size(); ++c) {
    labels.insert(labels.end(), transfer_counts[c] + test_counts[c], c);
  }
  Rng rng = make_rng(spec.seed, Stream::pool);
  return generate_records(classifier, labels, rng);
}

FoldPartition partition_fold(const std::vector<ScoreRecord>& pool, const ScenarioSpec& spec,
                             std::size_t fold) {
  const auto transfer_counts = allocate_counts(spec.true_priors, spec.transfer_size);
  std::vector<std::vector<std::size_t>> by_class(spec.catalog.size());
  for (std::size_t id = 0; id < pool.size(); ++id) {
    const auto& label = pool[id].true_label();
    if (!label || *label >= by_class.size()) {
      throw Error(ErrorCode::validation, "pool record " + std::to_string(id) + " has no valid label");
    }
    by_class[*label].push_back(id);
  }
  Rng rng = make_rng(spec.seed, Stream::partition, fold);
  FoldPartition partition;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& ids = by_class[c];
    if (ids.size() < transfer_counts[c]) {
      throw Error(ErrorCode::validation, "pool is too small to split class " + spec.catalog.label(c));
    }
    shuffle_indices(ids, rng);
    partition.transfer.insert(partition.transfer.end(), ids.begin(),
                              ids.begin() + static_cast<std::ptrdiff_t>(transfer_counts[c]));
    partition.test.insert(partition.test.end(),
                          ids.begin() + static_cast<std::ptrdiff_t>(transfer_counts[c]), ids.end());
  }
  std::sort(partition.transfer.begin(), partition.transfer.end());
  std::sort(partition.test.begin(), partition.test.end());
  return partition;
}

ScenarioResult cross_validate(const ScenarioSpec& spec, const SyntheticClassifier& base_classifier,
                              std::size_t folds, const HarnessOptions& options) {
  if (folds < 2) throw Error(ErrorCode::validation, "cross-validation needs at least 2 folds");
  spec.validate();
  require_dimension(base_classifier.confusion.size(), spec.catalog.size(), "classifier");
  const SyntheticClassifier classifier = with_sharpness(spec, base_classifier);
  const ConfusionMatrix confusion = resolve_confusion(spec, classifier, options);
  const auto pool = make_sample_pool(spec, classifier);
  if (pool.size() < 2) throw Error(ErrorCode::validation, "sample pool is too small to split");

  std::vector<std::vector<FoldOutcome>> outcomes;
  outcomes.reserve(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    const FoldPartition partition = partition_fold(pool, spec, f);
    if (partition.transfer.empty() || partition.test.empty()) {
      throw Error(ErrorCode::validation, "sample pool is too small to split");
    }
    std::vector<const ScoreRecord*> transfer, test;
    for (auto id : partition.transfer) transfer.push_back(&pool[id]);
    for (auto id : partition.test) test.push_back(&pool[id]);
    outcomes.push_back(evaluate_split(confusion, transfer, test, spec.true_priors, options.solver));
  }
  return aggregate(spec, outcomes);
}

SimulatedStream simulate_stream(const ScenarioSpec& spec, const SyntheticClassifier& base_classifier) {
  spec.validate();
  require_dimension(base_classifier.confusion.size(), spec.catalog.size(), "classifier");
  const SyntheticClassifier classifier = with_sharpness(spec, base_classifier);
  std::vector<DriftSegment> segments = spec.drift;
  if (segments.empty()) segments.push_back({0, spec.true_priors});
  const std::size_t total = spec.transfer_size + spec.test_size;

  SimulatedStream stream;
  stream.records.reserve(total);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const std::size_t end = s + 1 < segments.size() ? segments[s + 1].start : total;
    const std::size_t length = end - segments[s].start;
    Rng rng = make_rng(spec.seed, Stream::drift, s);
    const auto labels = stratified_labels(segments[s].priors, length, rng);
    for (auto label : labels) {
      stream.records.push_back(generate_record(classifier, label, rng));
      stream.segment.push_back(s);
    }
  }
  return stream;
}

DriftResult run_drift(const ScenarioSpec& spec, const SyntheticClassifier& base_classifier,
                      const HarnessOptions& options) {
  const SimulatedStream stream = simulate_stream(spec, base_classifier);
  const ConfusionMatrix confusion = resolve_confusion(spec, with_sharpness(spec, base_classifier), options);
  std::vector<DriftSegment> segments = spec.drift;
  if (segments.empty()) segments.push_back({0, spec.true_priors});

  DriftResult result;
  result.name = spec.name;
  result.window = spec.window.value_or(spec.transfer_size);
  result.reestimate_every = spec.reestimate_every;
  StreamMonitor monitor(spec.catalog, MonitorOptions{.window = result.window});

  constexpr std::size_t n_methods = kDriftMethods.size();
  std::vector<std::optional<AdaptedPolicy>> policies(n_methods);
  std::vector<std::vector<std::size_t>> correct(segments.size(), std::vector<std::size_t>(n_methods, 0));
  std::vector<std::size_t> lengths(segments.size(), 0);

  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    const ScoreRecord& record = stream.records[i];
    const std::size_t segment = stream.segment[i];
    const std::size_t baseline = decide_baseline(record);
    ++lengths[segment];
    for (std::size_t m = 0; m < n_methods; ++m) {
      std::size_t decision = baseline;
      if (kDriftMethods[m] == Method::ground_truth) {
        decision = decide_adapted(record, AdaptedPolicy(estimate_ground_truth(segments[segment].priors))).index;
      } else if (policies[m]) {
        decision = decide_adapted(record, *policies[m]).index;
      }
      if (decision == *record.true_label()) ++correct[segment][m];
    }
    monitor.ingest(baseline);
    if ((i + 1) % spec.reestimate_every != 0) continue;
    const DecisionHistogram histogram = monitor.snapshot();
    for (std::size_t m = 0; m < n_methods; ++m) {
      const Method method = kDriftMethods[m];
      if (method == Method::uniform || method == Method::ground_truth) continue;
      try {
        policies[m] = AdaptedPolicy(estimate_with(method, confusion, histogram, spec.true_priors, options.solver));
      } catch (const Error&) {
        // keep the previous policy
      }
    }
  }

  for (std::size_t s = 0; s < segments.size(); ++s) {
    DriftSegmentResult seg{segments[s].start, lengths[s], {}};
    for (std::size_t m = 0; m < n_methods; ++m) {
      seg.accuracy.push_back(lengths[s] == 0 ? 0.0
                                             : static_cast<double>(correct[s][m]) / static_cast<double>(lengths[s]));
    }
    result.segments.push_back(std::move(seg));
  }
  return result;
}

EvaluationSuite default_suite(std::uint64_t seed) {
  const ClassCatalog catalog = ClassCatalog::numbered(36);
  EvaluationSuite suite{.catalog = catalog,
                        .classifier = {.diagonal_min = 0.65, .diagonal_max = 0.85,
                                       .sharpness = kDefaultSharpness, .seed = seed},
                        .scenarios = {},
                        .folds = 10,
                        .seed = seed,
                        .fixed_confusion = std::nullopt};
  for (std::size_t s = 0; s < 12; ++s) {
    suite.scenarios.push_back(make_scenario("S" + std::to_string(s + 1), catalog, {3 * s, 3 * s + 1, 3 * s + 2}, {},
                                            60, 90, seed + 100 + s));
  }
  return suite;
}

SyntheticClassifier make_suite_classifier(const EvaluationSuite& suite) {
  if (suite.fixed_confusion) {
    require_dimension(suite.fixed_confusion->size(), suite.catalog.size(), "suite confusion");
    if (!(suite.classifier.sharpness > 0.0)) throw Error(ErrorCode::validation, "sharpness must be positive");
    return {*suite.fixed_confusion, suite.classifier.sharpness};
  }
  return make_synthetic_classifier(suite.catalog, suite.classifier);
}

std::vector<ScenarioResult> run_suite(const EvaluationSuite& suite, const HarnessOptions& options) {
  if (suite.folds < 2) throw Error(ErrorCode::validation, "cross-validation needs at least 2 folds");
  const SyntheticClassifier classifier = make_suite_classifier(suite);
  HarnessOptions shared = options;
  if (!shared.confusion && !shared.use_true_confusion) {
    Rng rng = make_rng(suite.seed, Stream::confusion);
    shared.confusion = estimate_confusion(classifier, shared.confusion_samples_per_class, rng);
  }
  std::vector<std::optional<ScenarioResult>> slots(suite.scenarios.size());
  parallel_for(suite.scenarios.size(), options.threads, [&](std::size_t i) {
    slots[i] = cross_validate(suite.scenarios[i], classifier, suite.folds, shared);
  });
  std::vector<ScenarioResult> results;
  results.reserve(slots.size());
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

}  // namespace prior_adapt
