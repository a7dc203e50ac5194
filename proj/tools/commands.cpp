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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "formats.hpp"
#include "prior_adapt/error.hpp"
#include "prior_adapt/estimators.hpp"
#include "prior_adapt/harness.hpp"
#include "prior_adapt/stream_monitor.hpp"

namespace prior_adapt::cli {

namespace {

using io::Json;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format;
  bool quiet = false;
};

/// Either the caller's stream or the --output file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error(ErrorCode::io, "cannot write '" + path + "'");
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw Error(ErrorCode::io, "write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  return in;
}

int exit_code_for(const Error& e) {
  if (e.code() == ErrorCode::io) return kExitIo;
  if (e.is_solver_failure()) return kExitSolver;
  return kExitInvalid;
}

std::size_t thread_budget() {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("PRIOR_ADAPT_THREADS")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(cap, &end, 10);
    if (end != cap && *end == '\0' && value >= 1) threads = std::min<std::size_t>(threads, value);
  }
  return threads;
}

Json diagnostics_json(const EstimateDiagnostics& d) {
  Json out = Json::object();
  if (d.residual) out["residual"] = *d.residual;
  if (d.iterations) out["iterations"] = *d.iterations;
  if (d.converged) out["converged"] = *d.converged;
  if (d.kkt_violation) out["kkt_violation"] = *d.kkt_violation;
  if (d.condition_estimate) out["condition_estimate"] = *d.condition_estimate;
  out["clipped_mass"] = d.clipped_mass;
  return out;
}

// ---------------------------------------------------------------- normalize

int cmd_normalize(const std::string& input, const GlobalOptions& global, std::ostream& out) {
  std::ifstream in = open_input(input);
  io::LabeledMatrix m = io::read_matrix_csv(in);
  const ConfusionMatrix confusion = ConfusionMatrix::from_counts(m.catalog, m.values);
  Sink sink(global.output, out);
  io::write_confusion_csv(sink.get(), confusion);
  sink.finish();
  return kExitSuccess;
}

// ----------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string confusion;
  std::string decisions;
  std::string method = "all";
  std::optional<std::size_t> window;
  std::optional<std::size_t> reestimate_every;
  bool logits = false;
  std::size_t max_iterations = SolverOptions{}.max_iterations;
  double tolerance = SolverOptions{}.gradient_tolerance;
};

std::vector<Method> selected_methods(const std::string& name) {
  if (name == "all") {
    return {Method::naive, Method::precision_recall, Method::matrix_inverse, Method::quadratic_program};
  }
  const auto method = parse_method(name);
  if (!method || *method == Method::ground_truth || *method == Method::uniform) {
    throw Error(ErrorCode::validation, "unknown estimator '" + name + "' (use naive, pr, inverse, qp or all)");
  }
  return {*method};
}

struct MethodOutcome {
  std::optional<PriorEstimate> estimate;
  std::optional<Error> error;
  std::optional<Eigen::VectorXd> best_iterate;
};

MethodOutcome run_estimator(Method method, const ConfusionMatrix& confusion, const DecisionHistogram& histogram,
                            const SolverOptions& solver) {
  try {
    switch (method) {
      case Method::naive: return {estimate_naive(histogram), {}, {}};
      case Method::precision_recall:
        return {estimate_precision_recall(histogram, precision_recall(confusion)), {}, {}};
      case Method::matrix_inverse: return {estimate_matrix_inverse(confusion, histogram), {}, {}};
      case Method::quadratic_program: return {estimate_qp(confusion, histogram, solver), {}, {}};
      default: break;
    }
  } catch (const ConvergenceError& e) {
    return {{}, Error(e.code(), e.what()), e.best_iterate()};
  } catch (const Error& e) {
    if (!e.is_solver_failure() && e.code() != ErrorCode::insufficient_data) throw;
    return {{}, e, {}};
  }
  throw Error(ErrorCode::validation, "unsupported estimator");
}

Json histogram_json(const ClassCatalog& catalog, const DecisionHistogram& histogram) {
  Json out = Json::object();
  for (std::size_t i = 0; i < catalog.size(); ++i) out[catalog.label(i)] = histogram.counts()[i];
  return out;
}

int cmd_estimate(const EstimateArgs& args, const GlobalOptions& global, std::ostream& out) {
  const auto methods = selected_methods(args.method);
  SolverOptions solver;
  solver.max_iterations = args.max_iterations;
  solver.gradient_tolerance = args.tolerance;
  if (global.seed) solver.seed = *global.seed;
  solver.validate();
  if (args.window && *args.window < 1) throw Error(ErrorCode::validation, "--window must be at least 1");
  if (args.reestimate_every && *args.reestimate_every < 1) {
    throw Error(ErrorCode::validation, "--reestimate-every must be at least 1");
  }

  std::ifstream confusion_in = open_input(args.confusion);
  const ConfusionMatrix confusion = io::read_confusion_csv(confusion_in);
  const ClassCatalog& catalog = confusion.catalog();

  StreamMonitor monitor(catalog, MonitorOptions{.window = args.window, .closed_loop = false});
  Json trajectory = Json::array();
  auto checkpoint = [&] {
    if (!args.reestimate_every || monitor.decisions_seen() % *args.reestimate_every != 0) return;
    const DecisionHistogram h = monitor.snapshot();
    Json point{{"decisions", monitor.decisions_seen()}, {"priors", Json::object()}};
    for (Method m : methods) {
      MethodOutcome outcome = run_estimator(m, confusion, h, solver);
      if (outcome.estimate) point["priors"][std::string(to_string(m))] = io::priors_to_json(catalog, outcome.estimate->values());
    }
    trajectory.push_back(std::move(point));
  };

  std::ifstream in = open_input(args.decisions);
  std::string first;
  while (io::read_line(in, first) && first.find_first_not_of(" \t") == std::string::npos) {
  }
  in.clear();
  in.seekg(0);
  if (io::looks_like_scores_header(first)) {
    io::ScoresCsvReader reader(in, args.logits);
    require_dimension(reader.catalog().size(), catalog.size(), "score columns");
    if (reader.catalog() != catalog) throw Error(ErrorCode::dimension, "score columns do not match the confusion labels");
    while (auto row = reader.next()) {
      monitor.ingest_scored(row->record);
      checkpoint();
    }
  } else {
    for (std::size_t d : io::read_decision_list(in, catalog)) {
      monitor.ingest(d);
      checkpoint();
    }
  }

  const DecisionHistogram histogram = monitor.snapshot();
  Json doc;
  doc["classes"] = catalog.labels();
  doc["observations"] = monitor.decisions_seen();
  doc["histogram"] = histogram_json(catalog, histogram);
  doc["priors"] = Json::object();
  doc["diagnostics"] = Json::object();
  doc["errors"] = Json::object();
  bool failed = false;
  for (Method m : methods) {
    const std::string key(to_string(m));
    MethodOutcome outcome = run_estimator(m, confusion, histogram, solver);
    if (outcome.estimate) {
      doc["priors"][key] = io::priors_to_json(catalog, outcome.estimate->values());
      doc["diagnostics"][key] = diagnostics_json(outcome.estimate->diagnostics());
      continue;
    }
    failed = true;
    Json error{{"code", std::string(to_string(outcome.error->code()))}, {"message", outcome.error->what()}};
    if (outcome.best_iterate) error["best_iterate"] = io::priors_to_json(catalog, *outcome.best_iterate);
    doc["errors"][key] = std::move(error);
  }
  if (args.reestimate_every) doc["trajectory"] = std::move(trajectory);

  Sink sink(global.output, out);
  sink.get() << doc.dump(2) << '\n';
  sink.finish();
  return failed ? kExitSolver : kExitSuccess;
}

// ----------------------------------------------------------------- reweight

struct ReweightArgs {
  std::string scores;
  std::string priors;
  std::string method = "qp";
  bool lenient = false;
  bool logits = false;
};

int cmd_reweight(const ReweightArgs& args, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
  const auto method = parse_method(args.method);
  if (!method) throw Error(ErrorCode::validation, "unknown estimator '" + args.method + "'");

  std::ifstream in = open_input(args.scores);
  io::ScoresCsvReader reader(in, args.logits);
  Sink sink(global.output, out);
  if (!reader.has_header()) {
    sink.finish();
    return kExitSuccess;
  }
  const ClassCatalog& catalog = reader.catalog();
  std::ifstream priors_in = open_input(args.priors);
  const AdaptedPolicy policy =
      AdaptedPolicy::from_weights(io::read_priors_json(priors_in, catalog, to_string(*method)));

  std::ostream& os = sink.get();
  os << "row,baseline,adapted,fallback";
  for (const auto& label : catalog.labels()) os << ",raw_" << label;
  for (const auto& label : catalog.labels()) os << ",norm_" << label;
  os << '\n';

  std::size_t row = 0;
  std::size_t skipped = 0;
  while (true) {
    std::optional<io::ScoreRow> next;
    try {
      next = reader.next();
    } catch (const Error& e) {
      if (!args.lenient || e.code() != ErrorCode::parse) throw;
      ++skipped;
      if (!global.quiet) err << "warning: skipped " << e.what() << '\n';
      continue;
    }
    if (!next) break;
    const ScoreRecord& record = next->record;
    const Eigen::VectorXd raw = reweight(record, policy);
    const Eigen::VectorXd norm = normalize_for_display(raw);
    const AdaptedDecision adapted = decide_adapted(record, policy);
    os << row++ << ',' << catalog.label(decide_baseline(record)) << ',' << catalog.label(adapted.index) << ','
       << (adapted.fallback ? 1 : 0);
    for (Eigen::Index i = 0; i < raw.size(); ++i) os << ',' << io::format_double(raw(i));
    for (Eigen::Index i = 0; i < norm.size(); ++i) os << ',' << io::format_double(norm(i));
    os << '\n';
  }
  if (skipped > 0 && !global.quiet) err << "warning: " << skipped << " malformed rows skipped\n";
  sink.finish();
  return kExitSuccess;
}

// ------------------------------------------------------ scenario loading

/// Applies --seed: suite and classifier take the seed, scenario i takes seed + 100 + i.
void apply_seed(EvaluationSuite& suite, std::uint64_t seed) {
  suite.seed = seed;
  suite.classifier.seed = seed;
  for (std::size_t i = 0; i < suite.scenarios.size(); ++i) suite.scenarios[i].seed = seed + 100 + i;
}

io::SuiteFile load_suite(const std::string& scenario_path, const std::string& suite_name,
                         const GlobalOptions& global) {
  if (scenario_path.empty() && suite_name == "default") {
    return io::SuiteFile{.suite = default_suite(global.seed.value_or(2024)), .confusion_samples_per_class = 50};
  }
  io::SuiteFile file = io::read_suite_file(scenario_path.empty() ? suite_name : scenario_path);
  if (global.seed) apply_seed(file.suite, *global.seed);
  return file;
}

// ----------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string scenario;
  std::string scores;
  std::string truth;
};

int cmd_simulate(const SimulateArgs& args, const GlobalOptions& global) {
  const io::SuiteFile file = load_suite(args.scenario, "", global);
  if (file.suite.scenarios.size() != 1) {
    throw Error(ErrorCode::validation, "simulate takes a file with exactly one scenario");
  }
  const ScenarioSpec& spec = file.suite.scenarios.front();
  const SyntheticClassifier classifier = make_suite_classifier(file.suite);
  const SimulatedStream stream = simulate_stream(spec, classifier);
  std::vector<DriftSegment> segments = spec.drift;
  if (segments.empty()) segments.push_back({0, spec.true_priors});
  const ClassCatalog& catalog = spec.catalog;

  Sink scores(args.scores, std::cout);
  std::ostream& s = scores.get();
  for (std::size_t i = 0; i < catalog.size(); ++i) s << (i ? "," : "") << "s_" << catalog.label(i);
  s << '\n';
  for (const auto& record : stream.records) {
    for (Eigen::Index i = 0; i < record.scores().size(); ++i) s << (i ? "," : "") << io::format_double(record.scores()(i));
    s << '\n';
  }
  scores.finish();

  Sink truth(args.truth, std::cout);
  std::ostream& t = truth.get();
  t << "index,label,segment";
  for (const auto& label : catalog.labels()) t << ",prior_" << label;
  t << '\n';
  for (std::size_t r = 0; r < stream.records.size(); ++r) {
    const std::size_t seg = stream.segment[r];
    t << r << ',' << catalog.label(*stream.records[r].true_label()) << ',' << seg;
    for (Eigen::Index i = 0; i < segments[seg].priors.size(); ++i) t << ',' << io::format_double(segments[seg].priors(i));
    t << '\n';
  }
  truth.finish();
  return kExitSuccess;
}

// ----------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string scenario;
  std::string suite;
  std::optional<std::size_t> folds;
  bool true_confusion = false;
};

inline constexpr std::array<Method, 5> kTableMethods = {
    Method::uniform, Method::naive, Method::matrix_inverse, Method::quadratic_program, Method::ground_truth,
};

std::string fixed3(double value) { return fmt::format("{:.3f}", value); }

/// Cells of the accuracy table with the best non-oracle entry of each column bolded.
std::vector<std::vector<std::string>> table_cells(const std::vector<ScenarioResult>& results) {
  std::vector<std::vector<std::string>> cells(kTableMethods.size(), std::vector<std::string>(results.size()));
  for (std::size_t col = 0; col < results.size(); ++col) {
    std::optional<std::string> best;
    for (Method m : kTableMethods) {
      const auto& row = results[col].row(m);
      if (m == Method::ground_truth || !row.available()) continue;
      const std::string v = fixed3(row.mean_accuracy);
      if (!best || std::stod(v) > std::stod(*best)) best = v;
    }
    for (std::size_t r = 0; r < kTableMethods.size(); ++r) {
      const auto& row = results[col].row(kTableMethods[r]);
      if (!row.available()) {
        cells[r][col] = "N/A";
        continue;
      }
      const std::string v = fixed3(row.mean_accuracy);
      const bool bold = kTableMethods[r] != Method::ground_truth && best && v == *best;
      cells[r][col] = bold ? "**" + v + "**" : v;
    }
  }
  return cells;
}

void write_markdown(std::ostream& os, const std::vector<ScenarioResult>& results,
                    const std::vector<DriftResult>& drift, std::size_t folds) {
  os << "| Method |";
  for (const auto& r : results) os << ' ' << r.name << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < results.size(); ++i) os << "---:|";
  os << '\n';
  const auto cells = table_cells(results);
  for (std::size_t r = 0; r < kTableMethods.size(); ++r) {
    os << "| " << display_name(kTableMethods[r]) << " |";
    for (const auto& cell : cells[r]) os << ' ' << cell << " |";
    os << '\n';
  }
  os << "\nMean accuracy over " << folds << " folds. Bold marks the best method other than ground truth.\n";
  if (drift.empty()) return;
  os << "\n### Drift (extension)\n\n| Scenario | Segment | Start | Length |";
  for (Method m : kDriftMethods) os << ' ' << display_name(m) << " |";
  os << "\n|---|---:|---:|---:|";
  for (std::size_t i = 0; i < kDriftMethods.size(); ++i) os << "---:|";
  os << '\n';
  for (const auto& d : drift) {
    for (std::size_t s = 0; s < d.segments.size(); ++s) {
      const auto& seg = d.segments[s];
      os << "| " << d.name << " | " << s << " | " << seg.start << " | " << seg.length << " |";
      for (double a : seg.accuracy) os << ' ' << fixed3(a) << " |";
      os << '\n';
    }
  }
  os << "\nWindow and re-estimation interval per scenario:";
  for (const auto& d : drift) os << ' ' << d.name << " (" << d.window << ", " << d.reestimate_every << ")";
  os << '\n';
}

void write_csv(std::ostream& os, const std::vector<ScenarioResult>& results, const std::vector<DriftResult>& drift) {
  os << "scenario,method,mean_accuracy,std_accuracy,prior_l1_error,failed_folds\n";
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      os << r.name << ',' << to_string(row.method) << ',';
      if (row.available()) {
        os << io::format_double(row.mean_accuracy) << ',' << io::format_double(row.std_accuracy) << ','
           << io::format_double(row.prior_l1_error);
      } else {
        os << "N/A,N/A,N/A";
      }
      os << ',' << row.failed_folds << '\n';
    }
  }
  if (drift.empty()) return;
  os << "\nscenario,segment,start,length,method,accuracy\n";
  for (const auto& d : drift) {
    for (std::size_t s = 0; s < d.segments.size(); ++s) {
      for (std::size_t m = 0; m < kDriftMethods.size(); ++m) {
        os << d.name << ',' << s << ',' << d.segments[s].start << ',' << d.segments[s].length << ','
           << to_string(kDriftMethods[m]) << ',' << io::format_double(d.segments[s].accuracy[m]) << '\n';
      }
    }
  }
}

void write_json(std::ostream& os, const ClassCatalog& catalog, const std::vector<ScenarioResult>& results,
                const std::vector<DriftResult>& drift, std::size_t folds) {
  Json doc;
  doc["folds"] = folds;
  doc["scenarios"] = Json::array();
  for (const auto& r : results) {
    Json scenario{{"name", r.name}, {"methods", Json::object()}};
    for (const auto& row : r.rows) {
      Json entry;
      entry["fold_accuracies"] = row.fold_accuracies;
      if (row.available()) {
        entry["mean_accuracy"] = row.mean_accuracy;
        entry["std_accuracy"] = row.std_accuracy;
        entry["prior_l1_error"] = row.prior_l1_error;
        entry["mean_priors"] = io::priors_to_json(catalog, row.mean_priors);
      }
      entry["failed_folds"] = row.failed_folds;
      if (!row.last_error.empty()) entry["last_error"] = row.last_error;
      scenario["methods"][std::string(to_string(row.method))] = std::move(entry);
    }
    doc["scenarios"].push_back(std::move(scenario));
  }
  if (!drift.empty()) {
    doc["drift"] = Json::array();
    for (const auto& d : drift) {
      Json entry{{"name", d.name}, {"window", d.window}, {"reestimate_every", d.reestimate_every},
                 {"segments", Json::array()}};
      for (const auto& seg : d.segments) {
        Json s{{"start", seg.start}, {"length", seg.length}, {"accuracy", Json::object()}};
        for (std::size_t m = 0; m < kDriftMethods.size(); ++m) s["accuracy"][std::string(to_string(kDriftMethods[m]))] = seg.accuracy[m];
        entry["segments"].push_back(std::move(s));
      }
      doc["drift"].push_back(std::move(entry));
    }
  }
  os << doc.dump(2) << '\n';
}

int cmd_evaluate(const EvaluateArgs& args, const GlobalOptions& global, std::ostream& out) {
  const std::string format = global.format.empty() ? "markdown" : global.format;
  if (format != "markdown" && format != "csv" && format != "json") {
    throw Error(ErrorCode::validation, "--format must be markdown, csv or json");
  }
  if (args.scenario.empty() == args.suite.empty()) {
    throw Error(ErrorCode::validation, "evaluate takes exactly one of --scenario or --suite");
  }
  io::SuiteFile file = load_suite(args.scenario, args.suite, global);
  if (args.folds) file.suite.folds = *args.folds;
  if (file.suite.folds < 2) throw Error(ErrorCode::validation, "--folds must be at least 2");

  HarnessOptions options;
  options.use_true_confusion = args.true_confusion;
  options.confusion_samples_per_class = file.confusion_samples_per_class;
  options.threads = thread_budget();
  const std::vector<ScenarioResult> results = run_suite(file.suite, options);

  std::vector<DriftResult> drift;
  const SyntheticClassifier classifier = make_suite_classifier(file.suite);
  for (const auto& spec : file.suite.scenarios) {
    if (!spec.drift.empty()) drift.push_back(run_drift(spec, classifier, options));
  }

  Sink sink(global.output, out);
  if (format == "markdown") {
    write_markdown(sink.get(), results, drift, file.suite.folds);
  } else if (format == "csv") {
    write_csv(sink.get(), results, drift);
  } else {
    write_json(sink.get(), file.suite.catalog, results, drift, file.suite.folds);
  }
  sink.finish();

  const bool any_estimate = std::any_of(results.begin(), results.end(), [](const ScenarioResult& r) {
    return std::any_of(r.rows.begin(), r.rows.end(), [](const EvaluationRow& row) {
      return row.method != Method::uniform && row.method != Method::ground_truth && row.available();
    });
  });
  return any_estimate ? kExitSuccess : kExitSolver;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Class-prior estimation and decision re-weighting for deployed classifiers", "prior-adapt"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions global;
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for synthetic data and the solver's power iteration");
  app.add_option("-o,--output", global.output, "Write output to this file instead of stdout");
  app.add_option("--format", global.format, "Report format for evaluate: markdown, csv or json");
  app.add_flag("-q,--quiet", global.quiet, "Suppress warnings");

  std::string normalize_input;
  auto* normalize = app.add_subcommand("normalize", "Row-normalize a confusion-count CSV");
  normalize->add_option("-i,--input,input", normalize_input, "Confusion CSV with a header of class labels")
      ->required();

  EstimateArgs estimate_args;
  std::size_t window = 0;
  std::size_t reestimate = 0;
  auto* estimate = app.add_subcommand("estimate", "Estimate class priors from a decision stream");
  estimate->add_option("--confusion", estimate_args.confusion, "Row-normalized confusion CSV")->required();
  estimate->add_option("--decisions", estimate_args.decisions, "Decision list or scores CSV")->required();
  estimate->add_option("--method", estimate_args.method, "naive, pr, inverse, qp or all")->capture_default_str();
  auto* window_opt = estimate->add_option("--window", window, "Only count the most recent decisions");
  auto* reestimate_opt =
      estimate->add_option("--reestimate-every", reestimate, "Record an estimate every N decisions");
  estimate->add_flag("--logits", estimate_args.logits, "Scores are logits; apply softmax");
  estimate->add_option("--max-iterations", estimate_args.max_iterations, "Projected-gradient iteration cap")
      ->capture_default_str();
  estimate->add_option("--tolerance", estimate_args.tolerance, "Relative objective decrease tolerance")
      ->capture_default_str();

  ReweightArgs reweight_args;
  auto* reweight_cmd = app.add_subcommand("reweight", "Re-weight score rows with estimated priors");
  reweight_cmd->add_option("--scores", reweight_args.scores, "Scores CSV")->required();
  reweight_cmd->add_option("--priors", reweight_args.priors, "Priors JSON")->required();
  reweight_cmd->add_option("--method", reweight_args.method, "Which method's priors to use")->capture_default_str();
  reweight_cmd->add_flag("--lenient", reweight_args.lenient, "Skip malformed rows with a warning");
  reweight_cmd->add_flag("--logits", reweight_args.logits, "Scores are logits; apply softmax");

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic score stream from a scenario");
  simulate->add_option("--scenario", simulate_args.scenario, "Scenario JSON")->required();
  simulate->add_option("--scores", simulate_args.scores, "Output scores CSV")->required();
  simulate->add_option("--truth", simulate_args.truth, "Output truth CSV")->required();

  EvaluateArgs evaluate_args;
  std::size_t folds = 0;
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate estimators on synthetic scenarios");
  evaluate->add_option("--scenario", evaluate_args.scenario, "Scenario or suite JSON");
  evaluate->add_option("--suite", evaluate_args.suite, "'default' or a suite JSON file");
  auto* folds_opt = evaluate->add_option("--folds", folds, "Cross-validation folds (default 10)");
  evaluate->add_flag("--true-confusion", evaluate_args.true_confusion,
                     "Give estimators the generator's confusion instead of an estimated one");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  if (app.count("--seed") > 0) global.seed = seed;
  if (*window_opt) estimate_args.window = window;
  if (*reestimate_opt) estimate_args.reestimate_every = reestimate;
  if (*folds_opt) evaluate_args.folds = folds;

  try {
    if (*normalize) return cmd_normalize(normalize_input, global, out);
    if (*estimate) return cmd_estimate(estimate_args, global, out);
    if (*reweight_cmd) return cmd_reweight(reweight_args, global, out, err);
    if (*simulate) return cmd_simulate(simulate_args, global);
    if (*evaluate) return cmd_evaluate(evaluate_args, global, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace prior_adapt::cli
