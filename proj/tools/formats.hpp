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
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "prior_adapt/catalog.hpp"
#include "prior_adapt/harness.hpp"
#include "prior_adapt/model.hpp"

namespace prior_adapt::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

std::vector<std::string> split_csv_line(std::string_view line);

/// Reads the next line, stripping a trailing '\r'. Returns false at EOF.
bool read_line(std::istream& in, std::string& line);

/// Square numeric CSV under a header of class labels, one row per true class.
struct LabeledMatrix {
  ClassCatalog catalog;
  Eigen::MatrixXd values;
};
LabeledMatrix read_matrix_csv(std::istream& in);

/// Reads a confusion matrix whose rows are already normalized.
ConfusionMatrix read_confusion_csv(std::istream& in);
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& confusion);

struct ScoreRow {
  std::size_t line = 0;
  ScoreRecord record;
};

/// Streaming reader for score CSVs with header "[label,]s_<class>,...".
class ScoresCsvReader {
 public:
  /// With `logits`, each row is passed through a softmax before validation.
  explicit ScoresCsvReader(std::istream& in, bool logits = false);

  /// False when the input had no header line at all.
  bool has_header() const noexcept { return catalog_.has_value(); }
  const ClassCatalog& catalog() const;
  bool has_label_column() const noexcept { return has_label_; }

  /// Next record, or nullopt at EOF. Throws parse errors naming the line.
  std::optional<ScoreRow> next();

 private:
  std::istream& in_;
  bool logits_;
  bool has_label_ = false;
  std::optional<ClassCatalog> catalog_;
  std::size_t line_ = 0;
};

/// True when the header looks like a score CSV (has "s_" columns).
bool looks_like_scores_header(std::string_view line);

/// Decision stream: one class index (or class label) per line.
std::vector<std::size_t> read_decision_list(std::istream& in, const ClassCatalog& catalog);

/// Priors keyed by method then label ("priors": {...}) or a flat label map.
Eigen::VectorXd read_priors_json(std::istream& in, const ClassCatalog& catalog, std::string_view method);

Json priors_to_json(const ClassCatalog& catalog, const Eigen::VectorXd& values);

/// Evaluation input: a single scenario or a suite ("scenarios": [...]).
struct SuiteFile {
  EvaluationSuite suite;
  std::size_t confusion_samples_per_class = 50;
};
SuiteFile parse_suite_json(const Json& doc);
SuiteFile read_suite_file(const std::string& path);

}  // namespace prior_adapt::io
