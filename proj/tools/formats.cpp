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

#include "formats.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "prior_adapt/error.hpp"

namespace prior_adapt::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::parse, "line " + std::to_string(line) + ": " + message);
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    parse_fail(line, "'" + std::string(field) + "' is not a number");
  }
  return value;
}

std::optional<std::size_t> parse_index(std::string_view field) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

bool blank(std::string_view line) { return trim(line).empty(); }

std::size_t resolve_class(const Json& value, const ClassCatalog& catalog, const std::string& field) {
  if (value.is_number_unsigned()) {
    const auto index = value.get<std::size_t>();
    if (index >= catalog.size()) throw Error(ErrorCode::validation, field + " is out of range");
    return index;
  }
  if (value.is_string()) {
    if (auto index = catalog.index_of(value.get<std::string>())) return *index;
    throw Error(ErrorCode::validation, field + " names unknown class '" + value.get<std::string>() + "'");
  }
  throw Error(ErrorCode::validation, field + " must be a class label or index");
}

template <typename T>
T get_or(const Json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::validation, where + key + " has the wrong type");
  }
}

/// Full-length prior vector from an array (length K) or a label map.
Eigen::VectorXd read_full_priors(const Json& value, const ClassCatalog& catalog, const std::string& field) {
  const auto k = static_cast<Eigen::Index>(catalog.size());
  Eigen::VectorXd priors = Eigen::VectorXd::Zero(k);
  if (value.is_array()) {
    if (value.size() != catalog.size()) {
      throw Error(ErrorCode::validation, field + " must have one entry per class");
    }
    for (std::size_t i = 0; i < value.size(); ++i) priors(static_cast<Eigen::Index>(i)) = value[i].get<double>();
  } else if (value.is_object()) {
    for (const auto& [label, v] : value.items()) {
      auto index = catalog.index_of(label);
      if (!index) throw Error(ErrorCode::validation, field + " names unknown class '" + label + "'");
      priors(static_cast<Eigen::Index>(*index)) = v.get<double>();
    }
  } else {
    throw Error(ErrorCode::validation, field + " must be an array or an object");
  }
  return priors;
}

ClassCatalog read_catalog(const Json& doc, const std::optional<ClassCatalog>& fallback) {
  if (doc.contains("classes")) return ClassCatalog(doc.at("classes").get<std::vector<std::string>>());
  if (doc.contains("num_classes")) return ClassCatalog::numbered(doc.at("num_classes").get<std::size_t>());
  if (fallback) return *fallback;
  throw Error(ErrorCode::validation, "scenario needs 'classes' or 'num_classes'");
}

ScenarioSpec parse_scenario(const Json& obj, const ClassCatalog& catalog, std::size_t index,
                            std::uint64_t default_seed) {
  const std::string name = get_or<std::string>(obj, "name", std::to_string(index), "");
  const std::string where = "scenario '" + name + "': ";
  if (!obj.contains("active_classes") || !obj.at("active_classes").is_array()) {
    throw Error(ErrorCode::validation, where + "active_classes must be an array");
  }
  std::vector<std::size_t> active;
  const auto& active_json = obj.at("active_classes");
  for (std::size_t i = 0; i < active_json.size(); ++i) {
    active.push_back(resolve_class(active_json[i], catalog, where + "active_classes[" + std::to_string(i) + "]"));
  }

  Eigen::VectorXd priors = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(catalog.size()));
  if (!obj.contains("true_priors")) {
    for (auto a : active) priors(static_cast<Eigen::Index>(a)) = 1.0 / static_cast<double>(active.size());
  } else if (obj.at("true_priors").is_array() && obj.at("true_priors").size() == active.size() &&
             active.size() != catalog.size()) {
    const auto& p = obj.at("true_priors");
    for (std::size_t i = 0; i < active.size(); ++i) priors(static_cast<Eigen::Index>(active[i])) = p[i].get<double>();
  } else {
    priors = read_full_priors(obj.at("true_priors"), catalog, where + "true_priors");
  }

  ScenarioSpec spec{.name = name,
                    .catalog = catalog,
                    .active_classes = std::move(active),
                    .true_priors = std::move(priors),
                    .transfer_size = get_or<std::size_t>(obj, "transfer_size", 0, where),
                    .test_size = get_or<std::size_t>(obj, "test_size", 0, where),
                    .sharpness = std::nullopt,
                    .drift = {},
                    .window = std::nullopt,
                    .reestimate_every = get_or<std::size_t>(obj, "reestimate_every", 50, where),
                    .seed = get_or<std::uint64_t>(obj, "seed", default_seed, where)};
  if (obj.contains("sharpness")) spec.sharpness = get_or<double>(obj, "sharpness", 0.0, where);
  if (obj.contains("window")) spec.window = get_or<std::size_t>(obj, "window", 0, where);
  if (obj.contains("drift")) {
    const auto& drift = obj.at("drift");
    if (!drift.is_array()) throw Error(ErrorCode::validation, where + "drift must be an array");
    for (std::size_t s = 0; s < drift.size(); ++s) {
      const std::string field = where + "drift[" + std::to_string(s) + "]";
      if (!drift[s].contains("start") || !drift[s].contains("priors")) {
        throw Error(ErrorCode::validation, field + " needs 'start' and 'priors'");
      }
      spec.drift.push_back({drift[s].at("start").get<std::size_t>(),
                            read_full_priors(drift[s].at("priors"), catalog, field + ".priors")});
    }
  }
  spec.validate();
  return spec;
}

}  // namespace

std::string format_double(double value) { return fmt::format("{}", value); }

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

LabeledMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  do {
    if (!read_line(in, line)) throw Error(ErrorCode::parse, "confusion CSV is empty");
    ++line_no;
  } while (blank(line));
  ClassCatalog catalog = [&] {
    try {
      return ClassCatalog(split_csv_line(line));
    } catch (const Error& e) {
      parse_fail(line_no, std::string("bad header: ") + e.what());
    }
  }();
  const auto k = static_cast<Eigen::Index>(catalog.size());
  Eigen::MatrixXd values(k, k);
  Eigen::Index row = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto fields = split_csv_line(line);
    if (row >= k) parse_fail(line_no, "more rows than classes; the matrix must be square");
    if (static_cast<Eigen::Index>(fields.size()) != k) {
      parse_fail(line_no, "expected " + std::to_string(k) + " columns, found " + std::to_string(fields.size()));
    }
    for (Eigen::Index i = 0; i < k; ++i) values(row, i) = parse_number(fields[static_cast<std::size_t>(i)], line_no);
    ++row;
  }
  if (row != k) {
    throw Error(ErrorCode::parse, "confusion CSV has " + std::to_string(row) + " rows for " +
                                      std::to_string(k) + " classes; the matrix must be square");
  }
  return {std::move(catalog), std::move(values)};
}

ConfusionMatrix read_confusion_csv(std::istream& in) {
  LabeledMatrix m = read_matrix_csv(in);
  for (Eigen::Index j = 0; j < m.values.rows(); ++j) {
    if (std::abs(m.values.row(j).sum() - 1.0) > kConfusionRowTolerance) {
      throw Error(ErrorCode::parse, "confusion row '" + m.catalog.label(static_cast<std::size_t>(j)) +
                                        "' is not normalized (run the normalize command first)");
    }
  }
  return ConfusionMatrix(std::move(m.catalog), std::move(m.values));
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& confusion) {
  const auto& labels = confusion.catalog().labels();
  for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? "," : "") << labels[i];
  out << '\n';
  for (Eigen::Index j = 0; j < confusion.rows().rows(); ++j) {
    for (Eigen::Index i = 0; i < confusion.rows().cols(); ++i) {
      out << (i ? "," : "") << format_double(confusion.rows()(j, i));
    }
    out << '\n';
  }
}

bool looks_like_scores_header(std::string_view line) {
  for (const auto& field : split_csv_line(line)) {
    if (field.rfind("s_", 0) == 0) return true;
  }
  return false;
}

ScoresCsvReader::ScoresCsvReader(std::istream& in, bool logits) : in_(in), logits_(logits) {
  std::string line;
  while (read_line(in_, line)) {
    ++line_;
    if (blank(line)) continue;
    auto fields = split_csv_line(line);
    std::size_t first = 0;
    if (!fields.empty() && fields[0] == "label") {
      has_label_ = true;
      first = 1;
    }
    std::vector<std::string> labels;
    for (std::size_t i = first; i < fields.size(); ++i) {
      if (fields[i].rfind("s_", 0) != 0) parse_fail(line_, "score column '" + fields[i] + "' must start with s_");
      labels.push_back(fields[i].substr(2));
    }
    try {
      catalog_.emplace(std::move(labels));
    } catch (const Error& e) {
      parse_fail(line_, std::string("bad header: ") + e.what());
    }
    return;
  }
}

const ClassCatalog& ScoresCsvReader::catalog() const {
  if (!catalog_) throw Error(ErrorCode::parse, "scores CSV has no header");
  return *catalog_;
}

std::optional<ScoreRow> ScoresCsvReader::next() {
  if (!catalog_) return std::nullopt;
  std::string line;
  while (read_line(in_, line)) {
    ++line_;
    if (blank(line)) continue;
    const auto fields = split_csv_line(line);
    const std::size_t k = catalog_->size();
    const std::size_t expected = k + (has_label_ ? 1 : 0);
    if (fields.size() != expected) {
      parse_fail(line_, "expected " + std::to_string(expected) + " columns, found " + std::to_string(fields.size()));
    }
    std::optional<std::size_t> label;
    if (has_label_ && !fields[0].empty()) {
      label = catalog_->index_of(fields[0]);
      if (!label) label = parse_index(fields[0]);
      if (!label || *label >= k) parse_fail(line_, "unknown label '" + fields[0] + "'");
    }
    Eigen::VectorXd scores(static_cast<Eigen::Index>(k));
    const std::size_t offset = has_label_ ? 1 : 0;
    for (std::size_t i = 0; i < k; ++i) scores(static_cast<Eigen::Index>(i)) = parse_number(fields[offset + i], line_);
    if (logits_) {
      scores = (scores.array() - scores.maxCoeff()).exp().matrix();
      scores /= scores.sum();
    }
    try {
      return ScoreRow{line_, ScoreRecord(std::move(scores), label)};
    } catch (const Error& e) {
      parse_fail(line_, e.what());
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> read_decision_list(std::istream& in, const ClassCatalog& catalog) {
  std::vector<std::size_t> decisions;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    const auto field = trim(line);
    if (field.empty()) continue;
    auto index = parse_index(field);
    if (!index) index = catalog.index_of(field);
    if (!index) parse_fail(line_no, "'" + std::string(field) + "' is neither a class index nor a label");
    if (*index >= catalog.size()) parse_fail(line_no, "class index " + std::to_string(*index) + " is out of range");
    decisions.push_back(*index);
  }
  return decisions;
}

Eigen::VectorXd read_priors_json(std::istream& in, const ClassCatalog& catalog, std::string_view method) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("priors JSON: ") + e.what());
  }
  const Json* table = &doc;
  if (doc.contains("priors")) {
    const Json& by_method = doc.at("priors");
    const std::string key(method);
    if (!by_method.contains(key)) {
      throw Error(ErrorCode::parse, "priors JSON has no entry for method '" + key + "'");
    }
    table = &by_method.at(key);
  }
  if (!table->is_object()) throw Error(ErrorCode::parse, "priors must be an object keyed by class label");
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(catalog.size()));
  std::set<std::size_t> seen;
  for (const auto& [label, v] : table->items()) {
    auto index = catalog.index_of(label);
    if (!index) throw Error(ErrorCode::dimension, "priors name unknown class '" + label + "'");
    if (!v.is_number()) throw Error(ErrorCode::parse, "prior for '" + label + "' is not a number");
    values(static_cast<Eigen::Index>(*index)) = v.get<double>();
    seen.insert(*index);
  }
  if (seen.size() != catalog.size()) {
    throw Error(ErrorCode::dimension, "priors cover " + std::to_string(seen.size()) + " of " +
                                          std::to_string(catalog.size()) + " classes");
  }
  return values;
}

Json priors_to_json(const ClassCatalog& catalog, const Eigen::VectorXd& values) {
  Json out = Json::object();
  for (std::size_t i = 0; i < catalog.size(); ++i) out[catalog.label(i)] = values(static_cast<Eigen::Index>(i));
  return out;
}

SuiteFile parse_suite_json(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::validation, "scenario file must hold a JSON object");
  try {
    const ClassCatalog catalog = read_catalog(doc, std::nullopt);
    const std::uint64_t seed = get_or<std::uint64_t>(doc, "seed", 0, "");

    SyntheticClassifierOptions classifier{.seed = seed};
    std::optional<ConfusionMatrix> fixed;
    if (doc.contains("classifier")) {
      const Json& c = doc.at("classifier");
      classifier.diagonal_min = get_or<double>(c, "diagonal_min", classifier.diagonal_min, "classifier.");
      classifier.diagonal_max = get_or<double>(c, "diagonal_max", classifier.diagonal_max, "classifier.");
      classifier.sharpness = get_or<double>(c, "sharpness", classifier.sharpness, "classifier.");
      classifier.seed = get_or<std::uint64_t>(c, "seed", classifier.seed, "classifier.");
      if (c.contains("confusion")) {
        const auto rows = c.at("confusion").get<std::vector<std::vector<double>>>();
        const auto k = static_cast<Eigen::Index>(catalog.size());
        if (static_cast<Eigen::Index>(rows.size()) != k) {
          throw Error(ErrorCode::validation, "classifier.confusion must have one row per class");
        }
        Eigen::MatrixXd counts(k, k);
        for (Eigen::Index j = 0; j < k; ++j) {
          if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(j)].size()) != k) {
            throw Error(ErrorCode::validation, "classifier.confusion[" + std::to_string(j) + "] has the wrong length");
          }
          for (Eigen::Index i = 0; i < k; ++i) counts(j, i) = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        }
        fixed = ConfusionMatrix::from_counts(catalog, counts);
      }
    }

    SuiteFile file{.suite = EvaluationSuite{.catalog = catalog,
                                            .classifier = classifier,
                                            .scenarios = {},
                                            .folds = get_or<std::size_t>(doc, "folds", 10, ""),
                                            .seed = seed,
                                            .fixed_confusion = std::move(fixed)},
                   .confusion_samples_per_class = get_or<std::size_t>(doc, "confusion_samples_per_class", 50, "")};
    if (doc.contains("scenarios")) {
      const Json& list = doc.at("scenarios");
      if (!list.is_array() || list.empty()) throw Error(ErrorCode::validation, "scenarios must be a non-empty array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        file.suite.scenarios.push_back(parse_scenario(list[i], catalog, i, seed + 100 + i));
      }
    } else {
      file.suite.scenarios.push_back(parse_scenario(doc, catalog, 0, seed));
    }
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::validation, std::string("scenario file: ") + e.what());
  }
}

SuiteFile read_suite_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, "'" + path + "': " + e.what());
  }
  return parse_suite_json(doc);
}

}  // namespace prior_adapt::io
