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

#include "prior_adapt/catalog.hpp"

#include <algorithm>
#include <unordered_set>

#include "prior_adapt/error.hpp"

namespace prior_adapt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::dimension: return "dimension";
    case ErrorCode::validation: return "validation";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::degenerate_recall: return "degenerate_recall";
    case ErrorCode::singular_matrix: return "singular_matrix";
    case ErrorCode::ill_conditioned: return "ill_conditioned";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

void require_dimension(std::size_t actual, std::size_t expected, std::string_view what) {
  if (actual != expected) {
    throw Error(ErrorCode::dimension, std::string(what) + ": expected dimension " +
                                          std::to_string(expected) + ", got " +
                                          std::to_string(actual));
  }
}

ClassCatalog::ClassCatalog(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw Error(ErrorCode::validation, "a class catalog needs at least two classes");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& label : labels_) {
    if (label.empty()) throw Error(ErrorCode::validation, "class labels must be non-empty");
    if (!seen.insert(label).second) {
      throw Error(ErrorCode::validation, "duplicate class label '" + label + "'");
    }
  }
}

ClassCatalog ClassCatalog::numbered(std::size_t k) {
  const std::size_t width = std::to_string(k == 0 ? 0 : k - 1).size();
  std::vector<std::string> labels;
  labels.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto digits = std::to_string(i);
    labels.push_back("c" + std::string(width - digits.size(), '0') + digits);
  }
  return ClassCatalog(std::move(labels));
}

std::optional<std::size_t> ClassCatalog::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

}  // namespace prior_adapt
