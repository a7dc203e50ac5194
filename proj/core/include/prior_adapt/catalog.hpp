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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prior_adapt {

/// Ordered set of class names known to a classifier. Every vector or matrix in
/// the library is indexed against one of these.
class ClassCatalog {
 public:
  /// Throws Error(validation) unless there are at least two unique, non-empty labels.
  explicit ClassCatalog(std::vector<std::string> labels);

  /// Catalog with generated labels "c0".."c{K-1}", zero-padded to equal width.
  static ClassCatalog numbered(std::size_t k);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  /// The balanced prior 1/K assumed during training.
  double uniform_prior() const noexcept { return 1.0 / static_cast<double>(labels_.size()); }

  friend bool operator==(const ClassCatalog&, const ClassCatalog&) = default;

 private:
  std::vector<std::string> labels_;
};

}  // namespace prior_adapt
