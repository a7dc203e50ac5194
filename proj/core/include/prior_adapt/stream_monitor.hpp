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
#include <deque>
#include <optional>
#include <vector>

#include "prior_adapt/catalog.hpp"
#include "prior_adapt/model.hpp"

namespace prior_adapt {

struct MonitorOptions {
  /// Histogram over the last `window` decisions only; cumulative when empty.
  std::optional<std::size_t> window;
  /// Allow ingest_adapted(), which counts prior-weighted decisions and so
  /// feeds the current estimate back into the next one.
  bool closed_loop = false;
};

/// Running decision histogram of a deployed classifier.
///
/// Single writer: one owner calls the ingest methods. Snapshots are
/// independent values and may be handed to other threads.
class StreamMonitor {
 public:
  explicit StreamMonitor(ClassCatalog catalog, MonitorOptions options = {});

  const ClassCatalog& catalog() const noexcept { return catalog_; }
  const MonitorOptions& options() const noexcept { return options_; }
  std::uint64_t decisions_seen() const noexcept { return decisions_seen_; }
  /// Decisions currently represented in the histogram.
  std::uint64_t histogram_total() const noexcept;
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  /// Throws validation when the index is not a class of the catalog.
  void ingest(std::size_t decision);

  /// Decides with decide_baseline and counts that decision.
  std::size_t ingest_scored(const ScoreRecord& record);

  /// Decides with the adapted policy and counts that decision. Only available
  /// when the monitor was built with closed_loop = true.
  AdaptedDecision ingest_adapted(const ScoreRecord& record, const AdaptedPolicy& policy);

  /// Throws insufficient_data before the first decision.
  DecisionHistogram snapshot() const;

  void reset();

 private:
  ClassCatalog catalog_;
  MonitorOptions options_;
  std::vector<std::uint64_t> counts_;
  std::deque<std::size_t> recent_;
  std::uint64_t decisions_seen_ = 0;
};

}  // namespace prior_adapt
