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

#include "prior_adapt/stream_monitor.hpp"

#include <algorithm>
#include <string>

#include "prior_adapt/error.hpp"

namespace prior_adapt {

StreamMonitor::StreamMonitor(ClassCatalog catalog, MonitorOptions options)
    : catalog_(std::move(catalog)), options_(options), counts_(catalog_.size(), 0) {
  if (options_.window && *options_.window == 0) {
    throw Error(ErrorCode::validation, "monitor window must hold at least one decision");
  }
}

std::uint64_t StreamMonitor::histogram_total() const noexcept {
  if (options_.window) return std::min<std::uint64_t>(decisions_seen_, *options_.window);
  return decisions_seen_;
}

void StreamMonitor::ingest(std::size_t decision) {
  if (decision >= catalog_.size()) {
    throw Error(ErrorCode::validation, "decision index " + std::to_string(decision) +
                                           " is out of range for " +
                                           std::to_string(catalog_.size()) + " classes");
  }
  ++counts_[decision];
  ++decisions_seen_;
  if (options_.window) {
    recent_.push_back(decision);
    if (recent_.size() > *options_.window) {
      --counts_[recent_.front()];
      recent_.pop_front();
    }
  }
}

std::size_t StreamMonitor::ingest_scored(const ScoreRecord& record) {
  const std::size_t decision = decide_baseline(catalog_, record);
  ingest(decision);
  return decision;
}

AdaptedDecision StreamMonitor::ingest_adapted(const ScoreRecord& record, const AdaptedPolicy& policy) {
  if (!options_.closed_loop) {
    throw Error(ErrorCode::validation, "closed-loop ingestion is disabled for this monitor");
  }
  require_dimension(record.size(), catalog_.size(), "score record");
  const AdaptedDecision decision = decide_adapted(record, policy);
  ingest(decision.index);
  return decision;
}

DecisionHistogram StreamMonitor::snapshot() const {
  if (decisions_seen_ == 0) throw Error(ErrorCode::insufficient_data, "no decisions ingested yet");
  return DecisionHistogram(counts_);
}

void StreamMonitor::reset() {
  std::fill(counts_.begin(), counts_.end(), 0);
  recent_.clear();
  decisions_seen_ = 0;
}

}  // namespace prior_adapt
