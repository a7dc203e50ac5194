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

#include <stdexcept>
#include <string>
#include <string_view>

namespace prior_adapt {

enum class ErrorCode {
  dimension,
  validation,
  insufficient_data,
  degenerate_recall,
  singular_matrix,
  ill_conditioned,
  convergence,
  parse,
  io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base class for every error raised by the library. The code groups errors
/// into families the command line tool maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures raised by a numerical routine rather than by bad input.
  bool is_solver_failure() const noexcept {
    return code_ == ErrorCode::singular_matrix || code_ == ErrorCode::ill_conditioned ||
           code_ == ErrorCode::convergence || code_ == ErrorCode::degenerate_recall;
  }

 private:
  ErrorCode code_;
};

void require_dimension(std::size_t actual, std::size_t expected, std::string_view what);

}  // namespace prior_adapt
