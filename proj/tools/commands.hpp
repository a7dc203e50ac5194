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

#include <ostream>
#include <string>
#include <vector>

namespace prior_adapt::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

/// Runs the command line `args` (without the program name). Normal output goes
/// to `out` unless --output names a file; warnings and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prior_adapt::cli
