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
#include <vector>

#include <Eigen/Core>

#include "prior_adapt/error.hpp"

namespace prior_adapt {

inline constexpr double kIllConditionedThreshold = 1e12;

/// Dense LU factorization with partial (row) pivoting, PA = LU, stored packed
/// in one matrix. Exact zero pivots mark the matrix singular; solves on a
/// singular factorization throw singular_matrix.
class LuDecomposition {
 public:
  explicit LuDecomposition(const Eigen::MatrixXd& a);

  std::size_t size() const noexcept { return static_cast<std::size_t>(lu_.rows()); }
  bool singular() const noexcept { return singular_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// Solves A^T x = b.
  Eigen::VectorXd solve_transpose(const Eigen::VectorXd& b) const;

  /// 1-norm condition number estimate ||A||_1 * est(||A^-1||_1) using Hager's
  /// method (Higham's variant, at most five iterations). Infinity when singular.
  double condition_estimate() const;

 private:
  Eigen::MatrixXd lu_;
  std::vector<Eigen::Index> perm_;  // row i of PA is row perm_[i] of A
  double norm1_ = 0.0;
  bool singular_ = false;
};

struct LinearSolution {
  Eigen::VectorXd v;
  double condition_estimate = 0.0;
  /// Condition estimate exceeded kIllConditionedThreshold; v is still returned.
  bool ill_conditioned = false;
};

/// Solves Hv = c by LU with partial pivoting. Throws singular_matrix on an
/// exact zero pivot and dimension on shape mismatch.
LinearSolution solve_linear(const Eigen::MatrixXd& h, const Eigen::VectorXd& c);

/// Euclidean projection onto the probability simplex by sort and threshold,
/// O(K log K). Throws validation on NaN or infinite input.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& y);

enum class StepRule { fixed, backtracking };

struct SolverOptions {
  std::size_t max_iterations = 10'000;
  /// Stop once one step lowers the squared residual by no more than this
  /// fraction of its previous value (and the KKT test below also passes).
  double gradient_tolerance = 1e-10;
  /// Frank-Wolfe gap bound required alongside the decrease test.
  double kkt_tolerance = 1e-9;
  StepRule step_rule = StepRule::fixed;
  std::uint64_t seed = 0x5eed;
  std::size_t power_iterations = 50;
  double lipschitz_safety = 1.1;

  void validate() const;
};

struct SolveReport {
  std::size_t iterations = 0;
  double squared_residual = 0.0;
  bool converged = false;
  /// Frank-Wolfe gap g.v - min_i g_i at the returned point; zero exactly at
  /// the optimum and an upper bound on the objective's suboptimality.
  double kkt_violation = 0.0;
  double last_decrease = 0.0;
  /// ||v_{k+1} - v_k||_2 of the final step.
  double last_step_norm = 0.0;
  /// Lipschitz constant of the gradient used for the fixed step.
  double lipschitz = 0.0;
};

struct SimplexLsqResult {
  Eigen::VectorXd v;
  SolveReport report;
};

/// Raised when the iteration cap is hit before the stopping test passes.
class ConvergenceError : public Error {
 public:
  ConvergenceError(Eigen::VectorXd best, SolveReport report);

  const Eigen::VectorXd& best_iterate() const noexcept { return best_; }
  const SolveReport& report() const noexcept { return report_; }

 private:
  Eigen::VectorXd best_;
  SolveReport report_;
};

/// Largest eigenvalue of H^T H by power iteration from a seeded start.
double estimate_squared_spectral_norm(const Eigen::MatrixXd& h, std::size_t iterations,
                                      std::uint64_t seed);

/// Minimizes ||Hv - c||^2 over the probability simplex by projected gradient
/// descent started at the uniform vector. H may be rank deficient.
SimplexLsqResult solve_simplex_lsq(const Eigen::MatrixXd& h, const Eigen::VectorXd& c,
                                   const SolverOptions& options = {});

/// Frank-Wolfe gap of ||Hv - c||^2 at v (see SolveReport::kkt_violation).
double simplex_kkt_violation(const Eigen::MatrixXd& h, const Eigen::VectorXd& c,
                             const Eigen::VectorXd& v);

}  // namespace prior_adapt
