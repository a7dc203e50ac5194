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

#include "prior_adapt/simplex_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace prior_adapt {

LuDecomposition::LuDecomposition(const Eigen::MatrixXd& a) : lu_(a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::dimension, "LU factorization needs a square matrix");
  }
  const Eigen::Index n = lu_.rows();
  perm_.resize(static_cast<std::size_t>(n));
  std::iota(perm_.begin(), perm_.end(), Eigen::Index{0});
  norm1_ = n == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    lu_.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot);
    pivot += k;
    if (pivot != k) {
      lu_.row(k).swap(lu_.row(pivot));
      std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(pivot)]);
    }
    const double p = lu_(k, k);
    if (p == 0.0) {
      singular_ = true;
      continue;
    }
    const Eigen::Index rest = n - k - 1;
    if (rest == 0) continue;
    lu_.col(k).tail(rest) /= p;
    lu_.bottomRightCorner(rest, rest).noalias() -= lu_.col(k).tail(rest) * lu_.row(k).tail(rest);
  }
}

Eigen::VectorXd LuDecomposition::solve(const Eigen::VectorXd& b) const {
  if (singular_) throw Error(ErrorCode::singular_matrix, "matrix is singular");
  require_dimension(static_cast<std::size_t>(b.size()), size(), "right-hand side");
  const Eigen::Index n = lu_.rows();
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = b(perm_[static_cast<std::size_t>(i)]);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) -= lu_.row(i).head(i).dot(x.head(i));
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    x(i) = (x(i) - lu_.row(i).tail(n - i - 1).dot(x.tail(n - i - 1))) / lu_(i, i);
  }
  return x;
}

Eigen::VectorXd LuDecomposition::solve_transpose(const Eigen::VectorXd& b) const {
  if (singular_) throw Error(ErrorCode::singular_matrix, "matrix is singular");
  require_dimension(static_cast<std::size_t>(b.size()), size(), "right-hand side");
  const Eigen::Index n = lu_.rows();
  // A^T = U^T L^T P, so solve U^T z = b, L^T w = z, then undo the permutation.
  Eigen::VectorXd w = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    w(i) = (w(i) - lu_.col(i).head(i).dot(w.head(i))) / lu_(i, i);
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    w(i) -= lu_.col(i).tail(n - i - 1).dot(w.tail(n - i - 1));
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(perm_[static_cast<std::size_t>(i)]) = w(i);
  return x;
}

double LuDecomposition::condition_estimate() const {
  if (singular_) return std::numeric_limits<double>::infinity();
  const Eigen::Index n = lu_.rows();
  if (n == 0) return 0.0;

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double estimate = 0.0;
  Eigen::Index last_j = -1;
  for (int iter = 0; iter < 5; ++iter) {
    const Eigen::VectorXd y = solve(x);
    const double norm_y = y.lpNorm<1>();
    if (iter > 0 && norm_y <= estimate) break;
    estimate = norm_y;
    const Eigen::VectorXd sign = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    const Eigen::VectorXd z = solve_transpose(sign);
    Eigen::Index j = 0;
    const double z_max = z.cwiseAbs().maxCoeff(&j);
    if (iter > 0 && (z_max <= z.dot(x) || j == last_j)) break;
    x.setZero();
    x(j) = 1.0;
    last_j = j;
  }
  // Higham's alternating test vector guards against the classic counterexamples.
  Eigen::VectorXd alt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    alt(i) = sign * (1.0 + (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0));
  }
  const double alt_estimate = 2.0 * solve(alt).lpNorm<1>() / (3.0 * static_cast<double>(n));
  estimate = std::max(estimate, alt_estimate);
  return norm1_ * estimate;
}

LinearSolution solve_linear(const Eigen::MatrixXd& h, const Eigen::VectorXd& c) {
  if (h.rows() != h.cols()) throw Error(ErrorCode::dimension, "solve_linear needs a square matrix");
  require_dimension(static_cast<std::size_t>(c.size()), static_cast<std::size_t>(h.rows()),
                    "right-hand side");
  const LuDecomposition lu(h);
  if (lu.singular()) throw Error(ErrorCode::singular_matrix, "matrix is exactly singular");
  LinearSolution out;
  out.v = lu.solve(c);
  out.condition_estimate = lu.condition_estimate();
  out.ill_conditioned = !(out.condition_estimate <= kIllConditionedThreshold);
  return out;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size();
  if (n == 0) throw Error(ErrorCode::validation, "cannot project an empty vector");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(y(i))) throw Error(ErrorCode::validation, "projection input must be finite");
  }
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += u[static_cast<std::size_t>(j)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > 0.0) theta = candidate;
  }
  return (y.array() - theta).cwiseMax(0.0).matrix();
}

void SolverOptions::validate() const {
  if (max_iterations < 1) throw Error(ErrorCode::validation, "max_iterations must be at least 1");
  if (!(gradient_tolerance > 0.0)) throw Error(ErrorCode::validation, "gradient_tolerance must be positive");
  if (!(kkt_tolerance > 0.0)) throw Error(ErrorCode::validation, "kkt_tolerance must be positive");
  if (!(lipschitz_safety >= 1.0)) throw Error(ErrorCode::validation, "lipschitz_safety must be >= 1");
  if (power_iterations < 1) throw Error(ErrorCode::validation, "power_iterations must be at least 1");
}

ConvergenceError::ConvergenceError(Eigen::VectorXd best, SolveReport report)
    : Error(ErrorCode::convergence,
            "simplex least squares did not converge in " + std::to_string(report.iterations) +
                " iterations (squared residual " + std::to_string(report.squared_residual) + ")"),
      best_(std::move(best)),
      report_(report) {}

double estimate_squared_spectral_norm(const Eigen::MatrixXd& h, std::size_t iterations,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd x(h.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    // Top 53 bits mapped to [-1, 1); independent of the standard library's distributions.
    x(i) = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
  }
  double norm = x.norm();
  if (norm == 0.0) {
    x.setOnes();
    norm = x.norm();
  }
  x /= norm;
  double lambda = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const Eigen::VectorXd y = h * x;
    lambda = std::max(lambda, y.squaredNorm());
    const Eigen::VectorXd z = h.transpose() * y;
    const double z_norm = z.norm();
    if (z_norm == 0.0) break;
    x = z / z_norm;
  }
  return lambda;
}

double simplex_kkt_violation(const Eigen::MatrixXd& h, const Eigen::VectorXd& c,
                             const Eigen::VectorXd& v) {
  const Eigen::VectorXd g = 2.0 * (h.transpose() * (h * v - c));
  return std::max(0.0, g.dot(v) - g.minCoeff());
}

SimplexLsqResult solve_simplex_lsq(const Eigen::MatrixXd& h, const Eigen::VectorXd& c,
                                   const SolverOptions& options) {
  options.validate();
  require_dimension(static_cast<std::size_t>(c.size()), static_cast<std::size_t>(h.rows()),
                    "observation vector");
  if (h.cols() < 1) throw Error(ErrorCode::dimension, "least squares needs at least one unknown");
  if (!h.allFinite() || !c.allFinite()) {
    throw Error(ErrorCode::validation, "least squares inputs must be finite");
  }
  const Eigen::Index n = h.cols();

  // L >= 2 sigma_max(H)^2 bounds the gradient's Lipschitz constant. The power
  // estimate is capped by the rigorous bound ||H||_1 ||H||_inf.
  const double sigma2 = estimate_squared_spectral_norm(h, options.power_iterations, options.seed);
  const double bound = h.cwiseAbs().colwise().sum().maxCoeff() * h.cwiseAbs().rowwise().sum().maxCoeff();
  const double lipschitz = 2.0 * std::min(options.lipschitz_safety * sigma2, bound);

  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd r = h * v - c;
  double f = r.squaredNorm();
  Eigen::VectorXd g = 2.0 * (h.transpose() * r);

  SolveReport report;
  report.lipschitz = lipschitz;
  if (lipschitz == 0.0) {
    // H = 0: every feasible point is optimal.
    report.squared_residual = f;
    report.converged = true;
    return {v, report};
  }

  double step = 1.0 / lipschitz;
  Eigen::VectorXd best = v;
  double best_f = f;
  Eigen::VectorXd v_new(n);
  Eigen::VectorXd r_new(h.rows());
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    double f_new = 0.0;
    if (options.step_rule == StepRule::fixed) {
      v_new = project_simplex(v - step * g);
      r_new.noalias() = h * v_new;
      r_new -= c;
      f_new = r_new.squaredNorm();
    } else {
      double trial = 2.0 * step;
      for (int halvings = 0; halvings < 64; ++halvings) {
        v_new = project_simplex(v - trial * g);
        r_new.noalias() = h * v_new;
        r_new -= c;
        f_new = r_new.squaredNorm();
        const Eigen::VectorXd d = v_new - v;
        if (f_new <= f + g.dot(d) + d.squaredNorm() / (2.0 * trial)) break;
        trial *= 0.5;
      }
      step = trial;
    }

    const double decrease = f - f_new;
    const double step_norm = (v_new - v).norm();
    const double f_prev = f;
    v.swap(v_new);
    r.swap(r_new);
    f = f_new;
    g.noalias() = 2.0 * (h.transpose() * r);
    const double gap = std::max(0.0, g.dot(v) - g.minCoeff());

    if (f < best_f) {
      best = v;
      best_f = f;
    }
    report.iterations = it;
    report.squared_residual = f;
    report.kkt_violation = gap;
    report.last_decrease = decrease;
    report.last_step_norm = step_norm;

    const bool stalled = step_norm == 0.0 || f == 0.0;
    const bool small_decrease = decrease <= options.gradient_tolerance * f_prev;
    if (stalled || (small_decrease && gap <= options.kkt_tolerance)) {
      report.converged = true;
      return {v, report};
    }
  }
  report.squared_residual = best_f;
  report.kkt_violation = simplex_kkt_violation(h, c, best);
  throw ConvergenceError(std::move(best), report);
}

}  // namespace prior_adapt
