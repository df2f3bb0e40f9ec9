// Copyright 2026 The scres Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Levenberg-Marquardt for small dense least-squares problems, Moré-style
// column scaling, damped step solved by QR of the augmented Jacobian.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace scres {

struct LmOptions {
  int max_iterations = 200;
  double relative_cost_tolerance = 1e-12;
  double initial_lambda = 1e-3;
  double finite_difference_step = 1e-6;  // relative, used without an analytic Jacobian
};

struct LmResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;
  double cost = 0.0;  // 0.5 |r|^2
  int iterations = 0;
  bool converged = false;
};

template <typename Problem>
concept HasAnalyticJacobian = requires(const Problem& p, const Eigen::VectorXd& x, Eigen::MatrixXd& j) {
  p.jacobian(x, j);
};

/// Problem provides `Eigen::Index residual_count() const` and
/// `void residual(const Eigen::VectorXd&, Eigen::VectorXd&) const`; an optional
/// `jacobian(x, J)` replaces forward differences.
template <typename Problem>
void evaluate_jacobian(const Problem& problem, const Eigen::VectorXd& x, const Eigen::VectorXd& r0,
                       Eigen::MatrixXd& jac, double fd_step) {
  jac.resize(problem.residual_count(), x.size());
  if constexpr (HasAnalyticJacobian<Problem>) {
    problem.jacobian(x, jac);
  } else {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd rp(r0.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double h = fd_step * std::max(std::abs(x[i]), 1.0);
      xp[i] = x[i] + h;
      problem.residual(xp, rp);
      jac.col(i) = (rp - r0) / h;
      xp[i] = x[i];
    }
  }
}

template <typename Problem>
LmResult levenberg_marquardt(const Problem& problem, Eigen::VectorXd x, const LmOptions& options = {}) {
  const Eigen::Index m = problem.residual_count();
  const Eigen::Index n = x.size();
  LmResult out;
  Eigen::VectorXd r(m);
  problem.residual(x, r);
  double cost = 0.5 * r.squaredNorm();
  Eigen::MatrixXd jac;
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(n);
  double lambda = options.initial_lambda;

  Eigen::MatrixXd augmented(m + n, n);
  Eigen::VectorXd rhs(m + n);
  Eigen::VectorXd trial(n);
  Eigen::VectorXd trial_r(m);

  int iter = 0;
  bool need_jacobian = true;
  for (; iter < options.max_iterations; ++iter) {
    if (cost == 0.0) {
      out.converged = true;
      break;
    }
    if (need_jacobian) {
      evaluate_jacobian(problem, x, r, jac, options.finite_difference_step);
      for (Eigen::Index i = 0; i < n; ++i) scale[i] = std::max(scale[i], jac.col(i).norm());
      need_jacobian = false;
    }
    augmented.topRows(m) = jac;
    augmented.bottomRows(n).setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      augmented(m + i, i) = std::sqrt(lambda) * (scale[i] > 0 ? scale[i] : 1.0);
    }
    rhs.head(m) = -r;
    rhs.tail(n).setZero();
    const Eigen::VectorXd step = augmented.colPivHouseholderQr().solve(rhs);
    trial = x + step;
    problem.residual(trial, trial_r);
    const double trial_cost = 0.5 * trial_r.squaredNorm();
    if (std::isfinite(trial_cost) && trial_cost < cost) {
      const double relative_change = (cost - trial_cost) / cost;
      x = trial;
      r = trial_r;
      cost = trial_cost;
      lambda = std::max(lambda / 10.0, 1e-15);
      need_jacobian = true;
      if (relative_change < options.relative_cost_tolerance) {
        out.converged = true;
        ++iter;
        break;
      }
    } else {
      lambda *= 10.0;
      // No damping yields a decrease: x is a minimum to working precision.
      if (lambda > 1e20) {
        out.converged = true;
        break;
      }
    }
  }
  out.iterations = iter;
  out.x = x;
  out.residual = r;
  out.cost = cost;
  evaluate_jacobian(problem, x, r, jac, options.finite_difference_step);
  out.jacobian = jac;
  return out;
}

/// (J^T J)^-1 via column scaling and a pseudo-inverse; rank-deficient
/// directions come back as zero variance rather than infinities.
inline Eigen::MatrixXd inverse_normal_matrix(const Eigen::MatrixXd& jac) {
  const Eigen::Index n = jac.cols();
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = jac.col(i).norm();
    d[i] = norm > 0 ? 1.0 / norm : 1.0;
  }
  const Eigen::MatrixXd scaled = jac * d.asDiagonal();
  const Eigen::MatrixXd normal = scaled.transpose() * scaled;
  const Eigen::MatrixXd inv = normal.completeOrthogonalDecomposition().pseudoInverse();
  return d.asDiagonal() * inv * d.asDiagonal();
}

}  // namespace scres
