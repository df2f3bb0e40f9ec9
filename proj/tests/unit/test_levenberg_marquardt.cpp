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


#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "scres/levenberg_marquardt.hpp"
#include "scres/notch.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// y = a exp(-b t) + c
struct Decay {
  Eigen::VectorXd t, y;
  Eigen::Index residual_count() const { return t.size(); }
  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    r = (x[0] * (-x[1] * t.array()).exp() + x[2]).matrix() - y;
  }
};

struct DecayAnalytic : Decay {
  void jacobian(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const {
    const Eigen::ArrayXd e = (-x[1] * t.array()).exp();
    j.col(0) = e.matrix();
    j.col(1) = (-x[0] * t.array() * e).matrix();
    j.col(2).setOnes();
  }
};

struct Rosenbrock {
  Eigen::Index residual_count() const { return 2; }
  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    r[0] = 10 * (x[1] - x[0] * x[0]);
    r[1] = 1 - x[0];
  }
};

struct Linear {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::Index residual_count() const { return a.rows(); }
  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) const { r = a * x - b; }
};

Decay decay_data() {
  Decay d;
  d.t = Eigen::VectorXd::LinSpaced(50, 0.0, 5.0);
  d.y = (2.5 * (-1.3 * d.t.array()).exp() + 0.4).matrix();
  return d;
}

}  // namespace

TEST_CASE("Rosenbrock minimum from the classic start") {
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  const auto r = scres::levenberg_marquardt(Rosenbrock{}, x0);
  CHECK(r.converged);
  CHECK_THAT(r.x[0], WithinAbs(1.0, 1e-8));
  CHECK_THAT(r.x[1], WithinAbs(1.0, 1e-8));
}

TEST_CASE("exact decay recovered with finite differences and with the analytic Jacobian") {
  Eigen::VectorXd x0(3);
  x0 << 1.0, 0.5, 0.0;
  const Decay fd = decay_data();
  const DecayAnalytic an{fd};
  const auto a = scres::levenberg_marquardt(fd, x0);
  const auto b = scres::levenberg_marquardt(an, x0);
  for (const auto* r : {&a, &b}) {
    CHECK(r->converged);
    CHECK_THAT(r->x[0], WithinRel(2.5, 1e-8));
    CHECK_THAT(r->x[1], WithinRel(1.3, 1e-8));
    CHECK_THAT(r->x[2], WithinRel(0.4, 1e-8));
  }
}

TEST_CASE("forward-difference Jacobian agrees with the analytic one") {
  const DecayAnalytic an{decay_data()};
  Eigen::VectorXd x(3);
  x << 2.0, 1.1, 0.3;
  Eigen::VectorXd r(an.residual_count());
  an.residual(x, r);
  Eigen::MatrixXd analytic(an.residual_count(), 3), numeric;
  an.jacobian(x, analytic);
  scres::evaluate_jacobian(static_cast<const Decay&>(an), x, r, numeric, 1e-7);
  CHECK((analytic - numeric).norm() < 1e-5 * analytic.norm());
}

TEST_CASE("linear least squares matches QR, covariance matches the direct inverse") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  Linear problem;
  problem.a = Eigen::MatrixXd::NullaryExpr(40, 4, [&] { return n01(rng); });
  problem.b = Eigen::VectorXd::NullaryExpr(40, [&] { return n01(rng); });
  const auto r = scres::levenberg_marquardt(problem, Eigen::VectorXd::Zero(4));
  const Eigen::VectorXd expected = problem.a.colPivHouseholderQr().solve(problem.b);
  CHECK((r.x - expected).norm() < 1e-9 * expected.norm());
  const Eigen::MatrixXd direct = (problem.a.transpose() * problem.a).inverse();
  CHECK((scres::inverse_normal_matrix(problem.a) - direct).norm() < 1e-10 * direct.norm());
}

TEST_CASE("rank-deficient direction gets zero variance") {
  Eigen::MatrixXd j(5, 2);
  j.col(0) = Eigen::VectorXd::LinSpaced(5, 1.0, 2.0);
  j.col(1).setZero();
  const Eigen::MatrixXd inv = scres::inverse_normal_matrix(j);
  CHECK(std::isfinite(inv(0, 0)));
  CHECK(inv(1, 1) == 0.0);
}

TEST_CASE("analytic notch Jacobian against central differences") {
  const scres::NotchParams p{5.95e9, 4e4, 8e4, 0.3, 0.8, 1.1, 35e-9};
  const Eigen::VectorXd f = scres::linewidth_grid(p, 10.0, 301);
  const double f_ref = f.mean();
  Eigen::VectorXd x(7);
  x << p.fr_hz, p.ql, p.qc_mag, p.phi_rad, p.amp, p.phase0_rad - 2 * std::numbers::pi * f_ref * p.tau_s, p.tau_s;
  const Eigen::VectorXcd data = scres::model_s21(p, f);
  const Eigen::MatrixXd analytic = scres::detail::notch_jacobian(x, f, f_ref);
  for (int k = 0; k < 7; ++k) {
    // fr needs a step well inside the linewidth fr/Ql.
    const double h = k == 0 ? 1e-9 * x[k] : 1e-6 * std::max(std::abs(x[k]), k == 6 ? 1e-8 : 1e-3);
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const Eigen::VectorXd numeric =
        (scres::detail::notch_residual(xp, f, data, f_ref) - scres::detail::notch_residual(xm, f, data, f_ref)) /
        (2 * h);
    INFO("parameter " << k);
    CHECK((analytic.col(k) - numeric).norm() < 1e-6 * analytic.col(k).norm());
  }
}
