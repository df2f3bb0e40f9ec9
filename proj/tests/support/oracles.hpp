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

// Independent reference implementations used only by the tests.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>

namespace oracle {

inline constexpr double kBoltzmannEv = 8.617333262e-5;
inline constexpr double kHbarEvS = 6.582119569e-16;

using Big = boost::multiprecision::cpp_bin_float_100;

/// I0 by its power series in 100-digit arithmetic.
inline double bessel_i0_series(double xd) {
  const Big x(xd);
  const Big q = x * x / 4;
  Big term = 1, sum = 1;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (Big(k) * k);
    sum += term;
    if (term < sum * Big("1e-60")) break;
  }
  return static_cast<double>(sum);
}

/// K0 = -(ln(x/2) + gamma) I0 + sum (x^2/4)^k / (k!)^2 H_k, in 100-digit arithmetic.
inline double bessel_k0_series(double xd) {
  const Big x(xd);
  const Big q = x * x / 4;
  const Big gamma = boost::math::constants::euler<Big>();
  Big term = 1, i0 = 1, tail = 0, harmonic = 0;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (Big(k) * k);
    harmonic += Big(1) / k;
    i0 += term;
    tail += term * harmonic;
    if (term * harmonic < Big("1e-80") * i0) break;
  }
  return static_cast<double>(-(log(x / 2) + gamma) * i0 + tail);
}

/// sigma1 / sigma_N and sigma2 / sigma_N from the full Mattis-Bardeen integrals
/// (hbar omega < 2 Delta), gap held at `delta_ev`.
struct MbFull {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

inline MbFull mb_full_oracle(double t_k, double omega, double delta_ev) {
  using boost::math::quadrature::gauss_kronrod;
  const double kt = kBoltzmannEv * t_k;
  const double hw = kHbarEvS * omega;
  const double d = delta_ev;

  // f(E) - f(E + hw), arranged so nothing overflows.
  const auto fermi_difference = [&](double e) {
    const double a = std::exp(-e / kt);
    const double b = std::exp(-(e + hw) / kt);
    return b * std::expm1(hw / kt) / ((1.0 + a) * (1.0 + b));
  };
  // E = Delta + u^2 removes the inverse square-root edge at E = Delta.
  const auto s1 = [&](double u) {
    const double e = d + u * u;
    const double num = e * e + d * d + hw * e;
    const double ep = e + hw;
    return 2.0 * fermi_difference(e) * num / (std::sqrt(2.0 * d + u * u) * std::sqrt(ep * ep - d * d));
  };
  const double u_max = std::sqrt(120.0 * kt);
  const double i1 = gauss_kronrod<double, 61>::integrate(s1, 0.0, u_max, 20, 1e-13);

  // E = Delta - hw sin^2 s removes both edges of [Delta - hw, Delta].
  const auto s2 = [&](double s) {
    const double sn = std::sin(s);
    const double e = d - hw * sn * sn;
    const double num = e * e + d * d + hw * e;
    return 2.0 * std::tanh((e + hw) / (2.0 * kt)) * num / std::sqrt((d + e) * (e + hw + d));
  };
  const double i2 = gauss_kronrod<double, 61>::integrate(s2, 0.0, std::numbers::pi / 2, 20, 1e-13);
  return {2.0 * i1 / hw, i2 / hw};
}

}  // namespace oracle
