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

// Modified Bessel functions of order zero and the complete elliptic integral
// of the first kind. Series expansions below the crossover, exponentially
// convergent trapezoidal quadrature of the integral representations above it.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>

#include "scres/error.hpp"

namespace scres {

namespace detail {

inline constexpr double kK0Crossover = 2.0;
inline constexpr double kI0Crossover = 3.75;
inline constexpr double kI0Overflow = 700.0;

// sum_k (x^2/4)^k / (k!)^2, optionally weighted by the harmonic numbers H_k.
template <std::floating_point Scalar>
Scalar bessel_power_series(Scalar x, bool harmonic_weighted) {
  const Scalar q = x * x / Scalar(4);
  Scalar term = Scalar(1);
  Scalar harmonic = Scalar(0);
  Scalar sum = harmonic_weighted ? Scalar(0) : Scalar(1);
  for (int k = 1; k < 1000; ++k) {
    term *= q / (Scalar(k) * Scalar(k));
    harmonic += Scalar(1) / Scalar(k);
    const Scalar contribution = harmonic_weighted ? term * harmonic : term;
    sum += contribution;
    if (contribution <= std::numeric_limits<Scalar>::epsilon() * sum * Scalar(0.25)) break;
  }
  return sum;
}

// e^x K0(x) = int_0^inf exp(-x (cosh t - 1)) dt.
template <std::floating_point Scalar>
Scalar k0e_integral(Scalar x) {
  // The integrand narrows like 1/sqrt(x); the step follows it.
  const Scalar h = Scalar(0.5) / std::sqrt(std::max(x, Scalar(16)));
  Scalar sum = Scalar(0.5);  // t = 0 contributes exp(0) with weight 1/2
  for (int i = 1; i < 100000; ++i) {
    const Scalar half_sinh = std::sinh(h * Scalar(i) / Scalar(2));
    const Scalar exponent = Scalar(2) * x * half_sinh * half_sinh;
    const Scalar term = std::exp(-exponent);
    sum += term;
    if (term < std::numeric_limits<Scalar>::epsilon() * sum * Scalar(1e-3)) break;
  }
  return h * sum;
}

// e^-x I0(x) = (1/pi) int_0^pi exp(x (cos t - 1)) dt. The integrand is even and
// 2 pi periodic, so the endpoint-halved trapezoid rule is spectrally accurate.
template <std::floating_point Scalar>
Scalar i0e_integral(Scalar x) {
  const int n = 16 + static_cast<int>(std::ceil(std::sqrt(Scalar(25) * x)));
  const Scalar h = std::numbers::pi_v<Scalar> / Scalar(n);
  Scalar sum = Scalar(0.5) * (Scalar(1) + std::exp(Scalar(-2) * x));
  for (int i = 1; i < n; ++i) sum += std::exp(x * (std::cos(h * Scalar(i)) - Scalar(1)));
  return sum / Scalar(n);
}

}  // namespace detail

/// I0(x). Throws RangeError above x = 700 where the result overflows double.
template <std::floating_point Scalar>
Scalar bessel_i0(Scalar x) {
  x = std::abs(x);
  if (x > Scalar(detail::kI0Overflow)) throw RangeError("bessel_i0: argument overflows (x > 700)");
  if (x <= Scalar(detail::kI0Crossover)) return detail::bessel_power_series(x, false);
  return std::exp(x) * detail::i0e_integral(x);
}

/// Exponentially scaled e^-x I0(x); finite for every x.
template <std::floating_point Scalar>
Scalar bessel_i0e(Scalar x) {
  x = std::abs(x);
  if (x <= Scalar(detail::kI0Crossover)) return std::exp(-x) * detail::bessel_power_series(x, false);
  return detail::i0e_integral(x);
}

/// K0(x) for x > 0.
template <std::floating_point Scalar>
Scalar bessel_k0(Scalar x) {
  if (!(x > Scalar(0))) throw DomainError("bessel_k0: requires x > 0");
  if (x <= Scalar(detail::kK0Crossover)) {
    const Scalar log_term = std::log(x / Scalar(2)) + std::numbers::egamma_v<Scalar>;
    return -log_term * detail::bessel_power_series(x, false) + detail::bessel_power_series(x, true);
  }
  return std::exp(-x) * detail::k0e_integral(x);
}

/// Exponentially scaled e^x K0(x).
template <std::floating_point Scalar>
Scalar bessel_k0e(Scalar x) {
  if (!(x > Scalar(0))) throw DomainError("bessel_k0e: requires x > 0");
  if (x <= Scalar(detail::kK0Crossover)) return std::exp(x) * bessel_k0(x);
  return detail::k0e_integral(x);
}

template <std::floating_point Scalar>
struct BesselPair {
  Scalar k0;
  Scalar i0;
};

template <std::floating_point Scalar>
BesselPair<Scalar> modified_bessel(Scalar x) {
  return {bessel_k0(x), bessel_i0(x)};
}

/// Complete elliptic integral of the first kind K(k), modulus convention,
/// by the arithmetic-geometric mean.
template <std::floating_point Scalar>
Scalar elliptic_k(Scalar k) {
  if (!(k >= Scalar(0) && k < Scalar(1))) throw DomainError("elliptic_k: modulus must lie in [0, 1)");
  Scalar a = Scalar(1);
  Scalar b = std::sqrt((Scalar(1) - k) * (Scalar(1) + k));
  for (int i = 0; i < 64 && std::abs(a - b) > std::numeric_limits<Scalar>::epsilon() * a; ++i) {
    const Scalar next_a = (a + b) / Scalar(2);
    b = std::sqrt(a * b);
    a = next_a;
  }
  return std::numbers::pi_v<Scalar> / (a + b);
}

}  // namespace scres
