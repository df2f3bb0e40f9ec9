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

#include <numbers>

namespace scres {

/// Physical constants in the units the library works in internally:
/// energies in eV, temperature in K, time in s, everything else SI.
template <typename Scalar = double>
struct PhysicalConstants {
  static constexpr Scalar kBoltzmannEv = Scalar(8.617333262e-5);   // eV/K
  static constexpr Scalar kHbarEvS = Scalar(6.582119569e-16);      // eV s
  static constexpr Scalar kHbarJS = Scalar(1.054571817e-34);       // J s
  static constexpr Scalar kMu0 = Scalar(1.25663706212e-6);         // H/m
  static constexpr Scalar kEulerGamma = std::numbers::egamma_v<Scalar>;
  static constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
};

using Const = PhysicalConstants<double>;

template <typename Scalar>
constexpr Scalar angular_frequency(Scalar f_hz) {
  return Scalar(2) * std::numbers::pi_v<Scalar> * f_hz;
}

}  // namespace scres
