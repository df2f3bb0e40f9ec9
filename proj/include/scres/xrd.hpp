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

#include <array>

namespace scres {

inline constexpr double kCuKalpha1Angstrom = 1.5406;

/// Cubic lattice constant from Bragg's law: a = lambda sqrt(h^2 + k^2 + l^2) / (2 sin theta).
double lattice_constant(double two_theta_deg, const std::array<int, 3>& hkl,
                        double wavelength_angstrom = kCuKalpha1Angstrom);

}  // namespace scres
