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


#include "scres/xrd.hpp"

#include <cmath>

#include "scres/constants.hpp"
#include "scres/error.hpp"

namespace scres {

double lattice_constant(double two_theta_deg, const std::array<int, 3>& hkl, double wavelength_angstrom) {
  if (!(two_theta_deg > 0 && two_theta_deg < 180)) throw DomainError("lattice_constant: 2theta must lie in (0, 180)");
  if (hkl[0] == 0 && hkl[1] == 0 && hkl[2] == 0) throw DomainError("lattice_constant: hkl must not be all zero");
  if (!(wavelength_angstrom > 0)) throw DomainError("lattice_constant: wavelength must be positive");
  const double n2 = static_cast<double>(hkl[0] * hkl[0] + hkl[1] * hkl[1] + hkl[2] * hkl[2]);
  const double theta = 0.5 * two_theta_deg * Const::kPi / 180.0;
  return wavelength_angstrom * std::sqrt(n2) / (2.0 * std::sin(theta));
}

}  // namespace scres
