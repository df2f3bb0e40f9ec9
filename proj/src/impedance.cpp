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

#include "scres/impedance.hpp"

namespace scres {

void CpwGeometry::validate() const {
  if (!(center_width_m > 0)) throw DomainError("geometry: center_width_m must be positive");
  if (!(gap_m > 0)) throw DomainError("geometry: gap_m must be positive");
  if (!(thickness_m > 0)) throw DomainError("geometry: thickness_m must be positive");
  if (!(substrate_eps_r >= 1)) throw DomainError("geometry: substrate_eps_r must be >= 1");
  if (length_m && !(*length_m > 0)) throw DomainError("geometry: length_m must be positive");
  if (geom_factor_per_m && !(*geom_factor_per_m > 0)) throw DomainError("geometry: geom_factor_per_m must be positive");
  const double k = modulus();
  if (!(k > 0 && k < 1)) throw DomainError("geometry: modulus w/(w+2s) must lie in (0, 1)");
}

double geometric_inductance(const CpwGeometry& geom) {
  geom.validate();
  return geometric_inductance(geom.center_width_m, geom.gap_m);
}

SurfaceImpedance surface_impedance(const ComplexConductivity& sigma, double thickness, ImpedanceModel model) {
  return surface_impedance(sigma.sigma1(), sigma.sigma2(), sigma.omega_rad, thickness, model);
}

ImpedanceModel parse_impedance_model(bool thin_film_correction) {
  return thin_film_correction ? ImpedanceModel::kThinFilm : ImpedanceModel::kBulk;
}

}  // namespace scres
