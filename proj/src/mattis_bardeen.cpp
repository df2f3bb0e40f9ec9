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

#include "scres/mattis_bardeen.hpp"

namespace scres {

void MaterialParams::validate() const {
  if (!(tc_kelvin > 0)) throw DomainError("material: tc_kelvin must be positive");
  if (!(thickness_m > 0)) throw DomainError("material: thickness_m must be positive");
  if (!(sheet_resistance_ohm > 0)) throw DomainError("material: sheet_resistance_ohm must be positive");
  if (delta0_ev && !(*delta0_ev > 0)) throw DomainError("material: delta0_ev must be positive");
  if (!(n0_states > 0)) throw DomainError("material: n0_states must be positive");
  if (alpha && !(*alpha > 0 && *alpha <= 1)) throw DomainError("material: alpha must lie in (0, 1]");
}

double MaterialParams::delta0() const { return delta0_ev ? *delta0_ev : gap_at_zero(tc_kelvin); }

double MaterialParams::alpha_or_throw() const {
  if (!alpha) throw ConfigError("material.alpha (kinetic-inductance fraction) is required and has no default");
  return *alpha;
}

std::optional<bool> MaterialParams::dirty_limit() const {
  if (!mean_free_path_m || !coherence_length_m || !penetration_depth_m) return std::nullopt;
  const double l = *mean_free_path_m;
  return l < *coherence_length_m / 3.0 && l < *penetration_depth_m / 3.0;
}

Sigma2Mode parse_sigma2_mode(std::string_view text) {
  if (text == "closed_form") return Sigma2Mode::kClosedForm;
  if (text == "standard") return Sigma2Mode::kStandard;
  throw ConfigError("unknown sigma2 mode '" + std::string(text) + "' (expected closed_form|standard)");
}

std::string_view to_string(Sigma2Mode mode) { return mode == Sigma2Mode::kClosedForm ? "closed_form" : "standard"; }

GapModel parse_gap_model(std::string_view text) {
  if (text == "bcs") return GapModel::kBcsInterpolation;
  if (text == "constant") return GapModel::kConstant;
  throw ConfigError("unknown gap model '" + std::string(text) + "' (expected bcs|constant)");
}

std::string_view to_string(GapModel model) { return model == GapModel::kConstant ? "constant" : "bcs"; }

ComplexConductivity complex_conductivity(const MaterialParams& params, double t, double omega, Sigma2Mode mode) {
  params.validate();
  const auto norm = mb_sigma_norm(t, omega, params.delta0(), mode);
  ComplexConductivity out;
  out.sigma1_norm = norm.sigma1;
  out.sigma2_norm = norm.sigma2;
  out.sigma2_deficit = norm.sigma2_deficit;
  out.sigma_n = params.sigma_n();
  out.temperature_k = t;
  out.omega_rad = omega;
  out.validity = norm.validity;
  return out;
}

}  // namespace scres
