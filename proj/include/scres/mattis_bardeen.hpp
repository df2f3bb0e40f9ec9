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

// Mattis-Bardeen complex conductivity of a superconducting film in the
// low-temperature, low-frequency approximation.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "scres/constants.hpp"
#include "scres/error.hpp"
#include "scres/special_functions.hpp"

namespace scres {

/// Superconducting film constants. Lengths in m, energies in eV.
struct MaterialParams {
  double tc_kelvin = 0.0;
  std::optional<double> delta0_ev;        // derived as 1.76 kB Tc when absent
  double sheet_resistance_ohm = 0.0;      // normal-state R_sq just above Tc
  double thickness_m = 0.0;
  double n0_states = 1.86e28;             // single-spin DOS, states / (m^3 eV)
  std::optional<double> alpha;            // kinetic-inductance fraction, no default
  std::optional<double> mean_free_path_m;
  std::optional<double> coherence_length_m;
  std::optional<double> penetration_depth_m;

  /// Throws DomainError when an invariant is broken.
  void validate() const;

  double delta0() const;
  double sigma_n() const { return 1.0 / (sheet_resistance_ohm * thickness_m); }
  /// Requires alpha to be configured.
  double alpha_or_throw() const;
  /// l < xi/3 and l < lambda/3; empty unless all three lengths are known.
  std::optional<bool> dirty_limit() const;
};

/// Leading prefactor of sigma2/sigma_N: 4 Delta0 / hbar omega, the form that
/// usually accompanies the closed-form sigma1 (kClosedForm), or pi Delta0 /
/// hbar omega, the zero-temperature limit of the full integral (kStandard).
/// The two differ by 4/pi.
enum class Sigma2Mode { kClosedForm, kStandard };

/// Temperature dependence of the gap used by the density conversion.
enum class GapModel { kBcsInterpolation, kConstant };

Sigma2Mode parse_sigma2_mode(std::string_view text);
std::string_view to_string(Sigma2Mode mode);
GapModel parse_gap_model(std::string_view text);
std::string_view to_string(GapModel model);

/// Soft warnings raised when the closed form is pushed out of its regime.
enum ValidityFlag : std::uint32_t {
  kValid = 0,
  kPhotonEnergyStrained = 1u << 0,  // hbar omega > Delta0 / 10
  kThermalStrained = 1u << 1,       // kB T > Delta0 / 3
};

template <std::floating_point Scalar>
Scalar gap_at_zero(Scalar tc) {
  if (!(tc >= Scalar(0))) throw DomainError("gap_at_zero: Tc must be non-negative");
  return Scalar(1.76) * PhysicalConstants<Scalar>::kBoltzmannEv * tc;
}

/// Delta(T) = Delta0 tanh(1.74 sqrt(Tc/T - 1)), valid for 0 <= T < Tc.
template <std::floating_point Scalar>
Scalar gap_at_temperature(Scalar delta0, Scalar t, Scalar tc, GapModel model = GapModel::kBcsInterpolation) {
  if (!(t >= Scalar(0))) throw DomainError("gap_at_temperature: T must be non-negative");
  if (!(t < tc)) throw DomainError("gap_at_temperature: T >= Tc, the gap is closed");
  if (model == GapModel::kConstant || t == Scalar(0)) return delta0;
  return delta0 * std::tanh(Scalar(1.74) * std::sqrt(tc / t - Scalar(1)));
}

template <std::floating_point Scalar>
struct SigmaNorm {
  Scalar sigma1 = 0;
  Scalar sigma2 = 0;
  // Thermal suppression 1 - sigma2 / prefactor. Kept separately because it
  // underflows relative to 1 far below Tc, where it still drives the
  // kinetic-inductance shift.
  Scalar sigma2_deficit = 0;
  Scalar sigma2_prefactor = 0;
  std::uint32_t validity = kValid;
};

template <std::floating_point Scalar>
SigmaNorm<Scalar> mb_sigma_norm(Scalar t, Scalar omega, Scalar delta0, Sigma2Mode mode = Sigma2Mode::kClosedForm) {
  using C = PhysicalConstants<Scalar>;
  if (!(t > Scalar(0))) throw DomainError("mb_sigma_norm: T must be positive");
  if (!(omega > Scalar(0))) throw DomainError("mb_sigma_norm: omega must be positive");
  if (!(delta0 > Scalar(0))) throw DomainError("mb_sigma_norm: Delta0 must be positive");
  const Scalar hw = C::kHbarEvS * omega;
  const Scalar kt = C::kBoltzmannEv * t;
  if (!(hw < Scalar(2) * delta0)) throw DomainError("mb_sigma_norm: hbar omega >= 2 Delta0 breaks pairs");

  SigmaNorm<Scalar> out;
  if (hw > delta0 / Scalar(10)) out.validity |= kPhotonEnergyStrained;
  if (kt > delta0 / Scalar(3)) out.validity |= kThermalStrained;

  const Scalar xi = hw / (Scalar(2) * kt);
  const Scalar activation = std::exp(-delta0 / kt);
  // sinh(xi) K0(xi) = (1 - e^{-2 xi}) / 2 * e^{xi} K0(xi)
  const Scalar sinh_k0 = -std::expm1(Scalar(-2) * xi) / Scalar(2) * bessel_k0e(xi);
  out.sigma1 = Scalar(4) * delta0 / hw * activation * sinh_k0;

  out.sigma2_prefactor = (mode == Sigma2Mode::kClosedForm ? Scalar(4) : C::kPi) * delta0 / hw;
  out.sigma2_deficit = std::sqrt(Scalar(2) * C::kPi * kt / delta0) * activation +
                       Scalar(2) * activation * bessel_i0e(xi);
  out.sigma2 = out.sigma2_prefactor * (Scalar(1) - out.sigma2_deficit);
  return out;
}

template <std::floating_point Scalar>
struct ComplexConductivityT {
  Scalar sigma1_norm = 0;
  Scalar sigma2_norm = 0;
  Scalar sigma2_deficit = 0;
  Scalar sigma_n = 0;  // S/m
  Scalar temperature_k = 0;
  Scalar omega_rad = 0;
  std::uint32_t validity = kValid;

  Scalar sigma1() const { return sigma1_norm * sigma_n; }
  Scalar sigma2() const { return sigma2_norm * sigma_n; }
};

using ComplexConductivity = ComplexConductivityT<double>;

ComplexConductivity complex_conductivity(const MaterialParams& params, double t, double omega,
                                         Sigma2Mode mode = Sigma2Mode::kClosedForm);

}  // namespace scres
