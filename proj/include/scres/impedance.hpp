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

// Film surface impedance, CPW geometric inductance and the thermal
// quasiparticle loss tangent that follows from them.

#include <cmath>
#include <complex>
#include <concepts>
#include <optional>
#include <string_view>

#include "scres/constants.hpp"
#include "scres/error.hpp"
#include "scres/mattis_bardeen.hpp"
#include "scres/special_functions.hpp"

namespace scres {

struct CpwGeometry {
  double center_width_m = 0.0;
  double gap_m = 0.0;
  double thickness_m = 0.0;
  double substrate_eps_r = 1.0;
  std::optional<double> length_m;
  // Converts per-square film impedance to per-length line impedance (1/m).
  // Defaults to 1 / center_width_m.
  std::optional<double> geom_factor_per_m;

  void validate() const;
  double modulus() const { return center_width_m / (center_width_m + 2.0 * gap_m); }
  double geom_factor() const { return geom_factor_per_m ? *geom_factor_per_m : 1.0 / center_width_m; }
};

/// Lg = (mu0/4) K(k') / K(k), k = w / (w + 2 s), in H/m.
template <std::floating_point Scalar>
Scalar geometric_inductance(Scalar center_width, Scalar gap) {
  if (!(center_width > 0) || !(gap > 0)) throw DomainError("geometric_inductance: width and gap must be positive");
  const Scalar k = center_width / (center_width + Scalar(2) * gap);
  const Scalar k_prime = std::sqrt((Scalar(1) - k) * (Scalar(1) + k));
  return PhysicalConstants<Scalar>::kMu0 / Scalar(4) * elliptic_k(k_prime) / elliptic_k(k);
}

double geometric_inductance(const CpwGeometry& geom);

/// kBulk evaluates the local surface impedance sqrt(j mu0 omega / sigma).
/// kThinFilm multiplies it by coth(d sqrt(j mu0 omega sigma)).
enum class ImpedanceModel { kBulk, kThinFilm };

template <std::floating_point Scalar>
struct SurfaceImpedanceT {
  Scalar rs_ohm = 0;    // per square
  Scalar ls_henry = 0;  // per square
  Scalar omega_rad = 0;

  std::complex<Scalar> zs() const { return {rs_ohm, omega_rad * ls_henry}; }
};

using SurfaceImpedance = SurfaceImpedanceT<double>;

template <std::floating_point Scalar>
SurfaceImpedanceT<Scalar> surface_impedance(Scalar sigma1, Scalar sigma2, Scalar omega, Scalar thickness,
                                            ImpedanceModel model = ImpedanceModel::kBulk) {
  using Complex = std::complex<Scalar>;
  if (sigma1 == Scalar(0) && sigma2 == Scalar(0)) throw DomainError("surface_impedance: zero conductivity");
  if (!(omega > 0)) throw DomainError("surface_impedance: omega must be positive");
  const Complex sigma(sigma1, -sigma2);
  const Complex j_mu0_omega(Scalar(0), PhysicalConstants<Scalar>::kMu0 * omega);
  Complex zs = std::sqrt(j_mu0_omega / sigma);
  if (model == ImpedanceModel::kThinFilm) {
    if (!(thickness > 0)) throw DomainError("surface_impedance: thin-film model needs a positive thickness");
    zs /= std::tanh(std::sqrt(j_mu0_omega * sigma) * thickness);
  }
  if (zs.real() < Scalar(0)) zs = -zs;
  return {zs.real(), zs.imag() / omega, omega};
}

SurfaceImpedance surface_impedance(const ComplexConductivity& sigma, double thickness,
                                   ImpedanceModel model = ImpedanceModel::kBulk);

/// delta = Rs g / (omega (Ls g + Lg)). With g = 1 this is the per-square form.
template <std::floating_point Scalar>
Scalar qp_loss_theory(const SurfaceImpedanceT<Scalar>& zs, Scalar lg, Scalar geom_factor) {
  if (!(lg > 0)) throw DomainError("qp_loss_theory: Lg must be positive");
  if (!(geom_factor > 0)) throw DomainError("qp_loss_theory: geometry factor must be positive");
  const Scalar denominator = zs.omega_rad * (zs.ls_henry * geom_factor + lg);
  if (!(denominator > 0)) throw NumericalError("qp_loss_theory: non-positive inductive denominator");
  return zs.rs_ohm * geom_factor / denominator;
}

/// alpha = Ls g / (Ls g + Lg).
template <std::floating_point Scalar>
Scalar kinetic_inductance_fraction(const SurfaceImpedanceT<Scalar>& zs, Scalar lg, Scalar geom_factor) {
  const Scalar kinetic = zs.ls_henry * geom_factor;
  return kinetic / (kinetic + lg);
}

/// Total series inductance per unit length, Lg + g Ls.
template <std::floating_point Scalar>
Scalar line_inductance(const SurfaceImpedanceT<Scalar>& zs, Scalar lg, Scalar geom_factor) {
  return lg + zs.ls_henry * geom_factor;
}

ImpedanceModel parse_impedance_model(bool thin_film_correction);

}  // namespace scres
