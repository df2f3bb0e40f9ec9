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

#include "scres/loss_model.hpp"

#include <limits>

namespace scres {

void TlsParams::validate() const {
  if (!(f_delta0 > 0)) throw DomainError("tls: f_delta0 must be positive");
  if (!(n_c > 0)) throw DomainError("tls: n_c must be positive");
  if (!(beta_exp > 0 && beta_exp <= 1)) throw DomainError("tls: beta_exp must lie in (0, 1]");
  if (!(omega_rad > 0)) throw DomainError("tls: omega must be positive");
}

double tls_loss(double t, double n_photon, const TlsParams& p) {
  p.validate();
  if (!(t > 0)) throw DomainError("q_tls: T must be positive");
  if (!(n_photon >= 0)) throw DomainError("q_tls: photon number must be non-negative");
  const double x = Const::kHbarEvS * p.omega_rad / (2.0 * Const::kBoltzmannEv * t);
  return p.f_delta0 * std::tanh(x) / std::pow(1.0 + n_photon / p.n_c, p.beta_exp);
}

double q_tls(double t, double n_photon, const TlsParams& p) {
  const double loss = tls_loss(t, n_photon, p);
  return loss > 0 ? 1.0 / loss : std::numeric_limits<double>::infinity();
}

MeasuredLoss delta_qp_measured(double qi_measured, double q_tls) {
  if (!(qi_measured > 0)) throw DomainError("delta_qp_measured: qi_measured must be positive");
  if (!(q_tls > 0)) throw DomainError("delta_qp_measured: q_tls must be positive");
  const double value = 1.0 / qi_measured - 1.0 / q_tls;
  return {value, value < 0};
}

double nqp_from_loss(double delta_qp, double t, const MaterialParams& params, double omega, GapModel gap_model) {
  if (!(delta_qp >= 0)) throw DomainError("nqp_from_loss: loss must be non-negative");
  if (!(t > 0)) throw DomainError("nqp_from_loss: T must be positive");
  const double alpha = params.alpha_or_throw();
  const double gap = gap_at_temperature(params.delta0(), t, params.tc_kelvin, gap_model);
  const double hw = Const::kHbarEvS * omega;
  return delta_qp * params.n0_states * gap * (Const::kPi / alpha) * std::sqrt(hw / (2.0 * gap));
}

TheoryPoint theory_point(double t, double omega, const MaterialParams& material, const CpwGeometry& geom,
                         const TlsParams& tls, const ModelSettings& settings) {
  TheoryPoint out;
  out.temperature_k = t;
  out.sigma = complex_conductivity(material, t, omega, settings.sigma2_mode);
  out.zs = surface_impedance(out.sigma, material.thickness_m, settings.impedance_model);
  out.lg_h_per_m = geometric_inductance(geom);
  out.geom_factor = geom.geom_factor();
  out.alpha_derived = kinetic_inductance_fraction(out.zs, out.lg_h_per_m, out.geom_factor);
  out.line_inductance = line_inductance(out.zs, out.lg_h_per_m, out.geom_factor);
  out.q_tls = q_tls(t, settings.n_photon, tls);
  out.delta_qp_theory = qp_loss_theory(out.zs, out.lg_h_per_m, out.geom_factor);
  out.qi_theory = qi_theory(out.q_tls, out.delta_qp_theory);
  return out;
}

LossBudget assemble_budget(const TheoryPoint& theory, double qi_measured, double omega,
                           const MaterialParams& material, const ModelSettings& settings) {
  LossBudget b;
  b.temperature_k = theory.temperature_k;
  b.q_tls = theory.q_tls;
  b.delta_qp_theory = theory.delta_qp_theory;
  b.q_qp_theory = theory.delta_qp_theory > 0 ? 1.0 / theory.delta_qp_theory
                                             : std::numeric_limits<double>::infinity();
  b.qi_theory = qi_theory(b.q_tls, b.delta_qp_theory);
  b.qi_measured = qi_measured;
  const auto measured = delta_qp_measured(qi_measured, b.q_tls);
  b.delta_qp_measured = measured.value;
  b.negative_loss = measured.negative_loss;
  if (!measured.negative_loss) {
    b.nqp_measured_per_um3 =
        nqp_from_loss(measured.value, b.temperature_k, material, omega, settings.gap_model) *
        kCubicMetresPerCubicMicron;
  }
  b.nqp_theory_per_um3 =
      nqp_from_loss(b.delta_qp_theory, b.temperature_k, material, omega, settings.gap_model) *
      kCubicMetresPerCubicMicron;
  return b;
}

ExcessLoss excess_qp_loss(const LossBudget& budget, double tc_kelvin) {
  ExcessLoss out;
  out.raw = 1.0 / budget.qi_measured - 1.0 / budget.qi_theory;
  out.negative = out.raw < 0;
  out.value = out.negative ? 0.0 : out.raw;
  out.non_equilibrium = out.raw > 0 && budget.temperature_k < tc_kelvin / 10.0;
  return out;
}

}  // namespace scres
