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

#include "scres/photon.hpp"

namespace scres {

namespace {

double hbar_omega_squared(double f_hz) {
  const double omega = angular_frequency(f_hz);
  return Const::kHbarJS * omega * omega;
}

double loss_fraction(double ql, double qc_mag) {
  const auto m = scattering_mags(ql, qc_mag);
  return 1.0 - m.s21 * m.s21 - m.s11 * m.s11;
}

}  // namespace

ScatteringMags scattering_mags(double ql, double qc_mag) {
  if (!(ql > 0) || !(qc_mag > 0)) throw DomainError("scattering_mags: Ql and |Qc| must be positive");
  const double x = ql / qc_mag;
  return {(1.0 - x) * (1.0 - x), x * x};
}

double power_loss(double p_in_w, double s21_mag, double s11_mag) {
  if (!(p_in_w >= 0)) throw DomainError("power_loss: input power must be non-negative");
  const double reflected_and_transmitted = s21_mag * s21_mag + s11_mag * s11_mag;
  if (reflected_and_transmitted > 1.0) {
    throw ConsistencyError("power_loss: |S21|^2 + |S11|^2 exceeds 1, outside the validity of the scattering formulas");
  }
  return p_in_w * (1.0 - reflected_and_transmitted);
}

double photon_number(double qi, double p_loss_w, double f_hz) {
  if (!(qi > 0)) throw DomainError("photon_number: Qi must be positive");
  if (!(f_hz > 0)) throw DomainError("photon_number: frequency must be positive");
  return qi * p_loss_w / hbar_omega_squared(f_hz);
}

double power_for_photons(double n_target, double qi, double ql, double qc_mag, double f_hz) {
  if (!(n_target > 0) || !(qi > 0) || !(f_hz > 0)) throw DomainError("power_for_photons: inputs must be positive");
  const double fraction = loss_fraction(ql, qc_mag);
  if (!(fraction > 0)) throw ConsistencyError("power_for_photons: no power is dissipated at these Ql, |Qc|");
  const double p_loss = n_target * hbar_omega_squared(f_hz) / qi;
  return watts_to_dbm(p_loss / fraction);
}

PowerBudget power_budget(double p_vna_dbm, double p_att_db, const QualityFactors& q, double f_hz) {
  PowerBudget b;
  b.p_vna_dbm = p_vna_dbm;
  b.p_att_db = p_att_db;
  b.p_in_dbm = p_vna_dbm + p_att_db;
  const auto mags = scattering_mags(q.ql, q.qc_mag);
  b.s21_mag = mags.s21;
  b.s11_mag = mags.s11;
  b.p_loss_w = power_loss(dbm_to_watts(b.p_in_dbm), mags.s21, mags.s11);
  b.n_ph = photon_number(q.qi, b.p_loss_w, f_hz);

  const double x = q.ql / q.qc_mag;
  const double fraction = loss_fraction(q.ql, q.qc_mag);
  const double dfraction_dx = 4.0 * std::pow(1.0 - x, 3) - 4.0 * x * x * x;
  const double dn_dqi = b.n_ph / q.qi;
  const double dn_dx = fraction > 0 ? b.n_ph / fraction * dfraction_dx : 0.0;
  const double dn_dql = dn_dx / q.qc_mag;
  const double dn_dqc = -dn_dx * q.ql / (q.qc_mag * q.qc_mag);
  b.n_ph_stderr = std::sqrt(std::pow(dn_dqi * q.qi_stderr, 2) + std::pow(dn_dql * q.ql_stderr, 2) +
                            std::pow(dn_dqc * q.qc_stderr, 2));
  return b;
}

}  // namespace scres
