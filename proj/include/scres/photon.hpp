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

// Drive-power bookkeeping and the average intra-resonator photon number.

#include <cmath>

#include "scres/constants.hpp"
#include "scres/error.hpp"

namespace scres {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

struct ScatteringMags {
  double s21 = 0.0;
  double s11 = 0.0;
};

/// |S21| = (|Qc| - Ql)^2 / |Qc|^2, |S11| = Ql^2 / |Qc|^2.
ScatteringMags scattering_mags(double ql, double qc_mag);

/// P_in (1 - |S21|^2 - |S11|^2). Throws ConsistencyError when the magnitudes
/// claim more than the incident power.
double power_loss(double p_in_w, double s21_mag, double s11_mag);

/// <n> = Qi P_loss / (hbar omega^2).
double photon_number(double qi, double p_loss_w, double f_hz);

/// Input power (dBm) at which the chain above yields n_target photons.
double power_for_photons(double n_target, double qi, double ql, double qc_mag, double f_hz);

struct PowerBudget {
  double p_vna_dbm = 0.0;
  double p_att_db = 0.0;
  double p_in_dbm = 0.0;
  double p_loss_w = 0.0;
  double s21_mag = 0.0;
  double s11_mag = 0.0;
  double n_ph = 0.0;
  double n_ph_stderr = 0.0;  // linear propagation of independent Qi, Ql, |Qc| errors
};

struct QualityFactors {
  double qi = 0.0;
  double ql = 0.0;
  double qc_mag = 0.0;
  double qi_stderr = 0.0;
  double ql_stderr = 0.0;
  double qc_stderr = 0.0;
};

PowerBudget power_budget(double p_vna_dbm, double p_att_db, const QualityFactors& q, double f_hz);

}  // namespace scres
