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

// Loss budget of a resonator: TLS channel, thermal quasiparticle channel,
// their composition, and the quasiparticle densities implied by each.

#include <cmath>
#include <optional>

#include "scres/constants.hpp"
#include "scres/error.hpp"
#include "scres/impedance.hpp"
#include "scres/mattis_bardeen.hpp"

namespace scres {

/// Standard TLS model 1/Q = F delta0 tanh(hbar omega / 2 kB T) / (1 + n/nc)^beta.
struct TlsParams {
  double f_delta0 = 0.0;
  double n_c = 1.0;
  double beta_exp = 0.5;
  double omega_rad = 0.0;

  void validate() const;
};

/// TLS loss tangent 1/Q_TLS.
double tls_loss(double t, double n_photon, const TlsParams& p);
double q_tls(double t, double n_photon, const TlsParams& p);

/// 1 / (1/q_tls + delta_qp).
inline double qi_theory(double q_tls, double delta_qp) {
  if (!(q_tls > 0)) throw DomainError("qi_theory: q_tls must be positive");
  if (!(delta_qp >= 0)) throw DomainError("qi_theory: delta_qp must be non-negative");
  return 1.0 / (1.0 / q_tls + delta_qp);
}

struct MeasuredLoss {
  double value = 0.0;
  bool negative_loss = false;
};

/// 1/qi_measured - 1/q_tls, sign retained.
MeasuredLoss delta_qp_measured(double qi_measured, double q_tls);

/// n_qp = delta N0 Delta(T) (pi / alpha) sqrt(hbar omega / 2 Delta(T)), in m^-3.
double nqp_from_loss(double delta_qp, double t, const MaterialParams& params, double omega,
                     GapModel gap_model = GapModel::kBcsInterpolation);

inline constexpr double kCubicMetresPerCubicMicron = 1e-18;

struct ModelSettings {
  Sigma2Mode sigma2_mode = Sigma2Mode::kClosedForm;
  GapModel gap_model = GapModel::kBcsInterpolation;
  ImpedanceModel impedance_model = ImpedanceModel::kBulk;
  double n_photon = 1.0;
};

/// Everything the forward model predicts at one temperature.
struct TheoryPoint {
  double temperature_k = 0.0;
  ComplexConductivity sigma;
  SurfaceImpedance zs;
  double lg_h_per_m = 0.0;
  double geom_factor = 0.0;
  double alpha_derived = 0.0;
  double line_inductance = 0.0;  // H/m
  double q_tls = 0.0;
  double delta_qp_theory = 0.0;
  double qi_theory = 0.0;
};

TheoryPoint theory_point(double t, double omega, const MaterialParams& material, const CpwGeometry& geom,
                         const TlsParams& tls, const ModelSettings& settings);

struct LossBudget {
  double temperature_k = 0.0;
  double q_tls = 0.0;
  double delta_qp_theory = 0.0;
  double q_qp_theory = 0.0;
  double qi_theory = 0.0;
  double qi_measured = 0.0;
  double delta_qp_measured = 0.0;
  bool negative_loss = false;
  std::optional<double> nqp_measured_per_um3;  // absent when the measured loss is negative
  double nqp_theory_per_um3 = 0.0;
};

LossBudget assemble_budget(const TheoryPoint& theory, double qi_measured, double omega,
                           const MaterialParams& material, const ModelSettings& settings);

struct ExcessLoss {
  double value = 0.0;       // max(0, raw)
  double raw = 0.0;         // 1/qi_measured - 1/qi_theory
  bool negative = false;
  bool non_equilibrium = false;  // positive excess below Tc/10
};

ExcessLoss excess_qp_loss(const LossBudget& budget, double tc_kelvin);

}  // namespace scres
