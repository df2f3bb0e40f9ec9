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

// Notch-type (side-coupled) resonator: S21 model, environment calibration,
// circle and phase pre-fits, joint refinement and a synthetic trace generator.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scres/levenberg_marquardt.hpp"

namespace scres {

using Complex = std::complex<double>;

struct S21Trace {
  Eigen::VectorXd freq_hz;
  Eigen::VectorXcd s21;  // linear, not dB
  std::optional<double> temperature_k;
  std::optional<double> power_dbm;
  std::string source;  // file name or generator tag
  std::string digest;  // SHA-256 of the originating file, when there is one

  Eigen::Index size() const { return freq_hz.size(); }
  /// Strictly ascending frequencies, >= 2 points, finite samples.
  void validate() const;
};

struct NotchParams {
  double fr_hz = 0.0;
  double ql = 0.0;
  double qc_mag = 0.0;
  double phi_rad = 0.0;
  double amp = 1.0;
  double phase0_rad = 0.0;
  double tau_s = 0.0;

  static constexpr int kCount = 7;
  std::array<double, kCount> as_array() const { return {fr_hz, ql, qc_mag, phi_rad, amp, phase0_rad, tau_s}; }
  static NotchParams from_array(const std::array<double, kCount>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
  /// 1/Qi = 1/Ql - cos(phi)/|Qc|; may be non-positive for unphysical sets.
  double internal_q() const;
  void validate() const;
};

/// Loaded Q from internal and coupling quality factors.
double loaded_q(double qi, double qc_mag, double phi_rad);

Complex model_s21(const NotchParams& p, double f_hz);
Eigen::VectorXcd model_s21(const NotchParams& p, const Eigen::VectorXd& f_hz);

struct DelayEstimate {
  double tau_s = 0.0;
  double stderr_s = 0.0;
};

/// Cable delay from a least-squares line through the unwrapped phase of the
/// outer wings (wing_fraction of the points, split evenly between both ends),
/// with the leading resonance tail 1/(f - f_dip) as an extra regressor. The
/// slope estimate is then polished by minimising the circle-fit residual of
/// the delay-corrected trace. stderr_s is the wing-fit standard error.
DelayEstimate estimate_delay(const S21Trace& trace, double wing_fraction = 0.2);

struct CircleFit {
  Complex center;
  double radius = 0.0;
  double rms_residual = 0.0;
};

/// Algebraic circle fit (Taubin).
CircleFit circle_fit(const Eigen::VectorXcd& points);

struct PhaseFit {
  double fr_hz = 0.0;
  double ql = 0.0;
  double theta0 = 0.0;
  double rms_residual = 0.0;
};

/// theta(f) = theta0 + 2 atan(2 Ql (1 - f/fr)) fitted to the angle of the
/// points about `center`. The trace must already be delay corrected.
PhaseFit phase_fit(const S21Trace& trace, Complex center, const LmOptions& options = {});

struct FitOptions {
  LmOptions lm;
  double wing_fraction = 0.2;
};

struct NotchFitResult {
  NotchParams params;
  NotchParams std_errors;  // 1-sigma, same layout as params
  double qi = 0.0;
  double qi_stderr = 0.0;
  double rms_residual = 0.0;  // sqrt(mean |r|^2) / amp
  Eigen::Index n_points = 0;
  int iterations = 0;
  bool converged = false;
  bool nonphysical = false;  // Qi <= 0
};

NotchFitResult fit_notch(const S21Trace& trace, const FitOptions& options = {});

/// Model plus independent N(0, sigma^2) noise on each quadrature.
S21Trace synth_trace(const NotchParams& p, const Eigen::VectorXd& grid, double noise_sigma, std::uint64_t seed);

/// Grid of `points` samples spanning `linewidths` (fr / Ql) centred on fr.
Eigen::VectorXd linewidth_grid(const NotchParams& p, double linewidths = 10.0, Eigen::Index points = 2001,
                               double offset_fraction = 0.0);

struct FrequencyPoint {
  double temperature_k = 0.0;
  double value_hz = 0.0;
};

/// Delta f(T) = fr(T) - fr(t_ref); t_ref is matched to the nearest sample
/// within `tolerance_k`.
std::vector<FrequencyPoint> resonance_shift(const std::vector<FrequencyPoint>& fr_series, double t_ref,
                                            double tolerance_k = 0.05);

namespace detail {

// Stacked real/imaginary residual of the joint model and its analytic
// Jacobian. x = fr, Ql, |Qc|, phi, amp, phase at f_ref, tau.
Eigen::VectorXd notch_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& f, const Eigen::VectorXcd& data,
                               double f_ref);
Eigen::MatrixXd notch_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& f, double f_ref);

}  // namespace detail

}  // namespace scres
