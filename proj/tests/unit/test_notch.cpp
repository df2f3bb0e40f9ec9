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


#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "scres/error.hpp"
#include "scres/notch.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using scres::Complex;
using scres::NotchParams;

namespace {

constexpr double kPi = std::numbers::pi;

NotchParams reference_params() {
  const double qc = 1e5, phi = 0.1;
  return {5.95e9, scres::loaded_q(2.571e5, qc, phi), qc, phi, 0.9, 0.4, 40e-9};
}

// Calibrated-plane circle: centre 1 - d e^{j phi} / 2, radius d / 2.
Complex calibrated_centre(const NotchParams& p) {
  return 1.0 - (p.ql / p.qc_mag) * std::exp(Complex(0, p.phi_rad)) / 2.0;
}

void check_close(double actual, double expected, double rel, double abs_floor) {
  CHECK(std::abs(actual - expected) <= std::max(rel * std::abs(expected), abs_floor));
}

}  // namespace

TEST_CASE("model limits") {
  NotchParams p{5e9, 1e4, 2e4, 0.2, 1.0, 0.0, 0.0};
  const Complex on = scres::model_s21(p, p.fr_hz);
  const Complex expected = 1.0 - 0.5 * std::exp(Complex(0, 0.2));
  CHECK(std::abs(on - expected) < 1e-15);

  p.amp = 0.7;
  p.phase0_rad = 0.5;
  p.tau_s = 30e-9;
  const double far = p.fr_hz * 1.5;
  const Complex baseline = 0.7 * std::exp(Complex(0, 0.5 - 2 * kPi * far * 30e-9));
  CHECK(std::abs(scres::model_s21(p, far) - baseline) < 2e-4);
}

TEST_CASE("sweep traces a circle of diameter Ql/|Qc| in the calibrated plane") {
  const NotchParams p{5e9, 1e4, 2.5e4, -0.4, 1.0, 0.0, 0.0};
  const Eigen::VectorXcd z = scres::model_s21(p, scres::linewidth_grid(p, 20.0, 401));
  const Complex centre = calibrated_centre(p);
  for (Eigen::Index i = 0; i < z.size(); ++i) CHECK_THAT(std::abs(z[i] - centre), WithinRel(0.2, 1e-12));
}

TEST_CASE("loaded and internal Q") {
  CHECK_THAT(scres::loaded_q(1e5, 1e5, 0.0), WithinRel(5e4, 1e-15));
  const NotchParams p{5e9, scres::loaded_q(2e5, 5e4, 0.3), 5e4, 0.3, 1, 0, 0};
  CHECK_THAT(p.internal_q(), WithinRel(2e5, 1e-12));
  CHECK(p.ql <= p.internal_q());
}

TEST_CASE("cable delay estimate") {
  auto p = reference_params();
  const Eigen::VectorXd grid = scres::linewidth_grid(p, 10.0, 2001);
  const auto d = scres::estimate_delay(scres::synth_trace(p, grid, 1e-3, 11));
  CHECK_THAT(d.tau_s, WithinAbs(40e-9, 0.5e-9));
  p.tau_s = 0;
  CHECK_THAT(scres::estimate_delay(scres::synth_trace(p, grid, 1e-3, 12)).tau_s, WithinAbs(0.0, 0.5e-9));

  scres::S21Trace noise;
  noise.freq_hz = grid;
  noise.s21.resize(grid.size());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  for (Eigen::Index i = 0; i < grid.size(); ++i) noise.s21[i] = Complex(n01(rng), n01(rng));
  bool flagged = false;
  try {
    const auto e = scres::estimate_delay(noise);
    flagged = e.stderr_s > std::abs(e.tau_s);
  } catch (const scres::FitError&) {
    flagged = true;
  }
  CHECK(flagged);

  scres::S21Trace tiny;
  tiny.freq_hz = Eigen::VectorXd::LinSpaced(10, 1e9, 1.1e9);
  tiny.s21 = Eigen::VectorXcd::Ones(10);
  CHECK_THROWS_AS(scres::estimate_delay(tiny), scres::FitError);
}

TEST_CASE("algebraic circle fit") {
  Eigen::VectorXcd three(3);
  three << Complex(1, 0), Complex(0, 1), Complex(-1, 0);
  const auto exact = scres::circle_fit(three);
  CHECK(std::abs(exact.center) < 1e-14);
  CHECK_THAT(exact.radius, WithinAbs(1.0, 1e-14));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 1e-3);
  Eigen::VectorXcd noisy(2001);
  for (Eigen::Index i = 0; i < noisy.size(); ++i) {
    const double t = 2 * kPi * static_cast<double>(i) / 2001.0;
    noisy[i] = Complex(0.3, -0.2) + 0.25 * std::exp(Complex(0, t)) + Complex(noise(rng), noise(rng));
  }
  const auto fit = scres::circle_fit(noisy);
  CHECK_THAT(fit.radius, WithinAbs(0.25, 1e-3));
  CHECK(std::abs(fit.center - Complex(0.3, -0.2)) < 1e-3);
  CHECK_THAT(fit.rms_residual, WithinRel(1e-3, 0.1));

  CHECK_THROWS_AS(scres::circle_fit(Eigen::VectorXcd::Constant(5, Complex(0.5, 0.5))), scres::FitError);
  Eigen::VectorXcd line(4);
  line << Complex(0, 0), Complex(1, 1), Complex(2, 2), Complex(3, 3);
  CHECK_THROWS_AS(scres::circle_fit(line), scres::FitError);
}

TEST_CASE("phase fit") {
  NotchParams p{5.95e9, 3e4, 6e4, 0.2, 1.0, 0.0, 0.0};
  const Eigen::VectorXd grid = scres::linewidth_grid(p, 10.0, 1001);
  const auto exact = scres::phase_fit(scres::synth_trace(p, grid, 0.0, 0), calibrated_centre(p));
  CHECK_THAT(exact.fr_hz, WithinRel(p.fr_hz, 1e-9));
  CHECK_THAT(exact.ql, WithinRel(p.ql, 1e-9));

  // fr placed between two grid points
  const double step = grid[1] - grid[0];
  p.fr_hz += 0.37 * step;
  const auto off = scres::phase_fit(scres::synth_trace(p, grid, 2e-3, 9), calibrated_centre(p));
  CHECK(std::abs(off.fr_hz - p.fr_hz) < step);

  // Slowly rotating phase with no resonance
  scres::S21Trace ramp;
  ramp.freq_hz = grid;
  ramp.s21.resize(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    ramp.s21[i] = std::exp(Complex(0, 0.5 * static_cast<double>(i) / static_cast<double>(grid.size())));
  }
  CHECK_THROWS_AS(scres::phase_fit(ramp, Complex(0, 0)), scres::FitError);
}

TEST_CASE("noiseless recovery of the reference resonator") {
  const auto p = reference_params();
  const auto fit = scres::fit_notch(scres::synth_trace(p, scres::linewidth_grid(p, 10.0, 2001), 0.0, 0));
  CHECK_FALSE(fit.nonphysical);
  CHECK_THAT(fit.params.fr_hz, WithinRel(p.fr_hz, 1e-3));
  CHECK_THAT(fit.params.ql, WithinRel(p.ql, 1e-3));
  CHECK_THAT(fit.params.qc_mag, WithinRel(p.qc_mag, 1e-3));
  CHECK_THAT(fit.params.phi_rad, WithinRel(p.phi_rad, 1e-3));
  CHECK_THAT(fit.params.amp, WithinRel(p.amp, 1e-3));
  CHECK_THAT(fit.params.phase0_rad, WithinRel(p.phase0_rad, 1e-3));
  CHECK_THAT(fit.params.tau_s, WithinRel(p.tau_s, 1e-3));
  CHECK_THAT(fit.qi, WithinRel(2.571e5, 1e-3));
}

TEST_CASE("random noiseless round trips") {
  std::mt19937_64 rng(20261018);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int draws = 0, failures = 0;
  while (draws < 200) {
    NotchParams p;
    p.fr_hz = 4e9 + 4e9 * u(rng);
    p.ql = std::pow(10.0, 3 + 3 * u(rng));
    p.qc_mag = std::pow(10.0, 3 + 3 * u(rng));
    p.phi_rad = -1 + 2 * u(rng);
    p.amp = 0.1 + u(rng);
    p.phase0_rad = -kPi + 2 * kPi * u(rng);
    p.tau_s = 100e-9 * u(rng);
    if (!(p.internal_q() > 0)) continue;  // not a passive resonator
    ++draws;
    try {
      const auto fit = scres::fit_notch(scres::synth_trace(p, scres::linewidth_grid(p, 10.0, 2001), 0.0, 0));
      const auto& q = fit.params;
      const bool ok =
          std::abs(q.fr_hz / p.fr_hz - 1) < 1e-3 && std::abs(q.ql / p.ql - 1) < 1e-3 &&
          std::abs(q.qc_mag / p.qc_mag - 1) < 1e-3 && std::abs(q.phi_rad - p.phi_rad) < 1e-3 &&
          std::abs(q.amp / p.amp - 1) < 1e-3 &&
          std::abs(std::remainder(q.phase0_rad - p.phase0_rad, 2 * kPi)) < 1e-3 &&
          std::abs(q.tau_s - p.tau_s) < 1e-3 * std::max(p.tau_s, 1e-9) && q.ql <= fit.qi;
      if (!ok) {
        ++failures;
        UNSCOPED_INFO("draw " << draws << " fr " << p.fr_hz << " Ql " << p.ql << " Qc " << p.qc_mag << " phi "
                              << p.phi_rad << " tau " << p.tau_s);
      }
    } catch (const scres::Error& e) {
      ++failures;
      UNSCOPED_INFO("draw " << draws << " threw " << e.what());
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("Qi scatter under 1e-3 noise, 100 seeds") {
  const auto p = reference_params();
  const Eigen::VectorXd grid = scres::linewidth_grid(p, 10.0, 2001);
  std::vector<double> errors;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto fit = scres::fit_notch(scres::synth_trace(p, grid, 1e-3, seed));
    CHECK(fit.params.ql <= fit.qi);
    errors.push_back(std::abs(fit.qi / 2.571e5 - 1));
  }
  std::sort(errors.begin(), errors.end());
  CHECK(errors[94] < 0.05);
}

TEST_CASE("flat trace is rejected") {
  scres::S21Trace flat;
  flat.freq_hz = Eigen::VectorXd::LinSpaced(501, 5.9e9, 6.0e9);
  flat.s21 = Eigen::VectorXcd::Constant(501, Complex(0.8, 0.1));
  CHECK_THROWS_WITH(scres::fit_notch(flat), ContainsSubstring("no resonance found"));

  flat.s21 = scres::synth_trace(NotchParams{5.95e9, 1e4, 1e12, 0, 0.8, 0.1, 0}, flat.freq_hz, 1e-3, 4).s21;
  CHECK_THROWS_WITH(scres::fit_notch(flat), ContainsSubstring("no resonance found"));
}

TEST_CASE("amplitude scaling changes only amp") {
  const auto p = reference_params();
  const auto trace = scres::synth_trace(p, scres::linewidth_grid(p, 10.0, 2001), 1e-3, 21);
  auto scaled = trace;
  scaled.s21 *= 3.7;
  const auto a = scres::fit_notch(trace);
  const auto b = scres::fit_notch(scaled);
  CHECK_THAT(b.params.amp / a.params.amp, WithinRel(3.7, 1e-9));
  CHECK_THAT(b.params.fr_hz, WithinRel(a.params.fr_hz, 1e-9));
  CHECK_THAT(b.params.ql, WithinRel(a.params.ql, 1e-9));
  CHECK_THAT(b.params.qc_mag, WithinRel(a.params.qc_mag, 1e-9));
  CHECK_THAT(b.params.phi_rad, WithinRel(a.params.phi_rad, 1e-9));
  CHECK_THAT(b.qi, WithinRel(a.qi, 1e-9));
}

TEST_CASE("frequency-axis shift moves only fr") {
  auto p = reference_params();
  p.tau_s = 0;  // a delay couples the phase reference to the absolute frequency
  const Eigen::VectorXd grid = scres::linewidth_grid(p, 10.0, 2001);
  const auto trace = scres::synth_trace(p, grid, 1e-3, 31);
  auto shifted = trace;
  const double shift = 2.5e6;
  shifted.freq_hz.array() += shift;
  const auto a = scres::fit_notch(trace);
  const auto b = scres::fit_notch(shifted);
  CHECK_THAT(b.params.fr_hz - a.params.fr_hz, WithinRel(shift, 1e-3));
  CHECK_THAT(b.params.ql, WithinRel(a.params.ql * (b.params.fr_hz / a.params.fr_hz), 1e-6));
  CHECK_THAT(b.params.qc_mag, WithinRel(a.params.qc_mag * (b.params.fr_hz / a.params.fr_hz), 1e-6));
  CHECK_THAT(b.params.phi_rad, WithinAbs(a.params.phi_rad, 1e-6));
}

TEST_CASE("synthetic traces") {
  const auto p = reference_params();
  const Eigen::VectorXd grid = scres::linewidth_grid(p, 10.0, 5000);
  const auto clean = scres::synth_trace(p, grid, 0.0, 1);
  CHECK((clean.s21 - scres::model_s21(p, grid)).norm() == 0.0);
  const auto a = scres::synth_trace(p, grid, 1e-2, 42);
  const auto b = scres::synth_trace(p, grid, 1e-2, 42);
  CHECK(a.s21 == b.s21);
  CHECK(a.s21 != scres::synth_trace(p, grid, 1e-2, 43).s21);
  const Eigen::VectorXcd residual = a.s21 - clean.s21;
  const double sample_sigma = std::sqrt(residual.squaredNorm() / (2.0 * static_cast<double>(residual.size())));
  CHECK_THAT(sample_sigma, WithinRel(1e-2, 0.05));
  CHECK_THROWS_AS(scres::synth_trace(p, grid, -1.0, 0), scres::DomainError);
}

TEST_CASE("resonance shift against a reference temperature") {
  const std::vector<scres::FrequencyPoint> series{{0.12, 5.95e9}, {1.0, 5.95e9 - 10}, {2.0, 5.95e9 - 5e4}};
  const auto shift = scres::resonance_shift(series, 0.12);
  CHECK(shift[0].value_hz == 0.0);
  CHECK(shift[1].value_hz == -10.0);
  CHECK(shift[2].value_hz == -5e4);
  CHECK(scres::resonance_shift(series, 0.14)[0].value_hz == 0.0);
  CHECK_THROWS_AS(scres::resonance_shift(series, 0.5), scres::InputError);
  CHECK_THROWS_AS(scres::resonance_shift({}, 0.12), scres::InputError);
}
