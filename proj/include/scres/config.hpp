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

// Analysis configuration: one JSON document with the sections material,
// geometry, tls, fit, run and synth. Unknown keys are rejected.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scres/impedance.hpp"
#include "scres/loss_model.hpp"
#include "scres/mattis_bardeen.hpp"
#include "scres/notch.hpp"

namespace scres {

struct TlsConfig {
  double f_delta0 = 0.0;
  double n_c = 1.0;
  double beta_exp = 0.5;
};

struct RunConfig {
  double resonance_hz = 5.95e9;
  Sigma2Mode sigma2_mode = Sigma2Mode::kClosedForm;
  GapModel gap_model = GapModel::kBcsInterpolation;
  bool thin_film_correction = false;
  double n_photon = 1.0;
  double red_shift_sigma = 3.0;
  double power_tolerance_db = 0.5;
  double xrd_wavelength_angstrom = 1.5406;
  int threads = 0;  // 0 = hardware concurrency
};

/// Forward-model sweep generator settings.
struct SynthConfig {
  std::vector<double> temperatures_k;
  double qc_mag = 1e5;
  double phi_rad = 0.0;
  double amp = 1.0;
  double phase0_rad = 0.0;
  double tau_s = 0.0;
  double noise_sigma = 0.0;
  int points = 2001;
  double span_linewidths = 10.0;
  // Fixed sweep window [lo, hi] as offsets from run.resonance_hz; when absent each
  // trace spans span_linewidths around its own resonance.
  std::optional<std::array<double, 2>> window_offset_hz;
  double excess_loss = 0.0;  // temperature-independent extra loss tangent
  double power_dbm = -135.0;
};

struct Config {
  MaterialParams material;
  CpwGeometry geometry;
  TlsConfig tls;
  FitOptions fit;
  RunConfig run;
  SynthConfig synth;

  ModelSettings model_settings() const;
  TlsParams tls_params() const;
  void validate() const;
};

Config config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const Config& c);
Config load_config(const std::filesystem::path& path);

/// Defaults used when no configuration file is given: a 100 nm film with
/// Tc = 10.7 K and TLS and geometry factors calibrated so Qi runs from ~1e5
/// at 0.12 K to ~7.4e3 at 2.9 K.
Config default_config();

}  // namespace scres
