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

// Temperature-sweep orchestration: forward-model synthesis and analysis.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scres/config.hpp"
#include "scres/loss_model.hpp"
#include "scres/notch.hpp"
#include "scres/photon.hpp"

namespace scres {

inline constexpr const char* kToolVersion = SCRES_VERSION;
inline constexpr int kCsvSchemaVersion = 1;

struct SweepDataset {
  std::vector<S21Trace> traces;
  Config config;
};

/// One temperature of a synthetic sweep, as injected.
struct SynthTruth {
  double temperature_k = 0.0;
  NotchParams params;
  double qi = 0.0;
  double qi_theory = 0.0;  // without the excess channel
  double line_inductance = 0.0;
};

struct SyntheticSweep {
  std::vector<S21Trace> traces;
  std::vector<SynthTruth> truth;
};

/// Forward chain at config.synth.temperatures_k: fr(T) = f_ref sqrt(L(T_ref) / L(T)) with
/// T_ref the coldest point, and 1/Qi = 1/Q_TLS + delta_qp + excess_loss.
SyntheticSweep synthesize_sweep(const Config& config, std::uint64_t seed);

struct SweepEntry {
  double temperature_k = 0.0;
  std::string source;
  std::string digest;
  std::optional<double> power_dbm;
  bool ok = false;
  std::string error;  // set when !ok
  NotchFitResult fit;
  double delta_f_hz = 0.0;
  double delta_f_stderr_hz = 0.0;
  // Theory side.
  double sigma1_norm = 0.0;
  double sigma2_norm = 0.0;
  double sigma2_deficit = 0.0;
  double rs_ohm = 0.0;
  double ls_henry = 0.0;
  double alpha_derived = 0.0;
  LossBudget budget;
  ExcessLoss excess;
  std::optional<double> n_photons;
  std::optional<double> n_photons_stderr;
};

struct SweepDerived {
  std::optional<double> reference_temperature_k;
  std::optional<double> nqp_plateau_per_um3;
  int nqp_plateau_points = 0;
  std::optional<double> red_shift_onset_k;
  double red_shift_sigma = 3.0;
  std::optional<double> qi_max_temperature_k;
  bool qi_interior_maximum = false;
  int failed = 0;
  int negative_loss = 0;
  int excess_positive = 0;
  int non_equilibrium = 0;
};

struct InputDigest {
  std::string source;
  std::string sha256;
};

struct Provenance {
  std::string config_sha256;
  std::vector<InputDigest> inputs;
  std::string tool_version = kToolVersion;
  int csv_schema_version = kCsvSchemaVersion;
};

struct AnalysisReport {
  std::vector<SweepEntry> per_temperature;
  SweepDerived derived;
  Provenance provenance;
  std::vector<std::string> warnings;
};

/// Per-trace fits run in parallel; the merge is in temperature order.
AnalysisReport sweep_analyze(const SweepDataset& dataset);

}  // namespace scres
