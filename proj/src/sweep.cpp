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


#include "scres/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "scres/error.hpp"
#include "scres/io.hpp"

namespace scres {

namespace {

std::uint64_t trace_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 finaliser over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void analyze_entry(const S21Trace& trace, const Config& config, SweepEntry& e) {
  e.temperature_k = *trace.temperature_k;
  e.source = trace.source;
  e.power_dbm = trace.power_dbm;
  try {
    e.fit = fit_notch(trace, config.fit);
    if (e.fit.nonphysical) throw FitError("nonphysical fit (Qi <= 0)");
    const ModelSettings settings = config.model_settings();
    const double omega = angular_frequency(config.run.resonance_hz);
    const TheoryPoint tp =
        theory_point(e.temperature_k, omega, config.material, config.geometry, config.tls_params(), settings);
    e.sigma1_norm = tp.sigma.sigma1_norm;
    e.sigma2_norm = tp.sigma.sigma2_norm;
    e.sigma2_deficit = tp.sigma.sigma2_deficit;
    e.rs_ohm = tp.zs.rs_ohm;
    e.ls_henry = tp.zs.ls_henry;
    e.alpha_derived = tp.alpha_derived;
    e.budget = assemble_budget(tp, e.fit.qi, omega, config.material, settings);
    e.excess = excess_qp_loss(e.budget, config.material.tc_kelvin);
    if (trace.power_dbm) {
      const QualityFactors q{e.fit.qi,         e.fit.params.ql,         e.fit.params.qc_mag,
                             e.fit.qi_stderr,  e.fit.std_errors.ql,     e.fit.std_errors.qc_mag};
      try {
        const PowerBudget pb = power_budget(*trace.power_dbm, 0.0, q, e.fit.params.fr_hz);
        e.n_photons = pb.n_ph;
        e.n_photons_stderr = pb.n_ph_stderr;
      } catch (const Error&) {
        // outside the weak-coupling regime of the photon formula; leave absent
      }
    }
    e.ok = true;
  } catch (const std::exception& ex) {
    e.ok = false;
    e.error = ex.what();
  }
}

}  // namespace

SyntheticSweep synthesize_sweep(const Config& config, std::uint64_t seed) {
  config.validate();
  const SynthConfig& sc = config.synth;
  if (sc.temperatures_k.empty()) throw ConfigError("synth: temperatures_k is empty");
  const ModelSettings settings = config.model_settings();
  const double omega = angular_frequency(config.run.resonance_hz);
  const TlsParams tls = config.tls_params();
  const double t_ref = *std::min_element(sc.temperatures_k.begin(), sc.temperatures_k.end());
  const double l_ref =
      theory_point(t_ref, omega, config.material, config.geometry, tls, settings).line_inductance;

  SyntheticSweep out;
  for (std::size_t i = 0; i < sc.temperatures_k.size(); ++i) {
    const double t = sc.temperatures_k[i];
    const TheoryPoint tp = theory_point(t, omega, config.material, config.geometry, tls, settings);
    SynthTruth truth;
    truth.temperature_k = t;
    truth.qi_theory = tp.qi_theory;
    truth.qi = 1.0 / (1.0 / tp.qi_theory + sc.excess_loss);
    truth.line_inductance = tp.line_inductance;
    NotchParams& p = truth.params;
    p.fr_hz = config.run.resonance_hz * std::sqrt(l_ref / tp.line_inductance);
    p.qc_mag = sc.qc_mag;
    p.phi_rad = sc.phi_rad;
    p.ql = loaded_q(truth.qi, sc.qc_mag, sc.phi_rad);
    p.amp = sc.amp;
    p.phase0_rad = sc.phase0_rad;
    p.tau_s = sc.tau_s;
    Eigen::VectorXd grid;
    if (sc.window_offset_hz) {
      const double lo = config.run.resonance_hz + (*sc.window_offset_hz)[0];
      const double hi = config.run.resonance_hz + (*sc.window_offset_hz)[1];
      if (!(p.fr_hz > lo && p.fr_hz < hi)) {
        throw ConfigError("synth: resonance at " + format_double(t) + " K falls outside synth.window_offset_hz");
      }
      grid = Eigen::VectorXd::LinSpaced(sc.points, lo, hi);
    } else {
      grid = linewidth_grid(p, sc.span_linewidths, sc.points, 0.37);
    }
    S21Trace trace = synth_trace(p, grid, sc.noise_sigma, trace_seed(seed, i));
    trace.temperature_k = t;
    trace.power_dbm = sc.power_dbm;
    char name[64];
    std::snprintf(name, sizeof name, "synth_%02zu_T%.4fK.csv", i, t);
    trace.source = name;
    out.traces.push_back(std::move(trace));
    out.truth.push_back(truth);
  }
  return out;
}

AnalysisReport sweep_analyze(const SweepDataset& dataset) {
  const Config& config = dataset.config;
  config.validate();
  try {
    config.material.alpha_or_throw();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (dataset.traces.size() < 2) throw InputError("sweep: need at least 2 traces");

  std::vector<const S21Trace*> traces;
  for (const auto& t : dataset.traces) {
    if (!t.temperature_k) throw InputError("sweep: trace " + t.source + " has no temperature tag");
    traces.push_back(&t);
  }
  std::sort(traces.begin(), traces.end(), [](const S21Trace* a, const S21Trace* b) {
    return *a->temperature_k < *b->temperature_k;
  });
  for (std::size_t i = 1; i < traces.size(); ++i) {
    if (*traces[i]->temperature_k == *traces[i - 1]->temperature_k) {
      throw InputError("sweep: duplicate temperature " + format_double(*traces[i]->temperature_k) + " K (" +
                       traces[i - 1]->source + ", " + traces[i]->source + ")");
    }
  }
  double p_lo = INFINITY, p_hi = -INFINITY;
  for (const auto* t : traces) {
    if (!t->power_dbm) continue;
    p_lo = std::min(p_lo, *t->power_dbm);
    p_hi = std::max(p_hi, *t->power_dbm);
  }
  if (p_hi - p_lo > config.run.power_tolerance_db) {
    throw InputError("sweep: input powers span " + format_double(p_hi - p_lo) + " dB, more than " +
                     format_double(config.run.power_tolerance_db) + " dB");
  }

  AnalysisReport report;
  const std::size_t n = traces.size();
  report.per_temperature.resize(n);
  std::size_t workers = config.run.threads > 0 ? static_cast<std::size_t>(config.run.threads)
                                               : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) analyze_entry(*traces[i], config, report.per_temperature[i]);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < n; ++i) {
    SweepEntry& e = report.per_temperature[i];
    e.digest = traces[i]->digest.empty() ? sha256_hex(format_s21_csv(*traces[i])) : traces[i]->digest;
    report.provenance.inputs.push_back({e.source, e.digest});
  }
  report.provenance.config_sha256 = sha256_hex(config_to_json(config).dump());

  SweepDerived& d = report.derived;
  d.red_shift_sigma = config.run.red_shift_sigma;
  const SweepEntry* ref = nullptr;
  std::vector<const SweepEntry*> ok;
  for (auto& e : report.per_temperature) {
    if (!e.ok) {
      ++d.failed;
      report.warnings.push_back("fit failed at T = " + format_double(e.temperature_k) + " K (" + e.source +
                                "): " + e.error);
      continue;
    }
    ok.push_back(&e);
    if (!ref) ref = &e;
  }
  if (ok.empty()) throw FitError("sweep: every trace failed to fit");
  d.reference_temperature_k = ref->temperature_k;

  std::vector<double> plateau;
  const SweepEntry* best = ok.front();
  for (auto& e : report.per_temperature) {
    if (!e.ok) continue;
    e.delta_f_hz = e.fit.params.fr_hz - ref->fit.params.fr_hz;
    e.delta_f_stderr_hz = &e == ref ? 0.0 : std::hypot(e.fit.std_errors.fr_hz, ref->fit.std_errors.fr_hz);
    if (&e != ref && !d.red_shift_onset_k && e.delta_f_hz < -d.red_shift_sigma * e.delta_f_stderr_hz) {
      d.red_shift_onset_k = e.temperature_k;
    }
    if (e.budget.negative_loss) ++d.negative_loss;
    if (e.excess.value > 0) ++d.excess_positive;
    if (e.excess.non_equilibrium) ++d.non_equilibrium;
    if (e.temperature_k < config.material.tc_kelvin / 10.0 && e.budget.nqp_measured_per_um3) {
      plateau.push_back(*e.budget.nqp_measured_per_um3);
    }
    if (e.fit.qi > best->fit.qi) best = &e;
  }
  if (!plateau.empty()) d.nqp_plateau_per_um3 = median(plateau);
  d.nqp_plateau_points = static_cast<int>(plateau.size());
  d.qi_max_temperature_k = best->temperature_k;
  d.qi_interior_maximum = best != ok.front() && best != ok.back();
  return report;
}

}  // namespace scres
