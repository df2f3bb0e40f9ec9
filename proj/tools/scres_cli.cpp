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


// scres command-line front end.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scres/config.hpp"
#include "scres/dc.hpp"
#include "scres/error.hpp"
#include "scres/io.hpp"
#include "scres/loss_model.hpp"
#include "scres/photon.hpp"
#include "scres/report.hpp"
#include "scres/sweep.hpp"
#include "scres/xrd.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Globals {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  std::string format = "json";
};

scres::Config load(const Globals& g) {
  return g.config_path.empty() ? scres::default_config() : scres::load_config(g.config_path);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

// A flat object becomes a one-row CSV; an array of flat objects becomes a table.
std::string to_csv(const ordered_json& j) {
  const auto row_of = [](const ordered_json& obj) {
    std::string row;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it != obj.begin()) row += ',';
      if (it->is_number_float()) row += scres::format_double(it->get<double>());
      else if (it->is_string()) row += it->get<std::string>();
      else if (!it->is_null()) row += it->dump();
    }
    return row + "\n";
  };
  const ordered_json& first = j.is_array() ? j.at(0) : j;
  std::string out;
  for (auto it = first.begin(); it != first.end(); ++it) {
    if (it != first.begin()) out += ',';
    out += it.key();
  }
  out += "\n";
  if (j.is_array()) {
    for (const auto& row : j) out += row_of(row);
  } else {
    out += row_of(j);
  }
  return out;
}

// Writes to <out>/<stem>.<ext> when --out is given, else stdout.
void emit(const Globals& g, const ordered_json& j, const std::string& stem) {
  const bool csv = g.format == "csv";
  const std::string text = csv ? to_csv(j) : j.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(g.out);
  const fs::path path = fs::path(g.out) / (stem + (csv ? ".csv" : ".json"));
  scres::write_file(path, text);
  std::cerr << "wrote " << path.string() << "\n";
}

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

// ---- subcommands ----------------------------------------------------------

struct MbArgs {
  double t_min = 0.1;
  double t_max = 3.0;
  int points = 30;
  std::optional<double> freq_hz;
};

void run_mb(const Globals& g, const MbArgs& a) {
  scres::Config c = load(g);
  if (a.freq_hz) c.run.resonance_hz = *a.freq_hz;
  if (!(a.t_min > 0 && a.t_max > a.t_min && a.points >= 2)) throw scres::InputError("mb: need 0 < t-min < t-max, points >= 2");
  const double omega = scres::angular_frequency(c.run.resonance_hz);
  const scres::ModelSettings settings = c.model_settings();
  const bool have_tls = c.tls.f_delta0 > 0;
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < a.points; ++i) {
    const double t = a.t_min + (a.t_max - a.t_min) * i / (a.points - 1);
    const scres::ComplexConductivity s = scres::complex_conductivity(c.material, t, omega, settings.sigma2_mode);
    const scres::SurfaceImpedance zs = scres::surface_impedance(s, c.material.thickness_m, settings.impedance_model);
    ordered_json row;
    row["temperature_k"] = t;
    row["sigma1_norm"] = s.sigma1_norm;
    row["sigma2_norm"] = s.sigma2_norm;
    row["sigma2_deficit"] = s.sigma2_deficit;
    row["rs_ohm"] = zs.rs_ohm;
    row["ls_henry"] = zs.ls_henry;
    if (have_tls) {
      const scres::TheoryPoint tp = scres::theory_point(t, omega, c.material, c.geometry, c.tls_params(), settings);
      row["alpha_derived"] = tp.alpha_derived;
      row["delta_qp_theory"] = tp.delta_qp_theory;
      row["q_tls"] = tp.q_tls;
      row["qi_theory"] = tp.qi_theory;
    }
    rows.push_back(std::move(row));
  }
  emit(g, rows, "mb_table");
}

void run_fit(const Globals& g, const std::string& path, const std::string& format) {
  const scres::Config c = load(g);
  auto traces = scres::ingest_s21(path, scres::parse_trace_format(format));
  print_warnings(traces.warnings);
  const scres::S21Trace& t = traces.value.front();
  const scres::NotchFitResult fit = scres::fit_notch(t, c.fit);
  if (g.format == "csv") {
    ordered_json flat;
    flat["source"] = t.source;
    for (const auto& [k, v] : scres::fit_to_json(fit)["params"].items()) flat[k] = v;
    for (const auto& [k, v] : scres::fit_to_json(fit)["std_errors"].items()) flat[k + "_stderr"] = v;
    flat["qi"] = fit.qi;
    flat["qi_stderr"] = fit.qi_stderr;
    flat["rms_residual"] = fit.rms_residual;
    flat["converged"] = fit.converged;
    flat["nonphysical"] = fit.nonphysical;
    emit(g, flat, "fit");
  } else {
    ordered_json j;
    j["source"] = t.source;
    j["temperature_k"] = opt_json(t.temperature_k);
    j["power_dbm"] = opt_json(t.power_dbm);
    j["fit"] = scres::fit_to_json(fit);
    emit(g, j, "fit");
  }
  if (fit.nonphysical) throw scres::FitError("fit: nonphysical result (Qi <= 0)");
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& entry : fs::directory_iterator(in)) {
        const auto ext = entry.path().extension().string();
        if (entry.is_regular_file() && (ext == ".csv" || ext == ".s2p")) files.push_back(entry.path());
      }
    } else {
      files.emplace_back(in);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

void run_sweep(const Globals& g, const std::vector<std::string>& inputs) {
  scres::SweepDataset dataset;
  dataset.config = load(g);
  for (const auto& path : expand_inputs(inputs)) {
    auto traces = scres::ingest_s21(path);
    print_warnings(traces.warnings);
    for (auto& t : traces.value) dataset.traces.push_back(std::move(t));
  }
  const scres::AnalysisReport report = scres::sweep_analyze(dataset);
  print_warnings(report.warnings);
  const fs::path out = g.out.empty() ? fs::path("report") : fs::path(g.out);
  for (const auto& p : scres::emit_report(report, out)) std::cerr << "wrote " << p.string() << "\n";
  const scres::SweepDerived& d = report.derived;
  ordered_json summary;
  summary["entries"] = report.per_temperature.size();
  summary["failed"] = d.failed;
  summary["red_shift_onset_k"] = opt_json(d.red_shift_onset_k);
  summary["nqp_plateau_per_um3"] = opt_json(d.nqp_plateau_per_um3);
  summary["qi_max_temperature_k"] = opt_json(d.qi_max_temperature_k);
  summary["qi_interior_maximum"] = d.qi_interior_maximum;
  std::cout << (g.format == "csv" ? to_csv(summary) : summary.dump(2) + "\n");
}

struct PhotonArgs {
  double p_vna_dbm = -25.0;
  double p_att_db = -110.0;
  double qi = 0, ql = 0, qc = 0;
  double qi_err = 0, ql_err = 0, qc_err = 0;
  std::optional<double> freq_hz;
  std::optional<double> target_photons;
};

void run_photon(const Globals& g, const PhotonArgs& a) {
  const scres::Config c = load(g);
  const double f = a.freq_hz.value_or(c.run.resonance_hz);
  const scres::QualityFactors q{a.qi, a.ql, a.qc, a.qi_err, a.ql_err, a.qc_err};
  const scres::PowerBudget b = scres::power_budget(a.p_vna_dbm, a.p_att_db, q, f);
  ordered_json j;
  j["p_vna_dbm"] = b.p_vna_dbm;
  j["p_att_db"] = b.p_att_db;
  j["p_in_dbm"] = b.p_in_dbm;
  j["p_loss_w"] = b.p_loss_w;
  j["s21_mag"] = b.s21_mag;
  j["s11_mag"] = b.s11_mag;
  j["n_photons"] = b.n_ph;
  j["n_photons_stderr"] = b.n_ph_stderr;
  if (a.target_photons) {
    j["target_photons"] = *a.target_photons;
    j["p_in_for_target_dbm"] = scres::power_for_photons(*a.target_photons, a.qi, a.ql, a.qc, f);
  }
  emit(g, j, "photon");
}

struct SynthArgs {
  bool sweep = false;
  double fr_hz = 5.95e9;
  double qi = 2.571e5;
  double qc = 1e5;
  double phi = 0.0;
  double amp = 1.0;
  double phase0 = 0.0;
  double tau = 0.0;
  double noise = 0.0;
  int points = 2001;
  double linewidths = 10.0;
  std::optional<double> temperature_k;
  std::optional<double> power_dbm;
};

void run_synth(const Globals& g, const SynthArgs& a) {
  if (a.sweep) {
    const scres::Config c = load(g);
    if (g.out.empty()) throw scres::InputError("synth --sweep needs --out <dir>");
    const fs::path out(g.out);
    fs::create_directories(out);
    const scres::SyntheticSweep s = scres::synthesize_sweep(c, g.seed);
    ordered_json truth = ordered_json::array();
    for (std::size_t i = 0; i < s.traces.size(); ++i) {
      scres::write_file(out / s.traces[i].source, scres::format_s21_csv(s.traces[i]));
      const scres::SynthTruth& t = s.truth[i];
      truth.push_back({{"source", s.traces[i].source},
                       {"temperature_k", t.temperature_k},
                       {"fr_hz", t.params.fr_hz},
                       {"ql", t.params.ql},
                       {"qc_mag", t.params.qc_mag},
                       {"phi_rad", t.params.phi_rad},
                       {"qi", t.qi},
                       {"qi_theory", t.qi_theory}});
    }
    // JSON keeps the truth table out of `sweep <dir>`, which reads .csv and .s2p.
    scres::write_file(out / "truth.json", truth.dump(2) + "\n");
    std::cerr << "wrote " << s.traces.size() << " traces to " << out.string() << "\n";
    return;
  }
  scres::NotchParams p;
  p.fr_hz = a.fr_hz;
  p.qc_mag = a.qc;
  p.phi_rad = a.phi;
  p.ql = scres::loaded_q(a.qi, a.qc, a.phi);
  p.amp = a.amp;
  p.phase0_rad = a.phase0;
  p.tau_s = a.tau;
  scres::S21Trace t = scres::synth_trace(p, scres::linewidth_grid(p, a.linewidths, a.points), a.noise, g.seed);
  t.temperature_k = a.temperature_k;
  t.power_dbm = a.power_dbm;
  const std::string text = scres::format_s21_csv(t);
  if (g.out.empty()) {
    std::cout << text;
  } else {
    scres::write_file(g.out, text);
    std::cerr << "wrote " << g.out << "\n";
  }
}

void run_dc(const Globals& g, const std::string& path) {
  auto series = scres::ingest_rt(path);
  print_warnings(series.warnings);
  const scres::TransitionResult r = scres::extract_tc_rrr(series.value);
  ordered_json j;
  j["tc_k"] = r.tc_k;
  j["t10_k"] = r.t10_k;
  j["t90_k"] = r.t90_k;
  j["width_k"] = r.width_k();
  j["r_sq_tc_ohm"] = r.r_sq_tc_ohm;
  j["rrr"] = opt_json(r.rrr);
  emit(g, j, "dc");
}

void run_xrd(const Globals& g, double two_theta, const std::vector<int>& hkl, std::optional<double> wavelength) {
  if (hkl.size() != 3) throw scres::InputError("xrd: --hkl takes three integers");
  const double lambda = wavelength.value_or(load(g).run.xrd_wavelength_angstrom);
  ordered_json j;
  j["two_theta_deg"] = two_theta;
  j["hkl"] = hkl;
  j["wavelength_angstrom"] = lambda;
  j["lattice_constant_angstrom"] = scres::lattice_constant(two_theta, {hkl[0], hkl[1], hkl[2]}, lambda);
  emit(g, j, "xrd");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scres: superconducting resonator loss analysis"};
  app.set_version_flag("--version", std::string(scres::kToolVersion));
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory (or file for synth)");
  app.add_option("--seed", g.seed, "random seed for synthetic data");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));

  MbArgs mb;
  auto* mb_cmd = app.add_subcommand("mb", "Mattis-Bardeen conductivity and loss table");
  mb_cmd->add_option("--t-min", mb.t_min, "lowest temperature (K)");
  mb_cmd->add_option("--t-max", mb.t_max, "highest temperature (K)");
  mb_cmd->add_option("--points", mb.points, "number of temperatures");
  mb_cmd->add_option("--freq-hz", mb.freq_hz, "frequency (Hz); defaults to run.resonance_hz");

  std::string fit_path, fit_format = "auto";
  auto* fit_cmd = app.add_subcommand("fit", "fit a single notch trace");
  fit_cmd->add_option("trace", fit_path, "CSV or .s2p trace")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--input-format", fit_format, "auto, csv or touchstone");

  std::vector<std::string> sweep_inputs;
  auto* sweep_cmd = app.add_subcommand("sweep", "analyse a temperature sweep");
  sweep_cmd->add_option("inputs", sweep_inputs, "trace files or directories")->required();

  PhotonArgs ph;
  auto* ph_cmd = app.add_subcommand("photon", "drive power and photon-number budget");
  ph_cmd->add_option("--p-vna", ph.p_vna_dbm, "VNA output power (dBm)");
  ph_cmd->add_option("--p-att", ph.p_att_db, "line attenuation (dB, negative)");
  ph_cmd->add_option("--qi", ph.qi, "internal Q")->required();
  ph_cmd->add_option("--ql", ph.ql, "loaded Q")->required();
  ph_cmd->add_option("--qc", ph.qc, "|Qc|")->required();
  ph_cmd->add_option("--qi-err", ph.qi_err);
  ph_cmd->add_option("--ql-err", ph.ql_err);
  ph_cmd->add_option("--qc-err", ph.qc_err);
  ph_cmd->add_option("--freq-hz", ph.freq_hz, "resonance frequency; defaults to run.resonance_hz");
  ph_cmd->add_option("--target-photons", ph.target_photons, "also report the input power for this <n>");

  SynthArgs sy;
  auto* sy_cmd = app.add_subcommand("synth", "generate a synthetic trace or temperature sweep");
  sy_cmd->add_flag("--sweep", sy.sweep, "forward-model sweep from the config synth section");
  sy_cmd->add_option("--fr", sy.fr_hz);
  sy_cmd->add_option("--qi", sy.qi);
  sy_cmd->add_option("--qc", sy.qc);
  sy_cmd->add_option("--phi", sy.phi);
  sy_cmd->add_option("--amp", sy.amp);
  sy_cmd->add_option("--phase0", sy.phase0);
  sy_cmd->add_option("--tau", sy.tau);
  sy_cmd->add_option("--noise", sy.noise, "complex noise sigma per quadrature");
  sy_cmd->add_option("--points", sy.points);
  sy_cmd->add_option("--linewidths", sy.linewidths, "span in units of fr/Ql");
  sy_cmd->add_option("--temperature-k", sy.temperature_k);
  sy_cmd->add_option("--power-dbm", sy.power_dbm);

  std::string dc_path;
  auto* dc_cmd = app.add_subcommand("dc", "Tc and RRR from an R(T) CSV");
  dc_cmd->add_option("series", dc_path, "temperature_K,resistance_ohm CSV")->required()->check(CLI::ExistingFile);

  double two_theta = 0.0;
  std::vector<int> hkl;
  std::optional<double> wavelength;
  auto* xrd_cmd = app.add_subcommand("xrd", "cubic lattice constant from a Bragg peak");
  xrd_cmd->add_option("--two-theta", two_theta, "peak position (degrees)")->required();
  xrd_cmd->add_option("--hkl", hkl, "Miller indices")->required()->expected(3);
  xrd_cmd->add_option("--wavelength", wavelength, "X-ray wavelength (angstrom)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(scres::ErrorCategory::kInput);
  }

  try {
    if (*mb_cmd) run_mb(g, mb);
    else if (*fit_cmd) run_fit(g, fit_path, fit_format);
    else if (*sweep_cmd) run_sweep(g, sweep_inputs);
    else if (*ph_cmd) run_photon(g, ph);
    else if (*sy_cmd) run_synth(g, sy);
    else if (*dc_cmd) run_dc(g, dc_path);
    else if (*xrd_cmd) run_xrd(g, two_theta, hkl, wavelength);
  } catch (const scres::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(scres::ErrorCategory::kInput);
  }
  return 0;
}
