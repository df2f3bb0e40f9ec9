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


#include "scres/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "scres/error.hpp"

namespace scres {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void reject_unknown(const json& section, std::string_view name, const std::set<std::string>& allowed) {
  if (!section.is_object()) throw ConfigError("config: section '" + std::string(name) + "' must be an object");
  for (const auto& [key, _] : section.items()) {
    if (!allowed.count(key)) throw ConfigError("config: unknown key '" + std::string(name) + "." + key + "'");
  }
}

template <typename T>
void read(const json& section, const char* key, T& out) {
  if (!section.contains(key)) return;
  try {
    out = section.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
void read(const json& section, const char* key, std::optional<T>& out) {
  if (!section.contains(key) || section.at(key).is_null()) return;
  T v{};
  read(section, key, v);
  out = v;
}

template <typename T>
void write_opt(ordered_json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

ModelSettings Config::model_settings() const {
  ModelSettings s;
  s.sigma2_mode = run.sigma2_mode;
  s.gap_model = run.gap_model;
  s.impedance_model = parse_impedance_model(run.thin_film_correction);
  s.n_photon = run.n_photon;
  return s;
}

TlsParams Config::tls_params() const {
  return TlsParams{tls.f_delta0, tls.n_c, tls.beta_exp, angular_frequency(run.resonance_hz)};
}

void Config::validate() const {
  try {
    material.validate();
    geometry.validate();
    tls_params().validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(run.resonance_hz > 0)) throw ConfigError("config: run.resonance_hz must be positive");
  if (!(run.n_photon >= 0)) throw ConfigError("config: run.n_photon must be non-negative");
  if (!(run.red_shift_sigma > 0)) throw ConfigError("config: run.red_shift_sigma must be positive");
  if (!(run.power_tolerance_db >= 0)) throw ConfigError("config: run.power_tolerance_db must be non-negative");
  if (!(run.xrd_wavelength_angstrom > 0)) throw ConfigError("config: run.xrd_wavelength_angstrom must be positive");
  if (run.threads < 0) throw ConfigError("config: run.threads must be non-negative");
  if (!(fit.wing_fraction > 0 && fit.wing_fraction < 0.5)) throw ConfigError("config: fit.wing_fraction must lie in (0, 0.5)");
  if (fit.lm.max_iterations <= 0) throw ConfigError("config: fit.max_iterations must be positive");
  if (!(synth.qc_mag > 0)) throw ConfigError("config: synth.qc_mag must be positive");
  if (!(synth.amp > 0)) throw ConfigError("config: synth.amp must be positive");
  if (synth.points < 16) throw ConfigError("config: synth.points must be at least 16");
  if (!(synth.span_linewidths > 0)) throw ConfigError("config: synth.span_linewidths must be positive");
  if (synth.window_offset_hz && !((*synth.window_offset_hz)[0] < (*synth.window_offset_hz)[1] &&
                                  run.resonance_hz + (*synth.window_offset_hz)[0] > 0)) {
    throw ConfigError("config: synth.window_offset_hz must be an increasing pair inside (0, inf) Hz");
  }
  if (!(synth.noise_sigma >= 0)) throw ConfigError("config: synth.noise_sigma must be non-negative");
  if (!(synth.excess_loss >= 0)) throw ConfigError("config: synth.excess_loss must be non-negative");
  for (double t : synth.temperatures_k) {
    if (!(t > 0 && t < material.tc_kelvin)) throw ConfigError("config: synth.temperatures_k must lie in (0, Tc)");
  }
}

Config config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j, "<root>", {"material", "geometry", "tls", "fit", "run", "synth"});
  Config c = default_config();

  if (j.contains("material")) {
    const json& m = j.at("material");
    reject_unknown(m, "material",
                   {"tc_kelvin", "delta0_ev", "sheet_resistance_ohm", "thickness_m", "n0_states", "alpha",
                    "mean_free_path_m", "coherence_length_m", "penetration_depth_m"});
    MaterialParams& p = c.material;
    // Optional physical lengths and alpha are replaced wholesale when the section is present.
    p.alpha.reset();
    read(m, "tc_kelvin", p.tc_kelvin);
    p.delta0_ev.reset();
    read(m, "delta0_ev", p.delta0_ev);
    read(m, "sheet_resistance_ohm", p.sheet_resistance_ohm);
    read(m, "thickness_m", p.thickness_m);
    read(m, "n0_states", p.n0_states);
    read(m, "alpha", p.alpha);
    read(m, "mean_free_path_m", p.mean_free_path_m);
    read(m, "coherence_length_m", p.coherence_length_m);
    read(m, "penetration_depth_m", p.penetration_depth_m);
  }
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    reject_unknown(g, "geometry",
                   {"center_width_m", "gap_m", "thickness_m", "substrate_eps_r", "length_m", "geom_factor_per_m"});
    CpwGeometry& p = c.geometry;
    p.geom_factor_per_m.reset();
    read(g, "center_width_m", p.center_width_m);
    read(g, "gap_m", p.gap_m);
    read(g, "thickness_m", p.thickness_m);
    read(g, "substrate_eps_r", p.substrate_eps_r);
    read(g, "length_m", p.length_m);
    read(g, "geom_factor_per_m", p.geom_factor_per_m);
  }
  if (j.contains("tls")) {
    const json& t = j.at("tls");
    reject_unknown(t, "tls", {"f_delta0", "n_c", "beta_exp"});
    read(t, "f_delta0", c.tls.f_delta0);
    read(t, "n_c", c.tls.n_c);
    read(t, "beta_exp", c.tls.beta_exp);
  }
  if (j.contains("fit")) {
    const json& f = j.at("fit");
    reject_unknown(f, "fit", {"max_iterations", "relative_cost_tolerance", "initial_lambda", "wing_fraction"});
    read(f, "max_iterations", c.fit.lm.max_iterations);
    read(f, "relative_cost_tolerance", c.fit.lm.relative_cost_tolerance);
    read(f, "initial_lambda", c.fit.lm.initial_lambda);
    read(f, "wing_fraction", c.fit.wing_fraction);
  }
  if (j.contains("run")) {
    const json& r = j.at("run");
    reject_unknown(r, "run",
                   {"resonance_hz", "sigma2_mode", "gap_model", "thin_film_correction", "n_photon", "red_shift_sigma",
                    "power_tolerance_db", "xrd_wavelength_angstrom", "threads"});
    read(r, "resonance_hz", c.run.resonance_hz);
    std::string text;
    try {
      if (r.contains("sigma2_mode")) c.run.sigma2_mode = parse_sigma2_mode(r.at("sigma2_mode").get<std::string>());
      if (r.contains("gap_model")) c.run.gap_model = parse_gap_model(r.at("gap_model").get<std::string>());
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: bad mode string: ") + e.what());
    } catch (const Error& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    read(r, "thin_film_correction", c.run.thin_film_correction);
    read(r, "n_photon", c.run.n_photon);
    read(r, "red_shift_sigma", c.run.red_shift_sigma);
    read(r, "power_tolerance_db", c.run.power_tolerance_db);
    read(r, "xrd_wavelength_angstrom", c.run.xrd_wavelength_angstrom);
    read(r, "threads", c.run.threads);
  }
  if (j.contains("synth")) {
    const json& s = j.at("synth");
    reject_unknown(s, "synth",
                   {"temperatures_k", "qc_mag", "phi_rad", "amp", "phase0_rad", "tau_s", "noise_sigma", "points",
                    "span_linewidths", "window_offset_hz", "excess_loss", "power_dbm"});
    read(s, "temperatures_k", c.synth.temperatures_k);
    read(s, "qc_mag", c.synth.qc_mag);
    read(s, "phi_rad", c.synth.phi_rad);
    read(s, "amp", c.synth.amp);
    read(s, "phase0_rad", c.synth.phase0_rad);
    read(s, "tau_s", c.synth.tau_s);
    read(s, "noise_sigma", c.synth.noise_sigma);
    read(s, "points", c.synth.points);
    read(s, "span_linewidths", c.synth.span_linewidths);
    if (s.contains("window_offset_hz")) c.synth.window_offset_hz.reset();
    read(s, "window_offset_hz", c.synth.window_offset_hz);
    read(s, "excess_loss", c.synth.excess_loss);
    read(s, "power_dbm", c.synth.power_dbm);
  }
  c.validate();
  return c;
}

ordered_json config_to_json(const Config& c) {
  ordered_json j;
  ordered_json& m = j["material"];
  m["tc_kelvin"] = c.material.tc_kelvin;
  write_opt(m, "delta0_ev", c.material.delta0_ev);
  m["sheet_resistance_ohm"] = c.material.sheet_resistance_ohm;
  m["thickness_m"] = c.material.thickness_m;
  m["n0_states"] = c.material.n0_states;
  write_opt(m, "alpha", c.material.alpha);
  write_opt(m, "mean_free_path_m", c.material.mean_free_path_m);
  write_opt(m, "coherence_length_m", c.material.coherence_length_m);
  write_opt(m, "penetration_depth_m", c.material.penetration_depth_m);

  ordered_json& g = j["geometry"];
  g["center_width_m"] = c.geometry.center_width_m;
  g["gap_m"] = c.geometry.gap_m;
  g["thickness_m"] = c.geometry.thickness_m;
  g["substrate_eps_r"] = c.geometry.substrate_eps_r;
  write_opt(g, "length_m", c.geometry.length_m);
  write_opt(g, "geom_factor_per_m", c.geometry.geom_factor_per_m);

  j["tls"] = {{"f_delta0", c.tls.f_delta0}, {"n_c", c.tls.n_c}, {"beta_exp", c.tls.beta_exp}};
  j["fit"] = {{"max_iterations", c.fit.lm.max_iterations},
              {"relative_cost_tolerance", c.fit.lm.relative_cost_tolerance},
              {"initial_lambda", c.fit.lm.initial_lambda},
              {"wing_fraction", c.fit.wing_fraction}};
  ordered_json& r = j["run"];
  r["resonance_hz"] = c.run.resonance_hz;
  r["sigma2_mode"] = std::string(to_string(c.run.sigma2_mode));
  r["gap_model"] = std::string(to_string(c.run.gap_model));
  r["thin_film_correction"] = c.run.thin_film_correction;
  r["n_photon"] = c.run.n_photon;
  r["red_shift_sigma"] = c.run.red_shift_sigma;
  r["power_tolerance_db"] = c.run.power_tolerance_db;
  r["xrd_wavelength_angstrom"] = c.run.xrd_wavelength_angstrom;
  r["threads"] = c.run.threads;

  ordered_json& s = j["synth"];
  s["temperatures_k"] = c.synth.temperatures_k;
  s["qc_mag"] = c.synth.qc_mag;
  s["phi_rad"] = c.synth.phi_rad;
  s["amp"] = c.synth.amp;
  s["phase0_rad"] = c.synth.phase0_rad;
  s["tau_s"] = c.synth.tau_s;
  s["noise_sigma"] = c.synth.noise_sigma;
  s["points"] = c.synth.points;
  s["span_linewidths"] = c.synth.span_linewidths;
  write_opt(s, "window_offset_hz", c.synth.window_offset_hz);
  s["excess_loss"] = c.synth.excess_loss;
  s["power_dbm"] = c.synth.power_dbm;
  return j;
}

Config default_config() {
  Config c;
  c.material.tc_kelvin = 10.7;
  c.material.sheet_resistance_ohm = 159.5;
  c.material.thickness_m = 100e-9;
  c.material.alpha = 0.573;
  c.geometry.center_width_m = 4e-6;
  c.geometry.gap_m = 2e-6;
  c.geometry.thickness_m = 100e-9;
  c.geometry.substrate_eps_r = 11.7;
  // Chosen with the thin-film impedance so Qi_theory(2.9 K) ~ 7.4e3.
  c.geometry.geom_factor_per_m = 3.33e4;
  // Sets Qi_theory(0.12 K) ~ 1e5 at n = 1, nc = 10.
  c.tls = TlsConfig{1.263e-5, 10.0, 0.5};
  c.run.thin_film_correction = true;
  c.synth.temperatures_k.reserve(30);
  for (int i = 0; i < 30; ++i) c.synth.temperatures_k.push_back(0.12 + (2.9 - 0.12) * i / 29.0);
  // Near critical coupling around 1.5 K keeps the 2.9 K dip fittable at the
  // noise level that puts the red-shift onset in the 1.5-2 K band.
  c.synth.qc_mag = 2e4;
  c.synth.phi_rad = 0.1;
  c.synth.tau_s = 40e-9;
  c.synth.phase0_rad = 0.3;
  c.synth.noise_sigma = 0.12;
  c.synth.points = 2001;
  c.synth.window_offset_hz = std::array<double, 2>{-14e6, 6e6};
  c.synth.excess_loss = 3.5e-6;
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace scres
