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


#include "scres/report.hpp"

#include <cmath>
#include <limits>

#include "scres/error.hpp"
#include "scres/io.hpp"

namespace scres {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Non-finite values have no JSON spelling; infinities are written as strings.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return nullptr;
}

double get_num(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InputError(std::string("report: bad number for ") + key);
  }
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

template <typename T>
ordered_json opt(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) return num(*v);
  else return *v;
}

std::optional<double> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_num(j, key);
}

ordered_json params_json(const NotchParams& p) {
  return {{"fr_hz", num(p.fr_hz)},       {"ql", num(p.ql)},   {"qc_mag", num(p.qc_mag)},
          {"phi_rad", num(p.phi_rad)},   {"amp", num(p.amp)}, {"phase0_rad", num(p.phase0_rad)},
          {"tau_s", num(p.tau_s)}};
}

NotchParams params_from(const json& j) {
  NotchParams p;
  p.fr_hz = get_num(j, "fr_hz");
  p.ql = get_num(j, "ql");
  p.qc_mag = get_num(j, "qc_mag");
  p.phi_rad = get_num(j, "phi_rad");
  p.amp = get_num(j, "amp");
  p.phase0_rad = get_num(j, "phase0_rad");
  p.tau_s = get_num(j, "tau_s");
  return p;
}

ordered_json budget_json(const LossBudget& b) {
  return {{"q_tls", num(b.q_tls)},
          {"delta_qp_theory", num(b.delta_qp_theory)},
          {"q_qp_theory", num(b.q_qp_theory)},
          {"qi_theory", num(b.qi_theory)},
          {"qi_measured", num(b.qi_measured)},
          {"delta_qp_measured", num(b.delta_qp_measured)},
          {"negative_loss", b.negative_loss},
          {"nqp_measured_per_um3", opt(b.nqp_measured_per_um3)},
          {"nqp_theory_per_um3", num(b.nqp_theory_per_um3)}};
}

LossBudget budget_from(const json& j, double t) {
  LossBudget b;
  b.temperature_k = t;
  b.q_tls = get_num(j, "q_tls");
  b.delta_qp_theory = get_num(j, "delta_qp_theory");
  b.q_qp_theory = get_num(j, "q_qp_theory");
  b.qi_theory = get_num(j, "qi_theory");
  b.qi_measured = get_num(j, "qi_measured");
  b.delta_qp_measured = get_num(j, "delta_qp_measured");
  b.negative_loss = j.at("negative_loss").get<bool>();
  b.nqp_measured_per_um3 = get_opt(j, "nqp_measured_per_um3");
  b.nqp_theory_per_um3 = get_num(j, "nqp_theory_per_um3");
  return b;
}

std::string csv_num(double v) { return std::isfinite(v) ? format_double(v) : (std::isnan(v) ? "" : (v > 0 ? "inf" : "-inf")); }
std::string csv_opt(const std::optional<double>& v) { return v ? csv_num(*v) : ""; }

}  // namespace

ordered_json fit_to_json(const NotchFitResult& fit) {
  return {{"params", params_json(fit.params)},
          {"std_errors", params_json(fit.std_errors)},
          {"qi", num(fit.qi)},
          {"qi_stderr", num(fit.qi_stderr)},
          {"rms_residual", num(fit.rms_residual)},
          {"n_points", fit.n_points},
          {"iterations", fit.iterations},
          {"converged", fit.converged},
          {"nonphysical", fit.nonphysical}};
}

NotchFitResult fit_from_json(const json& j) {
  NotchFitResult f;
  f.params = params_from(j.at("params"));
  f.std_errors = params_from(j.at("std_errors"));
  f.qi = get_num(j, "qi");
  f.qi_stderr = get_num(j, "qi_stderr");
  f.rms_residual = get_num(j, "rms_residual");
  f.n_points = j.at("n_points").get<Eigen::Index>();
  f.iterations = j.at("iterations").get<int>();
  f.converged = j.at("converged").get<bool>();
  f.nonphysical = j.at("nonphysical").get<bool>();
  return f;
}

ordered_json report_to_json(const AnalysisReport& r) {
  ordered_json j;
  ordered_json entries = ordered_json::array();
  for (const auto& e : r.per_temperature) {
    ordered_json x;
    x["temperature_k"] = num(e.temperature_k);
    x["source"] = e.source;
    x["digest"] = e.digest;
    x["power_dbm"] = opt(e.power_dbm);
    x["ok"] = e.ok;
    x["error"] = e.error;
    if (e.ok) {
      x["fit"] = fit_to_json(e.fit);
      x["delta_f_hz"] = num(e.delta_f_hz);
      x["delta_f_stderr_hz"] = num(e.delta_f_stderr_hz);
      x["theory"] = {{"sigma1_norm", num(e.sigma1_norm)}, {"sigma2_norm", num(e.sigma2_norm)},
                     {"sigma2_deficit", num(e.sigma2_deficit)}, {"rs_ohm", num(e.rs_ohm)},
                     {"ls_henry", num(e.ls_henry)},           {"alpha_derived", num(e.alpha_derived)}};
      x["budget"] = budget_json(e.budget);
      x["excess"] = {{"value", num(e.excess.value)},
                     {"raw", num(e.excess.raw)},
                     {"negative", e.excess.negative},
                     {"non_equilibrium", e.excess.non_equilibrium}};
      x["n_photons"] = opt(e.n_photons);
      x["n_photons_stderr"] = opt(e.n_photons_stderr);
    }
    entries.push_back(std::move(x));
  }
  j["per_temperature"] = std::move(entries);
  const SweepDerived& d = r.derived;
  j["derived"] = {{"reference_temperature_k", opt(d.reference_temperature_k)},
                  {"nqp_plateau_per_um3", opt(d.nqp_plateau_per_um3)},
                  {"nqp_plateau_points", d.nqp_plateau_points},
                  {"red_shift_onset_k", opt(d.red_shift_onset_k)},
                  {"red_shift_sigma", num(d.red_shift_sigma)},
                  {"qi_max_temperature_k", opt(d.qi_max_temperature_k)},
                  {"qi_interior_maximum", d.qi_interior_maximum},
                  {"failed", d.failed},
                  {"negative_loss", d.negative_loss},
                  {"excess_positive", d.excess_positive},
                  {"non_equilibrium", d.non_equilibrium}};
  ordered_json inputs = ordered_json::array();
  for (const auto& in : r.provenance.inputs) inputs.push_back({{"source", in.source}, {"sha256", in.sha256}});
  j["provenance"] = {{"config_sha256", r.provenance.config_sha256},
                     {"inputs", std::move(inputs)},
                     {"tool_version", r.provenance.tool_version},
                     {"csv_schema_version", r.provenance.csv_schema_version}};
  j["warnings"] = r.warnings;
  return j;
}

AnalysisReport report_from_json(const json& j) {
  AnalysisReport r;
  try {
    for (const auto& x : j.at("per_temperature")) {
      SweepEntry e;
      e.temperature_k = get_num(x, "temperature_k");
      e.source = x.at("source").get<std::string>();
      e.digest = x.at("digest").get<std::string>();
      e.power_dbm = get_opt(x, "power_dbm");
      e.ok = x.at("ok").get<bool>();
      e.error = x.at("error").get<std::string>();
      if (e.ok) {
        e.fit = fit_from_json(x.at("fit"));
        e.delta_f_hz = get_num(x, "delta_f_hz");
        e.delta_f_stderr_hz = get_num(x, "delta_f_stderr_hz");
        const json& t = x.at("theory");
        e.sigma1_norm = get_num(t, "sigma1_norm");
        e.sigma2_norm = get_num(t, "sigma2_norm");
        e.sigma2_deficit = get_num(t, "sigma2_deficit");
        e.rs_ohm = get_num(t, "rs_ohm");
        e.ls_henry = get_num(t, "ls_henry");
        e.alpha_derived = get_num(t, "alpha_derived");
        e.budget = budget_from(x.at("budget"), e.temperature_k);
        const json& ex = x.at("excess");
        e.excess.value = get_num(ex, "value");
        e.excess.raw = get_num(ex, "raw");
        e.excess.negative = ex.at("negative").get<bool>();
        e.excess.non_equilibrium = ex.at("non_equilibrium").get<bool>();
        e.n_photons = get_opt(x, "n_photons");
        e.n_photons_stderr = get_opt(x, "n_photons_stderr");
      }
      r.per_temperature.push_back(std::move(e));
    }
    const json& d = j.at("derived");
    r.derived.reference_temperature_k = get_opt(d, "reference_temperature_k");
    r.derived.nqp_plateau_per_um3 = get_opt(d, "nqp_plateau_per_um3");
    r.derived.nqp_plateau_points = d.at("nqp_plateau_points").get<int>();
    r.derived.red_shift_onset_k = get_opt(d, "red_shift_onset_k");
    r.derived.red_shift_sigma = get_num(d, "red_shift_sigma");
    r.derived.qi_max_temperature_k = get_opt(d, "qi_max_temperature_k");
    r.derived.qi_interior_maximum = d.at("qi_interior_maximum").get<bool>();
    r.derived.failed = d.at("failed").get<int>();
    r.derived.negative_loss = d.at("negative_loss").get<int>();
    r.derived.excess_positive = d.at("excess_positive").get<int>();
    r.derived.non_equilibrium = d.at("non_equilibrium").get<int>();
    const json& p = j.at("provenance");
    r.provenance.config_sha256 = p.at("config_sha256").get<std::string>();
    for (const auto& in : p.at("inputs")) {
      r.provenance.inputs.push_back({in.at("source").get<std::string>(), in.at("sha256").get<std::string>()});
    }
    r.provenance.tool_version = p.at("tool_version").get<std::string>();
    r.provenance.csv_schema_version = p.at("csv_schema_version").get<int>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw InputError(std::string("report: malformed JSON: ") + e.what());
  }
  return r;
}

std::string report_json_text(const AnalysisReport& report) { return report_to_json(report).dump(2) + "\n"; }

std::vector<std::filesystem::path> emit_report(const AnalysisReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw InputError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto put = [&](const char* name, const std::string& content) {
    const auto path = out_dir / name;
    write_file(path, content);
    written.push_back(path);
  };
  put("report.json", report_json_text(report));
  if (report.per_temperature.empty()) return written;

  std::string qi = "temperature_k,qi_measured,qi_measured_stderr,qi_theory,q_tls,q_qp_theory\n";
  std::string df = "temperature_k,fr_hz,fr_stderr_hz,delta_f_hz,delta_f_stderr_hz\n";
  std::string sg = "temperature_k,sigma1_norm,sigma2_norm,sigma2_deficit,rs_ohm,ls_henry\n";
  std::string nq =
      "temperature_k,delta_qp_measured,delta_qp_theory,nqp_measured_per_um3,nqp_theory_per_um3,negative_loss\n";
  for (const auto& e : report.per_temperature) {
    if (!e.ok) continue;
    const std::string t = csv_num(e.temperature_k);
    qi += t + "," + csv_num(e.fit.qi) + "," + csv_num(e.fit.qi_stderr) + "," + csv_num(e.budget.qi_theory) + "," +
          csv_num(e.budget.q_tls) + "," + csv_num(e.budget.q_qp_theory) + "\n";
    df += t + "," + csv_num(e.fit.params.fr_hz) + "," + csv_num(e.fit.std_errors.fr_hz) + "," +
          csv_num(e.delta_f_hz) + "," + csv_num(e.delta_f_stderr_hz) + "\n";
    sg += t + "," + csv_num(e.sigma1_norm) + "," + csv_num(e.sigma2_norm) + "," + csv_num(e.sigma2_deficit) + "," +
          csv_num(e.rs_ohm) + "," + csv_num(e.ls_henry) + "\n";
    nq += t + "," + csv_num(e.budget.delta_qp_measured) + "," + csv_num(e.budget.delta_qp_theory) + "," +
          csv_opt(e.budget.nqp_measured_per_um3) + "," + csv_num(e.budget.nqp_theory_per_um3) + "," +
          (e.budget.negative_loss ? "1" : "0") + "\n";
  }
  put("qi_vs_T.csv", qi);
  put("df_vs_T.csv", df);
  put("sigma_vs_T.csv", sg);
  put("nqp_vs_T.csv", nq);
  return written;
}

}  // namespace scres
