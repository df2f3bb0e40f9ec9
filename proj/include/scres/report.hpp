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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "scres/sweep.hpp"

namespace scres {

nlohmann::ordered_json report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);

/// report.json text: two-space indent, trailing newline.
std::string report_json_text(const AnalysisReport& report);

/// Writes report.json and, when there are entries, qi_vs_T.csv, df_vs_T.csv,
/// sigma_vs_T.csv and nqp_vs_T.csv. Returns the paths written.
std::vector<std::filesystem::path> emit_report(const AnalysisReport& report, const std::filesystem::path& out_dir);

nlohmann::ordered_json fit_to_json(const NotchFitResult& fit);
NotchFitResult fit_from_json(const nlohmann::json& j);

}  // namespace scres
