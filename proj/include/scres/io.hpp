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

// File ingestion: S21 traces (CSV, Touchstone v1 .s2p) and R(T) series.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scres/notch.hpp"

namespace scres {

enum class TraceFormat { kAuto, kCsv, kTouchstone };
TraceFormat parse_trace_format(std::string_view text);

template <typename T>
struct Ingested {
  T value;
  std::vector<std::string> warnings;
};

/// Parses S21 traces from text. `source` names the input in messages.
Ingested<std::vector<S21Trace>> parse_s21_csv(std::string_view text, const std::string& source);
Ingested<std::vector<S21Trace>> parse_touchstone(std::string_view text, const std::string& source);

/// Reads a file; kAuto picks Touchstone for .s2p and CSV otherwise. Sets `digest`.
Ingested<std::vector<S21Trace>> ingest_s21(const std::filesystem::path& path, TraceFormat format = TraceFormat::kAuto);

struct RtSeries {
  std::vector<double> temperature_k;
  std::vector<double> resistance_ohm;
  std::size_t size() const { return temperature_k.size(); }
};

Ingested<RtSeries> parse_rt_csv(std::string_view text, const std::string& source);
Ingested<RtSeries> ingest_rt(const std::filesystem::path& path);

/// Writes `freq_hz,s21_re,s21_im` with metadata comments; round-trips through parse_s21_csv.
std::string format_s21_csv(const S21Trace& trace);

/// Shortest round-trip decimal form.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace scres
