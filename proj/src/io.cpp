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


#include "scres/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <sstream>

#include "scres/constants.hpp"
#include "scres/error.hpp"

namespace scres {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string where(const std::string& source, std::size_t line_no) {
  return source + ":" + std::to_string(line_no);
}

double parse_number(std::string_view token, const std::string& source, std::size_t line_no) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw InputError(where(source, line_no) + ": not a finite number: '" + std::string(token) + "'");
  }
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Recognises "temperature_K=..." and "power_dbm=..." in a comment body.
void read_metadata(std::string_view body, S21Trace& trace, const std::string& source, std::size_t line_no) {
  body = trim(body);
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) return;
  const std::string key = lower(trim(body.substr(0, eq)));
  const std::string_view value = trim(body.substr(eq + 1));
  if (key == "temperature_k") {
    trace.temperature_k = parse_number(value, source, line_no);
  } else if (key == "power_dbm") {
    trace.power_dbm = parse_number(value, source, line_no);
  }
}

struct Sample {
  double f;
  std::complex<double> s;
};

// Sorts by frequency (warning when needed), rejects duplicates, fills the trace.
void finish_trace(std::vector<Sample> samples, S21Trace& trace, std::vector<std::string>& warnings) {
  if (samples.empty()) throw InputError(trace.source + ": no data rows");
  const bool sorted =
      std::is_sorted(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.f < b.f; });
  if (!sorted) {
    std::stable_sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.f < b.f; });
    warnings.push_back(trace.source + ": frequency column not ascending; rows sorted");
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].f == samples[i - 1].f) {
      throw InputError(trace.source + ": duplicate frequency " + format_double(samples[i].f));
    }
  }
  trace.freq_hz.resize(static_cast<Eigen::Index>(samples.size()));
  trace.s21.resize(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    trace.freq_hz[static_cast<Eigen::Index>(i)] = samples[i].f;
    trace.s21[static_cast<Eigen::Index>(i)] = samples[i].s;
  }
  try {
    trace.validate();
  } catch (const Error& e) {
    throw InputError(trace.source + ": " + e.what());
  }
}

std::complex<double> from_db_deg(double db, double deg) {
  return std::polar(std::pow(10.0, db / 20.0), deg * Const::kPi / 180.0);
}

}  // namespace

TraceFormat parse_trace_format(std::string_view text) {
  if (text == "auto") return TraceFormat::kAuto;
  if (text == "csv") return TraceFormat::kCsv;
  if (text == "touchstone" || text == "s2p") return TraceFormat::kTouchstone;
  throw InputError("unknown trace format '" + std::string(text) + "' (auto, csv, touchstone)");
}

Ingested<std::vector<S21Trace>> parse_s21_csv(std::string_view text, const std::string& source) {
  Ingested<std::vector<S21Trace>> out;
  S21Trace trace;
  trace.source = source;
  enum class Layout { kNone, kReIm, kDbDeg } layout = Layout::kNone;
  std::vector<Sample> samples;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = trim(lines[i]);
    if (i == 0 && line.substr(0, 3) == "\xEF\xBB\xBF") line = trim(line.substr(3));
    if (line.empty()) continue;
    if (line.front() == '#') {
      read_metadata(line.substr(1), trace, source, line_no);
      continue;
    }
    if (layout == Layout::kNone) {
      const std::string lowered = lower(line);
      const auto cols = split(lowered, ',');
      if (cols.size() == 3 && cols[0] == "freq_hz" && cols[1] == "s21_re" && cols[2] == "s21_im") {
        layout = Layout::kReIm;
      } else if (cols.size() == 3 && cols[0] == "freq_hz" && cols[1] == "s21_db" && cols[2] == "s21_deg") {
        layout = Layout::kDbDeg;
      } else {
        throw InputError(where(source, line_no) +
                         ": expected header freq_hz,s21_re,s21_im or freq_hz,s21_db,s21_deg");
      }
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 3) {
      throw InputError(where(source, line_no) + ": expected 3 columns, got " + std::to_string(cols.size()));
    }
    const double f = parse_number(cols[0], source, line_no);
    const double a = parse_number(cols[1], source, line_no);
    const double b = parse_number(cols[2], source, line_no);
    if (!(f > 0)) throw InputError(where(source, line_no) + ": frequency must be positive");
    samples.push_back({f, layout == Layout::kReIm ? std::complex<double>(a, b) : from_db_deg(a, b)});
  }
  if (layout == Layout::kNone) throw InputError(source + ": empty file (no header)");
  finish_trace(std::move(samples), trace, out.warnings);
  out.value.push_back(std::move(trace));
  return out;
}

Ingested<std::vector<S21Trace>> parse_touchstone(std::string_view text, const std::string& source) {
  Ingested<std::vector<S21Trace>> out;
  S21Trace trace;
  trace.source = source;
  double unit = 1e9;
  std::string fmt = "ma";
  bool seen_option = false;
  std::vector<double> values;
  std::vector<std::size_t> value_lines;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = lines[i];
    const auto bang = line.find('!');
    if (bang != std::string_view::npos) {
      read_metadata(line.substr(bang + 1), trace, source, line_no);
      line = line.substr(0, bang);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (seen_option) continue;  // only the first option line counts
      seen_option = true;
      const auto tokens = split_ws(line.substr(1));
      for (std::size_t k = 0; k < tokens.size(); ++k) {
        const std::string t = lower(tokens[k]);
        if (t == "hz") unit = 1.0;
        else if (t == "khz") unit = 1e3;
        else if (t == "mhz") unit = 1e6;
        else if (t == "ghz") unit = 1e9;
        else if (t == "ri" || t == "ma" || t == "db") fmt = t;
        else if (t == "s") continue;
        else if (t == "y" || t == "z" || t == "h" || t == "g") {
          throw InputError(where(source, line_no) + ": only S-parameter files are supported");
        } else if (t == "r") {
          ++k;  // reference impedance value
        } else {
          throw InputError(where(source, line_no) + ": unknown option '" + std::string(tokens[k]) + "'");
        }
      }
      continue;
    }
    for (const auto tok : split_ws(line)) {
      values.push_back(parse_number(tok, source, line_no));
      value_lines.push_back(line_no);
    }
  }
  if (values.empty()) throw InputError(source + ": empty file (no data)");
  if (values.size() % 9 != 0) {
    throw InputError(where(source, value_lines.back()) + ": 2-port records need 9 values each");
  }
  std::vector<Sample> samples;
  for (std::size_t r = 0; r < values.size(); r += 9) {
    const double f = values[r] * unit;
    if (!(f > 0)) throw InputError(where(source, value_lines[r]) + ": frequency must be positive");
    // Record order: f, S11, S21, S12, S22.
    const double a = values[r + 3];
    const double b = values[r + 4];
    std::complex<double> s;
    if (fmt == "ri") s = {a, b};
    else if (fmt == "db") s = from_db_deg(a, b);
    else s = std::polar(a, b * Const::kPi / 180.0);
    samples.push_back({f, s});
  }
  finish_trace(std::move(samples), trace, out.warnings);
  out.value.push_back(std::move(trace));
  return out;
}

Ingested<std::vector<S21Trace>> ingest_s21(const std::filesystem::path& path, TraceFormat format) {
  const std::string text = read_file(path);
  if (format == TraceFormat::kAuto) {
    format = lower(path.extension().string()) == ".s2p" ? TraceFormat::kTouchstone : TraceFormat::kCsv;
  }
  auto out = format == TraceFormat::kTouchstone ? parse_touchstone(text, path.string())
                                                : parse_s21_csv(text, path.string());
  const std::string digest = sha256_hex(text);
  for (auto& t : out.value) t.digest = digest;
  return out;
}

Ingested<RtSeries> parse_rt_csv(std::string_view text, const std::string& source) {
  Ingested<RtSeries> out;
  bool header = false;
  std::map<double, std::pair<double, int>> rows;  // T -> (sum R, count)
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = trim(lines[i]);
    if (i == 0 && line.substr(0, 3) == "\xEF\xBB\xBF") line = trim(line.substr(3));
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      const std::string lowered = lower(line);
      const auto cols = split(lowered, ',');
      if (cols.size() != 2 || cols[0] != "temperature_k" || cols[1] != "resistance_ohm") {
        throw InputError(where(source, line_no) + ": expected header temperature_K,resistance_ohm");
      }
      header = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 2) {
      throw InputError(where(source, line_no) + ": expected 2 columns, got " + std::to_string(cols.size()));
    }
    const double t = parse_number(cols[0], source, line_no);
    const double r = parse_number(cols[1], source, line_no);
    if (!(t >= 0)) throw InputError(where(source, line_no) + ": temperature must be non-negative");
    if (r < 0) throw InputError(where(source, line_no) + ": negative resistance");
    auto& acc = rows[t];
    acc.first += r;
    acc.second += 1;
  }
  if (!header) throw InputError(source + ": empty file (no header)");
  if (rows.empty()) throw InputError(source + ": no data rows");
  for (const auto& [t, acc] : rows) {
    if (acc.second > 1) {
      out.warnings.push_back(source + ": " + std::to_string(acc.second) + " rows at T = " + format_double(t) +
                             " K averaged");
    }
    out.value.temperature_k.push_back(t);
    out.value.resistance_ohm.push_back(acc.first / acc.second);
  }
  return out;
}

Ingested<RtSeries> ingest_rt(const std::filesystem::path& path) {
  return parse_rt_csv(read_file(path), path.string());
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_s21_csv(const S21Trace& trace) {
  std::string out;
  if (trace.temperature_k) out += "# temperature_K=" + format_double(*trace.temperature_k) + "\n";
  if (trace.power_dbm) out += "# power_dbm=" + format_double(*trace.power_dbm) + "\n";
  out += "freq_hz,s21_re,s21_im\n";
  for (Eigen::Index i = 0; i < trace.freq_hz.size(); ++i) {
    out += format_double(trace.freq_hz[i]);
    out += ',';
    out += format_double(trace.s21[i].real());
    out += ',';
    out += format_double(trace.s21[i].imag());
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError("write failed: " + path.string());
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCategory::kInput, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

}  // namespace scres
