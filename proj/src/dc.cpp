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


#include "scres/dc.hpp"

#include <algorithm>
#include <cmath>

#include "scres/error.hpp"

namespace scres {

namespace {

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  const double hi = v[n / 2];
  if (n % 2) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + n / 2));
}

// First upward crossing of `level`, linearly interpolated. Empty if R starts above it.
std::optional<double> first_crossing(const RtSeries& s, double level) {
  if (s.resistance_ohm[0] >= level) return std::nullopt;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double r0 = s.resistance_ohm[i - 1];
    const double r1 = s.resistance_ohm[i];
    if (r1 >= level) {
      const double t0 = s.temperature_k[i - 1];
      const double t1 = s.temperature_k[i];
      return t0 + (level - r0) / (r1 - r0) * (t1 - t0);
    }
  }
  return std::nullopt;
}

double plateau_over(const RtSeries& s, double lo, double hi) {
  std::vector<double> r;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.temperature_k[i] >= lo && s.temperature_k[i] <= hi) r.push_back(s.resistance_ohm[i]);
  }
  if (r.empty()) throw InputError("extract_tc_rrr: no points in the plateau window");
  return median(std::move(r));
}

double interpolate(const RtSeries& s, double t) {
  const auto& T = s.temperature_k;
  const auto it = std::lower_bound(T.begin(), T.end(), t);
  if (it == T.end()) return s.resistance_ohm.back();
  const std::size_t i = static_cast<std::size_t>(it - T.begin());
  if (i == 0 || T[i] == t) return s.resistance_ohm[i];
  const double w = (t - T[i - 1]) / (T[i] - T[i - 1]);
  return s.resistance_ohm[i - 1] + w * (s.resistance_ohm[i] - s.resistance_ohm[i - 1]);
}

}  // namespace

TransitionResult extract_tc_rrr(const RtSeries& s) {
  if (s.size() < 3) throw InputError("extract_tc_rrr: need at least 3 points");
  if (!std::is_sorted(s.temperature_k.begin(), s.temperature_k.end())) {
    throw InputError("extract_tc_rrr: series must be ascending in temperature");
  }
  // Coarse pass: the largest resistance below 60 K stands in for the plateau.
  double coarse = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.temperature_k[i] <= 60.0 || i == 0) coarse = std::max(coarse, s.resistance_ohm[i]);
  }
  if (!(coarse > 0)) throw InputError("extract_tc_rrr: resistance is zero everywhere");
  const auto tc_coarse = first_crossing(s, 0.5 * coarse);
  if (!tc_coarse) throw InputError("extract_tc_rrr: no superconducting transition found");

  TransitionResult out;
  out.r_sq_tc_ohm = plateau_over(s, *tc_coarse + 2.0, *tc_coarse + 20.0);
  const double p = out.r_sq_tc_ohm;
  const auto t10 = first_crossing(s, 0.1 * p);
  const auto t50 = first_crossing(s, 0.5 * p);
  const auto t90 = first_crossing(s, 0.9 * p);
  if (!t10 || !t50 || !t90) throw InputError("extract_tc_rrr: R never drops below 10% of the plateau");
  out.tc_k = *t50;
  out.t10_k = *t10;
  out.t90_k = *t90;
  if (s.temperature_k.back() >= 295.0 && p > 0) out.rrr = interpolate(s, 300.0) / p;
  return out;
}

}  // namespace scres
