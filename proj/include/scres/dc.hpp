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

// DC transport: critical temperature and residual resistance ratio from R(T).

#include <optional>

#include "scres/io.hpp"

namespace scres {

struct TransitionResult {
  double tc_k = 0.0;          // 50% of the normal-state plateau
  double t10_k = 0.0;
  double t90_k = 0.0;
  double r_sq_tc_ohm = 0.0;   // plateau: median R over [Tc + 2, Tc + 20] K
  std::optional<double> rrr;  // R(300 K) / plateau; absent unless data reaches 295 K
  double width_k() const { return t90_k - t10_k; }
};

/// Expects an ascending series (as produced by ingest_rt).
TransitionResult extract_tc_rrr(const RtSeries& series);

}  // namespace scres
