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


#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "scres/dc.hpp"
#include "scres/error.hpp"
#include "scres/xrd.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Sharp transition at tc, flat plateau up to 40 K, then linear towards r300.
scres::RtSeries film(double tc, double plateau, double r300, double step = 0.01) {
  scres::RtSeries s;
  for (double t = 2.0; t <= 300.0 + 1e-9; t += (t < 40 ? step : 1.0)) {
    s.temperature_k.push_back(t);
    double r = t < tc ? 0.0 : plateau;
    if (t > 40) r = plateau + (r300 - plateau) * (t - 40) / 260;
    s.resistance_ohm.push_back(r);
  }
  return s;
}

}  // namespace

TEST_CASE("ideal step transition") {
  const auto r = scres::extract_tc_rrr(film(10.7, 159.5, 159.5));
  CHECK_THAT(r.tc_k, WithinAbs(10.7, 0.01));
  CHECK_THAT(r.r_sq_tc_ohm, WithinRel(159.5, 1e-12));
  REQUIRE(r.rrr.has_value());
  CHECK_THAT(*r.rrr, WithinRel(1.0, 1e-12));
  CHECK(r.width_k() >= 0);
  CHECK(r.width_k() < 0.02);
}

TEST_CASE("residual resistance ratio below one") {
  const auto r = scres::extract_tc_rrr(film(10.7, 159.5, 0.98 * 159.5));
  REQUIRE(r.rrr.has_value());
  CHECK_THAT(*r.rrr, WithinAbs(0.98, 0.005));
}

TEST_CASE("broadened transition and 10/50/90 points") {
  scres::RtSeries s;
  for (double t = 2.0; t <= 60.0; t += 0.005) {
    s.temperature_k.push_back(t);
    s.resistance_ohm.push_back(159.5 / (1 + std::exp(-(t - 10.7) / 0.1)));
  }
  const auto r = scres::extract_tc_rrr(s);
  CHECK_THAT(r.tc_k, WithinAbs(10.7, 0.005));
  // logistic: 10% and 90% sit at tc -/+ 0.1 ln 9
  CHECK_THAT(r.t10_k, WithinAbs(10.7 - 0.1 * std::log(9.0), 0.005));
  CHECK_THAT(r.t90_k, WithinAbs(10.7 + 0.1 * std::log(9.0), 0.005));
  CHECK_FALSE(r.rrr.has_value());
}

TEST_CASE("Tc and RRR invariant under resistance scaling") {
  auto base = film(9.3, 120.0, 130.0);
  auto scaled = base;
  for (auto& r : scaled.resistance_ohm) r *= 7.25;
  const auto a = scres::extract_tc_rrr(base);
  const auto b = scres::extract_tc_rrr(scaled);
  CHECK(a.tc_k == b.tc_k);
  CHECK_THAT(*b.rrr, WithinRel(*a.rrr, 1e-14));
  CHECK_THAT(b.r_sq_tc_ohm, WithinRel(7.25 * a.r_sq_tc_ohm, 1e-14));
}

TEST_CASE("no transition is an error") {
  scres::RtSeries flat;
  for (double t = 2; t < 300; t += 1) {
    flat.temperature_k.push_back(t);
    flat.resistance_ohm.push_back(100.0 + 0.01 * t);
  }
  CHECK_THROWS_AS(scres::extract_tc_rrr(flat), scres::InputError);
}

TEST_CASE("cubic lattice constant from Bragg peaks") {
  CHECK_THAT(scres::lattice_constant(35.73, {1, 1, 1}), WithinAbs(4.35, 0.01));
  CHECK_THAT(scres::lattice_constant(41.38, {2, 0, 0}), WithinAbs(4.36, 0.01));
  // sin(theta) = lambda / 2 gives a = 1 for (100)
  const double lambda = 1.5406;
  const double two_theta = 2 * std::asin(lambda / 2) * 180 / std::numbers::pi;
  CHECK_THAT(scres::lattice_constant(two_theta, {1, 0, 0}, lambda), WithinRel(1.0, 1e-14));
  CHECK_THAT(scres::lattice_constant(two_theta, {0, 0, 1}, lambda), WithinRel(1.0, 1e-14));
  CHECK_THROWS_AS(scres::lattice_constant(0.0, {1, 1, 1}), scres::DomainError);
  CHECK_THROWS_AS(scres::lattice_constant(180.0, {1, 1, 1}), scres::DomainError);
  CHECK_THROWS_AS(scres::lattice_constant(40.0, {0, 0, 0}), scres::DomainError);
  CHECK_THROWS_AS(scres::lattice_constant(40.0, {1, 1, 1}, -1.0), scres::DomainError);
}
