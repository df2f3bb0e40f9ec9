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
#include <limits>

#include "scres/config.hpp"
#include "scres/error.hpp"
#include "scres/loss_model.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kOmega = scres::angular_frequency(5.95e9);

scres::TlsParams tls() { return {1e-5, 10.0, 0.5, kOmega}; }

}  // namespace

TEST_CASE("TLS loss limits") {
  CHECK(scres::tls_loss(1e4, 1.0, tls()) < 1e-7);
  CHECK_THAT(scres::q_tls(1e-3, 0.0, tls()), WithinRel(1e5, 1e-12));
  CHECK_THAT(scres::q_tls(1e-3, 10.0, tls()), WithinRel(1e5 * std::sqrt(2.0), 1e-12));
  CHECK(scres::q_tls(0.5, 1.0, tls()) < scres::q_tls(2.0, 1.0, tls()));
  CHECK_THROWS_AS(scres::q_tls(0.0, 1.0, tls()), scres::DomainError);
  CHECK_THROWS_AS(scres::q_tls(1.0, -1.0, tls()), scres::DomainError);
  auto bad = tls();
  bad.beta_exp = 1.5;
  CHECK_THROWS_AS(scres::q_tls(1.0, 1.0, bad), scres::DomainError);
}

TEST_CASE("loss channels compose reciprocally") {
  CHECK_THAT(scres::qi_theory(2e5, 5e-6), WithinRel(1e5, 1e-14));
  CHECK_THAT(scres::qi_theory(std::numeric_limits<double>::infinity(), 1e-4), WithinRel(1e4, 1e-14));
  CHECK_THROWS_AS(scres::qi_theory(0.0, 1e-6), scres::DomainError);
  CHECK_THROWS_AS(scres::qi_theory(1e5, -1e-6), scres::DomainError);
  for (double q : {1e3, 1e5, 1e7}) {
    for (double d : {0.0, 1e-7, 1e-5, 1e-3}) {
      const double qi = scres::qi_theory(q, d);
      CHECK(qi <= q);
      if (d > 0) CHECK(qi <= 1 / d);
    }
  }
}

TEST_CASE("measured quasiparticle loss") {
  CHECK(scres::delta_qp_measured(1e5, 1e5).value == 0.0);
  const auto hot = scres::delta_qp_measured(7.421e3, 1e12);
  CHECK_THAT(hot.value, WithinRel(1.3475e-4, 1e-4));
  CHECK_FALSE(hot.negative_loss);
  const auto over = scres::delta_qp_measured(2e5, 1e5);
  CHECK(over.negative_loss);
  CHECK(over.value < 0);
}

TEST_CASE("quasiparticle density conversion") {
  const auto cfg = scres::default_config();
  CHECK(scres::nqp_from_loss(0.0, 1.0, cfg.material, kOmega) == 0.0);
  auto half = cfg.material;
  half.alpha = *cfg.material.alpha / 2;
  CHECK_THAT(scres::nqp_from_loss(1e-5, 1.0, half, kOmega),
             WithinRel(2 * scres::nqp_from_loss(1e-5, 1.0, cfg.material, kOmega), 1e-14));
  CHECK_THROWS_AS(scres::nqp_from_loss(1e-5, 10.7, cfg.material, kOmega), scres::DomainError);
  CHECK_THROWS_AS(scres::nqp_from_loss(-1e-5, 1.0, cfg.material, kOmega), scres::DomainError);
  auto no_alpha = cfg.material;
  no_alpha.alpha.reset();
  CHECK_THROWS_AS(scres::nqp_from_loss(1e-5, 1.0, no_alpha, kOmega), scres::ConfigError);
}

TEST_CASE("budget identities over the temperature grid") {
  const auto cfg = scres::default_config();
  const auto settings = cfg.model_settings();
  double previous_nqp = 0;
  for (int i = 0; i < 60; ++i) {
    const double t = 0.5 + 2.5 * i / 59.0;
    const auto tp = scres::theory_point(t, kOmega, cfg.material, cfg.geometry, cfg.tls_params(), settings);
    const auto b = scres::assemble_budget(tp, tp.qi_theory * 0.9, kOmega, cfg.material, settings);
    // Two paths to the theoretical density share one implementation, so equality is exact.
    CHECK(b.nqp_theory_per_um3 ==
          scres::nqp_from_loss(tp.delta_qp_theory, t, cfg.material, kOmega, settings.gap_model) *
              scres::kCubicMetresPerCubicMicron);
    CHECK(b.nqp_theory_per_um3 > previous_nqp);
    previous_nqp = b.nqp_theory_per_um3;
    CHECK(b.qi_theory == 1.0 / (1.0 / b.q_tls + b.delta_qp_theory));
    CHECK(b.qi_theory <= b.q_tls);
    REQUIRE(b.nqp_measured_per_um3.has_value());
    CHECK(*b.nqp_measured_per_um3 > 0);
  }
}

TEST_CASE("excess loss") {
  const auto cfg = scres::default_config();
  const auto settings = cfg.model_settings();
  const auto tp = scres::theory_point(0.12, kOmega, cfg.material, cfg.geometry, cfg.tls_params(), settings);

  const auto equal = scres::excess_qp_loss(scres::assemble_budget(tp, tp.qi_theory, kOmega, cfg.material, settings),
                                           cfg.material.tc_kelvin);
  CHECK(equal.value == 0.0);
  CHECK_FALSE(equal.non_equilibrium);

  const auto low = scres::excess_qp_loss(scres::assemble_budget(tp, tp.qi_theory / 2, kOmega, cfg.material, settings),
                                         cfg.material.tc_kelvin);
  CHECK(low.value > 0);
  CHECK_THAT(low.value, WithinRel(1 / tp.qi_theory, 1e-12));
  CHECK(low.non_equilibrium);

  const auto high = scres::excess_qp_loss(scres::assemble_budget(tp, tp.qi_theory * 2, kOmega, cfg.material, settings),
                                          cfg.material.tc_kelvin);
  CHECK(high.value == 0.0);
  CHECK(high.negative);
  CHECK(high.raw < 0);
}

TEST_CASE("preset model has an interior Qi maximum") {
  const auto cfg = scres::default_config();
  double best = 0, best_t = 0;
  for (int i = 0; i < 200; ++i) {
    const double t = 0.12 + (2.9 - 0.12) * i / 199.0;
    const double qi =
        scres::theory_point(t, kOmega, cfg.material, cfg.geometry, cfg.tls_params(), cfg.model_settings()).qi_theory;
    if (qi > best) {
      best = qi;
      best_t = t;
    }
  }
  CHECK(best_t > 0.5);
  CHECK(best_t < 2.5);
  const auto at = [&](double t) {
    return scres::theory_point(t, kOmega, cfg.material, cfg.geometry, cfg.tls_params(), cfg.model_settings()).qi_theory;
  };
  CHECK_THAT(at(0.12), WithinRel(1e5, 0.02));
  CHECK_THAT(at(2.9), WithinRel(7.421e3, 0.02));
}
