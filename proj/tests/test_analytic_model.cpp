#include "hmux/analytic_model.hpp"

#include <cmath>

#include <doctest.h>

#include "hmux/rng.hpp"
#include "support/fixtures.hpp"

using namespace hmux;
using hmux::testing::baseline_validated;
using hmux::testing::kBaselineHerald;
using hmux::testing::kCalibratedRoundTrip;

TEST_CASE("heralding probability") {
  CHECK(heralding_probability(1, kBaselineHerald) == kBaselineHerald);
  CHECK(heralding_probability(12, kBaselineHerald) == doctest::Approx(0.0427468790).epsilon(1e-8));
  CHECK(heralding_probability(5, 0.0) == 0.0);
  CHECK(heralding_probability(5, 1.0) == 1.0);
  CHECK_THROWS_AS(heralding_probability(0, 0.1), RangeError);
  CHECK_THROWS_AS(heralding_probability(3, 1.5), RangeError);

  // Strictly increasing in n.
  double prev = 0.0;
  for (int n = 1; n <= 32; ++n) {
    const double p = heralding_probability(n, kBaselineHerald);
    CHECK(p > prev);
    prev = p;
  }

  // Inclusion-exclusion oracle: sum P(pattern) over all 2^12 herald patterns
  // with at least one click.
  const double h = kBaselineHerald;
  double sum = 0.0;
  for (unsigned mask = 1; mask < (1u << 12); ++mask) {
    double p = 1.0;
    for (int j = 0; j < 12; ++j) p *= (mask >> j) & 1 ? h : 1.0 - h;
    sum += p;
  }
  CHECK(heralding_probability(12, h) == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("heralded probability anchors") {
  // n = 1 reproduces p * eta_i * eta_s regardless of the loop transmission.
  for (const double eta_rt : {0.0, 0.3, 0.7, 1.0})
    CHECK(heralded_probability(1, kBaselineHerald, 0.011, eta_rt, Policy::FirstHerald) ==
          doctest::Approx(3.9974e-5).epsilon(1e-10));

  // Lossless limit: enhancement approaches n as h -> 0.
  CHECK(enhancement(12, 1e-9, 1.0, Policy::FirstHerald) == doctest::Approx(12.0).epsilon(1e-6));

  // Calibrated operating point.
  CHECK(heralded_probability(12, kBaselineHerald, 0.011, kCalibratedRoundTrip,
                             Policy::FirstHerald) == doctest::Approx(1.3e-4).epsilon(0.02));
}

TEST_CASE("heralded probability properties") {
  CounterRng rng(0xabcdef, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const double h = 0.001 + 0.4 * rng.next_unit();
    const double eta_s = rng.next_unit();
    const double eta_rt = rng.next_unit();
    const int n = 1 + static_cast<int>(rng.next_unit() * 16);
    const auto policy = rng.next_unit() < 0.5 ? Policy::FirstHerald : Policy::LastHerald;

    const double pm = heralded_probability(n, h, eta_s, eta_rt, policy);

    // Bounds: h eta_s eta_rt^(n-1) <= p_m <= eta_s (1 - (1-h)^n).
    CHECK(pm >= h * eta_s * std::pow(eta_rt, n - 1) * (1.0 - 1e-12));
    CHECK(pm <= eta_s * heralding_probability(n, h) * (1.0 + 1e-12));

    // FirstHerald recurrence p_m(n+1) = eta_rt p_m(n) + h eta_s (1-h)^n.
    if (policy == Policy::FirstHerald) {
      const double lhs = heralded_probability(n + 1, h, eta_s, eta_rt, policy);
      const double rhs = eta_rt * pm + h * eta_s * std::pow(1.0 - h, n);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }

    // Later heralds store for fewer passes, so LastHerald dominates.
    CHECK(heralded_probability(n, h, eta_s, eta_rt, Policy::LastHerald) >=
          heralded_probability(n, h, eta_s, eta_rt, Policy::FirstHerald) * (1.0 - 1e-12));
  }
}

TEST_CASE("enhancement") {
  CHECK(enhancement(1, kBaselineHerald, 0.5, Policy::FirstHerald) == 1.0);  // exact
  CHECK(enhancement(1, 0.2, 0.9, Policy::LastHerald) == 1.0);

  // Lossless closed form (1 - (1-h)^n) / h.
  const double h = kBaselineHerald;
  const double lossless = (1.0 - std::pow(1.0 - h, 12)) / h;
  CHECK(enhancement(12, h, 1.0, Policy::FirstHerald) == doctest::Approx(lossless).epsilon(1e-12));
  CHECK(enhancement(12, h, 1.0, Policy::FirstHerald) == doctest::Approx(11.763).epsilon(1e-4));

  // Strictly increasing in eta_rt.
  double prev = 0.0;
  for (const double x : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    const double e = enhancement(12, h, x, Policy::FirstHerald);
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("round-trip calibration") {
  const double h = kBaselineHerald;

  SUBCASE("inverse of forward evaluation") {
    for (const double x : {0.05, 0.3, 0.5, 0.7, 0.95}) {
      const double target = enhancement(12, h, x, Policy::FirstHerald);
      const double back = calibrate_roundtrip(target, 12, h, Policy::FirstHerald);
      CHECK(back == doctest::Approx(x).epsilon(1e-7));
      CHECK(std::abs(enhancement(12, h, back, Policy::FirstHerald) - target) < 1e-9);
    }
  }
  SUBCASE("measured enhancement -> frozen regression constant") {
    const double eta = calibrate_roundtrip(3.25, 12, h, Policy::FirstHerald);
    CHECK(eta == doctest::Approx(kCalibratedRoundTrip).epsilon(1e-8));
    CHECK(std::abs(enhancement(12, h, eta, Policy::FirstHerald) - 3.25) < 1e-9);
    CHECK(eta > 0.0);
    CHECK(eta < 1.0);
  }
  SUBCASE("target at the no-gain boundary") {
    const double eta = calibrate_roundtrip(1.0, 12, h, Policy::FirstHerald);
    CHECK(eta > 0.0);
    CHECK(eta < 0.2);
    CHECK(std::abs(enhancement(12, h, eta, Policy::FirstHerald) - 1.0) < 1e-9);
  }
  SUBCASE("unattainable targets") {
    CHECK_THROWS_AS(calibrate_roundtrip(13.0, 12, h, Policy::FirstHerald), NoSolutionError);
    CHECK_THROWS_AS(calibrate_roundtrip(0.5, 12, h, Policy::FirstHerald), NoSolutionError);
    try {
      calibrate_roundtrip(13.0, 12, h, Policy::FirstHerald);
    } catch (const NoSolutionError& e) {
      CHECK(e.attainable_lo == 1.0);
      CHECK(e.attainable_hi == doctest::Approx(11.763).epsilon(1e-4));
    }
  }
}

TEST_CASE("optimal source count") {
  const double h = kBaselineHerald;
  CHECK(optimal_n(h, 0.011, 1.0, Policy::FirstHerald, 20) == 20);
  CHECK(optimal_n(h, 0.011, 0.0, Policy::FirstHerald, 20) == 1);

  // Interior maximum at the calibrated operating point, against an
  // independent exhaustive scan.
  int best_n = 1;
  double best = 0.0;
  for (int n = 1; n <= 64; ++n) {
    const double v = heralded_probability(n, h, 0.011, kCalibratedRoundTrip, Policy::FirstHerald);
    if (v > best) {
      best = v;
      best_n = n;
    }
  }
  const int n_star = optimal_n(h, 0.011, kCalibratedRoundTrip, Policy::FirstHerald, 64);
  CHECK(n_star == best_n);
  CHECK(n_star == 13);  // frozen regression value
  CHECK_THROWS_AS(optimal_n(h, 0.011, 0.5, Policy::FirstHerald, 0), RangeError);
}

TEST_CASE("prediction sweep") {
  const auto params = baseline_validated();
  const auto rows = predict_sweep(params, Policy::FirstHerald, 12);
  REQUIRE(rows.size() == 12);

  CHECK(rows[0].enhancement == 1.0);
  CHECK(rows[0].single_rate_hz == doctest::Approx(2.49e3).epsilon(0.01));
  CHECK(rows[11].p_single == doctest::Approx(1.3e-4).epsilon(0.02));
  CHECK(rows[11].single_rate_hz == doctest::Approx(8.09e3).epsilon(0.01));
  CHECK(rows[11].herald_rate_hz == doctest::Approx(2.66e6).epsilon(0.01));
  CHECK(rows[11].enhancement == doctest::Approx(3.25).epsilon(1e-9));

  for (int i = 0; i < 12; ++i) {
    CHECK(rows[i].n_sources == i + 1);
    // Sweep rows match single-point evaluation exactly.
    const auto single = predict(params, i + 1, Policy::FirstHerald);
    CHECK(rows[i].p_single == single.p_single);
    CHECK(rows[i].p_herald == single.p_herald);
  }

  // The threshold herald model sits slightly above the first-order one.
  const double h_first = herald_prob_per_bin(params, HeraldModel::FirstOrder);
  const double h_exact = herald_prob_per_bin(params, HeraldModel::Threshold);
  CHECK(h_first == doctest::Approx(kBaselineHerald).epsilon(1e-12));
  CHECK(h_exact > h_first);
  CHECK(h_exact == doctest::Approx(3.7948e-3).epsilon(1e-4));
}
