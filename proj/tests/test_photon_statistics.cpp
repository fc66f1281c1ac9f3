#include "hmux/photon_statistics.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "hmux/rng.hpp"

using namespace hmux;

namespace {

// Independent pmf, straight from the closed forms.
double pmf_reference(PairStats stats, double mu, int k) {
  if (stats == PairStats::Thermal) return std::pow(mu, k) / std::pow(1.0 + mu, k + 1);
  double factorial = 1.0;
  for (int i = 2; i <= k; ++i) factorial *= i;
  return std::exp(-mu) * std::pow(mu, k) / factorial;
}

}  // namespace

TEST_CASE("pair-number pmf matches the closed forms") {
  CHECK(PairNumberDistribution(PairStats::Thermal, 0.0, 6).pmf(0) == 1.0);

  const PairNumberDistribution thermal(PairStats::Thermal, 0.05, 10);
  CHECK(thermal.pmf(1) == doctest::Approx(0.05 / (1.05 * 1.05)).epsilon(1e-12));
  CHECK(thermal.pmf(1) == doctest::Approx(0.04535147).epsilon(1e-6));

  const PairNumberDistribution poisson(PairStats::Poisson, 0.05, 10);
  CHECK(poisson.pmf(2) == doctest::Approx(std::exp(-0.05) * 0.0025 / 2.0).epsilon(1e-12));
  CHECK(poisson.pmf(2) == doctest::Approx(1.189e-3).epsilon(1e-3));

  for (const auto stats : {PairStats::Thermal, PairStats::Poisson})
    for (const double mu : {0.01, 0.05, 0.3, 1.0})
      for (int k = 0; k <= 8; ++k)
        CHECK(PairNumberDistribution(stats, mu, 8).pmf(k) ==
              doctest::Approx(pmf_reference(stats, mu, k)).epsilon(1e-12));
}

TEST_CASE("pmf domain errors") {
  const PairNumberDistribution dist(PairStats::Thermal, 0.05, 6);
  CHECK_THROWS_AS(dist.pmf(7), TruncationError);
  CHECK_THROWS_AS(dist.pmf(-1), RangeError);
  CHECK_THROWS_AS(PairNumberDistribution(PairStats::Thermal, -0.1, 6), RangeError);
  CHECK_THROWS_AS(PairNumberDistribution(PairStats::Poisson, 0.1, 0), RangeError);
}

TEST_CASE("normalization and truncation guard") {
  for (const auto stats : {PairStats::Thermal, PairStats::Poisson})
    for (const double mu : {0.0, 0.01, 0.05, 0.5, 2.0}) {
      const PairNumberDistribution dist(stats, mu, 24);
      double total = 0.0;
      for (int k = 0; k <= 24; ++k) total += dist.pmf(k);
      CHECK(dist.truncation_deficit() >= 0.0);
      CHECK(total + dist.truncation_deficit() == doctest::Approx(1.0).epsilon(1e-12));
    }
  // kmax = 6 is adequate at the operating pair probabilities.
  CHECK(PairNumberDistribution(PairStats::Thermal, 0.05, 6).truncation_deficit() < 1e-9);
  CHECK(PairNumberDistribution(PairStats::Poisson, 0.05, 6).truncation_deficit() < 1e-9);
}

TEST_CASE("thermal ratio P(k+1)/P(k) is mu/(1+mu)") {
  const double mu = 0.37;
  const PairNumberDistribution dist(PairStats::Thermal, mu, 30);
  for (int k = 0; k < 30; ++k)
    CHECK(dist.pmf(k + 1) / dist.pmf(k) == doctest::Approx(mu / (1.0 + mu)).epsilon(1e-14));
}

TEST_CASE("herald click probability") {
  CHECK(PairNumberDistribution(PairStats::Thermal, 0.05, 6).herald_click_prob(0.0, 0.0) == 0.0);

  // Low-power regime: h is close to p * eta_i.
  const double mu = mu_from_p(PairStats::Thermal, 0.046);
  const double h = PairNumberDistribution(PairStats::Thermal, mu, 6).herald_click_prob(0.079, 0.0);
  CHECK(h == doctest::Approx(0.046 * 0.079).epsilon(0.05));

  CHECK(PairNumberDistribution(PairStats::Thermal, 0.05, 6).herald_click_prob(0.079, 0.0) ==
        doctest::Approx(1.0 - 1.0 / (1.0 + 0.05 * 0.079)).epsilon(1e-12));

  // Closed form vs. direct series summation over k <= 50.
  for (const auto stats : {PairStats::Thermal, PairStats::Poisson})
    for (const double mu_i : {0.01, 0.05, 0.1, 0.2})
      for (const double eta : {0.0, 0.079, 0.5, 1.0})
        for (const double dark : {0.0, 0.01}) {
          double series = 0.0;
          for (int k = 0; k <= 50; ++k)
            series += pmf_reference(stats, mu_i, k) * std::pow(1.0 - eta, k);
          const double expected = 1.0 - (1.0 - dark) * series;
          const PairNumberDistribution dist(stats, mu_i, 50);
          CHECK(dist.herald_click_prob(eta, dark) == doctest::Approx(expected).epsilon(1e-10));
          // The tail-absorbed variant agrees up to the truncation deficit.
          CHECK(std::abs(dist.herald_click_prob_truncated(eta, dark) -
                         dist.herald_click_prob(eta, dark)) <=
                dist.truncation_deficit() + 1e-15);
        }
}

TEST_CASE("herald click probability is monotone in mu, eta, and dark counts") {
  double prev = -1.0;
  for (const double mu : {0.0, 0.01, 0.05, 0.2, 1.0}) {
    const double h = PairNumberDistribution(PairStats::Thermal, mu, 30).herald_click_prob(0.3, 0.0);
    CHECK(h >= prev);
    prev = h;
  }
  prev = -1.0;
  for (const double eta : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const double h = PairNumberDistribution(PairStats::Poisson, 0.1, 30).herald_click_prob(eta, 0.0);
    CHECK(h >= prev);
    prev = h;
  }
  prev = -1.0;
  for (const double dark : {0.0, 0.01, 0.1, 0.5}) {
    const double h = PairNumberDistribution(PairStats::Thermal, 0.1, 30).herald_click_prob(0.3, dark);
    CHECK(h >= prev);
    prev = h;
  }
}

TEST_CASE("p <-> mu conversions") {
  CHECK(mu_from_p(PairStats::Thermal, 0.0) == 0.0);
  CHECK(mu_from_p(PairStats::Poisson, 0.0) == 0.0);
  CHECK(mu_from_p(PairStats::Thermal, 0.046) == doctest::Approx(0.04822).epsilon(1e-4));
  CHECK(mu_from_p(PairStats::Poisson, 0.046) == doctest::Approx(0.04709).epsilon(1e-4));

  // mu is defined by P(0) = 1 - p.
  for (const auto stats : {PairStats::Thermal, PairStats::Poisson}) {
    const double mu = mu_from_p(stats, 0.046);
    CHECK(PairNumberDistribution(stats, mu, 6).pmf(0) == doctest::Approx(1.0 - 0.046).epsilon(1e-12));
  }

  for (const auto stats : {PairStats::Thermal, PairStats::Poisson})
    for (const double p : {0.0, 1e-6, 0.046, 0.3, 0.9, 0.999})
      CHECK(p_from_mu(stats, mu_from_p(stats, p)) == doctest::Approx(p).epsilon(1e-12));

  CHECK_THROWS_AS(mu_from_p(PairStats::Thermal, 1.0), RangeError);
  CHECK_THROWS_AS(mu_from_p(PairStats::Thermal, -0.1), RangeError);
  CHECK_THROWS_AS(p_from_mu(PairStats::Poisson, -1.0), RangeError);
}

TEST_CASE("sampling reproduces the distribution") {
  SUBCASE("mu = 0 always yields vacuum") {
    const PairNumberDistribution dist(PairStats::Thermal, 0.0, 6);
    CounterRng rng(1, 0);
    for (int i = 0; i < 100; ++i) CHECK(dist.sample(rng) == 0);
  }

  SUBCASE("thermal pair fraction at the operating point") {
    const double mu = mu_from_p(PairStats::Thermal, 0.046);
    const PairNumberDistribution dist(PairStats::Thermal, mu, 6);
    const std::uint64_t n = 10'000'000;
    std::uint64_t at_least_one = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      CounterRng rng(20240601, i);
      if (dist.sample(rng) >= 1) ++at_least_one;
    }
    const double frac = static_cast<double>(at_least_one) / static_cast<double>(n);
    const double sigma = std::sqrt(0.046 * (1.0 - 0.046) / static_cast<double>(n));
    CHECK(std::abs(frac - 0.046) < 3.0 * sigma);
  }

  SUBCASE("poisson sample mean") {
    const PairNumberDistribution dist(PairStats::Poisson, 1.0, 16);
    const std::uint64_t n = 10'000'000;
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      CounterRng rng(77, i);
      total += dist.sample(rng);
    }
    const double mean = static_cast<double>(total) / static_cast<double>(n);
    CHECK(std::abs(mean - 1.0) < 0.002);
  }

  SUBCASE("multinomial counts within 5 sigma") {
    const PairNumberDistribution dist(PairStats::Thermal, 0.1, 6);
    const std::uint64_t n = 1'000'000;
    std::vector<std::uint64_t> counts(7, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      CounterRng rng(5150, i);
      ++counts[dist.sample(rng)];
    }
    for (int k = 0; k <= 6; ++k) {
      double expect = dist.pmf(k);
      if (k == 6) expect += dist.truncation_deficit();  // tail-absorbed bin
      const double mean = expect * static_cast<double>(n);
      const double sigma = std::sqrt(mean * (1.0 - expect));
      CHECK(std::abs(static_cast<double>(counts[k]) - mean) <= 5.0 * sigma + 1.0);
    }
  }
}
