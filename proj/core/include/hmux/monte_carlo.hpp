#pragma once

#include <cstdint>
#include <vector>

#include "hmux/analytic_model.hpp"
#include "hmux/params.hpp"

namespace hmux {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for k successes in n trials (default 95%).
WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n,
                               double z = 1.959963984540054);

struct SimResult {
  std::uint64_t cycles = 0;
  std::uint64_t herald_cycles = 0;  // cycles with at least one herald click
  std::uint64_t single_clicks = 0;  // heralded cycles with an output click
  std::uint64_t sum_m = 0;          // surviving output photons over heralded cycles
  std::uint64_t sum_m_mm1 = 0;      // sum of m(m-1) over heralded cycles
  std::vector<std::uint64_t> m_histogram;  // per output photon number m, heralded cycles

  double p_herald_hat = 0.0;
  WilsonInterval p_herald_ci;
  double p_single_hat = 0.0;
  WilsonInterval p_single_ci;
  double mean_output_photons = 0.0;  // over heralded cycles
  double g2_heralded_hat = 0.0;      // herald_cycles * sum_m_mm1 / sum_m^2 (0 if sum_m = 0)

  std::uint64_t seed = 0;
  Policy policy = Policy::FirstHerald;
  ExperimentParams params;  // normalized snapshot
};

/// Stochastic simulation of `cycles` clock cycles. Per cycle: sample k pairs
/// per bin (tail-absorbed at kmax), herald click per bin with probability
/// 1 - (1-d)(1-eta_i)^k, latch a trigger bin per policy, let each of the
/// trigger bin's signal photons survive independently with probability
/// eta_s * eta_rt^(n - trigger), and count a click iff any survives.
///
/// Each cycle draws from its own counter-keyed RNG substream, so the result
/// is bit-identical for a fixed (seed, params) across runs and across any
/// worker partitioning. workers = 0 picks a hardware-based count.
SimResult simulate(const ValidatedParams& params, std::uint64_t cycles, std::uint64_t seed,
                   int workers = 0);

struct G2Estimate {
  double g2 = 0.0;
  double ci_lo = 0.0;   // bootstrap percentile bounds, 95%
  double ci_hi = 0.0;
  std::uint64_t heralded_cycles = 0;
};

/// Heralded g2 = <m(m-1)> / <m>^2 with a bootstrap CI (multinomial resampling
/// of the heralded-cycle photon-number histogram). Throws
/// InsufficientStatisticsError below 100 heralded cycles.
G2Estimate estimate_g2_heralded(const SimResult& result, int resamples = 1000);
G2Estimate estimate_g2_heralded(const ValidatedParams& params, std::uint64_t cycles,
                                std::uint64_t seed, int workers = 0, int resamples = 1000);

struct ComparisonReport {
  double z_herald = 0.0;
  double z_single = 0.0;
  bool pass = false;  // |z| < 3 on both
};

/// z-scores of the simulated probabilities against a model prediction, using
/// the model probability as the null. MismatchError if the bin counts differ;
/// InsufficientStatisticsError for an empty simulation.
ComparisonReport compare_to_analytic(const SimResult& sim, const ModelPrediction& model);

}  // namespace hmux
