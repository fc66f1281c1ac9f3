#pragma once

#include <vector>

#include "hmux/params.hpp"

namespace hmux {

struct ModelPrediction {
  int n_sources = 0;
  double p_herald = 0.0;       // P(any herald) per clock cycle
  double p_single = 0.0;       // heralded output click probability per clock cycle
  double herald_rate_hz = 0.0;
  double single_rate_hz = 0.0;
  double enhancement = 0.0;    // p_single(n) / p_single(1)
};

/// P(at least one of n bins heralds) = 1 - (1 - h)^n, h = per-bin herald
/// probability. Strictly increasing in n for h in (0, 1).
double heralding_probability(int n, double h);

/// Heralded output click probability in the single-pair approximation: the
/// latched photon survives one fixed signal path (eta_signal) plus one loop
/// circulation per bin between the trigger bin and the final (output) bin.
///
///   FirstHerald: h eta_s sum_{j=1..n} (1-h)^(j-1) eta_rt^(n-j)
///   LastHerald:  h eta_s sum_{j=1..n} (1-h)^(n-j) eta_rt^(n-j)
double heralded_probability(int n, double h, double eta_signal, double eta_roundtrip,
                            Policy policy);

/// p_single(n) / p_single(1). Independent of eta_signal; exactly 1 at n = 1.
double enhancement(int n, double h, double eta_roundtrip, Policy policy);

/// Solve enhancement(n, h, eta_rt, policy) = target_e for eta_rt by bisection
/// on (0, 1] (enhancement is continuous and strictly increasing in eta_rt).
/// Converges to |E - target| < 1e-9 in at most 200 iterations. Throws
/// NoSolutionError with the attainable range if target_e < 1 or exceeds the
/// lossless maximum.
double calibrate_roundtrip(double target_e, int n, double h, Policy policy);

/// Smallest n in [1, n_max] maximizing heralded_probability; ties break
/// toward smaller n.
int optimal_n(double h, double eta_signal, double eta_roundtrip, Policy policy, int n_max);

/// Per-bin herald probability fed into the model.
///   FirstOrder: 1 - (1-d)(1 - p eta_i), the first-order form p eta_i the
///               measured anchors are quoted in.
///   Threshold:  exact click probability of the threshold detector for the
///               configured pair statistics (tail-absorbed at kmax, matching
///               the Monte Carlo sampler bit for bit in expectation).
enum class HeraldModel { FirstOrder, Threshold };

double herald_prob_per_bin(const ValidatedParams& params, HeraldModel model);

ModelPrediction predict(const ValidatedParams& params, int n, Policy policy,
                        HeraldModel model = HeraldModel::FirstOrder);

/// One prediction per n = 1..n_max; rates use 1 / clock_period.
std::vector<ModelPrediction> predict_sweep(const ValidatedParams& params, Policy policy,
                                           int n_max,
                                           HeraldModel model = HeraldModel::FirstOrder);

}  // namespace hmux
