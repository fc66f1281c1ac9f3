#pragma once

#include <vector>

#include "hmux/params.hpp"
#include "hmux/rng.hpp"

namespace hmux {

/// P(k >= 1) for the given pair-number model.
/// Thermal: mu / (1 + mu); Poisson: 1 - exp(-mu).
double p_from_mu(PairStats model, double mu);

/// Inverse of p_from_mu. Thermal: p / (1 - p); Poisson: -log(1 - p).
double mu_from_p(PairStats model, double p);

/// Photon-pair number distribution of one pump pulse, truncated at kmax for
/// enumeration and sampling.
///
///   Thermal: P(k) = mu^k / (1 + mu)^(k + 1)
///   Poisson: P(k) = exp(-mu) mu^k / k!
///
/// Sampling uses the tail-absorbed variant: all mass above kmax collapses
/// onto kmax. truncation_deficit() reports that mass; the experiment
/// validation in core_params keeps it below 1e-9 at the operating mu.
class PairNumberDistribution {
 public:
  PairNumberDistribution(PairStats model, double mu, int kmax);

  /// Untruncated P(k). TruncationError for k > kmax.
  double pmf(int k) const;

  /// 1 - sum_{k <= kmax} P(k).
  double truncation_deficit() const { return deficit_; }

  /// Click probability of a threshold (non-photon-number-resolving) herald
  /// detector with efficiency eta and dark-count probability d per bin:
  ///   h = 1 - (1 - d) sum_k P(k) (1 - eta)^k
  /// evaluated in closed form (Thermal: 1 - (1-d)/(1 + mu eta); Poisson:
  /// 1 - (1-d) exp(-mu eta)).
  double herald_click_prob(double eta_idler, double dark_count_prob) const;

  /// Same quantity for the tail-absorbed model actually sampled by
  /// sample(); equals the closed form up to the truncation deficit.
  double herald_click_prob_truncated(double eta_idler, double dark_count_prob) const;

  /// Inverse-CDF draw from the tail-absorbed distribution. Consumes exactly
  /// one uniform.
  int sample(CounterRng& rng) const;

  PairStats model() const { return model_; }
  double mu() const { return mu_; }
  int kmax() const { return kmax_; }

 private:
  PairStats model_;
  double mu_;
  int kmax_;
  std::vector<double> pmf_;  // P(0..kmax), untruncated values
  double deficit_;
};

}  // namespace hmux
