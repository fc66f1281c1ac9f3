#include "hmux/photon_statistics.hpp"

#include <cmath>
#include <string>

namespace hmux {

namespace {

void require_finite_prob(double p, const char* what) {
  if (!std::isfinite(p) || p < 0.0 || p >= 1.0)
    throw RangeError(std::string(what) + " must lie in [0, 1), got " + std::to_string(p));
}

void require_unit(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw RangeError(std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
}

}  // namespace

double p_from_mu(PairStats model, double mu) {
  if (!std::isfinite(mu) || mu < 0.0)
    throw RangeError("mu must be >= 0, got " + std::to_string(mu));
  switch (model) {
    case PairStats::Thermal:
      return mu / (1.0 + mu);
    case PairStats::Poisson:
      return -std::expm1(-mu);
  }
  throw RangeError("unknown pair statistics model");
}

double mu_from_p(PairStats model, double p) {
  require_finite_prob(p, "p");
  switch (model) {
    case PairStats::Thermal:
      return p / (1.0 - p);
    case PairStats::Poisson:
      return -std::log1p(-p);
  }
  throw RangeError("unknown pair statistics model");
}

PairNumberDistribution::PairNumberDistribution(PairStats model, double mu, int kmax)
    : model_(model), mu_(mu), kmax_(kmax) {
  if (!std::isfinite(mu) || mu < 0.0)
    throw RangeError("mu must be >= 0, got " + std::to_string(mu));
  if (kmax < 1) throw RangeError("kmax must be >= 1, got " + std::to_string(kmax));

  pmf_.resize(static_cast<std::size_t>(kmax) + 1);
  double total = 0.0;
  if (model == PairStats::Thermal) {
    const double ratio = mu / (1.0 + mu);  // P(k+1)/P(k), exact
    pmf_[0] = 1.0 / (1.0 + mu);
    for (int k = 1; k <= kmax; ++k) pmf_[k] = pmf_[k - 1] * ratio;
  } else {
    pmf_[0] = std::exp(-mu);
    for (int k = 1; k <= kmax; ++k) pmf_[k] = pmf_[k - 1] * mu / k;
  }
  for (double v : pmf_) total += v;
  deficit_ = std::max(0.0, 1.0 - total);
}

double PairNumberDistribution::pmf(int k) const {
  if (k < 0) throw RangeError("pair number k must be >= 0");
  if (k > kmax_)
    throw TruncationError("pair number " + std::to_string(k) + " beyond cutoff kmax = " +
                          std::to_string(kmax_));
  return pmf_[k];
}

double PairNumberDistribution::herald_click_prob(double eta_idler,
                                                 double dark_count_prob) const {
  require_unit(eta_idler, "eta_idler");
  require_unit(dark_count_prob, "dark_count_prob");
  const double no_dark = 1.0 - dark_count_prob;
  if (model_ == PairStats::Thermal)
    return 1.0 - no_dark / (1.0 + mu_ * eta_idler);
  return 1.0 - no_dark * std::exp(-mu_ * eta_idler);
}

double PairNumberDistribution::herald_click_prob_truncated(double eta_idler,
                                                           double dark_count_prob) const {
  require_unit(eta_idler, "eta_idler");
  require_unit(dark_count_prob, "dark_count_prob");
  const double miss = 1.0 - eta_idler;
  double no_click = 0.0;
  double miss_pow = 1.0;
  for (int k = 0; k <= kmax_; ++k) {
    double mass = pmf_[k];
    if (k == kmax_) mass += deficit_;  // tail-absorbed, as sampled
    no_click += mass * miss_pow;
    miss_pow *= miss;
  }
  return 1.0 - (1.0 - dark_count_prob) * no_click;
}

int PairNumberDistribution::sample(CounterRng& rng) const {
  double u = rng.next_unit();
  for (int k = 0; k < kmax_; ++k) {
    if (u < pmf_[k]) return k;
    u -= pmf_[k];
  }
  return kmax_;  // absorbs the tail and rounding slack
}

}  // namespace hmux
