#include "hmux/analytic_model.hpp"

#include <cmath>
#include <sstream>

#include "hmux/photon_statistics.hpp"

namespace hmux {

namespace {

void require_n(int n) {
  if (n < 1) throw RangeError("n must be >= 1, got " + std::to_string(n));
}

void require_unit(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    std::ostringstream os;
    os << what << " must lie in [0, 1], got " << v;
    throw RangeError(os.str());
  }
}

// S(n) = p_single(n) / (h eta_s). FirstHerald sums (1-h)^(j-1) eta_rt^(n-j),
// LastHerald sums ((1-h) eta_rt)^(n-j); both via the one-step recurrences
//   First: S(n+1) = eta_rt S(n) + (1-h)^n
//   Last:  S(n+1) = (1-h) eta_rt S(n) + 1
// so S(1) = 1 exactly and the enhancement needs no division.
double survival_weighted_sum(int n, double h, double eta_roundtrip, Policy policy) {
  const double q = 1.0 - h;
  double s = 0.0;
  if (policy == Policy::FirstHerald) {
    double q_pow = 1.0;
    for (int j = 0; j < n; ++j) {
      s = eta_roundtrip * s + q_pow;
      q_pow *= q;
    }
  } else {
    const double r = q * eta_roundtrip;
    for (int j = 0; j < n; ++j) s = s * r + 1.0;
  }
  return s;
}

}  // namespace

double heralding_probability(int n, double h) {
  require_n(n);
  require_unit(h, "h");
  return 1.0 - std::pow(1.0 - h, n);
}

double heralded_probability(int n, double h, double eta_signal, double eta_roundtrip,
                            Policy policy) {
  require_n(n);
  require_unit(h, "h");
  require_unit(eta_signal, "eta_signal");
  require_unit(eta_roundtrip, "eta_roundtrip");
  return h * eta_signal * survival_weighted_sum(n, h, eta_roundtrip, policy);
}

double enhancement(int n, double h, double eta_roundtrip, Policy policy) {
  require_n(n);
  require_unit(h, "h");
  require_unit(eta_roundtrip, "eta_roundtrip");
  return survival_weighted_sum(n, h, eta_roundtrip, policy);
}

double calibrate_roundtrip(double target_e, int n, double h, Policy policy) {
  require_n(n);
  if (!std::isfinite(h) || h <= 0.0 || h >= 1.0)
    throw RangeError("h must lie in (0, 1) to calibrate, got " + std::to_string(h));
  if (!std::isfinite(target_e)) throw RangeError("target enhancement must be finite");

  const double e_max = enhancement(n, h, 1.0, policy);
  if (target_e < 1.0 || target_e > e_max) {
    std::ostringstream os;
    os << "target enhancement " << target_e << " outside the attainable range [1, " << e_max
       << "] for n = " << n << ", h = " << h;
    throw NoSolutionError(os.str(), 1.0, e_max);
  }

  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double e = enhancement(n, h, mid, policy);
    if (std::abs(e - target_e) < 1e-9) return mid;
    if (e < target_e)
      lo = mid;
    else
      hi = mid;
  }
  // Unreachable for a monotone, continuous enhancement; 200 halvings shrink
  // the bracket far below the 1e-9 tolerance.
  throw Error("calibrate_roundtrip: bisection did not converge");
}

int optimal_n(double h, double eta_signal, double eta_roundtrip, Policy policy, int n_max) {
  if (n_max < 1) throw RangeError("n_max must be >= 1, got " + std::to_string(n_max));
  int best_n = 1;
  double best = heralded_probability(1, h, eta_signal, eta_roundtrip, policy);
  for (int n = 2; n <= n_max; ++n) {
    const double v = heralded_probability(n, h, eta_signal, eta_roundtrip, policy);
    if (v > best) {
      best = v;
      best_n = n;
    }
  }
  return best_n;
}

double herald_prob_per_bin(const ValidatedParams& params, HeraldModel model) {
  const auto& ch = params.channel();
  if (model == HeraldModel::FirstOrder) {
    const double p1 = params.pair_prob_p() * ch.eta_idler;
    return 1.0 - (1.0 - ch.dark_count_prob) * (1.0 - p1);
  }
  const PairNumberDistribution dist(params.source().stats_model, params.mean_pairs_mu(),
                                    params.source().pair_cutoff_kmax);
  return dist.herald_click_prob_truncated(ch.eta_idler, ch.dark_count_prob);
}

ModelPrediction predict(const ValidatedParams& params, int n, Policy policy,
                        HeraldModel model) {
  const double h = herald_prob_per_bin(params, model);
  const auto& ch = params.channel();
  const double rate = params.clock().clock_rate_hz();

  ModelPrediction out;
  out.n_sources = n;
  out.p_herald = heralding_probability(n, h);
  out.p_single = heralded_probability(n, h, ch.eta_signal_fixed, ch.eta_roundtrip, policy);
  out.herald_rate_hz = out.p_herald * rate;
  out.single_rate_hz = out.p_single * rate;
  out.enhancement = enhancement(n, h, ch.eta_roundtrip, policy);
  return out;
}

std::vector<ModelPrediction> predict_sweep(const ValidatedParams& params, Policy policy,
                                           int n_max, HeraldModel model) {
  if (n_max < 1) throw RangeError("n_max must be >= 1, got " + std::to_string(n_max));
  std::vector<ModelPrediction> out;
  out.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) out.push_back(predict(params, n, policy, model));
  return out;
}

}  // namespace hmux
