#include "hmux/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "hmux/photon_statistics.hpp"

namespace hmux {

WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) throw RangeError("wilson_interval needs n >= 1");
  if (k > n) throw RangeError("wilson_interval needs k <= n");
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct Tally {
  std::uint64_t herald_cycles = 0;
  std::uint64_t single_clicks = 0;
  std::uint64_t sum_m = 0;
  std::uint64_t sum_m_mm1 = 0;
  std::vector<std::uint64_t> m_hist;

  explicit Tally(std::size_t hist_size) : m_hist(hist_size, 0) {}

  void merge(const Tally& other) {
    herald_cycles += other.herald_cycles;
    single_clicks += other.single_clicks;
    sum_m += other.sum_m;
    sum_m_mm1 += other.sum_m_mm1;
    for (std::size_t i = 0; i < m_hist.size(); ++i) m_hist[i] += other.m_hist[i];
  }
};

// Everything the per-cycle loop needs, precomputed once.
struct SimTables {
  int n_bins;
  int kmax;
  Policy policy;
  std::vector<double> pmf;        // P(0..kmax); sampler falls through to kmax
  std::vector<double> click_prob; // herald click probability per pair count k
  std::vector<double> survive;    // eta_s * eta_rt^(n - j) per bin j (index j-1)
};

SimTables make_tables(const ValidatedParams& params) {
  const auto& src = params.source();
  const auto& ch = params.channel();
  const int n = params.clock().n_bins;
  const int kmax = src.pair_cutoff_kmax;

  SimTables t;
  t.n_bins = n;
  t.kmax = kmax;
  t.policy = params.switch_spec().policy;

  const PairNumberDistribution dist(src.stats_model, params.mean_pairs_mu(), kmax);
  t.pmf.resize(kmax + 1);
  for (int k = 0; k <= kmax; ++k) t.pmf[k] = dist.pmf(k);

  t.click_prob.resize(kmax + 1);
  const double no_dark = 1.0 - ch.dark_count_prob;
  double miss_pow = 1.0;
  for (int k = 0; k <= kmax; ++k) {
    t.click_prob[k] = 1.0 - no_dark * miss_pow;
    miss_pow *= 1.0 - ch.eta_idler;
  }

  // survive[j-1] for bin j, built by repeated multiplication so every worker
  // computes identical values.
  t.survive.resize(n);
  double s = ch.eta_signal_fixed;
  for (int j = n; j >= 1; --j) {
    t.survive[j - 1] = s;
    s *= ch.eta_roundtrip;
  }
  return t;
}

// One worker's pass over the contiguous cycle range [begin, end).
Tally run_range(const SimTables& t, std::uint64_t seed, std::uint64_t begin,
                std::uint64_t end) {
  Tally tally(t.kmax + 1);
  std::vector<int> pairs(t.n_bins);

  for (std::uint64_t cycle = begin; cycle < end; ++cycle) {
    CounterRng rng(seed, cycle);

    // Draw order is fixed: per bin one pair-count uniform, then one click
    // uniform whenever the click probability is nonzero.
    int trigger = 0;  // 1-based; 0 = none
    for (int j = 0; j < t.n_bins; ++j) {
      double u = rng.next_unit();
      int k = t.kmax;
      for (int kk = 0; kk < t.kmax; ++kk) {
        if (u < t.pmf[kk]) {
          k = kk;
          break;
        }
        u -= t.pmf[kk];
      }
      pairs[j] = k;

      const double cp = t.click_prob[k];
      const bool click = cp > 0.0 && rng.next_unit() < cp;
      if (click && (t.policy == Policy::LastHerald || trigger == 0)) trigger = j + 1;
    }
    if (trigger == 0) continue;

    ++tally.herald_cycles;
    const double s = t.survive[trigger - 1];
    int m = 0;
    for (int i = 0; i < pairs[trigger - 1]; ++i)
      if (rng.next_unit() < s) ++m;

    if (m > 0) ++tally.single_clicks;
    tally.sum_m += m;
    if (m >= 2) tally.sum_m_mm1 += static_cast<std::uint64_t>(m) * (m - 1);
    ++tally.m_hist[m];
  }
  return tally;
}

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

double g2_point(std::uint64_t heralded, std::uint64_t sum_m, std::uint64_t sum_m_mm1) {
  if (sum_m == 0) return 0.0;
  const double b = static_cast<double>(sum_m);
  return static_cast<double>(heralded) * static_cast<double>(sum_m_mm1) / (b * b);
}

}  // namespace

SimResult simulate(const ValidatedParams& params, std::uint64_t cycles, std::uint64_t seed,
                   int workers) {
  if (cycles < 1) throw RangeError("cycles must be >= 1");
  if (workers < 0) throw RangeError("workers must be >= 0");

  const SimTables tables = make_tables(params);
  const std::uint64_t w =
      std::min<std::uint64_t>(workers == 0 ? default_workers() : workers, cycles);

  Tally total(tables.kmax + 1);
  if (w <= 1) {
    total = run_range(tables, seed, 0, cycles);
  } else {
    std::vector<Tally> parts(w, Tally(tables.kmax + 1));
    std::vector<std::thread> threads;
    threads.reserve(w);
    const std::uint64_t chunk = cycles / w;
    const std::uint64_t rem = cycles % w;
    std::uint64_t begin = 0;
    for (std::uint64_t i = 0; i < w; ++i) {
      const std::uint64_t end = begin + chunk + (i < rem ? 1 : 0);
      threads.emplace_back(
          [&tables, seed, begin, end, &part = parts[i]] { part = run_range(tables, seed, begin, end); });
      begin = end;
    }
    for (auto& th : threads) th.join();
    // Integer-count merge: associative and order-independent, so the result
    // does not depend on the partitioning.
    for (const auto& part : parts) total.merge(part);
  }

  SimResult r;
  r.cycles = cycles;
  r.herald_cycles = total.herald_cycles;
  r.single_clicks = total.single_clicks;
  r.sum_m = total.sum_m;
  r.sum_m_mm1 = total.sum_m_mm1;
  r.m_histogram = std::move(total.m_hist);
  r.p_herald_hat = static_cast<double>(r.herald_cycles) / static_cast<double>(cycles);
  r.p_herald_ci = wilson_interval(r.herald_cycles, cycles);
  r.p_single_hat = static_cast<double>(r.single_clicks) / static_cast<double>(cycles);
  r.p_single_ci = wilson_interval(r.single_clicks, cycles);
  r.mean_output_photons =
      r.herald_cycles == 0
          ? 0.0
          : static_cast<double>(r.sum_m) / static_cast<double>(r.herald_cycles);
  r.g2_heralded_hat = g2_point(r.herald_cycles, r.sum_m, r.sum_m_mm1);
  r.seed = seed;
  r.policy = params.switch_spec().policy;
  r.params = params.get();
  return r;
}

namespace {

constexpr std::uint64_t kBootstrapSalt = 0x626f6f7473747261ULL;

double gaussian(CounterRng& rng) {
  // Box-Muller; consumes two uniforms.
  const double u1 = rng.next_unit();
  const double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(6.283185307179586 * u2);
}

// Binomial(n, p) draw: exact CDF inversion where the pmf cannot underflow,
// normal approximation for large means (fine for bootstrap resampling).
std::uint64_t binomial(std::uint64_t n, double p, CounterRng& rng) {
  if (p <= 0.0 || n == 0) return 0;
  if (p >= 1.0) return n;
  const double np = static_cast<double>(n) * p;
  const double nq = static_cast<double>(n) * (1.0 - p);
  if (np <= 30.0 || nq <= 30.0) {
    const bool flip = nq < np;
    const double pp = flip ? 1.0 - p : p;
    const double nn = static_cast<double>(n);
    double pmf = std::exp(nn * std::log1p(-pp));  // (1-pp)^n, no underflow here
    double u = rng.next_unit();
    std::uint64_t k = 0;
    while (u >= pmf && k < n) {
      u -= pmf;
      pmf *= (nn - static_cast<double>(k)) / (static_cast<double>(k) + 1.0) * pp / (1.0 - pp);
      ++k;
    }
    return flip ? n - k : k;
  }
  const double mean = np;
  const double sd = std::sqrt(np * (1.0 - p));
  const double draw = std::round(mean + sd * gaussian(rng));
  if (draw <= 0.0) return 0;
  if (draw >= static_cast<double>(n)) return n;
  return static_cast<std::uint64_t>(draw);
}

}  // namespace

G2Estimate estimate_g2_heralded(const SimResult& result, int resamples) {
  if (resamples < 1) throw RangeError("resamples must be >= 1");
  if (result.herald_cycles < 100)
    throw InsufficientStatisticsError("heralded cycles = " +
                                      std::to_string(result.herald_cycles) +
                                      " < 100; increase cycles");

  const auto& hist = result.m_histogram;
  const std::uint64_t n_her = result.herald_cycles;

  std::vector<double> g2s(resamples);
  for (int b = 0; b < resamples; ++b) {
    CounterRng rng(result.seed ^ kBootstrapSalt, static_cast<std::uint64_t>(b));
    // Multinomial resample of the heralded-cycle histogram via chained
    // binomials.
    std::uint64_t remaining = n_her;
    double remaining_p = 1.0;
    std::uint64_t sum_m = 0;
    std::uint64_t sum_mm1 = 0;
    for (std::size_t m = 0; m < hist.size() && remaining > 0; ++m) {
      const double pm = static_cast<double>(hist[m]) / static_cast<double>(n_her);
      std::uint64_t cm;
      if (m + 1 == hist.size() || remaining_p <= pm) {
        cm = remaining;
      } else {
        cm = binomial(remaining, std::clamp(pm / remaining_p, 0.0, 1.0), rng);
      }
      remaining -= cm;
      remaining_p = std::max(0.0, remaining_p - pm);
      sum_m += cm * m;
      sum_mm1 += cm * static_cast<std::uint64_t>(m) * (m > 0 ? m - 1 : 0);
    }
    g2s[b] = g2_point(n_her, sum_m, sum_mm1);
  }
  std::sort(g2s.begin(), g2s.end());
  const auto pick = [&g2s](double q) {
    const std::size_t idx = static_cast<std::size_t>(q * (g2s.size() - 1));
    return g2s[idx];
  };

  G2Estimate est;
  est.g2 = result.g2_heralded_hat;
  est.ci_lo = pick(0.025);
  est.ci_hi = pick(0.975);
  est.heralded_cycles = n_her;
  return est;
}

G2Estimate estimate_g2_heralded(const ValidatedParams& params, std::uint64_t cycles,
                                std::uint64_t seed, int workers, int resamples) {
  return estimate_g2_heralded(simulate(params, cycles, seed, workers), resamples);
}

ComparisonReport compare_to_analytic(const SimResult& sim, const ModelPrediction& model) {
  if (sim.cycles == 0)
    throw InsufficientStatisticsError("empty simulation cannot be compared");
  if (model.n_sources != sim.params.clock.n_bins)
    throw MismatchError("prediction is for n = " + std::to_string(model.n_sources) +
                        " but the simulation ran n = " +
                        std::to_string(sim.params.clock.n_bins));

  const auto z_score = [cycles = sim.cycles](double hat, double p) {
    const double var = p * (1.0 - p) / static_cast<double>(cycles);
    if (var <= 0.0) return hat == p ? 0.0 : std::numeric_limits<double>::infinity();
    return (hat - p) / std::sqrt(var);
  };

  ComparisonReport rep;
  rep.z_herald = z_score(sim.p_herald_hat, model.p_herald);
  rep.z_single = z_score(sim.p_single_hat, model.p_single);
  rep.pass = std::abs(rep.z_herald) < 3.0 && std::abs(rep.z_single) < 3.0;
  return rep;
}

}  // namespace hmux
