#include "hmux/params.hpp"

#include <cmath>
#include <sstream>

#include "hmux/photon_statistics.hpp"

namespace hmux {

const char* to_string(PairStats m) {
  return m == PairStats::Thermal ? "thermal" : "poisson";
}

const char* to_string(Policy p) {
  return p == Policy::FirstHerald ? "first" : "last";
}

std::int64_t ClockConfig::ticks_per_bin() const {
  return static_cast<std::int64_t>(std::llround(bin_spacing_ps / tick_ps));
}

namespace {

constexpr double kTruncationGuard = 1e-9;

struct Checker {
  std::vector<ParamError> errors;

  void range(const std::string& field, const std::string& message) {
    errors.push_back({ParamFault::Range, field, message});
  }
  void consistency(const std::string& field, const std::string& message) {
    errors.push_back({ParamFault::Consistency, field, message});
  }

  bool unit_interval(const std::string& field, double v, bool open_top = false) {
    const bool ok = std::isfinite(v) && v >= 0.0 && (open_top ? v < 1.0 : v <= 1.0);
    if (!ok) {
      std::ostringstream os;
      os << "must lie in [0, 1" << (open_top ? ")" : "]") << ", got " << v;
      range(field, os.str());
    }
    return ok;
  }

  bool non_negative(const std::string& field, double v) {
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream os;
      os << "must be >= 0, got " << v;
      range(field, os.str());
      return false;
    }
    return true;
  }

  bool positive(const std::string& field, double v) {
    if (!std::isfinite(v) || v <= 0.0) {
      std::ostringstream os;
      os << "must be > 0, got " << v;
      range(field, os.str());
      return false;
    }
    return true;
  }
};

// Checks everything checkable and, when possible, resolves the p/mu pair so
// dependent checks (truncation guard) can run. Returns the resolved mu when
// available.
std::vector<ParamError> run_checks(const ExperimentParams& p, double* mu_out) {
  Checker c;

  // -- source --------------------------------------------------------------
  const auto& src = p.source;
  bool p_ok = false;
  bool mu_ok = false;
  if (src.pair_prob_p) p_ok = c.unit_interval("source.pair_prob_p", *src.pair_prob_p, true);
  if (src.mean_pairs_mu) mu_ok = c.non_negative("source.mean_pairs_mu", *src.mean_pairs_mu);

  double mu = -1.0;
  if (!src.pair_prob_p && !src.mean_pairs_mu) {
    c.consistency("source.pair_prob_p", "one of pair_prob_p / mean_pairs_mu is required");
  } else if (p_ok && src.mean_pairs_mu && mu_ok) {
    // Both given: they must describe the same distribution.
    const double derived = mu_from_p(src.stats_model, *src.pair_prob_p);
    const double tol = 1e-12 * std::max(1.0, std::abs(derived));
    if (std::abs(derived - *src.mean_pairs_mu) > tol) {
      std::ostringstream os;
      os << "mean_pairs_mu = " << *src.mean_pairs_mu << " disagrees with pair_prob_p = "
         << *src.pair_prob_p << " (implies mu = " << derived << ")";
      c.consistency("source.mean_pairs_mu", os.str());
    } else {
      mu = *src.mean_pairs_mu;
    }
  } else if (p_ok && !src.mean_pairs_mu) {
    mu = mu_from_p(src.stats_model, *src.pair_prob_p);
  } else if (mu_ok && !src.pair_prob_p) {
    mu = *src.mean_pairs_mu;
  }

  if (src.pair_cutoff_kmax < 1) {
    c.range("source.pair_cutoff_kmax",
            "must be >= 1, got " + std::to_string(src.pair_cutoff_kmax));
  } else if (mu >= 0.0) {
    const double deficit =
        PairNumberDistribution(src.stats_model, mu, src.pair_cutoff_kmax).truncation_deficit();
    if (deficit > kTruncationGuard) {
      std::ostringstream os;
      os << "truncated pair-number mass " << deficit << " exceeds " << kTruncationGuard
         << " at mu = " << mu << "; raise pair_cutoff_kmax";
      c.range("source.pair_cutoff_kmax", os.str());
    }
  }

  // -- channel ---------------------------------------------------------------
  c.unit_interval("channel.eta_idler", p.channel.eta_idler);
  c.unit_interval("channel.eta_signal_fixed", p.channel.eta_signal_fixed);
  c.unit_interval("channel.eta_roundtrip", p.channel.eta_roundtrip);
  c.unit_interval("channel.dark_count_prob", p.channel.dark_count_prob);

  // -- clock -----------------------------------------------------------------
  const auto& clk = p.clock;
  if (clk.n_bins < 1)
    c.range("clock.n_bins", "must be >= 1, got " + std::to_string(clk.n_bins));
  const bool spacing_ok = c.positive("clock.bin_spacing_ps", clk.bin_spacing_ps);
  const bool period_ok = c.positive("clock.clock_period_ns", clk.clock_period_ns);
  if (clk.n_bins >= 1 && spacing_ok && period_ok &&
      clk.n_bins * clk.bin_spacing_ps > clk.clock_period_ns * 1e3) {
    std::ostringstream os;
    os << clk.n_bins << " bins x " << clk.bin_spacing_ps << " ps = "
       << clk.n_bins * clk.bin_spacing_ps << " ps exceed the clock period "
       << clk.clock_period_ns * 1e3 << " ps";
    c.consistency("clock.clock_period_ns", os.str());
  }
  if (clk.output_bin != 0 && clk.output_bin != clk.n_bins) {
    c.consistency("clock.output_bin",
                  "output bin is pinned to the final bin (= n_bins), got " +
                      std::to_string(clk.output_bin));
  }
  if (clk.tick_ps != 0.0 && spacing_ok) {
    if (std::isfinite(clk.tick_ps) && clk.tick_ps > 0.0) {
      const double ratio = clk.bin_spacing_ps / clk.tick_ps;
      if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || ratio < 1.0) {
        std::ostringstream os;
        os << "bin_spacing_ps = " << clk.bin_spacing_ps << " is not an integer multiple of tick_ps = "
           << clk.tick_ps;
        c.consistency("clock.tick_ps", os.str());
      }
    } else {
      c.range("clock.tick_ps", "must be > 0 (or 0 for the default bin_spacing / 8)");
    }
  }

  // -- switch / timing ---------------------------------------------------------
  c.positive("sw.eo_bandwidth_ghz", p.sw.eo_bandwidth_ghz);
  c.non_negative("timing.detector_latency_ns", p.timing.detector_latency_ns);
  c.non_negative("timing.fpga_latency_ns", p.timing.fpga_latency_ns);
  c.non_negative("timing.electrical_latency_ns", p.timing.electrical_latency_ns);
  c.non_negative("timing.fiber_delay_delta_ns", p.timing.fiber_delay_delta_ns);

  if (mu_out) *mu_out = mu;
  return std::move(c.errors);
}

}  // namespace

std::vector<ParamError> check_params(const ExperimentParams& p) {
  return run_checks(p, nullptr);
}

InvalidParamsError::InvalidParamsError(std::vector<ParamError> errors)
    : Error([&errors] {
        std::ostringstream os;
        os << "invalid parameters (" << errors.size() << " problem"
           << (errors.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errors) os << "\n  " << e.field << ": " << e.message;
        return os.str();
      }()),
      errors_(std::move(errors)) {}

ValidatedParams ValidatedParams::validate(ExperimentParams p) {
  double mu = -1.0;
  auto errors = run_checks(p, &mu);
  if (!errors.empty()) throw InvalidParamsError(std::move(errors));

  // Derive only the missing half of the p/mu pair; the given value stays
  // bit-exact, which makes validation idempotent.
  if (!p.source.mean_pairs_mu) p.source.mean_pairs_mu = mu;
  if (!p.source.pair_prob_p)
    p.source.pair_prob_p = p_from_mu(p.source.stats_model, mu);
  if (p.clock.output_bin == 0) p.clock.output_bin = p.clock.n_bins;
  if (p.clock.tick_ps == 0.0) p.clock.tick_ps = p.clock.bin_spacing_ps / 8.0;
  return ValidatedParams(std::move(p));
}

}  // namespace hmux
