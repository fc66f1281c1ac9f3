#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmux/errors.hpp"

namespace hmux {

enum class PairStats { Thermal, Poisson };

// Which heralded bin the controller latches when several bins herald within
// one clock cycle. FirstHerald is causally implementable inside the cycle;
// LastHerald needs a decision delay of n_bins * bin_spacing (reported by the
// timing check).
enum class Policy { FirstHerald, LastHerald };

const char* to_string(PairStats m);
const char* to_string(Policy p);

/// Pair-generation statistics of one time-bin source. Exactly one of
/// pair_prob_p / mean_pairs_mu is given as input; validation derives the
/// other one (p is defined as P(k >= 1)).
struct SourceParams {
  std::optional<double> pair_prob_p;    // pair probability per bin per pulse, [0, 1)
  std::optional<double> mean_pairs_mu;  // mean pairs per pulse, >= 0
  PairStats stats_model = PairStats::Thermal;
  int pair_cutoff_kmax = 6;  // truncation order for enumeration/sampling

  bool operator==(const SourceParams&) const = default;
};

struct ChannelParams {
  double eta_idler = 0.0;         // herald arm transmission x detection, [0, 1]
  double eta_signal_fixed = 0.0;  // signal path incl. exactly one buffer traversal, [0, 1]
  double eta_roundtrip = 1.0;     // per extra storage-loop circulation, [0, 1]
  double dark_count_prob = 0.0;   // herald dark-count probability per bin, [0, 1]

  bool operator==(const ChannelParams&) const = default;
};

/// Clocking of the multiplexer: n_bins pump slots spaced bin_spacing_ps apart
/// inside one clock_period_ns cycle. The storage-loop round trip equals one
/// bin spacing, and the output bin is pinned to the final bin. tick_ps is the
/// switch-control time grid; 0 means "default to bin_spacing / 8".
struct ClockConfig {
  int n_bins = 0;
  double bin_spacing_ps = 0.0;
  double clock_period_ns = 0.0;
  int output_bin = 0;   // 0 = pin to n_bins at validation
  double tick_ps = 0.0; // 0 = default at validation

  double clock_rate_hz() const { return 1.0 / (clock_period_ns * 1e-9); }
  std::int64_t ticks_per_bin() const;

  bool operator==(const ClockConfig&) const = default;
};

struct SwitchSpec {
  double v_pi_volts = 6.0;        // drive amplitude, metadata only
  double eo_bandwidth_ghz = 40.0; // 3-dB electro-optic bandwidth, > 0
  Policy policy = Policy::FirstHerald;

  bool operator==(const SwitchSpec&) const = default;
};

// Herald-to-switch control path latencies. The experiment's actual values are
// not modeled; defaults are placeholders.
struct TimingParams {
  double detector_latency_ns = 0.0;
  double fpga_latency_ns = 0.0;
  double electrical_latency_ns = 0.0;
  double fiber_delay_delta_ns = 0.0;

  bool operator==(const TimingParams&) const = default;
};

struct ExperimentParams {
  SourceParams source;
  ChannelParams channel;
  ClockConfig clock;
  SwitchSpec sw;
  TimingParams timing;

  bool operator==(const ExperimentParams&) const = default;
};

enum class ParamFault { Range, Consistency };

struct ParamError {
  ParamFault fault;
  std::string field;
  std::string message;
};

/// Every violated invariant of the bundle (empty when valid). Checks ranges,
/// clock consistency (n_bins * bin_spacing <= clock_period, tick divides the
/// bin spacing, output bin = final bin), p/mu agreement when both are given,
/// and the pair-number truncation guard (absorbed tail mass <= 1e-9 at the
/// operating mu).
std::vector<ParamError> check_params(const ExperimentParams& p);

class InvalidParamsError : public Error {
 public:
  explicit InvalidParamsError(std::vector<ParamError> errors);
  const std::vector<ParamError>& errors() const { return errors_; }

 private:
  std::vector<ParamError> errors_;
};

/// Immutable, normalized parameter bundle: both p and mu populated
/// consistently, output bin and tick defaulted. Validation is idempotent —
/// revalidating a normalized bundle reproduces it exactly. Safe to share
/// across threads.
class ValidatedParams {
 public:
  // Throws InvalidParamsError carrying the complete violation list.
  static ValidatedParams validate(ExperimentParams p);

  const ExperimentParams& get() const { return p_; }
  const SourceParams& source() const { return p_.source; }
  const ChannelParams& channel() const { return p_.channel; }
  const ClockConfig& clock() const { return p_.clock; }
  const SwitchSpec& switch_spec() const { return p_.sw; }
  const TimingParams& timing() const { return p_.timing; }

  double pair_prob_p() const { return *p_.source.pair_prob_p; }
  double mean_pairs_mu() const { return *p_.source.mean_pairs_mu; }

 private:
  explicit ValidatedParams(ExperimentParams p) : p_(std::move(p)) {}
  ExperimentParams p_;
};

}  // namespace hmux
