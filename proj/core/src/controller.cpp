#include "hmux/controller.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace hmux {

void ControllerState::latch(int bin, int n_bins) {
  if (phase_ != Phase::Idle) throw ConsistencyError("controller latched twice in one cycle");
  if (bin < 1 || bin > n_bins) throw RangeError("latch bin outside [1, n_bins]");
  phase_ = Phase::Storing;
  remaining_ = n_bins - bin;
  trigger_ = bin;
}

void ControllerState::advance_bin() {
  if (phase_ != Phase::Storing) return;
  if (remaining_ > 0)
    --remaining_;
  else
    phase_ = Phase::Released;  // Storing(0) releases at the output-bin boundary
}

std::optional<int> select_trigger_bin(std::uint64_t herald_mask, int n_bins, Policy policy) {
  if (n_bins < 1 || n_bins > 64)
    throw LengthError("pattern length must lie in [1, 64], got " + std::to_string(n_bins));
  if (n_bins < 64 && (herald_mask >> n_bins) != 0)
    throw LengthError("herald pattern has bits beyond bin " + std::to_string(n_bins));
  if (herald_mask == 0) return std::nullopt;
  if (policy == Policy::FirstHerald) return std::countr_zero(herald_mask) + 1;
  return std::bit_width(herald_mask);
}

CycleTrace route(std::uint64_t herald_mask, const ClockConfig& clock, Policy policy) {
  const int n = clock.n_bins;
  const auto trigger = select_trigger_bin(herald_mask, n, policy);

  CycleTrace trace;
  trace.n_bins = n;
  trace.herald_mask = herald_mask;

  // Replay the cycle bin by bin. FirstHerald latches causally on the first
  // click; LastHerald latches on the precomputed trigger (its decision delay
  // is accounted for by the timing report).
  ControllerState state;
  for (int bin = 1; bin <= n; ++bin) {
    const bool click = (herald_mask >> (bin - 1)) & 1;
    if (state.phase() == ControllerState::Phase::Idle) {
      if (policy == Policy::FirstHerald ? click : (trigger && bin == *trigger))
        state.latch(bin, n);
    }
    state.advance_bin();
  }

  if (trigger) {
    trace.trigger_bin = state.trigger_bin();
    trace.passes_in_loop = n - *trace.trigger_bin;
    const std::int64_t tpb = clock.ticks_per_bin();
    const std::int64_t trigger_tick = static_cast<std::int64_t>(*trace.trigger_bin - 1) * tpb;
    const std::int64_t output_tick = static_cast<std::int64_t>(n - 1) * tpb;
    if (*trace.trigger_bin == n) {
      trace.events.push_back({output_tick, SwitchAction::Bypass});
    } else {
      trace.events.push_back({trigger_tick, SwitchAction::Capture});
      trace.events.push_back({output_tick, SwitchAction::Release});
    }
  }
  return trace;
}

double required_delay_ns(const TimingParams& timing) {
  return timing.detector_latency_ns + timing.fpga_latency_ns + timing.electrical_latency_ns;
}

double switch_rise_time_ps(double eo_bandwidth_ghz) {
  if (!(eo_bandwidth_ghz > 0.0))
    throw RangeError("eo bandwidth must be > 0 GHz, got " + std::to_string(eo_bandwidth_ghz));
  return 350.0 / eo_bandwidth_ghz;  // 0.35 / BW, in ps for BW in GHz
}

std::string TimingReport::to_key_value() const {
  std::ostringstream os;
  auto line = [&os](const char* key, double v) { os << key << " = " << v << "\n"; };
  auto flag = [&os](const char* key, bool v) { os << key << " = " << (v ? "true" : "false") << "\n"; };
  line("tau_rise_ps", tau_rise_ps);
  line("bin_spacing_ps", bin_spacing_ps);
  line("tick_ps", tick_ps);
  line("delta_min_ns", delta_min_ns);
  line("decision_delay_ns", decision_delay_ns);
  line("fiber_delay_ns", fiber_delay_ns);
  os << "policy = " << to_string(policy) << "\n";
  flag("switch_ok", switch_ok);
  flag("grid_ok", grid_ok);
  flag("delay_ok", delay_ok);
  flag("feasible", feasible);
  return os.str();
}

TimingReport timing_feasible(const ClockConfig& clock, const SwitchSpec& sw,
                             const TimingParams& timing) {
  TimingReport r;
  r.tau_rise_ps = switch_rise_time_ps(sw.eo_bandwidth_ghz);
  r.bin_spacing_ps = clock.bin_spacing_ps;
  r.tick_ps = clock.tick_ps;
  r.policy = sw.policy;
  r.delta_min_ns = required_delay_ns(timing);
  r.decision_delay_ns =
      sw.policy == Policy::LastHerald ? clock.n_bins * clock.bin_spacing_ps * 1e-3 : 0.0;
  r.fiber_delay_ns = timing.fiber_delay_delta_ns;

  r.switch_ok = r.tau_rise_ps < clock.bin_spacing_ps;  // strict: equal is infeasible
  const double ratio = clock.bin_spacing_ps / clock.tick_ps;
  r.grid_ok = clock.tick_ps > 0.0 && ratio >= 1.0 &&
              std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio;
  r.delay_ok = r.fiber_delay_ns >= r.delta_min_ns + r.decision_delay_ns;
  r.feasible = r.switch_ok && r.grid_ok && r.delay_ok;
  return r;
}

}  // namespace hmux
