#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmux/params.hpp"

namespace hmux {

enum class SwitchAction { Capture, Release, Bypass };

struct SwitchEvent {
  std::int64_t tick = 0;  // tick index from cycle start
  SwitchAction action = SwitchAction::Bypass;

  bool operator==(const SwitchEvent&) const = default;
};

struct CycleTrace {
  int n_bins = 0;
  std::uint64_t herald_mask = 0;   // bit (j-1) set = herald click in bin j
  std::optional<int> trigger_bin;  // 1-based; absent when no bin heralded
  int passes_in_loop = 0;          // n_bins - trigger_bin (output bin = final bin)
  std::vector<SwitchEvent> events; // strictly increasing in tick
};

/// Routing state of the buffer switch within one clock cycle.
/// Idle -> Storing(n_bins - trigger) on latch; one pass completes per bin
/// boundary; Storing(0) -> Released at the output-bin boundary.
class ControllerState {
 public:
  enum class Phase { Idle, Storing, Released };

  Phase phase() const { return phase_; }
  int remaining_passes() const { return remaining_; }
  std::optional<int> trigger_bin() const { return trigger_; }

  void latch(int bin, int n_bins);
  void advance_bin();

 private:
  Phase phase_ = Phase::Idle;
  int remaining_ = 0;
  std::optional<int> trigger_;
};

/// 1-based index of the latched bin, or nullopt for an all-zero pattern.
/// LengthError unless 1 <= n_bins <= 64 and the mask fits in n_bins bits.
std::optional<int> select_trigger_bin(std::uint64_t herald_mask, int n_bins, Policy policy);

/// Run one clock cycle of the routing state machine for a herald pattern.
/// Capture fires at the trigger bin and Release at the output bin; a herald
/// in the output bin itself bypasses the loop (single Bypass event).
CycleTrace route(std::uint64_t herald_mask, const ClockConfig& clock, Policy policy);

// Minimal fiber delay: the switch must be configured no later than the
// heralded photon reaches the buffer input.
double required_delay_ns(const TimingParams& timing);

/// 10-90% rise time of a first-order response, tau = 0.35 / bandwidth.
double switch_rise_time_ps(double eo_bandwidth_ghz);

struct TimingReport {
  double tau_rise_ps = 0.0;
  double bin_spacing_ps = 0.0;
  double tick_ps = 0.0;
  double delta_min_ns = 0.0;          // latency sum
  double decision_delay_ns = 0.0;     // extra delay a LastHerald decision needs
  double fiber_delay_ns = 0.0;
  Policy policy = Policy::FirstHerald;
  bool switch_ok = false;   // tau < bin spacing (strict)
  bool grid_ok = false;     // switch events land on tick boundaries
  bool delay_ok = false;    // fiber delay >= delta_min + decision delay
  bool feasible = false;

  std::string to_key_value() const;
};

TimingReport timing_feasible(const ClockConfig& clock, const SwitchSpec& sw,
                             const TimingParams& timing);

}  // namespace hmux
