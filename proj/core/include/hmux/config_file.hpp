#pragma once

#include <cstdint>
#include <string>

#include "hmux/params.hpp"

namespace hmux {

// A parsed and validated run configuration.
//
// File format: flat UTF-8 "key = value" lines, '#' starts a comment.
// Required keys: n_bins, bin_spacing_ps, clock_period_ns, eta_i, eta_s,
// eta_rt, and exactly one of p | mu. Optional keys (defaults): stats_model
// (thermal), policy (first), dark_count_prob (0), kmax (6), trials (1000000),
// seed (1), eo_bandwidth_ghz (40), v_pi_volts (6), detector_latency_ns,
// fpga_latency_ns, electrical_latency_ns, fiber_delay_ns (all 0).
struct RunConfig {
  ValidatedParams params;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
};

/// Parse config text. Throws ConfigError carrying every problem found
/// (unknown/duplicate/missing keys, unparsable values, violated invariants).
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

/// Rewrite `key = value` in place, preserving every other byte of the file.
/// Appends the key if it is not present.
void patch_config_key(const std::string& path, const std::string& key,
                      const std::string& value);

}  // namespace hmux
