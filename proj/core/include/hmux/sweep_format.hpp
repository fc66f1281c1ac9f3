#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmux/analytic_model.hpp"
#include "hmux/monte_carlo.hpp"

namespace hmux {

// One output record of a sweep. For mc rows the CI columns hold the Wilson
// bounds of p_single; analytic rows leave them empty.
struct SweepRow {
  int n = 0;
  std::string method;  // "analytic" | "mc"
  double p_herald = 0.0;
  double herald_rate_hz = 0.0;
  double p_single = 0.0;
  double single_rate_hz = 0.0;
  double enhancement = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
};

extern const char* const kSweepCsvHeader;

/// Canonical number format of the CSV schema: scientific, 9 significant
/// digits ("%.8e").
std::string format_sci(double v);

/// Canonical CSV: fixed header, LF line endings. Parsing the output and
/// re-emitting it is byte-identical.
std::string to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(const std::string& text);  // FormatError

SweepRow make_row(const ModelPrediction& prediction);

/// mc row; enhancement is normalized by the analytic single-source baseline
/// (a single-n run has no measured n = 1 denominator).
SweepRow make_row(const SimResult& result, double clock_rate_hz,
                  double analytic_p_single_1);

std::string sweep_to_json(const std::string& command, const std::vector<SweepRow>& rows,
                          const ExperimentParams& params,
                          std::optional<int> n_star = std::nullopt);

std::string sim_result_to_json(const SimResult& result, double enhancement_vs_baseline,
                               const ModelPrediction* compare_model,
                               const ComparisonReport* compare,
                               const G2Estimate* g2);

}  // namespace hmux
