#include "hmux/sweep_format.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace hmux {

const char* const kSweepCsvHeader =
    "n,method,p_herald,herald_rate_hz,p_single,single_rate_hz,enhancement,ci_low,ci_high";

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kSweepCsvHeader << "\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.method << ',' << format_sci(r.p_herald) << ','
       << format_sci(r.herald_rate_hz) << ',' << format_sci(r.p_single) << ','
       << format_sci(r.single_rate_hz) << ',' << format_sci(r.enhancement) << ','
       << (r.ci_low ? format_sci(*r.ci_low) : "") << ','
       << (r.ci_high ? format_sci(*r.ci_high) : "") << "\n";
  }
  return os.str();
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double_field(const std::string& s, int line_no) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw FormatError("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  if (!std::getline(stream, line) || line != kSweepCsvHeader)
    throw FormatError("csv: missing or unexpected header row");

  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 9)
      throw FormatError("csv line " + std::to_string(line_no) + ": expected 9 fields, got " +
                        std::to_string(f.size()));
    SweepRow r;
    r.n = static_cast<int>(parse_double_field(f[0], line_no));
    r.method = f[1];
    r.p_herald = parse_double_field(f[2], line_no);
    r.herald_rate_hz = parse_double_field(f[3], line_no);
    r.p_single = parse_double_field(f[4], line_no);
    r.single_rate_hz = parse_double_field(f[5], line_no);
    r.enhancement = parse_double_field(f[6], line_no);
    if (!f[7].empty()) r.ci_low = parse_double_field(f[7], line_no);
    if (!f[8].empty()) r.ci_high = parse_double_field(f[8], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

SweepRow make_row(const ModelPrediction& prediction) {
  SweepRow r;
  r.n = prediction.n_sources;
  r.method = "analytic";
  r.p_herald = prediction.p_herald;
  r.herald_rate_hz = prediction.herald_rate_hz;
  r.p_single = prediction.p_single;
  r.single_rate_hz = prediction.single_rate_hz;
  r.enhancement = prediction.enhancement;
  return r;
}

SweepRow make_row(const SimResult& result, double clock_rate_hz, double analytic_p_single_1) {
  SweepRow r;
  r.n = result.params.clock.n_bins;
  r.method = "mc";
  r.p_herald = result.p_herald_hat;
  r.herald_rate_hz = result.p_herald_hat * clock_rate_hz;
  r.p_single = result.p_single_hat;
  r.single_rate_hz = result.p_single_hat * clock_rate_hz;
  r.enhancement = analytic_p_single_1 > 0.0 ? result.p_single_hat / analytic_p_single_1 : 0.0;
  r.ci_low = result.p_single_ci.lo;
  r.ci_high = result.p_single_ci.hi;
  return r;
}

namespace {

nlohmann::json params_json(const ExperimentParams& p) {
  nlohmann::json j;
  j["source"] = {{"p", p.source.pair_prob_p ? nlohmann::json(*p.source.pair_prob_p)
                                            : nlohmann::json()},
                 {"mu", p.source.mean_pairs_mu ? nlohmann::json(*p.source.mean_pairs_mu)
                                               : nlohmann::json()},
                 {"stats_model", to_string(p.source.stats_model)},
                 {"kmax", p.source.pair_cutoff_kmax}};
  j["channel"] = {{"eta_i", p.channel.eta_idler},
                  {"eta_s", p.channel.eta_signal_fixed},
                  {"eta_rt", p.channel.eta_roundtrip},
                  {"dark_count_prob", p.channel.dark_count_prob}};
  j["clock"] = {{"n_bins", p.clock.n_bins},
                {"bin_spacing_ps", p.clock.bin_spacing_ps},
                {"clock_period_ns", p.clock.clock_period_ns},
                {"output_bin", p.clock.output_bin},
                {"tick_ps", p.clock.tick_ps},
                {"clock_rate_hz", p.clock.clock_rate_hz()}};
  j["switch"] = {{"v_pi_volts", p.sw.v_pi_volts},
                 {"eo_bandwidth_ghz", p.sw.eo_bandwidth_ghz},
                 {"policy", to_string(p.sw.policy)}};
  j["timing"] = {{"detector_latency_ns", p.timing.detector_latency_ns},
                 {"fpga_latency_ns", p.timing.fpga_latency_ns},
                 {"electrical_latency_ns", p.timing.electrical_latency_ns},
                 {"fiber_delay_ns", p.timing.fiber_delay_delta_ns}};
  return j;
}

nlohmann::json row_json(const SweepRow& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["method"] = r.method;
  j["p_herald"] = r.p_herald;
  j["herald_rate_hz"] = r.herald_rate_hz;
  j["p_single"] = r.p_single;
  j["single_rate_hz"] = r.single_rate_hz;
  j["enhancement"] = r.enhancement;
  j["ci_low"] = r.ci_low ? nlohmann::json(*r.ci_low) : nlohmann::json();
  j["ci_high"] = r.ci_high ? nlohmann::json(*r.ci_high) : nlohmann::json();
  return j;
}

}  // namespace

std::string sweep_to_json(const std::string& command, const std::vector<SweepRow>& rows,
                          const ExperimentParams& params, std::optional<int> n_star) {
  nlohmann::json j;
  j["command"] = command;
  j["params"] = params_json(params);
  if (n_star) j["n_star"] = *n_star;
  auto& arr = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(row_json(r));
  return j.dump(2) + "\n";
}

std::string sim_result_to_json(const SimResult& result, double enhancement_vs_baseline,
                               const ModelPrediction* compare_model,
                               const ComparisonReport* compare, const G2Estimate* g2) {
  const double rate = result.params.clock.clock_rate_hz();
  nlohmann::json j;
  j["command"] = "simulate";
  j["params"] = params_json(result.params);
  j["seed"] = result.seed;
  j["policy"] = to_string(result.policy);
  j["counts"] = {{"cycles", result.cycles},
                 {"herald_cycles", result.herald_cycles},
                 {"single_clicks", result.single_clicks},
                 {"sum_m", result.sum_m},
                 {"sum_m_mm1", result.sum_m_mm1}};
  j["m_histogram"] = result.m_histogram;
  j["p_herald"] = {{"estimate", result.p_herald_hat},
                   {"ci_low", result.p_herald_ci.lo},
                   {"ci_high", result.p_herald_ci.hi}};
  j["p_single"] = {{"estimate", result.p_single_hat},
                   {"ci_low", result.p_single_ci.lo},
                   {"ci_high", result.p_single_ci.hi}};
  j["rates_hz"] = {{"herald", result.p_herald_hat * rate},
                   {"single", result.p_single_hat * rate}};
  j["mean_output_photons"] = result.mean_output_photons;
  j["g2_heralded"] = result.g2_heralded_hat;
  j["enhancement_vs_analytic_baseline"] = enhancement_vs_baseline;
  if (g2) {
    j["g2_bootstrap"] = {{"g2", g2->g2},
                         {"ci_low", g2->ci_lo},
                         {"ci_high", g2->ci_hi},
                         {"heralded_cycles", g2->heralded_cycles},
                         {"resamples_ci", "95%"}};
  }
  if (compare_model && compare) {
    j["compare"] = {{"model",
                     {{"n", compare_model->n_sources},
                      {"p_herald", compare_model->p_herald},
                      {"p_single", compare_model->p_single}}},
                    {"z_herald", compare->z_herald},
                    {"z_single", compare->z_single},
                    {"pass", compare->pass}};
  }
  return j.dump(2) + "\n";
}

}  // namespace hmux
