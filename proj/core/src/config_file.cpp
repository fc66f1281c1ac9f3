#include "hmux/config_file.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace hmux {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const char* const kKnownKeys[] = {
    "n_bins", "bin_spacing_ps", "clock_period_ns", "eta_i", "eta_s", "eta_rt", "p", "mu",
    "stats_model", "policy", "dark_count_prob", "kmax", "trials", "seed",
    "eo_bandwidth_ghz", "v_pi_volts", "detector_latency_ns", "fpga_latency_ns",
    "electrical_latency_ns", "fiber_delay_ns"};

bool known_key(const std::string& k) {
  for (const char* key : kKnownKeys)
    if (k == key) return true;
  return false;
}

// Struct-field paths from the validator, rendered back as config keys.
std::string field_to_key(const std::string& field) {
  static const std::map<std::string, std::string> kMap = {
      {"source.pair_prob_p", "p"},
      {"source.mean_pairs_mu", "mu"},
      {"source.stats_model", "stats_model"},
      {"source.pair_cutoff_kmax", "kmax"},
      {"channel.eta_idler", "eta_i"},
      {"channel.eta_signal_fixed", "eta_s"},
      {"channel.eta_roundtrip", "eta_rt"},
      {"channel.dark_count_prob", "dark_count_prob"},
      {"clock.n_bins", "n_bins"},
      {"clock.bin_spacing_ps", "bin_spacing_ps"},
      {"clock.clock_period_ns", "clock_period_ns"},
      {"sw.eo_bandwidth_ghz", "eo_bandwidth_ghz"},
      {"sw.v_pi_volts", "v_pi_volts"},
      {"sw.policy", "policy"},
      {"timing.detector_latency_ns", "detector_latency_ns"},
      {"timing.fpga_latency_ns", "fpga_latency_ns"},
      {"timing.electrical_latency_ns", "electrical_latency_ns"},
      {"timing.fiber_delay_delta_ns", "fiber_delay_ns"},
  };
  const auto it = kMap.find(field);
  return it == kMap.end() ? field : it->second;
}

struct Parser {
  std::map<std::string, std::string> kv;
  std::vector<std::string> problems;

  bool parse_double(const std::string& key, double* out) {
    const auto it = kv.find(key);
    if (it == kv.end()) return false;
    const char* begin = it->second.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
      problems.push_back("key '" + key + "': not a number: '" + it->second + "'");
      return false;
    }
    *out = v;
    return true;
  }

  bool parse_int(const std::string& key, long long* out) {
    const auto it = kv.find(key);
    if (it == kv.end()) return false;
    long long v = 0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      problems.push_back("key '" + key + "': not an integer: '" + s + "'");
      return false;
    }
    *out = v;
    return true;
  }

  bool parse_u64(const std::string& key, std::uint64_t* out) {
    const auto it = kv.find(key);
    if (it == kv.end()) return false;
    std::uint64_t v = 0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      problems.push_back("key '" + key + "': not a non-negative integer: '" + s + "'");
      return false;
    }
    *out = v;
    return true;
  }

  void require(const std::string& key) {
    if (!kv.count(key)) problems.push_back("missing required key '" + key + "'");
  }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  Parser p;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.problems.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      p.problems.push_back("line " + std::to_string(line_no) + ": empty key or value");
      continue;
    }
    if (!known_key(key)) {
      p.problems.push_back("unknown key '" + key + "'");
      continue;
    }
    if (!p.kv.emplace(key, value).second)
      p.problems.push_back("duplicate key '" + key + "'");
  }

  for (const char* key : {"n_bins", "bin_spacing_ps", "clock_period_ns", "eta_i", "eta_s", "eta_rt"})
    p.require(key);
  const bool has_p = p.kv.count("p") > 0;
  const bool has_mu = p.kv.count("mu") > 0;
  if (!has_p && !has_mu) p.problems.push_back("one of the keys 'p' or 'mu' is required");
  if (has_p && has_mu) p.problems.push_back("give only one of the keys 'p' or 'mu'");

  ExperimentParams params;
  double v = 0.0;
  long long i = 0;

  if (has_p && p.parse_double("p", &v)) params.source.pair_prob_p = v;
  if (has_mu && p.parse_double("mu", &v)) params.source.mean_pairs_mu = v;
  if (const auto it = p.kv.find("stats_model"); it != p.kv.end()) {
    if (it->second == "thermal")
      params.source.stats_model = PairStats::Thermal;
    else if (it->second == "poisson")
      params.source.stats_model = PairStats::Poisson;
    else
      p.problems.push_back("key 'stats_model': expected thermal|poisson, got '" + it->second + "'");
  }
  if (p.parse_int("kmax", &i)) params.source.pair_cutoff_kmax = static_cast<int>(i);

  if (p.parse_double("eta_i", &v)) params.channel.eta_idler = v;
  if (p.parse_double("eta_s", &v)) params.channel.eta_signal_fixed = v;
  if (p.parse_double("eta_rt", &v)) params.channel.eta_roundtrip = v;
  if (p.parse_double("dark_count_prob", &v)) params.channel.dark_count_prob = v;

  if (p.parse_int("n_bins", &i)) params.clock.n_bins = static_cast<int>(i);
  if (p.parse_double("bin_spacing_ps", &v)) params.clock.bin_spacing_ps = v;
  if (p.parse_double("clock_period_ns", &v)) params.clock.clock_period_ns = v;

  if (p.parse_double("eo_bandwidth_ghz", &v)) params.sw.eo_bandwidth_ghz = v;
  if (p.parse_double("v_pi_volts", &v)) params.sw.v_pi_volts = v;
  if (const auto it = p.kv.find("policy"); it != p.kv.end()) {
    if (it->second == "first")
      params.sw.policy = Policy::FirstHerald;
    else if (it->second == "last")
      params.sw.policy = Policy::LastHerald;
    else
      p.problems.push_back("key 'policy': expected first|last, got '" + it->second + "'");
  }

  if (p.parse_double("detector_latency_ns", &v)) params.timing.detector_latency_ns = v;
  if (p.parse_double("fpga_latency_ns", &v)) params.timing.fpga_latency_ns = v;
  if (p.parse_double("electrical_latency_ns", &v)) params.timing.electrical_latency_ns = v;
  if (p.parse_double("fiber_delay_ns", &v)) params.timing.fiber_delay_delta_ns = v;

  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  p.parse_u64("trials", &trials);
  p.parse_u64("seed", &seed);
  if (p.kv.count("trials") && trials == 0)
    p.problems.push_back("key 'trials': must be >= 1");

  if (!p.problems.empty())
    throw ConfigError("config has " + std::to_string(p.problems.size()) + " problem(s)",
                      std::move(p.problems));

  try {
    return RunConfig{ValidatedParams::validate(std::move(params)), trials, seed};
  } catch (const InvalidParamsError& e) {
    std::vector<std::string> problems;
    problems.reserve(e.errors().size());
    for (const auto& err : e.errors())
      problems.push_back("key '" + field_to_key(err.field) + "': " + err.message);
    throw ConfigError("config has " + std::to_string(problems.size()) + " problem(s)",
                      std::move(problems));
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path, {"cannot open file: " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void patch_config_key(const std::string& path, const std::string& key,
                      const std::string& value) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path, {"cannot open file: " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  in.close();

  std::ostringstream out;
  std::istringstream stream(text);
  std::string raw;
  bool replaced = false;
  while (std::getline(stream, raw)) {
    const auto hash = raw.find('#');
    const std::string code = hash == std::string::npos ? raw : raw.substr(0, hash);
    const auto eq = code.find('=');
    if (!replaced && eq != std::string::npos && trim(code.substr(0, eq)) == key) {
      out << key << " = " << value;
      if (hash != std::string::npos) out << "  " << raw.substr(hash);
      out << "\n";
      replaced = true;
    } else {
      out << raw << "\n";
    }
  }
  if (!replaced) out << key << " = " << value << "\n";

  std::ofstream of(path, std::ios::binary | std::ios::trunc);
  if (!of) throw ConfigError("cannot write config file: " + path, {"cannot write file: " + path});
  of << out.str();
}

}  // namespace hmux
