#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace hmux::testing {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the built CLI binary with stdout/stderr captured to temp files.
inline CliResult run_cli(const std::string& args) {
  namespace fs = std::filesystem;
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path();
  const fs::path out = dir / ("hmux_test_out_" + std::to_string(++counter) + ".txt");
  const fs::path err = dir / ("hmux_test_err_" + std::to_string(counter) + ".txt");

  const std::string cmd = std::string(HMUX_CLI_PATH) + " " + args + " >" + out.string() +
                          " 2>" + err.string();
  const int status = std::system(cmd.c_str());

  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

inline std::filesystem::path write_temp_config(const std::string& text,
                                               const std::string& tag) {
  const auto path = std::filesystem::temp_directory_path() / ("hmux_cfg_" + tag + ".cfg");
  std::ofstream of(path, std::ios::binary | std::ios::trunc);
  of << text;
  return path;
}

// Mirrors configs/example.cfg.
inline std::string baseline_config_text() {
  return "n_bins = 12\n"
         "bin_spacing_ps = 200\n"
         "clock_period_ns = 16.07\n"
         "p = 0.046\n"
         "eta_i = 0.079\n"
         "eta_s = 0.011\n"
         "eta_rt = 0.706592476\n"
         "trials = 100000\n"
         "seed = 1\n";
}

}  // namespace hmux::testing
