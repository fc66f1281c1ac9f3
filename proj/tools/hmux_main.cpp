// hmux: temporal-multiplexing model and simulator for heralded single-photon
// sources. Subcommands: analytic, simulate, calibrate, optimize, timing.
//
// Exit codes are a stable contract:
//   0 ok, 2 config error, 3 insufficient statistics, 4 no solution,
//   5 timing infeasible.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hmux/analytic_model.hpp"
#include "hmux/config_file.hpp"
#include "hmux/controller.hpp"
#include "hmux/monte_carlo.hpp"
#include "hmux/sweep_format.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStatistics = 3;
constexpr int kExitNoSolution = 4;
constexpr int kExitInfeasible = 5;

struct CommonArgs {
  std::string config_path;
  std::optional<std::string> policy;
  std::string out_path;
};

hmux::Policy resolve_policy(const CommonArgs& args, const hmux::ValidatedParams& params) {
  if (!args.policy) return params.switch_spec().policy;
  if (*args.policy == "first") return hmux::Policy::FirstHerald;
  if (*args.policy == "last") return hmux::Policy::LastHerald;
  throw hmux::ConfigError("bad --policy", {"--policy: expected first|last, got '" + *args.policy + "'"});
}

// Re-validate with command-line overrides folded in.
hmux::ValidatedParams apply_overrides(const hmux::ValidatedParams& params,
                                      std::optional<int> n, hmux::Policy policy) {
  hmux::ExperimentParams p = params.get();
  p.sw.policy = policy;
  if (n) {
    p.clock.n_bins = *n;
    p.clock.output_bin = 0;  // re-pin to the final bin
  }
  return hmux::ValidatedParams::validate(std::move(p));
}

void write_out(const std::string& path, const std::string& payload) {
  if (path.empty()) return;
  std::ofstream of(path, std::ios::binary | std::ios::trunc);
  if (!of) throw hmux::ConfigError("cannot write output file", {"cannot write file: " + path});
  of << payload;
}

int cmd_analytic(const CommonArgs& args, std::optional<int> n_max, bool as_json) {
  const hmux::RunConfig cfg = hmux::load_config(args.config_path);
  const hmux::Policy policy = resolve_policy(args, cfg.params);
  const int n_hi = n_max.value_or(cfg.params.clock().n_bins);

  const auto predictions = hmux::predict_sweep(cfg.params, policy, n_hi);
  std::vector<hmux::SweepRow> rows;
  rows.reserve(predictions.size());
  for (const auto& pred : predictions) rows.push_back(hmux::make_row(pred));

  const std::string payload = as_json
                                  ? hmux::sweep_to_json("analytic", rows, cfg.params.get())
                                  : hmux::to_csv(rows);
  std::cout << payload;
  write_out(args.out_path, payload);
  return kExitOk;
}

int cmd_simulate(const CommonArgs& args, std::optional<int> n,
                 std::optional<std::uint64_t> cycles, std::optional<std::uint64_t> seed,
                 int workers, bool compare, bool g2_ci) {
  const hmux::RunConfig cfg = hmux::load_config(args.config_path);
  const hmux::Policy policy = resolve_policy(args, cfg.params);
  const hmux::ValidatedParams params = apply_overrides(cfg.params, n, policy);

  const std::uint64_t n_cycles = cycles.value_or(cfg.trials);
  if (n_cycles < 1)
    throw hmux::ConfigError("bad cycle count", {"--cycles: must be >= 1"});

  const hmux::SimResult result =
      hmux::simulate(params, n_cycles, seed.value_or(cfg.seed), workers);

  const double baseline =
      hmux::predict(params, 1, policy, hmux::HeraldModel::FirstOrder).p_single;
  const double enh = baseline > 0.0 ? result.p_single_hat / baseline : 0.0;

  std::optional<hmux::ModelPrediction> model;
  std::optional<hmux::ComparisonReport> report;
  if (compare) {
    model = hmux::predict(params, params.clock().n_bins, policy, hmux::HeraldModel::Threshold);
    report = hmux::compare_to_analytic(result, *model);
  }
  std::optional<hmux::G2Estimate> g2;
  if (g2_ci) g2 = hmux::estimate_g2_heralded(result);  // throws below 100 heralds

  std::cout << hmux::sim_result_to_json(result, enh, model ? &*model : nullptr,
                                        report ? &*report : nullptr, g2 ? &*g2 : nullptr);

  if (!args.out_path.empty()) {
    const hmux::SweepRow row =
        hmux::make_row(result, params.clock().clock_rate_hz(), baseline);
    write_out(args.out_path, hmux::to_csv({row}));
  }
  return kExitOk;
}

int cmd_calibrate(const CommonArgs& args, double target_e, std::optional<int> n, bool write) {
  const hmux::RunConfig cfg = hmux::load_config(args.config_path);
  const hmux::Policy policy = resolve_policy(args, cfg.params);
  const int n_cal = n.value_or(cfg.params.clock().n_bins);
  const double h = hmux::herald_prob_per_bin(cfg.params, hmux::HeraldModel::FirstOrder);

  const double eta_rt = hmux::calibrate_roundtrip(target_e, n_cal, h, policy);

  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9f", eta_rt);
  std::cout << buf << "\n";
  std::cerr << "calibrated eta_rt: enhancement(" << n_cal << ") = " << target_e
            << " at h = " << h << " (" << hmux::to_string(policy) << " policy)\n";

  if (write) {
    hmux::patch_config_key(args.config_path, "eta_rt", buf);
    std::cerr << "updated " << args.config_path << ": eta_rt = " << buf << "\n";
  }
  return kExitOk;
}

int cmd_optimize(const CommonArgs& args, std::optional<int> n_max, bool as_json) {
  const hmux::RunConfig cfg = hmux::load_config(args.config_path);
  const hmux::Policy policy = resolve_policy(args, cfg.params);
  const int n_hi = n_max.value_or(cfg.params.clock().n_bins);
  const auto& ch = cfg.params.channel();
  const double h = hmux::herald_prob_per_bin(cfg.params, hmux::HeraldModel::FirstOrder);

  const int n_star =
      hmux::optimal_n(h, ch.eta_signal_fixed, ch.eta_roundtrip, policy, n_hi);

  const auto predictions = hmux::predict_sweep(cfg.params, policy, n_hi);
  std::vector<hmux::SweepRow> rows;
  rows.reserve(predictions.size());
  for (const auto& pred : predictions) rows.push_back(hmux::make_row(pred));

  std::string payload;
  if (as_json) {
    payload = hmux::sweep_to_json("optimize", rows, cfg.params.get(), n_star);
  } else {
    payload = "n_star = " + std::to_string(n_star) + "\n" + hmux::to_csv(rows);
  }
  std::cout << payload;
  write_out(args.out_path, payload);
  return kExitOk;
}

int cmd_timing(const CommonArgs& args) {
  const hmux::RunConfig cfg = hmux::load_config(args.config_path);
  hmux::SwitchSpec sw = cfg.params.switch_spec();
  if (args.policy) sw.policy = resolve_policy(args, cfg.params);

  const hmux::TimingReport report =
      hmux::timing_feasible(cfg.params.clock(), sw, cfg.params.timing());
  std::cout << report.to_key_value();
  return report.feasible ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal multiplexing of a heralded single-photon source: "
               "analytic model, Monte Carlo simulator, calibration, and timing checks"};
  app.require_subcommand(1);

  CommonArgs args;
  std::optional<int> n, n_max;
  std::optional<std::uint64_t> cycles, seed;
  int workers = 0;
  double target_e = 0.0;
  bool as_json = false, compare = false, g2_ci = false, write = false;

  auto add_common = [&](CLI::App* cmd, bool with_out = true) {
    cmd->add_option("-c,--config", args.config_path, "Config file (key = value lines)")
        ->required();
    cmd->add_option("--policy", args.policy, "Override routing policy: first|last");
    if (with_out) cmd->add_option("-o,--out", args.out_path, "Also write the result to a file");
  };

  auto* analytic = app.add_subcommand("analytic", "Closed-form sweep over n = 1..n_max");
  add_common(analytic);
  analytic->add_option("-n,--n-max", n_max, "Largest source count (default: n_bins)");
  analytic->add_flag("--json", as_json, "Emit JSON instead of CSV");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run at one source count");
  add_common(simulate);
  simulate->add_option("-n,--n", n, "Number of multiplexed bins (default: n_bins)");
  simulate->add_option("--cycles", cycles, "Clock cycles to simulate (default: trials key)");
  simulate->add_option("--seed", seed, "RNG seed (default: seed key)");
  simulate->add_option("--workers", workers, "Worker threads, 0 = auto; result is identical");
  simulate->add_flag("--compare", compare, "Attach z-scores against the analytic model");
  simulate->add_flag("--g2-ci", g2_ci, "Attach a bootstrap CI for the heralded g2");

  auto* calibrate = app.add_subcommand(
      "calibrate", "Solve the loop round-trip transmission from a target enhancement");
  add_common(calibrate, false);
  calibrate->add_option("-e,--target-e", target_e, "Target enhancement")->required();
  calibrate->add_option("-n,--n", n, "Source count (default: n_bins)");
  calibrate->add_flag("--write", write, "Patch eta_rt in the config file");

  auto* optimize = app.add_subcommand("optimize", "Scan for the source count maximizing p_single");
  add_common(optimize);
  optimize->add_option("-n,--n-max", n_max, "Largest source count to scan (default: n_bins)");
  optimize->add_flag("--json", as_json, "Emit JSON instead of text + CSV");

  auto* timing = app.add_subcommand("timing", "Switch and synchronization feasibility report");
  add_common(timing, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand(analytic)) return cmd_analytic(args, n_max, as_json);
    if (app.got_subcommand(simulate))
      return cmd_simulate(args, n, cycles, seed, workers, compare, g2_ci);
    if (app.got_subcommand(calibrate)) return cmd_calibrate(args, target_e, n, write);
    if (app.got_subcommand(optimize)) return cmd_optimize(args, n_max, as_json);
    if (app.got_subcommand(timing)) return cmd_timing(args);
  } catch (const hmux::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& p : e.problems) std::cerr << "  " << p << "\n";
    return kExitConfig;
  } catch (const hmux::InvalidParamsError& e) {
    std::cerr << "config error:\n";
    for (const auto& p : e.errors()) std::cerr << "  " << p.field << ": " << p.message << "\n";
    return kExitConfig;
  } catch (const hmux::NoSolutionError& e) {
    std::cerr << "no solution: " << e.what() << "\n";
    return kExitNoSolution;
  } catch (const hmux::InsufficientStatisticsError& e) {
    std::cerr << "insufficient statistics: " << e.what() << "\n";
    return kExitStatistics;
  } catch (const hmux::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;  // unreachable: a subcommand is required
}
