// bsched: batch-size schedules for one-dimensional SGD.
//
//   bsched schedule   [options]   optimal control, metadata and integer batches
//   bsched experiment [options]   Monte Carlo comparison against constant batches
//   bsched verify --suite NAME    property suites; exit status 1 on failure

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bsched/config.hpp"
#include "bsched/csv.hpp"
#include "bsched/error.hpp"
#include "bsched/experiment.hpp"
#include "bsched/verify.hpp"

namespace {

struct Overrides {
  std::string config;
  std::map<std::string, std::string> values;
};

void add_common_options(CLI::App* cmd, Overrides& ov) {
  // -h would collide with the learning-rate flag --h.
  cmd->set_help_flag("--help", "print this help message and exit");
  cmd->add_option("--config", ov.config, "key=value config file")->check(CLI::ExistingFile);
  const std::pair<const char*, const char*> keys[] = {
      {"seed", "base RNG seed"},
      {"threads", "worker threads (0: hardware default)"},
      {"replications", "Monte Carlo replications"},
      {"out", "output directory"},
      {"n", "sample size N"},
      {"m", "number of SGD steps M"},
      {"h", "learning rate"},
      {"kappa", "feature variance"},
      {"theta-star", "population parameter"},
      {"sigma-eps2", "label-noise variance"},
      {"kurtosis", "feature kurtosis"},
      {"chi0", "initial iterate"},
      {"lambda", "rescaled Lagrange multiplier"},
      {"budget-c", "sample budget int 1/alpha dt"},
      {"gamma", "rescaled initial excess risk"},
      {"horizon", "time horizon T (default M h)"},
  };
  for (const auto& [key, help] : keys) {
    const std::string k = key;
    cmd->add_option_function<std::string>(
        "--" + k, [&ov, k](const std::string& v) { ov.values[k] = v; }, help);
  }
}

bsched::ExperimentConfig build_config(const Overrides& ov) {
  bsched::ExperimentConfig cfg;
  if (!ov.config.empty()) bsched::load_config_file(cfg, ov.config);
  for (const auto& [k, v] : ov.values) bsched::apply_setting(cfg, k, v);
  return cfg;
}

void print_metadata(const bsched::ScheduleResult& r) {
  std::cout << "lambda " << bsched::format_double(*r.alpha.lambda_reparam) << '\n'
            << "switch_time " << bsched::format_double(*r.alpha.switch_time) << '\n'
            << "budget " << bsched::format_double(r.alpha.budget) << '\n'
            << "lipschitz_bound " << bsched::format_double(r.alpha.lipschitz_bound) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch-size schedules for one-dimensional SGD"};
  app.require_subcommand(1);

  Overrides sched_ov, exp_ov, ver_ov;
  std::string suite = "closed_forms";
  auto* schedule = app.add_subcommand("schedule", "compute the optimal volatility control");
  add_common_options(schedule, sched_ov);
  auto* experiment = app.add_subcommand("experiment", "compare constant and optimal schedules");
  add_common_options(experiment, exp_ov);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common_options(verify, ver_ov);
  verify->add_option("--suite", suite, "orders | optimality | oracles | closed_forms")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (schedule->parsed()) {
      const auto cfg = build_config(sched_ov);
      print_metadata(bsched::cmd_schedule(cfg));
      return 0;
    }
    if (experiment->parsed()) {
      const auto cfg = build_config(exp_ov);
      const auto res = bsched::cmd_experiment(cfg);
      std::cout << "final_excess_risk_constant " << bsched::format_double(res.risk_constant.mean.back())
                << "\nfinal_excess_risk_optimal " << bsched::format_double(res.risk_optimal.mean.back())
                << '\n';
      return 0;
    }
    if (verify->parsed()) {
      const auto cfg = build_config(ver_ov);
      std::vector<bsched::CheckResult> checks;
      const bool ok = bsched::cmd_verify(cfg, bsched::parse_suite(suite), &checks);
      for (const auto& c : checks) {
        std::printf("%-4s %-45s measured=%.6g range=[%.3g, %.3g]\n", c.passed ? "PASS" : "FAIL",
                    c.name.c_str(), c.measured, c.lower, c.upper);
      }
      return ok ? 0 : 1;
    }
  } catch (const bsched::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
