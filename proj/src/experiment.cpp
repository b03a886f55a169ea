#include "bsched/experiment.hpp"

#include <cmath>

#include "bsched/control.hpp"
#include "bsched/csv.hpp"
#include "bsched/error.hpp"

namespace bsched {

namespace {

void write_curve(const std::filesystem::path& path, const RiskCurve& curve, const BatchSchedule& s) {
  CsvWriter w(path, {"samples_processed", "mean_excess_risk", "stderr"});
  long long used = 0;
  for (std::size_t n = 0; n < curve.mean.size(); ++n) {
    if (n > 0) used += s.sizes[n - 1];
    w << used << curve.mean[n] << curve.stderr_[n];
    w.end_row();
  }
}

}  // namespace

TimeGrid default_grid(double horizon) { return TimeGrid(horizon, TimeGrid::kDefaultSteps); }

ScheduleAlphaFactory linreg_schedule_factory(double gamma, double kappa, std::int64_t m, double h) {
  const TimeGrid grid(static_cast<double>(m) * h, static_cast<std::size_t>(m));
  return [=](double lambda) { return linreg_alpha(gamma, kappa, lambda, grid); };
}

ScheduleResult cmd_schedule(const ExperimentConfig& cfg) {
  validate(cfg);
  const double gamma = cfg.gamma_or_default();
  const double kappa = cfg.linreg.kappa;
  const double horizon = cfg.horizon_or_default();
  const TimeGrid grid = default_grid(horizon);

  ScheduleResult res{constant_control(grid, 1.0), gamma, 0.0, std::nullopt};
  if (cfg.lambda) {
    res.alpha = linreg_alpha(gamma, kappa, *cfg.lambda, grid);
    res.budget_target = res.alpha.budget;
  } else {
    const double c = cfg.budget_c.value_or(cfg.budget());
    if (c < horizon) {
      throw Error(ErrorKind::InfeasibleBudget, "budget c = " + format_double(c) +
                                                   " is below the horizon T = " + format_double(horizon));
    }
    res.budget_target = c;
    res.alpha = solve_lambda(c, [&](double l) { return linreg_alpha(gamma, kappa, l, grid); }).alpha;
  }
  const double lambda = *res.alpha.lambda_reparam;

  std::filesystem::create_directories(cfg.output_dir);
  {
    CsvWriter w(cfg.output_dir / "schedule.csv", {"t", "alpha", "batch_size"});
    for (std::size_t k = 0; k < grid.size(); ++k) {
      w << grid.t(k) << res.alpha.alpha[k] << 1.0 / res.alpha.alpha[k];
      w.end_row();
    }
  }

  const bool sgd_horizon = !cfg.horizon || std::abs(*cfg.horizon - static_cast<double>(cfg.m) * cfg.h) <
                                               1e-12 * *cfg.horizon;
  if (sgd_horizon && !cfg.lambda && cfg.n >= cfg.m) {
    res.batches = schedule_from_alpha(linreg_schedule_factory(gamma, kappa, cfg.m, cfg.h), cfg.n, cfg.m);
    CsvWriter w(cfg.output_dir / "batches.csv", {"step", "t", "batch_size"});
    for (std::size_t n = 0; n < res.batches->sizes.size(); ++n) {
      w << static_cast<long long>(n + 1) << static_cast<double>(n) * cfg.h
        << static_cast<long long>(res.batches->sizes[n]);
      w.end_row();
    }
  }

  CsvWriter meta(cfg.output_dir / "metadata.csv", {"key", "value"});
  auto row = [&](const std::string& k, double v) {
    meta << k << v;
    meta.end_row();
  };
  row("gamma", gamma);
  row("kappa", kappa);
  row("horizon", horizon);
  row("lambda", lambda);
  row("lambda_generic", lambda_generic_from_reparam(cfg.linreg, horizon, lambda));
  row("switch_time", std::min(*res.alpha.switch_time, horizon));
  row("budget", res.alpha.budget);
  row("budget_target", res.budget_target);
  row("lipschitz_bound", res.alpha.lipschitz_bound);
  if (res.batches) row("batch_lambda", res.batches->lambda.value_or(0.0));
  return res;
}

ExperimentResult cmd_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const double chi0 = cfg.chi0_or_default();
  const double gamma = cfg.gamma_or_default();

  ExperimentResult res;
  res.constant = constant_schedule(cfg.n, cfg.m);
  res.optimal = schedule_from_alpha(linreg_schedule_factory(gamma, cfg.linreg.kappa, cfg.m, cfg.h), cfg.n,
                                    cfg.m);

  res.risk_constant = sgd_excess_risk_parallel({cfg.linreg, res.constant, cfg.h, chi0}, cfg.replications,
                                               cfg.seed, cfg.threads);
  res.risk_optimal = sgd_excess_risk_parallel({cfg.linreg, res.optimal, cfg.h, chi0}, cfg.replications,
                                              cfg.seed, cfg.threads);

  std::filesystem::create_directories(cfg.output_dir);
  write_curve(cfg.output_dir / "risk_constant.csv", res.risk_constant, res.constant);
  write_curve(cfg.output_dir / "risk_optimal.csv", res.risk_optimal, res.optimal);
  {
    CsvWriter w(cfg.output_dir / "batches_optimal.csv", {"samples_processed", "batch_size"});
    long long used = 0;
    for (auto b : res.optimal.sizes) {
      used += b;
      w << used << static_cast<long long>(b);
      w.end_row();
    }
  }
  {
    CsvWriter w(cfg.output_dir / "summary.csv", {"key", "value"});
    auto row = [&](const std::string& k, double v) {
      w << k << v;
      w.end_row();
    };
    const double final_c = res.risk_constant.mean.back();
    const double final_o = res.risk_optimal.mean.back();
    row("chi0", chi0);
    row("gamma", gamma);
    row("lambda", res.optimal.lambda.value_or(0.0));
    row("replications", static_cast<double>(cfg.replications));
    row("final_excess_risk_constant", final_c);
    row("final_excess_risk_optimal", final_o);
    row("ratio_constant_over_optimal", final_c / final_o);
    row("samples_optimal_to_reach_constant_final",
        static_cast<double>(samples_to_reach(res.risk_optimal, res.optimal, final_c)));
  }
  return res;
}

std::int64_t samples_to_reach(const RiskCurve& curve, const BatchSchedule& schedule, double target) {
  std::int64_t used = 0;
  for (std::size_t n = 0; n < curve.mean.size(); ++n) {
    if (n > 0) used += schedule.sizes[n - 1];
    if (curve.mean[n] <= target) return used;
  }
  return -1;
}

}  // namespace bsched
