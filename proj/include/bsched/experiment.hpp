#pragma once

#include <filesystem>

#include "bsched/config.hpp"
#include "bsched/monte_carlo.hpp"
#include "bsched/sim.hpp"
#include "bsched/volatility.hpp"

namespace bsched {

/// Dense grid used for continuous-time controls and ODEs.
TimeGrid default_grid(double horizon);

/// Rescaled linear-regression control on the SGD grid TimeGrid(M h, M).
ScheduleAlphaFactory linreg_schedule_factory(double gamma, double kappa, std::int64_t m, double h);

struct ScheduleResult {
  VolatilityControl alpha;  // on the dense grid
  double gamma = 0.0;
  double budget_target = 0.0;
  std::optional<BatchSchedule> batches;  // when the horizon is M h
};

/// Optimal control for the config. The multiplier is taken from --lambda if
/// given, else solved for --budget-c, else for c = N h.
/// Writes schedule.csv (t, alpha, batch_size), metadata.csv (key, value) and,
/// when the horizon is M h, batches.csv (step, t, batch_size).
ScheduleResult cmd_schedule(const ExperimentConfig& cfg);

struct ExperimentResult {
  BatchSchedule constant;
  BatchSchedule optimal;
  RiskCurve risk_constant;
  RiskCurve risk_optimal;
};

/// Monte Carlo comparison of the constant schedule N/M against the rounded
/// optimal schedule. Writes risk_constant.csv, risk_optimal.csv
/// (samples_processed, mean_excess_risk, stderr), batches_optimal.csv
/// (samples_processed, batch_size) and summary.csv.
ExperimentResult cmd_experiment(const ExperimentConfig& cfg);

/// Samples processed when the curve first reaches `target`, or -1.
std::int64_t samples_to_reach(const RiskCurve& curve, const BatchSchedule& schedule, double target);

}  // namespace bsched
