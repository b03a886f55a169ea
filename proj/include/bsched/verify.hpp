#pragma once

#include <string>
#include <vector>

#include "bsched/config.hpp"

namespace bsched {

enum class Suite { Orders, Optimality, Oracles, ClosedForms };

Suite parse_suite(const std::string& name);
const char* to_string(Suite s) noexcept;

/// One property check: measured value against an accepted range.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool passed = false;
};

/// Least-squares slope of log(err) against log(h).
double loglog_slope(const std::vector<double>& h, const std::vector<double>& err);

/// Learning-rate ladder and horizon shared by the order checks.
inline const std::vector<double> kOrderLadder{0.08, 0.04, 0.02, 0.01};
inline constexpr double kOrderHorizon = 2.56;
inline constexpr double kOrderLambda = 300.0;

struct OrderErrors {
  std::vector<double> weak;        // |SGD - SDE| excess risk at T
  std::vector<double> flow;        // |SGD - gradient flow|
  std::vector<double> expansion;   // |SDE - order-h expansion|
};

/// Deterministic errors over kOrderLadder for the config's linear model and
/// initial value, under the rescaled control with multiplier kOrderLambda.
OrderErrors order_errors(const ExperimentConfig& cfg);

std::vector<CheckResult> run_suite(const ExperimentConfig& cfg, Suite suite);

/// Runs the suite, writes verify_<suite>.csv (check, measured, lower, upper,
/// passed) under cfg.output_dir and returns true when every check passed.
bool cmd_verify(const ExperimentConfig& cfg, Suite suite, std::vector<CheckResult>* out = nullptr);

}  // namespace bsched
