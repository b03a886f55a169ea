#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "bsched/risk_model.hpp"

namespace bsched {

/// One experiment: sample size N consumed in M steps of learning rate h.
/// Derived: horizon T = M h and sample budget c = N h.
struct ExperimentConfig {
  std::int64_t n = 8192;
  std::int64_t m = 1024;
  double h = 0.01;
  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: OpenMP default
  LinRegParams linreg{};
  std::optional<double> chi0;          // default: value giving gamma = 280
  std::optional<double> lambda;        // rescaled multiplier for `schedule`
  std::optional<double> budget_c;      // target int 1/alpha for `schedule`
  std::optional<double> gamma;         // overrides gamma derived from chi0
  std::optional<double> horizon;       // overrides M h for `schedule`
  std::filesystem::path output_dir = "out";

  double horizon_or_default() const { return horizon.value_or(static_cast<double>(m) * h); }
  double budget() const { return static_cast<double>(n) * h; }
  double chi0_or_default() const;
  double gamma_or_default() const;
};

/// gamma of the default initial value.
inline constexpr double kDefaultGamma = 280.0;

/// Applies one key=value setting. Keys match the CLI flag names without the
/// leading dashes; '-' and '_' are interchangeable. Throws InvalidParameter on
/// unknown keys or unparsable values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads a flat key=value file ('#' starts a comment, blank lines ignored).
void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

/// Checks N, M, h, replications and linreg parameters; N must be divisible by M.
void validate(const ExperimentConfig& cfg);

}  // namespace bsched
