#include "bsched/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "bsched/error.hpp"

namespace bsched {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidParameter, "cannot parse '" + v + "' for " + key);
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidParameter, "cannot parse '" + v + "' for " + key);
  }
}

}  // namespace

double ExperimentConfig::chi0_or_default() const {
  return chi0.value_or(chi0_for_gamma(linreg, kDefaultGamma));
}

double ExperimentConfig::gamma_or_default() const {
  return gamma.value_or(gamma_of(linreg, chi0_or_default()));
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '_', '-');
  const std::string v = trim(raw_value);
  using Setter = std::function<void()>;
  const std::map<std::string, Setter> setters = {
      {"n", [&] { cfg.n = parse_int(key, v); }},
      {"m", [&] { cfg.m = parse_int(key, v); }},
      {"h", [&] { cfg.h = parse_double(key, v); }},
      {"replications",
       [&] {
         const long long r = parse_int(key, v);
         if (r <= 0) throw Error(ErrorKind::InvalidParameter, "replications must be positive");
         cfg.replications = static_cast<std::size_t>(r);
       }},
      {"seed", [&] { cfg.seed = static_cast<std::uint64_t>(parse_int(key, v)); }},
      {"threads", [&] { cfg.threads = static_cast<int>(parse_int(key, v)); }},
      {"kappa", [&] { cfg.linreg.kappa = parse_double(key, v); }},
      {"theta-star", [&] { cfg.linreg.theta_star = parse_double(key, v); }},
      {"sigma-eps2", [&] { cfg.linreg.sigma_eps2 = parse_double(key, v); }},
      {"kurtosis", [&] { cfg.linreg.kurtosis = parse_double(key, v); }},
      {"chi0", [&] { cfg.chi0 = parse_double(key, v); }},
      {"lambda", [&] { cfg.lambda = parse_double(key, v); }},
      {"budget-c", [&] { cfg.budget_c = parse_double(key, v); }},
      {"gamma", [&] { cfg.gamma = parse_double(key, v); }},
      {"horizon", [&] { cfg.horizon = parse_double(key, v); }},
      {"out", [&] { cfg.output_dir = v; }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) {
    throw Error(ErrorKind::InvalidParameter, "unknown config key '" + raw_key + "'");
  }
  it->second();
}

void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidParameter,
                  path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void validate(const ExperimentConfig& cfg) {
  validate(cfg.linreg);
  if (cfg.m <= 0 || cfg.n <= 0) {
    throw Error(ErrorKind::InvalidParameter, "N and M must be positive");
  }
  if (cfg.n % cfg.m != 0) {
    throw Error(ErrorKind::InvalidParameter,
                "N=" + std::to_string(cfg.n) + " is not divisible by M=" + std::to_string(cfg.m));
  }
  if (!(cfg.h > 0.0 && cfg.h < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "learning rate h must lie in (0, 1)");
  }
  if (cfg.replications == 0) {
    throw Error(ErrorKind::InvalidParameter, "replications must be positive");
  }
  if (cfg.lambda && !(*cfg.lambda > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "lambda must be positive");
  }
  if (cfg.horizon && !(*cfg.horizon > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "horizon must be positive");
  }
}

}  // namespace bsched
