// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "bsched/config.hpp"
#include "bsched/control.hpp"
#include "bsched/experiment.hpp"
#include "bsched/monte_carlo.hpp"
#include "bsched/verify.hpp"

using namespace bsched;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

constexpr double kGamma = 280.0;
constexpr double kControlHorizon = 2.8;

int failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= budget_seconds;
  const bool ok = o.passed && in_time;
  if (!ok) ++failures;
  std::printf("%s criterion %d: %s | %s | %.2fs (limit %.0fs)%s\n", ok ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs, budget_seconds, in_time ? "" : " OVER TIME");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome from_checks(const std::vector<CheckResult>& checks) {
  Outcome o{true, ""};
  for (const auto& c : checks) {
    o.passed = o.passed && c.passed;
    std::ostringstream s;
    s << c.name << '=' << c.measured << (c.passed ? "" : "(!)") << ' ';
    o.detail += s.str();
  }
  return o;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.output_dir = std::filesystem::temp_directory_path() / "bsched_acceptance";
  return cfg;
}

}  // namespace

int main() {
  const LinRegParams p{};

  criterion(1, "switch time and unclamped control", 1.0, [&] {
    const double ts = switch_time(kGamma, p.kappa, 300.0);
    const double err = std::abs(ts - 0.5 * std::log(20.0));
    const auto a75 = linreg_alpha(kGamma, p.kappa, 75.0, default_grid(kControlHorizon));
    const double max_alpha = *std::max_element(a75.alpha.values.begin(), a75.alpha.values.end());
    return Outcome{err <= 1e-9 && max_alpha < 1.0,
                   fmt("switch_time=%.15f ", ts) + fmt("|err|=%.2e ", err) + fmt("max alpha(lambda=75)=%.6f", max_alpha)};
  });

  criterion(2, "integer schedules spend exactly N", 1.0, [&] {
    Outcome o{true, ""};
    for (auto [n, m] : {std::pair<std::int64_t, std::int64_t>{1024, 256}, {8192, 1024}}) {
      const auto s = schedule_from_alpha(linreg_schedule_factory(kGamma, p.kappa, m, 0.01), n, m);
      const auto sum = std::accumulate(s.sizes.begin(), s.sizes.end(), std::int64_t{0});
      const auto min_b = *std::min_element(s.sizes.begin(), s.sizes.end());
      o.passed = o.passed && sum == n && min_b >= 1 && s.steps() == static_cast<std::size_t>(m);
      o.detail += "N=" + std::to_string(n) + " sum=" + std::to_string(sum) + " minB=" + std::to_string(min_b) + " ";
    }
    return o;
  });

  const ExperimentConfig base = default_config();
  criterion(3, "weak second order and first-order flow baseline", 10.0, [&] {
    const OrderErrors orders = order_errors(base);
    const double weak = loglog_slope(kOrderLadder, orders.weak);
    const double flow = loglog_slope(kOrderLadder, orders.flow);
    return Outcome{weak >= 1.8 && weak <= 2.3 && flow >= 0.8 && flow <= 1.3,
                   fmt("weak slope=%.4f in [1.8, 2.3] ", weak) + fmt("flow slope=%.4f in [0.8, 1.3]", flow)};
  });

  criterion(4, "expansion order", 10.0, [&] {
    const double slope = loglog_slope(kOrderLadder, order_errors(base).expansion);
    return Outcome{slope >= 1.8 && slope <= 2.3, fmt("slope=%.4f in [1.8, 2.3]", slope)};
  });

  criterion(5, "Pontryagin optimality", 30.0, [&] { return from_checks(run_suite(base, Suite::Optimality)); });

  criterion(6, "multiplier round trip and closed form", 10.0, [&] {
    const TimeGrid grid = default_grid(kControlHorizon);
    const AlphaFactory f = [&](double l) { return linreg_alpha(kGamma, p.kappa, l, grid); };
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double c = kControlHorizon * (1.05 + (20.0 - 1.05) * i / 9.0);
      const auto sol = solve_lambda(c, f);
      worst = std::max(worst, std::abs(sol.alpha.budget - c) / c);
    }
    double f_err = 0.0;
    for (int i = 1; i <= 8; ++i) {
      const double t = kControlHorizon * i / 8.0;
      const double q = quadrature([&](double s) { return std::sqrt(kGamma + std::exp(2 * p.kappa * s)); }, 0.0, t, 1e-12);
      const double F = linreg_antiderivative(kGamma, p.kappa, t) - linreg_antiderivative(kGamma, p.kappa, 0.0);
      f_err = std::max(f_err, std::abs(F - q) / std::max(1.0, std::abs(q)));
    }
    const double c = linreg_budget(kGamma, p.kappa, 75.0, kControlHorizon);
    const double closed = linreg_lambda_no_clamp(kGamma, p.kappa, kControlHorizon, c);
    const double bisected = solve_lambda(c, f).lambda;
    const double rel = std::abs(closed - bisected) / bisected;
    return Outcome{worst <= 1e-8 && f_err <= 1e-8 && rel <= 1e-6,
                   fmt("max |C-c|/c=%.2e ", worst) + fmt("F vs quadrature=%.2e ", f_err) +
                       fmt("closed vs bisection=%.2e", rel)};
  });

  criterion(7, "Monte Carlo agrees with exact oracles (2000 replications)", 120.0, [&] {
    ExperimentConfig cfg = base;
    cfg.replications = 2000;
    const double chi0 = cfg.chi0_or_default();
    const auto sched = schedule_from_alpha(linreg_schedule_factory(kGamma, p.kappa, cfg.m, cfg.h), cfg.n, cfg.m);
    const RiskCurve mc = sgd_excess_risk_parallel({p, sched, cfg.h, chi0}, cfg.replications, cfg.seed);
    const double sgd_exact = 0.5 * p.kappa * exact_sgd_moments(p, sched, cfg.h, chi0).back().m2;
    const double z_sgd = std::abs(mc.mean.back() - sgd_exact) / mc.stderr_.back();

    const RiskSpec spec = make_linreg(p);
    const auto alpha = linreg_alpha(kGamma, p.kappa, kOrderLambda, default_grid(kOrderHorizon));
    const SdeExperiment sde{spec, alpha, cfg.h, chi0, em_substeps_for(alpha.grid(), cfg.h)};
    const RiskCurve em = sde_terminal_excess_risk_parallel(sde, cfg.replications, cfg.seed);
    const double sde_exact = 0.5 * p.kappa * exact_sde_second_moment(p, alpha, cfg.h, chi0).back();
    const double z_sde = std::abs(em.mean.back() - sde_exact) / em.stderr_.back();
    return Outcome{z_sgd <= 3.0 && z_sde <= 3.0, fmt("SGD z=%.3f ", z_sgd) + fmt("EM z=%.3f (limit 3)", z_sde)};
  });

  criterion(8, "optimal schedule beats constant batches", 600.0, [&] {
    ExperimentConfig cfg = base;
    cfg.n = 8192;
    cfg.m = 1024;
    cfg.h = 0.01;
    cfg.replications = 1000;
    cfg.chi0 = -1.0 + std::sqrt(140.0);
    const ExperimentResult r = cmd_experiment(cfg);
    const double constant_final = r.risk_constant.mean.back();
    const double ratio = constant_final / r.risk_optimal.mean.back();
    const std::int64_t reach = samples_to_reach(r.risk_optimal, r.optimal, constant_final);
    return Outcome{ratio >= 3.0 && reach >= 0 && reach < cfg.n,
                   fmt("final risk ratio=%.3f (>= 3) ", ratio) + "samples to reach constant final=" +
                       std::to_string(reach) + " of " + std::to_string(cfg.n)};
  });

  criterion(9, "Lipschitz bound of sqrt(alpha)", 1.0, [&] {
    Outcome o{true, ""};
    for (double lambda : {75.0, 300.0}) {
      const auto a = linreg_alpha(kGamma, p.kappa, lambda, default_grid(kControlHorizon));
      const double emp = empirical_sqrt_lipschitz(a.alpha);
      const double bound = lipschitz_bound(p.kappa, lambda, kControlHorizon);
      o.passed = o.passed && emp <= bound;
      o.detail += fmt("lambda=%g: ", lambda) + fmt("empirical=%.6f ", emp) + fmt("bound=%.6f ", bound);
    }
    return o;
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
