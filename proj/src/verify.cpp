#include "bsched/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bsched/control.hpp"
#include "bsched/csv.hpp"
#include "bsched/error.hpp"
#include "bsched/experiment.hpp"
#include "bsched/moments.hpp"
#include "bsched/monte_carlo.hpp"
#include "bsched/sim.hpp"

namespace bsched {

namespace {

constexpr double kControlHorizon = 2.8;

CheckResult within(std::string name, double measured, double lower, double upper) {
  const bool ok = measured >= lower && measured <= upper;
  return {std::move(name), measured, lower, upper, ok};
}

CheckResult at_most(std::string name, double measured, double upper) {
  return within(std::move(name), measured, -std::numeric_limits<double>::infinity(), upper);
}

std::vector<CheckResult> orders_suite(const ExperimentConfig& cfg) {
  const OrderErrors e = order_errors(cfg);
  return {within("weak_order_slope_sgd_vs_sde", loglog_slope(kOrderLadder, e.weak), 1.8, 2.3),
          within("first_order_slope_sgd_vs_gradient_flow", loglog_slope(kOrderLadder, e.flow), 0.8, 1.3),
          within("expansion_order_slope", loglog_slope(kOrderLadder, e.expansion), 1.8, 2.3)};
}

std::vector<CheckResult> optimality_suite(const ExperimentConfig& cfg) {
  const RiskSpec spec = make_linreg(cfg.linreg);
  const double chi0 = cfg.chi0_or_default();
  const TimeGrid grid = default_grid(kControlHorizon);
  const Trajectory x0 = integrate_gradient_flow(spec, chi0, grid);
  const Theorem21Quantities q = theorem21_quantities(spec, x0);
  const double lambda = lambda_generic_from_reparam(cfg.linreg, kControlHorizon, kOrderLambda);
  const VolatilityControl best = optimal_alpha(q, spec, x0, lambda);
  const AdjointPath y = adjoint_solution(spec, q, x0.back());

  std::vector<CheckResult> out;
  out.push_back(at_most("hamiltonian_stationarity_residual",
                        hamiltonian_stationarity_residual(spec, x0, y, best, lambda), 1e-8));
  out.push_back(at_most("adjoint_ode_residual", adjoint_residual(spec, x0, y), 1e-6));

  const double j_best = lagrangian(spec, x0, best, lambda);
  auto engine = make_engine({cfg.seed, 0x0b7});
  std::uniform_real_distribution<double> amp(-0.3, 0.3);
  std::uniform_real_distribution<double> centre(0.0, kControlHorizon);
  std::uniform_real_distribution<double> width(0.05, 0.5);
  double worst = std::numeric_limits<double>::infinity();
  int beaten = 0;
  for (int i = 0; i < 50; ++i) {
    const double a = amp(engine);
    const double c = centre(engine);
    const double w = width(engine);
    std::vector<double> alpha(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double z = (grid.t(k) - c) / w;
      alpha[k] = std::clamp(best.alpha[k] + a * std::exp(-0.5 * z * z), 0.01, 1.0);
    }
    const double gap = lagrangian(spec, x0, make_control(grid, std::move(alpha)), lambda) - j_best;
    worst = std::min(worst, gap);
    if (gap < -1e-8) ++beaten;
  }
  out.push_back(within("min_lagrangian_gap_over_50_perturbations", worst, -1e-8,
                       std::numeric_limits<double>::infinity()));
  out.push_back(at_most("perturbations_beating_optimum", beaten, 0.0));
  return out;
}

std::vector<CheckResult> oracles_suite(const ExperimentConfig& cfg) {
  const double chi0 = cfg.chi0_or_default();
  const double gamma = cfg.gamma_or_default();
  std::vector<CheckResult> out;

  const BatchSchedule sched =
      schedule_from_alpha(linreg_schedule_factory(gamma, cfg.linreg.kappa, cfg.m, cfg.h), cfg.n, cfg.m);
  const SgdExperiment sgd{cfg.linreg, sched, cfg.h, chi0};
  const RiskCurve mc = sgd_excess_risk_parallel(sgd, cfg.replications, cfg.seed, cfg.threads);
  const auto exact = exact_sgd_moments(cfg.linreg, sched, cfg.h, chi0);
  const double sgd_exact = 0.5 * cfg.linreg.kappa * exact.back().m2;
  out.push_back(at_most("sgd_mc_minus_exact_in_stderr",
                        std::abs(mc.mean.back() - sgd_exact) / mc.stderr_.back(), 3.0));

  const RiskSpec spec = make_linreg(cfg.linreg);
  const TimeGrid grid = default_grid(kOrderHorizon);
  const VolatilityControl alpha = linreg_alpha(gamma, cfg.linreg.kappa, kOrderLambda, grid);
  const std::size_t substeps = em_substeps_for(grid, cfg.h);
  const SdeExperiment sde{spec, alpha, cfg.h, chi0, substeps};
  const RiskCurve em = sde_terminal_excess_risk_parallel(sde, cfg.replications, cfg.seed, cfg.threads);
  const double sde_exact = 0.5 * cfg.linreg.kappa * exact_sde_second_moment(spec, alpha, cfg.h, chi0).back();
  const double dt = grid.dt() / static_cast<double>(substeps);
  const double allowed = 3.0 * em.stderr_.back() + 10.0 * dt * sde_exact;
  out.push_back(at_most("sde_mc_minus_exact_over_allowance",
                        std::abs(em.mean.back() - sde_exact) / allowed, 1.0));
  return out;
}

std::vector<CheckResult> closed_forms_suite(const ExperimentConfig& cfg) {
  std::vector<CheckResult> out;
  const double kappa = cfg.linreg.kappa;
  const double chi0 = cfg.chi0_or_default();
  const double gamma = cfg.gamma_or_default();
  const RiskSpec spec = make_linreg(cfg.linreg);
  const TimeGrid grid = default_grid(kControlHorizon);

  const Trajectory x0 = integrate_gradient_flow(spec, chi0, grid);
  const Theorem21Quantities q = theorem21_quantities(spec, x0);
  double delta_err = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double closed = kappa * std::exp(-2.0 * kappa * (kControlHorizon - grid.t(k)));
    delta_err = std::max(delta_err, std::abs(q.delta[k] - closed));
  }
  out.push_back(at_most("delta_vs_closed_form", delta_err, 1e-8));

  out.push_back(at_most("switch_time_reference_value",
                        std::abs(switch_time(280.0, 1.0, 300.0) - 0.5 * std::log(20.0)), 1e-9));

  const VolatilityControl ctl = linreg_alpha(gamma, kappa, kOrderLambda, grid);
  out.push_back(at_most("empirical_lipschitz_over_bound",
                        empirical_sqrt_lipschitz(ctl.alpha) / ctl.lipschitz_bound, 1.0));

  double f_err = 0.0;
  for (double t : {0.5, 1.0, 1.5, 2.0, 2.8}) {
    const double quad = quadrature([&](double s) { return std::sqrt(gamma + std::exp(2.0 * kappa * s)); },
                                   0.0, t, 1e-12);
    const double closed = linreg_antiderivative(gamma, kappa, t) - linreg_antiderivative(gamma, kappa, 0.0);
    f_err = std::max(f_err, std::abs(quad - closed));
  }
  out.push_back(at_most("antiderivative_vs_quadrature", f_err, 1e-8));

  const double c = linreg_budget(gamma, kappa, 75.0, kControlHorizon);
  const double closed_lambda = linreg_lambda_no_clamp(gamma, kappa, kControlHorizon, c);
  const LambdaSolution solved =
      solve_lambda(c, [&](double l) { return linreg_alpha(gamma, kappa, l, grid); });
  out.push_back(at_most("closed_form_lambda_vs_bisection",
                        std::abs(solved.lambda - closed_lambda) / closed_lambda, 1e-6));

  const double lg = lambda_generic_from_reparam(cfg.linreg, kControlHorizon, kOrderLambda);
  const VolatilityControl generic = optimal_alpha(q, spec, x0, lg);
  double alpha_err = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    alpha_err = std::max(alpha_err, std::abs(generic.alpha[k] - ctl.alpha[k]));
  }
  out.push_back(at_most("generic_vs_linreg_alpha", alpha_err, 1e-10));
  return out;
}

}  // namespace

Suite parse_suite(const std::string& name) {
  if (name == "orders") return Suite::Orders;
  if (name == "optimality") return Suite::Optimality;
  if (name == "oracles") return Suite::Oracles;
  if (name == "closed_forms" || name == "closed-forms") return Suite::ClosedForms;
  throw Error(ErrorKind::InvalidParameter, "unknown suite '" + name + "'");
}

const char* to_string(Suite s) noexcept {
  switch (s) {
    case Suite::Orders: return "orders";
    case Suite::Optimality: return "optimality";
    case Suite::Oracles: return "oracles";
    case Suite::ClosedForms: return "closed_forms";
  }
  return "unknown";
}

double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

OrderErrors order_errors(const ExperimentConfig& cfg) {
  const LinRegParams& p = cfg.linreg;
  const RiskSpec spec = make_linreg(p);
  const double chi0 = cfg.chi0_or_default();
  const double gamma = cfg.gamma_or_default();
  const TimeGrid grid = default_grid(kOrderHorizon);
  const VolatilityControl alpha = linreg_alpha(gamma, p.kappa, kOrderLambda, grid);
  const Trajectory x0 = integrate_gradient_flow(spec, chi0, grid);
  const MomentPath moments = solve_moments(spec, x0, alpha);
  const double flow_excess = excess_risk(spec, x0.back());

  OrderErrors e;
  for (double h : kOrderLadder) {
    const auto steps = static_cast<std::size_t>(std::llround(kOrderHorizon / h));
    std::vector<double> inverse_batch(steps);
    for (std::size_t n = 0; n < steps; ++n) inverse_batch[n] = alpha.alpha.at(static_cast<double>(n) * h);
    const double sgd = 0.5 * p.kappa * exact_sgd_moments(p, inverse_batch, h, chi0).back().m2;
    const double sde = 0.5 * p.kappa * exact_sde_second_moment(p, alpha, h, chi0).back();
    const double expansion = risk_expansion(spec, x0.back(), moments.back(), h) - p.r_star();
    e.weak.push_back(std::abs(sgd - sde));
    e.flow.push_back(std::abs(sgd - flow_excess));
    e.expansion.push_back(std::abs(sde - expansion));
  }
  return e;
}

std::vector<CheckResult> run_suite(const ExperimentConfig& cfg, Suite suite) {
  validate(cfg);
  switch (suite) {
    case Suite::Orders: return orders_suite(cfg);
    case Suite::Optimality: return optimality_suite(cfg);
    case Suite::Oracles: return oracles_suite(cfg);
    case Suite::ClosedForms: return closed_forms_suite(cfg);
  }
  return {};
}

bool cmd_verify(const ExperimentConfig& cfg, Suite suite, std::vector<CheckResult>* out) {
  std::vector<CheckResult> checks = run_suite(cfg, suite);
  std::filesystem::create_directories(cfg.output_dir);
  CsvWriter w(cfg.output_dir / (std::string("verify_") + to_string(suite) + ".csv"),
              {"check", "measured", "lower", "upper", "passed"});
  bool all = true;
  for (const auto& c : checks) {
    w << c.name << c.measured << c.lower << c.upper << static_cast<long long>(c.passed);
    w.end_row();
    all = all && c.passed;
  }
  if (out) *out = std::move(checks);
  return all;
}

}  // namespace bsched
