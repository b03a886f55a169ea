#include "bsched/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bsched/error.hpp"

namespace bsched {

VolatilityControl optimal_alpha(const Theorem21Quantities& q, const RiskSpec& spec,
                                const Trajectory& x0, double lambda) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "lambda must be positive");
  }
  const TimeGrid& grid = x0.grid;
  std::vector<double> a(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double delta = q.delta[k];
    const double sig = spec.sigma2(x0[k]);
    if (!(delta > 0.0)) {
      throw Error(ErrorKind::NonpositiveDelta, "delta(t) <= 0 at t = " + std::to_string(grid.t(k)));
    }
    if (!(sig > 0.0)) {
      throw Error(ErrorKind::NonpositiveSigma, "Sigma(X0_t) <= 0 at t = " + std::to_string(grid.t(k)));
    }
    a[k] = std::min(1.0, std::sqrt(2.0 * lambda / (delta * sig)));
  }
  VolatilityControl out = make_control(grid, std::move(a));
  out.lambda = lambda;
  return out;
}

double switch_time(double gamma, double kappa, double lambda) {
  if (lambda > gamma + 1.0) return std::log(lambda - gamma) / (2.0 * kappa);
  return 0.0;
}

double lipschitz_bound(double kappa, double lambda, double horizon) {
  return kappa / (2.0 * lambda) * std::exp(2.0 * kappa * horizon);
}

double linreg_antiderivative(double gamma, double kappa, double t) {
  const double s = std::sqrt(gamma + std::exp(2.0 * kappa * t));
  const double rg = std::sqrt(gamma);
  return (s - rg * std::atanh(rg / s)) / kappa;
}

double linreg_budget(double gamma, double kappa, double lambda, double horizon) {
  const double ts = std::clamp(switch_time(gamma, kappa, lambda), 0.0, horizon);
  return ts + (linreg_antiderivative(gamma, kappa, horizon) - linreg_antiderivative(gamma, kappa, ts)) /
                  std::sqrt(lambda);
}

double linreg_lambda_no_clamp(double gamma, double kappa, double horizon, double c) {
  const double span = linreg_antiderivative(gamma, kappa, horizon) - linreg_antiderivative(gamma, kappa, 0.0);
  return span * span / (c * c);
}

VolatilityControl linreg_alpha(double gamma, double kappa, double lambda, const TimeGrid& grid) {
  if (!(gamma >= 0.0) || !(kappa > 0.0) || !(lambda > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "linreg control needs gamma >= 0, kappa > 0, lambda > 0");
  }
  std::vector<double> a(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    a[k] = std::min(1.0, std::sqrt(lambda / (gamma + std::exp(2.0 * kappa * grid.t(k)))));
    a[k] = std::max(a[k], std::numeric_limits<double>::min());
  }
  VolatilityControl out{Trajectory(grid, std::move(a)), {}, {}, {}, 0.0, 0.0};
  out.lambda_reparam = lambda;
  out.switch_time = switch_time(gamma, kappa, lambda);
  out.budget = linreg_budget(gamma, kappa, lambda, grid.horizon());
  out.lipschitz_bound = lipschitz_bound(kappa, lambda, grid.horizon());
  return out;
}

double budget_of(const VolatilityControl& alpha) { return alpha.budget; }

double lambda_generic_from_reparam(const LinRegParams& p, double horizon, double lambda_reparam) {
  return p.kappa * p.kappa * std::exp(-2.0 * p.kappa * horizon) * p.r_star() * lambda_reparam;
}

double lambda_reparam_from_generic(const LinRegParams& p, double horizon, double lambda_generic) {
  return lambda_generic / (p.kappa * p.kappa * std::exp(-2.0 * p.kappa * horizon) * p.r_star());
}

LambdaSolution solve_lambda(double c, const AlphaFactory& alpha_factory) {
  constexpr double kLambdaMin = 1e-12;
  constexpr double kLambdaMax = 1e12;
  constexpr double kRelTol = 1e-8;
  constexpr double kLogWidth = 1e-12;

  VolatilityControl probe = alpha_factory(1.0);
  const double horizon = probe.grid().horizon();
  if (!(c >= horizon)) {
    throw Error(ErrorKind::InfeasibleBudget,
                "budget c = " + std::to_string(c) + " is below the horizon T = " + std::to_string(horizon));
  }
  // c == T is only met on the plateau where alpha is identically 1.
  const bool plateau = c <= horizon * (1.0 + 1e-12);
  const double ceiling = c * (1.0 + 1e-12);
  auto within = [&](const VolatilityControl& a) {
    if (!plateau) return budget_of(a) <= ceiling;
    return std::all_of(a.alpha.values.begin(), a.alpha.values.end(), [](double v) { return v >= 1.0; });
  };

  int iterations = 0;
  double lo = 1.0;
  double hi = 1.0;
  VolatilityControl hi_alpha = probe;
  if (!within(probe)) {
    for (;;) {
      hi *= 10.0;
      if (hi > kLambdaMax) {
        throw Error(ErrorKind::BracketFailure, "budget stays above c up to lambda = 1e12");
      }
      hi_alpha = alpha_factory(hi);
      ++iterations;
      if (within(hi_alpha)) break;
      lo = hi;
    }
  } else {
    for (;;) {
      lo /= 10.0;
      if (lo < kLambdaMin) {
        throw Error(ErrorKind::BracketFailure, "budget stays below c down to lambda = 1e-12");
      }
      VolatilityControl a = alpha_factory(lo);
      ++iterations;
      if (!within(a)) break;
      hi = lo;
      hi_alpha = std::move(a);
    }
  }

  // Invariant: C(lo) > c >= C(hi).
  if (std::abs(budget_of(hi_alpha) - c) <= kRelTol * c && !plateau) {
    return {hi, std::move(hi_alpha), iterations};
  }
  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  while (log_hi - log_lo > kLogWidth) {
    const double log_mid = 0.5 * (log_lo + log_hi);
    const double mid = std::exp(log_mid);
    VolatilityControl a = alpha_factory(mid);
    ++iterations;
    const double cm = budget_of(a);
    if (!plateau && std::abs(cm - c) <= kRelTol * c) {
      return {mid, std::move(a), iterations};
    }
    if (!within(a)) {
      log_lo = log_mid;
    } else {
      log_hi = log_mid;
      hi_alpha = std::move(a);
    }
    if (iterations > 1000) break;
  }
  return {std::exp(log_hi), std::move(hi_alpha), iterations};
}

double lagrangian(const RiskSpec& spec, const Trajectory& x0, const VolatilityControl& alpha,
                  double lambda) {
  const MomentPath path = solve_moments(spec, x0, alpha);
  return terminal_cost(spec, x0.back(), path.back()) + lambda * trapezoid_budget(alpha.alpha);
}

double hamiltonian_stationarity_residual(const RiskSpec& spec, const Trajectory& x0,
                                         const AdjointPath& y, const VolatilityControl& alpha,
                                         double lambda) {
  double worst = 0.0;
  for (std::size_t k = 0; k < x0.grid.size(); ++k) {
    const double a = alpha.alpha[k];
    if (a >= 1.0) continue;
    const double penalty = lambda / (a * a);
    const double gain = spec.sigma2(x0[k]) * y.y1[k];
    worst = std::max(worst, std::abs(gain - penalty) / penalty);
  }
  return worst;
}

}  // namespace bsched
