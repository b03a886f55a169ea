#pragma once

#include <functional>

#include "bsched/moments.hpp"
#include "bsched/ode.hpp"
#include "bsched/risk_model.hpp"
#include "bsched/volatility.hpp"

namespace bsched {

/// alpha*_t = min(1, sqrt(2 lambda / (delta_t Sigma(X0_t)))) on the grid of `x0`.
/// Budget by trapezoid, Lipschitz bound from grid differences.
/// Throws NonpositiveDelta / NonpositiveSigma when the formula is undefined.
VolatilityControl optimal_alpha(const Theorem21Quantities& q, const RiskSpec& spec,
                                const Trajectory& x0, double lambda);

/// Rescaled linear-regression control alpha*_t = min(1, sqrt(lambda / (gamma + e^{2 kappa t}))).
/// Budget is evaluated in closed form and the Lipschitz bound is analytic.
VolatilityControl linreg_alpha(double gamma, double kappa, double lambda, const TimeGrid& grid);

/// Time at which the linear-regression control leaves 1:
/// ln(lambda - gamma) / (2 kappa) if lambda > gamma + 1, else 0. Not clipped to T.
double switch_time(double gamma, double kappa, double lambda);

/// int_0^T 1/alpha dt as recorded on the control.
double budget_of(const VolatilityControl& alpha);

/// Antiderivative of sqrt(gamma + e^{2 kappa t}):
/// (s - sqrt(gamma) artanh(sqrt(gamma) / s)) / kappa with s = sqrt(gamma + e^{2 kappa t}).
double linreg_antiderivative(double gamma, double kappa, double t);

/// Exact budget of the rescaled linear-regression control on [0, T].
double linreg_budget(double gamma, double kappa, double lambda, double horizon);

/// Closed-form multiplier (F(T) - F(0))^2 / c^2, valid only when the control
/// never reaches 1, i.e. the result is <= gamma + 1.
double linreg_lambda_no_clamp(double gamma, double kappa, double horizon, double c);

/// Map between the rescaled (linear-regression) and generic multipliers:
/// lambda_generic = kappa^2 e^{-2 kappa T} R* lambda_reparam.
double lambda_generic_from_reparam(const LinRegParams& p, double horizon, double lambda_reparam);
double lambda_reparam_from_generic(const LinRegParams& p, double horizon, double lambda_generic);

/// Bound on the Lipschitz constant of sqrt(alpha*) for linear regression,
/// kappa e^{2 kappa T} / (2 lambda) with the rescaled multiplier.
double lipschitz_bound(double kappa, double lambda, double horizon);

using AlphaFactory = std::function<VolatilityControl(double lambda)>;

struct LambdaSolution {
  double lambda;
  VolatilityControl alpha;
  int iterations;
};

/// Finds lambda with budget(alpha(lambda)) = c by bisection on log lambda,
/// using that the budget is continuous and non-increasing in lambda.
/// Stops when |C - c| <= 1e-8 c or the log-bracket is narrower than 1e-12.
/// For c == T the smallest fully clamped lambda is returned.
/// Throws InfeasibleBudget if c < T, BracketFailure if [1e-12, 1e12] cannot
/// straddle c.
LambdaSolution solve_lambda(double c, const AlphaFactory& alpha_factory);

/// Lagrangian of the dual problem evaluated through the moment ODEs:
/// R''(X0_T)/2 Var_T + R'(X0_T) E_T + lambda int 1/alpha.
double lagrangian(const RiskSpec& spec, const Trajectory& x0, const VolatilityControl& alpha,
                  double lambda);

/// Largest relative violation of Sigma y1 - lambda / alpha^2 = 0 over grid
/// points where alpha < 1 (the first-order condition of the Hamiltonian).
double hamiltonian_stationarity_residual(const RiskSpec& spec, const Trajectory& x0,
                                         const AdjointPath& y, const VolatilityControl& alpha,
                                         double lambda);

}  // namespace bsched
