#pragma once

#include <vector>

#include "bsched/ode.hpp"
#include "bsched/risk_model.hpp"
#include "bsched/volatility.hpp"

namespace bsched {

/// Moments of the sqrt(h) and h perturbation terms around gradient flow.
struct MomentState {
  double var_half = 0.0;  // Var[X^(1/2)]
  double mean_one = 0.0;  // E[X^(1)]
};

struct MomentPath {
  TimeGrid grid;
  std::vector<MomentState> states;

  const MomentState& back() const { return states.back(); }
};

/// Integrates, with RK4 on the control's grid,
///
///   dVar/dt = -2 R''(X0) Var + alpha Sigma(X0)
///   dE/dt   = -1/2 R'''(X0) Var - R''(X0) E - 1/2 R''(X0) R'(X0)
///
/// from Var = E = 0. `x0` must live on the same grid. Gradient-flow midpoints
/// use cubic Hermite interpolation, alpha midpoints linear interpolation.
/// Negative variances above -1e-12 are clamped to zero; below that the solve
/// throws Divergence, as it does for non-finite or |state| > 1e12.
MomentPath solve_moments(const RiskSpec& spec, const Trajectory& x0, const VolatilityControl& alpha);

/// Order-h expansion of the expected risk at T:
/// R(X0_T) + h (R''(X0_T)/2 Var_T + R'(X0_T) E_T).
double risk_expansion(const RiskSpec& spec, double x0_T, const MomentState& m, double h);

/// The h-coefficient of risk_expansion, i.e. G^T mu_T with G = (R''/2, R')(X0_T).
double terminal_cost(const RiskSpec& spec, double x0_T, const MomentState& m);

/// Costate of the moment system, y = (y1, y2).
struct AdjointPath {
  Trajectory y1;
  Trajectory y2;
};

/// Closed form costate built from the backward integrals:
///   y1 = delta / 2,  y2 = e^{beta1} R'(X0_T).
/// Exact whenever the moment-system matrices commute in time (R'''/R'' constant
/// along the flow, which includes every quadratic risk).
AdjointPath adjoint_solution(const RiskSpec& spec, const Theorem21Quantities& q, double x0_T);

/// Residual of dY/dt = -A(t)^T Y with A = [[-2R'', 0], [-R'''/2, -R'']] evaluated
/// along X0, using central differences of y on interior nodes. Returns the
/// maximum residual scaled by 1 + |dY/dt|.
double adjoint_residual(const RiskSpec& spec, const Trajectory& x0, const AdjointPath& y);

}  // namespace bsched
