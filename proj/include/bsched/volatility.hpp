#pragma once

#include <optional>
#include <vector>

#include "bsched/ode.hpp"

namespace bsched {

/// Continuous surrogate for the inverse batch size, alpha(t) = 1/B(t) in (0, 1].
struct VolatilityControl {
  Trajectory alpha;
  /// Multiplier of the generic formula; absent for hand-made controls.
  std::optional<double> lambda;
  /// Multiplier of the rescaled linear-regression formula, when produced there.
  std::optional<double> lambda_reparam;
  /// Time the control leaves the clamp at 1 (linear-regression path only).
  std::optional<double> switch_time;
  /// int_0^T 1/alpha dt.
  double budget = 0.0;
  /// Upper bound on the Lipschitz constant of sqrt(alpha).
  double lipschitz_bound = 0.0;

  const TimeGrid& grid() const { return alpha.grid; }
};

/// Smallest alpha used when forming 1/alpha.
inline constexpr double kAlphaFloor = 1e-6;

/// Wraps arbitrary samples; checks 0 < alpha <= 1, sets the trapezoid budget
/// and the empirical grid Lipschitz constant of sqrt(alpha) as the bound.
VolatilityControl make_control(const TimeGrid& grid, std::vector<double> alpha);

/// Constant control alpha == a.
VolatilityControl constant_control(const TimeGrid& grid, double a);

/// Trapezoid integral of 1/max(alpha, kAlphaFloor) over the grid.
double trapezoid_budget(const Trajectory& alpha);

/// max_k |sqrt(alpha_{k+1}) - sqrt(alpha_k)| / dt.
double empirical_sqrt_lipschitz(const Trajectory& alpha);

}  // namespace bsched
