#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bsched/risk_model.hpp"

namespace bsched {

/// Uniform grid t_k = k T / K, k = 0..K, on [0, T].
class TimeGrid {
 public:
  static constexpr std::size_t kDefaultSteps = 4096;

  TimeGrid(double horizon, std::size_t steps);

  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }
  std::size_t size() const { return steps_ + 1; }
  double dt() const { return horizon_ / static_cast<double>(steps_); }
  /// Exact endpoint at k == steps().
  double t(std::size_t k) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double horizon_;
  std::size_t steps_;
};

/// A real function of time sampled on every node of a grid.
struct Trajectory {
  TimeGrid grid;
  std::vector<double> values;

  Trajectory(TimeGrid g, std::vector<double> v);
  explicit Trajectory(TimeGrid g) : Trajectory(g, std::vector<double>(g.size(), 0.0)) {}

  double front() const { return values.front(); }
  double back() const { return values.back(); }
  double operator[](std::size_t k) const { return values[k]; }
  /// Piecewise-linear interpolation, clamped to [0, T].
  double at(double t) const;
};

/// dX = -R'(X) dt, X_0 = chi0, by classical RK4 on `grid`.
/// Throws Divergence if |X| exceeds 1e12 or becomes non-finite.
Trajectory integrate_gradient_flow(const RiskSpec& spec, double chi0, const TimeGrid& grid);

/// Midpoint value of a gradient-flow step by cubic Hermite interpolation,
/// fourth-order accurate given node values and slopes -R'(x).
double gradient_flow_midpoint(const RiskSpec& spec, double x_left, double x_right, double dt);

/// Adaptive Simpson quadrature with absolute error target `tol`.
/// Throws NonConvergence if recursion exceeds depth 60.
double quadrature(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

/// (e^{2b} - e^{b}) / b, with the removable singularity at b = 0 filled by 1.
double eta_of(double beta1);

/// Backward integrals and the adjoint weight that drive the optimal control.
///
///   beta1(t) = -int_t^T R''(X0_s) ds      beta2(t) = -int_t^T R'''(X0_s) ds
///   eta(t)   = eta_of(beta1(t))
///   delta(t) = e^{2 beta1} R''(X0_T) + beta2 eta R'(X0_T)
///
/// delta / 2 is the first component of the costate of the moment system with
/// terminal cost (R''(X0_T)/2, R'(X0_T)). With beta as defined here the
/// exponentials decay away from T, e.g. delta = kappa e^{-2 kappa (T-t)} for
/// linear regression.
struct Theorem21Quantities {
  Trajectory beta1;
  Trajectory beta2;
  Trajectory eta;
  Trajectory delta;
};

/// Beta integrals by trapezoid accumulation from T backward on the grid of
/// `x0`. Throws NonpositiveDelta if delta(t) <= 0 anywhere.
Theorem21Quantities theorem21_quantities(const RiskSpec& spec, const Trajectory& x0);

}  // namespace bsched
