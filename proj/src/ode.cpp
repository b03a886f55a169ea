#include "bsched/ode.hpp"

#include <cmath>
#include <string>

#include "bsched/error.hpp"

namespace bsched {

namespace {

constexpr double kDivergenceBound = 1e12;

void check_finite_state(double x, std::size_t k) {
  if (!std::isfinite(x) || std::abs(x) > kDivergenceBound) {
    throw Error(ErrorKind::Divergence, "gradient flow left |x| <= 1e12 at step " + std::to_string(k));
  }
}

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  if (!(a < lm && lm < m && m < rm && rm < b)) {
    throw Error(ErrorKind::NonConvergence, "adaptive Simpson interval fell below double resolution");
  }
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * tol) {
    return left + right + diff / 15.0;
  }
  if (depth >= 60) {
    throw Error(ErrorKind::NonConvergence, "adaptive Simpson exceeded depth 60");
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::InvalidParameter, "grid horizon must be positive and finite");
  }
  if (steps == 0) {
    throw Error(ErrorKind::InvalidParameter, "grid needs at least one interval");
  }
}

double TimeGrid::t(std::size_t k) const {
  if (k >= steps_) return horizon_;
  return horizon_ * static_cast<double>(k) / static_cast<double>(steps_);
}

Trajectory::Trajectory(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::InvalidParameter, "trajectory length " + std::to_string(values.size()) +
                                                 " does not match grid size " +
                                                 std::to_string(grid.size()));
  }
}

double Trajectory::at(double t) const {
  if (t <= 0.0) return values.front();
  if (t >= grid.horizon()) return values.back();
  const double s = t / grid.dt();
  auto k = static_cast<std::size_t>(s);
  if (k >= grid.steps()) return values.back();
  const double w = s - static_cast<double>(k);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

Trajectory integrate_gradient_flow(const RiskSpec& spec, double chi0, const TimeGrid& grid) {
  Trajectory out(grid);
  const double dt = grid.dt();
  double x = chi0;
  check_finite_state(x, 0);
  out.values[0] = x;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double k1 = -spec.dr(x);
    const double k2 = -spec.dr(x + 0.5 * dt * k1);
    const double k3 = -spec.dr(x + 0.5 * dt * k2);
    const double k4 = -spec.dr(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite_state(x, k + 1);
    out.values[k + 1] = x;
  }
  return out;
}

double gradient_flow_midpoint(const RiskSpec& spec, double x_left, double x_right, double dt) {
  return 0.5 * (x_left + x_right) + dt / 8.0 * (spec.dr(x_right) - spec.dr(x_left));
}

double quadrature(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a > b) {
    throw Error(ErrorKind::InvalidParameter, "quadrature requires a <= b");
  }
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0);
}

double eta_of(double beta1) {
  if (std::abs(beta1) < 1e-12) return 1.0;
  // e^{b} (e^{b} - 1) / b, written with expm1 to stay accurate for small |b|.
  return std::exp(beta1) * std::expm1(beta1) / beta1;
}

Theorem21Quantities theorem21_quantities(const RiskSpec& spec, const Trajectory& x0) {
  const TimeGrid& grid = x0.grid;
  const std::size_t n = grid.size();
  const double dt = grid.dt();
  Trajectory beta1(grid), beta2(grid), eta(grid), delta(grid);

  for (std::size_t k = grid.steps(); k-- > 0;) {
    const double xa = x0[k];
    const double xb = x0[k + 1];
    beta1.values[k] = beta1.values[k + 1] - 0.5 * dt * (spec.d2r(xa) + spec.d2r(xb));
    beta2.values[k] = beta2.values[k + 1] - 0.5 * dt * (spec.d3r(xa) + spec.d3r(xb));
  }

  const double xT = x0.back();
  const double d2T = spec.d2r(xT);
  const double d1T = spec.dr(xT);
  for (std::size_t k = 0; k < n; ++k) {
    eta.values[k] = eta_of(beta1[k]);
    delta.values[k] = std::exp(2.0 * beta1[k]) * d2T + beta2[k] * eta[k] * d1T;
    if (!(delta.values[k] > 0.0)) {
      throw Error(ErrorKind::NonpositiveDelta,
                  "delta(t) = " + std::to_string(delta.values[k]) + " at t = " +
                      std::to_string(grid.t(k)) + "; requires R''(X0_T) > 0");
    }
  }
  return {std::move(beta1), std::move(beta2), std::move(eta), std::move(delta)};
}

}  // namespace bsched
