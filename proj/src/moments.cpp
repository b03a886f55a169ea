#include "bsched/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "bsched/error.hpp"

namespace bsched {

namespace {

constexpr double kVarianceClamp = -1e-12;
constexpr double kDivergenceBound = 1e12;

using Vec2 = std::array<double, 2>;

// Coefficients of the linear moment system frozen at one stage point.
struct StageCoeffs {
  double d1;     // R'(X0)
  double d2;     // R''(X0)
  double d3;     // R'''(X0)
  double noise;  // alpha Sigma(X0)
};

StageCoeffs coeffs_at(const RiskSpec& spec, double x, double a) {
  return {spec.dr(x), spec.d2r(x), spec.d3r(x), a * spec.sigma2(x)};
}

Vec2 rhs(const StageCoeffs& c, const Vec2& m) {
  return {-2.0 * c.d2 * m[0] + c.noise,
          -0.5 * c.d3 * m[0] - c.d2 * m[1] - 0.5 * c.d2 * c.d1};
}

Vec2 axpy(const Vec2& y, double s, const Vec2& k) { return {y[0] + s * k[0], y[1] + s * k[1]}; }

}  // namespace

MomentPath solve_moments(const RiskSpec& spec, const Trajectory& x0, const VolatilityControl& alpha) {
  const TimeGrid& grid = x0.grid;
  if (!(alpha.grid() == grid)) {
    throw Error(ErrorKind::InvalidParameter, "control and gradient flow must share a grid");
  }
  const double dt = grid.dt();
  MomentPath out{grid, std::vector<MomentState>(grid.size())};
  Vec2 m{0.0, 0.0};
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double xa = x0[k];
    const double xb = x0[k + 1];
    const double aa = alpha.alpha[k];
    const double ab = alpha.alpha[k + 1];
    const StageCoeffs left = coeffs_at(spec, xa, aa);
    const StageCoeffs mid = coeffs_at(spec, gradient_flow_midpoint(spec, xa, xb, dt), 0.5 * (aa + ab));
    const StageCoeffs right = coeffs_at(spec, xb, ab);

    const Vec2 k1 = rhs(left, m);
    const Vec2 k2 = rhs(mid, axpy(m, 0.5 * dt, k1));
    const Vec2 k3 = rhs(mid, axpy(m, 0.5 * dt, k2));
    const Vec2 k4 = rhs(right, axpy(m, dt, k3));
    for (int i = 0; i < 2; ++i) {
      m[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    if (m[0] < 0.0) {
      if (m[0] < kVarianceClamp) {
        throw Error(ErrorKind::Divergence,
                    "negative variance " + std::to_string(m[0]) + " at step " + std::to_string(k + 1));
      }
      m[0] = 0.0;
    }
    if (!std::isfinite(m[0]) || !std::isfinite(m[1]) || std::abs(m[0]) > kDivergenceBound ||
        std::abs(m[1]) > kDivergenceBound) {
      throw Error(ErrorKind::Divergence, "moment system diverged at step " + std::to_string(k + 1));
    }
    out.states[k + 1] = {m[0], m[1]};
  }
  return out;
}

double terminal_cost(const RiskSpec& spec, double x0_T, const MomentState& m) {
  return 0.5 * spec.d2r(x0_T) * m.var_half + spec.dr(x0_T) * m.mean_one;
}

double risk_expansion(const RiskSpec& spec, double x0_T, const MomentState& m, double h) {
  return spec.r(x0_T) + h * terminal_cost(spec, x0_T, m);
}

AdjointPath adjoint_solution(const RiskSpec& spec, const Theorem21Quantities& q, double x0_T) {
  const TimeGrid& grid = q.delta.grid;
  Trajectory y1(grid), y2(grid);
  const double d1T = spec.dr(x0_T);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(q.delta[k] > 0.0)) {
      throw Error(ErrorKind::NonpositiveDelta, "delta must be positive for the costate");
    }
    y1.values[k] = 0.5 * q.delta[k];
    y2.values[k] = std::exp(q.beta1[k]) * d1T;
  }
  return {std::move(y1), std::move(y2)};
}

double adjoint_residual(const RiskSpec& spec, const Trajectory& x0, const AdjointPath& y) {
  const TimeGrid& grid = x0.grid;
  const double dt = grid.dt();
  double worst = 0.0;
  for (std::size_t k = 1; k < grid.steps(); ++k) {
    const double x = x0[k];
    const double dy1 = (y.y1[k + 1] - y.y1[k - 1]) / (2.0 * dt);
    const double dy2 = (y.y2[k + 1] - y.y2[k - 1]) / (2.0 * dt);
    // -A^T y with A = [[2B1, 0], [B2/2, B1]], B1 = -R'', B2 = -R'''.
    const double f1 = 2.0 * spec.d2r(x) * y.y1[k] + 0.5 * spec.d3r(x) * y.y2[k];
    const double f2 = spec.d2r(x) * y.y2[k];
    worst = std::max(worst, std::abs(dy1 - f1) / (1.0 + std::abs(f1)));
    worst = std::max(worst, std::abs(dy2 - f2) / (1.0 + std::abs(f2)));
  }
  return worst;
}

}  // namespace bsched
