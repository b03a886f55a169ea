#include "bsched/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsched/error.hpp"

namespace bsched {

VolatilityControl make_control(const TimeGrid& grid, std::vector<double> alpha) {
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (!(alpha[k] > 0.0 && alpha[k] <= 1.0)) {
      throw Error(ErrorKind::InvalidParameter,
                  "alpha must lie in (0, 1], got " + std::to_string(alpha[k]) + " at node " +
                      std::to_string(k));
    }
  }
  VolatilityControl out{Trajectory(grid, std::move(alpha)), {}, {}, {}, 0.0, 0.0};
  out.budget = trapezoid_budget(out.alpha);
  out.lipschitz_bound = empirical_sqrt_lipschitz(out.alpha);
  return out;
}

VolatilityControl constant_control(const TimeGrid& grid, double a) {
  return make_control(grid, std::vector<double>(grid.size(), a));
}

double trapezoid_budget(const Trajectory& alpha) {
  const auto& v = alpha.values;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    sum += 0.5 * (1.0 / std::max(v[k], kAlphaFloor) + 1.0 / std::max(v[k + 1], kAlphaFloor));
  }
  return sum * alpha.grid.dt();
}

double empirical_sqrt_lipschitz(const Trajectory& alpha) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < alpha.values.size(); ++k) {
    worst = std::max(worst, std::abs(std::sqrt(alpha[k + 1]) - std::sqrt(alpha[k])));
  }
  return worst / alpha.grid.dt();
}

}  // namespace bsched
