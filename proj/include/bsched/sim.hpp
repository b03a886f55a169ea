#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bsched/ode.hpp"
#include "bsched/risk_model.hpp"
#include "bsched/rng.hpp"
#include "bsched/volatility.hpp"

namespace bsched {

/// i.i.d. samples of the linear model y = theta* x + eps.
struct Dataset {
  std::vector<double> xs;
  std::vector<double> ys;
  LinRegParams params;

  std::size_t size() const { return xs.size(); }
};

/// Draws N points with x ~ N(0, kappa) and eps ~ N(0, sigma_eps2), each point
/// consuming one x draw then one eps draw. Features are Gaussian, so
/// p.kurtosis must be 3; sigma_eps2 == 0 is allowed (noise-free labels).
Dataset generate_dataset(const LinRegParams& p, std::size_t n, const RngSpec& rng);

/// Integer batch sizes B_1..B_M with sum N.
struct BatchSchedule {
  std::vector<std::int64_t> sizes;
  std::int64_t total = 0;
  std::optional<double> lambda;

  std::size_t steps() const { return sizes.size(); }
};

/// B_n = N / M for every step. Throws InvalidParameter unless M divides N.
BatchSchedule constant_schedule(std::int64_t n, std::int64_t m);

/// Alpha on the SGD grid: TimeGrid(M h, M); step n uses node n (time n h).
using ScheduleAlphaFactory = std::function<VolatilityControl(double lambda)>;

/// Binary search on log lambda for sum_n round(1/alpha_{nh}(lambda)) = N
/// (each term at least 1). When rounding plateaus skip N, the closest
/// achievable sum is taken and the last |S - N| adjustable batches are moved
/// by one so the total is exactly N. Throws InfeasibleBudget if N < M.
BatchSchedule schedule_from_alpha(const ScheduleAlphaFactory& alpha_factory, std::int64_t n,
                                  std::int64_t m);

struct SgdRun {
  std::vector<double> iterates;                   // chi_0..chi_M
  std::vector<std::int64_t> samples_cumulative;   // 0, B_1, B_1+B_2, ..
  std::uint64_t seed = 0;
};

/// Single-epoch mini-batch SGD on consecutive disjoint blocks of `data`:
/// chi_{n+1} = chi_n - h/B_n sum_{i in block n} x_i (chi_n x_i - y_i).
/// Throws BudgetMismatch unless the schedule total equals the dataset size.
SgdRun run_sgd(const Dataset& data, const BatchSchedule& schedule, double h, double chi0);

/// First and second centred moments (E[chi_n - theta*], E[(chi_n - theta*)^2]).
struct SgdMoments {
  double m1 = 0.0;
  double m2 = 0.0;
};

/// Exact moment recursion of SGD with fresh Gaussian batches, written with
/// inverse batch sizes so fractional batch sizes (alpha_n = 1/B_n) are allowed:
///   m1' = (1 - h kappa) m1
///   m2' = ((1 - h kappa)^2 + h^2 kappa^2 (Kurt - 1) a_n) m2 + h^2 kappa sigma^2 a_n
/// Returns M + 1 entries starting at (chi0 - theta*, (chi0 - theta*)^2).
std::vector<SgdMoments> exact_sgd_moments(const LinRegParams& p, std::span<const double> inverse_batch,
                                          double h, double chi0);
std::vector<SgdMoments> exact_sgd_moments(const LinRegParams& p, const BatchSchedule& schedule,
                                          double h, double chi0);

/// Euler-Maruyama for dX = (-R' - h/2 R'' R')(X) dt + sqrt(h alpha_t Sigma(X)) dW
/// with `substeps` equal steps per grid interval of the control. Returns the
/// path at grid nodes. Requires dt_em <= h / 20 when h > 0.
/// Throws Divergence when |X| > 1e12.
Trajectory run_sde_em(const RiskSpec& spec, const VolatilityControl& alpha, double h, double chi0,
                      std::size_t substeps, const RngSpec& rng);

/// Smallest number of EM substeps per grid interval with dt_em <= h / 20.
std::size_t em_substeps_for(const TimeGrid& grid, double h);

/// Exact E[(X_t - theta*)^2] of the linear-regression SDE, from the scalar ODE
///   m2' = (-2 kappa (1 + h kappa / 2) + h alpha kappa^2 (Kurt - 1)) m2 + 2 h alpha kappa R*
/// solved by RK4 on the control's grid (alpha linear between nodes).
Trajectory exact_sde_second_moment(const LinRegParams& p, const VolatilityControl& alpha, double h,
                                   double chi0);
/// Same, for a RiskSpec; throws SpecMismatch unless it was built by make_linreg.
Trajectory exact_sde_second_moment(const RiskSpec& spec, const VolatilityControl& alpha, double h,
                                   double chi0);

}  // namespace bsched
