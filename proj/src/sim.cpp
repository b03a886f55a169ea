#include "bsched/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsched/error.hpp"

namespace bsched {

namespace {

constexpr double kDivergenceBound = 1e12;

std::int64_t schedule_sum(const VolatilityControl& alpha, std::int64_t m) {
  std::int64_t s = 0;
  for (std::int64_t n = 0; n < m; ++n) {
    const double b = std::round(1.0 / std::max(alpha.alpha[static_cast<std::size_t>(n)], kAlphaFloor));
    s += std::max<std::int64_t>(1, static_cast<std::int64_t>(b));
  }
  return s;
}

std::vector<std::int64_t> rounded_sizes(const VolatilityControl& alpha, std::int64_t m) {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(m));
  for (std::size_t n = 0; n < sizes.size(); ++n) {
    const double b = std::round(1.0 / std::max(alpha.alpha[n], kAlphaFloor));
    sizes[n] = std::max<std::int64_t>(1, static_cast<std::int64_t>(b));
  }
  return sizes;
}

}  // namespace

Dataset generate_dataset(const LinRegParams& p, std::size_t n, const RngSpec& rng) {
  if (!(p.kappa > 0.0) || !(p.sigma_eps2 >= 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "dataset needs kappa > 0 and sigma_eps2 >= 0");
  }
  if (p.kurtosis != 3.0) {
    throw Error(ErrorKind::InvalidParameter,
                "Gaussian features have kurtosis 3, got " + std::to_string(p.kurtosis));
  }
  if (n == 0) {
    throw Error(ErrorKind::InvalidParameter, "dataset size must be positive");
  }
  auto engine = make_engine(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sx = std::sqrt(p.kappa);
  const double se = std::sqrt(p.sigma_eps2);
  Dataset d{std::vector<double>(n), std::vector<double>(n), p};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sx * normal(engine);
    const double eps = se * normal(engine);
    d.xs[i] = x;
    d.ys[i] = p.theta_star * x + eps;
  }
  return d;
}

BatchSchedule constant_schedule(std::int64_t n, std::int64_t m) {
  if (m <= 0 || n <= 0 || n % m != 0) {
    throw Error(ErrorKind::InvalidParameter,
                "constant schedule needs M > 0 dividing N (N=" + std::to_string(n) +
                    ", M=" + std::to_string(m) + ")");
  }
  return {std::vector<std::int64_t>(static_cast<std::size_t>(m), n / m), n, std::nullopt};
}

BatchSchedule schedule_from_alpha(const ScheduleAlphaFactory& alpha_factory, std::int64_t n,
                                  std::int64_t m) {
  if (m <= 0) {
    throw Error(ErrorKind::InvalidParameter, "schedule needs at least one step");
  }
  if (n < m) {
    throw Error(ErrorKind::InfeasibleBudget,
                "sample size N=" + std::to_string(n) + " is below the step count M=" + std::to_string(m));
  }

  // S(lambda) is a non-increasing step function; keep S(lo) > N >= S(hi).
  double log_lo = std::log(1e-12);
  double log_hi = std::log(1e12);
  VolatilityControl lo_alpha = alpha_factory(std::exp(log_lo));
  VolatilityControl hi_alpha = alpha_factory(std::exp(log_hi));
  if (lo_alpha.alpha.values.size() < static_cast<std::size_t>(m)) {
    throw Error(ErrorKind::InvalidParameter, "alpha factory grid has fewer than M nodes");
  }
  std::int64_t s_lo = schedule_sum(lo_alpha, m);
  std::int64_t s_hi = schedule_sum(hi_alpha, m);
  double lambda = std::exp(log_hi);

  if (s_hi > n) {
    lambda = std::exp(log_hi);
  } else if (s_lo <= n) {
    hi_alpha = std::move(lo_alpha);
    s_hi = s_lo;
    lambda = std::exp(log_lo);
  } else {
    for (int it = 0; it < 200 && s_hi != n && log_hi - log_lo > 1e-14; ++it) {
      const double log_mid = 0.5 * (log_lo + log_hi);
      VolatilityControl a = alpha_factory(std::exp(log_mid));
      const std::int64_t s = schedule_sum(a, m);
      if (s > n) {
        log_lo = log_mid;
        s_lo = s;
        lo_alpha = std::move(a);
      } else {
        log_hi = log_mid;
        s_hi = s;
        hi_alpha = std::move(a);
      }
    }
    lambda = std::exp(log_hi);
    if (s_hi != n && (s_lo - n) < (n - s_hi)) {
      hi_alpha = std::move(lo_alpha);
      lambda = std::exp(log_lo);
    }
  }

  std::vector<std::int64_t> sizes = rounded_sizes(hi_alpha, m);
  std::int64_t s = 0;
  for (auto b : sizes) s += b;
  // Move the final batches by one until the total is exact.
  while (s != n) {
    bool moved = false;
    for (std::size_t i = sizes.size(); i-- > 0 && s != n;) {
      if (s > n && sizes[i] > 1) {
        --sizes[i];
        --s;
        moved = true;
      } else if (s < n) {
        ++sizes[i];
        ++s;
        moved = true;
      }
    }
    if (!moved) {
      throw Error(ErrorKind::InfeasibleBudget, "cannot reach N with batches >= 1");
    }
  }
  return {std::move(sizes), n, lambda};
}

SgdRun run_sgd(const Dataset& data, const BatchSchedule& schedule, double h, double chi0) {
  std::int64_t total = 0;
  for (auto b : schedule.sizes) {
    if (b < 1) throw Error(ErrorKind::InvalidParameter, "batch sizes must be >= 1");
    total += b;
  }
  if (total != static_cast<std::int64_t>(data.size())) {
    throw Error(ErrorKind::BudgetMismatch, "schedule consumes " + std::to_string(total) +
                                               " samples but the dataset has " +
                                               std::to_string(data.size()));
  }
  SgdRun run;
  run.iterates.reserve(schedule.steps() + 1);
  run.samples_cumulative.reserve(schedule.steps() + 1);
  double chi = chi0;
  std::int64_t used = 0;
  run.iterates.push_back(chi);
  run.samples_cumulative.push_back(0);
  for (auto b : schedule.sizes) {
    double grad = 0.0;
    for (std::int64_t j = 0; j < b; ++j) {
      const auto i = static_cast<std::size_t>(used + j);
      grad += data.xs[i] * (chi * data.xs[i] - data.ys[i]);
    }
    chi -= h / static_cast<double>(b) * grad;
    used += b;
    run.iterates.push_back(chi);
    run.samples_cumulative.push_back(used);
  }
  return run;
}

std::vector<SgdMoments> exact_sgd_moments(const LinRegParams& p, std::span<const double> inverse_batch,
                                          double h, double chi0) {
  const double k = p.kappa;
  const double contraction = 1.0 - h * k;
  std::vector<SgdMoments> out;
  out.reserve(inverse_batch.size() + 1);
  const double u0 = chi0 - p.theta_star;
  SgdMoments m{u0, u0 * u0};
  out.push_back(m);
  for (double a : inverse_batch) {
    m.m1 = contraction * m.m1;
    m.m2 = (contraction * contraction + h * h * k * k * (p.kurtosis - 1.0) * a) * m.m2 +
           h * h * k * p.sigma_eps2 * a;
    out.push_back(m);
  }
  return out;
}

std::vector<SgdMoments> exact_sgd_moments(const LinRegParams& p, const BatchSchedule& schedule,
                                          double h, double chi0) {
  std::vector<double> inv(schedule.sizes.size());
  std::transform(schedule.sizes.begin(), schedule.sizes.end(), inv.begin(),
                 [](std::int64_t b) { return 1.0 / static_cast<double>(b); });
  return exact_sgd_moments(p, inv, h, chi0);
}

std::size_t em_substeps_for(const TimeGrid& grid, double h) {
  if (!(h > 0.0)) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(grid.dt() / (h / 20.0) - 1e-9)));
}

Trajectory run_sde_em(const RiskSpec& spec, const VolatilityControl& alpha, double h, double chi0,
                      std::size_t substeps, const RngSpec& rng) {
  const TimeGrid& grid = alpha.grid();
  if (substeps == 0) {
    throw Error(ErrorKind::InvalidParameter, "EM needs at least one substep");
  }
  const double dt = grid.dt() / static_cast<double>(substeps);
  if (h > 0.0 && dt > h / 20.0 * (1.0 + 1e-9)) {
    throw Error(ErrorKind::InvalidParameter,
                "EM step " + std::to_string(dt) + " exceeds h/20 = " + std::to_string(h / 20.0));
  }
  auto engine = make_engine(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_dt = std::sqrt(dt);

  Trajectory out(grid);
  double x = chi0;
  out.values[0] = x;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double a0 = alpha.alpha[k];
    const double a1 = alpha.alpha[k + 1];
    for (std::size_t j = 0; j < substeps; ++j) {
      const double w = static_cast<double>(j) / static_cast<double>(substeps);
      const double a = (1.0 - w) * a0 + w * a1;
      const double d1 = spec.dr(x);
      const double drift = -d1 - 0.5 * h * spec.d2r(x) * d1;
      const double diffusion = std::sqrt(h * a * std::max(0.0, spec.sigma2(x)));
      x += drift * dt + diffusion * sqrt_dt * normal(engine);
    }
    if (!std::isfinite(x) || std::abs(x) > kDivergenceBound) {
      throw Error(ErrorKind::Divergence, "EM path left |x| <= 1e12 at node " + std::to_string(k + 1));
    }
    out.values[k + 1] = x;
  }
  return out;
}

Trajectory exact_sde_second_moment(const LinRegParams& p, const VolatilityControl& alpha, double h,
                                   double chi0) {
  const TimeGrid& grid = alpha.grid();
  const double k = p.kappa;
  const double decay = -2.0 * k * (1.0 + 0.5 * h * k);
  const double growth = h * k * k * (p.kurtosis - 1.0);
  const double forcing = 2.0 * h * k * p.r_star();
  auto rhs = [&](double a, double m2) { return (decay + growth * a) * m2 + forcing * a; };

  Trajectory out(grid);
  const double dt = grid.dt();
  double m2 = (chi0 - p.theta_star) * (chi0 - p.theta_star);
  out.values[0] = m2;
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const double a0 = alpha.alpha[n];
    const double a1 = alpha.alpha[n + 1];
    const double am = 0.5 * (a0 + a1);
    const double k1 = rhs(a0, m2);
    const double k2 = rhs(am, m2 + 0.5 * dt * k1);
    const double k3 = rhs(am, m2 + 0.5 * dt * k2);
    const double k4 = rhs(a1, m2 + dt * k3);
    m2 += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.values[n + 1] = m2;
  }
  return out;
}

Trajectory exact_sde_second_moment(const RiskSpec& spec, const VolatilityControl& alpha, double h,
                                   double chi0) {
  if (!spec.linreg) {
    throw Error(ErrorKind::SpecMismatch, "exact SDE moments exist only for linear regression");
  }
  return exact_sde_second_moment(*spec.linreg, alpha, h, chi0);
}

}  // namespace bsched
