#include "bsched/monte_carlo.hpp"

#include <omp.h>

#include <cmath>

#include "bsched/error.hpp"

namespace bsched {

namespace {

double terminal_excess(const SdeExperiment& e, std::uint64_t seed, std::uint64_t rep) {
  const Trajectory path = run_sde_em(e.spec, e.alpha, e.h, e.chi0, e.substeps, {seed, rep});
  return excess_risk(e.spec, path.back());
}

void check_replications(std::size_t replications) {
  if (replications == 0) {
    throw Error(ErrorKind::InvalidParameter, "need at least one replication");
  }
}

}  // namespace

RiskCurve reduce_rows(const std::vector<double>& rows, std::size_t replications, std::size_t width) {
  RiskCurve out;
  out.replications = replications;
  out.mean.assign(width, 0.0);
  out.stderr_.assign(width, 0.0);
  for (std::size_t r = 0; r < replications; ++r) {
    for (std::size_t j = 0; j < width; ++j) out.mean[j] += rows[r * width + j];
  }
  for (auto& m : out.mean) m /= static_cast<double>(replications);
  if (replications > 1) {
    for (std::size_t r = 0; r < replications; ++r) {
      for (std::size_t j = 0; j < width; ++j) {
        const double d = rows[r * width + j] - out.mean[j];
        out.stderr_[j] += d * d;
      }
    }
    const double n = static_cast<double>(replications);
    for (auto& s : out.stderr_) s = std::sqrt(s / (n - 1.0) / n);
  }
  return out;
}

std::vector<double> sgd_replication(const SgdExperiment& e, std::uint64_t seed, std::uint64_t rep) {
  const Dataset data = generate_dataset(e.params, static_cast<std::size_t>(e.schedule.total), {seed, rep});
  const SgdRun run = run_sgd(data, e.schedule, e.h, e.chi0);
  std::vector<double> risk(run.iterates.size());
  for (std::size_t n = 0; n < risk.size(); ++n) {
    const double u = run.iterates[n] - e.params.theta_star;
    risk[n] = 0.5 * e.params.kappa * u * u;
  }
  return risk;
}

RiskCurve sgd_excess_risk_serial(const SgdExperiment& e, std::size_t replications, std::uint64_t seed) {
  check_replications(replications);
  const std::size_t width = e.schedule.steps() + 1;
  std::vector<double> rows(replications * width);
  for (std::size_t r = 0; r < replications; ++r) {
    const auto risk = sgd_replication(e, seed, r);
    std::copy(risk.begin(), risk.end(), rows.begin() + static_cast<std::ptrdiff_t>(r * width));
  }
  return reduce_rows(rows, replications, width);
}

RiskCurve sgd_excess_risk_parallel(const SgdExperiment& e, std::size_t replications, std::uint64_t seed,
                                   int threads) {
  check_replications(replications);
  const std::size_t width = e.schedule.steps() + 1;
  std::vector<double> rows(replications * width);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(replications);
  // Exceptions must not escape the parallel region; all inputs are validated
  // by the first replication, run before the region.
  const auto first = sgd_replication(e, seed, 0);
  std::copy(first.begin(), first.end(), rows.begin());
#pragma omp parallel for schedule(static) num_threads(nthreads)
  for (std::int64_t r = 1; r < n; ++r) {
    const auto risk = sgd_replication(e, seed, static_cast<std::uint64_t>(r));
    std::copy(risk.begin(), risk.end(), rows.begin() + r * static_cast<std::int64_t>(width));
  }
  return reduce_rows(rows, replications, width);
}

RiskCurve sde_terminal_excess_risk_serial(const SdeExperiment& e, std::size_t replications,
                                          std::uint64_t seed) {
  check_replications(replications);
  std::vector<double> rows(replications);
  for (std::size_t r = 0; r < replications; ++r) rows[r] = terminal_excess(e, seed, r);
  return reduce_rows(rows, replications, 1);
}

RiskCurve sde_terminal_excess_risk_parallel(const SdeExperiment& e, std::size_t replications,
                                            std::uint64_t seed, int threads) {
  check_replications(replications);
  std::vector<double> rows(replications);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(replications);
  rows[0] = terminal_excess(e, seed, 0);
  bool failed = false;
#pragma omp parallel for schedule(static) num_threads(nthreads) reduction(|| : failed)
  for (std::int64_t r = 1; r < n; ++r) {
    try {
      rows[static_cast<std::size_t>(r)] = terminal_excess(e, seed, static_cast<std::uint64_t>(r));
    } catch (const Error&) {
      failed = true;
    }
  }
  if (failed) {
    throw Error(ErrorKind::Divergence, "an EM replication diverged");
  }
  return reduce_rows(rows, replications, 1);
}

}  // namespace bsched
