#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bsched/risk_model.hpp"
#include "bsched/sim.hpp"
#include "bsched/volatility.hpp"

namespace bsched {

// Replication kernels come in two flavours with identical results: a serial
// reference and an OpenMP version. Replication r always draws from RNG stream
// (seed, r) and writes its own row; the reduction runs in replication order,
// so output is bit-identical for any thread count.

/// Per-step mean and standard error of the excess risk over replications.
struct RiskCurve {
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t replications = 0;
};

/// Mean/stderr over rows of a row-major [replications x width] matrix, summed
/// in row order.
RiskCurve reduce_rows(const std::vector<double>& rows, std::size_t replications, std::size_t width);

struct SgdExperiment {
  LinRegParams params;
  BatchSchedule schedule;
  double h = 0.05;
  double chi0 = 0.0;
};

/// Excess risk 0.5 kappa (chi_n - theta*)^2 for one replication: fresh dataset
/// from stream (seed, rep), then single-epoch SGD over it.
std::vector<double> sgd_replication(const SgdExperiment& e, std::uint64_t seed, std::uint64_t rep);

RiskCurve sgd_excess_risk_serial(const SgdExperiment& e, std::size_t replications, std::uint64_t seed);
/// threads == 0 uses the OpenMP default.
RiskCurve sgd_excess_risk_parallel(const SgdExperiment& e, std::size_t replications,
                                   std::uint64_t seed, int threads = 0);

struct SdeExperiment {
  RiskSpec spec;
  VolatilityControl alpha;
  double h = 0.05;
  double chi0 = 0.0;
  std::size_t substeps = 1;
};

/// Excess risk at T of EM paths; single-entry curves.
RiskCurve sde_terminal_excess_risk_serial(const SdeExperiment& e, std::size_t replications,
                                          std::uint64_t seed);
RiskCurve sde_terminal_excess_risk_parallel(const SdeExperiment& e, std::size_t replications,
                                            std::uint64_t seed, int threads = 0);

}  // namespace bsched
