#include <cmath>
#include <cstring>

#include "bsched/control.hpp"
#include "bsched/experiment.hpp"
#include "bsched/monte_carlo.hpp"
#include "doctest.h"

using namespace bsched;

namespace {

const LinRegParams kDefault{1.0, -1.0, 1.0, 3.0};

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

SgdExperiment small_sgd() {
  const double chi0 = chi0_for_gamma(kDefault, 280.0);
  return {kDefault, schedule_from_alpha(linreg_schedule_factory(280.0, 1.0, 128, 0.02), 1024, 128), 0.02, chi0};
}

}  // namespace

TEST_CASE("reduce_rows") {
  const std::vector<double> rows{1, 2, 3, 4, 5, 6};
  const RiskCurve c = reduce_rows(rows, 3, 2);
  CHECK(c.replications == 3);
  CHECK(c.mean == std::vector<double>{3.0, 4.0});
  CHECK(c.stderr_[0] == doctest::Approx(2.0 / std::sqrt(3.0)));
}

TEST_CASE("sgd replications: parallel equals serial bit for bit") {
  const auto e = small_sgd();
  const RiskCurve s = sgd_excess_risk_serial(e, 40, 9);
  for (int threads : {1, 2, 3, 8}) {
    const RiskCurve p = sgd_excess_risk_parallel(e, 40, 9, threads);
    CHECK(bit_equal(s.mean, p.mean));
    CHECK(bit_equal(s.stderr_, p.stderr_));
  }
  CHECK(bit_equal(s.mean, sgd_excess_risk_serial(e, 40, 9).mean));
  CHECK_FALSE(bit_equal(s.mean, sgd_excess_risk_serial(e, 40, 10).mean));
}

TEST_CASE("replication r only depends on (seed, r)") {
  const auto e = small_sgd();
  CHECK(bit_equal(sgd_replication(e, 4, 2), sgd_replication(e, 4, 2)));
  CHECK_FALSE(bit_equal(sgd_replication(e, 4, 2), sgd_replication(e, 4, 3)));
}

TEST_CASE("sgd mean excess risk agrees with the exact recursion") {
  const auto e = small_sgd();
  const RiskCurve c = sgd_excess_risk_parallel(e, 2000, 21);
  const auto exact = exact_sgd_moments(e.params, e.schedule, e.h, e.chi0);
  for (std::size_t n : {std::size_t{0}, std::size_t{32}, std::size_t{128}}) {
    const double want = 0.5 * exact[n].m2;
    if (n == 0) {
      CHECK(c.mean[n] == doctest::Approx(want));
    } else {
      CHECK(std::abs(c.mean[n] - want) <= 4 * c.stderr_[n]);
    }
  }
}

TEST_CASE("sde replications: parallel equals serial and matches the exact moment") {
  const RiskSpec spec = make_linreg(kDefault);
  const double chi0 = 1.0, h = 0.05;
  const auto alpha = linreg_alpha(gamma_of(kDefault, chi0), 1.0, 300.0, TimeGrid(1.0, 400));
  const SdeExperiment e{spec, alpha, h, chi0, em_substeps_for(alpha.grid(), h)};
  const RiskCurve s = sde_terminal_excess_risk_serial(e, 500, 5);
  const RiskCurve p = sde_terminal_excess_risk_parallel(e, 500, 5, 4);
  CHECK(bit_equal(s.mean, p.mean));
  const double exact = 0.5 * exact_sde_second_moment(kDefault, alpha, h, chi0).back();
  CHECK(std::abs(s.mean[0] - exact) <= 4 * s.stderr_[0] + 0.01 * exact);
}
