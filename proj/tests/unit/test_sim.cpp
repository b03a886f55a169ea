#include <cmath>
#include <numeric>
#include <set>

#include "bsched/control.hpp"
#include "bsched/error.hpp"
#include "bsched/experiment.hpp"
#include "bsched/rng.hpp"
#include "bsched/sim.hpp"
#include "doctest.h"

using namespace bsched;

namespace {

const LinRegParams kDefault{1.0, -1.0, 1.0, 3.0};

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected bsched::Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  auto a = make_engine({7, 3});
  auto b = make_engine({7, 3});
  auto c = make_engine({7, 4});
  auto d = make_engine({8, 3});
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
  CHECK(va != d());
  CHECK(splitmix64(0) != splitmix64(1));
}

TEST_CASE("dataset generation") {
  const Dataset d1 = generate_dataset({2.0, 0.5, 0.25, 3.0}, 200000, {1, 0});
  const Dataset d2 = generate_dataset({2.0, 0.5, 0.25, 3.0}, 200000, {1, 0});
  CHECK(d1.xs == d2.xs);
  CHECK(d1.ys == d2.ys);
  double sx = 0, sxx = 0, se = 0;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    sx += d1.xs[i];
    sxx += d1.xs[i] * d1.xs[i];
    const double e = d1.ys[i] - 0.5 * d1.xs[i];
    se += e * e;
  }
  const double n = static_cast<double>(d1.size());
  CHECK(std::abs(sx / n) <= 0.02);
  CHECK(sxx / n == doctest::Approx(2.0).epsilon(0.02));
  CHECK(se / n == doctest::Approx(0.25).epsilon(0.02));

  const Dataset clean = generate_dataset({1.0, 2.0, 0.0, 3.0}, 100, {3, 1});
  for (std::size_t i = 0; i < clean.size(); ++i) CHECK(clean.ys[i] == 2.0 * clean.xs[i]);

  CHECK(kind_of([] { generate_dataset({1.0, 0.0, 1.0, 5.0}, 10, {1, 0}); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("constant schedule") {
  const auto s = constant_schedule(8192, 1024);
  CHECK(s.steps() == 1024);
  CHECK(s.total == 8192);
  for (auto b : s.sizes) CHECK(b == 8);
  CHECK(kind_of([] { constant_schedule(1000, 3); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("optimal schedules sum to N") {
  const double gamma = 280.0;
  for (auto [n, m] : {std::pair<std::int64_t, std::int64_t>{1024, 256}, {8192, 1024}, {5000, 1000}, {1000, 1000}}) {
    const auto s = schedule_from_alpha(linreg_schedule_factory(gamma, 1.0, m, 0.01), n, m);
    CHECK(s.steps() == static_cast<std::size_t>(m));
    CHECK(std::accumulate(s.sizes.begin(), s.sizes.end(), std::int64_t{0}) == n);
    CHECK(s.total == n);
    for (auto b : s.sizes) CHECK(b >= 1);
    // Batches grow as alpha decays.
    CHECK(s.sizes.front() <= s.sizes.back());
  }
  CHECK(kind_of([] { schedule_from_alpha(linreg_schedule_factory(280.0, 1.0, 100, 0.01), 50, 100); }) ==
        ErrorKind::InfeasibleBudget);
}

TEST_CASE("sgd visits every sample exactly once, in order") {
  Dataset d;
  d.params = kDefault;
  for (int i = 0; i < 10; ++i) {
    d.xs.push_back(1.0);
    d.ys.push_back(static_cast<double>(i));
  }
  BatchSchedule s;
  s.sizes = {1, 2, 3, 4};
  s.total = 10;
  const double h = 0.5;
  const SgdRun r = run_sgd(d, s, h, 0.0);
  // chi' = (1 - h) chi + h mean(y_block)
  double chi = 0.0;
  std::size_t i = 0;
  for (std::size_t n = 0; n < 4; ++n) {
    double sum = 0;
    for (std::int64_t j = 0; j < s.sizes[n]; ++j) sum += d.ys[i++];
    chi = (1 - h) * chi + h * sum / static_cast<double>(s.sizes[n]);
    CHECK(r.iterates[n + 1] == doctest::Approx(chi));
  }
  CHECK(r.samples_cumulative == std::vector<std::int64_t>{0, 1, 3, 6, 10});

  s.total = 9;
  s.sizes = {1, 2, 3, 3};
  CHECK(kind_of([&] { run_sgd(d, s, h, 0.0); }) == ErrorKind::BudgetMismatch);
}

TEST_CASE("exact sgd moment recursion") {
  const std::vector<double> inv{0.125, 0.125};
  const double chi0 = -1.0 + std::sqrt(140.0);
  const auto m = exact_sgd_moments(kDefault, inv, 0.05, chi0);
  REQUIRE(m.size() == 3);
  CHECK(m[0].m2 == doctest::Approx(140.0));
  CHECK(m[1].m1 == doctest::Approx(0.95 * std::sqrt(140.0)));
  CHECK(std::abs(m[1].m2 - 126.4378125) <= 1e-10);
  // B = 1 is the plain single-sample recursion.
  const auto one = exact_sgd_moments(kDefault, constant_schedule(4, 4), 0.01, chi0);
  CHECK(one.size() == 5);
  const auto eight = exact_sgd_moments(kDefault, std::vector<double>{0.125}, 0.01, chi0);
  CHECK(std::abs(eight[1].m2 - 137.2175125) <= 1e-10);
}

TEST_CASE("em substeps respect the h/20 rule") {
  CHECK(em_substeps_for(TimeGrid(2.56, 4096), 0.05) == 1);
  CHECK(em_substeps_for(TimeGrid(1.0, 10), 0.05) == 40);
  CHECK(em_substeps_for(TimeGrid(1.0, 10), 0.0) == 1);
}

TEST_CASE("em without noise follows the gradient flow") {
  const RiskSpec s = make_linreg(kDefault);
  const TimeGrid grid(1.0, 1000);
  const Trajectory x = run_sde_em(s, constant_control(grid, 1.0), 0.0, 0.0, 4, {1, 0});
  CHECK(std::abs(x.back() - (-0.632120558828558)) <= 1e-3);
  CHECK_THROWS_AS(run_sde_em(s, constant_control(TimeGrid(1.0, 10), 1.0), 0.05, 0.0, 1, {1, 0}), Error);
}

TEST_CASE("exact sde second moment with a constant control") {
  const double h = 0.05, a = 0.25, horizon = 2.0;
  const double chi0 = 3.0;
  const auto alpha = constant_control(TimeGrid(horizon, 2000), a);
  const Trajectory m2 = exact_sde_second_moment(kDefault, alpha, h, chi0);
  const double c = -2.0 * (1 + h / 2) + h * a * 2.0;
  const double d = 2.0 * h * a * 0.5;
  const double expected = (16.0 + d / c) * std::exp(c * horizon) - d / c;
  CHECK(std::abs(m2.back() - expected) <= 1e-10 * expected);
  CHECK(exact_sde_second_moment(make_linreg(kDefault), alpha, h, chi0).back() == m2.back());

  RiskSpec generic = make_linreg(kDefault);
  generic.linreg.reset();
  CHECK(kind_of([&] { exact_sde_second_moment(generic, alpha, h, chi0); }) == ErrorKind::SpecMismatch);
}
