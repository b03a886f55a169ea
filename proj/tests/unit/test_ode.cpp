#include <cmath>
#include <vector>

#include "bsched/error.hpp"
#include "bsched/ode.hpp"
#include "doctest.h"

using namespace bsched;

namespace {

const LinRegParams kDefault{1.0, -1.0, 1.0, 3.0};

RiskSpec flat_risk() {
  RiskSpec s;
  s.r = [](double) { return 0.0; };
  s.dr = [](double) { return 0.0; };
  s.d2r = [](double) { return 0.0; };
  s.d3r = [](double) { return 0.0; };
  s.sigma2 = [](double) { return 1.0; };
  return s;
}

}  // namespace

TEST_CASE("time grid") {
  const TimeGrid g(2.8, 7);
  CHECK(g.size() == 8);
  CHECK(g.t(0) == 0.0);
  CHECK(g.t(7) == 2.8);
  for (std::size_t k = 0; k + 1 < g.size(); ++k) CHECK(g.t(k) < g.t(k + 1));
  CHECK_THROWS_AS(TimeGrid(0.0, 3), Error);
  CHECK_THROWS_AS(TimeGrid(1.0, 0), Error);
  CHECK_THROWS_AS(Trajectory(g, std::vector<double>(3)), Error);
}

TEST_CASE("gradient flow matches the exponential closed form") {
  const RiskSpec s = make_linreg(kDefault);
  const Trajectory x = integrate_gradient_flow(s, 0.0, TimeGrid(1.0, 1000));
  CHECK(std::abs(x.back() - (-0.632120558828558)) <= 1e-6);

  const Trajectory fixed = integrate_gradient_flow(s, -1.0, TimeGrid(3.0, 50));
  for (double v : fixed.values) CHECK(v == -1.0);

  const Trajectory still = integrate_gradient_flow(flat_risk(), 4.2, TimeGrid(3.0, 50));
  for (double v : still.values) CHECK(v == 4.2);
}

TEST_CASE("gradient flow is a descent path") {
  RiskSpec s;
  s.r = [](double x) { return 0.25 * x * x * x * x + 0.5 * x * x; };
  s.dr = [](double x) { return x * x * x + x; };
  s.d2r = [](double x) { return 3 * x * x + 1; };
  s.d3r = [](double x) { return 6 * x; };
  s.sigma2 = [](double) { return 1.0; };
  const Trajectory x = integrate_gradient_flow(s, 2.5, TimeGrid(3.0, 4096));
  for (std::size_t k = 0; k + 1 < x.values.size(); ++k) {
    CHECK(s.r(x[k + 1]) <= s.r(x[k]) + 1e-9);
  }
}

TEST_CASE("gradient flow refinement is fourth order") {
  RiskSpec s;
  s.r = [](double x) { return std::log(std::cosh(x)); };
  s.dr = [](double x) { return std::tanh(x); };
  s.d2r = [](double x) { return 1 / (std::cosh(x) * std::cosh(x)); };
  s.d3r = [](double x) { return -2 * std::tanh(x) / (std::cosh(x) * std::cosh(x)); };
  s.sigma2 = [](double) { return 1.0; };
  // The exact solution solves sinh(X_t) = sinh(x0) e^{-t}.
  const double x0 = 3.0, horizon = 20.0;
  const double exact = std::asinh(std::sinh(x0) * std::exp(-horizon));
  std::vector<double> err;
  for (std::size_t k : {250u, 500u, 1000u, 2000u}) {
    err.push_back(std::abs(integrate_gradient_flow(s, x0, TimeGrid(horizon, k)).back() - exact));
  }
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    CHECK(std::log2(err[i] / err[i + 1]) >= 3.5);
  }
}

TEST_CASE("gradient flow divergence is reported") {
  RiskSpec s = flat_risk();
  s.dr = [](double x) { return -x * x; };  // dX = X^2 dt blows up
  try {
    integrate_gradient_flow(s, 1.0, TimeGrid(2.0, 1000));
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Divergence);
  }
}

TEST_CASE("adaptive Simpson quadrature") {
  CHECK(quadrature([](double x) { return x * x; }, 0.0, 1.0, 1e-12) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(quadrature([](double t) { return std::exp(2 * t); }, 0.0, 2.0, 1e-10) - 26.79907501657212) <= 1e-9);
  CHECK(quadrature([](double x) { return std::sin(x); }, 1.5, 1.5) == 0.0);
  CHECK_THROWS_AS(quadrature([](double x) { return x; }, 1.0, 0.0), Error);
  try {
    quadrature([](double x) { return x == 0.5 ? 0.0 : 1.0 / ((x - 0.5) * (x - 0.5)); }, 0.0, 1.0, 1e-12);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
  }
}

TEST_CASE("eta has a removable singularity at zero") {
  CHECK(eta_of(0.0) == 1.0);
  CHECK(std::abs(eta_of(1e-10) - 1.0) <= 1e-8);
  CHECK(std::abs(eta_of(-1e-10) - 1.0) <= 1e-8);
  CHECK(eta_of(-1.0) == doctest::Approx((std::exp(-2.0) - std::exp(-1.0)) / -1.0));
}

TEST_CASE("theorem quantities for linear regression") {
  const RiskSpec s = make_linreg(kDefault);
  const double horizon = 2.8;
  const TimeGrid grid(horizon, 4096);
  const Trajectory x0 = integrate_gradient_flow(s, -1.0 + std::sqrt(140.0), grid);
  const Theorem21Quantities q = theorem21_quantities(s, x0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.t(k);
    CHECK(std::abs(q.beta1[k] + (horizon - t)) <= 1e-10);
    CHECK(q.beta2[k] == 0.0);
    CHECK(std::abs(q.delta[k] - std::exp(-2.0 * (horizon - t))) <= 1e-8);
  }
  CHECK(q.beta1.back() == 0.0);
  CHECK(q.eta.back() == 1.0);
  CHECK(q.delta.back() == doctest::Approx(s.d2r(x0.back())));
}

TEST_CASE("flat risk has nonpositive delta") {
  const RiskSpec s = flat_risk();
  const Trajectory x0 = integrate_gradient_flow(s, 0.0, TimeGrid(1.0, 16));
  try {
    theorem21_quantities(s, x0);
    FAIL("expected nonpositive delta");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonpositiveDelta);
  }
}
