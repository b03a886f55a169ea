#include "bsched/risk_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bsched/error.hpp"

namespace bsched {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::MissingRStar: return "missing-r-star";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::NonpositiveDelta: return "nonpositive-delta";
    case ErrorKind::NonpositiveSigma: return "nonpositive-sigma";
    case ErrorKind::InfeasibleBudget: return "infeasible-budget";
    case ErrorKind::BracketFailure: return "bracket-failure";
    case ErrorKind::BudgetMismatch: return "budget-mismatch";
    case ErrorKind::SpecMismatch: return "spec-mismatch";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

void validate(const LinRegParams& p) {
  if (!(p.kappa > 0.0) || !std::isfinite(p.kappa)) {
    throw Error(ErrorKind::InvalidParameter, "kappa must be positive, got " + std::to_string(p.kappa));
  }
  if (!(p.sigma_eps2 > 0.0) || !std::isfinite(p.sigma_eps2)) {
    throw Error(ErrorKind::InvalidParameter,
                "sigma_eps2 must be positive, got " + std::to_string(p.sigma_eps2));
  }
  if (!(p.kurtosis >= 1.0) || !std::isfinite(p.kurtosis)) {
    throw Error(ErrorKind::InvalidParameter,
                "kurtosis must be >= 1, got " + std::to_string(p.kurtosis));
  }
  if (!std::isfinite(p.theta_star)) {
    throw Error(ErrorKind::InvalidParameter, "theta_star must be finite");
  }
}

RiskSpec make_linreg(const LinRegParams& p) {
  validate(p);
  const double kappa = p.kappa;
  const double ts = p.theta_star;
  const double rs = p.r_star();
  const double excess_kurt = p.kurtosis - 1.0;

  RiskSpec spec;
  spec.r = [=](double th) { return 0.5 * kappa * (th - ts) * (th - ts) + rs; };
  spec.dr = [=](double th) { return kappa * (th - ts); };
  spec.d2r = [=](double) { return kappa; };
  spec.d3r = [](double) { return 0.0; };
  spec.sigma2 = [=](double th) {
    return kappa * kappa * excess_kurt * (th - ts) * (th - ts) + 2.0 * kappa * rs;
  };
  spec.r_star = rs;
  spec.linreg = p;
  return spec;
}

double excess_risk(const RiskSpec& spec, double theta) {
  if (!spec.r_star) {
    throw Error(ErrorKind::MissingRStar, "risk spec has no known infimum R*");
  }
  return spec.r(theta) - *spec.r_star;
}

double gamma_of(const LinRegParams& p, double chi0) {
  const double rs = p.r_star();
  const double re0 = 0.5 * p.kappa * (chi0 - p.theta_star) * (chi0 - p.theta_star);
  return re0 * (p.kurtosis - 1.0) / rs;
}

double chi0_for_gamma(const LinRegParams& p, double gamma) {
  if (p.kurtosis <= 1.0) {
    throw Error(ErrorKind::InvalidParameter, "gamma does not determine chi0 when kurtosis == 1");
  }
  return p.theta_star + std::sqrt(gamma * p.sigma_eps2 / ((p.kurtosis - 1.0) * p.kappa));
}

ConsistencyReport check_consistency(const RiskSpec& spec, double lo, double hi, int points,
                                    double tol) {
  constexpr double eps = 1e-4;
  ConsistencyReport rep;
  rep.min_sigma2 = std::numeric_limits<double>::infinity();
  auto residual = [&](const ScalarFn& f, const ScalarFn& df, double th) {
    const double fd = (f(th + eps) - f(th - eps)) / (2.0 * eps);
    const double d = df(th);
    return std::abs(d - fd) / (1.0 + std::abs(d));
  };
  for (int i = 0; i < points; ++i) {
    const double th = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    rep.max_dr_residual = std::max(rep.max_dr_residual, residual(spec.r, spec.dr, th));
    rep.max_d2r_residual = std::max(rep.max_d2r_residual, residual(spec.dr, spec.d2r, th));
    rep.max_d3r_residual = std::max(rep.max_d3r_residual, residual(spec.d2r, spec.d3r, th));
    rep.min_sigma2 = std::min(rep.min_sigma2, spec.sigma2(th));
  }
  rep.ok = rep.max_dr_residual <= tol && rep.max_d2r_residual <= tol &&
           rep.max_d3r_residual <= tol && rep.min_sigma2 > 0.0;
  return rep;
}

}  // namespace bsched
