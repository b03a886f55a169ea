#pragma once

#include <functional>
#include <optional>

namespace bsched {

using ScalarFn = std::function<double(double)>;

/// Parameters of the one-dimensional linear model y = theta_star * x + eps.
struct LinRegParams {
  double kappa = 1.0;       // Var x
  double theta_star = -1.0;
  double sigma_eps2 = 1.0;  // Var eps
  double kurtosis = 3.0;    // E[x^4] / kappa^2

  /// Smallest achievable population risk, sigma_eps2 / 2.
  double r_star() const { return 0.5 * sigma_eps2; }
};

/// Throws InvalidParameter unless kappa > 0, sigma_eps2 > 0 and kurtosis >= 1.
void validate(const LinRegParams& p);

/// The risk minimization task: population risk R with its first three
/// derivatives and the gradient-noise variance Sigma.
///
/// Smoothness of R is a caller contract; check_consistency() only probes the
/// derivatives against central finite differences.
struct RiskSpec {
  ScalarFn r;
  ScalarFn dr;
  ScalarFn d2r;
  ScalarFn d3r;
  ScalarFn sigma2;
  std::optional<double> r_star;
  /// Set when the spec was built by make_linreg; exact oracles require it.
  std::optional<LinRegParams> linreg;
};

RiskSpec make_linreg(const LinRegParams& p);

/// R(theta) - R*. Throws MissingRStar when the infimum is unknown.
double excess_risk(const RiskSpec& spec, double theta);

/// gamma = (R(chi0) - R*) (Kurt - 1) / R*, the single shape parameter of the
/// linear-regression control after rescaling the multiplier.
double gamma_of(const LinRegParams& p, double chi0);

/// Initial value that produces a given gamma: theta* + sqrt(gamma sigma^2 / ((Kurt-1) kappa)).
double chi0_for_gamma(const LinRegParams& p, double gamma);

struct ConsistencyReport {
  double max_dr_residual = 0.0;   // scaled by 1 + |dr|
  double max_d2r_residual = 0.0;
  double max_d3r_residual = 0.0;
  double min_sigma2 = 0.0;
  bool ok = false;
};

/// Probes derivative consistency with central differences (step 1e-4) on
/// `points` uniform nodes of [lo, hi], and Sigma > 0 on the same nodes.
ConsistencyReport check_consistency(const RiskSpec& spec, double lo = -20.0, double hi = 20.0,
                                    int points = 100, double tol = 1e-5);

}  // namespace bsched
