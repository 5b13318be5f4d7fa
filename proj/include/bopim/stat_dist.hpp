#pragma once

#include <Eigen/Dense>

#include "bopim/rng.hpp"

namespace bopim::dist {

/// Generalized inverse Gaussian law with density proportional to
/// z^(order - 1) exp(-(rho z + chi / z) / 2) on z > 0.
struct GigParams {
  double order;  // lambda in the usual GIG(lambda, chi, psi) notation
  double rho;    // coefficient of z (psi)
  double chi;    // coefficient of 1/z

  /// Throws Error{InvalidParam} unless rho, chi >= 0, not both zero, and the
  /// boundary cases have the sign of `order` that keeps the law proper.
  void validate() const;
};

/// Standard normal.
double sample_normal(Rng& rng);

/// Gamma with shape a and rate b.
double sample_gamma(double shape, double rate, Rng& rng);

/// Inverse gamma, density proportional to z^(-a-1) exp(-b / z).
double sample_inverse_gamma(double shape, double scale, Rng& rng);

/// Inverse Gaussian with mean mu and shape lam (Michael, Schucany and Haas).
double sample_inverse_gaussian(double mu, double lam, Rng& rng);

/// GIG draw (Hormann and Leydold ratio-of-uniforms family of samplers, with
/// the chi = 0 and rho = 0 boundaries reduced to gamma and inverse gamma).
double sample_gig(const GigParams& p, Rng& rng);

/// beta ~ Normal(V * xty, sigma2 * V) with V = (xtx + diag(prior_precision))^-1.
/// Factorizes the precision with an LLT; on failure adds diagonal jitter
/// 1e-10, 1e-9, ..., 1e-6 before throwing Error{FactorizationFailure}.
Eigen::VectorXd sample_mvn_precision(const Eigen::VectorXd& xty, const Eigen::MatrixXd& xtx,
                                     const Eigen::VectorXd& prior_precision, double sigma2, Rng& rng);

}  // namespace bopim::dist
