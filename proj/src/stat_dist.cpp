#include "bopim/stat_dist.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "bopim/error.hpp"

namespace bopim::dist {

namespace {

constexpr double kZeroTol = 10.0 * DBL_EPSILON;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidParam, what); }

// Mode of the two-parameter GIG with density z^(lambda-1) exp(-omega (z + 1/z) / 2).
double gig_mode(double lambda, double omega) {
  if (lambda >= 1.0) return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) + (lambda - 1.0)) / omega;
  return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) + (1.0 - lambda));
}

// Ratio-of-uniforms without mode shift; for 0 <= lambda <= 1, omega in
// [min(1/2, 2/3 sqrt(1-lambda)), 1].
double gig_rou_noshift(double lambda, double omega, Rng& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double ym = ((lambda + 1.0) + std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) / omega;
  const double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);
  for (;;) {
    const double u = um * uniform01(rng);
    const double v = uniform_open01(rng);
    const double x = u / v;
    if (x > 0.0 && std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

// Ratio-of-uniforms with mode shift; for lambda > 1 or omega > 1.
double gig_rou_shift(double lambda, double omega, Rng& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

  // Roots of the cubic bounding the shifted region (Cardano).
  const double a = -(2.0 * (lambda + 1.0) / omega + xm);
  const double b = (2.0 * (lambda - 1.0) * xm / omega - 1.0);
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = (2.0 * a * a * a) / 27.0 - (a * b) / 3.0 + c;
  const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * std::numbers::pi) - a / 3.0;
  const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

  for (;;) {
    const double u = uminus + uniform01(rng) * (uplus - uminus);
    const double v = uniform_open01(rng);
    const double x = u / v + xm;
    if (x > 0.0 && std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

// Rejection from a three-piece hat; for 0 <= lambda < 1 and small omega,
// where the density is not T-concave.
double gig_nonconcave(double lambda, double omega, Rng& rng) {
  const double xm = gig_mode(lambda, omega);
  const double x0 = omega / (1.0 - lambda);
  const double k0 = std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
  double area[3];
  area[0] = k0 * x0;

  double k1, k2;
  if (x0 >= 2.0 / omega) {
    k1 = 0.0;
    area[1] = 0.0;
    k2 = std::pow(x0, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    k1 = std::exp(-omega);
    area[1] = (lambda == 0.0) ? k1 * std::log(2.0 / (omega * omega))
                              : k1 / lambda * (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
    k2 = std::pow(2.0 / omega, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double total = area[0] + area[1] + area[2];

  for (;;) {
    double v = total * uniform01(rng);
    double x, hx;
    if (v <= area[0]) {
      x = x0 * v / area[0];
      hx = k0;
    } else if ((v -= area[0]) <= area[1]) {
      if (lambda == 0.0) {
        x = omega * std::exp(std::exp(omega) * v);
        hx = k1 / x;
      } else {
        x = std::pow(std::pow(x0, lambda) + (lambda / k1 * v), 1.0 / lambda);
        hx = k1 * std::pow(x, lambda - 1.0);
      }
    } else {
      v -= area[1];
      const double lo = std::max(x0, 2.0 / omega);
      x = -2.0 / omega * std::log(std::exp(-omega / 2.0 * lo) - omega / (2.0 * k2) * v);
      hx = k2 * std::exp(-omega / 2.0 * x);
    }
    if (!(x > 0.0) || !std::isfinite(x)) continue;
    const double u = uniform01(rng) * hx;
    if (std::log(u) <= (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x)) return x;
  }
}

}  // namespace

void GigParams::validate() const {
  if (!std::isfinite(order) || !std::isfinite(rho) || !std::isfinite(chi)) invalid("GIG parameters must be finite");
  if (rho < 0.0 || chi < 0.0) invalid("GIG rho and chi must be non-negative");
  if (rho == 0.0 && chi == 0.0) invalid("GIG rho and chi cannot both be zero");
  if (chi == 0.0 && order <= 0.0) invalid("GIG with chi = 0 needs a positive order");
  if (rho == 0.0 && order >= 0.0) invalid("GIG with rho = 0 needs a negative order");
}

double sample_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

double sample_gamma(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    invalid("gamma needs shape > 0 and rate > 0");
  }
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

double sample_inverse_gamma(double shape, double scale, Rng& rng) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
    invalid("inverse gamma needs shape > 0 and scale > 0");
  }
  return scale / std::gamma_distribution<double>(shape, 1.0)(rng);
}

double sample_inverse_gaussian(double mu, double lam, Rng& rng) {
  if (!(mu > 0.0) || !(lam > 0.0) || !std::isfinite(mu) || !std::isfinite(lam)) {
    invalid("inverse Gaussian needs mu > 0 and lambda > 0");
  }
  const double nu = sample_normal(rng);
  const double w = mu * nu * nu / (2.0 * lam);
  // mu * (1 + w - sqrt(w^2 + 2w)) written without cancellation.
  const double x = mu / (1.0 + w + std::sqrt(w * w + 2.0 * w));
  return uniform01(rng) * (mu + x) <= mu ? x : mu * mu / x;
}

double sample_gig(const GigParams& p, Rng& rng) {
  p.validate();
  if (p.chi < kZeroTol && p.order > 0.0) return sample_gamma(p.order, p.rho / 2.0, rng);
  if (p.rho < kZeroTol && p.order < 0.0) return sample_inverse_gamma(-p.order, p.chi / 2.0, rng);

  // Reduce to GIG(|lambda|, omega, omega) and rescale by alpha.
  const double lambda = std::abs(p.order);
  const double omega = std::sqrt(p.rho * p.chi);
  const double alpha = std::sqrt(p.chi / p.rho);

  double x;
  if (lambda > 2.0 || omega > 3.0) {
    x = gig_rou_shift(lambda, omega, rng);
  } else if (lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2) {
    x = gig_rou_noshift(lambda, omega, rng);
  } else {
    x = gig_nonconcave(lambda, omega, rng);
  }
  return p.order < 0.0 ? alpha / x : alpha * x;
}

Eigen::VectorXd sample_mvn_precision(const Eigen::VectorXd& xty, const Eigen::MatrixXd& xtx,
                                     const Eigen::VectorXd& prior_precision, double sigma2,
                                     Rng& rng) {
  const Eigen::Index n = xty.size();
  if (xtx.rows() != n || xtx.cols() != n || prior_precision.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "precision-form normal: inconsistent dimensions");
  }
  if (!(sigma2 > 0.0)) invalid("precision-form normal needs sigma2 > 0");
  if ((prior_precision.array() <= 0.0).any()) invalid("prior precision must be strictly positive");

  Eigen::MatrixXd precision = xtx;
  precision.diagonal() += prior_precision;

  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  double jitter = 1e-10;
  while (llt.info() != Eigen::Success || !llt.matrixLLT().allFinite()) {
    if (jitter > 1e-6 * 1.0001) {
      throw Error(ErrorCode::FactorizationFailure, "precision matrix not positive definite after jitter");
    }
    Eigen::MatrixXd jittered = precision;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
    jitter *= 10.0;
  }

  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = sample_normal(rng);
  Eigen::VectorXd mean = llt.solve(xty);
  // U = L^T; U^-1 z has covariance (L L^T)^-1.
  return mean + std::sqrt(sigma2) * llt.matrixU().solve(z);
}

}  // namespace bopim::dist
