#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bopim/diffusion.hpp"

namespace bopim {

enum class Prior { Horseshoe, DirichletLaplace, R2D2 };

std::string_view to_string(Prior prior) noexcept;
/// Accepts "hs", "dl", "r2d2" (case-insensitive). Throws Error{InvalidConfig}.
Prior parse_prior(std::string_view name);

/// Evaluated seed sets and their responses, centered for the regression.
struct Dataset {
  Eigen::MatrixXd X;  // N x n, 0/1 entries, each row sums to k
  Eigen::VectorXd y;  // centered responses
  double y_mean = 0.0;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(X.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(X.cols()); }
};

/// Builds the design matrix from seed sets and subtracts the response mean.
Dataset make_dataset(const std::vector<SeedSet>& seeds, const std::vector<double>& responses);

struct GibbsConfig {
  std::size_t n_iter = 6000;
  std::size_t n_burn = 1000;
  Prior prior = Prior::Horseshoe;

  // Noise variance prior sigma^2 ~ IG(noise_a, noise_b).
  double noise_a = 1.0;
  double noise_b = 1.0;

  // Dirichlet concentration of the Dirichlet-Laplace prior.
  double dl_a = 0.5;

  // R2D2: phi ~ Dirichlet(a_pi), omega ~ BetaPrime(a, b). Unset values take
  // a_pi = 1 / (sqrt(n) N^(1/4) log n) clamped to [0.005, 0.5] and a = n a_pi.
  std::optional<double> r2d2_a_pi;
  std::optional<double> r2d2_a;
  double r2d2_b = 0.5;

  std::uint64_t seed = 1;

  /// Test hook: hold every local and global scale fixed so the prior
  /// covariance factor S is the identity; only beta and sigma^2 move.
  bool freeze_scales = false;

  void validate() const;
};

/// Resolved R2D2 hyperparameters for a problem of n coefficients and N rows.
struct R2d2Hyper {
  double a_pi;
  double a;
  double b;
};
R2d2Hyper resolve_r2d2(const GibbsConfig& cfg, std::size_t n, std::size_t N);

struct PosteriorDraws {
  Eigen::MatrixXd beta;           // retained sweeps x n
  std::vector<double> sigma2;     // one per retained sweep
  Prior prior = Prior::Horseshoe;
  double y_mean = 0.0;

  std::size_t num_draws() const noexcept { return static_cast<std::size_t>(beta.rows()); }
  std::size_t num_coefficients() const noexcept { return static_cast<std::size_t>(beta.cols()); }
};

/// Snapshot of the chain after a sweep, for diagnostics and tests. Unused
/// fields for the active prior stay empty or zero.
struct ChainState {
  std::size_t sweep = 0;
  const Eigen::VectorXd* beta = nullptr;
  double sigma2 = 0.0;
  const Eigen::VectorXd* local = nullptr;   // lambda_j^2 (HS) or psi_j (DL, R2D2)
  const Eigen::VectorXd* aux = nullptr;     // nu_j (HS)
  const Eigen::VectorXd* phi = nullptr;     // DL, R2D2
  double global = 0.0;                      // tau^2 (HS), tau (DL), omega (R2D2)
  double xi = 0.0;                          // HS, R2D2
};
using SweepObserver = std::function<void(const ChainState&)>;

/// Runs the Gibbs sampler for the chosen shrinkage prior. Each sweep updates,
/// in order:
///   HS:   beta, sigma^2, lambda_j^2, tau^2, nu_j, xi
///   DL:   beta, sigma^2, psi_j, tau, phi
///   R2D2: beta, sigma^2, psi_j, omega, xi, phi
/// Scales and auxiliaries start at 1, beta at 0, sigma^2 at the sample
/// variance of y.
PosteriorDraws fit(const Dataset& data, const GibbsConfig& cfg,
                   const SweepObserver& observer = {});

struct PredictiveSummary {
  std::vector<double> draws;  // sorted ascending
  double median = 0.0;

  double quantile(double p) const;
};

/// Posterior (predictive when `include_noise`) distribution of the spread of
/// `x`: x . beta^(s) + y_mean, plus Normal(0, sigma2^(s)) noise if requested.
PredictiveSummary predict(const PosteriorDraws& draws, const SeedSet& x, bool include_noise,
                          std::uint64_t seed = 0);

/// Coordinatewise median of the beta draws.
Eigen::VectorXd posterior_medians(const PosteriorDraws& draws);

/// One CSV row per retained sweep: sigma2,beta_1,...,beta_n.
void write_draws_csv(const PosteriorDraws& draws, std::ostream& out);

}  // namespace bopim
