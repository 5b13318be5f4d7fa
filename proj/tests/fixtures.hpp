// Shared regression fixtures for the surrogate tests.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bopim/diffusion.hpp"
#include "bopim/optimizer.hpp"
#include "bopim/shrinkage_gibbs.hpp"
#include "bopim/stat_dist.hpp"

namespace fixture {

struct Regression {
  std::vector<bopim::SeedSet> x;
  std::vector<double> y;
  Eigen::VectorXd beta;
};

/// N random k-subsets of n nodes with y = x.beta + sigma * noise.
inline Regression linear(std::size_t N, std::size_t n, std::size_t k, const Eigen::VectorXd& beta,
                         double sigma, std::uint64_t seed) {
  bopim::Rng rng(seed);
  Regression r;
  r.beta = beta;
  for (std::size_t i = 0; i < N; ++i) {
    auto s = bopim::sample_seed_uniform(n, k, rng);
    double v = 0.0;
    for (auto j : s.nodes()) v += beta[j];
    r.x.push_back(s);
    r.y.push_back(v + sigma * bopim::dist::sample_normal(rng));
  }
  return r;
}

/// Analytic posterior mean of beta when the prior covariance is sigma^2 I.
inline Eigen::VectorXd ridge_mean(const bopim::Dataset& d) {
  Eigen::MatrixXd P = d.X.transpose() * d.X;
  P.diagonal().array() += 1.0;
  return P.ldlt().solve(d.X.transpose() * d.y);
}

/// Share of held-out responses inside the central 95% predictive interval
/// over independent replications. Each replication draws beta from the
/// model's own prior (unit variance), simulates N training rows and one
/// test row, fits with scales frozen at identity and asks `inside` whether
/// the test response falls in the interval.
template <class Inside>
double calibration_coverage(std::size_t reps, std::size_t N, std::size_t n, std::size_t k,
                            std::uint64_t seed, Inside&& inside) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    bopim::Rng rng(bopim::substream_seed(seed, 0, r));
    Eigen::VectorXd beta(static_cast<Eigen::Index>(n));
    for (auto& b : beta) b = bopim::dist::sample_normal(rng);
    auto data = linear(N + 1, n, k, beta, 1.0, bopim::substream_seed(seed, 1, r));
    const bopim::SeedSet x_test = data.x.back();
    const double y_test = data.y.back();
    data.x.pop_back();
    data.y.pop_back();
    bopim::GibbsConfig c;
    c.n_iter = 2500;
    c.n_burn = 500;
    c.freeze_scales = true;
    c.seed = bopim::substream_seed(seed, 2, r);
    auto draws = bopim::fit(bopim::make_dataset(data.x, data.y), c);
    hits += inside(draws, x_test, y_test, r) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(reps);
}

}  // namespace fixture
