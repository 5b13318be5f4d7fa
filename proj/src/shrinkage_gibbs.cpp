#include "bopim/shrinkage_gibbs.hpp"

#include <algorithm>
#include <cctype>
#include <cfloat>
#include <cmath>
#include <ostream>
#include <string>

#include "bopim/error.hpp"
#include "bopim/quantile.hpp"
#include "bopim/stat_dist.hpp"

namespace bopim {

namespace {

// |beta_j| floor in the inverse-Gaussian and GIG steps.
constexpr double kBetaFloor = 1e-10;
// Cap on prior precision 1/S_j; below a prior sd of 1e-6 sigma the
// coefficient is numerically zero already.
constexpr double kMaxPrecision = 1e12;

double positive(double v) { return std::isfinite(v) ? std::max(v, DBL_MIN) : DBL_MAX; }

}  // namespace

std::string_view to_string(Prior prior) noexcept {
  switch (prior) {
    case Prior::Horseshoe: return "hs";
    case Prior::DirichletLaplace: return "dl";
    case Prior::R2D2: return "r2d2";
  }
  return "?";
}

Prior parse_prior(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "hs" || lower == "horseshoe") return Prior::Horseshoe;
  if (lower == "dl" || lower == "dirichlet-laplace") return Prior::DirichletLaplace;
  if (lower == "r2d2") return Prior::R2D2;
  throw Error(ErrorCode::InvalidConfig, "unknown prior '" + std::string(name) + "' (hs|dl|r2d2)");
}

Dataset make_dataset(const std::vector<SeedSet>& seeds, const std::vector<double>& responses) {
  if (seeds.size() != responses.size()) {
    throw Error(ErrorCode::DimensionMismatch, "seed sets and responses differ in length");
  }
  if (seeds.empty()) throw Error(ErrorCode::InvalidConfig, "dataset needs at least one row");
  const std::size_t n = seeds.front().n();
  const std::size_t k = seeds.front().k();
  Dataset data;
  data.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(seeds.size()), static_cast<Eigen::Index>(n));
  data.y.resize(static_cast<Eigen::Index>(seeds.size()));
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i].n() != n || seeds[i].k() != k) {
      throw Error(ErrorCode::DimensionMismatch, "all seed sets must share n and k");
    }
    for (auto v : seeds[i].nodes()) data.X(static_cast<Eigen::Index>(i), v) = 1.0;
    data.y[static_cast<Eigen::Index>(i)] = responses[i];
  }
  data.y_mean = data.y.mean();
  data.y.array() -= data.y_mean;
  return data;
}

void GibbsConfig::validate() const {
  if (n_iter < 1 || n_burn >= n_iter) throw Error(ErrorCode::InvalidConfig, "need 0 <= n_burn < n_iter");
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidConfig, std::string(name) + " must be > 0");
    }
  };
  pos(noise_a, "noise_a");
  pos(noise_b, "noise_b");
  pos(dl_a, "dl_a");
  pos(r2d2_b, "r2d2_b");
  if (r2d2_a_pi) pos(*r2d2_a_pi, "r2d2_a_pi");
  if (r2d2_a) pos(*r2d2_a, "r2d2_a");
}

R2d2Hyper resolve_r2d2(const GibbsConfig& cfg, std::size_t n, std::size_t N) {
  R2d2Hyper h{};
  if (cfg.r2d2_a_pi) {
    h.a_pi = *cfg.r2d2_a_pi;
  } else {
    const double dn = static_cast<double>(n);
    const double denom = std::sqrt(dn) * std::pow(static_cast<double>(N), 0.25) * std::log(dn);
    h.a_pi = denom > 0.0 ? std::clamp(1.0 / denom, 0.005, 0.5) : 0.5;
  }
  h.a = cfg.r2d2_a ? *cfg.r2d2_a : static_cast<double>(n) * h.a_pi;
  h.b = cfg.r2d2_b;
  return h;
}

PosteriorDraws fit(const Dataset& data, const GibbsConfig& cfg, const SweepObserver& observer) {
  cfg.validate();
  const auto N = static_cast<Eigen::Index>(data.rows());
  const auto n = static_cast<Eigen::Index>(data.cols());
  if (N < 2) throw Error(ErrorCode::InvalidConfig, "Gibbs fit needs at least two rows");
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "Gibbs fit needs at least one coefficient");
  if (data.y.size() != N) throw Error(ErrorCode::DimensionMismatch, "y length differs from X rows");

  Rng rng = make_rng(cfg.seed, stream::kGibbs, 0);
  const Eigen::MatrixXd xtx = data.X.transpose() * data.X;
  const Eigen::VectorXd xty = data.X.transpose() * data.y;
  const double dn = static_cast<double>(n);
  const double dN = static_cast<double>(N);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
  double sigma2 = (data.y.squaredNorm()) / (dN - 1.0);
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) sigma2 = 1.0;

  Eigen::VectorXd local = Eigen::VectorXd::Ones(n);  // lambda^2 or psi
  Eigen::VectorXd aux = Eigen::VectorXd::Ones(n);    // nu (HS)
  Eigen::VectorXd phi = Eigen::VectorXd::Ones(n);
  double global = 1.0;  // tau^2, tau or omega
  double xi = 1.0;
  if (cfg.freeze_scales && cfg.prior == Prior::R2D2) global = 2.0;  // psi phi omega / 2 = 1

  const R2d2Hyper r2 = resolve_r2d2(cfg, data.cols(), data.rows());

  Eigen::VectorXd prior_prec(n);
  auto update_prior_precision = [&] {
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      switch (cfg.prior) {
        case Prior::Horseshoe: s = local[j] * global; break;
        case Prior::DirichletLaplace: s = local[j] * phi[j] * phi[j] * global * global; break;
        case Prior::R2D2: s = local[j] * phi[j] * global / 2.0; break;
      }
      prior_prec[j] = std::min(1.0 / s, kMaxPrecision);
    }
  };

  const std::size_t kept = cfg.n_iter - cfg.n_burn;
  PosteriorDraws out;
  out.prior = cfg.prior;
  out.y_mean = data.y_mean;
  out.beta.resize(static_cast<Eigen::Index>(kept), n);
  out.sigma2.reserve(kept);

  Eigen::VectorXd tvec(n);
  for (std::size_t sweep = 0; sweep < cfg.n_iter; ++sweep) {
    // 1. beta | rest ~ N(V X'y, sigma^2 V), V = (X'X + S^-1)^-1
    update_prior_precision();
    beta = dist::sample_mvn_precision(xty, xtx, prior_prec, sigma2, rng);

    // 2. sigma^2 | rest ~ IG(a1 + (N + n)/2, b1 + (beta' S^-1 beta + RSS)/2)
    const double rss = (data.y - data.X * beta).squaredNorm();
    const double quad = (beta.array().square() * prior_prec.array()).sum();
    sigma2 = positive(dist::sample_inverse_gamma(cfg.noise_a + (dN + dn) / 2.0,
                                                 cfg.noise_b + (quad + rss) / 2.0, rng));
    const double sigma = std::sqrt(sigma2);

    if (!cfg.freeze_scales) {
      switch (cfg.prior) {
        case Prior::Horseshoe: {
          const double tau2 = global;
          // 3. lambda_j^2 ~ IG(1, 1/nu_j + beta_j^2 / (2 tau^2 sigma^2))
          for (Eigen::Index j = 0; j < n; ++j) {
            local[j] = positive(dist::sample_inverse_gamma(
                1.0, 1.0 / aux[j] + beta[j] * beta[j] / (2.0 * tau2 * sigma2), rng));
          }
          // 4. tau^2 ~ IG((n+1)/2, 1/xi + sum beta_j^2 / (2 lambda_j^2 sigma^2))
          double s = 0.0;
          for (Eigen::Index j = 0; j < n; ++j) s += beta[j] * beta[j] / (2.0 * local[j] * sigma2);
          global = positive(dist::sample_inverse_gamma((dn + 1.0) / 2.0, 1.0 / xi + s, rng));
          // 5. nu_j ~ IG(1, 1 + 1/lambda_j^2)
          for (Eigen::Index j = 0; j < n; ++j) {
            aux[j] = positive(dist::sample_inverse_gamma(1.0, 1.0 + 1.0 / local[j], rng));
          }
          // 6. xi ~ IG(1, 1 + 1/tau^2)
          xi = positive(dist::sample_inverse_gamma(1.0, 1.0 + 1.0 / global, rng));
          break;
        }
        case Prior::DirichletLaplace: {
          const double a = cfg.dl_a;
          const double tau = global;
          // 3. 1/psi_j ~ InvGaussian(sigma phi_j tau / |beta_j|, 1)
          for (Eigen::Index j = 0; j < n; ++j) {
            const double ab = std::max(std::abs(beta[j]), kBetaFloor);
            local[j] = positive(1.0 / dist::sample_inverse_gaussian(sigma * phi[j] * tau / ab, 1.0, rng));
          }
          // 4. tau ~ GIG(chi = 2 sum |beta_j| / (sigma phi_j), rho = 1, order = n a - n)
          double chi = 0.0;
          for (Eigen::Index j = 0; j < n; ++j) {
            chi += 2.0 * std::max(std::abs(beta[j]), kBetaFloor) / (sigma * phi[j]);
          }
          global = positive(dist::sample_gig({dn * a - dn, 1.0, chi}, rng));
          // 5. T_j ~ GIG(chi = 2 |beta_j| / sigma, rho = 1, order = a - 1); phi = T / sum T
          for (Eigen::Index j = 0; j < n; ++j) {
            const double ab = std::max(std::abs(beta[j]), kBetaFloor);
            tvec[j] = positive(dist::sample_gig({a - 1.0, 1.0, 2.0 * ab / sigma}, rng));
          }
          phi = tvec / tvec.sum();
          for (Eigen::Index j = 0; j < n; ++j) phi[j] = positive(phi[j]);
          break;
        }
        case Prior::R2D2: {
          const double omega = global;
          // 3. 1/psi_j ~ InvGaussian(sqrt(sigma^2 phi_j omega / 2) / |beta_j|, 1)
          for (Eigen::Index j = 0; j < n; ++j) {
            const double ab = std::max(std::abs(beta[j]), kBetaFloor);
            local[j] = positive(1.0 / dist::sample_inverse_gaussian(
                                          std::sqrt(sigma2 * phi[j] * omega / 2.0) / ab, 1.0, rng));
          }
          // 4. omega ~ GIG(chi = sum 2 beta_j^2 / (sigma^2 psi_j phi_j), rho = 2 xi, order = a - n/2)
          double chi = 0.0;
          for (Eigen::Index j = 0; j < n; ++j) {
            const double ab = std::max(std::abs(beta[j]), kBetaFloor);
            chi += 2.0 * ab * ab / (sigma2 * local[j] * phi[j]);
          }
          global = positive(dist::sample_gig({r2.a - dn / 2.0, 2.0 * xi, chi}, rng));
          // 5. xi ~ Gamma(a + b, rate 1 + omega)
          xi = positive(dist::sample_gamma(r2.a + r2.b, 1.0 + global, rng));
          // 6. T_j ~ GIG(chi = 2 beta_j^2 / (sigma^2 psi_j), rho = 2 xi, order = a_pi - 1/2)
          for (Eigen::Index j = 0; j < n; ++j) {
            const double ab = std::max(std::abs(beta[j]), kBetaFloor);
            tvec[j] = positive(dist::sample_gig({r2.a_pi - 0.5, 2.0 * xi, 2.0 * ab * ab / (sigma2 * local[j])}, rng));
          }
          phi = tvec / tvec.sum();
          for (Eigen::Index j = 0; j < n; ++j) phi[j] = positive(phi[j]);
          break;
        }
      }
    }

    if (observer) {
      ChainState st;
      st.sweep = sweep;
      st.beta = &beta;
      st.sigma2 = sigma2;
      st.local = &local;
      st.aux = cfg.prior == Prior::Horseshoe ? &aux : nullptr;
      st.phi = cfg.prior == Prior::Horseshoe ? nullptr : &phi;
      st.global = global;
      st.xi = cfg.prior == Prior::DirichletLaplace ? 0.0 : xi;
      observer(st);
    }

    if (sweep >= cfg.n_burn) {
      out.beta.row(static_cast<Eigen::Index>(sweep - cfg.n_burn)) = beta.transpose();
      out.sigma2.push_back(sigma2);
    }
  }
  return out;
}

double PredictiveSummary::quantile(double p) const { return quantile_sorted(draws, p); }

PredictiveSummary predict(const PosteriorDraws& draws, const SeedSet& x, bool include_noise,
                          std::uint64_t seed) {
  if (x.n() != draws.num_coefficients()) {
    throw Error(ErrorCode::DimensionMismatch, "seed set length differs from coefficient count");
  }
  if (draws.num_draws() == 0) throw Error(ErrorCode::InvalidConfig, "no posterior draws");
  Rng rng = make_rng(seed, stream::kPredict, 0);
  PredictiveSummary out;
  out.draws.resize(draws.num_draws());
  for (std::size_t s = 0; s < draws.num_draws(); ++s) {
    double v = draws.y_mean;
    for (auto j : x.nodes()) v += draws.beta(static_cast<Eigen::Index>(s), j);
    if (include_noise) v += std::sqrt(draws.sigma2[s]) * dist::sample_normal(rng);
    out.draws[s] = v;
  }
  std::sort(out.draws.begin(), out.draws.end());
  out.median = quantile_sorted(out.draws, 0.5);
  return out;
}

Eigen::VectorXd posterior_medians(const PosteriorDraws& draws) {
  if (draws.num_draws() == 0) throw Error(ErrorCode::InvalidConfig, "no posterior draws");
  const auto n = static_cast<Eigen::Index>(draws.num_coefficients());
  Eigen::VectorXd med(n);
  std::vector<double> col(draws.num_draws());
  for (Eigen::Index j = 0; j < n; ++j) {
    for (std::size_t s = 0; s < col.size(); ++s) col[s] = draws.beta(static_cast<Eigen::Index>(s), j);
    std::sort(col.begin(), col.end());
    med[j] = quantile_sorted(col, 0.5);
  }
  return med;
}

void write_draws_csv(const PosteriorDraws& draws, std::ostream& out) {
  out << "sigma2";
  for (std::size_t j = 0; j < draws.num_coefficients(); ++j) out << ",beta_" << (j + 1);
  out << '\n';
  const auto old_prec = out.precision(17);
  for (std::size_t s = 0; s < draws.num_draws(); ++s) {
    out << draws.sigma2[s];
    for (std::size_t j = 0; j < draws.num_coefficients(); ++j) {
      out << ',' << draws.beta(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j));
    }
    out << '\n';
  }
  out.precision(old_prec);
}

}  // namespace bopim
