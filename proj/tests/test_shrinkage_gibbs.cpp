#include <doctest.h>

#include <cmath>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "bopim/error.hpp"
#include "bopim/shrinkage_gibbs.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bopim;

namespace {

const Prior kPriors[] = {Prior::Horseshoe, Prior::DirichletLaplace, Prior::R2D2};

GibbsConfig config(Prior p, std::size_t iter, std::size_t burn, std::uint64_t seed = 1) {
  GibbsConfig c;
  c.prior = p;
  c.n_iter = iter;
  c.n_burn = burn;
  c.seed = seed;
  return c;
}

std::vector<double> column(const PosteriorDraws& d, Eigen::Index j) {
  std::vector<double> v(d.num_draws());
  for (std::size_t s = 0; s < v.size(); ++s) v[s] = d.beta(static_cast<Eigen::Index>(s), j);
  return v;
}

double sd(const std::vector<double>& v) {
  double m = 0.0, ss = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_CASE("prior names") {
  CHECK(parse_prior("hs") == Prior::Horseshoe);
  CHECK(parse_prior("DL") == Prior::DirichletLaplace);
  CHECK(parse_prior("r2d2") == Prior::R2D2);
  CHECK(to_string(Prior::DirichletLaplace) == "dl");
  CHECK_THROWS_AS(parse_prior("lasso"), Error);
}

TEST_CASE("make_dataset centers y") {
  auto d = make_dataset({SeedSet(3, {0}), SeedSet(3, {2})}, {2.0, 4.0});
  CHECK(d.y_mean == 3.0);
  CHECK(d.y[0] == -1.0);
  CHECK(d.X(1, 2) == 1.0);
  CHECK(d.X.row(0).sum() == 1.0);
  CHECK_THROWS_AS(make_dataset({SeedSet(3, {0})}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(make_dataset({SeedSet(3, {0}), SeedSet(3, {0, 1})}, {1.0, 2.0}), Error);
}

TEST_CASE("R2D2 default hyperparameters") {
  GibbsConfig c;
  auto h = resolve_r2d2(c, 64, 25);
  const double expect = 1.0 / (std::sqrt(64.0) * std::pow(25.0, 0.25) * std::log(64.0));
  CHECK(h.a_pi == doctest::Approx(expect));
  CHECK(h.a == doctest::Approx(64.0 * expect));
  CHECK(h.b == 0.5);
  CHECK(resolve_r2d2(c, 2, 2).a_pi == 0.5);
  CHECK(resolve_r2d2(c, 100000, 100000).a_pi == 0.005);
  c.r2d2_a_pi = 0.1;
  CHECK(resolve_r2d2(c, 64, 25).a == doctest::Approx(6.4));
}

TEST_CASE("config validation") {
  auto d = make_dataset({SeedSet(3, {0}), SeedSet(3, {2})}, {2.0, 4.0});
  auto c = config(Prior::Horseshoe, 10, 10);
  CHECK_THROWS_AS(fit(d, c), Error);
  c = config(Prior::Horseshoe, 10, 2);
  c.noise_a = 0.0;
  CHECK_THROWS_AS(fit(d, c), Error);
  auto one = make_dataset({SeedSet(3, {0})}, {2.0});
  CHECK_THROWS_AS(fit(one, config(Prior::Horseshoe, 10, 2)), Error);
}

TEST_CASE("conjugate reduction matches the ridge posterior mean") {
  Eigen::VectorXd beta(20);
  for (int j = 0; j < 20; ++j) beta[j] = (j % 4 == 0) ? 2.0 : 0.0;
  auto reg = fixture::linear(30, 20, 3, beta, 1.0, 5);
  auto data = make_dataset(reg.x, reg.y);
  const Eigen::VectorXd truth = fixture::ridge_mean(data);
  for (Prior p : kPriors) {
    CAPTURE(to_string(p));
    auto c = config(p, 6000, 1000, 3);
    c.freeze_scales = true;
    auto draws = fit(data, c);
    REQUIRE(draws.num_draws() == 5000);
    for (Eigen::Index j = 0; j < 20; ++j) {
      auto chain = column(draws, j);
      double m = 0.0;
      for (double x : chain) m += x;
      m /= static_cast<double>(chain.size());
      CHECK(std::abs(m - truth[j]) <= 5.0 * oracle::batch_means_se(chain));
    }
  }
}

TEST_CASE("pure-noise data is shrunk below least squares") {
  auto reg = fixture::linear(30, 20, 3, Eigen::VectorXd::Zero(20), 1.0, 8);
  auto data = make_dataset(reg.x, reg.y);
  const Eigen::VectorXd ls = data.X.colPivHouseholderQr().solve(data.y);
  for (Prior p : kPriors) {
    CAPTURE(to_string(p));
    auto med = posterior_medians(fit(data, config(p, 3000, 1000, 2)));
    CHECK(med.cwiseAbs().maxCoeff() < ls.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("one strong signal is recovered") {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(20);
  beta[0] = 10.0;
  auto reg = fixture::linear(30, 20, 2, beta, 1.0, 12);
  auto data = make_dataset(reg.x, reg.y);
  for (Prior p : kPriors) {
    CAPTURE(to_string(p));
    auto draws = fit(data, config(p, 4000, 1000, 4));
    auto chain = column(draws, 0);
    const double med = oracle::quantile(chain, 0.5);
    CAPTURE(med);
    CHECK(std::abs(med - 10.0) <= 3.0 * sd(chain));
    // The signal is the top coefficient.
    auto meds = posterior_medians(draws);
    Eigen::Index arg;
    meds.maxCoeff(&arg);
    CHECK(arg == 0);
  }
}

TEST_CASE("chain state stays positive and phi sums to one") {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(15);
  beta[3] = 4.0;
  auto reg = fixture::linear(12, 15, 2, beta, 0.5, 2);
  auto data = make_dataset(reg.x, reg.y);
  for (Prior p : kPriors) {
    CAPTURE(to_string(p));
    std::size_t sweeps = 0;
    bool ok = true, phi_ok = true;
    auto obs = [&](const ChainState& s) {
      ++sweeps;
      ok = ok && s.sigma2 > 0.0 && s.global > 0.0 && s.local->minCoeff() > 0.0 && std::isfinite(s.sigma2);
      if (p == Prior::Horseshoe) ok = ok && s.xi > 0.0 && s.aux->minCoeff() > 0.0;
      if (p == Prior::R2D2) ok = ok && s.xi > 0.0;
      if (p != Prior::Horseshoe) {
        ok = ok && s.phi->minCoeff() > 0.0;
        phi_ok = phi_ok && std::abs(s.phi->sum() - 1.0) < 1e-9;
      }
      ok = ok && s.beta->allFinite();
    };
    fit(data, config(p, 800, 100), obs);
    CHECK(sweeps == 800);
    CHECK(ok);
    CHECK(phi_ok);
  }
}

TEST_CASE("fit is deterministic given the seed") {
  auto reg = fixture::linear(10, 6, 2, Eigen::VectorXd::Ones(6), 1.0, 1);
  auto data = make_dataset(reg.x, reg.y);
  for (Prior p : kPriors) {
    auto a = fit(data, config(p, 300, 100, 9));
    auto b = fit(data, config(p, 300, 100, 9));
    auto c = fit(data, config(p, 300, 100, 10));
    CHECK(a.beta == b.beta);
    CHECK(a.sigma2 == b.sigma2);
    CHECK(a.beta != c.beta);
    CHECK(*std::min_element(a.sigma2.begin(), a.sigma2.end()) > 0.0);
  }
}

TEST_CASE("doubling the chain keeps the conjugate mean") {
  auto reg = fixture::linear(30, 10, 3, Eigen::VectorXd::LinSpaced(10, -2.0, 2.0), 1.0, 6);
  auto data = make_dataset(reg.x, reg.y);
  auto c = config(Prior::Horseshoe, 3000, 500, 1);
  c.freeze_scales = true;
  auto a = fit(data, c);
  c.n_iter = 6000;
  c.seed = 2;
  auto b = fit(data, c);
  for (Eigen::Index j = 0; j < 10; ++j) {
    auto ca = column(a, j), cb = column(b, j);
    double ma = 0.0, mb = 0.0;
    for (double x : ca) ma += x;
    for (double x : cb) mb += x;
    ma /= static_cast<double>(ca.size());
    mb /= static_cast<double>(cb.size());
    CHECK(std::abs(ma - mb) <= 5.0 * std::hypot(oracle::batch_means_se(ca), oracle::batch_means_se(cb)));
  }
}

TEST_CASE("predict") {
  PosteriorDraws d;
  d.beta = Eigen::MatrixXd::Zero(10, 3);
  d.beta.col(0).setOnes();
  d.sigma2.assign(10, 1.0);
  auto p = predict(d, SeedSet(3, {0}), false);
  CHECK(p.median == 1.0);
  CHECK(p.quantile(0.025) == 1.0);
  CHECK(p.quantile(0.975) == 1.0);
  CHECK_THROWS_AS(predict(d, SeedSet(4, {0}), false), Error);

  d.y_mean = 2.0;
  auto noisy = predict(d, SeedSet(3, {0, 1}), true, 5);
  CHECK(noisy.draws.size() == 10);
  CHECK(std::is_sorted(noisy.draws.begin(), noisy.draws.end()));
  CHECK(noisy.quantile(0.025) <= noisy.median);
  CHECK(noisy.median <= noisy.quantile(0.975));
  CHECK(noisy.quantile(0.025) < noisy.quantile(0.975));
}

TEST_CASE("conjugate reduction matches the analytic sigma2 marginal and predictive") {
  // With S = I the joint posterior is normal-inverse-gamma:
  //   sigma2 | y ~ IG(a1 + N/2, b1 + (y'y - m'Pm)/2),  P = X'X + I,  m = P^-1 X'y,
  //   y* | y ~ t_{2 aN}(y_mean + x m, bN/aN (1 + x'P^-1 x)).
  Eigen::VectorXd beta(12);
  for (int j = 0; j < 12; ++j) beta[j] = 0.4 * (j % 4) - 0.6;
  auto reg = fixture::linear(25, 12, 3, beta, 1.2, 17);
  auto data = make_dataset(reg.x, reg.y);
  Eigen::MatrixXd P = data.X.transpose() * data.X;
  P.diagonal().array() += 1.0;
  const Eigen::VectorXd m = P.ldlt().solve(data.X.transpose() * data.y);
  const double aN = 1.0 + 25.0 / 2.0;
  const double bN = 1.0 + 0.5 * (data.y.squaredNorm() - m.dot(P * m));

  auto c = config(Prior::DirichletLaplace, 22000, 2000, 5);
  c.freeze_scales = true;
  auto draws = fit(data, c);
  double mean_s2 = 0.0;
  for (double v : draws.sigma2) mean_s2 += v;
  mean_s2 /= static_cast<double>(draws.sigma2.size());
  CHECK(std::abs(mean_s2 - bN / (aN - 1.0)) <= 5.0 * oracle::batch_means_se(draws.sigma2));

  const SeedSet x(12, {1, 6, 11});
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(12);
  for (auto j : x.nodes()) xi[j] = 1.0;
  const double loc = data.y_mean + xi.dot(m);
  const double scale = std::sqrt(bN / aN * (1.0 + xi.dot(P.ldlt().solve(xi))));
  boost::math::students_t t(2.0 * aN);
  auto p = predict(draws, x, true, 3);
  for (double q : {0.025, 0.5, 0.975}) {
    const double analytic = loc + scale * boost::math::quantile(t, q);
    const double dens = boost::math::pdf(t, (analytic - loc) / scale) / scale;
    const double se = std::sqrt(q * (1.0 - q) / static_cast<double>(p.draws.size())) / dens;
    CAPTURE(q);
    CHECK(std::abs(p.quantile(q) - analytic) <= 5.0 * se);
  }
}

TEST_CASE("prediction intervals cover held-out data from the true model") {
  const double cov = fixture::calibration_coverage(
      200, 30, 20, 3, 41, [](const PosteriorDraws& d, const SeedSet& x, double y, std::size_t r) {
        auto p = predict(d, x, true, r);
        return y > p.quantile(0.025) && y < p.quantile(0.975);
      });
  CAPTURE(cov);
  CHECK(cov >= 0.90);
  CHECK(cov <= 0.99);
}

TEST_CASE("noise-free predictions on training rows stay in the observed range") {
  Eigen::VectorXd beta(20);
  for (int j = 0; j < 20; ++j) beta[j] = 0.3 * (j % 5);
  auto train = fixture::linear(30, 20, 3, beta, 1.0, 31);
  for (Prior p : kPriors) {
    auto draws = fit(make_dataset(train.x, train.y), config(p, 2000, 500, 7));
    const double lo = *std::min_element(train.y.begin(), train.y.end());
    const double hi = *std::max_element(train.y.begin(), train.y.end());
    for (const auto& x : train.x) {
      const double m = predict(draws, x, false).median;
      CHECK(m >= lo);
      CHECK(m <= hi);
    }
  }
}

TEST_CASE("posterior medians") {
  PosteriorDraws one;
  one.beta = Eigen::MatrixXd(1, 2);
  one.beta << 3.0, -1.0;
  one.sigma2 = {1.0};
  CHECK(posterior_medians(one) == one.beta.row(0).transpose());

  PosteriorDraws three;
  three.beta = Eigen::MatrixXd(3, 1);
  three.beta << 2.0, 0.0, 1.0;
  three.sigma2 = {1.0, 1.0, 1.0};
  CHECK(posterior_medians(three)[0] == 1.0);

  Rng rng(4);
  for (int rep = 0; rep < 5; ++rep) {
    PosteriorDraws d;
    d.beta = Eigen::MatrixXd(100, 10);
    for (Eigen::Index i = 0; i < d.beta.size(); ++i) d.beta.data()[i] = dist::sample_normal(rng);
    d.sigma2.assign(100, 1.0);
    auto med = posterior_medians(d);
    for (Eigen::Index j = 0; j < 10; ++j) CHECK(med[j] == doctest::Approx(oracle::quantile(column(d, j), 0.5)).epsilon(1e-14));
  }
}

TEST_CASE("draw dump has one row per retained sweep") {
  auto reg = fixture::linear(10, 4, 1, Eigen::VectorXd::Ones(4), 1.0, 1);
  auto draws = fit(make_dataset(reg.x, reg.y), config(Prior::R2D2, 250, 50));
  std::ostringstream os;
  write_draws_csv(draws, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "sigma2,beta_1,beta_2,beta_3,beta_4");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 200);
}
