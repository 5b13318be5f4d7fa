#include "bopim/metrics_uq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <omp.h>

#include "bopim/error.hpp"
#include "bopim/quantile.hpp"

namespace bopim {

double mape(std::span<const double> y_hat, std::span<const double> y) {
  if (y_hat.size() != y.size() || y.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "mape needs two equal-length non-empty vectors");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) total += std::abs(y_hat[i] - y[i]);
  return total / static_cast<double>(y.size());
}

IntervalCoverage interval_coverage(const PosteriorDraws& draws, const std::vector<SeedSet>& x_test,
                                   std::span<const double> y_test, std::uint64_t seed) {
  if (x_test.size() != y_test.size() || x_test.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "test rows and responses differ in length");
  }
  for (const auto& x : x_test) {
    if (x.n() != draws.num_coefficients()) {
      throw Error(ErrorCode::DimensionMismatch, "test row length differs from coefficient count");
    }
  }
  const auto rows = static_cast<std::int64_t>(x_test.size());
  std::vector<std::uint8_t> inside(x_test.size());
  std::vector<double> width(x_test.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    const auto r = static_cast<std::size_t>(i);
    auto pred = predict(draws, x_test[r], true, substream_seed(seed, stream::kValidation, r));
    const double lo = pred.quantile(0.025);
    const double hi = pred.quantile(0.975);
    inside[r] = (y_test[r] > lo && y_test[r] < hi) ? 1 : 0;
    width[r] = hi - lo;
  }
  IntervalCoverage out;
  out.coverage = static_cast<double>(std::accumulate(inside.begin(), inside.end(), std::size_t{0})) /
                 static_cast<double>(rows);
  out.mean_width = std::accumulate(width.begin(), width.end(), 0.0) / static_cast<double>(rows);
  return out;
}

std::string_view to_string(Sampling sampling) noexcept {
  return sampling == Sampling::Random ? "random" : "degree";
}

Sampling parse_sampling(std::string_view name) {
  if (name == "random") return Sampling::Random;
  if (name == "degree") return Sampling::Degree;
  throw Error(ErrorCode::InvalidConfig, "unknown sampling scheme '" + std::string(name) + "' (random|degree)");
}

ValidationReport score_surrogate(const PosteriorDraws& draws, const std::vector<SeedSet>& x_test,
                                 std::span<const double> y_test, std::uint64_t seed) {
  const Eigen::VectorXd med = posterior_medians(draws);
  std::vector<double> y_hat(x_test.size());
  for (std::size_t i = 0; i < x_test.size(); ++i) {
    double v = draws.y_mean;
    for (auto j : x_test[i].nodes()) v += med[j];
    y_hat[i] = v;
  }
  ValidationReport rep;
  rep.n_test = x_test.size();
  rep.mape = mape(y_hat, y_test);
  if (y_test.size() > 1) {
    double ss = 0.0;
    for (std::size_t i = 0; i < y_test.size(); ++i) {
      const double d = std::abs(y_hat[i] - y_test[i]) - rep.mape;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(y_test.size() - 1));
    rep.mape_se = sd / std::sqrt(static_cast<double>(y_test.size()));
  }
  const auto cov = interval_coverage(draws, x_test, y_test, seed);
  rep.coverage = cov.coverage;
  rep.width = cov.mean_width;
  return rep;
}

ValidationReport validate_surrogate(const TemporalGraph& graph, const BopimConfig& cfg,
                                    std::size_t n_test, Sampling sampling, std::uint64_t seed) {
  if (n_test < 1) throw Error(ErrorCode::InvalidConfig, "n_test must be >= 1");
  RunResult run = run_bopim(graph, cfg);

  Rng rng = make_rng(seed, stream::kValidation, 0);
  const auto degrees = aggregate_degrees(graph);
  std::vector<SeedSet> x_test;
  x_test.reserve(n_test);
  for (std::size_t i = 0; i < n_test; ++i) {
    x_test.push_back(sampling == Sampling::Degree
                         ? sample_seed_degree_proportional(degrees, cfg.k, rng)
                         : sample_seed_uniform(graph.num_nodes(), cfg.k, rng));
  }
  std::vector<double> y_test(n_test);
  const std::uint64_t eval_seed = substream_seed(seed, stream::kValidation, 1);
  for (std::size_t i = 0; i < n_test; ++i) {
    y_test[i] = estimate_spread(graph, x_test[i], cfg.lambda, cfg.n_sims,
                                substream_seed(eval_seed, stream::kEvaluation, i))
                    .mean;
  }
  ValidationReport rep = score_surrogate(run.draws, x_test, y_test, substream_seed(seed, stream::kPredict, 2));
  rep.run = std::move(run);
  return rep;
}

std::vector<double> topk_inclusion_proportions(const PosteriorDraws& draws, std::size_t k) {
  const std::size_t n = draws.num_coefficients();
  const std::size_t S = draws.num_draws();
  if (S == 0) throw Error(ErrorCode::InvalidConfig, "no posterior draws");
  if (k > n) throw Error(ErrorCode::KTooLarge, "k exceeds coefficient count");
  std::vector<std::size_t> hits(n, 0);
  std::vector<NodeId> order(n);
  for (std::size_t s = 0; s < S; ++s) {
    std::iota(order.begin(), order.end(), NodeId{0});
    const auto row = draws.beta.row(static_cast<Eigen::Index>(s));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](NodeId a, NodeId b) {
                        if (row[a] != row[b]) return row[a] > row[b];
                        return a < b;
                      });
    for (std::size_t i = 0; i < k; ++i) ++hits[order[i]];
  }
  std::vector<double> prop(n);
  for (std::size_t j = 0; j < n; ++j) prop[j] = static_cast<double>(hits[j]) / static_cast<double>(S);
  return prop;
}

std::vector<BoxStats> posterior_box_stats(const PosteriorDraws& draws) {
  if (draws.num_draws() == 0) throw Error(ErrorCode::InvalidConfig, "no posterior draws");
  std::vector<BoxStats> out(draws.num_coefficients());
  std::vector<double> col(draws.num_draws());
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (std::size_t s = 0; s < col.size(); ++s) {
      col[s] = draws.beta(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j));
    }
    std::sort(col.begin(), col.end());
    out[j] = {col.front(), quantile_sorted(col, 0.25), quantile_sorted(col, 0.5),
              quantile_sorted(col, 0.75), col.back()};
  }
  return out;
}

void write_validation_csv_header(std::ostream& out) {
  out << "dataset,sampling,prior,mape,mape_se,coverage,width\n";
}

void write_validation_csv_row(std::ostream& out, const std::string& dataset, Sampling sampling,
                              Prior prior, const ValidationReport& report) {
  const auto old_prec = out.precision(6);
  out << dataset << ',' << to_string(sampling) << ',' << to_string(prior) << ',' << report.mape << ','
      << report.mape_se << ',' << report.coverage << ',' << report.width << '\n';
  out.precision(old_prec);
}

}  // namespace bopim
