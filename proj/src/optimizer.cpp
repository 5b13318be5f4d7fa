#include "bopim/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "bopim/error.hpp"

namespace bopim {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Init: return "init";
    case Phase::Acquisition: return "acquisition";
    case Phase::Greedy: return "greedy";
    case Phase::Random: return "random";
  }
  return "?";
}

void BopimConfig::validate(std::size_t n) const {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  if (k > n) {
    throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) + " exceeds node count " + std::to_string(n));
  }
  check_lambda(lambda);
  if (n0 < 1) throw Error(ErrorCode::InvalidConfig, "n0 must be >= 1");
  if (n0 + budget < 2) throw Error(ErrorCode::InvalidConfig, "n0 + B must be >= 2 to fit the surrogate");
  if (n_sims < 1) throw Error(ErrorCode::InvalidConfig, "n_sims must be >= 1");
  gibbs.validate();
}

SeedSet sample_seed_degree_proportional(std::span<const std::size_t> degrees, std::size_t k,
                                        Rng& rng) {
  const std::size_t n = degrees.size();
  if (k > n) throw Error(ErrorCode::KTooLarge, "k exceeds node count");
  std::vector<double> weight(degrees.begin(), degrees.end());
  std::vector<std::uint8_t> picked(n, 0);
  std::vector<NodeId> nodes;
  nodes.reserve(k);
  for (std::size_t draw = 0; draw < k; ++draw) {
    double mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) mass += picked[j] ? 0.0 : weight[j];
    const bool uniform = !(mass > 0.0);
    if (uniform) mass = static_cast<double>(n - draw);

    const double target = uniform01(rng) * mass;
    double acc = 0.0;
    std::size_t choice = n;
    std::size_t last_open = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (picked[j]) continue;
      const double w = uniform ? 1.0 : weight[j];
      if (w <= 0.0) continue;
      last_open = j;
      acc += w;
      if (target < acc) {
        choice = j;
        break;
      }
    }
    if (choice == n) choice = last_open;  // rounding at the top end
    picked[choice] = 1;
    nodes.push_back(static_cast<NodeId>(choice));
  }
  return SeedSet(n, std::move(nodes));
}

SeedSet sample_seed_uniform(std::size_t n, std::size_t k, Rng& rng) {
  if (k > n) throw Error(ErrorCode::KTooLarge, "k exceeds node count");
  // Partial Fisher-Yates.
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n - i));
    std::swap(perm[i], perm[std::min(j, n - 1)]);
  }
  perm.resize(k);
  return SeedSet(n, std::move(perm));
}

SeedSet top_k(const Eigen::VectorXd& values, std::size_t k) {
  const auto n = static_cast<std::size_t>(values.size());
  if (k > n) throw Error(ErrorCode::KTooLarge, "k exceeds coefficient count");
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](NodeId a, NodeId b) {
                      if (values[a] != values[b]) return values[a] > values[b];
                      return a < b;
                    });
  order.resize(k);
  return SeedSet(n, std::move(order));
}

SeedSet acquire(const PosteriorDraws& draws, std::size_t k) {
  return top_k(posterior_medians(draws), k);
}

RunResult run_bopim(const TemporalGraph& graph, const BopimConfig& cfg) {
  cfg.validate(graph.num_nodes());
  return run_bopim(graph, cfg, monte_carlo_evaluator(graph, cfg.lambda, cfg.n_sims, cfg.seed));
}

RunResult run_bopim(const TemporalGraph& graph, const BopimConfig& cfg,
                    const SpreadEvaluator& evaluate) {
  cfg.validate(graph.num_nodes());
  const auto t_start = Clock::now();
  const auto degrees = aggregate_degrees(graph);

  std::vector<EvalRecord> history;
  history.reserve(cfg.n0 + cfg.budget);
  std::uint64_t eval_index = 0;

  double t_eval = 0.0, t_fit = 0.0, t_acq = 0.0;

  Rng design_rng = make_rng(cfg.seed, stream::kSeedSampling, 0);
  for (std::size_t i = 0; i < cfg.n0; ++i) {
    SeedSet x = sample_seed_degree_proportional(degrees, cfg.k, design_rng);
    const auto t0 = Clock::now();
    SpreadEstimate y = evaluate(x, eval_index++);
    t_eval += seconds_since(t0);
    history.push_back({std::move(x), y, Phase::Init});
  }

  std::uint64_t fit_index = 0;
  auto refit = [&] {
    const auto t0 = Clock::now();
    std::vector<SeedSet> xs;
    std::vector<double> ys;
    xs.reserve(history.size());
    ys.reserve(history.size());
    for (const auto& r : history) {
      xs.push_back(r.x);
      ys.push_back(r.y.mean);
    }
    GibbsConfig gc = cfg.gibbs;
    gc.seed = substream_seed(cfg.seed, stream::kGibbs, fit_index++);
    PosteriorDraws d = fit(make_dataset(xs, ys), gc);
    t_fit += seconds_since(t0);
    return d;
  };

  PosteriorDraws draws = refit();
  for (std::size_t b = 0; b < cfg.budget; ++b) {
    const auto t0 = Clock::now();
    SeedSet x = acquire(draws, cfg.k);
    t_acq += seconds_since(t0);
    const auto t1 = Clock::now();
    SpreadEstimate y = evaluate(x, eval_index++);
    t_eval += seconds_since(t1);
    history.push_back({std::move(x), y, Phase::Acquisition});
    draws = refit();
  }

  // First maximum wins ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i].y.mean > history[best].y.mean) best = i;
  }

  RunResult result{history[best].x, history[best].y, std::move(history), std::move(draws),
                   static_cast<std::size_t>(eval_index), {}};
  result.timing["evaluation"] = t_eval;
  result.timing["fit"] = t_fit;
  result.timing["acquisition"] = t_acq;
  result.timing["total"] = seconds_since(t_start);
  return result;
}

}  // namespace bopim
