#include "bopim/baselines.hpp"

#include <chrono>
#include <queue>

#include "bopim/error.hpp"

namespace bopim {

namespace {

using Clock = std::chrono::steady_clock;

struct Candidate {
  double bound;
  NodeId node;
  std::size_t round;  // |S| when `bound` was computed
};

struct CandidateOrder {
  // priority_queue pops the "largest": highest bound, then smallest index.
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.node > b.node;
  }
};

SeedSet with_node(std::size_t n, const std::vector<NodeId>& base, NodeId v) {
  std::vector<NodeId> nodes = base;
  nodes.push_back(v);
  return SeedSet(n, std::move(nodes));
}

}  // namespace

BaselineResult greedy_celf(const TemporalGraph& graph, std::size_t k,
                           const SpreadEvaluator& evaluate) {
  const std::size_t n = graph.num_nodes();
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  if (k > n) throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) + " exceeds node count " + std::to_string(n));
  const auto t_start = Clock::now();

  // Singletons use evaluation indices 0..n-1, so the parallel round is
  // schedule independent.
  std::vector<SpreadEstimate> first(n);
  std::vector<SeedSet> singles;
  singles.reserve(n);
  for (std::size_t v = 0; v < n; ++v) singles.emplace_back(n, std::vector<NodeId>{static_cast<NodeId>(v)});
  const auto total = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t v = 0; v < total; ++v) {
    first[static_cast<std::size_t>(v)] = evaluate(singles[static_cast<std::size_t>(v)], static_cast<std::uint64_t>(v));
  }

  BaselineResult result{SeedSet(n, {0}), {}, n, {}, {}};
  result.history.reserve(n + k * n);
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> queue;
  for (std::size_t v = 0; v < n; ++v) {
    result.history.push_back({singles[v], first[v], Phase::Greedy});
    queue.push({first[v].mean, static_cast<NodeId>(v), 0});
  }

  std::vector<NodeId> chosen;
  SpreadEstimate current{0.0, 0.0, 0};
  std::vector<SpreadEstimate> latest = first;  // spread of S + {v} at its last evaluation
  std::uint64_t eval_index = n;

  while (chosen.size() < k) {
    Candidate top = queue.top();
    queue.pop();
    if (top.round == chosen.size()) {
      chosen.push_back(top.node);
      current = latest[top.node];
      continue;
    }
    SeedSet trial = with_node(n, chosen, top.node);
    SpreadEstimate est = evaluate(trial, eval_index++);
    ++result.eval_count;
    latest[top.node] = est;
    result.history.push_back({std::move(trial), est, Phase::Greedy});
    queue.push({est.mean - current.mean, top.node, chosen.size()});
  }

  result.seeds = SeedSet(n, chosen);
  result.spread = current;
  result.timing["evaluation"] = std::chrono::duration<double>(Clock::now() - t_start).count();
  result.timing["total"] = result.timing["evaluation"];
  return result;
}

BaselineResult greedy_celf(const TemporalGraph& graph, std::size_t k, double lambda,
                           std::size_t n_sims, std::uint64_t seed) {
  return greedy_celf(graph, k, monte_carlo_evaluator(graph, lambda, n_sims, seed));
}

BaselineResult random_baseline(const TemporalGraph& graph, std::size_t k, double lambda,
                               std::size_t n_sims, std::uint64_t seed) {
  const std::size_t n = graph.num_nodes();
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  if (k > n) throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) + " exceeds node count " + std::to_string(n));
  check_lambda(lambda);
  const auto t_start = Clock::now();
  Rng rng = make_rng(seed, stream::kSeedSampling, 0);
  SeedSet x = sample_seed_uniform(n, k, rng);
  SpreadEstimate y = monte_carlo_evaluator(graph, lambda, n_sims, seed)(x, 0);
  BaselineResult result{x, y, 1, {{x, y, Phase::Random}}, {}};
  result.timing["evaluation"] = std::chrono::duration<double>(Clock::now() - t_start).count();
  result.timing["total"] = result.timing["evaluation"];
  return result;
}

}  // namespace bopim
