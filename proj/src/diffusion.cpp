#include "bopim/diffusion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include <omp.h>

#include "bopim/error.hpp"

namespace bopim {

SeedSet::SeedSet(std::size_t n, std::vector<NodeId> nodes) : n_(n), nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  if (nodes_.empty()) throw Error(ErrorCode::InvalidConfig, "seed set must contain at least one node");
  if (nodes_.size() > n_) throw Error(ErrorCode::KTooLarge, "k exceeds node count");
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw Error(ErrorCode::InvalidConfig, "seed set contains a repeated node");
  }
  if (nodes_.back() >= n_) throw Error(ErrorCode::InvalidConfig, "seed node out of range");
}

SeedSet SeedSet::from_indicator(std::span<const std::uint8_t> x) {
  std::vector<NodeId> nodes;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j]) nodes.push_back(static_cast<NodeId>(j));
  }
  return SeedSet(x.size(), std::move(nodes));
}

bool SeedSet::contains(NodeId v) const noexcept {
  return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

std::vector<std::uint8_t> SeedSet::indicator() const {
  std::vector<std::uint8_t> x(n_, 0);
  for (auto v : nodes_) x[v] = 1;
  return x;
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidLambda, "infection probability must lie in [0, 1], got " +
                                              std::to_string(lambda));
  }
}

namespace {

void check_seeds(const TemporalGraph& graph, const SeedSet& seeds) {
  if (seeds.n() != graph.num_nodes()) {
    throw Error(ErrorCode::DimensionMismatch, "seed set built for " + std::to_string(seeds.n()) +
                                                  " nodes, graph has " +
                                                  std::to_string(graph.num_nodes()));
  }
}

// Reusable per-thread buffers for the cascade kernel.
struct Scratch {
  std::vector<std::uint8_t> infected;
  std::vector<NodeId> fresh;
};

std::size_t run_cascade(const TemporalGraph& graph, const SeedSet& seeds, double lambda, Rng& rng,
                        Scratch& s) {
  s.infected.assign(graph.num_nodes(), 0);
  for (auto v : seeds.nodes()) s.infected[v] = 1;
  std::size_t count = seeds.k();

  for (const auto& edges : graph.snapshots()) {
    s.fresh.clear();
    for (const auto& [a, b] : edges) {
      const std::uint8_t ia = s.infected[a];
      const std::uint8_t ib = s.infected[b];
      if (ia == ib) continue;
      if (uniform01(rng) < lambda) s.fresh.push_back(ia ? b : a);
    }
    for (auto v : s.fresh) {
      if (!s.infected[v]) {
        s.infected[v] = 1;
        ++count;
      }
    }
  }
  return count;
}

SpreadEstimate summarize(const std::vector<std::size_t>& counts) {
  SpreadEstimate est;
  est.n_sims = counts.size();
  // Integer sums keep the summary independent of reduction order.
  unsigned long long sum = 0;
  for (auto c : counts) sum += c;
  est.mean = static_cast<double>(sum) / static_cast<double>(counts.size());
  if (counts.size() > 1) {
    double ss = 0.0;
    for (auto c : counts) {
      double d = static_cast<double>(c) - est.mean;
      ss += d * d;
    }
    double var = ss / static_cast<double>(counts.size() - 1);
    est.std_err = std::sqrt(var / static_cast<double>(counts.size()));
  }
  return est;
}

void check_inputs(const TemporalGraph& graph, const SeedSet& seeds, double lambda,
                  std::size_t n_sims) {
  check_lambda(lambda);
  check_seeds(graph, seeds);
  if (n_sims < 1) throw Error(ErrorCode::InvalidConfig, "n_sims must be >= 1");
}

}  // namespace

std::size_t simulate_si(const TemporalGraph& graph, const SeedSet& seeds, double lambda, Rng& rng) {
  check_lambda(lambda);
  check_seeds(graph, seeds);
  Scratch s;
  return run_cascade(graph, seeds, lambda, rng, s);
}

SpreadEstimate estimate_spread(const TemporalGraph& graph, const SeedSet& seeds, double lambda,
                               std::size_t n_sims, std::uint64_t master_seed) {
  check_inputs(graph, seeds, lambda, n_sims);
  std::vector<std::size_t> counts(n_sims);
  const auto total = static_cast<std::int64_t>(n_sims);

#pragma omp parallel
  {
    Scratch s;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
      Rng rng = make_rng(master_seed, stream::kReplicate, static_cast<std::uint64_t>(i));
      counts[static_cast<std::size_t>(i)] = run_cascade(graph, seeds, lambda, rng, s);
    }
  }
  return summarize(counts);
}

SpreadEstimate estimate_spread_serial(const TemporalGraph& graph, const SeedSet& seeds,
                                      double lambda, std::size_t n_sims,
                                      std::uint64_t master_seed) {
  check_inputs(graph, seeds, lambda, n_sims);
  std::vector<std::size_t> counts(n_sims);
  Scratch s;
  for (std::size_t i = 0; i < n_sims; ++i) {
    Rng rng = make_rng(master_seed, stream::kReplicate, i);
    counts[i] = run_cascade(graph, seeds, lambda, rng, s);
  }
  return summarize(counts);
}

namespace {

// Round at which each node becomes able to transmit under lambda = 1:
// 0 for seeds, t + 1 when first reached in round t, max() when never.
std::vector<std::size_t> earliest_infectious_round(const TemporalGraph& graph,
                                                   const SeedSet& seeds) {
  constexpr auto kNever = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> r(graph.num_nodes(), kNever);
  for (auto v : seeds.nodes()) r[v] = 0;
  for (std::size_t t = 0; t < graph.num_snapshots(); ++t) {
    for (const auto& [a, b] : graph.snapshot(t)) {
      const bool ia = r[a] <= t;
      const bool ib = r[b] <= t;
      if (ia && !ib) r[b] = std::min(r[b], t + 1);
      if (ib && !ia) r[a] = std::min(r[a], t + 1);
    }
  }
  return r;
}

}  // namespace

std::vector<std::uint8_t> forward_reachable(const TemporalGraph& graph, const SeedSet& seeds) {
  check_seeds(graph, seeds);
  auto r = earliest_infectious_round(graph, seeds);
  std::vector<std::uint8_t> out(graph.num_nodes(), 0);
  for (std::size_t v = 0; v < r.size(); ++v) out[v] = r[v] != std::numeric_limits<std::size_t>::max();
  return out;
}

std::vector<SnapshotContact> seed_reachable_contacts(const TemporalGraph& graph,
                                                     const SeedSet& seeds) {
  check_seeds(graph, seeds);
  auto r = earliest_infectious_round(graph, seeds);
  std::vector<SnapshotContact> out;
  for (std::size_t t = 0; t < graph.num_snapshots(); ++t) {
    for (const auto& e : graph.snapshot(t)) {
      if (seeds.contains(e.first) && seeds.contains(e.second)) continue;
      if (r[e.first] <= t || r[e.second] <= t) out.push_back({t, e});
    }
  }
  return out;
}

double exact_spread(const TemporalGraph& graph, const SeedSet& seeds, double lambda,
                    std::size_t cap) {
  check_lambda(lambda);
  auto contacts = seed_reachable_contacts(graph, seeds);
  const std::size_t c = contacts.size();
  if (c > cap || c >= 63) {
    throw Error(ErrorCode::TooManyContacts, std::to_string(c) + " seed-reachable contacts exceed cap " +
                                                std::to_string(cap));
  }

  std::vector<std::uint8_t> infected(graph.num_nodes());
  std::vector<NodeId> fresh;
  double expected = 0.0;
  const std::uint64_t outcomes = std::uint64_t{1} << c;
  for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
    const int fired = std::popcount(mask);
    const double p = std::pow(lambda, fired) * std::pow(1.0 - lambda, static_cast<int>(c) - fired);
    if (p == 0.0) continue;

    std::fill(infected.begin(), infected.end(), 0);
    for (auto v : seeds.nodes()) infected[v] = 1;
    std::size_t count = seeds.k();
    std::size_t i = 0;
    while (i < c) {
      const std::size_t t = contacts[i].t;
      fresh.clear();
      for (; i < c && contacts[i].t == t; ++i) {
        const auto [a, b] = contacts[i].edge;
        if (infected[a] == infected[b]) continue;
        if (mask >> i & 1U) fresh.push_back(infected[a] ? b : a);
      }
      for (auto v : fresh) {
        if (!infected[v]) {
          infected[v] = 1;
          ++count;
        }
      }
    }
    expected += p * static_cast<double>(count);
  }
  return expected;
}

SpreadEvaluator monte_carlo_evaluator(const TemporalGraph& graph, double lambda,
                                      std::size_t n_sims, std::uint64_t seed) {
  check_lambda(lambda);
  return [&graph, lambda, n_sims, seed](const SeedSet& s, std::uint64_t eval_index) {
    return estimate_spread(graph, s, lambda, n_sims,
                           substream_seed(seed, stream::kEvaluation, eval_index));
  };
}

SpreadEvaluator exact_evaluator(const TemporalGraph& graph, double lambda, std::size_t cap) {
  check_lambda(lambda);
  return [&graph, lambda, cap](const SeedSet& s, std::uint64_t) {
    return SpreadEstimate{exact_spread(graph, s, lambda, cap), 0.0, 0};
  };
}

}  // namespace bopim
