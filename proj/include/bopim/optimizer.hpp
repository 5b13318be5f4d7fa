#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bopim/diffusion.hpp"
#include "bopim/shrinkage_gibbs.hpp"
#include "bopim/temporal_graph.hpp"

namespace bopim {

struct BopimConfig {
  std::size_t k = 1;
  double lambda = 0.05;
  std::size_t n0 = 20;
  std::size_t budget = 5;  // B acquisition rounds
  std::size_t n_sims = kDefaultSims;
  GibbsConfig gibbs;
  std::uint64_t seed = 1;

  /// Throws Error{KTooLarge}, Error{InvalidLambda} or Error{InvalidConfig}.
  void validate(std::size_t n) const;
};

enum class Phase { Init, Acquisition, Greedy, Random };
std::string_view to_string(Phase phase) noexcept;

struct EvalRecord {
  SeedSet x;
  SpreadEstimate y;
  Phase phase;
};

struct RunResult {
  SeedSet best_x;
  SpreadEstimate best_spread;
  std::vector<EvalRecord> history;
  PosteriorDraws draws;
  std::size_t eval_count = 0;
  std::map<std::string, double> timing;  // seconds per phase
};

/// Draws k distinct nodes one at a time, each with probability proportional
/// to its degree among the nodes not yet picked. Once the remaining degree
/// mass is zero, picks uniformly among the rest.
SeedSet sample_seed_degree_proportional(std::span<const std::size_t> degrees, std::size_t k,
                                        Rng& rng);

/// Uniform k-subset of n nodes.
SeedSet sample_seed_uniform(std::size_t n, std::size_t k, Rng& rng);

/// Seeds the k nodes with the largest values; ties go to the smaller index.
SeedSet top_k(const Eigen::VectorXd& values, std::size_t k);

/// Maximizer of x . median(beta) subject to sum(x) = k.
SeedSet acquire(const PosteriorDraws& draws, std::size_t k);

/// Degree-proportional initial design of n0 seed sets, a surrogate fit, then
/// `budget` rounds of acquire / evaluate / refit. Returns the evaluated set
/// with the largest MC mean.
RunResult run_bopim(const TemporalGraph& graph, const BopimConfig& cfg);

/// Same procedure with an injected objective.
RunResult run_bopim(const TemporalGraph& graph, const BopimConfig& cfg,
                    const SpreadEvaluator& evaluate);

}  // namespace bopim
