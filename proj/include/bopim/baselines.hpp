#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bopim/diffusion.hpp"
#include "bopim/optimizer.hpp"

namespace bopim {

struct BaselineResult {
  SeedSet seeds;
  SpreadEstimate spread;
  std::size_t eval_count = 0;
  std::vector<EvalRecord> history;
  std::map<std::string, double> timing;
};

/// Greedy seed selection with CELF lazy re-evaluation. The first round
/// evaluates every singleton (in parallel); afterwards a node's marginal gain
/// is recomputed only when its stale upper bound is at the top of the queue.
/// Ties go to the larger bound, then the smaller node index.
BaselineResult greedy_celf(const TemporalGraph& graph, std::size_t k,
                           const SpreadEvaluator& evaluate);

BaselineResult greedy_celf(const TemporalGraph& graph, std::size_t k, double lambda,
                           std::size_t n_sims, std::uint64_t seed);

/// Uniformly random k-subset, evaluated once.
BaselineResult random_baseline(const TemporalGraph& graph, std::size_t k, double lambda,
                               std::size_t n_sims, std::uint64_t seed);

}  // namespace bopim
