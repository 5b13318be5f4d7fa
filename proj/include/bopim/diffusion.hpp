#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bopim/rng.hpp"
#include "bopim/temporal_graph.hpp"

namespace bopim {

/// A seed set of exactly k distinct nodes out of n, kept sorted. Equivalent
/// to the binary indicator vector x with sum(x) = k.
class SeedSet {
 public:
  SeedSet(std::size_t n, std::vector<NodeId> nodes);
  static SeedSet from_indicator(std::span<const std::uint8_t> x);

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return nodes_.size(); }
  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  bool contains(NodeId v) const noexcept;
  std::vector<std::uint8_t> indicator() const;

  friend bool operator==(const SeedSet&, const SeedSet&) = default;

 private:
  std::size_t n_;
  std::vector<NodeId> nodes_;
};

struct SpreadEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t n_sims = 0;
};

inline constexpr std::size_t kDefaultSims = 1000;
inline constexpr std::size_t kDefaultExactCap = 20;

/// One SI cascade over the T snapshots: in round t every snapshot-t edge
/// joining a node infected before the round to a susceptible node transmits
/// with probability lambda. Nodes infected in round t start transmitting in
/// round t+1. Returns the infected count after round T.
std::size_t simulate_si(const TemporalGraph& graph, const SeedSet& seeds, double lambda, Rng& rng);

/// Monte Carlo mean and standard error over `n_sims` replicates. Replicate i
/// draws from substream i of `master_seed`, so the result does not depend on
/// the OpenMP schedule or thread count.
SpreadEstimate estimate_spread(const TemporalGraph& graph, const SeedSet& seeds, double lambda,
                               std::size_t n_sims = kDefaultSims, std::uint64_t master_seed = 0);

/// Single-threaded reference for `estimate_spread`; bit-identical output.
SpreadEstimate estimate_spread_serial(const TemporalGraph& graph, const SeedSet& seeds,
                                      double lambda, std::size_t n_sims = kDefaultSims,
                                      std::uint64_t master_seed = 0);

/// Nodes reachable from the seeds along time-respecting paths (lambda = 1).
std::vector<std::uint8_t> forward_reachable(const TemporalGraph& graph, const SeedSet& seeds);

struct SnapshotContact {
  std::size_t t;
  Edge edge;
};

/// Contacts that can ever transmit: at least one endpoint is reachable from
/// the seeds before the contact's round.
std::vector<SnapshotContact> seed_reachable_contacts(const TemporalGraph& graph,
                                                     const SeedSet& seeds);

/// Exact expected spread by enumerating all 2^C activation patterns of the C
/// seed-reachable contacts. Throws Error{TooManyContacts} when C > cap.
double exact_spread(const TemporalGraph& graph, const SeedSet& seeds, double lambda,
                    std::size_t cap = kDefaultExactCap);

/// Objective oracle used by the search procedures. `eval_index` identifies
/// the evaluation so MC evaluators can pick an independent substream.
using SpreadEvaluator = std::function<SpreadEstimate(const SeedSet&, std::uint64_t eval_index)>;

SpreadEvaluator monte_carlo_evaluator(const TemporalGraph& graph, double lambda,
                                      std::size_t n_sims, std::uint64_t seed);
SpreadEvaluator exact_evaluator(const TemporalGraph& graph, double lambda,
                                std::size_t cap = kDefaultExactCap);

void check_lambda(double lambda);

}  // namespace bopim
