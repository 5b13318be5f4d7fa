#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bopim/baselines.hpp"
#include "bopim/optimizer.hpp"
#include "bopim/temporal_graph.hpp"

namespace bopim {

/// Fields shared by every run manifest regardless of method.
struct ManifestHeader {
  std::string method;  // bopim | greedy | random
  nlohmann::json config = nlohmann::json::object();
  std::size_t n = 0;
  std::size_t snapshots = 0;
  std::size_t union_edges = 0;
  std::vector<NodeId> labels;  // original id of each dense id; empty means identity
};

ManifestHeader make_header(std::string method, const TemporalGraph& graph,
                           std::vector<NodeId> labels, nlohmann::json config);

/// Seed set as a list of original node ids.
nlohmann::json seed_ids(const SeedSet& seeds, const std::vector<NodeId>& labels);

nlohmann::json run_manifest(const ManifestHeader& header, const RunResult& run);
nlohmann::json run_manifest(const ManifestHeader& header, const BaselineResult& run);

/// Copy without the wall-clock entries; two runs with equal inputs and seed
/// give equal stripped manifests.
nlohmann::json without_timing(nlohmann::json manifest);

inline constexpr int kManifestVersion = 1;

}  // namespace bopim
