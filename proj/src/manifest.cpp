#include "bopim/manifest.hpp"

namespace bopim {

namespace {

nlohmann::json history_json(const std::vector<EvalRecord>& history, const std::vector<NodeId>& labels) {
  auto arr = nlohmann::json::array();
  for (const auto& rec : history) {
    arr.push_back({{"x", seed_ids(rec.x, labels)},
                   {"y", rec.y.mean},
                   {"y_se", rec.y.std_err},
                   {"phase", std::string(to_string(rec.phase))}});
  }
  return arr;
}

nlohmann::json base(const ManifestHeader& h) {
  return {{"version", kManifestVersion},
          {"method", h.method},
          {"config", h.config},
          {"graph", {{"n", h.n}, {"snapshots", h.snapshots}, {"union_edges", h.union_edges}}}};
}

nlohmann::json timing_json(const std::map<std::string, double>& timing) {
  auto t = nlohmann::json::object();
  for (const auto& [k, v] : timing) t[k] = v;
  return t;
}

}  // namespace

ManifestHeader make_header(std::string method, const TemporalGraph& graph,
                           std::vector<NodeId> labels, nlohmann::json config) {
  ManifestHeader h;
  h.method = std::move(method);
  h.config = std::move(config);
  h.n = graph.num_nodes();
  h.snapshots = graph.num_snapshots();
  h.union_edges = graph.num_union_edges();
  h.labels = std::move(labels);
  return h;
}

nlohmann::json seed_ids(const SeedSet& seeds, const std::vector<NodeId>& labels) {
  auto arr = nlohmann::json::array();
  for (auto v : seeds.nodes()) arr.push_back(labels.empty() ? v : labels.at(v));
  return arr;
}

nlohmann::json run_manifest(const ManifestHeader& header, const RunResult& run) {
  auto j = base(header);
  j["history"] = history_json(run.history, header.labels);
  j["best"] = {{"seeds", seed_ids(run.best_x, header.labels)},
               {"spread_mean", run.best_spread.mean},
               {"spread_se", run.best_spread.std_err}};
  j["eval_count"] = run.eval_count;
  j["timing"] = timing_json(run.timing);
  return j;
}

nlohmann::json run_manifest(const ManifestHeader& header, const BaselineResult& run) {
  auto j = base(header);
  j["history"] = history_json(run.history, header.labels);
  j["best"] = {{"seeds", seed_ids(run.seeds, header.labels)},
               {"spread_mean", run.spread.mean},
               {"spread_se", run.spread.std_err}};
  j["eval_count"] = run.eval_count;
  j["timing"] = timing_json(run.timing);
  return j;
}

nlohmann::json without_timing(nlohmann::json manifest) {
  manifest.erase("timing");
  return manifest;
}

}  // namespace bopim
