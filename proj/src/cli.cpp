#include "bopim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "bopim/baselines.hpp"
#include "bopim/error.hpp"
#include "bopim/manifest.hpp"
#include "bopim/metrics_uq.hpp"
#include "bopim/optimizer.hpp"
#include "bopim/synthetic.hpp"
#include "bopim/temporal_graph.hpp"

namespace bopim {

namespace {

struct GraphOptions {
  std::string path;
  std::string columns = "u v t";
  std::size_t snapshots = 10;
  bool no_relabel = false;
};

struct RunOptions {
  std::size_t k = 0;
  double lambda = 0.05;
  std::size_t sims = kDefaultSims;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
};

struct SurrogateOptions {
  std::string prior = "hs";
  std::size_t n0 = 20;
  std::size_t b = 5;
  std::size_t iter = 6000;
  std::size_t burn = 1000;
};

struct LoadedGraph {
  TemporalGraph graph;
  std::vector<NodeId> labels;
};

void add_graph_options(CLI::App* cmd, GraphOptions& g) {
  cmd->add_option("--graph", g.path, "Contact list: one 'u v t' line per contact")->required();
  cmd->add_option("--columns", g.columns, "Column order of the contact file, e.g. \"t u v\"")
      ->capture_default_str();
  cmd->add_option("--snapshots,-T", g.snapshots, "Number of equal-duration snapshots")->capture_default_str();
  cmd->add_flag("--no-relabel", g.no_relabel, "Keep raw node ids (n = 1 + max id)");
}

void add_run_options(CLI::App* cmd, RunOptions& r, bool need_k = true) {
  auto* k = cmd->add_option("--k", r.k, "Seed set size");
  if (need_k) k->required();
  cmd->add_option("--lambda", r.lambda, "Infection probability per contact")->capture_default_str();
  cmd->add_option("--sims", r.sims, "Monte Carlo replicates per evaluation")->capture_default_str();
  cmd->add_option("--seed", r.seed, "Master random seed")->capture_default_str();
  cmd->add_option("--threads", r.threads, "OpenMP threads (0 = runtime default)")->capture_default_str();
}

void add_surrogate_options(CLI::App* cmd, SurrogateOptions& s) {
  cmd->add_option("--prior", s.prior, "Shrinkage prior: hs, dl or r2d2")->capture_default_str();
  cmd->add_option("--n0", s.n0, "Initial degree-proportional samples")->capture_default_str();
  cmd->add_option("--b", s.b, "Acquisition rounds")->capture_default_str();
  cmd->add_option("--iter", s.iter, "Gibbs sweeps per fit")->capture_default_str();
  cmd->add_option("--burn", s.burn, "Burn-in sweeps per fit")->capture_default_str();
}

LoadedGraph load_graph(const GraphOptions& g) {
  ContactList contacts = read_contacts_file(g.path, ColumnSpec::parse(g.columns));
  std::vector<NodeId> labels;
  if (!g.no_relabel) labels = relabel_dense(contacts);
  return {aggregate(contacts, g.snapshots), std::move(labels)};
}

BopimConfig make_bopim_config(const RunOptions& r, const SurrogateOptions& s) {
  BopimConfig cfg;
  cfg.k = r.k;
  cfg.lambda = r.lambda;
  cfg.n0 = s.n0;
  cfg.budget = s.b;
  cfg.n_sims = r.sims;
  cfg.seed = r.seed;
  cfg.gibbs.prior = parse_prior(s.prior);
  cfg.gibbs.n_iter = s.iter;
  cfg.gibbs.n_burn = s.burn;
  return cfg;
}

nlohmann::json config_json(const GraphOptions& g, const RunOptions& r) {
  return {{"graph", g.path},       {"columns", g.columns}, {"snapshots", g.snapshots},
          {"relabel", !g.no_relabel}, {"k", r.k},           {"lambda", r.lambda},
          {"n_sims", r.sims},      {"seed", r.seed}};
}

nlohmann::json config_json(const GraphOptions& g, const RunOptions& r, const SurrogateOptions& s) {
  auto j = config_json(g, r);
  j["prior"] = std::string(to_string(parse_prior(s.prior)));
  j["n0"] = s.n0;
  j["b"] = s.b;
  j["n_iter"] = s.iter;
  j["n_burn"] = s.burn;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  f << text;
  if (text.empty() || text.back() != '\n') f << '\n';
  if (!f) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

void emit_json(const nlohmann::json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_text(path, j.dump(2) + "\n");
  }
}

std::string format_ids(const nlohmann::json& ids) {
  std::ostringstream s;
  s << '[';
  for (std::size_t i = 0; i < ids.size(); ++i) s << (i ? "," : "") << ids[i].get<long long>();
  s << ']';
  return s.str();
}

void print_summary(std::ostream& out, const nlohmann::json& m) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << m["method"].get<std::string>() << ": seeds " << format_ids(m["best"]["seeds"]) << " spread "
    << m["best"]["spread_mean"].get<double>() << " (se " << m["best"]["spread_se"].get<double>()
    << "), " << m["eval_count"].get<std::size_t>() << " evaluations, "
    << m["timing"].value("total", 0.0) << " s";
  out << s.str() << '\n';
}

void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

SeedSet parse_seed_list(const std::string& list, const LoadedGraph& lg) {
  std::vector<NodeId> nodes;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    long long raw = 0;
    try {
      raw = std::stoll(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "bad seed id '" + item + "'");
    }
    if (raw < 0) throw Error(ErrorCode::InvalidConfig, "negative seed id");
    auto id = static_cast<NodeId>(raw);
    if (lg.labels.empty()) {
      nodes.push_back(id);
    } else {
      auto it = std::lower_bound(lg.labels.begin(), lg.labels.end(), id);
      if (it == lg.labels.end() || *it != id) {
        throw Error(ErrorCode::InvalidConfig, "seed id " + item + " not in graph");
      }
      nodes.push_back(static_cast<NodeId>(it - lg.labels.begin()));
    }
  }
  return SeedSet(lg.graph.num_nodes(), std::move(nodes));
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput:
    case ErrorCode::MalformedLine:
    case ErrorCode::Io:
      return kExitInputError;
    case ErrorCode::FactorizationFailure:
    case ErrorCode::TooManyContacts:
      return kExitNumericError;
    default:
      return kExitConfigError;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian optimization for influence maximization on temporal networks", "bopim"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML key = value file; command-line flags take precedence");

  GraphOptions g;
  RunOptions r;
  SurrogateOptions s;

  auto* optimize = app.add_subcommand("optimize", "Run the Bayesian optimization search");
  add_graph_options(optimize, g);
  add_run_options(optimize, r);
  add_surrogate_options(optimize, s);
  optimize->add_option("--out", r.out, "Run manifest path (JSON)");

  auto* greedy = app.add_subcommand("greedy", "Greedy seed selection with CELF");
  add_graph_options(greedy, g);
  add_run_options(greedy, r);
  greedy->add_option("--out", r.out, "Run manifest path (JSON)");

  auto* random = app.add_subcommand("random", "Uniformly random seed set");
  add_graph_options(random, g);
  add_run_options(random, r);
  random->add_option("--out", r.out, "Run manifest path (JSON)");

  std::size_t ntest = kDefaultTestSets;
  std::string sampling = "degree";
  std::string dataset;
  auto* validate = app.add_subcommand("validate", "Out-of-sample check of the fitted surrogate");
  add_graph_options(validate, g);
  add_run_options(validate, r);
  add_surrogate_options(validate, s);
  validate->add_option("--ntest", ntest, "Number of test seed sets")->capture_default_str();
  validate->add_option("--sampling", sampling, "Test-set sampling: random or degree")->capture_default_str();
  validate->add_option("--dataset", dataset, "Dataset name for the report (default: graph file stem)");
  validate->add_option("--out", r.out, "Report CSV path (default: stdout)");

  std::string draws_out, csv_out;
  auto* uq = app.add_subcommand("uq", "Posterior box statistics and top-k inclusion proportions");
  add_graph_options(uq, g);
  add_run_options(uq, r);
  add_surrogate_options(uq, s);
  uq->add_option("--out", r.out, "Summary JSON path (default: stdout)");
  uq->add_option("--csv-out", csv_out, "Per-node summary CSV path");
  uq->add_option("--draws-out", draws_out, "Raw posterior draws CSV path");

  std::string seed_list;
  bool exact = false;
  std::size_t exact_cap = kDefaultExactCap;
  auto* simulate = app.add_subcommand("simulate", "Estimate the spread of a given seed set");
  add_graph_options(simulate, g);
  add_run_options(simulate, r, false);
  simulate->add_option("--seeds", seed_list, "Comma-separated seed node ids")->required();
  simulate->add_flag("--exact", exact, "Also compute the exact expectation by enumeration");
  simulate->add_option("--exact-cap", exact_cap, "Contact cap for --exact")->capture_default_str();
  simulate->add_option("--out", r.out, "Result JSON path (default: stdout)");

  ProximityModel model;
  std::string gen_out;
  std::uint64_t gen_seed = 1;
  auto* generate = app.add_subcommand("generate", "Write a synthetic proximity-style contact list");
  generate->add_option("--nodes", model.n, "Node count")->capture_default_str();
  generate->add_option("--steps", model.steps, "Time steps")->capture_default_str();
  generate->add_option("--groups", model.groups, "Number of groups")->capture_default_str();
  generate->add_option("--within", model.within_group, "Within-group contact probability")->capture_default_str();
  generate->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  generate->add_option("--out", gen_out, "Output path")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    apply_threads(r.threads);

    if (generate->parsed()) {
      ContactList c = generate_proximity_contacts(model, gen_seed);
      std::ostringstream text;
      text << "# synthetic proximity contacts: n=" << model.n << " steps=" << model.steps
           << " groups=" << model.groups << " seed=" << gen_seed << "\n";
      for (const auto& ct : c.contacts) text << ct.u << ' ' << ct.v << ' ' << ct.t << '\n';
      write_text(gen_out, text.str());
      out << "wrote " << c.contacts.size() << " contacts to " << gen_out << '\n';
      return kExitOk;
    }

    LoadedGraph lg = load_graph(g);

    if (optimize->parsed()) {
      BopimConfig cfg = make_bopim_config(r, s);
      RunResult run = run_bopim(lg.graph, cfg);
      auto manifest = run_manifest(make_header("bopim", lg.graph, lg.labels, config_json(g, r, s)), run);
      if (!r.out.empty()) write_text(r.out, manifest.dump(2) + "\n");
      print_summary(out, manifest);
      return kExitOk;
    }
    if (greedy->parsed()) {
      BaselineResult run = greedy_celf(lg.graph, r.k, r.lambda, r.sims, r.seed);
      auto manifest = run_manifest(make_header("greedy", lg.graph, lg.labels, config_json(g, r)), run);
      if (!r.out.empty()) write_text(r.out, manifest.dump(2) + "\n");
      print_summary(out, manifest);
      return kExitOk;
    }
    if (random->parsed()) {
      BaselineResult run = random_baseline(lg.graph, r.k, r.lambda, r.sims, r.seed);
      auto manifest = run_manifest(make_header("random", lg.graph, lg.labels, config_json(g, r)), run);
      if (!r.out.empty()) write_text(r.out, manifest.dump(2) + "\n");
      print_summary(out, manifest);
      return kExitOk;
    }
    if (validate->parsed()) {
      BopimConfig cfg = make_bopim_config(r, s);
      const Sampling scheme = parse_sampling(sampling);
      ValidationReport rep = validate_surrogate(lg.graph, cfg, ntest, scheme, r.seed);
      if (dataset.empty()) dataset = std::filesystem::path(g.path).stem().string();
      std::ostringstream csv;
      write_validation_csv_header(csv);
      write_validation_csv_row(csv, dataset, scheme, cfg.gibbs.prior, rep);
      if (r.out.empty()) {
        out << csv.str();
      } else {
        write_text(r.out, csv.str());
      }
      return kExitOk;
    }
    if (uq->parsed()) {
      BopimConfig cfg = make_bopim_config(r, s);
      RunResult run = run_bopim(lg.graph, cfg);
      const auto box = posterior_box_stats(run.draws);
      const auto prop = topk_inclusion_proportions(run.draws, cfg.k);
      const double total = std::accumulate(prop.begin(), prop.end(), 0.0);
      if (std::abs(total - static_cast<double>(cfg.k)) > 1e-9 * static_cast<double>(cfg.k)) {
        throw Error(ErrorCode::InvalidConfig, "top-k proportions do not sum to k");
      }
      auto nodes = nlohmann::json::array();
      std::ostringstream csv;
      csv.precision(10);
      csv << "node,min,q1,median,q3,max,topk_proportion\n";
      for (std::size_t j = 0; j < box.size(); ++j) {
        const auto id = lg.labels.empty() ? static_cast<NodeId>(j) : lg.labels[j];
        nodes.push_back({{"id", id},
                         {"min", box[j].min},
                         {"q1", box[j].q1},
                         {"median", box[j].median},
                         {"q3", box[j].q3},
                         {"max", box[j].max},
                         {"topk_proportion", prop[j]}});
        csv << id << ',' << box[j].min << ',' << box[j].q1 << ',' << box[j].median << ','
            << box[j].q3 << ',' << box[j].max << ',' << prop[j] << '\n';
      }
      nlohmann::json summary = {{"config", config_json(g, r, s)},
                                {"k", cfg.k},
                                {"draws", run.draws.num_draws()},
                                {"best_seeds", seed_ids(run.best_x, lg.labels)},
                                {"acquired_seeds", seed_ids(acquire(run.draws, cfg.k), lg.labels)},
                                {"nodes", nodes}};
      emit_json(summary, r.out, out);
      if (!csv_out.empty()) write_text(csv_out, csv.str());
      if (!draws_out.empty()) {
        std::ostringstream d;
        write_draws_csv(run.draws, d);
        write_text(draws_out, d.str());
      }
      return kExitOk;
    }
    if (simulate->parsed()) {
      SeedSet seeds = parse_seed_list(seed_list, lg);
      SpreadEstimate est = estimate_spread(lg.graph, seeds, r.lambda, r.sims, r.seed);
      nlohmann::json j = {{"seeds", seed_ids(seeds, lg.labels)},
                          {"lambda", r.lambda},
                          {"mean", est.mean},
                          {"std_err", est.std_err},
                          {"n_sims", est.n_sims}};
      if (exact) j["exact"] = exact_spread(lg.graph, seeds, r.lambda, exact_cap);
      emit_json(j, r.out, out);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace bopim
