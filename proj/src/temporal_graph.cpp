#include "bopim/temporal_graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "bopim/error.hpp"

namespace bopim {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string line_error(std::size_t line_no, std::string_view msg) {
  return "line " + std::to_string(line_no) + ": " + std::string(msg);
}

NodeId parse_node(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() ||
      value > std::numeric_limits<NodeId>::max() - 1) {
    throw Error(ErrorCode::MalformedLine,
                line_error(line_no, "invalid node id '" + std::string(field) + "'"));
  }
  return static_cast<NodeId>(value);
}

double parse_time(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::MalformedLine,
                line_error(line_no, "invalid timestamp '" + std::string(field) + "'"));
  }
  return value;
}

}  // namespace

std::size_t ColumnSpec::min_fields() const noexcept { return std::max({u, v, t}) + 1; }

ColumnSpec ColumnSpec::parse(std::string_view spec) {
  ColumnSpec cols;
  bool seen_u = false, seen_v = false, seen_t = false;
  auto tokens = split_ws(spec);
  if (tokens.size() == 1 && tokens[0].find(',') != std::string_view::npos) {
    // Accept "u,v,t" as well.
    std::string_view s = tokens[0];
    tokens.clear();
    std::size_t start = 0;
    while (start <= s.size()) {
      auto comma = s.find(',', start);
      if (comma == std::string_view::npos) comma = s.size();
      tokens.push_back(s.substr(start, comma - start));
      start = comma + 1;
    }
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto tok = tokens[i];
    auto claim = [&](bool& seen, std::size_t& slot) {
      if (seen) throw Error(ErrorCode::InvalidConfig, "column '" + std::string(tok) + "' repeated");
      seen = true;
      slot = i;
    };
    if (tok == "u") {
      claim(seen_u, cols.u);
    } else if (tok == "v") {
      claim(seen_v, cols.v);
    } else if (tok == "t") {
      claim(seen_t, cols.t);
    } else if (tok != "_" && tok != "-") {
      throw Error(ErrorCode::InvalidConfig, "unknown column name '" + std::string(tok) + "'");
    }
  }
  if (!(seen_u && seen_v && seen_t)) {
    throw Error(ErrorCode::InvalidConfig, "column spec must name u, v and t");
  }
  return cols;
}

ContactList parse_contacts(std::string_view text, const ColumnSpec& columns, ParseReport* report) {
  ContactList out;
  ParseReport local;
  const std::size_t need = columns.min_fields();

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    ++local.lines_read;

    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.front().front() == '#') {
      ++local.comment_lines;
      continue;
    }
    if (fields.size() < need) {
      throw Error(ErrorCode::MalformedLine,
                  line_error(line_no, "expected at least " + std::to_string(need) + " fields"));
    }
    NodeId u = parse_node(fields[columns.u], line_no);
    NodeId v = parse_node(fields[columns.v], line_no);
    double t = parse_time(fields[columns.t], line_no);
    if (u == v) {
      ++local.self_loops_dropped;
      continue;
    }
    out.contacts.push_back({u, v, t});
  }
  local.contacts = out.contacts.size();
  if (report) *report = local;
  if (out.contacts.empty()) throw Error(ErrorCode::EmptyInput, "no valid contact lines");
  return out;
}

ContactList read_contacts_file(const std::string& path, const ColumnSpec& columns,
                               ParseReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_contacts(buf.str(), columns, report);
}

std::vector<NodeId> relabel_dense(ContactList& contacts) {
  std::vector<NodeId> ids;
  ids.reserve(contacts.contacts.size() * 2);
  for (const auto& c : contacts.contacts) {
    ids.push_back(c.u);
    ids.push_back(c.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto dense = [&](NodeId id) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  for (auto& c : contacts.contacts) {
    c.u = dense(c.u);
    c.v = dense(c.v);
  }
  contacts.n_hint = ids.size();
  return ids;
}

TemporalGraph::TemporalGraph(std::size_t n, std::vector<std::vector<Edge>> snapshots)
    : n_(n), snapshots_(std::move(snapshots)) {
  if (n_ < 1) throw Error(ErrorCode::InvalidConfig, "graph needs at least one node");
  if (snapshots_.empty()) throw Error(ErrorCode::InvalidT, "graph needs at least one snapshot");
  for (auto& edges : snapshots_) {
    for (auto& e : edges) {
      if (e.first == e.second) throw Error(ErrorCode::InvalidConfig, "self-loop in snapshot");
      if (e.first > e.second) std::swap(e.first, e.second);
      if (e.second >= n_) throw Error(ErrorCode::InvalidConfig, "edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    union_edges_.insert(union_edges_.end(), edges.begin(), edges.end());
  }
  std::sort(union_edges_.begin(), union_edges_.end());
  union_edges_.erase(std::unique(union_edges_.begin(), union_edges_.end()), union_edges_.end());
}

std::size_t TemporalGraph::num_contacts() const noexcept {
  std::size_t total = 0;
  for (const auto& e : snapshots_) total += e.size();
  return total;
}

TemporalGraph aggregate(const ContactList& contacts, std::size_t T, bool* degenerate_range) {
  if (T < 1) throw Error(ErrorCode::InvalidT, "snapshot count must be >= 1");
  if (contacts.contacts.empty()) throw Error(ErrorCode::EmptyInput, "no contacts to aggregate");

  double t_min = contacts.contacts.front().t;
  double t_max = t_min;
  NodeId max_id = 0;
  for (const auto& c : contacts.contacts) {
    t_min = std::min(t_min, c.t);
    t_max = std::max(t_max, c.t);
    max_id = std::max({max_id, c.u, c.v});
  }
  std::size_t n = static_cast<std::size_t>(max_id) + 1;
  if (contacts.n_hint) {
    if (*contacts.n_hint < n) {
      throw Error(ErrorCode::InvalidConfig, "declared node count smaller than largest node id");
    }
    n = *contacts.n_hint;
  }

  const bool degenerate = (t_max == t_min);
  if (degenerate_range) *degenerate_range = degenerate && T > 1;
  const double span = t_max - t_min;

  std::vector<std::vector<Edge>> snapshots(T);
  for (const auto& c : contacts.contacts) {
    std::size_t w = 0;
    if (!degenerate) {
      double pos = (c.t - t_min) / span * static_cast<double>(T);
      w = std::min(static_cast<std::size_t>(std::floor(pos)), T - 1);
    }
    snapshots[w].emplace_back(std::min(c.u, c.v), std::max(c.u, c.v));
  }
  return TemporalGraph(n, std::move(snapshots));
}

std::vector<std::size_t> aggregate_degrees(const TemporalGraph& graph) {
  std::vector<std::size_t> d(graph.num_nodes(), 0);
  for (const auto& [a, b] : graph.union_edges()) {
    ++d[a];
    ++d[b];
  }
  return d;
}

}  // namespace bopim
