#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bopim {

using NodeId = std::uint32_t;

struct Contact {
  NodeId u;
  NodeId v;
  double t;
};

struct ContactList {
  std::vector<Contact> contacts;
  std::optional<std::size_t> n_hint;
};

struct ParseReport {
  std::size_t lines_read = 0;
  std::size_t comment_lines = 0;
  std::size_t contacts = 0;
  std::size_t self_loops_dropped = 0;
};

/// Which whitespace-separated field holds u, v and t. Fields not named are
/// ignored; a spec such as "t u v" or "u v _ t" is parsed by `parse`.
struct ColumnSpec {
  std::size_t u = 0;
  std::size_t v = 1;
  std::size_t t = 2;

  std::size_t min_fields() const noexcept;
  static ColumnSpec parse(std::string_view spec);
};

/// Reads whitespace-delimited contact lines. `#` lines and blank lines are
/// skipped, self-loops are dropped and counted.
/// Throws Error{EmptyInput} when no contact survives and Error{MalformedLine}
/// (with the 1-based line number) on a bad field.
ContactList parse_contacts(std::string_view text, const ColumnSpec& columns = {},
                           ParseReport* report = nullptr);

ContactList read_contacts_file(const std::string& path, const ColumnSpec& columns = {},
                               ParseReport* report = nullptr);

/// Maps the distinct node ids in `contacts` onto 0..n-1 in increasing order of
/// the original id, rewrites the list in place and sets n_hint. Returns the
/// original id of every dense id.
std::vector<NodeId> relabel_dense(ContactList& contacts);

using Edge = std::pair<NodeId, NodeId>;  // first < second

/// T ordered snapshots over n nodes; immutable once built.
class TemporalGraph {
 public:
  TemporalGraph(std::size_t n, std::vector<std::vector<Edge>> snapshots);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_snapshots() const noexcept { return snapshots_.size(); }
  const std::vector<Edge>& snapshot(std::size_t t) const { return snapshots_.at(t); }
  const std::vector<std::vector<Edge>>& snapshots() const noexcept { return snapshots_; }

  /// Unique edges across all snapshots (m).
  std::size_t num_union_edges() const noexcept { return union_edges_.size(); }
  const std::vector<Edge>& union_edges() const noexcept { return union_edges_; }

  /// Sum over snapshots of |E_t|.
  std::size_t num_contacts() const noexcept;

 private:
  std::size_t n_;
  std::vector<std::vector<Edge>> snapshots_;
  std::vector<Edge> union_edges_;
};

/// Splits [t_min, t_max] into T equal windows, half-open except the last.
/// When every timestamp is equal all contacts land in snapshot 0 and, if
/// `degenerate_range` is given, it is set to true.
TemporalGraph aggregate(const ContactList& contacts, std::size_t T,
                        bool* degenerate_range = nullptr);

/// Degree of each node on the union graph.
std::vector<std::size_t> aggregate_degrees(const TemporalGraph& graph);

}  // namespace bopim
