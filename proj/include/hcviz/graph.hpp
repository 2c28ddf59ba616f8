#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hcviz {

using NodeId = std::int32_t;

/// Undirected edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct DegreeSequence {
  std::vector<std::int64_t> degrees;

  std::int64_t total() const;
  friend bool operator==(const DegreeSequence&, const DegreeSequence&) = default;
};

/// Label used for nodes that have no row in an attribute table.
inline constexpr std::string_view kMissingCategory = "missing";

/// Categorical node attribute; labels[v] is node v's category.
struct Attribute {
  std::string name;
  std::vector<std::string> labels;
};

/// Simple undirected graph with dense node ids and CSR adjacency.
/// Immutable once built; safe to share across threads.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from a list of edges. Throws Error(invalid_argument)
  /// on self-loops, duplicate edges or out-of-range endpoints. Tokens
  /// default to the decimal node id.
  static Graph from_edges(std::size_t node_count, std::vector<Edge> edges,
                          std::vector<std::string> tokens = {});

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Sorted edge list (u < v, lexicographic).
  std::span<const Edge> edges() const noexcept { return edges_; }
  /// Sorted neighbors of v.
  std::span<const NodeId> neighbors(NodeId v) const;
  std::int64_t degree(NodeId v) const;
  bool has_edge(NodeId a, NodeId b) const;
  DegreeSequence degree_sequence() const;

  const std::string& token(NodeId v) const { return tokens_.at(static_cast<std::size_t>(v)); }
  std::span<const std::string> tokens() const noexcept { return tokens_; }
  std::optional<NodeId> find(std::string_view token) const;

  std::span<const Attribute> attributes() const noexcept { return attributes_; }
  const Attribute* attribute(std::string_view name) const;
  /// Copy with the attribute added (or replaced).
  Graph with_attribute(Attribute attribute) const;

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Attribute> attributes_;
};

struct EdgeListLoad {
  Graph graph;
  std::size_t duplicates_dropped = 0;
  std::size_t self_loops_dropped = 0;
};

/// Parses a whitespace-separated edge list. Tokens map to dense ids in
/// order of first appearance; '#' lines and blank lines are skipped.
EdgeListLoad load_edge_list(std::string_view text);

struct AttributeLoad {
  Graph graph;
  std::vector<std::string> warnings;
};

/// Attaches the columns of a comma- or tab-delimited table (header row
/// required, first column = node token). Unknown tokens produce warnings,
/// duplicate rows throw ParseError.
AttributeLoad load_attributes(std::string_view text, const Graph& graph);

/// Maximal connected sets, each sorted, ordered by decreasing size then
/// smallest member.
std::vector<std::vector<NodeId>> connected_components(const Graph& graph);

struct Subgraph {
  Graph graph;
  /// to_parent[local id] = id in the source graph.
  std::vector<NodeId> to_parent;
};

/// Subgraph on `nodes` (any order, duplicates ignored). Local ids follow
/// increasing parent id; tokens and attributes carry over.
Subgraph induced_subgraph(const Graph& graph, std::span<const NodeId> nodes);

Subgraph largest_component(const Graph& graph);

}  // namespace hcviz
