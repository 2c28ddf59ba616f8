#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcviz/graph.hpp"

namespace hcviz {

using ClusterId = std::int32_t;

/// Assignment of every node to one of cluster_count dense cluster ids,
/// together with the modularity on the graph it was built from.
struct Partition {
  std::vector<ClusterId> assignment;
  ClusterId cluster_count = 0;
  double modularity = 0.0;

  std::vector<std::vector<NodeId>> members() const;
};

/// Relabels arbitrary non-negative labels to 0..k-1 in order of first
/// appearance.
std::vector<ClusterId> normalize_labels(std::span<const ClusterId> labels);

/// Normalizes labels and computes the modularity on `graph`.
Partition make_partition(const Graph& graph, std::span<const ClusterId> labels);

struct QuotientNode {
  std::int64_t id = 0;
  std::int64_t size = 0;
};

/// Inter-cluster edge; source/target index QuotientGraph::nodes.
struct WeightedEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  std::int64_t weight = 0;
};

struct QuotientGraph {
  std::vector<QuotientNode> nodes;
  std::vector<WeightedEdge> edges;
  /// Original edges with both endpoints in the same cluster.
  std::int64_t intra_edges = 0;

  std::int64_t total_weight() const;
  std::int64_t total_size() const;
};

/// Quotient of `graph` under a dense assignment. Node i of the result is
/// cluster i; its public id is ids[i] when ids is non-empty, i otherwise.
/// Edges are weighted by the number of original edges they aggregate.
QuotientGraph quotient_graph(const Graph& graph, std::span<const ClusterId> assignment,
                             std::span<const std::int64_t> ids = {});

/// "token<TAB>cluster" lines under a header comment carrying Q. Cluster c
/// is written as cluster_ids[c] when ids are given.
std::string format_partition_tsv(const Graph& graph, const Partition& partition,
                                 std::span<const std::int64_t> cluster_ids = {});

/// Reads a partition written by format_partition_tsv for the given graph.
Partition parse_partition_tsv(std::string_view text, const Graph& graph);

}  // namespace hcviz
