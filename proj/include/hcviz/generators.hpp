#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcviz/graph.hpp"
#include "hcviz/partition.hpp"

namespace hcviz {

/// Generated graph with the partitions it was planted with (empty when
/// there are none).
struct SyntheticGraph {
  Graph graph;
  std::vector<ClusterId> planted;
  /// Finer planted level, when the generator has one.
  std::vector<ClusterId> planted_fine;
};

/// Two cliques of `clique` nodes joined by one edge.
SyntheticGraph barbell_graph(int clique);

/// `cliques` cliques of `size` nodes; clique c holds nodes size*c ..
/// size*c+size-1 and its last node links to the first node of clique c+1
/// (cyclically).
SyntheticGraph planted_cliques(int cliques, int size);

/// G(n, p).
SyntheticGraph erdos_renyi(int n, double p, std::uint64_t seed);

/// Stochastic block model with the given block sizes.
SyntheticGraph block_model(const std::vector<int>& sizes, double p_in, double p_out, std::uint64_t seed);

struct EnrichmentSpec {
  std::string attribute = "orientation";
  std::string enriched = "BM";
  std::string other = "HT";
  /// Sub-blocks of the enriched cluster and how many enriched-category
  /// members each holds.
  std::vector<int> sub_sizes{7, 7, 7, 7, 7, 6};
  std::vector<int> sub_enriched{6, 6, 7, 7, 7, 6};
  int total_nodes = 400;
  /// Enriched-category share over the whole graph.
  double global_rate = 0.76;
  int background_block = 30;
  double p_sub = 0.9;
  double p_between_sub = 0.08;
  double p_in = 0.3;
  double p_out = 0.004;
};

/// Clustered graph with one categorical attribute: a cluster assembled from
/// dense sub-blocks with a fixed category composition, inside a background
/// of blocks labelled at random so the global rate is met exactly. planted
/// = blocks (the enriched cluster is block 0), planted_fine = sub-blocks
/// (sub-blocks of the enriched cluster first, background blocks after).
SyntheticGraph enrichment_graph(const EnrichmentSpec& spec, std::uint64_t seed);

/// Edge list text ("u v" per line, tokens as in the graph).
std::string format_edge_list(const Graph& graph);
/// Comma-separated table with a header, one row per node.
std::string format_attribute_table(const Graph& graph);

}  // namespace hcviz
