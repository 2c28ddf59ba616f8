#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcviz/graph.hpp"
#include "hcviz/modularity.hpp"
#include "hcviz/partition.hpp"
#include "hcviz/significance.hpp"

namespace hcviz {

using TreeNodeId = std::int64_t;

enum class ClusterKind {
  root,     // whole graph, above the last admissible coarse level
  coarse,   // result of a coarsening merge
  best,     // cluster of the maximal-modularity partition
  refined,  // sub-cluster accepted by refinement
};

/// Why a cluster has no children.
enum class TerminalReason {
  none,             // has children
  too_small,        // below the minimum size for a null test
  no_edges,         // induced subgraph is edgeless
  single_cluster,   // maximizer found nothing to split
  not_significant,  // local null not cleared
  global_threshold, // split would drop full-graph Q below the threshold
  bottom_level,     // child of an exempted bottom-level split
  no_structure,     // the whole graph failed its significance test
};

const char* to_string(ClusterKind kind) noexcept;
const char* to_string(TerminalReason reason) noexcept;

struct ClusterNode {
  TreeNodeId id = 0;
  ClusterKind kind = ClusterKind::best;
  std::vector<NodeId> members;  // sorted
  TreeNodeId parent = -1;
  std::vector<TreeNodeId> children;
  int depth = 0;  // 0 at the best level, negative above it, positive below
  std::optional<double> local_q;
  std::optional<double> local_p;
  std::optional<double> local_threshold;
  TerminalReason terminal = TerminalReason::none;
};

/// One step of the coarsening chain over the best partition. Ids are
/// cluster ids of the chain: 0..k-1 for the best partition, k+i for the
/// cluster created by step i.
struct CoarseMerge {
  ClusterId first = 0;
  ClusterId second = 0;
  ClusterId merged = 0;
  double delta = 0.0;
  double q_after = 0.0;
};

/// Greedy least-loss merges of connected cluster pairs, stopping before
/// the first merge that would take Q below `threshold`. Ties go to the
/// lexicographically smallest (min id, max id).
std::vector<CoarseMerge> coarsen_chain(const Graph& graph, const Partition& best, double threshold);

struct HierarchyConfig {
  MaximizerConfig maximizer;
  std::size_t trials = 100;
  double alpha = 0.01;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::size_t min_subgraph_trials = 25;
  std::size_t min_cluster_size = 4;
  /// When false the deepest refinement level may sit below the global
  /// threshold; when true every level must clear it.
  bool strict_global = false;
  /// Replaces the Monte Carlo estimate of the global threshold.
  std::optional<double> external_threshold;
  SwapConfig swaps;
};

struct ClusterTree {
  std::vector<ClusterNode> nodes;  // indexed by id
  TreeNodeId root = 0;
  std::vector<TreeNodeId> best_level;
  /// Chain steps; merged ids are tree ids of the coarse nodes.
  std::vector<CoarseMerge> coarse_chain;
  NullDistribution global_null;
  double global_threshold = 0.0;
  double best_q = 0.0;
  /// Absent when the threshold was supplied externally.
  std::optional<double> best_p;
  std::size_t graph_nodes = 0;
  bool no_structure = false;
  /// True when the deepest level was accepted below the threshold.
  bool bottom_exempt = false;
  bool strict_global = false;
  HierarchyConfig config;

  const ClusterNode& node(TreeNodeId id) const;
  bool is_chain_merge(TreeNodeId id) const;
};

/// Outcome of testing one cluster for significant substructure.
struct RefinementDecision {
  bool accepted = false;
  TerminalReason reason = TerminalReason::none;
  /// Sub-clusters as sorted global node ids (empty unless a split exists).
  std::vector<std::vector<NodeId>> children;
  std::optional<double> local_q;
  std::optional<double> local_p;
  std::optional<double> local_threshold;
  /// Full-graph Q with the cluster replaced by its children, when checked.
  std::optional<double> global_q;
};

struct RefineContext {
  HierarchyConfig config;
  std::uint64_t seed = 0;
  /// Current full-graph level. When set with a threshold, the replacement
  /// must keep full-graph Q at or above it.
  std::optional<std::vector<ClusterId>> level_assignment;
  std::optional<double> global_threshold;
  unsigned jobs = 1;
};

/// Clusters the induced subgraph of `members` (inter-cluster edges
/// discarded) and tests the result against the subgraph's own null.
RefinementDecision refine_cluster(const Graph& graph, std::span<const NodeId> members,
                                  const RefineContext& context);

/// Full-graph null used by build_hierarchy (external when configured).
NullDistribution global_null(const Graph& graph, const HierarchyConfig& config);

ClusterTree build_hierarchy(const Graph& graph, const HierarchyConfig& config);

/// Throws Error(invalid_argument) if children do not partition parents or
/// leaves do not partition the node set.
void check_tree(const ClusterTree& tree);

/// A frontier: antichain of tree nodes covering every graph node.
struct ViewState {
  std::vector<TreeNodeId> frontier;  // sorted
  Partition partition;               // cluster i = frontier[i]
  double q = 0.0;

  friend bool operator==(const ViewState& a, const ViewState& b) { return a.frontier == b.frontier; }
};

ViewState make_view(const ClusterTree& tree, const Graph& graph, std::vector<TreeNodeId> frontier);
/// Best level, or the root of a degenerate tree.
ViewState initial_view(const ClusterTree& tree, const Graph& graph);

bool can_refine(const ClusterTree& tree, const ViewState& view, TreeNodeId node);
/// True when `target`'s children are all in the frontier and the move
/// stays within the significant levels.
bool can_coarsen(const ClusterTree& tree, const ViewState& view, TreeNodeId target);

/// Replaces `node` by its children. Errors: no_substructure on a terminal
/// node, invalid_move if `node` is not in the frontier.
ViewState refine_view(const ClusterTree& tree, const Graph& graph, const ViewState& view, TreeNodeId node);
/// Replaces the children of `target` by `target`. Errors:
/// significance_boundary when `target` is the root above the chain,
/// invalid_move when the children are not all displayed.
ViewState coarsen_view(const ClusterTree& tree, const Graph& graph, const ViewState& view, TreeNodeId target);
/// Applies the first coarse-chain step whose clusters are all displayed;
/// significance_boundary when the chain is exhausted.
ViewState coarsen_step(const ClusterTree& tree, const Graph& graph, const ViewState& view);
/// Target that coarsen_step would use, if any.
std::optional<TreeNodeId> next_coarsen_target(const ClusterTree& tree, const ViewState& view);

/// Deepest accepted level: every frontier node replaced by its
/// descendants' leaves below the best level.
std::vector<TreeNodeId> bottom_frontier(const ClusterTree& tree);

nlohmann::json hierarchy_to_json(const ClusterTree& tree);
ClusterTree hierarchy_from_json(const nlohmann::json& doc);

}  // namespace hcviz
