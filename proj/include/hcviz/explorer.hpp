#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcviz/graph.hpp"
#include "hcviz/hierarchy.hpp"
#include "hcviz/layout.hpp"
#include "hcviz/stats.hpp"

namespace hcviz {

enum class StatMode { none, p_value, residual };

/// Which attribute statistic colors the nodes of a view.
struct StatQuery {
  std::string attribute;
  StatMode mode = StatMode::none;
  std::string category;
};

StatMode parse_stat_mode(std::string_view text);
const char* to_string(StatMode mode) noexcept;

enum class ExportFormat { svg, view_json, hierarchy_json, partition_tsv, layout_json, stats_tsv };

ExportFormat parse_export_format(std::string_view text);
const char* to_string(ExportFormat format) noexcept;

/// Every knob of a pipeline run. All stage seeds derive from `seed`.
struct PipelineParams {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  double alpha = 0.01;
  bool largest_component = true;
  unsigned jobs = 0;
  std::size_t min_subgraph_trials = 25;
  std::size_t min_cluster_size = 4;
  bool strict_global = false;
  int local_move_passes = 10;
  std::optional<double> external_threshold;
  LayoutConfig layout;

  HierarchyConfig hierarchy_config() const;
  LayoutConfig layout_config() const;
  LayoutConfig refine_layout_config(TreeNodeId node) const;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static PipelineParams from_json(const nlohmann::json& doc);
  /// Throws Error(invalid_argument) for out-of-domain values.
  void validate() const;
  /// Single line echoing every effective parameter.
  std::string describe() const;
};

/// Counts collected while preparing the analysis graph.
struct IngestReport {
  std::size_t input_nodes = 0;
  std::size_t input_edges = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t components = 0;
  std::vector<std::string> warnings;
};

/// Graph ready for analysis: parsed, attributes attached and (optionally)
/// restricted to its largest component.
struct PreparedGraph {
  Graph graph;
  IngestReport report;
};

PreparedGraph prepare_graph(std::string_view edges, std::string_view attributes, bool largest_component);

/// Interactive state over one analysed graph: the cluster tree, the
/// displayed frontier with its layout, and an undo history.
class Explorer {
 public:
  using Progress = std::function<void(std::string_view stage)>;

  /// Runs the full pipeline: hierarchy, then the layout of the best level.
  static Explorer run(PreparedGraph prepared, const PipelineParams& params, const Progress& progress = {});
  /// Restores from a hierarchy-json document; replays "moves" if present.
  static Explorer from_bundle(const nlohmann::json& bundle);

  Explorer(const Explorer& other);
  Explorer& operator=(const Explorer& other);
  Explorer(Explorer&&) noexcept;
  Explorer& operator=(Explorer&&) noexcept;
  ~Explorer();

  const Graph& graph() const noexcept { return graph_; }
  const ClusterTree& tree() const noexcept { return tree_; }
  const ViewState& view() const noexcept { return view_; }
  const Layout& layout() const noexcept { return layout_; }
  const PipelineParams& params() const noexcept { return params_; }
  const IngestReport& report() const noexcept { return report_; }
  std::size_t undo_depth() const noexcept { return history_.size(); }

  void refine(TreeNodeId node);
  /// Coarsens `target`, or the next coarse-chain step when absent.
  void coarsen(std::optional<TreeNodeId> target = std::nullopt);
  void undo();
  /// Refines until every displayed cluster is terminal.
  void refine_all();

  nlohmann::json summary() const;
  nlohmann::json view_document(const StatQuery& query = {}) const;
  /// Per-cluster statistics of the current frontier (cached).
  std::shared_ptr<const AttributeStats> frontier_stats(std::string_view attribute) const;
  std::string export_document(ExportFormat format, const StatQuery& query = {}) const;
  /// hierarchy-json plus graph, params and the applied moves.
  nlohmann::json bundle(bool include_moves = false) const;

 private:
  struct Move {
    std::string op;
    std::optional<TreeNodeId> target;
  };
  struct Snapshot {
    ViewState view;
    Layout layout;
  };

  Explorer(Graph graph, ClusterTree tree, PipelineParams params, IngestReport report);
  void check_sync() const;
  void apply(const Move& move);

  Graph graph_;
  ClusterTree tree_;
  PipelineParams params_;
  IngestReport report_;
  ViewState view_;
  Layout layout_;
  std::vector<Snapshot> history_;
  std::vector<Move> moves_;

  mutable std::unique_ptr<std::mutex> cache_mutex_;
  mutable std::map<std::string, std::shared_ptr<const AttributeStats>> stats_cache_;
};

/// SVG with one circle per node and one line per edge, fitted into a
/// 1000x1000 viewbox. `colors` are the stat values (NaN for none).
std::string render_svg(const Layout& layout, const QuotientGraph& quotient, const std::vector<double>& colors,
                       StatMode mode);

}  // namespace hcviz
