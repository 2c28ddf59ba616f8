#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "hcviz/partition.hpp"

namespace hcviz {

enum class Repulsion {
  /// Force exerted by node i is scaled by i's size (non-reciprocal).
  source_weighted,
  /// Scaled by the product of both sizes.
  symmetric_weighted,
  /// Plain Fruchterman-Reingold.
  uniform,
};

const char* to_string(Repulsion mode) noexcept;

struct LayoutConfig {
  int iterations = 300;
  /// Bounds are a square of this area.
  double area = 1.0e6;
  /// Starting temperature as a fraction of the bounds diagonal; cooled
  /// linearly to zero.
  double initial_temperature = 0.1;
  std::uint64_t seed = 0;
  bool weighted_attraction = false;
  Repulsion repulsion = Repulsion::source_weighted;
  /// Spring pulling refined children toward the parent's old position.
  double anchor_stiffness = 1.0;
  /// Fraction of the bounds covered by node disks; fixes the area scale.
  double fill = 0.2;
};

struct NodePlacement {
  std::int64_t id = 0;
  std::int64_t size = 0;
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
};

/// Positions and radii of the nodes of one quotient graph, sorted by id.
/// pi r^2 = area_scale * size for every node.
struct Layout {
  std::vector<NodePlacement> nodes;
  double width = 0.0;
  double height = 0.0;
  double area_scale = 0.0;
  LayoutConfig config;
  /// Placements removed by coarsening, keyed by the merged node, so that
  /// refining it again restores them.
  std::map<std::int64_t, std::vector<NodePlacement>> stash;

  const NodePlacement* find(std::int64_t id) const;
  const NodePlacement& at(std::int64_t id) const;
  std::vector<std::int64_t> ids() const;
};

/// Per-iteration record of a simulation.
struct LayoutTrace {
  std::vector<double> temperature;
  std::vector<double> max_displacement;
};

double radius_for_size(std::int64_t size, double area_scale);
/// k = sqrt(area / total size).
double ideal_distance(double area, std::int64_t total_size);

/// Size-weighted Fruchterman-Reingold layout of a quotient graph.
/// Repulsion on j from i is w_i k^2 / d, attraction along edges is d^2/k,
/// displacement per iteration is capped by the temperature.
Layout fr_layout(const QuotientGraph& graph, const LayoutConfig& config, LayoutTrace* trace = nullptr);

/// Lays out the children of `refined` starting on a circle around its
/// position. Every other node is frozen but still exerts forces.
/// `graph` is the quotient of the refined frontier.
Layout refine_layout(const Layout& parent, std::int64_t refined, const QuotientGraph& graph,
                     const LayoutConfig& config, LayoutTrace* trace = nullptr);

/// Replaces `merged` by `new_id` at their size-weighted centroid.
Layout coarsen_layout(const Layout& layout, std::span<const std::int64_t> merged, std::int64_t new_id);

}  // namespace hcviz
