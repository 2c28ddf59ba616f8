#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "hcviz/graph.hpp"
#include "hcviz/partition.hpp"

namespace hcviz {

/// Newman modularity Q = sum_c [ e_c/m - (d_c/2m)^2 ]. Accumulates the
/// integer numerator sum_c (4m e_c - d_c^2) and divides once by 4m^2.
/// Throws Error(invalid_argument) on an edgeless graph or a bad assignment.
double modularity(const Graph& graph, std::span<const ClusterId> assignment);

/// Cached per-cluster quantities of a partition: intra-cluster edge
/// counts, degree sums and inter-cluster edge counts. All modularity
/// changes are exact integers over the common denominator 4m^2.
class ClusterLedger {
 public:
  ClusterLedger(const Graph& graph, std::span<const ClusterId> assignment);

  std::int64_t edge_count() const noexcept { return m_; }
  ClusterId cluster_count() const noexcept { return static_cast<ClusterId>(degree_.size()); }
  std::int64_t intra(ClusterId c) const { return intra_.at(static_cast<std::size_t>(c)); }
  std::int64_t degree(ClusterId c) const { return degree_.at(static_cast<std::size_t>(c)); }
  std::int64_t between(ClusterId a, ClusterId b) const;

  /// 4m^2 * Q.
  std::int64_t scaled_modularity() const;
  /// 4m^2 * (Q after merging a and b - Q) = 4m e_ab - 2 d_a d_b.
  std::int64_t scaled_merge_delta(ClusterId a, ClusterId b) const;
  double merge_delta(ClusterId a, ClusterId b) const;
  double denominator() const noexcept { return 4.0 * static_cast<double>(m_) * static_cast<double>(m_); }

 private:
  void check(ClusterId c) const;

  std::int64_t m_ = 0;
  std::vector<std::int64_t> intra_;
  std::vector<std::int64_t> degree_;
  std::map<std::pair<ClusterId, ClusterId>, std::int64_t> between_;
};

/// Q(p with a and b merged) - Q(p).
double merge_delta(const Graph& graph, const Partition& partition, ClusterId a, ClusterId b);

enum class TieBreak {
  /// Among equal gains, the pair with the smallest (min id, max id).
  lexicographic_pair,
};

struct MaximizerConfig {
  std::uint64_t seed = 0;
  /// Cap on consecutive local-move passes per round; 0 disables them.
  int local_move_passes = 10;
  TieBreak tie_break = TieBreak::lexicographic_pair;
};

/// Agglomerative modularity maximizer: from singletons, repeatedly apply
/// the best positive merge, then relocate single nodes to the adjacent
/// cluster with the best positive gain (visiting order shuffled by the
/// seed). Rounds alternate until neither step improves Q.
Partition greedy_maximize(const Graph& graph, const MaximizerConfig& config = {});

inline constexpr std::size_t kBruteForceMaxNodes = 12;

/// Globally optimal partition by enumeration of all set partitions.
/// Ties go to fewer clusters, then the lexicographically smallest
/// assignment. Refuses graphs with more than kBruteForceMaxNodes nodes.
Partition brute_force_optimal(const Graph& graph);

}  // namespace hcviz
