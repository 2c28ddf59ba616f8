#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcviz/graph.hpp"
#include "hcviz/partition.hpp"

namespace hcviz {

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// directly (series for x < a + 1, continued fraction otherwise).
double regularized_gamma_q(double a, double x);
/// Upper tail of the chi-squared distribution: Q(dof/2, x/2).
double chi2_upper_tail(double chi2, int dof);

/// Goodness-of-fit of one cluster's category counts against the global
/// proportions. Vectors are indexed like AttributeStats::categories.
struct ClusterChi2 {
  ClusterId cluster = 0;
  std::int64_t size = 0;
  double chi2 = 0.0;
  int dof = 0;
  double p = 1.0;
  /// dof <= 0: p is 1 by convention.
  bool degenerate = false;
  /// Some expected count is below 1.
  bool low_confidence = false;
  std::vector<std::int64_t> counts;
  std::vector<double> expected;
  std::vector<double> residuals;
};

struct AttributeStats {
  std::string attribute;
  /// Categories with a non-zero global count, sorted.
  std::vector<std::string> categories;
  std::vector<std::int64_t> global_counts;
  std::vector<ClusterChi2> clusters;

  std::size_t category_index(std::string_view category) const;
};

/// Per-cluster chi-squared test of `attribute` against its distribution
/// over the whole graph. E_c = n_k * G_c / N, chi2 = sum (O - E)^2 / E.
AttributeStats cluster_chi2(const Graph& graph, std::span<const ClusterId> assignment,
                            std::string_view attribute);

/// (O - E) / sqrt(E); positive means over-represented. Throws for an
/// unknown cluster or a category without expected count.
double pearson_residual(const AttributeStats& stats, ClusterId cluster, std::string_view category);

/// Cluster table (cluster, n, chi2, dof, p, flag) followed by the
/// residual matrix.
std::string format_stats_tsv(const AttributeStats& stats, std::span<const std::int64_t> cluster_ids = {});

}  // namespace hcviz
