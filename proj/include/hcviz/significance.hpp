#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hcviz/graph.hpp"
#include "hcviz/modularity.hpp"

namespace hcviz {

struct SwapConfig {
  /// Attempted double-edge swaps per edge; rejected swaps count as attempts.
  double swaps_per_edge = 10.0;
};

/// Degree-preserving randomization of `tmpl` by double-edge swaps.
/// {a,b},{c,d} -> {a,c},{b,d} is applied only when it keeps the graph
/// simple. Throws when tmpl does not realize `degrees`.
Graph sample_configuration_graph(const DegreeSequence& degrees, std::uint64_t seed,
                                 const Graph& tmpl, const SwapConfig& swaps = {});

/// Maximal modularity reached on configuration-model samples.
struct NullDistribution {
  std::vector<double> samples;
  std::size_t trials = 0;
  double threshold = 0.0;
  std::uint64_t seed = 0;
  /// Threshold supplied from outside (e.g. an analytic approximation)
  /// rather than estimated from samples.
  bool external = false;
};

/// Runs `trials` independent samples (sub-seed derive_seed(seed, i)) on
/// up to `jobs` threads; the result does not depend on `jobs`.
NullDistribution null_distribution(const Graph& graph, std::size_t trials,
                                   const MaximizerConfig& config, std::uint64_t seed,
                                   unsigned jobs = 0, const SwapConfig& swaps = {});

NullDistribution external_null(double threshold);

/// Add-one Monte Carlo estimate (1 + #{samples >= q}) / (trials + 1).
double p_value(const NullDistribution& null, double q);

/// max(alpha, 1/trials): with fewer than 1/alpha trials the smallest
/// attainable p-value is above alpha, and the test degrades to "strictly
/// above every sample".
double effective_alpha(const NullDistribution& null, double alpha);

/// q > threshold and p_value(q) <= effective_alpha(alpha). For an external
/// null only the threshold comparison applies.
bool is_significant(const NullDistribution& null, double q, double alpha = 0.01);

/// Header lines (trials, seed, threshold) then one sample per line.
std::string format_null_distribution(const NullDistribution& null);
NullDistribution parse_null_distribution(std::string_view text);

}  // namespace hcviz
