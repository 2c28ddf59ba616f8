#include "hcviz/significance.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "hcviz/error.hpp"
#include "hcviz/parallel.hpp"
#include "hcviz/random.hpp"
#include "text.hpp"

namespace hcviz {

namespace {

std::uint64_t edge_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

Graph sample_configuration_graph(const DegreeSequence& degrees, std::uint64_t seed,
                                 const Graph& tmpl, const SwapConfig& swaps) {
  if (tmpl.degree_sequence() != degrees) {
    throw Error(ErrorKind::invalid_argument, "template graph does not realize the degree sequence");
  }
  if (degrees.total() % 2 != 0) {
    throw Error(ErrorKind::invalid_argument, "degree sum is odd");
  }

  std::vector<Edge> edges(tmpl.edges().begin(), tmpl.edges().end());
  const std::size_t m = edges.size();
  std::vector<std::string> tokens(tmpl.tokens().begin(), tmpl.tokens().end());
  if (m < 2) return Graph::from_edges(tmpl.node_count(), std::move(edges), std::move(tokens));

  std::unordered_set<std::uint64_t> present;
  present.reserve(2 * m);
  for (const auto& e : edges) present.insert(edge_key(e.u, e.v));

  Rng rng(seed);
  const auto attempts = static_cast<std::uint64_t>(std::llround(swaps.swaps_per_edge * static_cast<double>(m)));
  for (std::uint64_t t = 0; t < attempts; ++t) {
    const std::size_t i = rng.index(m);
    const std::size_t j = rng.index(m);
    const bool flip = (rng.next() & 1U) != 0;
    if (i == j) continue;
    const NodeId a = edges[i].u;
    const NodeId b = edges[i].v;
    NodeId c = edges[j].u;
    NodeId d = edges[j].v;
    if (flip) std::swap(c, d);
    if (a == c || b == d) continue;
    const auto ac = edge_key(a, c);
    const auto bd = edge_key(b, d);
    if (ac == bd || present.count(ac) || present.count(bd)) continue;

    present.erase(edge_key(a, b));
    present.erase(edge_key(c, d));
    present.insert(ac);
    present.insert(bd);
    edges[i] = {std::min(a, c), std::max(a, c)};
    edges[j] = {std::min(b, d), std::max(b, d)};
  }
  return Graph::from_edges(tmpl.node_count(), std::move(edges), std::move(tokens));
}

NullDistribution null_distribution(const Graph& graph, std::size_t trials,
                                   const MaximizerConfig& config, std::uint64_t seed,
                                   unsigned jobs, const SwapConfig& swaps) {
  if (trials == 0) throw Error(ErrorKind::invalid_argument, "trials must be positive");
  if (graph.edge_count() == 0) {
    throw Error(ErrorKind::invalid_argument, "modularity is undefined on an edgeless graph");
  }
  NullDistribution null;
  null.trials = trials;
  null.seed = seed;
  null.samples.assign(trials, 0.0);
  const auto degrees = graph.degree_sequence();
  parallel_for(trials, jobs, [&](std::size_t i) {
    Graph sample = sample_configuration_graph(degrees, derive_seed(seed, i), graph, swaps);
    null.samples[i] = greedy_maximize(sample, config).modularity;
  });
  null.threshold = *std::max_element(null.samples.begin(), null.samples.end());
  return null;
}

NullDistribution external_null(double threshold) {
  NullDistribution null;
  null.threshold = threshold;
  null.external = true;
  return null;
}

double p_value(const NullDistribution& null, double q) {
  const auto above = std::count_if(null.samples.begin(), null.samples.end(),
                                   [q](double s) { return s >= q; });
  return static_cast<double>(1 + above) / static_cast<double>(null.samples.size() + 1);
}

double effective_alpha(const NullDistribution& null, double alpha) {
  if (null.samples.empty()) return alpha;
  return std::max(alpha, 1.0 / static_cast<double>(null.samples.size()));
}

bool is_significant(const NullDistribution& null, double q, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha must lie in (0, 1)");
  }
  if (!(q > null.threshold)) return false;
  if (null.external || null.samples.empty()) return true;
  return p_value(null, q) <= effective_alpha(null, alpha);
}

std::string format_null_distribution(const NullDistribution& null) {
  std::string out;
  out += "# trials=" + std::to_string(null.samples.size()) + "\n";
  out += "# seed=" + std::to_string(null.seed) + "\n";
  out += "# threshold=" + detail::format_exact(null.threshold) + "\n";
  if (null.external) out += "# external=1\n";
  for (double s : null.samples) out += detail::format_exact(s) + "\n";
  return out;
}

NullDistribution parse_null_distribution(std::string_view text) {
  NullDistribution null;
  bool have_threshold = false;
  std::size_t line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    try {
      if (line.front() == '#') {
        line.remove_prefix(1);
        line = detail::trim(line);
        auto eq = line.find('=');
        if (eq == std::string_view::npos) continue;
        auto key = line.substr(0, eq);
        std::string value(line.substr(eq + 1));
        if (key == "seed") null.seed = std::stoull(value);
        if (key == "threshold") {
          null.threshold = std::stod(value);
          have_threshold = true;
        }
        if (key == "external") null.external = value == "1";
        continue;
      }
      null.samples.push_back(std::stod(std::string(line)));
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad number");
    }
  }
  null.trials = null.samples.size();
  if (!have_threshold && !null.samples.empty()) {
    null.threshold = *std::max_element(null.samples.begin(), null.samples.end());
  }
  return null;
}

}  // namespace hcviz
