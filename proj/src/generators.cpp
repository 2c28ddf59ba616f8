#include "hcviz/generators.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "hcviz/error.hpp"
#include "hcviz/random.hpp"

namespace hcviz {

namespace {

void add_clique(std::vector<Edge>& edges, NodeId first, int size) {
  for (NodeId i = first; i < first + size; ++i) {
    for (NodeId j = i + 1; j < first + size; ++j) edges.push_back({i, j});
  }
}

Graph finish(std::size_t n, std::vector<Edge> edges) {
  std::set<Edge> unique(edges.begin(), edges.end());
  return Graph::from_edges(n, std::vector<Edge>(unique.begin(), unique.end()));
}

// Block b spans [starts[b], starts[b+1]). A path inside each block keeps it
// connected and consecutive blocks are chained by their first nodes.
std::vector<Edge> sample_blocks(const std::vector<NodeId>& starts, const std::vector<int>& group,
                                const std::vector<double>& p_in, double p_group, double p_out, Rng& rng) {
  std::vector<Edge> edges;
  const std::size_t blocks = starts.size() - 1;
  std::vector<std::size_t> block_of(static_cast<std::size_t>(starts.back()));
  for (std::size_t b = 0; b < blocks; ++b) {
    for (NodeId v = starts[b]; v < starts[b + 1]; ++v) block_of[static_cast<std::size_t>(v)] = b;
    for (NodeId v = starts[b] + 1; v < starts[b + 1]; ++v) edges.push_back({v - 1, v});
    if (b + 1 < blocks) edges.push_back({starts[b], starts[b + 1]});
  }
  const auto n = static_cast<NodeId>(starts.back());
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const auto bu = block_of[static_cast<std::size_t>(u)];
      const auto bv = block_of[static_cast<std::size_t>(v)];
      double p = p_out;
      if (bu == bv) {
        p = p_in[bu];
      } else if (group[bu] >= 0 && group[bu] == group[bv]) {
        p = p_group;
      }
      if (rng.uniform() < p) edges.push_back({u, v});
    }
  }
  return edges;
}

}  // namespace

SyntheticGraph barbell_graph(int clique) {
  if (clique < 2) throw Error(ErrorKind::invalid_argument, "barbell cliques need at least 2 nodes");
  std::vector<Edge> edges;
  add_clique(edges, 0, clique);
  add_clique(edges, clique, clique);
  edges.push_back({clique - 1, clique});
  SyntheticGraph out;
  out.graph = finish(static_cast<std::size_t>(2 * clique), std::move(edges));
  for (int v = 0; v < 2 * clique; ++v) out.planted.push_back(v < clique ? 0 : 1);
  return out;
}

SyntheticGraph planted_cliques(int cliques, int size) {
  if (cliques < 1 || size < 2) throw Error(ErrorKind::invalid_argument, "need >= 1 clique of >= 2 nodes");
  std::vector<Edge> edges;
  for (int c = 0; c < cliques; ++c) {
    add_clique(edges, c * size, size);
    if (cliques > 1) {
      const NodeId a = c * size + size - 1;
      const NodeId b = ((c + 1) % cliques) * size;
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  SyntheticGraph out;
  out.graph = finish(static_cast<std::size_t>(cliques * size), std::move(edges));
  for (int v = 0; v < cliques * size; ++v) out.planted.push_back(v / size);
  return out;
}

SyntheticGraph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (n < 1 || !(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_argument, "G(n, p) needs n >= 1, p in [0, 1]");
  Rng rng(derive_seed(seed, "erdos-renyi"));
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) edges.push_back({u, v});
    }
  }
  SyntheticGraph out;
  out.graph = finish(static_cast<std::size_t>(n), std::move(edges));
  return out;
}

SyntheticGraph block_model(const std::vector<int>& sizes, double p_in, double p_out, std::uint64_t seed) {
  std::vector<NodeId> starts{0};
  for (int s : sizes) {
    if (s < 1) throw Error(ErrorKind::invalid_argument, "block sizes must be positive");
    starts.push_back(starts.back() + s);
  }
  Rng rng(derive_seed(seed, "block-model"));
  std::vector<int> group(sizes.size(), -1);
  SyntheticGraph out;
  const std::vector<double> p_block(sizes.size(), p_in);
  out.graph =
      finish(static_cast<std::size_t>(starts.back()), sample_blocks(starts, group, p_block, p_out, p_out, rng));
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    out.planted.insert(out.planted.end(), static_cast<std::size_t>(sizes[b]), static_cast<ClusterId>(b));
  }
  return out;
}

SyntheticGraph enrichment_graph(const EnrichmentSpec& spec, std::uint64_t seed) {
  if (spec.sub_sizes.size() != spec.sub_enriched.size() || spec.sub_sizes.empty()) {
    throw Error(ErrorKind::invalid_argument, "sub-block sizes and compositions must match");
  }
  const int cluster = std::accumulate(spec.sub_sizes.begin(), spec.sub_sizes.end(), 0);
  const int cluster_enriched = std::accumulate(spec.sub_enriched.begin(), spec.sub_enriched.end(), 0);
  const auto total_enriched = static_cast<int>(std::llround(spec.global_rate * spec.total_nodes));
  const int background = spec.total_nodes - cluster;
  const int background_enriched = total_enriched - cluster_enriched;
  if (background < 1 || background_enriched < 0 || background_enriched > background || spec.background_block < 1) {
    throw Error(ErrorKind::invalid_argument, "enrichment spec cannot meet its global rate");
  }

  std::vector<NodeId> starts{0};
  std::vector<int> group;
  for (std::size_t i = 0; i < spec.sub_sizes.size(); ++i) {
    if (spec.sub_enriched[i] < 0 || spec.sub_enriched[i] > spec.sub_sizes[i]) {
      throw Error(ErrorKind::invalid_argument, "sub-block composition exceeds its size");
    }
    starts.push_back(starts.back() + spec.sub_sizes[i]);
    group.push_back(0);
  }
  for (int left = background; left > 0; left -= spec.background_block) {
    starts.push_back(starts.back() + std::min(left, spec.background_block));
    group.push_back(-1);
  }

  Rng rng(derive_seed(seed, "enrichment"));
  std::vector<double> p_block;
  for (int g : group) p_block.push_back(g == 0 ? spec.p_sub : spec.p_in);
  std::vector<Edge> edges = sample_blocks(starts, group, p_block, spec.p_between_sub, spec.p_out, rng);

  SyntheticGraph out;
  Graph graph = finish(static_cast<std::size_t>(spec.total_nodes), std::move(edges));
  Attribute attr{spec.attribute, std::vector<std::string>(static_cast<std::size_t>(spec.total_nodes), spec.other)};
  for (std::size_t i = 0; i < spec.sub_sizes.size(); ++i) {
    for (int j = 0; j < spec.sub_enriched[i]; ++j) attr.labels[static_cast<std::size_t>(starts[i] + j)] = spec.enriched;
  }
  std::vector<NodeId> rest(static_cast<std::size_t>(background));
  std::iota(rest.begin(), rest.end(), cluster);
  for (std::size_t i = rest.size(); i > 1; --i) std::swap(rest[i - 1], rest[rng.index(i)]);
  for (int j = 0; j < background_enriched; ++j) attr.labels[static_cast<std::size_t>(rest[static_cast<std::size_t>(j)])] = spec.enriched;
  out.graph = graph.with_attribute(std::move(attr));

  const std::size_t subs = spec.sub_sizes.size();
  for (std::size_t b = 0; b + 1 < starts.size(); ++b) {
    for (NodeId v = starts[b]; v < starts[b + 1]; ++v) {
      out.planted_fine.push_back(static_cast<ClusterId>(b));
      out.planted.push_back(b < subs ? 0 : static_cast<ClusterId>(b - subs + 1));
    }
  }
  return out;
}

std::string format_edge_list(const Graph& graph) {
  std::string out;
  for (const auto& e : graph.edges()) out += graph.token(e.u) + " " + graph.token(e.v) + "\n";
  return out;
}

std::string format_attribute_table(const Graph& graph) {
  std::string out = "node";
  for (const auto& a : graph.attributes()) out += "," + a.name;
  out += "\n";
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    out += graph.token(static_cast<NodeId>(v));
    for (const auto& a : graph.attributes()) out += "," + a.labels[v];
    out += "\n";
  }
  return out;
}

}  // namespace hcviz
