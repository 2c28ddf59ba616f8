#pragma once

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hcviz/graph.hpp"
#include "hcviz/partition.hpp"

namespace fixtures {

inline std::string read_data(const std::string& name) {
  std::ifstream in(std::string(HCVIZ_TEST_DATA) + "/" + name, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline hcviz::Graph barbell() { return hcviz::load_edge_list(read_data("barbell.edges")).graph; }
inline hcviz::Graph planted() { return hcviz::load_edge_list(read_data("planted.edges")).graph; }

inline hcviz::Graph clique(int n) {
  std::vector<hcviz::Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return hcviz::Graph::from_edges(static_cast<std::size_t>(n), edges);
}

// Random connected graph: a random spanning tree plus extra edges.
inline hcviz::Graph random_connected(int n, double extra, std::mt19937_64& rng) {
  std::set<hcviz::Edge> edges;
  for (int v = 1; v < n; ++v) {
    int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
    edges.insert({u, v});
  }
  std::bernoulli_distribution coin(extra);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.insert({u, v});
    }
  }
  return hcviz::Graph::from_edges(static_cast<std::size_t>(n), {edges.begin(), edges.end()});
}

// `groups` rings of `per` cliques of size k. Cliques in one group are
// pairwise joined by `links` edges, consecutive groups by one edge.
inline hcviz::Graph nested_cliques(int groups, int per, int k, int links) {
  auto id = [&](int g, int c, int i) { return (g * per + c) * k + i; };
  std::set<hcviz::Edge> edges;
  auto add = [&](int a, int b) { edges.insert({std::min(a, b), std::max(a, b)}); };
  for (int g = 0; g < groups; ++g) {
    for (int c = 0; c < per; ++c) {
      for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) add(id(g, c, i), id(g, c, j));
      }
      for (int d = c + 1; d < per; ++d) {
        for (int l = 0; l < links; ++l) add(id(g, c, l % k), id(g, d, (l + 1) % k));
      }
    }
    add(id(g, 0, 0), id((g + 1) % groups, 1 % per, 2 % k));
  }
  return hcviz::Graph::from_edges(static_cast<std::size_t>(groups * per * k), {edges.begin(), edges.end()});
}

inline std::vector<hcviz::ClusterId> random_labels(std::size_t n, int k, std::mt19937_64& rng) {
  std::vector<hcviz::ClusterId> labels(n);
  std::uniform_int_distribution<int> pick(0, k - 1);
  for (auto& l : labels) l = pick(rng);
  return hcviz::normalize_labels(labels);
}

// Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j), straight from the
// adjacency matrix.
inline double modularity_by_definition(const hcviz::Graph& g, const std::vector<hcviz::ClusterId>& c) {
  const auto n = static_cast<int>(g.node_count());
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  long double sum = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (c[static_cast<std::size_t>(i)] != c[static_cast<std::size_t>(j)]) continue;
      const double a = g.has_edge(i, j) ? 1.0 : 0.0;
      sum += a - static_cast<double>(g.degree(i)) * static_cast<double>(g.degree(j)) / two_m;
    }
  }
  return static_cast<double>(sum / two_m);
}

}  // namespace fixtures
