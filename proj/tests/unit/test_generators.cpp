#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "hcviz/error.hpp"
#include "hcviz/generators.hpp"

using namespace hcviz;

TEST_SUITE("generators") {
  TEST_CASE("barbell") {
    const auto b = barbell_graph(3);
    CHECK(b.graph.node_count() == 6);
    CHECK(b.graph.edge_count() == 7);
    CHECK(b.graph.has_edge(2, 3));
    CHECK(b.planted == std::vector<ClusterId>{0, 0, 0, 1, 1, 1});
    CHECK_THROWS_AS(barbell_graph(1), Error);
  }

  TEST_CASE("planted cliques match the fixture file") {
    const auto p = planted_cliques(4, 5);
    CHECK(p.graph.edge_count() == 44);
    const Graph file = fixtures::planted();
    REQUIRE(file.node_count() == 20);
    for (const auto& e : p.graph.edges()) {
      const auto u = file.find(std::to_string(e.u));
      const auto v = file.find(std::to_string(e.v));
      REQUIRE(u.has_value());
      REQUIRE(v.has_value());
      CHECK(file.has_edge(*u, *v));
    }
    CHECK(p.graph.has_edge(4, 5));
    CHECK(p.graph.has_edge(0, 19));
    CHECK(planted_cliques(1, 4).graph.edge_count() == 6);
  }

  TEST_CASE("edge list text round trips") {
    const auto p = planted_cliques(3, 4);
    const Graph back = load_edge_list(format_edge_list(p.graph)).graph;
    CHECK(back.edge_count() == p.graph.edge_count());
    CHECK(back.node_count() == p.graph.node_count());
  }

  TEST_CASE("erdos-renyi is seeded") {
    const auto a = erdos_renyi(40, 0.2, 3);
    const auto b = erdos_renyi(40, 0.2, 3);
    const auto c = erdos_renyi(40, 0.2, 4);
    CHECK(std::vector<Edge>(a.graph.edges().begin(), a.graph.edges().end()) ==
          std::vector<Edge>(b.graph.edges().begin(), b.graph.edges().end()));
    CHECK(std::vector<Edge>(a.graph.edges().begin(), a.graph.edges().end()) !=
          std::vector<Edge>(c.graph.edges().begin(), c.graph.edges().end()));
    CHECK(erdos_renyi(10, 1.0, 1).graph.edge_count() == 45);
    CHECK(erdos_renyi(10, 0.0, 1).graph.edge_count() == 0);
    CHECK_THROWS_AS(erdos_renyi(10, 1.5, 1), Error);
  }

  TEST_CASE("block model is connected with dense blocks") {
    const auto b = block_model({10, 10, 10}, 0.6, 0.02, 9);
    CHECK(connected_components(b.graph).size() == 1);
    std::int64_t inside = 0;
    for (const auto& e : b.graph.edges()) {
      if (b.planted[static_cast<std::size_t>(e.u)] == b.planted[static_cast<std::size_t>(e.v)]) ++inside;
    }
    CHECK(inside * 2 > static_cast<std::int64_t>(b.graph.edge_count()));
  }

  TEST_CASE("enrichment fixture composition") {
    const EnrichmentSpec spec;
    const auto g = enrichment_graph(spec, 1);
    CHECK(g.graph.node_count() == 400);
    const Attribute* a = g.graph.attribute("orientation");
    REQUIRE(a != nullptr);
    const auto total = std::count(a->labels.begin(), a->labels.end(), "BM");
    CHECK(total == 304);
    std::int64_t in_cluster = 0;
    std::int64_t cluster_size = 0;
    for (std::size_t v = 0; v < 400; ++v) {
      if (g.planted[v] != 0) continue;
      ++cluster_size;
      if (a->labels[v] == "BM") ++in_cluster;
    }
    CHECK(cluster_size == 41);
    CHECK(in_cluster == 39);
    CHECK(g.planted_fine.size() == 400);
    CHECK(*std::max_element(g.planted_fine.begin(), g.planted_fine.end()) > 6);

    const std::string table = format_attribute_table(g.graph);
    CHECK(table.rfind("node,orientation\n", 0) == 0);
    const Graph back = load_attributes(table, g.graph).graph;
    CHECK(back.attribute("orientation")->labels == a->labels);

    EnrichmentSpec bad = spec;
    bad.sub_enriched.pop_back();
    CHECK_THROWS_AS(enrichment_graph(bad, 1), Error);
    bad = spec;
    bad.global_rate = 0.01;
    CHECK_THROWS_AS(enrichment_graph(bad, 1), Error);
  }
}
