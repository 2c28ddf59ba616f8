#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>

#include "fixtures.hpp"
#include "hcviz/error.hpp"
#include "hcviz/generators.hpp"
#include "hcviz/hierarchy.hpp"

using namespace hcviz;

namespace {

struct OracleStep {
  ClusterId first;
  ClusterId second;
  double q_after;
};

// Scan every connected pair, recompute Q from the adjacency matrix, keep the
// best (smallest pair on ties).
std::vector<OracleStep> oracle_chain(const Graph& g, const Partition& best, double threshold) {
  std::vector<ClusterId> labels = best.assignment;
  ClusterId next = best.cluster_count;
  std::vector<OracleStep> out;
  while (true) {
    std::set<ClusterId> active(labels.begin(), labels.end());
    bool found = false;
    OracleStep pick{};
    for (ClusterId a : active) {
      for (ClusterId b : active) {
        if (b <= a) continue;
        bool linked = false;
        for (const auto& e : g.edges()) {
          const auto cu = labels[static_cast<std::size_t>(e.u)];
          const auto cv = labels[static_cast<std::size_t>(e.v)];
          if ((cu == a && cv == b) || (cu == b && cv == a)) linked = true;
        }
        if (!linked) continue;
        auto merged = labels;
        for (auto& c : merged) {
          if (c == b) c = a;
        }
        const double q = fixtures::modularity_by_definition(g, merged);
        if (!found || q > pick.q_after + 1e-12) {
          found = true;
          pick = {a, b, q};
        }
      }
    }
    if (!found || pick.q_after < threshold) break;
    for (auto& c : labels) {
      if (c == pick.first || c == pick.second) c = next;
    }
    ++next;
    out.push_back(pick);
  }
  return out;
}

HierarchyConfig quick(std::uint64_t seed, std::size_t trials = 20) {
  HierarchyConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.min_subgraph_trials = trials;
  return cfg;
}

const ClusterTree& planted_tree() {
  static const ClusterTree tree = build_hierarchy(fixtures::planted(), quick(1, 50));
  return tree;
}

const Graph& nested_graph() {
  static const Graph g = fixtures::nested_cliques(4, 4, 6, 4);
  return g;
}

const ClusterTree& nested_tree() {
  static const ClusterTree tree = build_hierarchy(nested_graph(), quick(1));
  return tree;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST_SUITE("hierarchy") {
  TEST_CASE("planted cliques tree") {
    const ClusterTree& t = planted_tree();
    CHECK_FALSE(t.no_structure);
    REQUIRE(t.best_level.size() == 4);
    CHECK(t.best_q == doctest::Approx(29.0 / 44.0).epsilon(1e-15));
    REQUIRE(t.best_p.has_value());
    CHECK(*t.best_p == doctest::Approx(1.0 / 51.0));
    for (TreeNodeId id : t.best_level) {
      const auto& node = t.node(id);
      CHECK(node.kind == ClusterKind::best);
      CHECK(node.members.size() == 5);
      CHECK(node.depth == 0);
      CHECK(node.terminal == TerminalReason::single_cluster);
    }
    CHECK(t.coarse_chain.size() == 2);
    CHECK(t.node(t.root).kind == ClusterKind::root);
    CHECK(t.node(t.root).members.size() == 20);
    CHECK_NOTHROW(check_tree(t));
  }

  TEST_CASE("coarse chain matches the exhaustive pair scan") {
    const Graph g = fixtures::planted();
    const Partition best = greedy_maximize(g);
    const auto chain = coarsen_chain(g, best, -1.0);
    const auto oracle = oracle_chain(g, best, -1.0);
    REQUIRE(chain.size() == 3);
    REQUIRE(oracle.size() == 3);
    double q = best.modularity;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      CHECK(chain[i].first == oracle[i].first);
      CHECK(chain[i].second == oracle[i].second);
      CHECK(chain[i].merged == static_cast<ClusterId>(4 + i));
      CHECK(std::abs(chain[i].q_after - oracle[i].q_after) <= 1e-12);
      CHECK(std::abs(chain[i].delta - (chain[i].q_after - q)) <= 1e-12);
      CHECK(chain[i].delta <= 0.0);
      q = chain[i].q_after;
    }
    CHECK(std::abs(chain.back().q_after) <= 1e-12);
  }

  TEST_CASE("coarse chain oracle on random graphs") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 25; ++trial) {
      const Graph g = fixtures::random_connected(8 + trial % 12, 0.15, rng);
      const Partition best = greedy_maximize(g);
      const auto chain = coarsen_chain(g, best, -1.0);
      const auto oracle = oracle_chain(g, best, -1.0);
      REQUIRE(chain.size() == oracle.size());
      CHECK(chain.size() + 1 == static_cast<std::size_t>(best.cluster_count));
      for (std::size_t i = 0; i < chain.size(); ++i) {
        CHECK(std::abs(chain[i].q_after - oracle[i].q_after) <= 1e-12);
      }
    }
  }

  TEST_CASE("coarse chain stops at the threshold") {
    const Graph g = fixtures::planted();
    const Partition best = greedy_maximize(g);
    const auto chain = coarsen_chain(g, best, 0.5);
    REQUIRE(chain.size() == 1);
    CHECK(chain[0].q_after >= 0.5);
    for (const auto& step : coarsen_chain(g, best, 0.3)) CHECK(step.q_after >= 0.3);
  }

  TEST_CASE("coarsen step moves along the chain") {
    const Graph g = fixtures::planted();
    const ClusterTree& t = planted_tree();
    ViewState v = initial_view(t, g);
    CHECK(v.q == doctest::Approx(29.0 / 44.0).epsilon(1e-15));
    for (const auto& step : t.coarse_chain) {
      REQUIRE(next_coarsen_target(t, v) == std::optional<TreeNodeId>(step.merged));
      v = coarsen_step(t, g, v);
      CHECK(std::abs(v.q - step.q_after) <= 1e-12);
      CHECK(v.q >= t.global_threshold);
    }
    CHECK_FALSE(next_coarsen_target(t, v).has_value());
    CHECK(kind_of([&] { coarsen_step(t, g, v); }) == ErrorKind::significance_boundary);
    CHECK(kind_of([&] { coarsen_view(t, g, v, t.root); }) == ErrorKind::significance_boundary);
  }

  TEST_CASE("terminal and misplaced moves") {
    const Graph g = fixtures::planted();
    const ClusterTree& t = planted_tree();
    const ViewState v = initial_view(t, g);
    CHECK_FALSE(can_refine(t, v, t.best_level[0]));
    CHECK(kind_of([&] { refine_view(t, g, v, t.best_level[0]); }) == ErrorKind::no_substructure);
    const TreeNodeId merged = t.coarse_chain[0].merged;
    CHECK(kind_of([&] { refine_view(t, g, v, merged); }) == ErrorKind::invalid_move);
    CHECK(kind_of([&] { coarsen_view(t, g, v, t.best_level[0]); }) == ErrorKind::invalid_move);
    const ViewState up = coarsen_view(t, g, v, merged);
    CHECK(kind_of([&] { refine_view(t, g, up, t.best_level[0]); }) == ErrorKind::invalid_move);
  }

  TEST_CASE("nested cliques refine into their cliques") {
    const Graph& g = nested_graph();
    const ClusterTree& t = nested_tree();
    REQUIRE(t.best_level.size() == 4);
    const auto bottom = bottom_frontier(t);
    CHECK(bottom.size() == 16);
    for (TreeNodeId id : bottom) {
      const auto& node = t.node(id);
      CHECK(node.kind == ClusterKind::refined);
      CHECK(node.depth == 1);
      REQUIRE(node.members.size() == 6);
      CHECK(node.members.front() % 6 == 0);
      CHECK(node.members.back() == node.members.front() + 5);
    }
    for (TreeNodeId id : t.best_level) {
      CHECK(t.node(id).local_p.has_value());
      CHECK(t.node(id).local_q.has_value());
      CHECK(can_refine(t, initial_view(t, g), id));
    }
    CHECK(make_view(t, g, bottom).q >= t.global_threshold);
  }

  TEST_CASE("random frontier walks keep the view consistent") {
    const Graph& g = nested_graph();
    const ClusterTree& t = nested_tree();
    std::mt19937_64 rng(4);
    ViewState v = initial_view(t, g);
    int refines = 0;
    int coarsens = 0;
    for (int step = 0; step < 300; ++step) {
      std::vector<TreeNodeId> refinable;
      std::set<TreeNodeId> coarsenable;
      for (TreeNodeId id : v.frontier) {
        if (can_refine(t, v, id)) refinable.push_back(id);
        const TreeNodeId parent = t.node(id).parent;
        if (parent >= 0 && can_coarsen(t, v, parent)) coarsenable.insert(parent);
      }
      const bool do_refine = !refinable.empty() && (coarsenable.empty() || rng() % 2 == 0);
      if (do_refine) {
        const TreeNodeId id = refinable[rng() % refinable.size()];
        ViewState next = refine_view(t, g, v, id);
        CHECK(coarsen_view(t, g, next, id) == v);
        v = std::move(next);
        ++refines;
      } else if (!coarsenable.empty()) {
        auto it = coarsenable.begin();
        std::advance(it, static_cast<long>(rng() % coarsenable.size()));
        ViewState next = coarsen_view(t, g, v, *it);
        CHECK(refine_view(t, g, next, *it) == v);
        v = std::move(next);
        ++coarsens;
      }
      CHECK(std::abs(v.q - fixtures::modularity_by_definition(g, v.partition.assignment)) <= 1e-12);
      std::size_t covered = 0;
      for (TreeNodeId id : v.frontier) covered += t.node(id).members.size();
      CHECK(covered == g.node_count());
    }
    CHECK(refines > 10);
    CHECK(coarsens > 10);
  }

  TEST_CASE("refine cluster decisions") {
    const Graph g = barbell_graph(5).graph;
    RefineContext ctx;
    ctx.config = quick(3);
    ctx.seed = 3;
    std::vector<NodeId> all(10);
    std::iota(all.begin(), all.end(), 0);
    const auto d = refine_cluster(g, all, ctx);
    CHECK(d.accepted);
    REQUIRE(d.children.size() == 2);
    CHECK(d.children[0] == std::vector<NodeId>{0, 1, 2, 3, 4});
    CHECK(d.local_p.has_value());

    ctx.level_assignment = std::vector<ClusterId>(10, 0);
    ctx.global_threshold = 0.9;
    const auto blocked = refine_cluster(g, all, ctx);
    CHECK_FALSE(blocked.accepted);
    CHECK(blocked.reason == TerminalReason::global_threshold);
    CHECK(blocked.global_q.has_value());

    RefineContext plain;
    plain.config = quick(3);
    std::vector<NodeId> three{0, 1, 2};
    CHECK(refine_cluster(g, three, plain).reason == TerminalReason::too_small);
    std::vector<NodeId> clique{0, 1, 2, 3, 4};
    CHECK(refine_cluster(g, clique, plain).reason == TerminalReason::single_cluster);
    plain.config.min_cluster_size = 2;
    const Graph sparse = Graph::from_edges(4, {{0, 1}});
    std::vector<NodeId> loose{2, 3};
    CHECK(refine_cluster(sparse, loose, plain).reason == TerminalReason::no_edges);
  }

  TEST_CASE("dense random graph has no structure") {
    const Graph g = erdos_renyi(60, 0.5, 1).graph;
    const ClusterTree t = build_hierarchy(g, quick(1));
    CHECK(t.no_structure);
    CHECK(t.best_level.empty());
    const ViewState v = initial_view(t, g);
    CHECK(v.frontier == std::vector<TreeNodeId>{t.root});
    CHECK(v.q == 0.0);
    CHECK(t.node(t.root).terminal == TerminalReason::no_structure);
    CHECK(kind_of([&] { refine_view(t, g, v, t.root); }) == ErrorKind::no_substructure);
    CHECK(kind_of([&] { coarsen_step(t, g, v); }) == ErrorKind::significance_boundary);
    CHECK(bottom_frontier(t) == v.frontier);
  }

  TEST_CASE("external threshold between levels") {
    const Graph& g = nested_graph();
    const ClusterTree& base = nested_tree();
    const double bottom_q = make_view(base, g, bottom_frontier(base)).q;
    REQUIRE(bottom_q < base.best_q);

    HierarchyConfig cfg = quick(1);
    cfg.external_threshold = (bottom_q + base.best_q) / 2;
    const ClusterTree exempt = build_hierarchy(g, cfg);
    CHECK_FALSE(exempt.best_p.has_value());
    CHECK(exempt.global_null.external);
    CHECK(exempt.bottom_exempt);
    CHECK(bottom_frontier(exempt).size() == 16);
    for (TreeNodeId id : bottom_frontier(exempt)) CHECK(exempt.node(id).terminal == TerminalReason::bottom_level);

    cfg.strict_global = true;
    const ClusterTree strict = build_hierarchy(g, cfg);
    CHECK_FALSE(strict.bottom_exempt);
    CHECK(bottom_frontier(strict).size() < 16);
    CHECK(make_view(strict, g, bottom_frontier(strict)).q >= *cfg.external_threshold);
    int blocked = 0;
    for (TreeNodeId id : strict.best_level) blocked += strict.node(id).terminal == TerminalReason::global_threshold;
    CHECK(blocked > 0);
  }

  TEST_CASE("jobs do not change the tree") {
    HierarchyConfig one = quick(5);
    one.jobs = 1;
    HierarchyConfig four = quick(5);
    four.jobs = 4;
    CHECK(hierarchy_to_json(build_hierarchy(nested_graph(), one)) ==
          hierarchy_to_json(build_hierarchy(nested_graph(), four)));
  }

  TEST_CASE("json round trip") {
    for (const ClusterTree* t : {&planted_tree(), &nested_tree()}) {
      const auto doc = hierarchy_to_json(*t);
      const ClusterTree back = hierarchy_from_json(doc);
      CHECK(hierarchy_to_json(back) == doc);
      CHECK(back.best_level == t->best_level);
      CHECK(back.coarse_chain.size() == t->coarse_chain.size());
      CHECK_NOTHROW(check_tree(back));
    }
    auto broken = hierarchy_to_json(planted_tree());
    broken.erase("root");
    CHECK_THROWS(hierarchy_from_json(broken));
  }
}
