#include "hcviz/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "hcviz/error.hpp"
#include "hcviz/parallel.hpp"
#include "hcviz/random.hpp"

namespace hcviz {

const char* to_string(ClusterKind kind) noexcept {
  switch (kind) {
    case ClusterKind::root: return "root";
    case ClusterKind::coarse: return "coarse";
    case ClusterKind::best: return "best";
    case ClusterKind::refined: return "refined";
  }
  return "unknown";
}

const char* to_string(TerminalReason reason) noexcept {
  switch (reason) {
    case TerminalReason::none: return "none";
    case TerminalReason::too_small: return "too_small";
    case TerminalReason::no_edges: return "no_edges";
    case TerminalReason::single_cluster: return "single_cluster";
    case TerminalReason::not_significant: return "not_significant";
    case TerminalReason::global_threshold: return "global_threshold";
    case TerminalReason::bottom_level: return "bottom_level";
    case TerminalReason::no_structure: return "no_structure";
  }
  return "unknown";
}

const ClusterNode& ClusterTree::node(TreeNodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes.size()) {
    throw Error(ErrorKind::not_found, "unknown cluster " + std::to_string(id));
  }
  return nodes[static_cast<std::size_t>(id)];
}

bool ClusterTree::is_chain_merge(TreeNodeId id) const {
  return std::any_of(coarse_chain.begin(), coarse_chain.end(),
                     [id](const CoarseMerge& s) { return s.merged == id; });
}

std::vector<CoarseMerge> coarsen_chain(const Graph& graph, const Partition& best, double threshold) {
  ClusterLedger ledger(graph, best.assignment);
  const auto k = static_cast<std::size_t>(ledger.cluster_count());
  const std::int64_t m = ledger.edge_count();
  const double denominator = ledger.denominator();

  // ids 0..k-1 are the best clusters, k+i is created by step i
  const std::size_t capacity = k == 0 ? 0 : 2 * k - 1;
  std::vector<std::int64_t> degree(capacity, 0);
  std::vector<std::map<ClusterId, std::int64_t>> links(capacity);
  std::vector<bool> active(capacity, false);
  for (std::size_t a = 0; a < k; ++a) {
    degree[a] = ledger.degree(static_cast<ClusterId>(a));
    active[a] = true;
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      if (auto e = ledger.between(static_cast<ClusterId>(a), static_cast<ClusterId>(b)); e > 0) {
        links[a][static_cast<ClusterId>(b)] = e;
      }
    }
  }

  std::int64_t score = ledger.scaled_modularity();
  std::vector<CoarseMerge> chain;
  std::size_t next_id = k;
  while (true) {
    bool found = false;
    std::int64_t best_gain = 0;
    ClusterId best_a = -1;
    ClusterId best_b = -1;
    for (std::size_t a = 0; a < next_id; ++a) {
      if (!active[a]) continue;
      for (auto it = links[a].upper_bound(static_cast<ClusterId>(a)); it != links[a].end(); ++it) {
        const auto b = static_cast<std::size_t>(it->first);
        const std::int64_t gain = 4 * m * it->second - 2 * degree[a] * degree[b];
        if (!found || gain > best_gain) {
          found = true;
          best_gain = gain;
          best_a = static_cast<ClusterId>(a);
          best_b = it->first;
        }
      }
    }
    if (!found) break;
    const double q_after = static_cast<double>(score + best_gain) / denominator;
    if (q_after < threshold) break;

    const auto merged = static_cast<ClusterId>(next_id++);
    const auto ai = static_cast<std::size_t>(best_a);
    const auto bi = static_cast<std::size_t>(best_b);
    const auto mi = static_cast<std::size_t>(merged);
    degree[mi] = degree[ai] + degree[bi];
    for (auto src : {ai, bi}) {
      for (const auto& [c, w] : links[src]) {
        if (c == best_a || c == best_b) continue;
        links[mi][c] += w;
        auto& back = links[static_cast<std::size_t>(c)];
        back.erase(static_cast<ClusterId>(src));
        back[merged] += w;
      }
      links[src].clear();
      active[src] = false;
    }
    active[mi] = true;
    score += best_gain;
    chain.push_back({best_a, best_b, merged, static_cast<double>(best_gain) / denominator, q_after});
  }
  return chain;
}

namespace {

// Level with one cluster split into `children`; the first child keeps the
// cluster's label.
std::vector<ClusterId> replace_in_level(std::span<const ClusterId> level,
                                        const std::vector<std::vector<NodeId>>& children) {
  std::vector<ClusterId> out(level.begin(), level.end());
  ClusterId next = out.empty() ? 0 : *std::max_element(out.begin(), out.end()) + 1;
  for (std::size_t i = 1; i < children.size(); ++i) {
    for (NodeId v : children[i]) out[static_cast<std::size_t>(v)] = next;
    ++next;
  }
  return out;
}

}  // namespace

RefinementDecision refine_cluster(const Graph& graph, std::span<const NodeId> members,
                                  const RefineContext& context) {
  const auto& cfg = context.config;
  RefinementDecision d;
  if (members.size() < std::max<std::size_t>(cfg.min_cluster_size, 2)) {
    d.reason = TerminalReason::too_small;
    return d;
  }
  Subgraph sub = induced_subgraph(graph, members);
  if (sub.graph.edge_count() == 0) {
    d.reason = TerminalReason::no_edges;
    return d;
  }
  Partition split = greedy_maximize(sub.graph, cfg.maximizer);
  d.local_q = split.modularity;
  if (split.cluster_count < 2) {
    d.reason = TerminalReason::single_cluster;
    return d;
  }
  const std::size_t trials = std::max(cfg.trials, cfg.min_subgraph_trials);
  NullDistribution null =
      null_distribution(sub.graph, trials, cfg.maximizer, context.seed, context.jobs, cfg.swaps);
  d.local_threshold = null.threshold;
  d.local_p = p_value(null, split.modularity);
  if (!is_significant(null, split.modularity, cfg.alpha)) {
    d.reason = TerminalReason::not_significant;
    return d;
  }

  for (auto local : split.members()) {
    for (auto& v : local) v = sub.to_parent[static_cast<std::size_t>(v)];
    std::sort(local.begin(), local.end());
    d.children.push_back(std::move(local));
  }
  std::sort(d.children.begin(), d.children.end());

  if (context.level_assignment && context.global_threshold) {
    auto replaced = replace_in_level(*context.level_assignment, d.children);
    d.global_q = modularity(graph, replaced);
    if (*d.global_q < *context.global_threshold) {
      d.reason = TerminalReason::global_threshold;
      return d;
    }
  }
  d.accepted = true;
  return d;
}

namespace {

std::vector<ClusterId> level_assignment(const ClusterTree& tree, std::span<const TreeNodeId> frontier) {
  std::vector<ClusterId> out(tree.graph_nodes, -1);
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    for (NodeId v : tree.node(frontier[i]).members) out[static_cast<std::size_t>(v)] = static_cast<ClusterId>(i);
  }
  return out;
}

TreeNodeId add_node(ClusterTree& tree, ClusterNode node) {
  node.id = static_cast<TreeNodeId>(tree.nodes.size());
  tree.nodes.push_back(std::move(node));
  return tree.nodes.back().id;
}

void refine_levels(ClusterTree& tree, const Graph& graph, const HierarchyConfig& cfg) {
  const std::uint64_t refine_seed = derive_seed(cfg.seed, "refine");
  std::vector<TreeNodeId> frontier = tree.best_level;
  std::vector<TreeNodeId> open = tree.best_level;
  int depth = 0;

  while (!open.empty()) {
    std::vector<RefinementDecision> decisions(open.size());
    const bool outer_parallel = open.size() > 1;
    parallel_for(open.size(), outer_parallel ? cfg.jobs : 1, [&](std::size_t i) {
      RefineContext ctx;
      ctx.config = cfg;
      ctx.seed = derive_seed(refine_seed, static_cast<std::uint64_t>(open[i]));
      ctx.jobs = outer_parallel ? 1 : cfg.jobs;
      decisions[i] = refine_cluster(graph, tree.node(open[i]).members, ctx);
    });

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < open.size(); ++i) {
      auto& node = tree.nodes[static_cast<std::size_t>(open[i])];
      node.local_q = decisions[i].local_q;
      node.local_p = decisions[i].local_p;
      node.local_threshold = decisions[i].local_threshold;
      if (decisions[i].accepted) {
        candidates.push_back(i);
      } else {
        node.terminal = decisions[i].reason;
      }
    }
    if (candidates.empty()) break;

    // Full-graph check: accept splits in order of the Q they leave behind
    // while the level stays at or above the global threshold.
    const auto base = level_assignment(tree, frontier);
    std::vector<double> alone(open.size(), 0.0);
    for (std::size_t i : candidates) {
      alone[i] = modularity(graph, replace_in_level(base, decisions[i].children));
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
      if (alone[a] != alone[b]) return alone[a] > alone[b];
      return open[a] < open[b];
    });
    auto working = base;
    std::vector<std::size_t> accepted;
    std::vector<std::size_t> rejected;
    for (std::size_t i : candidates) {
      auto next = replace_in_level(working, decisions[i].children);
      if (modularity(graph, next) >= tree.global_threshold) {
        working = std::move(next);
        accepted.push_back(i);
      } else {
        rejected.push_back(i);
      }
    }
    bool bottom = false;
    if (!rejected.empty()) {
      if (cfg.strict_global) {
        for (std::size_t i : rejected) {
          tree.nodes[static_cast<std::size_t>(open[i])].terminal = TerminalReason::global_threshold;
        }
      } else {
        bottom = true;
        accepted.insert(accepted.end(), rejected.begin(), rejected.end());
      }
    }
    std::sort(accepted.begin(), accepted.end());

    std::vector<TreeNodeId> next_open;
    for (std::size_t i : accepted) {
      const TreeNodeId parent = open[i];
      for (auto& members : decisions[i].children) {
        ClusterNode child;
        child.kind = ClusterKind::refined;
        child.members = std::move(members);
        child.parent = parent;
        child.depth = depth + 1;
        if (bottom) child.terminal = TerminalReason::bottom_level;
        const TreeNodeId id = add_node(tree, std::move(child));
        tree.nodes[static_cast<std::size_t>(parent)].children.push_back(id);
        next_open.push_back(id);
      }
    }
    if (bottom) {
      tree.bottom_exempt = true;
      break;
    }

    std::vector<TreeNodeId> next_frontier;
    for (TreeNodeId id : frontier) {
      const auto& node = tree.node(id);
      if (node.children.empty()) {
        next_frontier.push_back(id);
      } else {
        next_frontier.insert(next_frontier.end(), node.children.begin(), node.children.end());
      }
    }
    frontier = std::move(next_frontier);
    open = std::move(next_open);
    ++depth;
  }
}

}  // namespace

NullDistribution global_null(const Graph& graph, const HierarchyConfig& cfg) {
  if (cfg.external_threshold) return external_null(*cfg.external_threshold);
  return null_distribution(graph, cfg.trials, cfg.maximizer, derive_seed(cfg.seed, "global-null"), cfg.jobs,
                           cfg.swaps);
}

ClusterTree build_hierarchy(const Graph& graph, const HierarchyConfig& cfg) {
  if (graph.edge_count() == 0) {
    throw Error(ErrorKind::invalid_argument, "modularity is undefined on an edgeless graph");
  }
  ClusterTree tree;
  tree.config = cfg;
  tree.strict_global = cfg.strict_global;
  tree.graph_nodes = graph.node_count();

  Partition best = greedy_maximize(graph, cfg.maximizer);
  tree.best_q = best.modularity;
  tree.global_null = global_null(graph, cfg);
  if (!tree.global_null.external) tree.best_p = p_value(tree.global_null, best.modularity);
  tree.global_threshold = tree.global_null.threshold;

  const bool significant =
      best.cluster_count > 1 && is_significant(tree.global_null, best.modularity, cfg.alpha);
  if (!significant) {
    ClusterNode root;
    root.kind = ClusterKind::root;
    root.members.resize(graph.node_count());
    std::iota(root.members.begin(), root.members.end(), 0);
    root.terminal = TerminalReason::no_structure;
    tree.root = add_node(tree, std::move(root));
    tree.no_structure = true;
    return tree;
  }

  for (auto& members : best.members()) {
    ClusterNode node;
    node.kind = ClusterKind::best;
    node.members = std::move(members);
    tree.best_level.push_back(add_node(tree, std::move(node)));
  }

  tree.coarse_chain = coarsen_chain(graph, best, tree.global_threshold);
  for (const auto& step : tree.coarse_chain) {
    auto& a = tree.nodes[static_cast<std::size_t>(step.first)];
    auto& b = tree.nodes[static_cast<std::size_t>(step.second)];
    ClusterNode merged;
    merged.kind = ClusterKind::coarse;
    merged.members = a.members;
    merged.members.insert(merged.members.end(), b.members.begin(), b.members.end());
    std::sort(merged.members.begin(), merged.members.end());
    merged.children = {step.first, step.second};
    merged.depth = std::min(a.depth, b.depth) - 1;
    const TreeNodeId id = add_node(tree, std::move(merged));
    if (id != step.merged) throw Error(ErrorKind::invalid_argument, "coarse chain numbering mismatch");
    tree.nodes[static_cast<std::size_t>(step.first)].parent = id;
    tree.nodes[static_cast<std::size_t>(step.second)].parent = id;
  }

  std::vector<TreeNodeId> tops;
  for (const auto& node : tree.nodes) {
    if (node.parent < 0) tops.push_back(node.id);
  }
  if (tops.size() == 1) {
    tree.root = tops.front();
  } else {
    ClusterNode root;
    root.kind = ClusterKind::root;
    root.members.resize(graph.node_count());
    std::iota(root.members.begin(), root.members.end(), 0);
    root.children = tops;
    int depth = 0;
    for (TreeNodeId t : tops) depth = std::min(depth, tree.node(t).depth);
    root.depth = depth - 1;
    tree.root = add_node(tree, std::move(root));
    for (TreeNodeId t : tops) tree.nodes[static_cast<std::size_t>(t)].parent = tree.root;
  }

  refine_levels(tree, graph, cfg);
  check_tree(tree);
  return tree;
}

void check_tree(const ClusterTree& tree) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::invalid_argument, "malformed tree: " + what); };
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    if (node.id != static_cast<TreeNodeId>(i)) fail("id mismatch");
    if (!std::is_sorted(node.members.begin(), node.members.end())) fail("unsorted members");
    if (node.children.empty()) continue;
    std::vector<NodeId> joined;
    for (TreeNodeId c : node.children) {
      const auto& child = tree.node(c);
      if (child.parent != node.id) fail("parent link of " + std::to_string(c));
      joined.insert(joined.end(), child.members.begin(), child.members.end());
    }
    std::sort(joined.begin(), joined.end());
    if (joined != node.members) fail("children of " + std::to_string(node.id) + " do not partition it");
  }
  const auto& root = tree.node(tree.root);
  if (root.parent != -1) fail("root has a parent");
  if (root.members.size() != tree.graph_nodes) fail("root does not cover the graph");
}

ViewState make_view(const ClusterTree& tree, const Graph& graph, std::vector<TreeNodeId> frontier) {
  std::sort(frontier.begin(), frontier.end());
  if (std::adjacent_find(frontier.begin(), frontier.end()) != frontier.end()) {
    throw Error(ErrorKind::invalid_argument, "frontier lists a cluster twice");
  }
  if (graph.node_count() != tree.graph_nodes) {
    throw Error(ErrorKind::invalid_argument, "tree was built for a different graph");
  }
  ViewState view;
  view.partition.assignment.assign(graph.node_count(), -1);
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    for (NodeId v : tree.node(frontier[i]).members) {
      auto& slot = view.partition.assignment[static_cast<std::size_t>(v)];
      if (slot >= 0) throw Error(ErrorKind::invalid_argument, "frontier clusters overlap");
      slot = static_cast<ClusterId>(i);
    }
  }
  if (std::find(view.partition.assignment.begin(), view.partition.assignment.end(), -1) !=
      view.partition.assignment.end()) {
    throw Error(ErrorKind::invalid_argument, "frontier does not cover the graph");
  }
  view.partition.cluster_count = static_cast<ClusterId>(frontier.size());
  view.partition.modularity = modularity(graph, view.partition.assignment);
  view.q = view.partition.modularity;
  view.frontier = std::move(frontier);
  return view;
}

ViewState initial_view(const ClusterTree& tree, const Graph& graph) {
  if (tree.no_structure) return make_view(tree, graph, {tree.root});
  return make_view(tree, graph, tree.best_level);
}

namespace {

bool in_frontier(const ViewState& view, TreeNodeId id) {
  return std::binary_search(view.frontier.begin(), view.frontier.end(), id);
}

}  // namespace

bool can_refine(const ClusterTree& tree, const ViewState& view, TreeNodeId node) {
  if (node < 0 || static_cast<std::size_t>(node) >= tree.nodes.size()) return false;
  return in_frontier(view, node) && !tree.node(node).children.empty();
}

bool can_coarsen(const ClusterTree& tree, const ViewState& view, TreeNodeId target) {
  if (target < 0 || static_cast<std::size_t>(target) >= tree.nodes.size()) return false;
  const auto& node = tree.node(target);
  if (node.kind == ClusterKind::root || node.children.empty() || in_frontier(view, target)) return false;
  return std::all_of(node.children.begin(), node.children.end(),
                     [&](TreeNodeId c) { return in_frontier(view, c); });
}

ViewState refine_view(const ClusterTree& tree, const Graph& graph, const ViewState& view, TreeNodeId node) {
  const auto& target = tree.node(node);
  if (!in_frontier(view, node)) {
    throw Error(ErrorKind::invalid_move, "cluster " + std::to_string(node) + " is not displayed");
  }
  if (target.children.empty()) throw Error(ErrorKind::no_substructure, "no significant substructure");
  std::vector<TreeNodeId> frontier;
  for (TreeNodeId id : view.frontier) {
    if (id != node) frontier.push_back(id);
  }
  frontier.insert(frontier.end(), target.children.begin(), target.children.end());
  return make_view(tree, graph, std::move(frontier));
}

ViewState coarsen_view(const ClusterTree& tree, const Graph& graph, const ViewState& view, TreeNodeId target) {
  const auto& node = tree.node(target);
  if (node.kind == ClusterKind::root) throw Error(ErrorKind::significance_boundary, "at significance boundary");
  if (!can_coarsen(tree, view, target)) {
    throw Error(ErrorKind::invalid_move,
                "children of cluster " + std::to_string(target) + " are not all displayed");
  }
  std::vector<TreeNodeId> frontier;
  for (TreeNodeId id : view.frontier) {
    if (std::find(node.children.begin(), node.children.end(), id) == node.children.end()) frontier.push_back(id);
  }
  frontier.push_back(target);
  return make_view(tree, graph, std::move(frontier));
}

std::optional<TreeNodeId> next_coarsen_target(const ClusterTree& tree, const ViewState& view) {
  for (const auto& step : tree.coarse_chain) {
    if (can_coarsen(tree, view, step.merged)) return step.merged;
  }
  return std::nullopt;
}

ViewState coarsen_step(const ClusterTree& tree, const Graph& graph, const ViewState& view) {
  if (auto target = next_coarsen_target(tree, view)) return coarsen_view(tree, graph, view, *target);
  // blocked only if some chain step is still below the frontier
  for (const auto& step : tree.coarse_chain) {
    TreeNodeId id = step.merged;
    bool covered = false;
    while (id >= 0 && !covered) {
      covered = in_frontier(view, id);
      id = tree.node(id).parent;
    }
    if (!covered) throw Error(ErrorKind::invalid_move, "coarsen refined clusters first");
  }
  throw Error(ErrorKind::significance_boundary, "at significance boundary");
}

std::vector<TreeNodeId> bottom_frontier(const ClusterTree& tree) {
  if (tree.no_structure) return {tree.root};
  std::vector<TreeNodeId> out;
  std::vector<TreeNodeId> stack(tree.best_level.rbegin(), tree.best_level.rend());
  while (!stack.empty()) {
    TreeNodeId id = stack.back();
    stack.pop_back();
    const auto& node = tree.node(id);
    if (node.children.empty()) {
      out.push_back(id);
    } else {
      stack.insert(stack.end(), node.children.rbegin(), node.children.rend());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json node_to_json(const ClusterTree& tree, TreeNodeId id) {
  const auto& node = tree.node(id);
  json j;
  j["id"] = node.id;
  j["kind"] = to_string(node.kind);
  j["depth"] = node.depth;
  j["size"] = node.members.size();
  j["members"] = node.members;
  j["local_q"] = optional_number(node.local_q);
  j["local_p"] = optional_number(node.local_p);
  j["local_threshold"] = optional_number(node.local_threshold);
  j["terminal"] = to_string(node.terminal);
  j["children"] = json::array();
  for (TreeNodeId c : node.children) j["children"].push_back(node_to_json(tree, c));
  return j;
}

ClusterKind kind_from(const std::string& s) {
  for (auto k : {ClusterKind::root, ClusterKind::coarse, ClusterKind::best, ClusterKind::refined}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorKind::parse, "unknown cluster kind '" + s + "'");
}

TerminalReason reason_from(const std::string& s) {
  for (auto r : {TerminalReason::none, TerminalReason::too_small, TerminalReason::no_edges,
                 TerminalReason::single_cluster, TerminalReason::not_significant,
                 TerminalReason::global_threshold, TerminalReason::bottom_level,
                 TerminalReason::no_structure}) {
    if (s == to_string(r)) return r;
  }
  throw Error(ErrorKind::parse, "unknown terminal reason '" + s + "'");
}

void node_from_json(ClusterTree& tree, const json& j, TreeNodeId parent) {
  ClusterNode node;
  node.id = j.at("id").get<TreeNodeId>();
  node.kind = kind_from(j.at("kind").get<std::string>());
  node.depth = j.at("depth").get<int>();
  node.members = j.at("members").get<std::vector<NodeId>>();
  node.local_q = read_optional(j, "local_q");
  node.local_p = read_optional(j, "local_p");
  node.local_threshold = read_optional(j, "local_threshold");
  node.terminal = reason_from(j.at("terminal").get<std::string>());
  node.parent = parent;
  for (const auto& c : j.at("children")) node.children.push_back(c.at("id").get<TreeNodeId>());
  if (node.id < 0 || node.id > 100'000'000) throw Error(ErrorKind::parse, "bad node id");
  const auto index = static_cast<std::size_t>(node.id);
  if (tree.nodes.size() <= index) tree.nodes.resize(index + 1);
  tree.nodes[index] = std::move(node);
  for (const auto& c : j.at("children")) node_from_json(tree, c, j.at("id").get<TreeNodeId>());
}

}  // namespace

nlohmann::json hierarchy_to_json(const ClusterTree& tree) {
  json j;
  j["format"] = "hcviz-hierarchy";
  j["version"] = 1;
  j["graph_nodes"] = tree.graph_nodes;
  j["no_structure"] = tree.no_structure;
  j["bottom_exempt"] = tree.bottom_exempt;
  j["strict_global"] = tree.strict_global;
  j["best_q"] = tree.best_q;
  j["best_p"] = optional_number(tree.best_p);
  j["global_threshold"] = tree.global_threshold;
  j["null"] = {{"trials", tree.global_null.samples.size()},
               {"seed", tree.global_null.seed},
               {"external", tree.global_null.external},
               {"samples", tree.global_null.samples}};
  const auto& cfg = tree.config;
  j["config"] = {{"trials", cfg.trials},
                 {"alpha", cfg.alpha},
                 {"seed", cfg.seed},
                 {"min_subgraph_trials", cfg.min_subgraph_trials},
                 {"min_cluster_size", cfg.min_cluster_size},
                 {"local_move_passes", cfg.maximizer.local_move_passes},
                 {"maximizer_seed", cfg.maximizer.seed},
                 {"swaps_per_edge", cfg.swaps.swaps_per_edge},
                 {"external_threshold", optional_number(cfg.external_threshold)}};
  j["best_level"] = tree.best_level;
  j["root"] = tree.root;
  j["coarse_chain"] = json::array();
  for (const auto& s : tree.coarse_chain) {
    j["coarse_chain"].push_back(
        {{"first", s.first}, {"second", s.second}, {"merged", s.merged}, {"delta", s.delta}, {"q", s.q_after}});
  }
  j["tree"] = node_to_json(tree, tree.root);
  return j;
}

ClusterTree hierarchy_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("format", "") != "hcviz-hierarchy") throw Error(ErrorKind::parse, "not a hierarchy document");
    ClusterTree tree;
    tree.graph_nodes = doc.at("graph_nodes").get<std::size_t>();
    tree.no_structure = doc.at("no_structure").get<bool>();
    tree.bottom_exempt = doc.at("bottom_exempt").get<bool>();
    tree.strict_global = doc.at("strict_global").get<bool>();
    tree.best_q = doc.at("best_q").get<double>();
    tree.best_p = read_optional(doc, "best_p");
    tree.global_threshold = doc.at("global_threshold").get<double>();
    const auto& null = doc.at("null");
    tree.global_null.samples = null.at("samples").get<std::vector<double>>();
    tree.global_null.trials = tree.global_null.samples.size();
    tree.global_null.seed = null.at("seed").get<std::uint64_t>();
    tree.global_null.external = null.at("external").get<bool>();
    tree.global_null.threshold = tree.global_threshold;
    const auto& cfg = doc.at("config");
    tree.config.trials = cfg.at("trials").get<std::size_t>();
    tree.config.alpha = cfg.at("alpha").get<double>();
    tree.config.seed = cfg.at("seed").get<std::uint64_t>();
    tree.config.min_subgraph_trials = cfg.at("min_subgraph_trials").get<std::size_t>();
    tree.config.min_cluster_size = cfg.at("min_cluster_size").get<std::size_t>();
    tree.config.maximizer.local_move_passes = cfg.at("local_move_passes").get<int>();
    tree.config.maximizer.seed = cfg.at("maximizer_seed").get<std::uint64_t>();
    tree.config.swaps.swaps_per_edge = cfg.at("swaps_per_edge").get<double>();
    tree.config.external_threshold = read_optional(cfg, "external_threshold");
    tree.config.strict_global = tree.strict_global;
    tree.best_level = doc.at("best_level").get<std::vector<TreeNodeId>>();
    tree.root = doc.at("root").get<TreeNodeId>();
    for (const auto& s : doc.at("coarse_chain")) {
      tree.coarse_chain.push_back({s.at("first").get<ClusterId>(), s.at("second").get<ClusterId>(),
                                   s.at("merged").get<ClusterId>(), s.at("delta").get<double>(),
                                   s.at("q").get<double>()});
    }
    node_from_json(tree, doc.at("tree"), -1);
    check_tree(tree);
    return tree;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("hierarchy document: ") + e.what());
  }
}

}  // namespace hcviz
