#include "hcviz/modularity.hpp"

#include <algorithm>
#include <numeric>

#include "hcviz/error.hpp"
#include "hcviz/random.hpp"

namespace hcviz {

namespace {

void require_edges(const Graph& graph) {
  if (graph.edge_count() == 0) {
    throw Error(ErrorKind::invalid_argument, "modularity is undefined on an edgeless graph");
  }
}

ClusterId checked_cluster_count(const Graph& graph, std::span<const ClusterId> assignment) {
  if (assignment.size() != graph.node_count()) {
    throw Error(ErrorKind::invalid_argument, "partition does not cover the graph");
  }
  ClusterId k = 0;
  for (ClusterId c : assignment) {
    if (c < 0) throw Error(ErrorKind::invalid_argument, "negative cluster label");
    k = std::max(k, c + 1);
  }
  return k;
}

}  // namespace

double modularity(const Graph& graph, std::span<const ClusterId> assignment) {
  ClusterLedger ledger(graph, assignment);
  return static_cast<double>(ledger.scaled_modularity()) / ledger.denominator();
}

ClusterLedger::ClusterLedger(const Graph& graph, std::span<const ClusterId> assignment) {
  require_edges(graph);
  const auto k = static_cast<std::size_t>(checked_cluster_count(graph, assignment));
  m_ = static_cast<std::int64_t>(graph.edge_count());
  intra_.assign(k, 0);
  degree_.assign(k, 0);
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    degree_[static_cast<std::size_t>(assignment[v])] += graph.degree(static_cast<NodeId>(v));
  }
  for (const auto& e : graph.edges()) {
    ClusterId a = assignment[static_cast<std::size_t>(e.u)];
    ClusterId b = assignment[static_cast<std::size_t>(e.v)];
    if (a == b) {
      ++intra_[static_cast<std::size_t>(a)];
    } else {
      ++between_[{std::min(a, b), std::max(a, b)}];
    }
  }
}

void ClusterLedger::check(ClusterId c) const {
  if (c < 0 || static_cast<std::size_t>(c) >= degree_.size()) {
    throw Error(ErrorKind::invalid_argument, "invalid cluster id " + std::to_string(c));
  }
}

std::int64_t ClusterLedger::between(ClusterId a, ClusterId b) const {
  check(a);
  check(b);
  auto it = between_.find({std::min(a, b), std::max(a, b)});
  return it == between_.end() ? 0 : it->second;
}

std::int64_t ClusterLedger::scaled_modularity() const {
  std::int64_t sum = 0;
  for (std::size_t c = 0; c < degree_.size(); ++c) {
    sum += 4 * m_ * intra_[c] - degree_[c] * degree_[c];
  }
  return sum;
}

std::int64_t ClusterLedger::scaled_merge_delta(ClusterId a, ClusterId b) const {
  if (a == b) throw Error(ErrorKind::invalid_argument, "cannot merge a cluster with itself");
  return 4 * m_ * between(a, b) - 2 * degree(a) * degree(b);
}

double ClusterLedger::merge_delta(ClusterId a, ClusterId b) const {
  return static_cast<double>(scaled_merge_delta(a, b)) / denominator();
}

double merge_delta(const Graph& graph, const Partition& partition, ClusterId a, ClusterId b) {
  ClusterLedger ledger(graph, partition.assignment);
  return ledger.merge_delta(a, b);
}

namespace {

// Mutable clustering state for the greedy maximizer. Every gain is an
// exact integer scaled by 4m^2.
class Agglomerator {
 public:
  explicit Agglomerator(const Graph& graph)
      : graph_(graph),
        m_(static_cast<std::int64_t>(graph.edge_count())),
        cluster_of_(graph.node_count()),
        degree_(graph.node_count()),
        intra_(graph.node_count(), 0),
        links_(graph.node_count()),
        members_(graph.node_count()) {
    for (std::size_t v = 0; v < graph.node_count(); ++v) {
      const auto id = static_cast<NodeId>(v);
      cluster_of_[v] = id;
      degree_[v] = graph.degree(id);
      members_[v] = {id};
      for (NodeId u : graph.neighbors(id)) links_[v][u] = 1;
    }
  }

  bool merge_phase() {
    bool changed = false;
    while (true) {
      std::int64_t best_gain = 0;
      ClusterId best_a = -1;
      ClusterId best_b = -1;
      for (std::size_t a = 0; a < links_.size(); ++a) {
        for (auto it = links_[a].upper_bound(static_cast<ClusterId>(a)); it != links_[a].end(); ++it) {
          const auto b = static_cast<std::size_t>(it->first);
          const std::int64_t gain = 4 * m_ * it->second - 2 * degree_[a] * degree_[b];
          if (gain > best_gain) {
            best_gain = gain;
            best_a = static_cast<ClusterId>(a);
            best_b = it->first;
          }
        }
      }
      if (best_a < 0) return changed;
      merge(best_a, best_b);
      changed = true;
    }
  }

  bool move_phase(Rng& rng, int max_passes) {
    const std::size_t n = graph_.node_count();
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

    bool changed = false;
    std::map<ClusterId, std::int64_t> counts;
    for (int pass = 0; pass < max_passes; ++pass) {
      bool moved = false;
      for (NodeId v : order) {
        const std::int64_t kv = graph_.degree(v);
        if (kv == 0) continue;
        counts.clear();
        for (NodeId u : graph_.neighbors(v)) ++counts[cluster_of_[static_cast<std::size_t>(u)]];
        const ClusterId from = cluster_of_[static_cast<std::size_t>(v)];
        const std::int64_t k_from = counts.count(from) ? counts[from] : 0;
        const std::int64_t d_from = degree_[static_cast<std::size_t>(from)];

        std::int64_t best_gain = 0;
        ClusterId best = -1;
        for (const auto& [to, k_to] : counts) {
          if (to == from) continue;
          const std::int64_t d_to = degree_[static_cast<std::size_t>(to)];
          const std::int64_t gain = 4 * m_ * (k_to - k_from) + 2 * kv * (d_from - d_to - kv);
          if (gain > best_gain) {
            best_gain = gain;
            best = to;
          }
        }
        if (best >= 0) {
          move(v, from, best);
          moved = true;
        }
      }
      if (!moved) break;
      changed = true;
    }
    return changed;
  }

  std::vector<ClusterId> labels() const { return cluster_of_; }

 private:
  void add_link(ClusterId a, ClusterId b, std::int64_t w) {
    auto& ab = links_[static_cast<std::size_t>(a)][b];
    auto& ba = links_[static_cast<std::size_t>(b)][a];
    ab += w;
    ba += w;
    if (ab == 0) {
      links_[static_cast<std::size_t>(a)].erase(b);
      links_[static_cast<std::size_t>(b)].erase(a);
    }
  }

  void merge(ClusterId a, ClusterId b) {
    const auto ai = static_cast<std::size_t>(a);
    const auto bi = static_cast<std::size_t>(b);
    intra_[ai] += intra_[bi] + links_[ai][b];
    degree_[ai] += degree_[bi];
    links_[ai].erase(b);
    auto moved_links = std::move(links_[bi]);
    links_[bi].clear();
    for (const auto& [c, w] : moved_links) {
      if (c == a) continue;
      links_[static_cast<std::size_t>(c)].erase(b);
      add_link(a, c, w);
    }
    for (NodeId v : members_[bi]) cluster_of_[static_cast<std::size_t>(v)] = a;
    members_[ai].insert(members_[ai].end(), members_[bi].begin(), members_[bi].end());
    members_[bi].clear();
    degree_[bi] = 0;
    intra_[bi] = 0;
  }

  void move(NodeId v, ClusterId from, ClusterId to) {
    for (NodeId u : graph_.neighbors(v)) {
      const ClusterId c = cluster_of_[static_cast<std::size_t>(u)];
      if (c == from) {
        --intra_[static_cast<std::size_t>(from)];
      } else {
        add_link(from, c, -1);
      }
      if (c == to) {
        ++intra_[static_cast<std::size_t>(to)];
      } else {
        add_link(to, c, 1);
      }
    }
    const std::int64_t kv = graph_.degree(v);
    degree_[static_cast<std::size_t>(from)] -= kv;
    degree_[static_cast<std::size_t>(to)] += kv;
    cluster_of_[static_cast<std::size_t>(v)] = to;
    auto& src = members_[static_cast<std::size_t>(from)];
    src.erase(std::find(src.begin(), src.end(), v));
    members_[static_cast<std::size_t>(to)].push_back(v);
  }

  const Graph& graph_;
  std::int64_t m_;
  std::vector<ClusterId> cluster_of_;
  std::vector<std::int64_t> degree_;
  std::vector<std::int64_t> intra_;
  std::vector<std::map<ClusterId, std::int64_t>> links_;
  std::vector<std::vector<NodeId>> members_;
};

}  // namespace

Partition greedy_maximize(const Graph& graph, const MaximizerConfig& config) {
  require_edges(graph);
  Agglomerator state(graph);
  Rng rng(config.seed);
  while (true) {
    state.merge_phase();
    if (config.local_move_passes <= 0 || !state.move_phase(rng, config.local_move_passes)) break;
  }
  return make_partition(graph, state.labels());
}

namespace {

struct Enumeration {
  const Graph& graph;
  std::int64_t m;
  std::vector<ClusterId> assign;
  std::vector<std::int64_t> degree;
  std::int64_t best = 0;
  ClusterId best_k = 0;
  std::vector<ClusterId> best_assign;

  void visit(std::size_t v, ClusterId k, std::int64_t score) {
    const std::size_t n = assign.size();
    if (v == n) {
      if (best_assign.empty() || score > best || (score == best && k < best_k)) {
        best = score;
        best_k = k;
        best_assign = assign;
      }
      return;
    }
    const auto id = static_cast<NodeId>(v);
    const std::int64_t kv = graph.degree(id);
    for (ClusterId c = 0; c <= k && c < static_cast<ClusterId>(n); ++c) {
      std::int64_t k_in = 0;
      for (NodeId u : graph.neighbors(id)) {
        if (static_cast<std::size_t>(u) < v && assign[static_cast<std::size_t>(u)] == c) ++k_in;
      }
      auto& dc = degree[static_cast<std::size_t>(c)];
      const std::int64_t delta = 4 * m * k_in - (2 * dc * kv + kv * kv);
      assign[v] = c;
      dc += kv;
      visit(v + 1, c == k ? k + 1 : k, score + delta);
      dc -= kv;
    }
  }
};

}  // namespace

Partition brute_force_optimal(const Graph& graph) {
  require_edges(graph);
  if (graph.node_count() > kBruteForceMaxNodes) {
    throw Error(ErrorKind::refused, "exhaustive search refused for " +
                                        std::to_string(graph.node_count()) + " nodes (limit " +
                                        std::to_string(kBruteForceMaxNodes) + ")");
  }
  Enumeration e{graph, static_cast<std::int64_t>(graph.edge_count()),
                std::vector<ClusterId>(graph.node_count(), 0),
                std::vector<std::int64_t>(graph.node_count(), 0), 0, 0, {}};
  e.visit(0, 0, 0);
  return make_partition(graph, e.best_assign);
}

}  // namespace hcviz
