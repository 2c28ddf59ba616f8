#include "hcviz/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "hcviz/error.hpp"
#include "hcviz/modularity.hpp"
#include "text.hpp"

namespace hcviz {

std::vector<std::vector<NodeId>> Partition::members() const {
  std::vector<std::vector<NodeId>> out(static_cast<std::size_t>(cluster_count));
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    out.at(static_cast<std::size_t>(assignment[v])).push_back(static_cast<NodeId>(v));
  }
  return out;
}

std::vector<ClusterId> normalize_labels(std::span<const ClusterId> labels) {
  std::unordered_map<ClusterId, ClusterId> relabel;
  std::vector<ClusterId> out;
  out.reserve(labels.size());
  for (ClusterId c : labels) {
    if (c < 0) throw Error(ErrorKind::invalid_argument, "negative cluster label");
    auto [it, inserted] = relabel.emplace(c, static_cast<ClusterId>(relabel.size()));
    out.push_back(it->second);
  }
  return out;
}

Partition make_partition(const Graph& graph, std::span<const ClusterId> labels) {
  if (labels.size() != graph.node_count()) {
    throw Error(ErrorKind::invalid_argument, "partition does not cover the graph");
  }
  Partition p;
  p.assignment = normalize_labels(labels);
  p.cluster_count = p.assignment.empty()
                        ? 0
                        : *std::max_element(p.assignment.begin(), p.assignment.end()) + 1;
  p.modularity = modularity(graph, p.assignment);
  return p;
}

std::int64_t QuotientGraph::total_weight() const {
  std::int64_t w = 0;
  for (const auto& e : edges) w += e.weight;
  return w;
}

std::int64_t QuotientGraph::total_size() const {
  std::int64_t s = 0;
  for (const auto& n : nodes) s += n.size;
  return s;
}

QuotientGraph quotient_graph(const Graph& graph, std::span<const ClusterId> assignment,
                             std::span<const std::int64_t> ids) {
  if (assignment.size() != graph.node_count()) {
    throw Error(ErrorKind::invalid_argument, "partition does not cover the graph");
  }
  ClusterId k = 0;
  for (ClusterId c : assignment) {
    if (c < 0) throw Error(ErrorKind::invalid_argument, "negative cluster label");
    k = std::max(k, c + 1);
  }
  if (!ids.empty() && ids.size() != static_cast<std::size_t>(k)) {
    throw Error(ErrorKind::invalid_argument, "cluster id list does not match cluster count");
  }

  QuotientGraph q;
  q.nodes.resize(static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < q.nodes.size(); ++c) {
    q.nodes[c].id = ids.empty() ? static_cast<std::int64_t>(c) : ids[c];
  }
  for (ClusterId c : assignment) ++q.nodes[static_cast<std::size_t>(c)].size;
  for (const auto& n : q.nodes) {
    if (n.size == 0) throw Error(ErrorKind::invalid_argument, "empty cluster in assignment");
  }

  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> weights;
  for (const auto& e : graph.edges()) {
    auto a = static_cast<std::size_t>(assignment[static_cast<std::size_t>(e.u)]);
    auto b = static_cast<std::size_t>(assignment[static_cast<std::size_t>(e.v)]);
    if (a == b) {
      ++q.intra_edges;
    } else {
      ++weights[{std::min(a, b), std::max(a, b)}];
    }
  }
  q.edges.reserve(weights.size());
  for (const auto& [pair, w] : weights) q.edges.push_back({pair.first, pair.second, w});
  return q;
}

std::string format_partition_tsv(const Graph& graph, const Partition& partition,
                                 std::span<const std::int64_t> cluster_ids) {
  std::string out = "# clusters=" + std::to_string(partition.cluster_count) +
                    " modularity=" + detail::format_fixed(partition.modularity, 6) + "\n";
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    out += graph.token(static_cast<NodeId>(v));
    out += '\t';
    const auto c = partition.assignment.at(v);
    out += std::to_string(cluster_ids.empty() ? static_cast<std::int64_t>(c)
                                              : cluster_ids[static_cast<std::size_t>(c)]);
    out += '\n';
  }
  return out;
}

Partition parse_partition_tsv(std::string_view text, const Graph& graph) {
  std::vector<ClusterId> labels(graph.node_count(), -1);
  std::size_t line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto fields = detail::split_delimited(line, '\t');
    if (fields.size() != 2) throw ParseError(line_no, "expected token<TAB>cluster");
    auto id = graph.find(detail::trim(fields[0]));
    if (!id) throw ParseError(line_no, "unknown node '" + std::string(fields[0]) + "'");
    ClusterId c = 0;
    try {
      c = static_cast<ClusterId>(std::stol(std::string(detail::trim(fields[1]))));
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad cluster id");
    }
    if (c < 0) throw ParseError(line_no, "negative cluster id");
    auto& slot = labels[static_cast<std::size_t>(*id)];
    if (slot >= 0) throw ParseError(line_no, "node listed twice");
    slot = c;
  }
  if (std::find(labels.begin(), labels.end(), -1) != labels.end()) {
    throw Error(ErrorKind::invalid_argument, "partition does not cover the graph");
  }
  return make_partition(graph, labels);
}

}  // namespace hcviz
