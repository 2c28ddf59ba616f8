#include "hcviz/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_set>

#include "hcviz/error.hpp"
#include "text.hpp"

namespace hcviz {

std::int64_t DegreeSequence::total() const {
  return std::accumulate(degrees.begin(), degrees.end(), std::int64_t{0});
}

Graph Graph::from_edges(std::size_t node_count, std::vector<Edge> edges,
                        std::vector<std::string> tokens) {
  Graph g;
  g.node_count_ = node_count;
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= node_count ||
        static_cast<std::size_t>(e.v) >= node_count) {
      throw Error(ErrorKind::invalid_argument, "edge endpoint out of range");
    }
    if (e.u == e.v) throw Error(ErrorKind::invalid_argument, "self-loop");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw Error(ErrorKind::invalid_argument, "duplicate edge");
  }
  g.edges_ = std::move(edges);

  std::vector<std::size_t> degree(node_count, 0);
  for (const auto& e : g.edges_) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  g.offsets_.assign(node_count + 1, 0);
  for (std::size_t v = 0; v < node_count; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  // edges are sorted, so each adjacency row comes out sorted too
  for (const auto& e : g.edges_) g.adjacency_[fill[static_cast<std::size_t>(e.u)]++] = e.v;
  for (const auto& e : g.edges_) g.adjacency_[fill[static_cast<std::size_t>(e.v)]++] = e.u;
  for (std::size_t v = 0; v < node_count; ++v) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
  }

  if (tokens.empty()) {
    tokens.reserve(node_count);
    for (std::size_t v = 0; v < node_count; ++v) tokens.push_back(std::to_string(v));
  }
  if (tokens.size() != node_count) {
    throw Error(ErrorKind::invalid_argument, "token count does not match node count");
  }
  g.tokens_ = std::move(tokens);
  g.index_.reserve(node_count);
  for (std::size_t v = 0; v < node_count; ++v) {
    if (!g.index_.emplace(g.tokens_[v], static_cast<NodeId>(v)).second) {
      throw Error(ErrorKind::invalid_argument, "duplicate node token '" + g.tokens_[v] + "'");
    }
  }
  return g;
}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  const auto i = static_cast<std::size_t>(v);
  return {adjacency_.data() + offsets_.at(i), offsets_.at(i + 1) - offsets_[i]};
}

std::int64_t Graph::degree(NodeId v) const {
  const auto i = static_cast<std::size_t>(v);
  return static_cast<std::int64_t>(offsets_.at(i + 1) - offsets_[i]);
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= node_count_ ||
      static_cast<std::size_t>(b) >= node_count_) {
    return false;
  }
  auto row = neighbors(a);
  return std::binary_search(row.begin(), row.end(), b);
}

DegreeSequence Graph::degree_sequence() const {
  DegreeSequence seq;
  seq.degrees.resize(node_count_);
  for (std::size_t v = 0; v < node_count_; ++v) seq.degrees[v] = degree(static_cast<NodeId>(v));
  return seq;
}

std::optional<NodeId> Graph::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Attribute* Graph::attribute(std::string_view name) const {
  for (const auto& a : attributes_) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

Graph Graph::with_attribute(Attribute attribute) const {
  if (attribute.labels.size() != node_count_) {
    throw Error(ErrorKind::invalid_argument,
                "attribute '" + attribute.name + "' has wrong label count");
  }
  Graph g = *this;
  for (auto& a : g.attributes_) {
    if (a.name == attribute.name) {
      a = std::move(attribute);
      return g;
    }
  }
  g.attributes_.push_back(std::move(attribute));
  return g;
}

EdgeListLoad load_edge_list(std::string_view text) {
  EdgeListLoad out;
  std::vector<std::string> tokens;
  std::unordered_map<std::string, NodeId> ids;
  std::set<Edge> seen;
  std::vector<Edge> edges;

  auto intern = [&](std::string_view tok) {
    auto [it, inserted] = ids.emplace(std::string(tok), static_cast<NodeId>(tokens.size()));
    if (inserted) tokens.emplace_back(tok);
    return it->second;
  };

  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto fields = detail::split_whitespace(line);
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected two node tokens, found " + std::to_string(fields.size()));
    }
    NodeId a = intern(fields[0]);
    NodeId b = intern(fields[1]);
    if (a == b) {
      ++out.self_loops_dropped;
      continue;
    }
    Edge e{std::min(a, b), std::max(a, b)};
    if (!seen.insert(e).second) {
      ++out.duplicates_dropped;
      continue;
    }
    edges.push_back(e);
  }
  const std::size_t n = tokens.size();
  out.graph = Graph::from_edges(n, std::move(edges), std::move(tokens));
  return out;
}

AttributeLoad load_attributes(std::string_view text, const Graph& graph) {
  AttributeLoad out;
  auto lines = detail::split_lines(text);

  std::size_t line_no = 0;
  std::size_t header_line = 0;
  std::vector<std::string> header;
  char delimiter = ',';
  for (; line_no < lines.size(); ++line_no) {
    auto line = detail::trim(lines[line_no]);
    if (line.empty() || line.front() == '#') continue;
    delimiter = line.find('\t') != std::string_view::npos ? '\t' : ',';
    for (auto f : detail::split_delimited(line, delimiter)) header.emplace_back(detail::trim(f));
    header_line = ++line_no;
    break;
  }
  if (header.empty()) {
    out.graph = graph;
    return out;
  }
  if (header.size() < 2) {
    throw ParseError(header_line, "attribute header needs a node column and at least one attribute");
  }

  const std::size_t columns = header.size() - 1;
  std::vector<std::vector<std::string>> labels(
      columns, std::vector<std::string>(graph.node_count(), std::string(kMissingCategory)));
  std::unordered_set<std::string> rows_seen;

  for (; line_no < lines.size(); ++line_no) {
    auto line = detail::trim(lines[line_no]);
    if (line.empty() || line.front() == '#') continue;
    auto fields = detail::split_delimited(line, delimiter);
    if (fields.size() != header.size()) {
      throw ParseError(line_no + 1, "expected " + std::to_string(header.size()) + " columns, found " +
                                        std::to_string(fields.size()));
    }
    std::string token(detail::trim(fields[0]));
    if (!rows_seen.insert(token).second) {
      throw ParseError(line_no + 1, "duplicate row for node '" + token + "'");
    }
    auto id = graph.find(token);
    if (!id) {
      out.warnings.push_back("line " + std::to_string(line_no + 1) + ": node '" + token +
                             "' not in graph");
      continue;
    }
    for (std::size_t c = 0; c < columns; ++c) {
      auto value = detail::trim(fields[c + 1]);
      if (!value.empty()) labels[c][static_cast<std::size_t>(*id)] = std::string(value);
    }
  }

  out.graph = graph;
  for (std::size_t c = 0; c < columns; ++c) {
    out.graph = out.graph.with_attribute(Attribute{header[c + 1], std::move(labels[c])});
  }
  return out;
}

std::vector<std::vector<NodeId>> connected_components(const Graph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<bool> visited(n, false);
  std::vector<std::vector<NodeId>> components;
  std::queue<NodeId> frontier;
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    std::vector<NodeId> comp;
    visited[start] = true;
    frontier.push(static_cast<NodeId>(start));
    while (!frontier.empty()) {
      NodeId v = frontier.front();
      frontier.pop();
      comp.push_back(v);
      for (NodeId u : graph.neighbors(v)) {
        if (!visited[static_cast<std::size_t>(u)]) {
          visited[static_cast<std::size_t>(u)] = true;
          frontier.push(u);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  // discovered in order of smallest member, so a stable sort by size suffices
  std::stable_sort(components.begin(), components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return components;
}

Subgraph induced_subgraph(const Graph& graph, std::span<const NodeId> nodes) {
  std::vector<NodeId> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const auto n = graph.node_count();
  std::vector<NodeId> local(n, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    NodeId v = keep[i];
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      throw Error(ErrorKind::not_found, "unknown node id " + std::to_string(v));
    }
    local[static_cast<std::size_t>(v)] = static_cast<NodeId>(i);
  }

  std::vector<Edge> edges;
  std::vector<std::string> tokens;
  tokens.reserve(keep.size());
  for (NodeId v : keep) {
    tokens.push_back(graph.token(v));
    for (NodeId u : graph.neighbors(v)) {
      if (u > v && local[static_cast<std::size_t>(u)] >= 0) {
        edges.push_back({local[static_cast<std::size_t>(v)], local[static_cast<std::size_t>(u)]});
      }
    }
  }

  Subgraph sub{Graph::from_edges(keep.size(), std::move(edges), std::move(tokens)), keep};
  for (const auto& attr : graph.attributes()) {
    Attribute copy{attr.name, {}};
    copy.labels.reserve(keep.size());
    for (NodeId v : keep) copy.labels.push_back(attr.labels[static_cast<std::size_t>(v)]);
    sub.graph = sub.graph.with_attribute(std::move(copy));
  }
  return sub;
}

Subgraph largest_component(const Graph& graph) {
  auto components = connected_components(graph);
  if (components.empty()) return {graph, {}};
  return induced_subgraph(graph, components.front());
}

}  // namespace hcviz
