#include "hcviz/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "hcviz/error.hpp"
#include "hcviz/random.hpp"

namespace hcviz {

const char* to_string(Repulsion mode) noexcept {
  switch (mode) {
    case Repulsion::source_weighted: return "source_weighted";
    case Repulsion::symmetric_weighted: return "symmetric_weighted";
    case Repulsion::uniform: return "uniform";
  }
  return "unknown";
}

const NodePlacement* Layout::find(std::int64_t id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const NodePlacement& p, std::int64_t v) { return p.id < v; });
  return it != nodes.end() && it->id == id ? &*it : nullptr;
}

const NodePlacement& Layout::at(std::int64_t id) const {
  if (const auto* p = find(id)) return *p;
  throw Error(ErrorKind::not_found, "node " + std::to_string(id) + " is not in the layout");
}

std::vector<std::int64_t> Layout::ids() const {
  std::vector<std::int64_t> out;
  out.reserve(nodes.size());
  for (const auto& p : nodes) out.push_back(p.id);
  return out;
}

double radius_for_size(std::int64_t size, double area_scale) {
  return std::sqrt(area_scale * static_cast<double>(size) / std::numbers::pi);
}

double ideal_distance(double area, std::int64_t total_size) {
  return std::sqrt(area / static_cast<double>(std::max<std::int64_t>(total_size, 1)));
}

namespace {

struct Body {
  double x = 0.0;
  double y = 0.0;
  double weight = 1.0;
  bool movable = true;
  bool anchored = false;
  double anchor_x = 0.0;
  double anchor_y = 0.0;
};

struct Spring {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 1.0;
};

double repulsion_scale(const LayoutConfig& cfg, const Body& from, const Body& to) {
  switch (cfg.repulsion) {
    case Repulsion::source_weighted: return from.weight;
    case Repulsion::symmetric_weighted: return from.weight * to.weight;
    case Repulsion::uniform: return 1.0;
  }
  return 1.0;
}

// Fixed iteration order and no parallel reductions, so the result is
// reproducible bit for bit.
void simulate(std::vector<Body>& bodies, const std::vector<Spring>& springs, double k, double t0,
              const LayoutConfig& cfg, LayoutTrace* trace) {
  const std::size_t n = bodies.size();
  const double min_distance = 1e-6 * k;
  const double k2 = k * k;
  std::vector<double> dx(n), dy(n);

  for (int t = 0; t < cfg.iterations; ++t) {
    const double temperature = t0 * (1.0 - static_cast<double>(t) / static_cast<double>(cfg.iterations));
    std::fill(dx.begin(), dx.end(), 0.0);
    std::fill(dy.begin(), dy.end(), 0.0);

    for (std::size_t j = 0; j < n; ++j) {
      if (!bodies[j].movable) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        double ux = bodies[j].x - bodies[i].x;
        double uy = bodies[j].y - bodies[i].y;
        double d = std::hypot(ux, uy);
        if (d == 0.0) {
          // coincident: separate along a direction fixed by the pair order
          const double angle = 2.399963229728653 * static_cast<double>(i < j ? i * n + j : j * n + i);
          ux = std::cos(angle) * (i < j ? 1.0 : -1.0);
          uy = std::sin(angle) * (i < j ? 1.0 : -1.0);
          d = 1.0;
        }
        const double dist = std::max(d, min_distance);
        const double force = repulsion_scale(cfg, bodies[i], bodies[j]) * k2 / dist;
        dx[j] += ux / d * force;
        dy[j] += uy / d * force;
      }
    }

    for (const auto& s : springs) {
      const double ux = bodies[s.a].x - bodies[s.b].x;
      const double uy = bodies[s.a].y - bodies[s.b].y;
      const double d = std::hypot(ux, uy);
      if (d == 0.0) continue;
      const double force = d * d / k * (cfg.weighted_attraction ? s.weight : 1.0);
      if (bodies[s.a].movable) {
        dx[s.a] -= ux / d * force;
        dy[s.a] -= uy / d * force;
      }
      if (bodies[s.b].movable) {
        dx[s.b] += ux / d * force;
        dy[s.b] += uy / d * force;
      }
    }

    for (std::size_t j = 0; j < n; ++j) {
      auto& b = bodies[j];
      if (!b.movable || !b.anchored) continue;
      const double ux = b.x - b.anchor_x;
      const double uy = b.y - b.anchor_y;
      const double d = std::hypot(ux, uy);
      if (d == 0.0) continue;
      const double force = cfg.anchor_stiffness * d * d / k;
      dx[j] -= ux / d * force;
      dy[j] -= uy / d * force;
    }

    double max_step = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      auto& b = bodies[j];
      if (!b.movable) continue;
      const double len = std::hypot(dx[j], dy[j]);
      if (len == 0.0) continue;
      const double step = std::min(len, temperature);
      b.x += dx[j] / len * step;
      b.y += dy[j] / len * step;
      max_step = std::max(max_step, step);
    }
    if (trace) {
      trace->temperature.push_back(temperature);
      trace->max_displacement.push_back(max_step);
    }
  }
}

std::vector<Spring> springs_of(const QuotientGraph& graph) {
  std::vector<Spring> out;
  out.reserve(graph.edges.size());
  for (const auto& e : graph.edges) out.push_back({e.source, e.target, static_cast<double>(e.weight)});
  return out;
}

void validate(const LayoutConfig& cfg) {
  if (cfg.iterations < 0) throw Error(ErrorKind::invalid_argument, "iterations must be non-negative");
  if (!(cfg.area > 0.0)) throw Error(ErrorKind::invalid_argument, "layout area must be positive");
  if (!(cfg.fill > 0.0)) throw Error(ErrorKind::invalid_argument, "fill must be positive");
}

void sort_by_id(std::vector<NodePlacement>& nodes) {
  std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

}  // namespace

Layout fr_layout(const QuotientGraph& graph, const LayoutConfig& cfg, LayoutTrace* trace) {
  validate(cfg);
  if (graph.nodes.empty()) throw Error(ErrorKind::invalid_argument, "cannot lay out an empty graph");
  Layout layout;
  layout.config = cfg;
  layout.width = std::sqrt(cfg.area);
  layout.height = layout.width;
  const std::int64_t total = graph.total_size();
  layout.area_scale = cfg.fill * cfg.area / static_cast<double>(std::max<std::int64_t>(total, 1));

  std::vector<Body> bodies(graph.nodes.size());
  if (bodies.size() == 1) {
    bodies[0].x = layout.width / 2.0;
    bodies[0].y = layout.height / 2.0;
  } else {
    Rng rng(cfg.seed);
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      bodies[i].x = rng.uniform() * layout.width;
      bodies[i].y = rng.uniform() * layout.height;
      bodies[i].weight = static_cast<double>(graph.nodes[i].size);
    }
    const double k = ideal_distance(cfg.area, total);
    const double t0 = cfg.initial_temperature * std::hypot(layout.width, layout.height);
    simulate(bodies, springs_of(graph), k, t0, cfg, trace);
  }

  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const auto& node = graph.nodes[i];
    layout.nodes.push_back(
        {node.id, node.size, bodies[i].x, bodies[i].y, radius_for_size(node.size, layout.area_scale)});
  }
  sort_by_id(layout.nodes);
  return layout;
}

Layout refine_layout(const Layout& parent, std::int64_t refined, const QuotientGraph& graph,
                     const LayoutConfig& cfg, LayoutTrace* trace) {
  validate(cfg);
  const NodePlacement& origin = parent.at(refined);

  std::vector<std::size_t> child_index;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto id = graph.nodes[i].id;
    if (id == refined) throw Error(ErrorKind::invalid_argument, "refined node is still in the quotient");
    if (!parent.find(id)) child_index.push_back(i);
  }
  for (const auto& p : parent.nodes) {
    if (p.id == refined) continue;
    const bool present = std::any_of(graph.nodes.begin(), graph.nodes.end(),
                                     [&](const QuotientNode& q) { return q.id == p.id; });
    if (!present) throw Error(ErrorKind::invalid_argument, "quotient is missing node " + std::to_string(p.id));
  }
  if (child_index.empty()) throw Error(ErrorKind::invalid_argument, "refinement has no children");

  Layout out;
  out.config = parent.config;
  out.width = parent.width;
  out.height = parent.height;
  out.area_scale = parent.area_scale;
  out.stash = parent.stash;
  for (const auto& p : parent.nodes) {
    if (p.id != refined) out.nodes.push_back(p);
  }

  if (auto it = out.stash.find(refined); it != out.stash.end()) {
    std::vector<std::int64_t> stashed;
    for (const auto& p : it->second) stashed.push_back(p.id);
    std::vector<std::int64_t> wanted;
    for (std::size_t i : child_index) wanted.push_back(graph.nodes[i].id);
    std::sort(stashed.begin(), stashed.end());
    std::sort(wanted.begin(), wanted.end());
    if (stashed == wanted) {
      out.nodes.insert(out.nodes.end(), it->second.begin(), it->second.end());
      out.stash.erase(it);
      sort_by_id(out.nodes);
      return out;
    }
  }
  out.stash.erase(refined);

  std::vector<Body> bodies(graph.nodes.size());
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    bodies[i].weight = static_cast<double>(graph.nodes[i].size);
    if (const auto* p = parent.find(graph.nodes[i].id)) {
      bodies[i].x = p->x;
      bodies[i].y = p->y;
      bodies[i].movable = false;
    }
  }

  const std::size_t c = child_index.size();
  if (c == 1) {
    bodies[child_index[0]].x = origin.x;
    bodies[child_index[0]].y = origin.y;
  } else {
    Rng rng(cfg.seed);
    const double phase = rng.uniform() * 2.0 * std::numbers::pi;
    const double ring = origin.radius / 2.0;
    for (std::size_t j = 0; j < c; ++j) {
      auto& b = bodies[child_index[j]];
      const double angle = phase + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(c);
      b.x = origin.x + ring * std::cos(angle);
      b.y = origin.y + ring * std::sin(angle);
      b.anchored = true;
      b.anchor_x = origin.x;
      b.anchor_y = origin.y;
    }
    const double k = ideal_distance(cfg.area, graph.total_size());
    const double t0 = std::max(origin.radius, cfg.initial_temperature * k);
    simulate(bodies, springs_of(graph), k, t0, cfg, trace);
  }

  for (std::size_t i : child_index) {
    const auto& node = graph.nodes[i];
    out.nodes.push_back({node.id, node.size, bodies[i].x, bodies[i].y, radius_for_size(node.size, out.area_scale)});
  }
  sort_by_id(out.nodes);
  return out;
}

Layout coarsen_layout(const Layout& layout, std::span<const std::int64_t> merged, std::int64_t new_id) {
  if (merged.empty()) throw Error(ErrorKind::invalid_argument, "nothing to merge");
  std::vector<NodePlacement> removed;
  for (std::int64_t id : merged) removed.push_back(layout.at(id));
  if (layout.find(new_id) && std::find(merged.begin(), merged.end(), new_id) == merged.end()) {
    throw Error(ErrorKind::invalid_argument, "node " + std::to_string(new_id) + " already exists");
  }
  sort_by_id(removed);

  std::int64_t size = 0;
  double wx = 0.0;
  double wy = 0.0;
  for (const auto& p : removed) {
    size += p.size;
    wx += static_cast<double>(p.size) * p.x;
    wy += static_cast<double>(p.size) * p.y;
  }
  const double total = static_cast<double>(size);

  Layout out = layout;
  out.nodes.clear();
  for (const auto& p : layout.nodes) {
    if (std::find(merged.begin(), merged.end(), p.id) == merged.end()) out.nodes.push_back(p);
  }
  out.nodes.push_back({new_id, size, wx / total, wy / total, radius_for_size(size, layout.area_scale)});
  sort_by_id(out.nodes);
  out.stash[new_id] = std::move(removed);
  return out;
}

}  // namespace hcviz
