#include "hcviz/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hcviz/error.hpp"
#include "hcviz/random.hpp"
#include "text.hpp"

namespace hcviz {

using nlohmann::json;

StatMode parse_stat_mode(std::string_view text) {
  if (text.empty() || text == "none") return StatMode::none;
  if (text == "p" || text == "p-value" || text == "p_value") return StatMode::p_value;
  if (text == "residual") return StatMode::residual;
  throw Error(ErrorKind::invalid_argument, "unknown stat mode '" + std::string(text) + "'");
}

const char* to_string(StatMode mode) noexcept {
  switch (mode) {
    case StatMode::none: return "none";
    case StatMode::p_value: return "p-value";
    case StatMode::residual: return "residual";
  }
  return "none";
}

namespace {

constexpr std::pair<ExportFormat, const char*> kFormats[] = {
    {ExportFormat::svg, "svg"},
    {ExportFormat::view_json, "view-json"},
    {ExportFormat::hierarchy_json, "hierarchy-json"},
    {ExportFormat::partition_tsv, "partition-tsv"},
    {ExportFormat::layout_json, "layout-json"},
    {ExportFormat::stats_tsv, "stats-tsv"},
};

Repulsion parse_repulsion(std::string_view text) {
  for (auto r : {Repulsion::source_weighted, Repulsion::symmetric_weighted, Repulsion::uniform}) {
    if (text == to_string(r)) return r;
  }
  throw Error(ErrorKind::invalid_argument, "unknown repulsion '" + std::string(text) + "'");
}

}  // namespace

ExportFormat parse_export_format(std::string_view text) {
  for (const auto& [format, name] : kFormats) {
    if (text == name) return format;
  }
  throw Error(ErrorKind::invalid_argument, "unknown export format '" + std::string(text) + "'");
}

const char* to_string(ExportFormat format) noexcept {
  for (const auto& [f, name] : kFormats) {
    if (f == format) return name;
  }
  return "svg";
}

HierarchyConfig PipelineParams::hierarchy_config() const {
  HierarchyConfig cfg;
  cfg.maximizer.seed = derive_seed(seed, "maximizer");
  cfg.maximizer.local_move_passes = local_move_passes;
  cfg.trials = trials;
  cfg.alpha = alpha;
  cfg.seed = derive_seed(seed, "hierarchy");
  cfg.jobs = jobs;
  cfg.min_subgraph_trials = min_subgraph_trials;
  cfg.min_cluster_size = min_cluster_size;
  cfg.strict_global = strict_global;
  cfg.external_threshold = external_threshold;
  return cfg;
}

LayoutConfig PipelineParams::layout_config() const {
  LayoutConfig cfg = layout;
  cfg.seed = derive_seed(seed, "layout");
  return cfg;
}

LayoutConfig PipelineParams::refine_layout_config(TreeNodeId node) const {
  LayoutConfig cfg = layout_config();
  cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(node));
  return cfg;
}

json PipelineParams::to_json() const {
  return {
      {"seed", seed},
      {"trials", trials},
      {"alpha", alpha},
      {"largest_component", largest_component},
      {"jobs", jobs},
      {"min_subgraph_trials", min_subgraph_trials},
      {"min_cluster_size", min_cluster_size},
      {"strict_global", strict_global},
      {"local_move_passes", local_move_passes},
      {"external_threshold", external_threshold ? json(*external_threshold) : json(nullptr)},
      {"layout",
       {{"iterations", layout.iterations},
        {"area", layout.area},
        {"initial_temperature", layout.initial_temperature},
        {"weighted_attraction", layout.weighted_attraction},
        {"repulsion", to_string(layout.repulsion)},
        {"anchor_stiffness", layout.anchor_stiffness},
        {"fill", layout.fill}}},
  };
}

PipelineParams PipelineParams::from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::invalid_argument, "params must be a JSON object");
  PipelineParams p;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "seed") {
        p.seed = value.get<std::uint64_t>();
      } else if (key == "trials") {
        p.trials = value.get<std::size_t>();
      } else if (key == "alpha") {
        p.alpha = value.get<double>();
      } else if (key == "largest_component") {
        p.largest_component = value.get<bool>();
      } else if (key == "jobs") {
        p.jobs = value.get<unsigned>();
      } else if (key == "min_subgraph_trials") {
        p.min_subgraph_trials = value.get<std::size_t>();
      } else if (key == "min_cluster_size") {
        p.min_cluster_size = value.get<std::size_t>();
      } else if (key == "strict_global") {
        p.strict_global = value.get<bool>();
      } else if (key == "local_move_passes") {
        p.local_move_passes = value.get<int>();
      } else if (key == "external_threshold") {
        if (!value.is_null()) p.external_threshold = value.get<double>();
      } else if (key == "layout") {
        if (!value.is_object()) throw Error(ErrorKind::invalid_argument, "layout must be an object");
        for (const auto& [lk, lv] : value.items()) {
          if (lk == "iterations") {
            p.layout.iterations = lv.get<int>();
          } else if (lk == "area") {
            p.layout.area = lv.get<double>();
          } else if (lk == "initial_temperature") {
            p.layout.initial_temperature = lv.get<double>();
          } else if (lk == "weighted_attraction") {
            p.layout.weighted_attraction = lv.get<bool>();
          } else if (lk == "repulsion") {
            p.layout.repulsion = parse_repulsion(lv.get<std::string>());
          } else if (lk == "anchor_stiffness") {
            p.layout.anchor_stiffness = lv.get<double>();
          } else if (lk == "fill") {
            p.layout.fill = lv.get<double>();
          } else {
            throw Error(ErrorKind::invalid_argument, "unknown layout parameter '" + lk + "'");
          }
        }
      } else {
        throw Error(ErrorKind::invalid_argument, "unknown parameter '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("bad parameter value: ") + e.what());
  }
  p.validate();
  return p;
}

void PipelineParams::validate() const {
  if (trials == 0) throw Error(ErrorKind::invalid_argument, "trials must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::invalid_argument, "alpha must lie in (0, 1)");
  if (local_move_passes < 0) throw Error(ErrorKind::invalid_argument, "local_move_passes must be >= 0");
  if (layout.iterations < 0) throw Error(ErrorKind::invalid_argument, "iterations must be >= 0");
  if (!(layout.area > 0.0)) throw Error(ErrorKind::invalid_argument, "area must be positive");
  if (!(layout.fill > 0.0 && layout.fill <= 1.0)) throw Error(ErrorKind::invalid_argument, "fill must lie in (0, 1]");
}

std::string PipelineParams::describe() const {
  std::string out = "effective config:";
  out += " seed=" + std::to_string(seed);
  out += " trials=" + std::to_string(trials);
  out += " alpha=" + detail::format_exact(alpha);
  out += " largest_component=" + std::string(largest_component ? "true" : "false");
  out += " jobs=" + std::to_string(jobs);
  out += " min_subgraph_trials=" + std::to_string(min_subgraph_trials);
  out += " min_cluster_size=" + std::to_string(min_cluster_size);
  out += " strict_global=" + std::string(strict_global ? "true" : "false");
  out += " local_move_passes=" + std::to_string(local_move_passes);
  out += " external_threshold=" + (external_threshold ? detail::format_exact(*external_threshold) : "none");
  out += " iterations=" + std::to_string(layout.iterations);
  out += " area=" + detail::format_exact(layout.area);
  out += " initial_temperature=" + detail::format_exact(layout.initial_temperature);
  out += " weighted_attraction=" + std::string(layout.weighted_attraction ? "true" : "false");
  out += " repulsion=" + std::string(to_string(layout.repulsion));
  out += " anchor_stiffness=" + detail::format_exact(layout.anchor_stiffness);
  out += " fill=" + detail::format_exact(layout.fill);
  return out;
}

PreparedGraph prepare_graph(std::string_view edges, std::string_view attributes, bool largest_component) {
  PreparedGraph out;
  auto loaded = load_edge_list(edges);
  out.report.input_nodes = loaded.graph.node_count();
  out.report.input_edges = loaded.graph.edge_count();
  out.report.duplicates_dropped = loaded.duplicates_dropped;
  out.report.self_loops_dropped = loaded.self_loops_dropped;
  Graph graph = std::move(loaded.graph);
  if (!attributes.empty()) {
    auto attached = load_attributes(attributes, graph);
    graph = std::move(attached.graph);
    out.report.warnings = std::move(attached.warnings);
  }
  out.report.components = connected_components(graph).size();
  if (largest_component && out.report.components > 1) graph = hcviz::largest_component(graph).graph;
  if (graph.edge_count() == 0) throw Error(ErrorKind::invalid_argument, "graph has no edges");
  out.graph = std::move(graph);
  return out;
}

namespace {

QuotientGraph view_quotient(const Graph& graph, const ViewState& view) {
  return quotient_graph(graph, view.partition.assignment, view.frontier);
}

json report_to_json(const IngestReport& r) {
  return {{"input_nodes", r.input_nodes},
          {"input_edges", r.input_edges},
          {"duplicates_dropped", r.duplicates_dropped},
          {"self_loops_dropped", r.self_loops_dropped},
          {"components", r.components},
          {"warnings", r.warnings}};
}

IngestReport report_from_json(const json& j) {
  IngestReport r;
  r.input_nodes = j.value("input_nodes", std::size_t{0});
  r.input_edges = j.value("input_edges", std::size_t{0});
  r.duplicates_dropped = j.value("duplicates_dropped", std::size_t{0});
  r.self_loops_dropped = j.value("self_loops_dropped", std::size_t{0});
  r.components = j.value("components", std::size_t{0});
  r.warnings = j.value("warnings", std::vector<std::string>{});
  return r;
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  json attrs = json::array();
  for (const auto& a : g.attributes()) attrs.push_back({{"name", a.name}, {"labels", a.labels}});
  return {{"nodes", g.node_count()},
          {"tokens", std::vector<std::string>(g.tokens().begin(), g.tokens().end())},
          {"edges", std::move(edges)},
          {"attributes", std::move(attrs)}};
}

Graph graph_from_json(const json& j) {
  const auto n = j.at("nodes").get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    NodeId u = e.at(0).get<NodeId>();
    NodeId v = e.at(1).get<NodeId>();
    edges.push_back({std::min(u, v), std::max(u, v)});
  }
  Graph g = Graph::from_edges(n, std::move(edges), j.at("tokens").get<std::vector<std::string>>());
  for (const auto& a : j.at("attributes")) {
    Attribute attr{a.at("name").get<std::string>(), a.at("labels").get<std::vector<std::string>>()};
    if (attr.labels.size() != n) throw Error(ErrorKind::parse, "attribute '" + attr.name + "' has the wrong length");
    g = g.with_attribute(std::move(attr));
  }
  return g;
}

// p = 1 renders white, p <= 1e-4 black, log-linear in between.
std::string gray_color(double p) {
  if (std::isnan(p)) return "#dddddd";
  const double darkness = std::clamp(-std::log10(std::max(p, 1e-300)) / 4.0, 0.0, 1.0);
  const int level = static_cast<int>(std::lround(255.0 * (1.0 - darkness)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", level, level, level);
  return buf;
}

// Residuals are clipped to +-4; red for over-, blue for under-representation.
std::string diverging_color(double r) {
  if (std::isnan(r)) return "#dddddd";
  const double t = std::clamp(std::abs(r) / 4.0, 0.0, 1.0);
  const int fade = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  char buf[8];
  if (r >= 0) {
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", 255, fade, fade);
  } else {
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", fade, fade, 255);
  }
  return buf;
}

std::string color_for(double value, StatMode mode) {
  switch (mode) {
    case StatMode::p_value: return gray_color(value);
    case StatMode::residual: return diverging_color(value);
    case StatMode::none: break;
  }
  return "#8aa9c9";
}

}  // namespace

Explorer::Explorer(Graph graph, ClusterTree tree, PipelineParams params, IngestReport report)
    : graph_(std::move(graph)),
      tree_(std::move(tree)),
      params_(std::move(params)),
      report_(std::move(report)),
      cache_mutex_(std::make_unique<std::mutex>()) {
  view_ = initial_view(tree_, graph_);
  layout_ = fr_layout(view_quotient(graph_, view_), params_.layout_config());
  check_sync();
}

Explorer::Explorer(const Explorer& other)
    : graph_(other.graph_),
      tree_(other.tree_),
      params_(other.params_),
      report_(other.report_),
      view_(other.view_),
      layout_(other.layout_),
      history_(other.history_),
      moves_(other.moves_),
      cache_mutex_(std::make_unique<std::mutex>()) {}

Explorer& Explorer::operator=(const Explorer& other) {
  if (this != &other) {
    Explorer copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Explorer::Explorer(Explorer&&) noexcept = default;
Explorer& Explorer::operator=(Explorer&&) noexcept = default;
Explorer::~Explorer() = default;

Explorer Explorer::run(PreparedGraph prepared, const PipelineParams& params, const Progress& progress) {
  if (progress) progress("hierarchy");
  ClusterTree tree = build_hierarchy(prepared.graph, params.hierarchy_config());
  if (progress) progress("layout");
  Explorer out(std::move(prepared.graph), std::move(tree), params, std::move(prepared.report));
  if (progress) progress("ready");
  return out;
}

Explorer Explorer::from_bundle(const json& bundle) {
  try {
    ClusterTree tree = hierarchy_from_json(bundle);
    Graph graph = graph_from_json(bundle.at("graph"));
    PipelineParams params = PipelineParams::from_json(bundle.at("params"));
    IngestReport report = bundle.contains("ingest") ? report_from_json(bundle.at("ingest")) : IngestReport{};
    Explorer out(std::move(graph), std::move(tree), std::move(params), std::move(report));
    if (bundle.contains("moves")) {
      for (const auto& m : bundle.at("moves")) {
        Move move{m.at("op").get<std::string>(), std::nullopt};
        if (m.contains("target") && !m.at("target").is_null()) move.target = m.at("target").get<TreeNodeId>();
        out.apply(move);
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("bundle: ") + e.what());
  }
}

void Explorer::check_sync() const {
  if (layout_.ids() != view_.frontier) {
    throw std::logic_error("layout and frontier are out of sync");
  }
}

void Explorer::apply(const Move& move) {
  if (move.op == "refine") {
    if (!move.target) throw Error(ErrorKind::parse, "refine move without target");
    refine(*move.target);
  } else if (move.op == "coarsen") {
    coarsen(move.target);
  } else if (move.op == "undo") {
    undo();
  } else {
    throw Error(ErrorKind::parse, "unknown move '" + move.op + "'");
  }
}

void Explorer::refine(TreeNodeId node) {
  if (node < 0 || static_cast<std::size_t>(node) >= tree_.nodes.size()) {
    throw Error(ErrorKind::not_found, "unknown cluster " + std::to_string(node));
  }
  ViewState next = refine_view(tree_, graph_, view_, node);
  Layout placed = refine_layout(layout_, node, view_quotient(graph_, next), params_.refine_layout_config(node));
  history_.push_back({std::move(view_), std::move(layout_)});
  view_ = std::move(next);
  layout_ = std::move(placed);
  moves_.push_back({"refine", node});
  check_sync();
}

void Explorer::coarsen(std::optional<TreeNodeId> target) {
  ViewState next;
  TreeNodeId merged = 0;
  if (target) {
    if (*target < 0 || static_cast<std::size_t>(*target) >= tree_.nodes.size()) {
      throw Error(ErrorKind::not_found, "unknown cluster " + std::to_string(*target));
    }
    next = coarsen_view(tree_, graph_, view_, *target);
    merged = *target;
  } else {
    next = coarsen_step(tree_, graph_, view_);
    merged = *next_coarsen_target(tree_, view_);
  }
  const auto& children = tree_.node(merged).children;
  Layout placed = coarsen_layout(layout_, children, merged);
  history_.push_back({std::move(view_), std::move(layout_)});
  view_ = std::move(next);
  layout_ = std::move(placed);
  moves_.push_back({"coarsen", target});
  check_sync();
}

void Explorer::undo() {
  if (history_.empty()) throw Error(ErrorKind::invalid_move, "nothing to undo");
  view_ = std::move(history_.back().view);
  layout_ = std::move(history_.back().layout);
  history_.pop_back();
  moves_.push_back({"undo", std::nullopt});
  check_sync();
}

void Explorer::refine_all() {
  for (;;) {
    auto it = std::find_if(view_.frontier.begin(), view_.frontier.end(),
                           [&](TreeNodeId id) { return !tree_.node(id).children.empty(); });
    if (it == view_.frontier.end()) return;
    refine(*it);
  }
}

json Explorer::summary() const {
  std::size_t refinable = 0;
  for (TreeNodeId id : tree_.best_level) {
    if (!tree_.node(id).children.empty()) ++refinable;
  }
  const ViewState bottom = make_view(tree_, graph_, bottom_frontier(tree_));
  json attrs = json::array();
  for (const auto& a : graph_.attributes()) attrs.push_back(a.name);
  return {{"nodes", graph_.node_count()},
          {"edges", graph_.edge_count()},
          {"clusters", tree_.best_level.size()},
          {"q", tree_.best_q},
          {"threshold", tree_.global_threshold},
          {"p_value", tree_.best_p ? json(*tree_.best_p) : json(nullptr)},
          {"no_structure", tree_.no_structure},
          {"bottom_exempt", tree_.bottom_exempt},
          {"refinable_clusters", refinable},
          {"bottom_clusters", bottom.frontier.size()},
          {"bottom_q", bottom.q},
          {"coarse_steps", tree_.coarse_chain.size()},
          {"tree_nodes", tree_.nodes.size()},
          {"attributes", std::move(attrs)},
          {"ingest", report_to_json(report_)}};
}

std::shared_ptr<const AttributeStats> Explorer::frontier_stats(std::string_view attribute) const {
  std::string key(attribute);
  for (TreeNodeId id : view_.frontier) key += "|" + std::to_string(id);
  std::lock_guard lock(*cache_mutex_);
  if (auto it = stats_cache_.find(key); it != stats_cache_.end()) return it->second;
  auto stats = std::make_shared<const AttributeStats>(cluster_chi2(graph_, view_.partition.assignment, attribute));
  stats_cache_.emplace(std::move(key), stats);
  return stats;
}

namespace {

std::vector<double> stat_values(const Explorer& explorer, const StatQuery& query) {
  const std::size_t k = explorer.view().frontier.size();
  std::vector<double> values(k, std::numeric_limits<double>::quiet_NaN());
  if (query.mode == StatMode::none) return values;
  if (query.attribute.empty()) throw Error(ErrorKind::invalid_argument, "stat mode needs an attribute");
  auto stats = explorer.frontier_stats(query.attribute);
  if (query.mode == StatMode::residual && query.category.empty()) {
    throw Error(ErrorKind::invalid_argument, "residual mode needs a category");
  }
  for (std::size_t i = 0; i < k; ++i) {
    values[i] = query.mode == StatMode::p_value
                    ? stats->clusters[i].p
                    : pearson_residual(*stats, static_cast<ClusterId>(i), query.category);
  }
  return values;
}

}  // namespace

json Explorer::view_document(const StatQuery& query) const {
  const auto values = stat_values(*this, query);
  const QuotientGraph qg = view_quotient(graph_, view_);
  const auto next = next_coarsen_target(tree_, view_);

  json nodes = json::array();
  for (std::size_t i = 0; i < view_.frontier.size(); ++i) {
    const TreeNodeId id = view_.frontier[i];
    const auto& node = tree_.node(id);
    const auto& place = layout_.at(id);
    json n = {{"id", id},
              {"kind", to_string(node.kind)},
              {"depth", node.depth},
              {"size", place.size},
              {"x", place.x},
              {"y", place.y},
              {"radius", place.radius},
              {"color", color_for(values[i], query.mode)},
              {"refinable", !node.children.empty()},
              {"coarsenable", node.parent >= 0 && can_coarsen(tree_, view_, node.parent)},
              {"terminal", to_string(node.terminal)},
              {"local_q", node.local_q ? json(*node.local_q) : json(nullptr)},
              {"local_p", node.local_p ? json(*node.local_p) : json(nullptr)}};
    n["color_value"] = std::isnan(values[i]) ? json(nullptr) : json(values[i]);
    nodes.push_back(std::move(n));
  }
  json edges = json::array();
  for (const auto& e : qg.edges) {
    edges.push_back({{"source", qg.nodes[e.source].id}, {"target", qg.nodes[e.target].id}, {"weight", e.weight}});
  }

  json stat = nullptr;
  if (query.mode != StatMode::none) {
    stat = {{"attribute", query.attribute},
            {"mode", to_string(query.mode)},
            {"category", query.category.empty() ? json(nullptr) : json(query.category)},
            {"scale", query.mode == StatMode::p_value ? "sequential-gray" : "diverging-red-blue"},
            {"test", "goodness-of-fit"}};
  }

  return {{"format", "hcviz-view"},
          {"version", 1},
          {"q", view_.q},
          {"best_q", tree_.best_q},
          {"threshold", tree_.global_threshold},
          {"p_value", tree_.best_p ? json(*tree_.best_p) : json(nullptr)},
          {"no_structure", tree_.no_structure},
          {"bottom_exempt", tree_.bottom_exempt},
          {"undo_depth", history_.size()},
          {"can_coarsen_step", next.has_value()},
          {"frontier", view_.frontier},
          {"stat", std::move(stat)},
          {"layout",
           {{"width", layout_.width},
            {"height", layout_.height},
            {"area_scale", layout_.area_scale},
            {"repulsion", to_string(layout_.config.repulsion)},
            {"weighted_attraction", layout_.config.weighted_attraction},
            {"seed", layout_.config.seed}}},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)}};
}

std::string Explorer::export_document(ExportFormat format, const StatQuery& query) const {
  switch (format) {
    case ExportFormat::svg:
      return render_svg(layout_, view_quotient(graph_, view_), stat_values(*this, query), query.mode);
    case ExportFormat::view_json:
      return view_document(query).dump(2) + "\n";
    case ExportFormat::hierarchy_json:
      return bundle(false).dump(2) + "\n";
    case ExportFormat::partition_tsv:
      return format_partition_tsv(graph_, view_.partition, view_.frontier);
    case ExportFormat::layout_json: {
      const QuotientGraph qg = view_quotient(graph_, view_);
      json nodes = json::array();
      for (const auto& p : layout_.nodes) {
        nodes.push_back({{"id", p.id}, {"size", p.size}, {"x", p.x}, {"y", p.y}, {"radius", p.radius}});
      }
      json edges = json::array();
      for (const auto& e : qg.edges) {
        edges.push_back({{"source", qg.nodes[e.source].id}, {"target", qg.nodes[e.target].id}, {"weight", e.weight}});
      }
      json doc = {{"format", "hcviz-layout"},
                  {"version", 1},
                  {"width", layout_.width},
                  {"height", layout_.height},
                  {"area_scale", layout_.area_scale},
                  {"iterations", layout_.config.iterations},
                  {"repulsion", to_string(layout_.config.repulsion)},
                  {"weighted_attraction", layout_.config.weighted_attraction},
                  {"seed", layout_.config.seed},
                  {"nodes", std::move(nodes)},
                  {"edges", std::move(edges)}};
      return doc.dump(2) + "\n";
    }
    case ExportFormat::stats_tsv: {
      if (query.attribute.empty()) throw Error(ErrorKind::invalid_argument, "stats export needs an attribute");
      return format_stats_tsv(*frontier_stats(query.attribute), view_.frontier);
    }
  }
  throw Error(ErrorKind::invalid_argument, "unknown export format");
}

json Explorer::bundle(bool include_moves) const {
  json doc = hierarchy_to_json(tree_);
  doc["graph"] = graph_to_json(graph_);
  doc["params"] = params_.to_json();
  doc["ingest"] = report_to_json(report_);
  if (include_moves) {
    json moves = json::array();
    for (const auto& m : moves_) {
      moves.push_back({{"op", m.op}, {"target", m.target ? json(*m.target) : json(nullptr)}});
    }
    doc["moves"] = std::move(moves);
  }
  return doc;
}

std::string render_svg(const Layout& layout, const QuotientGraph& quotient, const std::vector<double>& colors,
                       StatMode mode) {
  constexpr double kSize = 1000.0;
  constexpr double kMargin = 20.0;
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto& p : layout.nodes) {
    min_x = std::min(min_x, p.x - p.radius);
    min_y = std::min(min_y, p.y - p.radius);
    max_x = std::max(max_x, p.x + p.radius);
    max_y = std::max(max_y, p.y + p.radius);
  }
  const double span = std::max(max_x - min_x, max_y - min_y);
  const double scale = layout.nodes.empty() || !(span > 0.0) ? 1.0 : (kSize - 2 * kMargin) / span;
  const double off_x = (kSize - scale * (max_x - min_x)) / 2.0 - scale * min_x;
  const double off_y = (kSize - scale * (max_y - min_y)) / 2.0 - scale * min_y;
  auto fx = [&](double x) { return detail::format_fixed(off_x + scale * x, 3); };
  auto fy = [&](double y) { return detail::format_fixed(off_y + scale * y, 3); };

  std::int64_t max_weight = 1;
  for (const auto& e : quotient.edges) max_weight = std::max(max_weight, e.weight);

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n";
  out += "<rect width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n<g class=\"edges\" stroke=\"#999999\">\n";
  for (const auto& e : quotient.edges) {
    const auto& a = layout.at(quotient.nodes[e.source].id);
    const auto& b = layout.at(quotient.nodes[e.target].id);
    const double width = 1.0 + 5.0 * static_cast<double>(e.weight) / static_cast<double>(max_weight);
    out += "<line x1=\"" + fx(a.x) + "\" y1=\"" + fy(a.y) + "\" x2=\"" + fx(b.x) + "\" y2=\"" + fy(b.y) +
           "\" stroke-width=\"" + detail::format_fixed(width, 3) + "\" data-weight=\"" + std::to_string(e.weight) +
           "\"/>\n";
  }
  out += "</g>\n<g class=\"nodes\" stroke=\"#333333\">\n";
  for (std::size_t i = 0; i < layout.nodes.size(); ++i) {
    const auto& p = layout.nodes[i];
    const double value = i < colors.size() ? colors[i] : std::numeric_limits<double>::quiet_NaN();
    out += "<circle id=\"n" + std::to_string(p.id) + "\" cx=\"" + fx(p.x) + "\" cy=\"" + fy(p.y) + "\" r=\"" +
           detail::format_fixed(std::max(scale * p.radius, 0.5), 3) + "\" fill=\"" + color_for(value, mode) +
           "\" data-size=\"" + std::to_string(p.size) + "\"/>\n";
  }
  out += "</g>\n<g class=\"labels\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n";
  for (const auto& p : layout.nodes) {
    out += "<text x=\"" + fx(p.x) + "\" y=\"" + fy(p.y) + "\">" + std::to_string(p.id) + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace hcviz
