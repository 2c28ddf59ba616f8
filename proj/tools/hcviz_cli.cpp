// hcviz command-line driver.

#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hcviz/error.hpp"
#include "hcviz/explorer.hpp"
#include "hcviz/generators.hpp"
#include "hcviz/hierarchy.hpp"
#include "hcviz/modularity.hpp"
#include "hcviz/random.hpp"
#include "hcviz/service.hpp"
#include "hcviz/significance.hpp"

namespace {

using namespace hcviz;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoStructure = 3;

struct Options {
  PipelineParams params;
  std::string out;
  std::string attributes;
  std::string view = "best";
  std::string format;
  std::string stat;
  std::string mode;
  std::string category;
  std::string repulsion = "source_weighted";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::not_found, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path + "'");
  out << text;
}

PipelineParams effective(const Options& o) {
  PipelineParams p = o.params;
  nlohmann::json layout = {{"repulsion", o.repulsion}};
  p.layout.repulsion = PipelineParams::from_json({{"layout", layout}}).layout.repulsion;
  p.validate();
  return p;
}

PreparedGraph prepare(const std::string& edges_path, const Options& o, const PipelineParams& p) {
  const std::string attributes = o.attributes.empty() ? std::string{} : read_file(o.attributes);
  PreparedGraph prepared = prepare_graph(read_file(edges_path), attributes, p.largest_component);
  for (const auto& w : prepared.report.warnings) std::cerr << "warning: " << w << "\n";
  if (prepared.report.duplicates_dropped || prepared.report.self_loops_dropped) {
    std::cerr << "dropped " << prepared.report.duplicates_dropped << " duplicate edge(s) and "
              << prepared.report.self_loops_dropped << " self-loop(s)\n";
  }
  return prepared;
}

bool is_bundle(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

// A hierarchy bundle is restored as saved; an edge list runs the pipeline.
Explorer load_explorer(const std::string& input, const Options& o) {
  const std::string text = read_file(input);
  if (is_bundle(text)) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorKind::parse, "'" + input + "' is not valid JSON");
    Explorer e = Explorer::from_bundle(doc);
    std::cerr << e.params().describe() << "\n";
    return e;
  }
  const PipelineParams p = effective(o);
  std::cerr << p.describe() << "\n";
  return Explorer::run(prepare(input, o, p), p);
}

void apply_view(Explorer& e, const std::string& view) {
  if (view == "bottom") {
    e.refine_all();
  } else if (view != "best") {
    throw Error(ErrorKind::invalid_argument, "unknown view '" + view + "' (best|bottom)");
  }
}

StatQuery stat_query(const Options& o) {
  StatQuery q;
  q.attribute = o.stat;
  q.mode = parse_stat_mode(o.mode);
  if (q.mode == StatMode::none && !q.attribute.empty()) q.mode = StatMode::p_value;
  q.category = o.category;
  return q;
}

int structure_code(const Explorer& e) {
  if (e.tree().no_structure) {
    std::cerr << "no structure: best partition is not significant\n";
    return kExitNoStructure;
  }
  return kExitOk;
}

int cmd_cluster(const std::string& input, const Options& o) {
  const PipelineParams p = effective(o);
  std::cerr << p.describe() << "\n";
  const PreparedGraph prepared = prepare(input, o, p);
  const Partition best = greedy_maximize(prepared.graph, p.hierarchy_config().maximizer);
  std::cerr << "clusters=" << best.cluster_count << " modularity=" << best.modularity << "\n";
  write_output(o.out, format_partition_tsv(prepared.graph, best));
  return kExitOk;
}

int cmd_significance(const std::string& input, const Options& o) {
  const PipelineParams p = effective(o);
  std::cerr << p.describe() << "\n";
  const PreparedGraph prepared = prepare(input, o, p);
  const HierarchyConfig cfg = p.hierarchy_config();
  const Partition best = greedy_maximize(prepared.graph, cfg.maximizer);
  const NullDistribution nd = global_null(prepared.graph, cfg);
  const bool significant = best.cluster_count > 1 && is_significant(nd, best.modularity, p.alpha);
  write_output(o.out, format_null_distribution(nd));
  std::cerr << "q=" << best.modularity << " threshold=" << nd.threshold;
  if (!nd.external) {
    std::cerr << " p-value=" << p_value(nd, best.modularity) << " effective_alpha=" << effective_alpha(nd, p.alpha);
  }
  std::cerr << " significant=" << (significant ? "true" : "false") << "\n";
  return significant ? kExitOk : kExitNoStructure;
}

int cmd_hierarchy(const std::string& input, const Options& o) {
  Explorer e = load_explorer(input, o);
  const auto s = e.summary();
  std::cerr << "clusters=" << s.at("clusters") << " q=" << s.at("q").get<double>()
            << " threshold=" << s.at("threshold").get<double>() << " p-value=" << s.at("p_value")
            << " refinable=" << s.at("refinable_clusters") << " coarse_steps=" << s.at("coarse_steps") << "\n";
  write_output(o.out, e.export_document(ExportFormat::hierarchy_json));
  return structure_code(e);
}

int cmd_export(const std::string& input, const Options& o, ExportFormat format) {
  Explorer e = load_explorer(input, o);
  apply_view(e, o.view);
  StatQuery q = stat_query(o);
  if (format == ExportFormat::stats_tsv && q.attribute.empty()) {
    throw Error(ErrorKind::invalid_argument, "stats needs --attribute");
  }
  write_output(o.out, e.export_document(format, q));
  return structure_code(e);
}

int cmd_gen(const std::string& kind, const Options& o, int cliques, int size, int n, double p,
            const std::vector<int>& blocks, double p_in, double p_out, const std::string& template_path,
            const std::string& attributes_out) {
  SyntheticGraph g;
  const std::uint64_t seed = o.params.seed;
  if (kind == "planted") {
    g = planted_cliques(cliques, size);
  } else if (kind == "barbell") {
    g = barbell_graph(size);
  } else if (kind == "er") {
    g = erdos_renyi(n, p, seed);
  } else if (kind == "blocks") {
    g = block_model(blocks, p_in, p_out, seed);
  } else if (kind == "enrichment") {
    g = enrichment_graph({}, seed);
  } else if (kind == "config") {
    if (template_path.empty()) throw Error(ErrorKind::invalid_argument, "config needs --template EDGES");
    const Graph tmpl = load_edge_list(read_file(template_path)).graph;
    g.graph = sample_configuration_graph(tmpl.degree_sequence(), derive_seed(seed, "gen-config"), tmpl);
  } else {
    throw Error(ErrorKind::invalid_argument, "unknown generator '" + kind + "'");
  }
  write_output(o.out, format_edge_list(g.graph));
  if (!attributes_out.empty()) write_output(attributes_out, format_attribute_table(g.graph));
  std::cerr << "generated " << kind << ": nodes=" << g.graph.node_count() << " edges=" << g.graph.edge_count()
            << " seed=" << seed << "\n";
  return kExitOk;
}

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

int cmd_serve(const std::string& host, int port, const std::string& data_dir) {
  ServiceOptions opts;
  opts.host = host;
  opts.port = port;
  if (!data_dir.empty()) opts.data_dir = data_dir;
  Service service(opts);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const int bound = service.start();
  std::cerr << "listening on http://" << host << ":" << bound << "/v1" << std::endl;
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  service.stop();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical significance-gated modularity clustering and layout"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file mirroring the flags");

  Options o;
  auto& p = o.params;
  app.add_option("--seed", p.seed, "Master seed; every stage seed derives from it")->capture_default_str();
  app.add_option("--trials", p.trials, "Monte Carlo trials of the configuration null")->capture_default_str();
  app.add_option("--alpha", p.alpha, "Significance level")->capture_default_str();
  app.add_flag("--largest-component,!--all-components", p.largest_component,
               "Restrict the analysis to the largest connected component")
      ->capture_default_str();
  app.add_option("--jobs", p.jobs, "Parallel trials (0 = all cores)")->capture_default_str();
  app.add_option("--out,-o", o.out, "Output file (default stdout)");
  app.add_option("--attributes", o.attributes, "Node attribute table (csv or tsv)");
  app.add_option("--min-subgraph-trials", p.min_subgraph_trials)->capture_default_str();
  app.add_option("--min-cluster-size", p.min_cluster_size)->capture_default_str();
  app.add_flag("--strict-global", p.strict_global, "Check every refined level against the global threshold");
  app.add_option("--local-move-passes", p.local_move_passes)->capture_default_str();
  app.add_option("--threshold", p.external_threshold, "External significance threshold (skips the null)");
  app.add_option("--iterations", p.layout.iterations, "Layout iterations")->capture_default_str();
  app.add_option("--repulsion", o.repulsion, "source_weighted|symmetric_weighted|uniform")->capture_default_str();
  app.add_flag("--weighted-attraction", p.layout.weighted_attraction, "Scale attraction by edge weight");
  app.add_option("--anchor-stiffness", p.layout.anchor_stiffness)->capture_default_str();

  std::string input;
  auto* cluster = app.add_subcommand("cluster", "Greedy modularity partition as partition-tsv");
  cluster->add_option("edges", input, "Edge list")->required();
  auto* significance = app.add_subcommand("significance", "Configuration-null distribution and p-value");
  significance->add_option("edges", input, "Edge list")->required();
  auto* hierarchy = app.add_subcommand("hierarchy", "Full pipeline; writes the hierarchy bundle");
  hierarchy->add_option("input", input, "Edge list or hierarchy bundle")->required();

  auto add_view = [&](CLI::App* sub) {
    sub->add_option("input", input, "Edge list or hierarchy bundle")->required();
    sub->add_option("--view", o.view, "best|bottom")->capture_default_str();
  };
  auto* layout = app.add_subcommand("layout", "Layout of a view as layout-json");
  add_view(layout);
  auto* stats = app.add_subcommand("stats", "Chi-squared table of a view as stats-tsv");
  add_view(stats);
  stats->add_option("--attribute", o.stat, "Attribute to test")->required();
  auto* exporter = app.add_subcommand("export", "Export a view or the hierarchy");
  add_view(exporter);
  exporter->add_option("--format", o.format, "svg|view-json|hierarchy-json|partition-tsv|layout-json|stats-tsv")
      ->required();
  exporter->add_option("--stat", o.stat, "Attribute used for colouring");
  exporter->add_option("--mode", o.mode, "p|residual");
  exporter->add_option("--category", o.category, "Category for residual mode");

  std::string kind;
  int cliques = 4;
  int size = 5;
  int n = 60;
  double prob = 0.5;
  std::vector<int> blocks{20, 20, 20};
  double p_in = 0.5;
  double p_out = 0.02;
  std::string template_path;
  std::string attributes_out;
  auto* gen = app.add_subcommand("gen", "Synthetic graphs");
  gen->add_option("kind", kind, "planted|barbell|er|blocks|enrichment|config")->required();
  gen->add_option("--cliques", cliques)->capture_default_str();
  gen->add_option("--size", size)->capture_default_str();
  gen->add_option("--n", n)->capture_default_str();
  gen->add_option("--p", prob)->capture_default_str();
  gen->add_option("--blocks", blocks)->capture_default_str();
  gen->add_option("--p-in", p_in)->capture_default_str();
  gen->add_option("--p-out", p_out)->capture_default_str();
  gen->add_option("--template", template_path, "Template edge list for config");
  gen->add_option("--attributes-out", attributes_out, "Write the attribute table here");

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Persist sessions here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*cluster) return cmd_cluster(input, o);
    if (*significance) return cmd_significance(input, o);
    if (*hierarchy) return cmd_hierarchy(input, o);
    if (*layout) return cmd_export(input, o, ExportFormat::layout_json);
    if (*stats) return cmd_export(input, o, ExportFormat::stats_tsv);
    if (*exporter) return cmd_export(input, o, parse_export_format(o.format));
    if (*gen) return cmd_gen(kind, o, cliques, size, n, prob, blocks, p_in, p_out, template_path, attributes_out);
    if (*serve) return cmd_serve(host, port, data_dir);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
