#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hcviz/error.hpp"
#include "hcviz/explorer.hpp"
#include "hcviz/generators.hpp"
#include "hcviz/modularity.hpp"
#include "hcviz/significance.hpp"
#include "hcviz/stats.hpp"

namespace py = pybind11;
using namespace hcviz;

namespace {

py::tuple partition_tuple(const Partition& p) { return py::make_tuple(p.assignment, p.modularity); }

py::tuple synthetic_tuple(SyntheticGraph s) {
  return py::make_tuple(std::move(s.graph), std::move(s.planted), std::move(s.planted_fine));
}

StatQuery make_query(const std::string& stat, const std::string& mode, const std::string& category) {
  StatQuery q;
  q.attribute = stat;
  q.category = category;
  if (!stat.empty()) q.mode = mode.empty() ? StatMode::p_value : parse_stat_mode(mode);
  return q;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hcviz native core";

  static py::exception<Error> error(m, "HcvizError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(to_string(e.kind()), e.what()).ptr());
    }
  });

  py::class_<Graph>(m, "Graph")
      .def_static("from_edge_list", [](const std::string& text) { return load_edge_list(text).graph; })
      .def("with_attributes", [](const Graph& g, const std::string& text) { return load_attributes(text, g).graph; })
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("tokens", [](const Graph& g) {
        std::vector<std::string> out;
        for (std::size_t v = 0; v < g.node_count(); ++v) out.push_back(g.token(static_cast<NodeId>(v)));
        return out;
      })
      .def("edges", [](const Graph& g) {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (const auto& e : g.edges()) out.emplace_back(e.u, e.v);
        return out;
      })
      .def("degrees", [](const Graph& g) { return g.degree_sequence().degrees; })
      .def("attribute_names", [](const Graph& g) {
        std::vector<std::string> out;
        for (const auto& a : g.attributes()) out.push_back(a.name);
        return out;
      })
      .def("to_edge_list", &format_edge_list);

  m.def("modularity", [](const Graph& g, const std::vector<ClusterId>& labels) { return modularity(g, labels); },
        py::arg("graph"), py::arg("labels"));
  m.def(
      "greedy_maximize",
      [](const Graph& g, std::uint64_t seed, int passes) {
        MaximizerConfig cfg;
        cfg.seed = seed;
        cfg.local_move_passes = passes;
        return partition_tuple(greedy_maximize(g, cfg));
      },
      py::arg("graph"), py::arg("seed") = 0, py::arg("local_move_passes") = 10);
  m.def("brute_force_optimal", [](const Graph& g) { return partition_tuple(brute_force_optimal(g)); });
  m.def("sample_configuration_graph",
        [](const Graph& g, std::uint64_t seed) { return sample_configuration_graph(g.degree_sequence(), seed, g); },
        py::arg("graph"), py::arg("seed"));
  m.def(
      "null_distribution",
      [](const Graph& g, std::size_t trials, std::uint64_t seed) {
        const NullDistribution n = null_distribution(g, trials, MaximizerConfig{}, seed);
        return n.samples;
      },
      py::arg("graph"), py::arg("trials"), py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());

  m.def("chi2_upper_tail", &chi2_upper_tail, py::arg("chi2"), py::arg("dof"));
  m.def(
      "cluster_chi2",
      [](const Graph& g, const std::vector<ClusterId>& labels, const std::string& attribute) {
        const AttributeStats s = cluster_chi2(g, labels, attribute);
        py::list clusters;
        for (const auto& c : s.clusters) {
          py::dict d;
          d["cluster"] = c.cluster;
          d["size"] = c.size;
          d["chi2"] = c.chi2;
          d["dof"] = c.dof;
          d["p"] = c.p;
          d["degenerate"] = c.degenerate;
          d["low_confidence"] = c.low_confidence;
          d["counts"] = c.counts;
          d["expected"] = c.expected;
          d["residuals"] = c.residuals;
          clusters.append(d);
        }
        py::dict out;
        out["attribute"] = s.attribute;
        out["categories"] = s.categories;
        out["global_counts"] = s.global_counts;
        out["clusters"] = clusters;
        return out;
      },
      py::arg("graph"), py::arg("labels"), py::arg("attribute"));

  m.def("barbell", [](int k) { return synthetic_tuple(barbell_graph(k)); }, py::arg("clique") = 3);
  m.def("planted_cliques", [](int c, int s) { return synthetic_tuple(planted_cliques(c, s)); }, py::arg("cliques") = 4,
        py::arg("size") = 5);
  m.def("erdos_renyi", [](int n, double p, std::uint64_t seed) { return synthetic_tuple(erdos_renyi(n, p, seed)); },
        py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("enrichment_graph", [](std::uint64_t seed) { return synthetic_tuple(enrichment_graph({}, seed)); },
        py::arg("seed") = 1);

  py::class_<Explorer>(m, "Explorer")
      .def_static(
          "run",
          [](const std::string& edges, const std::string& attributes, const std::string& params) {
            const PipelineParams p = PipelineParams::from_json(nlohmann::json::parse(params));
            p.validate();
            return Explorer::run(prepare_graph(edges, attributes, p.largest_component), p);
          },
          py::arg("edges"), py::arg("attributes") = "", py::arg("params") = "{}",
          py::call_guard<py::gil_scoped_release>())
      .def_static("from_bundle",
                  [](const std::string& text) { return Explorer::from_bundle(nlohmann::json::parse(text)); })
      .def("refine", &Explorer::refine, py::arg("cluster"))
      .def("coarsen", &Explorer::coarsen, py::arg("target") = std::nullopt)
      .def("undo", &Explorer::undo)
      .def("refine_all", &Explorer::refine_all)
      .def_property_readonly("undo_depth", &Explorer::undo_depth)
      .def_property_readonly("frontier", [](const Explorer& e) { return e.view().frontier; })
      .def_property_readonly("q", [](const Explorer& e) { return e.view().q; })
      .def_property_readonly("graph", &Explorer::graph)
      .def("summary_json", [](const Explorer& e) { return e.summary().dump(); })
      .def(
          "view_json",
          [](const Explorer& e, const std::string& stat, const std::string& mode, const std::string& category) {
            return e.view_document(make_query(stat, mode, category)).dump();
          },
          py::arg("stat") = "", py::arg("mode") = "", py::arg("category") = "")
      .def("bundle_json", [](const Explorer& e, bool moves) { return e.bundle(moves).dump(); },
           py::arg("include_moves") = false)
      .def(
          "export",
          [](const Explorer& e, const std::string& format, const std::string& stat, const std::string& mode,
             const std::string& category) {
            return e.export_document(parse_export_format(format), make_query(stat, mode, category));
          },
          py::arg("format"), py::arg("stat") = "", py::arg("mode") = "", py::arg("category") = "");
}
