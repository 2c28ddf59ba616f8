"""Python access to the hcviz core: modularity, significance, cluster trees and views."""

import json
from pathlib import Path

from ._core import (
    Explorer,
    Graph,
    HcvizError,
    barbell,
    brute_force_optimal,
    chi2_upper_tail,
    cluster_chi2,
    enrichment_graph,
    erdos_renyi,
    greedy_maximize,
    modularity,
    null_distribution,
    planted_cliques,
    sample_configuration_graph,
)

__all__ = [
    "Explorer",
    "Graph",
    "HcvizError",
    "Session",
    "barbell",
    "brute_force_optimal",
    "chi2_upper_tail",
    "cluster_chi2",
    "enrichment_graph",
    "erdos_renyi",
    "greedy_maximize",
    "load_graph",
    "modularity",
    "null_distribution",
    "planted_cliques",
    "sample_configuration_graph",
]


def load_graph(path, attributes=None):
    g = Graph.from_edge_list(Path(path).read_text())
    if attributes is not None:
        g = g.with_attributes(Path(attributes).read_text())
    return g


class Session:
    """Explorer wrapper speaking dicts instead of JSON text."""

    def __init__(self, explorer):
        self._e = explorer

    @classmethod
    def run(cls, edges, attributes="", **params):
        return cls(Explorer.run(edges, attributes, json.dumps(params)))

    @classmethod
    def from_bundle(cls, bundle):
        if not isinstance(bundle, str):
            bundle = json.dumps(bundle)
        return cls(Explorer.from_bundle(bundle))

    @property
    def explorer(self):
        return self._e

    @property
    def frontier(self):
        return self._e.frontier

    @property
    def q(self):
        return self._e.q

    @property
    def undo_depth(self):
        return self._e.undo_depth

    def summary(self):
        return json.loads(self._e.summary_json())

    def view(self, stat="", mode="", category=""):
        return json.loads(self._e.view_json(stat, mode, category))

    def hierarchy(self, include_moves=False):
        return json.loads(self._e.bundle_json(include_moves))

    def refine(self, cluster):
        self._e.refine(cluster)
        return self.view()

    def coarsen(self, target=None):
        self._e.coarsen(target)
        return self.view()

    def undo(self):
        self._e.undo()
        return self.view()

    def export(self, fmt, stat="", mode="", category=""):
        return self._e.export(fmt, stat, mode, category)
