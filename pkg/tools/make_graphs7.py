"""Regenerate src/token_spectra/data/graphs7.g6: every graph on 7 vertices up to
isomorphism (1044 graphs), taken from the networkx graph atlas."""

import sys
from pathlib import Path

import networkx as nx

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from token_spectra.graph6 import emit_graph6  # noqa: E402
from token_spectra.graphs import Graph  # noqa: E402

out = Path(__file__).resolve().parents[1] / "src/token_spectra/data/graphs7.g6"
graphs = [g for g in nx.graph_atlas_g() if g.number_of_nodes() == 7]
with out.open("w") as fh:
    fh.write("# all 1044 graphs on 7 vertices up to isomorphism (networkx graph atlas order)\n")
    for g in graphs:
        fh.write(emit_graph6(Graph.from_edges(7, [(u + 1, v + 1) for u, v in g.edges()])) + "\n")
print(len(graphs), "graphs written to", out)
