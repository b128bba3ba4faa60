"""Graph representation, validation, and TUDataset-layout ingestion.

Graphs are undirected, simple, and carry one integer label per node. Node
labels across a dataset are remapped to a dense 0..L-1 alphabet through a
corpus-wide sorted dictionary so that every graph in a corpus shares one fixed
label axis.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DatasetFormatError


@dataclass(frozen=True)
class LabeledGraph:
    """Undirected simple graph with per-node integer labels.

    ``edges`` holds unordered pairs stored canonically as (u, v) with u < v.
    Instances are immutable; census and entropy code assumes ``validate``
    passes.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    node_labels: tuple[int, ...]
    graph_id: str = ""

    @staticmethod
    def from_edges(node_count, edge_iter, node_labels, graph_id=""):
        """Build a graph, normalizing edge order and dropping duplicates."""
        seen = set()
        for u, v in edge_iter:
            if u > v:
                u, v = v, u
            seen.add((int(u), int(v)))
        return LabeledGraph(
            node_count=int(node_count),
            edges=tuple(sorted(seen)),
            node_labels=tuple(int(l) for l in node_labels),
            graph_id=graph_id,
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree_array(self) -> np.ndarray:
        deg = np.zeros(self.node_count, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency_matrix(self) -> np.ndarray:
        """Dense symmetric 0/1 adjacency (uint8)."""
        a = np.zeros((self.node_count, self.node_count), dtype=np.uint8)
        for u, v in self.edges:
            a[u, v] = 1
            a[v, u] = 1
        return a

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) with neighbor lists sorted ascending."""
        nbrs = neighbor_sets(self)
        indptr = np.zeros(self.node_count + 1, dtype=np.int64)
        for i, ns in enumerate(nbrs):
            indptr[i + 1] = indptr[i] + len(ns)
        indices = np.empty(indptr[-1], dtype=np.int64)
        pos = 0
        for ns in nbrs:
            for w in ns:
                indices[pos] = w
                pos += 1
        return indptr, indices

    def relabel_nodes(self, perm) -> "LabeledGraph":
        """Apply a node permutation: new index perm[u] takes old node u."""
        perm = list(perm)
        labels = [0] * self.node_count
        for old, new in enumerate(perm):
            labels[new] = self.node_labels[old]
        return LabeledGraph.from_edges(
            self.node_count,
            ((perm[u], perm[v]) for u, v in self.edges),
            labels,
            graph_id=self.graph_id,
        )


def validate(graph: LabeledGraph):
    """Return None if the graph satisfies all invariants, else a message
    describing the first violation found."""
    n = graph.node_count
    if n < 0:
        return "negative node count"
    if len(graph.node_labels) != n:
        return "label array length %d != node count %d" % (len(graph.node_labels), n)
    seen = set()
    for u, v in graph.edges:
        if u == v:
            return "self-loop at node %d" % u
        if not (0 <= u < n) or not (0 <= v < n):
            return "endpoint out of range: edge (%d,%d) on %d nodes" % (u, v, n)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            return "duplicate edge (%d,%d)" % key
        seen.add(key)
    return None


def neighbor_sets(graph: LabeledGraph) -> list[list[int]]:
    """Per-node sorted neighbor lists (the first-order neighbor sets that seed
    all counting passes)."""
    nbrs: list[list[int]] = [[] for _ in range(graph.node_count)]
    for u, v in graph.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for ns in nbrs:
        ns.sort()
    return nbrs


@dataclass(frozen=True)
class GraphDataset:
    """Ordered collection of graphs with one class label per graph."""

    graphs: tuple[LabeledGraph, ...]
    class_labels: tuple[int, ...]
    label_alphabet: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if len(self.class_labels) != len(self.graphs):
            raise DatasetFormatError(
                "class_labels length %d != graph count %d"
                % (len(self.class_labels), len(self.graphs))
            )

    @property
    def n_labels(self) -> int:
        return len(self.label_alphabet)

    def __len__(self) -> int:
        return len(self.graphs)


def _read_int_lines(path: str, what: str) -> list[int]:
    out = []
    with open(path, "r", newline="") as fh:
        for lineno, raw in enumerate(fh, 1):
            tok = raw.strip()
            if not tok:
                continue
            try:
                out.append(int(tok))
            except ValueError as exc:
                raise DatasetFormatError(
                    "%s line %d: non-integer token %r" % (what, lineno, tok)
                ) from exc
    return out


def parse_tudataset(directory: str, name: str | None = None) -> GraphDataset:
    """Parse the four-file TUDataset text layout into a GraphDataset.

    Expects ``NAME_A.txt`` (comma-separated 1-based global edge list),
    ``NAME_graph_indicator.txt``, ``NAME_graph_labels.txt`` and
    ``NAME_node_labels.txt`` under ``directory``. The customary duplicated
    directed edge rows are merged to one undirected edge; a pair repeated in
    the same direction is treated as corruption. ``NAME_edge_labels.txt`` is
    ignored when present.
    """
    if name is None:
        name = os.path.basename(os.path.normpath(directory))
    if not os.path.isdir(directory):
        raise DatasetFormatError("dataset directory not found: %s" % directory)

    def fpath(suffix):
        p = os.path.join(directory, "%s_%s.txt" % (name, suffix))
        if not os.path.isfile(p):
            raise DatasetFormatError("missing dataset file: %s" % p)
        return p

    indicator = _read_int_lines(fpath("graph_indicator"), "graph_indicator")
    class_labels = _read_int_lines(fpath("graph_labels"), "graph_labels")
    raw_node_labels = _read_int_lines(fpath("node_labels"), "node_labels")

    n_graphs = len(class_labels)
    n_nodes = len(indicator)
    if len(raw_node_labels) != n_nodes:
        raise DatasetFormatError(
            "node_labels has %d entries for %d nodes" % (len(raw_node_labels), n_nodes)
        )
    for i, g in enumerate(indicator):
        if not (1 <= g <= n_graphs):
            raise DatasetFormatError(
                "graph_indicator line %d: graph id %d outside 1..%d" % (i + 1, g, n_graphs)
            )

    # Corpus-wide dense label dictionary, sorted by raw value.
    alphabet_raw = sorted(set(raw_node_labels))
    to_dense = {raw: i for i, raw in enumerate(alphabet_raw)}
    dense_labels = [to_dense[r] for r in raw_node_labels]

    # Node id ranges per graph; TUDataset numbers nodes 1..N globally in
    # indicator order, so each graph owns a contiguous block.
    sizes = [0] * n_graphs
    for g in indicator:
        sizes[g - 1] += 1
    offsets = [0] * n_graphs
    acc = 0
    for gi in range(n_graphs):
        offsets[gi] = acc
        acc += sizes[gi]
    node_graph = [g - 1 for g in indicator]

    directed_seen: set[tuple[int, int]] = set()
    per_graph_edges: list[set[tuple[int, int]]] = [set() for _ in range(n_graphs)]
    apath = fpath("A")
    with open(apath, "r", newline="") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise DatasetFormatError("A line %d: expected 'u, v', got %r" % (lineno, line))
            try:
                u = int(parts[0].strip())
                v = int(parts[1].strip())
            except ValueError as exc:
                raise DatasetFormatError(
                    "A line %d: non-integer token in %r" % (lineno, line)
                ) from exc
            if not (1 <= u <= n_nodes) or not (1 <= v <= n_nodes):
                raise DatasetFormatError(
                    "A line %d: node id outside 1..%d" % (lineno, n_nodes)
                )
            u -= 1
            v -= 1
            if u == v:
                raise DatasetFormatError("A line %d: self-loop on node %d" % (lineno, u + 1))
            gu, gv = node_graph[u], node_graph[v]
            if gu != gv:
                raise DatasetFormatError(
                    "A line %d: edge joins nodes of graphs %d and %d" % (lineno, gu + 1, gv + 1)
                )
            if (u, v) in directed_seen:
                raise DatasetFormatError(
                    "A line %d: duplicated directed edge (%d,%d)" % (lineno, u + 1, v + 1)
                )
            directed_seen.add((u, v))
            lu, lv = u - offsets[gu], v - offsets[gu]
            per_graph_edges[gu].add((lu, lv) if lu < lv else (lv, lu))

    graphs = []
    for gi in range(n_graphs):
        lo, hi = offsets[gi], offsets[gi] + sizes[gi]
        graphs.append(
            LabeledGraph(
                node_count=sizes[gi],
                edges=tuple(sorted(per_graph_edges[gi])),
                node_labels=tuple(dense_labels[lo:hi]),
                graph_id="%s_%d" % (name, gi),
            )
        )
    alphabet = tuple(range(len(alphabet_raw)))
    return GraphDataset(tuple(graphs), tuple(class_labels), alphabet)


def write_tudataset(dataset: GraphDataset, directory: str, name: str) -> None:
    """Serialize a dataset back to the TUDataset layout (both edge directions
    written, node labels written as their dense ids)."""
    os.makedirs(directory, exist_ok=True)

    def fpath(suffix):
        return os.path.join(directory, "%s_%s.txt" % (name, suffix))

    with open(fpath("graph_labels"), "w") as fh:
        for c in dataset.class_labels:
            fh.write("%d\n" % c)
    offset = 0
    with open(fpath("graph_indicator"), "w") as gi_fh, open(
        fpath("node_labels"), "w"
    ) as nl_fh, open(fpath("A"), "w") as a_fh:
        for gidx, g in enumerate(dataset.graphs, 1):
            for lab in g.node_labels:
                gi_fh.write("%d\n" % gidx)
                nl_fh.write("%d\n" % lab)
            for u, v in g.edges:
                a_fh.write("%d, %d\n" % (u + 1 + offset, v + 1 + offset))
                a_fh.write("%d, %d\n" % (v + 1 + offset, u + 1 + offset))
            offset += g.node_count
