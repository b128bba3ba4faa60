"""Exact labeled graphlet census over the fixed 12-topology catalog.

count_labeled is the production path: edge-local merging for sizes 3 and 4,
ordered-walk enumeration with chord rejection for the 5 and 6 node entries,
pruned independent-subset enumeration for the 5-star. count_oracle (see
oracle module) is the independent brute-force used to verify it.

Counting semantics: counts[v][l] is the number of pairs (S, u) where S
induces catalog topology v, u sits on a root-orbit position under some
isomorphism, and u carries label l. Vertex-transitive topologies therefore
contribute one count per node per instance.
"""

from dataclasses import dataclass
from io import StringIO
from typing import Optional

import numpy as np

from . import _kernels
from .catalog import N_TOPOLOGIES, TopologyCatalog, catalog, normalize_mask
from .errors import ContractError
from .graphs import LabeledGraph


@dataclass(frozen=True)
class CensusTable:
    """Dense (topology, label) count matrix for one graph."""

    counts: np.ndarray  # shape (12, n_labels), int64
    graph_id: str

    def __post_init__(self):
        if self.counts.shape[0] != N_TOPOLOGIES:
            raise ContractError(
                "census table must have %d topology rows, got %d"
                % (N_TOPOLOGIES, self.counts.shape[0])
            )

    @property
    def n_labels(self) -> int:
        return self.counts.shape[1]

    def total_for(self, type_id: int) -> int:
        """Unlabeled rooted count of one topology (sum over labels)."""
        return int(self.counts[type_id - 1].sum())

    def to_csv_text(self) -> str:
        out = StringIO()
        out.write("graph_id,type_id,label,count\n")
        for v in range(N_TOPOLOGIES):
            for l in range(self.n_labels):
                out.write("%s,%d,%d,%d\n" % (self.graph_id, v + 1, l, self.counts[v, l]))
        return out.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "n_labels": self.n_labels,
            "type_ids": list(range(1, N_TOPOLOGIES + 1)),
            "counts": self.counts.tolist(),
        }


def tables_to_csv_text(tables) -> str:
    """Concatenate per-graph census tables under a single CSV header."""
    out = StringIO()
    out.write("graph_id,type_id,label,count\n")
    for table in tables:
        for v in range(N_TOPOLOGIES):
            for l in range(table.n_labels):
                out.write(
                    "%s,%d,%d,%d\n" % (table.graph_id, v + 1, l, table.counts[v, l])
                )
    return out.getvalue()


def _csr_and_adjacency(graph: LabeledGraph):
    indptr, indices = graph.csr()
    adj = graph.adjacency_matrix()
    return indptr, indices, adj


def _resolve_n_labels(graph: LabeledGraph, n_labels: Optional[int]) -> int:
    observed = (max(graph.node_labels) + 1) if graph.node_labels else 0
    if n_labels is None:
        return max(observed, 1)
    if n_labels < observed:
        raise ContractError(
            "n_labels=%d but graph %s carries label %d"
            % (n_labels, graph.graph_id, observed - 1)
        )
    return n_labels


def count_labeled(
    graph: LabeledGraph,
    cat: Optional[TopologyCatalog] = None,
    mask=None,
    n_labels: Optional[int] = None,
) -> CensusTable:
    """Exact census of the graph against the catalog.

    mask selects a subset of type_ids; topologies outside it report zero.
    n_labels fixes the label axis (defaults to the graph's own max label + 1).
    """
    if cat is None:
        cat = catalog()
    active = set(normalize_mask(mask))
    L = _resolve_n_labels(graph, n_labels)
    n = graph.node_count
    counts = np.zeros((N_TOPOLOGIES, L), dtype=np.int64)
    if n < 3 or not graph.edges:
        return CensusTable(counts=counts, graph_id=graph.graph_id)

    indptr, indices, adj = _csr_and_adjacency(graph)
    labels = np.asarray(graph.node_labels, dtype=np.int64)
    # per-node rooted counts, row index = type_id - 1
    roots = np.zeros((N_TOPOLOGIES, n), dtype=np.int64)

    if active & {1, 2}:
        r3 = _kernels.census3_kernel(indptr, indices, adj)
        roots[0] = r3[0]
        roots[1] = r3[1]
    if n >= 4 and active & {3, 4, 5, 6, 7, 8}:
        r4 = _kernels.census4_kernel(indptr, indices, adj)
        roots[2:8] = r4
    if n >= 5 and active & {9, 11}:
        r5 = _kernels.paths5_kernel(indptr, indices, adj, 9 in active, 11 in active)
        roots[8] = r5[0]
        roots[10] = r5[1]
    if n >= 5 and 10 in active:
        roots[9] = _kernels.star5_kernel(indptr, indices, adj)
    if n >= 6 and 12 in active:
        roots[11] = _kernels.path6_kernel(indptr, indices, adj)

    for v in range(N_TOPOLOGIES):
        if (v + 1) in active:
            np.add.at(counts[v], labels, roots[v])
    return CensusTable(counts=counts, graph_id=graph.graph_id)


def compose_path_sets(graph: LabeledGraph, h: int):
    """Vertex sets of all simple h-edge paths, per ordered endpoint pair.

    Built by joining half-length hop tables at a shared midpoint and
    rejecting joins whose halves intersect anywhere besides the midpoint.
    Returns {(u, v): [frozenset, ...]} with one entry per simple path; pairs
    with no path are absent.
    """
    if h not in (1, 2, 3, 4, 5):
        raise ValueError("hop count must be in 1..5, got %r" % (h,))

    one = {}
    for u, v in graph.edges:
        one.setdefault((u, v), []).append(frozenset((u, v)))
        one.setdefault((v, u), []).append(frozenset((u, v)))
    if h == 1:
        return one

    def join(ta, tb):
        # index tb by its first endpoint (the midpoint of the join)
        by_mid = {}
        for (m, v), sets in tb.items():
            by_mid.setdefault(m, []).append((v, sets))
        out = {}
        for (u, m), left_sets in ta.items():
            for v, right_sets in by_mid.get(m, ()):
                for ls in left_sets:
                    for rs in right_sets:
                        if len(ls & rs) == 1:  # midpoint only
                            out.setdefault((u, v), []).append(ls | rs)
        return out

    two = join(one, one)
    if h == 2:
        return two
    if h == 3:
        return join(one, two)
    four = join(two, two)
    if h == 4:
        return four
    return join(two, join(one, two))
