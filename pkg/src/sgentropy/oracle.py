"""Brute-force labeled census by exhaustive subset enumeration.

Verification oracle for the fast counting path: every connected node subset of
size 3..6 is enumerated via itertools.combinations, tested for induced
isomorphism against each catalog entry by explicit permutation search, and the
subset nodes that land in the root orbit under any matching permutation are
credited. Shares no counting logic with the fast path.
"""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from .catalog import TopologyCatalog, catalog
from .errors import OracleSizeError
from .graphs import LabeledGraph

ORACLE_MAX_NODES = 16


def _connected(mask: int, adj: list[int]) -> bool:
    start = mask & -mask
    visited = start
    frontier = start
    while frontier:
        reach = 0
        f = frontier
        while f:
            bit = f & -f
            reach |= adj[bit.bit_length() - 1]
            f ^= bit
        frontier = reach & mask & ~visited
        visited |= frontier
    return visited == mask


def count_oracle(
    graph: LabeledGraph,
    cat: TopologyCatalog | None = None,
    n_labels: int | None = None,
):
    """Exact (topology, root-label) counts by exhaustive enumeration.

    Returns an int64 array of shape (len(catalog), n_labels). Guarded to
    graphs of at most ORACLE_MAX_NODES nodes.
    """
    if cat is None:
        cat = catalog()
    n = graph.node_count
    if n > ORACLE_MAX_NODES:
        raise OracleSizeError(
            "oracle limited to %d nodes, got %d" % (ORACLE_MAX_NODES, n)
        )
    if n_labels is None:
        n_labels = (max(graph.node_labels) + 1) if graph.node_labels else 1
    counts = np.zeros((len(cat), n_labels), dtype=np.int64)

    adj = [0] * n
    for u, v in graph.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    labels = graph.node_labels

    by_size: dict[int, list] = {}
    for entry in cat:
        by_size.setdefault(entry.l_v, []).append(entry)

    entry_meta = {}
    for entry in cat:
        deg = [0] * entry.l_v
        for u, v in entry.edge_set:
            deg[u] += 1
            deg[v] += 1
        entry_meta[entry.type_id] = (
            tuple(deg),
            {frozenset(e) for e in entry.edge_set},
            set(entry.root_orbit),
        )

    for size, entries in sorted(by_size.items()):
        if size > n:
            continue
        for combo in combinations(range(n), size):
            mask = 0
            for c in combo:
                mask |= 1 << c
            if not _connected(mask, adj):
                continue
            local_edges = []
            for i in range(size):
                ai = adj[combo[i]]
                for j in range(i + 1, size):
                    if (ai >> combo[j]) & 1:
                        local_edges.append((i, j))
            m = len(local_edges)
            local_deg = [0] * size
            for i, j in local_edges:
                local_deg[i] += 1
                local_deg[j] += 1
            degseq = tuple(sorted(local_deg))
            local_eset = {frozenset(e) for e in local_edges}
            for entry in entries:
                if entry.d_v != m or entry.degree_sequence() != degseq:
                    continue
                target_deg, target_eset, orbit = entry_meta[entry.type_id]
                roots = set()
                for perm in permutations(range(size)):
                    ok = True
                    for i in range(size):
                        if target_deg[perm[i]] != local_deg[i]:
                            ok = False
                            break
                    if not ok:
                        continue
                    if {frozenset((perm[i], perm[j])) for i, j in local_eset} != target_eset:
                        continue
                    for i in range(size):
                        if perm[i] in orbit:
                            roots.add(i)
                for i in roots:
                    counts[entry.type_id - 1][labels[combo[i]]] += 1
    return counts
