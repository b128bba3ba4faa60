"""The fixed 12-topology rooted graphlet catalog.

Entry order is load-bearing: it defines the coordinate order of census tables
and entropy embeddings. A rooted occurrence is a pair (vertex set, root node)
where the vertex set induces the topology and the root sits in the entry's
root orbit under some isomorphism. For every entry in this catalog the root
orbit coincides with a within-graphlet degree class, which the counting code
exploits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations


@dataclass(frozen=True)
class TopologyEntry:
    type_id: int
    name: str
    l_v: int  # node count
    d_v: int  # edge count
    edge_set: tuple[tuple[int, int], ...]  # canonical edges on 0..l_v-1
    root_orbit: tuple[int, ...]  # canonical node positions eligible as root

    @property
    def root_degree(self) -> int:
        """Degree of root-orbit members inside the graphlet (orbit members
        all share one degree in this catalog)."""
        deg = [0] * self.l_v
        for u, v in self.edge_set:
            deg[u] += 1
            deg[v] += 1
        degs = {deg[r] for r in self.root_orbit}
        assert len(degs) == 1
        return degs.pop()

    def degree_sequence(self) -> tuple[int, ...]:
        deg = [0] * self.l_v
        for u, v in self.edge_set:
            deg[u] += 1
            deg[v] += 1
        return tuple(sorted(deg))

    def automorphisms(self) -> list[tuple[int, ...]]:
        """All node permutations preserving the edge set. Brute force; the
        largest entry has 6 nodes."""
        eset = {frozenset(e) for e in self.edge_set}
        autos = []
        for perm in permutations(range(self.l_v)):
            if {frozenset((perm[u], perm[v])) for u, v in eset} == eset:
                autos.append(perm)
        return autos


def _path(k):
    return tuple((i, i + 1) for i in range(k - 1))


def _cycle(k):
    return _path(k) + ((0, k - 1),)


def _star(k):
    return tuple((0, i) for i in range(1, k))


_ENTRIES = (
    TopologyEntry(1, "triangle", 3, 3, ((0, 1), (0, 2), (1, 2)), (0, 1, 2)),
    TopologyEntry(2, "path3", 3, 2, _path(3), (0, 2)),
    TopologyEntry(3, "path4", 4, 3, _path(4), (0, 3)),
    TopologyEntry(4, "star4", 4, 3, _star(4), (0,)),
    TopologyEntry(5, "cycle4", 4, 4, _cycle(4), (0, 1, 2, 3)),
    # triangle 0-1-2 with a pendant tail at node 3; root is the tail end
    TopologyEntry(6, "tailed_triangle", 4, 4, ((0, 1), (0, 2), (1, 2), (2, 3)), (3,)),
    # K4 minus the (2,3) edge; the degree-3 hinge pair is the root orbit
    TopologyEntry(7, "diamond", 4, 5, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3)), (0, 1)),
    TopologyEntry(8, "clique4", 4, 6, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)), (0, 1, 2, 3)),
    TopologyEntry(9, "path5", 5, 4, _path(5), (0, 4)),
    TopologyEntry(10, "star5", 5, 4, _star(5), (0,)),
    TopologyEntry(11, "cycle5", 5, 5, _cycle(5), (0, 1, 2, 3, 4)),
    TopologyEntry(12, "path6", 6, 5, _path(6), (0, 5)),
)

N_TOPOLOGIES = len(_ENTRIES)
ALL_TYPE_IDS = tuple(e.type_id for e in _ENTRIES)


@dataclass(frozen=True)
class TopologyCatalog:
    entries: tuple[TopologyEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def by_id(self, type_id: int) -> TopologyEntry:
        return self.entries[type_id - 1]

    def to_json(self) -> str:
        """Reference card: one object per entry with structure and root data."""
        card = []
        for e in self.entries:
            card.append(
                {
                    "type_id": e.type_id,
                    "name": e.name,
                    "nodes": e.l_v,
                    "edges": e.d_v,
                    "edge_set": [list(p) for p in e.edge_set],
                    "root_orbit": list(e.root_orbit),
                    "root_degree": e.root_degree,
                }
            )
        return json.dumps(card, indent=2)


_CATALOG = TopologyCatalog(_ENTRIES)


def catalog() -> TopologyCatalog:
    """The fixed ordered catalog of the 12 counted topologies."""
    return _CATALOG


def normalize_mask(mask=None) -> tuple[int, ...]:
    """Resolve a topology mask to a sorted tuple of type ids. None means all.
    Raises ValueError for empty masks or unknown ids."""
    if mask is None:
        return ALL_TYPE_IDS
    ids = sorted(set(int(t) for t in mask))
    if not ids:
        raise ValueError("topology mask is empty")
    for t in ids:
        if t not in ALL_TYPE_IDS:
            raise ValueError("unknown topology id %d (valid: 1..%d)" % (t, N_TOPOLOGIES))
    return tuple(ids)
