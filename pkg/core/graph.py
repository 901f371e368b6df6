"""
Graph Core - Immutable simple graphs, vertex sets and index remapping

This module is the value layer every other module is built on:

    1. Graph: simple undirected graph on vertices 0..n-1 with sorted adjacency
    2. VertexSet: bitmask-backed set of vertex indices over a fixed universe
    3. VertexMapping: old -> new index map produced by vertex deletion

Editing Model:

    Every editor returns a NEW graph (mutation-by-copy):

        g  ──remove_edges([(1,2)])──►  g'        (same vertex set)
        g  ──remove_vertices({3})───►  (g', m)   (compacted, m maps back)

    Recursive algorithms can therefore hold several intermediate graphs
    at once without aliasing problems.

Representation:
    adj[v] is a strictly increasing tuple of neighbours. Symmetry, the
    absence of loops and index bounds are established by the constructors
    and re-checked by Graph.validate().

Limitations:
    - Simple graphs only (no weights, directions, multi-edges or loops)
    - Vertex names are plain indices; human labels live in caller metadata
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from core.errors import EdgeNotPresent, IndexOutOfRange, LoopEdge

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class VertexSet:
    """
    Immutable set of vertex indices over a universe of size ``n``.

    Members are stored as an integer bitmask, so membership, union,
    intersection and difference are single integer operations. Ordering
    compares the sorted member sequences lexicographically, which is the
    tie-break order used for solver witnesses.

    Examples:
        >>> s = VertexSet.of(4, [0, 2])
        >>> 2 in s, len(s), list(s)
        (True, 2, [0, 2])
    """

    __slots__ = ("_n", "_mask")

    def __init__(self, n: int, mask: int = 0):
        if mask >> n:
            raise IndexOutOfRange(mask.bit_length() - 1, n)
        self._n = n
        self._mask = mask

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "VertexSet":
        mask = 0
        for v in members:
            if not 0 <= v < n:
                raise IndexOutOfRange(v, n)
            mask |= 1 << v
        return cls(n, mask)

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls(n, 0)

    @property
    def universe(self) -> int:
        return self._n

    @property
    def mask(self) -> int:
        return self._mask

    def members(self) -> Tuple[int, ...]:
        out = []
        mask = self._mask
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return tuple(out)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self._n and bool((self._mask >> v) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members())

    def __len__(self) -> int:
        return self._mask.bit_count()

    def __bool__(self) -> bool:
        return self._mask != 0

    def _coerce(self, other: "VertexSet") -> int:
        if not isinstance(other, VertexSet):
            raise TypeError(f"expected VertexSet, got {type(other).__name__}")
        if other._n != self._n:
            raise ValueError(f"VertexSet universes differ: {self._n} vs {other._n}")
        return other._mask

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self._n, self._mask | self._coerce(other))

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self._n, self._mask & self._coerce(other))

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self._n, self._mask & ~self._coerce(other))

    def with_vertex(self, v: int) -> "VertexSet":
        if not 0 <= v < self._n:
            raise IndexOutOfRange(v, self._n)
        return VertexSet(self._n, self._mask | (1 << v))

    def without_vertex(self, v: int) -> "VertexSet":
        return VertexSet(self._n, self._mask & ~(1 << v))

    def issubset(self, other: "VertexSet") -> bool:
        return self._mask & ~self._coerce(other) == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self._n == other._n and self._mask == other._mask

    def __hash__(self) -> int:
        return hash((self._n, self._mask))

    def __lt__(self, other: "VertexSet") -> bool:
        return self.members() < other.members()

    def __le__(self, other: "VertexSet") -> bool:
        return self.members() <= other.members()

    def __repr__(self) -> str:
        return f"VertexSet({self._n}, {{{', '.join(map(str, self.members()))}}})"


@dataclass(frozen=True)
class VertexMapping:
    """
    Index map produced by deleting vertices.

    Attributes:
        forward: For each old index, its new index or None if removed.
        removed: Old indices that were deleted, ascending.
    """

    forward: Tuple[Optional[int], ...]
    removed: Tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "VertexMapping":
        return cls(forward=tuple(range(n)), removed=())

    @property
    def n_old(self) -> int:
        return len(self.forward)

    @property
    def n_new(self) -> int:
        return len(self.forward) - len(self.removed)

    def inverse(self) -> Tuple[int, ...]:
        """Old index of each new index."""
        return tuple(old for old, new in enumerate(self.forward) if new is not None)

    def new_index(self, old: int) -> Optional[int]:
        return self.forward[old]

    def patch_back(self, s: VertexSet) -> VertexSet:
        """Lift a set on the reduced graph to the original indices."""
        inv = self.inverse()
        return VertexSet.of(self.n_old, (inv[v] for v in s))

    def push_forward(self, s: VertexSet) -> VertexSet:
        """Restrict a set on the original graph to the surviving vertices."""
        return VertexSet.of(
            self.n_new, (self.forward[v] for v in s if self.forward[v] is not None)
        )

    def compose(self, later: "VertexMapping") -> "VertexMapping":
        """Mapping equivalent to applying ``self`` and then ``later``."""
        forward = tuple(
            None if new is None else later.forward[new] for new in self.forward
        )
        removed = tuple(old for old, new in enumerate(forward) if new is None)
        return VertexMapping(forward=forward, removed=removed)


class Graph:
    """
    Immutable simple undirected graph on vertices ``0..n-1``.

    Attributes:
        n: Number of vertices.
        adj: Per-vertex strictly increasing tuple of neighbours.

    Thread Safety: instances are never mutated after construction and may
    be shared freely between threads and processes.

    Examples:
        >>> p4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        >>> p4.edge_count, p4.degree(1)
        (3, 2)
    """

    __slots__ = ("n", "adj", "_m")

    def __init__(self, n: int, adj: Sequence[Sequence[int]]):
        self.n = n
        self.adj: Tuple[Tuple[int, ...], ...] = tuple(tuple(a) for a in adj)
        self._m = sum(len(a) for a in self.adj) // 2

    # ---- construction -------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        """Build a graph from an edge list, dropping duplicate pairs.

        Raises:
            IndexOutOfRange: an endpoint is not in ``[0, n)``.
            LoopEdge: a pair ``(v, v)`` is present.
        """
        neighbours: List[set] = [set() for _ in range(n)]
        for u, v in edges:
            for x in (u, v):
                if not 0 <= x < n:
                    raise IndexOutOfRange(x, n)
            if u == v:
                raise LoopEdge(u)
            neighbours[u].add(v)
            neighbours[v].add(u)
        return cls(n, [sorted(s) for s in neighbours])

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [()] * n)

    # ---- accessors ----------------------------------------------------

    @property
    def edge_count(self) -> int:
        return self._m

    @property
    def m(self) -> int:
        return self._m

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexOutOfRange(v, self.n)

    def degree(self, v: int) -> int:
        self._check(v)
        return len(self.adj[v])

    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(a) for a in self.adj)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def open_neighbors(self, v: int) -> VertexSet:
        self._check(v)
        return VertexSet.of(self.n, self.adj[v])

    def closed_neighbors(self, v: int) -> VertexSet:
        return self.open_neighbors(v).with_vertex(v)

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return v in self.adj[u]

    def edges(self) -> Iterator[Edge]:
        """Yield every edge once as ``(u, v)`` with ``u < v``, sorted."""
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_subcubic(self) -> bool:
        return self.max_degree() <= 3

    def is_regular(self, d: int) -> bool:
        return all(len(a) == d for a in self.adj)

    def is_cubic(self) -> bool:
        return self.is_regular(3)

    def components(self) -> List[VertexSet]:
        """Connected components ordered by their minimum vertex."""
        seen = [False] * self.n
        out: List[VertexSet] = []
        for start in range(self.n):
            if seen[start]:
                continue
            seen[start] = True
            stack = [start]
            members = []
            while stack:
                v = stack.pop()
                members.append(v)
                for w in self.adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            out.append(VertexSet.of(self.n, members))
        return out

    # ---- editing ------------------------------------------------------

    def remove_edges(self, edges: Iterable[Edge]) -> "Graph":
        """Return ``G - e1 - e2 - ...``.

        Raises:
            EdgeNotPresent: some pair is not an edge of this graph.
        """
        drop: Dict[int, set] = {}
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n) or v not in self.adj[u]:
                raise EdgeNotPresent(u, v)
            if v in drop.get(u, ()):
                raise EdgeNotPresent(u, v)
            drop.setdefault(u, set()).add(v)
            drop.setdefault(v, set()).add(u)
        return Graph(
            self.n,
            [tuple(w for w in a if w not in drop.get(v, ())) for v, a in enumerate(self.adj)],
        )

    def add_edges(self, edges: Iterable[Edge]) -> "Graph":
        """Return a copy with the given edges added (existing ones kept)."""
        return Graph.from_edges(self.n, list(self.edges()) + list(edges))

    def remove_vertices(self, vs: Iterable[int]) -> Tuple["Graph", VertexMapping]:
        """Return ``G - v1 - v2 - ...`` with survivors compacted in order."""
        gone = set()
        for v in vs:
            self._check(v)
            gone.add(v)
        forward: List[Optional[int]] = []
        nxt = 0
        for v in range(self.n):
            if v in gone:
                forward.append(None)
            else:
                forward.append(nxt)
                nxt += 1
        adj = [
            tuple(forward[w] for w in self.adj[v] if forward[w] is not None)
            for v in range(self.n)
            if forward[v] is not None
        ]
        mapping = VertexMapping(forward=tuple(forward), removed=tuple(sorted(gone)))
        return Graph(nxt, adj), mapping

    def induced(self, vs: Iterable[int]) -> Tuple["Graph", VertexMapping]:
        """Induced subgraph on ``vs`` plus the mapping from this graph to it."""
        keep = set(vs)
        return self.remove_vertices(v for v in range(self.n) if v not in keep)

    # ---- checks -------------------------------------------------------

    def validate(self) -> None:
        """Re-check the representation invariants.

        Raises:
            ValueError: adjacency is unsorted, asymmetric, has a loop or
                an out-of-range index.
        """
        if len(self.adj) != self.n:
            raise ValueError(f"adjacency has {len(self.adj)} rows for n={self.n}")
        for v, nbrs in enumerate(self.adj):
            for i, w in enumerate(nbrs):
                if not 0 <= w < self.n:
                    raise IndexOutOfRange(w, self.n)
                if w == v:
                    raise LoopEdge(v)
                if i and nbrs[i - 1] >= w:
                    raise ValueError(f"adjacency of {v} is not strictly increasing")
                if v not in self.adj[w]:
                    raise ValueError(f"edge ({v},{w}) is not symmetric")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"

    def __reduce__(self):
        return (Graph, (self.n, self.adj))


# ---- functional surface ----------------------------------------------


def from_edges(n: int, edges: Iterable[Edge]) -> Graph:
    return Graph.from_edges(n, edges)


def remove_edges(g: Graph, edges: Iterable[Edge]) -> Graph:
    return g.remove_edges(edges)


def remove_vertices(g: Graph, vs: Iterable[int]) -> Tuple[Graph, VertexMapping]:
    return g.remove_vertices(vs)


def components(g: Graph) -> List[VertexSet]:
    return g.components()


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


def open_neighbors(g: Graph, v: int) -> VertexSet:
    return g.open_neighbors(v)


def closed_neighbors(g: Graph, v: int) -> VertexSet:
    return g.closed_neighbors(v)


def is_connected(g: Graph) -> bool:
    return g.is_connected()


def is_subcubic(g: Graph) -> bool:
    return g.is_subcubic()


def is_cubic(g: Graph) -> bool:
    return g.is_cubic()


def edge_count(g: Graph) -> int:
    return g.edge_count


# ---- reference constructors ------------------------------------------


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def prism_graph() -> Graph:
    """Two triangles 0-1-2 and 3-4-5 joined by rungs i -- i+3."""
    return Graph.from_edges(
        6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
    )


# ---- networkx interop ------------------------------------------------


def to_networkx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_networkx(h) -> Graph:
    """Convert a networkx graph; nodes are relabelled in sorted order."""
    nodes = sorted(h.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), [(index[u], index[v]) for u, v in h.edges()])
