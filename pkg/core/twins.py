"""
Twins & Structure - twin pairs, leaves, short cycles and (F;U)-embeddings

Vocabulary:

    open twins     N(u) = N(v), u != v      (never adjacent)
    closed twins   N[u] = N[v], u != v      (always adjacent)
    leaf           degree 1
    support        neighbour of a leaf

Pattern graphs F0..F6 (plus F3' = F3 - x'):

    Every pattern is anchored at a pair u, v of open twins of degree 3 with
    common neighbours x, y, z. Labels use the ten symbols
    u v w w' x x' y y' z z'; an embedding maps labels to vertices of G.

    (F;U)-embedding j: injective, every F edge maps to a G edge, and for
    each label a in U the whole closed neighbourhood N_G[j(a)] lies in the
    image with every incident G edge accounted for by an F edge.

Cycle canonical forms:
    triangles   (a, b, c) sorted
    4-cycles    (a, b, c, d) with a the minimum and b < d
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from core.errors import BadParameter, HypothesisViolated
from core.graph import Graph, VertexSet

logger = logging.getLogger(__name__)

Pair = Tuple[int, int, int]


@dataclass(frozen=True)
class TwinReport:
    """Sorted twin pairs as ``(u, v, shared_degree)`` with u < v."""

    open_pairs: Tuple[Pair, ...]
    closed_pairs: Tuple[Pair, ...]

    @property
    def is_twin_free(self) -> bool:
        return not self.open_pairs and not self.closed_pairs

    @property
    def is_open_twin_free(self) -> bool:
        return not self.open_pairs

    def to_dict(self) -> dict:
        return {
            "open_pairs": [list(p) for p in self.open_pairs],
            "closed_pairs": [list(p) for p in self.closed_pairs],
            "twin_free": self.is_twin_free,
        }


def twin_report(g: Graph) -> TwinReport:
    """List every open and closed twin pair of ``g``.

    Examples:
        >>> from core.graph import cycle_graph
        >>> twin_report(cycle_graph(4)).open_pairs
        ((0, 2, 2), (1, 3, 2))
    """
    by_open: Dict[Tuple[int, ...], List[int]] = {}
    by_closed: Dict[Tuple[int, ...], List[int]] = {}
    for v in range(g.n):
        by_open.setdefault(g.adj[v], []).append(v)
        by_closed.setdefault(tuple(sorted((v, *g.adj[v]))), []).append(v)
    open_pairs = []
    for key, group in by_open.items():
        for u, v in itertools.combinations(group, 2):
            open_pairs.append((u, v, len(key)))
    closed_pairs = []
    for key, group in by_closed.items():
        for u, v in itertools.combinations(group, 2):
            closed_pairs.append((u, v, len(key) - 1))
    return TwinReport(tuple(sorted(open_pairs)), tuple(sorted(closed_pairs)))


def is_twin_free(g: Graph) -> bool:
    return twin_report(g).is_twin_free


def is_open_twin_free(g: Graph) -> bool:
    return twin_report(g).is_open_twin_free


def open_twins_of_degree(g: Graph, d: int) -> List[Tuple[int, int]]:
    return [(u, v) for u, v, k in twin_report(g).open_pairs if k == d]


def closed_twins_of_degree(g: Graph, d: int) -> List[Tuple[int, int]]:
    return [(u, v) for u, v, k in twin_report(g).closed_pairs if k == d]


def leaves_and_supports(g: Graph) -> Tuple[VertexSet, VertexSet]:
    leaves = [v for v in range(g.n) if len(g.adj[v]) == 1]
    supports = {g.adj[v][0] for v in leaves}
    return VertexSet.of(g.n, leaves), VertexSet.of(g.n, supports)


def triangles(g: Graph) -> List[Tuple[int, int, int]]:
    out = []
    for a in range(g.n):
        for b in g.adj[a]:
            if b <= a:
                continue
            for c in g.adj[b]:
                if c > b and c in g.adj[a]:
                    out.append((a, b, c))
    return out


def four_cycles(g: Graph) -> List[Tuple[int, int, int, int]]:
    """All 4-cycles a-b-c-d-a, each once, with a minimal and b < d."""
    out = set()
    for a in range(g.n):
        for b, d in itertools.combinations(g.adj[a], 2):
            if b < a or d < a:
                continue
            for c in g.adj[b]:
                if c != a and c > a and c != d and c in g.adj[d]:
                    out.add((a, b, c, d))
    return sorted(out)


def has_four_cycle(g: Graph) -> bool:
    return bool(four_cycles(g))


@dataclass(frozen=True)
class LemmaReport:
    passed: bool
    statement: Optional[str] = None
    configuration: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "statement": self.statement,
            "configuration": list(self.configuration),
        }


def check_structure_lemmas(g: Graph) -> LemmaReport:
    """Check the structural facts of twin-free subcubic graphs.

    1. In a triangle-free graph, common neighbours of two vertices of a
       4-cycle lie on that 4-cycle.
    2. No two triangles share an edge.
    3. Every 4-cycle is induced.

    Raises:
        HypothesisViolated: ``g`` is not subcubic and twin-free.
    """
    if not g.is_subcubic():
        raise HypothesisViolated("subcubic", "structure lemmas need a subcubic graph")
    report = twin_report(g)
    if not report.is_twin_free:
        pair = (report.open_pairs or report.closed_pairs)[0]
        raise HypothesisViolated("twin-free", f"graph has twins {pair[:2]}", pair[:2])

    tris = triangles(g)
    seen_edges: Dict[Tuple[int, int], Tuple[int, int, int]] = {}
    for tri in tris:
        for e in itertools.combinations(tri, 2):
            if e in seen_edges:
                return LemmaReport(False, "triangles-share-edge", seen_edges[e] + tri)
            seen_edges[e] = tri

    cycles = four_cycles(g)
    for cyc in cycles:
        a, b, c, d = cyc
        if g.has_edge(a, c) or g.has_edge(b, d):
            return LemmaReport(False, "four-cycle-not-induced", cyc)

    if not tris:
        for cyc in cycles:
            members = set(cyc)
            for u, v in itertools.combinations(cyc, 2):
                common = set(g.adj[u]) & set(g.adj[v])
                stray = sorted(common - members)
                if stray:
                    return LemmaReport(False, "common-neighbour-off-cycle", cyc + (stray[0],))
    return LemmaReport(True)


def classify_hypotheses(g: Graph) -> str:
    """Name the strongest constructive class a connected subcubic graph is in.

    Returns one of ``"twin-free"``, ``"open-twin-free"``,
    ``"no-open-twins-deg12"`` or ``"outside"``.
    """
    if not g.is_subcubic() or not g.is_connected() or g.n < 2:
        return "outside"
    report = twin_report(g)
    if report.is_twin_free:
        return "twin-free"
    if _forbidden_name(g) is not None:
        return "outside"
    if report.is_open_twin_free:
        return "open-twin-free"
    if all(k == 3 for _, _, k in report.open_pairs):
        return "no-open-twins-deg12"
    return "outside"


def _forbidden_name(g: Graph) -> Optional[str]:
    if g.n == 3 and g.edge_count == 3:
        return "K3"
    if g.n == 4 and g.edge_count == 6:
        return "K4"
    if g.n == 6 and g.is_cubic() and not triangles(g):
        return "K3,3"
    return None


# ---- pattern graphs ----------------------------------------------------

_ANCHOR_EDGES = [("u", "x"), ("u", "y"), ("u", "z"), ("v", "x"), ("v", "y"), ("v", "z")]


@dataclass(frozen=True)
class FPattern:
    """A labelled pattern graph with its default U-set."""

    name: str
    labels: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    u_set: FrozenSet[str]

    def graph(self) -> Graph:
        index = {a: i for i, a in enumerate(self.labels)}
        return Graph.from_edges(len(self.labels), [(index[a], index[b]) for a, b in self.edges])

    def degree(self, label: str) -> int:
        return sum(1 for e in self.edges if label in e)

    def neighbours(self, label: str) -> List[str]:
        return [b if a == label else a for a, b in self.edges if label in (a, b)]


_FULL_U = frozenset({"u", "v", "w", "x", "y", "z"})
_PLAIN_U = frozenset({"u", "v", "x", "y", "z"})

F_GRAPHS: Dict[int, FPattern] = {
    0: FPattern("F0", ("u", "v", "x", "y", "z"), tuple(_ANCHOR_EDGES), frozenset({"u", "v"})),
    1: FPattern(
        "F1",
        ("u", "v", "w", "w'", "x", "y", "z"),
        tuple(_ANCHOR_EDGES + [("y", "w"), ("z", "w"), ("w", "w'")]),
        _FULL_U,
    ),
    2: FPattern(
        "F2",
        ("u", "v", "x", "y", "y'", "z", "z'"),
        tuple(_ANCHOR_EDGES + [("y", "y'"), ("z", "z'")]),
        _PLAIN_U,
    ),
    3: FPattern(
        "F3",
        ("u", "v", "x", "x'", "y", "z"),
        tuple(_ANCHOR_EDGES + [("y", "z"), ("x", "x'")]),
        _PLAIN_U,
    ),
    4: FPattern(
        "F4",
        ("u", "v", "w", "w'", "x", "x'", "y", "z"),
        tuple(_ANCHOR_EDGES + [("w", "y"), ("w", "z"), ("w", "w'"), ("x", "x'")]),
        _FULL_U,
    ),
    5: FPattern(
        "F5",
        ("u", "v", "w", "x", "x'", "y", "z"),
        tuple(_ANCHOR_EDGES + [("w", "y"), ("w", "z"), ("x", "x'"), ("w", "x'")]),
        _FULL_U,
    ),
    6: FPattern(
        "F6",
        ("u", "v", "x", "x'", "y", "y'", "z", "z'"),
        tuple(_ANCHOR_EDGES + [("x", "x'"), ("y", "y'"), ("z", "z'")]),
        _PLAIN_U,
    ),
}

F3_PRIME = FPattern(
    "F3'", ("u", "v", "x", "y", "z"), tuple(_ANCHOR_EDGES + [("y", "z")]), _PLAIN_U
)


@dataclass(frozen=True)
class FEmbedding:
    family_index: int
    assignment: Tuple[Tuple[str, int], ...]
    u_set: FrozenSet[str] = field(default_factory=frozenset)

    def as_dict(self) -> Dict[str, int]:
        return dict(self.assignment)

    def __getitem__(self, label: str) -> int:
        return self.as_dict()[label]

    def to_dict(self) -> dict:
        return {
            "family": f"F{self.family_index}",
            "assignment": {a: v for a, v in self.assignment},
            "u_set": sorted(self.u_set),
        }


def check_f_embedding(g: Graph, emb: FEmbedding, u_set: Optional[FrozenSet[str]] = None) -> bool:
    """Independently re-check the (F;U)-embedding invariants."""
    pattern = F_GRAPHS[emb.family_index]
    u_set = emb.u_set if u_set is None else u_set
    mapping = emb.as_dict()
    if set(mapping) != set(pattern.labels):
        return False
    images = list(mapping.values())
    if len(set(images)) != len(images) or not all(0 <= v < g.n for v in images):
        return False
    for a, b in pattern.edges:
        if not g.has_edge(mapping[a], mapping[b]):
            return False
    inverse = {v: a for a, v in mapping.items()}
    pattern_edges = {frozenset(e) for e in pattern.edges}
    for a in u_set:
        for w in g.adj[mapping[a]]:
            if w not in inverse or frozenset((a, inverse[w])) not in pattern_edges:
                return False
    return True


def find_f_embedding(
    g: Graph, i: int, u_set: Optional[FrozenSet[str]] = None
) -> Optional[FEmbedding]:
    """Lexicographically smallest (F_i;U)-embedding of F_i into ``g``.

    Labels are assigned in the pattern's label order and candidates tried
    in increasing vertex order, so the first complete assignment is the
    lexicographically smallest image tuple. Candidates for u are limited to
    vertices that have an open twin of degree 3.

    Args:
        g: Host graph.
        i: Pattern index 0..6.
        u_set: Override for the pattern's default U-set.
    """
    if i not in F_GRAPHS:
        raise BadParameter(f"pattern index must be 0..6, got {i}")
    pattern = F_GRAPHS[i]
    u_set = pattern.u_set if u_set is None else frozenset(u_set)
    labels = pattern.labels
    pattern_nbrs = {a: set(pattern.neighbours(a)) for a in labels}
    pattern_edges = {frozenset(e) for e in pattern.edges}

    anchored = "u" in u_set and "v" in u_set
    twin3 = set()
    for u, v in open_twins_of_degree(g, 3):
        twin3.update((u, v))

    assignment: Dict[str, int] = {}
    used = set()

    def fits(label: str, vertex: int) -> bool:
        if vertex in used:
            return False
        deg = len(g.adj[vertex])
        if deg < pattern.degree(label):
            return False
        if label in u_set and deg != pattern.degree(label):
            return False
        if label == "u" and anchored and vertex not in twin3:
            return False
        for other, w in assignment.items():
            adjacent = w in g.adj[vertex]
            if other in pattern_nbrs[label] and not adjacent:
                return False
            if adjacent and (label in u_set or other in u_set):
                if frozenset((label, other)) not in pattern_edges:
                    return False
        return True

    def extend(k: int) -> bool:
        if k == len(labels):
            return True
        label = labels[k]
        for vertex in range(g.n):
            if fits(label, vertex):
                assignment[label] = vertex
                used.add(vertex)
                if extend(k + 1):
                    return True
                del assignment[label]
                used.discard(vertex)
        return False

    if not extend(0):
        return None
    emb = FEmbedding(i, tuple((a, assignment[a]) for a in labels), u_set)
    if not check_f_embedding(g, emb):
        logger.warning("Embedding of F%d failed its own check: %s", i, emb)
        return None
    return emb
