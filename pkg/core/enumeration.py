"""
Enumeration - canonical forms, small-graph generation and bound sweeps

Canonical form (n <= 16):

    colour refinement        new colour = rank of (colour, sorted neighbour colours)
         │                   until the number of classes stops growing
         ▼
    discrete? ──yes──► leaf: relabel v -> colour(v), encode as graph6
         │ no
         ▼
    individualise each vertex of the first smallest non-singleton cell,
    refine again and recurse; the form is the smallest leaf encoding.

    Leaves with equal encodings give automorphisms; children in one orbit
    of the automorphisms found so far (fixing the current prefix) are
    skipped. Disconnected graphs are encoded component by component,
    components ordered by (order, form).

Generation (connected, n <= 12):

    K1 ──add a vertex joined to 1..D vertices of degree < D──► dedupe by form
       ... level by level up to n

    Every connected graph has a vertex whose removal keeps it connected,
    so every target graph is reached. For a d-regular target a level-j
    graph is kept only if its degree deficit sum(d - deg) is at most
    d * (n - j). Disconnected targets are assembled from connected
    components. Output is sorted by canonical form.

Sweeps solve every enumerated graph exactly (optionally on a process
pool) and merge the records in canonical order.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from tqdm import tqdm

from core.config import Settings
from core.errors import BadParameter, OrderTooLarge
from core.graph import Graph
from core.graph_io import parse_graph6, to_graph6
from core.locating import ld_number_exact
from core.twins import classify_hypotheses, twin_report

logger = logging.getLogger(__name__)

ENUM_MAX_ORDER = Settings().enum_max_order
CANONICAL_MAX_ORDER = Settings().canonical_max_order


# ---- canonical form ------------------------------------------------------


def _refine(g: Graph, colours: List[int]) -> List[int]:
    classes = len(set(colours))
    while True:
        sigs = [(colours[v], tuple(sorted(colours[w] for w in g.adj[v]))) for v in range(g.n)]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colours = [rank[s] for s in sigs]
        if len(rank) == classes:
            return colours
        classes = len(rank)


def _individualise(colours: List[int], v: int) -> List[int]:
    keys = [(c, u != v) for u, c in enumerate(colours)]
    rank = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [rank[k] for k in keys]


def _target_cell(colours: List[int]) -> Optional[List[int]]:
    cells: Dict[int, List[int]] = {}
    for v, c in enumerate(colours):
        cells.setdefault(c, []).append(v)
    open_cells = [(len(vs), c) for c, vs in cells.items() if len(vs) > 1]
    if not open_cells:
        return None
    return cells[min(open_cells)[1]]


def _encode(g: Graph, labels: Sequence[int]) -> bytes:
    return to_graph6(Graph.from_edges(g.n, [(labels[u], labels[v]) for u, v in g.edges()]))


class _Canon:
    """Search tree over individualisation sequences of one connected graph."""

    def __init__(self, g: Graph):
        self.g = g
        self.best: Optional[bytes] = None
        self.best_labels: Optional[List[int]] = None
        self.seen: Dict[bytes, List[int]] = {}
        self.automorphisms: List[List[int]] = []

    def run(self) -> Tuple[bytes, List[int]]:
        self._visit(_refine(self.g, [0] * self.g.n), [])
        return self.best, self.best_labels

    def _visit(self, colours: List[int], prefix: List[int]) -> None:
        cell = _target_cell(colours)
        if cell is None:
            self._leaf(colours)
            return
        explored: List[int] = []
        for v in cell:
            if explored and self._same_orbit(v, explored, prefix):
                continue
            explored.append(v)
            self._visit(_refine(self.g, _individualise(colours, v)), prefix + [v])

    def _leaf(self, labels: List[int]) -> None:
        code = _encode(self.g, labels)
        earlier = self.seen.get(code)
        if earlier is not None:
            # labels and earlier give the same graph: earlier^-1 . labels is an automorphism
            back = [0] * self.g.n
            for v, lab in enumerate(earlier):
                back[lab] = v
            self.automorphisms.append([back[labels[v]] for v in range(self.g.n)])
            return
        self.seen[code] = labels
        if self.best is None or code < self.best:
            self.best, self.best_labels = code, labels

    def _same_orbit(self, v: int, explored: List[int], prefix: List[int]) -> bool:
        gens = [a for a in self.automorphisms if all(a[p] == p for p in prefix)]
        if not gens:
            return False
        parent = list(range(self.g.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in gens:
            for x in range(self.g.n):
                rx, ry = find(x), find(a[x])
                if rx != ry:
                    parent[rx] = ry
        root = find(v)
        return any(find(w) == root for w in explored)


def canonical_labelling(g: Graph) -> Tuple[bytes, List[int]]:
    """Return (form, labels) where ``labels[v]`` is v's canonical index.

    Raises:
        OrderTooLarge: n > 16.
    """
    if g.n > CANONICAL_MAX_ORDER:
        raise OrderTooLarge(g.n, CANONICAL_MAX_ORDER, "canonical_form")
    if g.n == 0:
        return to_graph6(g), []
    comps = g.components()
    if len(comps) == 1:
        return _Canon(g).run()
    parts = []
    for comp in comps:
        sub, mapping = g.induced(comp)
        code, labels = _Canon(sub).run()
        inverse = mapping.inverse()
        parts.append((sub.n, code, [inverse[v] for v in sorted(range(sub.n), key=lambda t: labels[t])]))
    parts.sort(key=lambda p: (p[0], p[1]))
    order = [v for _, _, vs in parts for v in vs]
    labels = [0] * g.n
    for new, old in enumerate(order):
        labels[old] = new
    return _encode(g, labels), labels


def canonical_form(g: Graph) -> bytes:
    """Isomorphism-invariant graph6 encoding.

    Examples:
        >>> from core.graph import path_graph
        >>> canonical_form(path_graph(4)) == canonical_form(Graph.from_edges(4, [(0, 2), (2, 1), (1, 3)]))
        True
    """
    return canonical_labelling(g)[0]


def canonical_graph(g: Graph) -> Graph:
    return parse_graph6(canonical_form(g))


# ---- generation ----------------------------------------------------------


@dataclass(frozen=True)
class EnumFilter:
    """Which graphs of order ``n`` to emit.

    ``regular`` fixes every degree (0..3); otherwise degrees are bounded by
    ``max_degree``. The optional flags keep only graphs with the property
    (True) or without it (False).
    """

    n: int
    max_degree: int = 3
    regular: Optional[int] = None
    connected: bool = True
    twin_free: Optional[bool] = None
    open_twin_free: Optional[bool] = None
    hypothesis_class: Optional[bool] = None

    def __post_init__(self):
        if self.n < 1:
            raise BadParameter(f"n must be >= 1, got {self.n}")
        if self.regular is not None and not 0 <= self.regular <= 3:
            raise BadParameter(f"regular degree must be 0..3, got {self.regular}")
        if not 0 <= self.max_degree <= 3:
            raise BadParameter(f"max degree must be 0..3, got {self.max_degree}")

    @property
    def degree_cap(self) -> int:
        return self.regular if self.regular is not None else self.max_degree

    def accepts(self, g: Graph) -> bool:
        if self.regular is not None and not g.is_regular(self.regular):
            return False
        if self.connected and not g.is_connected():
            return False
        if self.twin_free is not None or self.open_twin_free is not None:
            report = twin_report(g)
            if self.twin_free is not None and report.is_twin_free != self.twin_free:
                return False
            if self.open_twin_free is not None and report.is_open_twin_free != self.open_twin_free:
                return False
        if self.hypothesis_class is not None:
            inside = classify_hypotheses(g) != "outside"
            if inside != self.hypothesis_class:
                return False
        return True

    def describe(self) -> str:
        parts = [f"n={self.n}"]
        parts.append(f"{self.regular}-regular" if self.regular is not None else f"max-degree<={self.max_degree}")
        if self.connected:
            parts.append("connected")
        for name in ("twin_free", "open_twin_free", "hypothesis_class"):
            value = getattr(self, name)
            if value is not None:
                parts.append(name.replace("_", "-") if value else f"not-{name.replace('_', '-')}")
        return ", ".join(parts)


def _connected_levels(n: int, cap: int, regular: Optional[int]) -> Dict[bytes, Graph]:
    """Connected graphs of order n with max degree <= cap, keyed by form."""
    level: Dict[bytes, Graph] = {canonical_form(Graph.empty(1)): Graph.empty(1)}
    for j in range(1, n):
        following: Dict[bytes, Graph] = {}
        for h in level.values():
            open_vertices = [v for v in range(h.n) if len(h.adj[v]) < cap]
            for size in range(1, min(cap, len(open_vertices)) + 1):
                for attach in itertools.combinations(open_vertices, size):
                    child = Graph.from_edges(j + 1, list(h.edges()) + [(v, j) for v in attach])
                    if regular is not None:
                        deficit = sum(regular - d for d in child.degrees())
                        if deficit > regular * (n - j - 1):
                            continue
                    code = canonical_form(child)
                    if code not in following:
                        following[code] = child
        logger.debug("order %d: %d connected graphs with max degree <= %d", j + 1, len(following), cap)
        level = following
    return level


def _connected_graphs(n: int, f: EnumFilter) -> List[Graph]:
    if n == 1:
        return [Graph.empty(1)] if f.regular in (None, 0) else []
    if f.regular == 0 or f.degree_cap == 0:
        return []
    graphs = _connected_levels(n, f.degree_cap, f.regular)
    return [parse_graph6(code) for code in graphs]


def _disjoint_union(parts: Sequence[Graph]) -> Graph:
    edges = []
    offset = 0
    for part in parts:
        edges.extend((u + offset, v + offset) for u, v in part.edges())
        offset += part.n
    return Graph.from_edges(offset, edges)


def _partitions(n: int, largest: int) -> Iterator[List[int]]:
    if n == 0:
        yield []
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield [first] + rest


def _all_graphs(f: EnumFilter) -> List[Graph]:
    by_order = {k: _connected_graphs(k, f) for k in range(1, f.n + 1)}
    out = []
    for orders in _partitions(f.n, f.n):
        counts: Dict[int, int] = {}
        for k in orders:
            counts[k] = counts.get(k, 0) + 1
        pools = [list(itertools.combinations_with_replacement(by_order[k], c)) for k, c in sorted(counts.items())]
        for choice in itertools.product(*pools):
            out.append(_disjoint_union([g for group in choice for g in group]))
    return out


def enumerate_graphs(f: EnumFilter) -> Iterator[Graph]:
    """One representative per isomorphism class, in canonical-form order.

    Each emitted graph is the canonical relabelling of its class.

    Raises:
        OrderTooLarge: n > 12; feed larger graphs in as graph6 streams.
    """
    if f.n > ENUM_MAX_ORDER:
        raise OrderTooLarge(f.n, ENUM_MAX_ORDER, "enumerate_graphs")
    candidates = _connected_graphs(f.n, f) if f.connected else _all_graphs(f)
    forms = sorted({canonical_form(g) for g in candidates})
    logger.info("Enumerated %d graphs for %s", len(forms), f.describe())
    for code in forms:
        g = parse_graph6(code)
        if f.accepts(g):
            yield g


# ---- sweeps --------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    graph6: str
    n: int
    m: int
    classification: str
    gamma: int
    witness: Tuple[int, ...]
    bound_applies: bool
    slater_ok: bool

    @property
    def ratio(self) -> float:
        return self.gamma / self.n

    @property
    def tight(self) -> bool:
        return 2 * self.gamma == self.n

    @property
    def violation(self) -> bool:
        return self.bound_applies and self.gamma > self.n // 2

    def to_dict(self) -> dict:
        return {
            "graph6": self.graph6,
            "n": self.n,
            "m": self.m,
            "classification": self.classification,
            "gamma": self.gamma,
            "witness": list(self.witness),
            "ratio": round(self.ratio, 6),
            "bound_applies": self.bound_applies,
            "tight": self.tight,
            "violation": self.violation,
            "slater_ok": self.slater_ok,
        }


@dataclass(frozen=True)
class SweepReport:
    bound: str
    filter_description: str
    records: Tuple[SweepRecord, ...] = field(default_factory=tuple)

    @property
    def count(self) -> int:
        return len(self.records)

    @property
    def max_ratio(self) -> float:
        return max((r.ratio for r in self.records), default=0.0)

    @property
    def tight(self) -> List[SweepRecord]:
        return [r for r in self.records if r.tight and r.bound_applies]

    @property
    def violations(self) -> List[SweepRecord]:
        return [r for r in self.records if r.violation]

    @property
    def excluded(self) -> List[SweepRecord]:
        """Graphs outside the bound's hypotheses that exceed it anyway."""
        return [r for r in self.records if not r.bound_applies and r.gamma > r.n // 2]

    @property
    def slater_failures(self) -> List[SweepRecord]:
        return [r for r in self.records if not r.slater_ok]

    def summary(self) -> dict:
        return {
            "count": self.count,
            "max_ratio": round(self.max_ratio, 6),
            "tight": len(self.tight),
            "tight_graphs": [r.graph6 for r in self.tight],
            "violations": len(self.violations),
            "violation_graphs": [r.graph6 for r in self.violations],
            "excluded_over_bound": [r.graph6 for r in self.excluded],
            "slater_failures": len(self.slater_failures),
        }

    def to_dict(self, include_records: bool = True) -> dict:
        out = {"bound": self.bound, "filter": self.filter_description, "summary": self.summary()}
        if include_records:
            out["records"] = [r.to_dict() for r in self.records]
        return out


def bound_applies(g: Graph) -> bool:
    """Whether the n/2 bound is claimed for ``g``.

    It is claimed for twin-free graphs without isolated vertices and for
    every graph in the constructive class (connected, subcubic, no open
    twins of degree 1 or 2, not K3, K4 or K3,3).
    """
    if any(not g.adj[v] for v in range(g.n)):
        return False
    if twin_report(g).is_twin_free:
        return True
    return classify_hypotheses(g) != "outside"


def _solve_record(args) -> SweepRecord:
    code, node_budget = args
    g = parse_graph6(code)
    result = ld_number_exact(g, node_budget=node_budget)
    report = twin_report(g)
    if g.is_connected():
        classification = classify_hypotheses(g)
    else:
        classification = "twin-free" if report.is_twin_free else "disconnected"
    slater = not g.is_subcubic() or result.value >= math.ceil(g.n / 3)
    return SweepRecord(
        graph6=code.decode("ascii"),
        n=g.n,
        m=g.m,
        classification=classification,
        gamma=result.value,
        witness=result.witness.members(),
        bound_applies=bound_applies(g),
        slater_ok=slater,
    )


def sweep_graphs(
    graphs: Iterable[Graph],
    description: str = "graph6 stream",
    threads: int = 1,
    node_budget: Optional[int] = None,
    progress: bool = False,
) -> SweepReport:
    """Solve every graph exactly and collect a report in canonical order."""
    codes = sorted({canonical_form(g) for g in graphs})
    jobs = [(code, node_budget) for code in codes]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(tqdm(pool.map(_solve_record, jobs, chunksize=8), total=len(jobs),
                                disable=not progress, desc="sweep", unit="graph"))
    else:
        records = [_solve_record(job) for job in tqdm(jobs, disable=not progress, desc="sweep", unit="graph")]
    report = SweepReport("half", description, tuple(records))
    if report.violations:
        logger.warning("%d graphs exceed n/2 under the bound's hypotheses", len(report.violations))
    return report


def sweep_conjecture(
    f: EnumFilter,
    bound: str = "half",
    threads: int = 1,
    node_budget: Optional[int] = None,
    progress: bool = False,
) -> SweepReport:
    """Check gamma <= floor(n/2) on every graph ``f`` enumerates.

    Raises:
        OrderTooLarge: as enumerate_graphs.
        BadParameter: unknown bound.
        BudgetExceeded: propagated from the exact solver.
    """
    if bound != "half":
        raise BadParameter(f"unknown bound {bound!r}; only 'half' is supported")
    return sweep_graphs(enumerate_graphs(f), f.describe(), threads, node_budget, progress)
