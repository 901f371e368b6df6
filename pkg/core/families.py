"""
Families - parametric example graphs bundled with their witness sets

Every generator returns a FamilyInstance: the graph, a designated witness,
the claimed value and a label for each vertex.

    kind                 n          claimed      claim kind
    ───────────────────  ─────────  ───────────  ─────────────────
    LtdComb(p)           3p         2p           ExactLtd
    Deg1Twins(k)         12k        7k           ExactGamma
    Deg2Twins(k)         60k        32k          ExactGamma
    ClosedReg(r, k)      (3r+3)k    (3r-4)k      ExactGamma
    TightSubcubic(k)     8k+2       4k+1         ExactGamma
    TightCubic10         10         5            ExactGamma
    Corona(k)            2k         k            ExactGamma
    FGraph(i), F3Prime   5..8       stated sets  UpperBoundWitness
    Prism, P2BoxC4,      reference constructions used by the tests
    Path(n), CompleteK(n), StarK1(n), CompleteBipartite33

Spines of LtdComb, Deg1Twins, Deg2Twins and Corona are paths; the
ClosedReg spine is a cycle. Spine witness patterns repeat with the
period of the construction and are checked by ``FamilyInstance.check()``.

Labels are 1-based where the construction numbers its vertices.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from core.errors import BadParameter
from core.graph import Graph, VertexSet
from core.locating import LdVerdict, SolveResult, ld_number_exact, ltd_number_exact, verify_ld, verify_ltd
from core.twins import F3_PRIME, F_GRAPHS, FPattern

logger = logging.getLogger(__name__)

EXACT_GAMMA = "ExactGamma"
UPPER_BOUND_WITNESS = "UpperBoundWitness"
EXACT_LTD = "ExactLtd"

# kind -> parameters it takes
KINDS: Dict[str, Tuple[str, ...]] = {
    "LtdComb": ("p",),
    "Deg1Twins": ("k",),
    "Deg2Twins": ("k",),
    "ClosedReg": ("r", "k"),
    "TightSubcubic": ("k",),
    "TightCubic10": (),
    "Corona": ("k",),
    "FGraph": ("i",),
    "F3Prime": (),
    "Prism": (),
    "P2BoxC4": (),
    "Path": ("n",),
    "CompleteK": ("n",),
    "StarK1": ("n",),
    "CompleteBipartite33": (),
}

_DEFAULTS = {"k": 1, "r": 4, "p": 4, "n": 4, "i": 0}
_MINIMUM = {"k": 1, "r": 4, "p": 1, "n": 1, "i": 0}


@dataclass(frozen=True)
class FamilySpec:
    """A family kind with its parameters.

    Parameters a kind does not take are kept as None.

    Raises:
        BadParameter: unknown kind or a parameter out of range.
    """

    kind: str
    k: Optional[int] = None
    r: Optional[int] = None
    p: Optional[int] = None
    n: Optional[int] = None
    i: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadParameter(f"Unknown family kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        wanted = KINDS[self.kind]
        for name in ("k", "r", "p", "n", "i"):
            value = getattr(self, name)
            if name not in wanted:
                if value is not None:
                    raise BadParameter(f"{self.kind} takes no parameter {name}")
                continue
            if value is None:
                raise BadParameter(f"{self.kind} needs parameter {name}")
            if value < _MINIMUM[name]:
                raise BadParameter(f"{self.kind}: {name} must be >= {_MINIMUM[name]}, got {value}")
        if self.kind == "FGraph" and self.i > 6:
            raise BadParameter(f"FGraph index must be 0..6, got {self.i}")
        if self.kind in ("CompleteK", "StarK1") and self.n < 2:
            raise BadParameter(f"{self.kind}: n must be >= 2, got {self.n}")

    @classmethod
    def parse(cls, kind: str, k: Optional[int] = None, r: Optional[int] = None,
              p: Optional[int] = None, n: Optional[int] = None, i: Optional[int] = None) -> "FamilySpec":
        """Build a spec from loose CLI values, defaulting what the kind needs."""
        given = {"k": k, "r": r, "p": p, "n": n, "i": i}
        if kind not in KINDS:
            raise BadParameter(f"Unknown family kind {kind!r}; expected one of {', '.join(KINDS)}")
        wanted = KINDS[kind]
        values = {
            name: (given[name] if given[name] is not None else _DEFAULTS[name]) if name in wanted else None
            for name in given
        }
        return cls(kind, **values)

    def label(self) -> str:
        params = [f"{name}={getattr(self, name)}" for name in KINDS[self.kind]]
        return f"{self.kind}({', '.join(params)})" if params else self.kind


@dataclass(frozen=True)
class FamilyInstance:
    spec: FamilySpec
    graph: Graph
    witness: VertexSet
    claimed: int
    claim_kind: str
    labels: Dict[int, str] = field(default_factory=dict, hash=False, compare=False)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.claimed, self.graph.n)

    def check(self) -> LdVerdict:
        """Verify the witness under the instance's claim kind."""
        if self.claim_kind == EXACT_LTD:
            return verify_ltd(self.graph, self.witness)
        return verify_ld(self.graph, self.witness)

    def solve(self, node_budget: Optional[int] = None, time_budget: Optional[float] = None,
              threads: int = 1) -> SolveResult:
        """Exact LD (LTD for ExactLtd) number, seeded with the witness as upper bound."""
        solver = ltd_number_exact if self.claim_kind == EXACT_LTD else ld_number_exact
        return solver(self.graph, node_budget=node_budget, time_budget=time_budget,
                      threads=threads, upper_hint=self.witness)

    def to_dict(self) -> dict:
        verdict = self.check()
        return {
            "kind": self.spec.label(),
            "n": self.graph.n,
            "m": self.graph.m,
            "witness": list(self.witness),
            "witness_labels": [self.labels.get(v, str(v)) for v in self.witness],
            "claimed": self.claimed,
            "claim_kind": self.claim_kind,
            "ratio": str(self.ratio),
            "verified": verdict.is_valid,
            "verdict": verdict.to_dict(),
        }


class _Builder:
    """Collects named vertices and edges, then freezes them into a Graph."""

    def __init__(self):
        self.names: List[str] = []
        self.index: Dict[str, int] = {}
        self.edges: List[Tuple[int, int]] = []

    def add(self, name: str) -> int:
        if name in self.index:
            raise ValueError(f"duplicate vertex label {name!r}")
        self.index[name] = len(self.names)
        self.names.append(name)
        return self.index[name]

    def join(self, a: str, b: str) -> None:
        self.edges.append((self.index[a], self.index[b]))

    def path(self, names: List[str]) -> None:
        for name in names:
            self.add(name)
        for a, b in zip(names, names[1:]):
            self.join(a, b)

    def instance(self, spec: FamilySpec, witness: Iterable[str], claimed: int, claim_kind: str) -> FamilyInstance:
        g = Graph.from_edges(len(self.names), self.edges)
        s = VertexSet.of(g.n, [self.index[name] for name in witness])
        return FamilyInstance(spec, g, s, claimed, claim_kind, dict(enumerate(self.names)))


def _ltd_comb(spec: FamilySpec) -> FamilyInstance:
    b = _Builder()
    p = spec.p
    b.path([f"v_{i}" for i in range(1, p + 1)])
    witness = []
    for i in range(1, p + 1):
        b.add(f"x_{i}")
        b.add(f"y_{i}")
        b.join(f"v_{i}", f"x_{i}")
        b.join(f"x_{i}", f"y_{i}")
        witness += [f"x_{i}", f"y_{i}"]
    return b.instance(spec, witness, 2 * p, EXACT_LTD)


def _deg1_twins(spec: FamilySpec) -> FamilyInstance:
    b = _Builder()
    length = 3 * spec.k
    b.path([f"v_{i}" for i in range(1, length + 1)])
    witness = []
    for i in range(1, length + 1):
        for prefix in ("b", "a", "c"):
            b.add(f"{prefix}_{i}")
        b.join(f"b_{i}", f"v_{i}")
        b.join(f"b_{i}", f"a_{i}")
        b.join(f"b_{i}", f"c_{i}")
        witness += [f"b_{i}", f"c_{i}"]
    witness += [f"v_{3 * j + 2}" for j in range(spec.k)]
    return b.instance(spec, witness, 7 * spec.k, EXACT_GAMMA)


def _add_gadget(b: _Builder, i: int) -> List[str]:
    """The 11-vertex gadget hanging off spine vertex i; returns its shaded vertices."""
    u = f"u_{i}"
    b.add(u)
    shaded = []
    for j in (1, 2):
        branch = f"b_{i},{j}"
        t1, t2 = f"t_{i},{j},1", f"t_{i},{j},2"
        top, leaf = f"w_{i},{j}", f"l_{i},{j}"
        for name in (branch, t1, t2, top, leaf):
            b.add(name)
        b.join(u, branch)
        b.join(branch, t1)
        b.join(branch, t2)
        b.join(t1, top)
        b.join(t2, top)
        b.join(top, leaf)
        shaded += [branch, t1, top]
    return shaded


def _deg2_twins(spec: FamilySpec) -> FamilyInstance:
    b = _Builder()
    length = 5 * spec.k
    b.path([f"v_{i}" for i in range(1, length + 1)])
    witness = []
    for i in range(1, length + 1):
        witness += _add_gadget(b, i)
        b.join(f"v_{i}", f"u_{i}")
    for j in range(spec.k):
        witness += [f"v_{5 * j + 2}", f"v_{5 * j + 4}"]
    return b.instance(spec, witness, 32 * spec.k, EXACT_GAMMA)


def deg2_gadget() -> Tuple[Graph, int, Dict[int, str]]:
    """The isolated 11-vertex gadget; returns (graph, index of u, labels)."""
    b = _Builder()
    _add_gadget(b, 1)
    g = Graph.from_edges(len(b.names), b.edges)
    return g, b.index["u_1"], dict(enumerate(b.names))


def gadget_lower_bound() -> int:
    """Minimum of |S - {u}| over all LD-sets S of the isolated gadget."""
    g, u, _ = deg2_gadget()
    best = g.n
    others = [v for v in range(g.n) if v != u]
    for size in range(g.n):
        if size >= best:
            break
        for combo in itertools.combinations(others, size):
            base = VertexSet.of(g.n, combo)
            if verify_ld(g, base).is_valid or verify_ld(g, base.with_vertex(u)).is_valid:
                best = size
                break
    return best


def _closed_reg(spec: FamilySpec) -> FamilyInstance:
    r, k = spec.r, spec.k
    b = _Builder()
    cliques = 3 * k
    witness = []
    for i in range(1, cliques + 1):
        a, bb = f"a_{i}", f"b_{i}"
        b.add(a)
        members = [f"q_{i},{j}" for j in range(1, r)]
        for name in members:
            b.add(name)
        b.add(bb)
        for x, y in itertools.combinations(members, 2):
            b.join(x, y)
        for name in members:
            b.join(name, a)
            b.join(name, bb)
        witness += members[:-1]
    for i in range(1, cliques + 1):
        b.join(f"b_{i}", f"a_{i % cliques + 1}")
    for j in range(k):
        witness += [f"b_{3 * j + 1}", f"a_{3 * j + 3}"]
    return b.instance(spec, witness, (3 * r - 4) * k, EXACT_GAMMA)


def _tight_subcubic(spec: FamilySpec) -> FamilyInstance:
    b = _Builder()
    length = 4 * spec.k + 1
    b.path([f"p_{i}" for i in range(1, length + 1)])
    for i in range(1, length + 1):
        b.add(f"u_{i}")
        b.join(f"p_{i}", f"u_{i}")
    for i in range(1, length):
        if i % 4 in (2, 3):
            b.join(f"u_{i}", f"u_{i + 1}")
    return b.instance(spec, [f"u_{i}" for i in range(1, length + 1)], length, EXACT_GAMMA)


TIGHT_CUBIC10_CHORDS = ((0, 3), (1, 8), (2, 9), (4, 6), (5, 7))


def _tight_cubic10(spec: FamilySpec) -> FamilyInstance:
    b = _Builder()
    for i in range(10):
        b.add(str(i))
    for i in range(10):
        b.join(str(i), str((i + 1) % 10))
    for x, y in TIGHT_CUBIC10_CHORDS:
        b.join(str(x), str(y))
    return b.instance(spec, ["1", "2", "4", "6", "8"], 5, EXACT_GAMMA)


def _corona(spec: FamilySpec) -> FamilyInstance:
    b = _Builder()
    spine = [f"v_{i}" for i in range(1, spec.k + 1)]
    b.path(spine)
    for i in range(1, spec.k + 1):
        b.add(f"l_{i}")
        b.join(f"v_{i}", f"l_{i}")
    return b.instance(spec, spine, spec.k, EXACT_GAMMA)


# Stated witnesses on the plain pattern graphs
_PATTERN_WITNESS: Dict[int, Tuple[str, ...]] = {
    0: ("u", "x", "y"),
    1: ("u", "z", "w"),
    2: ("v", "y", "z"),
    3: ("x'", "v", "z"),
    4: ("v", "w", "x", "y"),
    5: ("v", "x'", "y"),
    6: ("u", "x", "y", "z"),
}


def _from_pattern(spec: FamilySpec, pattern: FPattern, witness: Tuple[str, ...]) -> FamilyInstance:
    b = _Builder()
    for label in pattern.labels:
        b.add(label)
    for x, y in pattern.edges:
        b.join(x, y)
    return b.instance(spec, witness, len(witness), UPPER_BOUND_WITNESS)


def _f_graph(spec: FamilySpec) -> FamilyInstance:
    return _from_pattern(spec, F_GRAPHS[spec.i], _PATTERN_WITNESS[spec.i])


def _f3_prime(spec: FamilySpec) -> FamilyInstance:
    return _from_pattern(spec, F3_PRIME, ("v", "z"))


def _prism(spec: FamilySpec) -> FamilyInstance:
    b = _Builder()
    b.path(["0", "1", "2"])
    b.path(["3", "4", "5"])
    for x, y in (("0", "2"), ("3", "5"), ("0", "3"), ("1", "4"), ("2", "5")):
        b.join(x, y)
    return b.instance(spec, ["0", "1", "3"], 3, EXACT_GAMMA)


def _p2_box_c4(spec: FamilySpec) -> FamilyInstance:
    b = _Builder()
    inner, outer = ["a", "b", "c", "d"], ["a'", "b'", "c'", "d'"]
    b.path(inner)
    b.path(outer)
    b.join("d", "a")
    b.join("d'", "a'")
    for x, y in zip(inner, outer):
        b.join(x, y)
    return b.instance(spec, ["a", "c", "b'", "d'"], 4, UPPER_BOUND_WITNESS)


def _path(spec: FamilySpec) -> FamilyInstance:
    n = spec.n
    b = _Builder()
    b.path([str(i) for i in range(n)])
    chosen = [i for i in range(n) if i % 5 in (1, 3)]
    g = Graph.from_edges(n, b.edges)
    if not verify_ld(g, VertexSet.of(n, chosen)).is_valid:
        chosen.append(n - 1)
    return b.instance(spec, [str(i) for i in chosen], -(-2 * n // 5), EXACT_GAMMA)


def _complete(spec: FamilySpec) -> FamilyInstance:
    n = spec.n
    b = _Builder()
    for i in range(n):
        b.add(str(i))
    for x, y in itertools.combinations(range(n), 2):
        b.join(str(x), str(y))
    return b.instance(spec, [str(i) for i in range(n - 1)], n - 1, EXACT_GAMMA)


def _star(spec: FamilySpec) -> FamilyInstance:
    n = spec.n
    b = _Builder()
    b.add("c")
    leaves = [f"l_{i}" for i in range(1, n)]
    for name in leaves:
        b.add(name)
        b.join("c", name)
    return b.instance(spec, leaves, n - 1, EXACT_GAMMA)


def _k33(spec: FamilySpec) -> FamilyInstance:
    b = _Builder()
    left, right = ["a_1", "a_2", "a_3"], ["b_1", "b_2", "b_3"]
    for name in left + right:
        b.add(name)
    for x in left:
        for y in right:
            b.join(x, y)
    return b.instance(spec, ["a_1", "a_2", "b_1", "b_2"], 4, EXACT_GAMMA)


_GENERATORS: Dict[str, Callable[[FamilySpec], FamilyInstance]] = {
    "LtdComb": _ltd_comb,
    "Deg1Twins": _deg1_twins,
    "Deg2Twins": _deg2_twins,
    "ClosedReg": _closed_reg,
    "TightSubcubic": _tight_subcubic,
    "TightCubic10": _tight_cubic10,
    "Corona": _corona,
    "FGraph": _f_graph,
    "F3Prime": _f3_prime,
    "Prism": _prism,
    "P2BoxC4": _p2_box_c4,
    "Path": _path,
    "CompleteK": _complete,
    "StarK1": _star,
    "CompleteBipartite33": _k33,
}


def generate(spec: FamilySpec) -> FamilyInstance:
    """Build the instance for ``spec``.

    Examples:
        >>> inst = generate(FamilySpec.parse("Deg1Twins", k=1))
        >>> inst.graph.n, len(inst.witness)
        (12, 7)
    """
    instance = _GENERATORS[spec.kind](spec)
    logger.debug("Generated %s: n=%d m=%d witness=%d", spec.label(), instance.graph.n,
                  instance.graph.m, len(instance.witness))
    return instance
