"""
Construct - LD-sets of size at most n/2 by inductive reduction

Input class (checked up front, HypothesisViolated otherwise):

    connected, subcubic, n >= 2, no open twins of degree 1 or 2,
    not K3, K4 or K3,3

Dispatch, in order:

    ┌ m <= 6 or n <= 4 ─────────────────► small/exact       (base case)
    ├ open twins of degree 3 ───────────► open-twins/*      (F1..F6 patterns)
    ├ closed twins ─────────────────────► closed-twins/*
    ├ twin-free with a triangle ────────► twin-free/triangle/*
    ├ twin-free, triangle-free, C4 ─────► twin-free/c4/*
    └ twin-free, no triangle, no C4 ────► twin-free/c4-free (exact, counted)

Each rule yields one or more candidate reductions:

    G ──delete edges / vertices──► G' ──per component──► S'_1 ∪ S'_2 ∪ ...
                                                   │
                 patch candidates (S' - drop) ∪ add ◄┘ ──verify──► S

Components of G' are solved recursively when they are in the input class
(and then normalised: supports in, leaves out), a K2 component contributes
one endpoint, anything else makes the candidate inapplicable. Symmetric
role assignments appear as further candidates in a fixed order and the
first verified patch wins. If no stated patch verifies, a bounded search
around the touched vertices repairs the first applicable candidate (counted
as a fallback); only when that also fails is the graph solved exactly
(fallback/unclassified).

Every accepted set is verified on its own graph, so a returned
certificate is sound even where a rule is mis-applied.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from core.errors import HypothesisViolated
from core.graph import Graph, VertexMapping, VertexSet
from core.graph_io import parse_graph6, to_graph6
from core.locating import ld_number_exact, verify_ld
from core.twins import (
    _forbidden_name,
    four_cycles,
    leaves_and_supports,
    triangles,
    twin_report,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

RULES: Dict[str, str] = {
    "small/exact": "m <= 6 or n <= 4: solved exactly as a base case",
    "open-twins/F3'": "open twins of degree 3 with a degree-2 common neighbour, closed pair y z: S = {v, z}",
    "open-twins/F1-w'": "F1 without w', w of degree 2: S = {u, z, w}",
    "open-twins/F1": "F1 pattern: delete ux, keep S' or swap u for w",
    "open-twins/F2-leaves": "F2 with y', z' leaves: S = {v, y, z}",
    "open-twins/F2": "F2 pattern: delete ux, keep S' or swap u for z",
    "open-twins/F3-n6": "F3 on six vertices: S = {x', v, z}",
    "open-twins/F3-n7": "F3 plus pendant x'': S = {x', v, z}",
    "open-twins/F3-n8": "F3 plus path x' x'' x''': S = {x', x'', v, z}",
    "open-twins/F3": "F3 pattern: delete ux, uz, yz and keep S'",
    "open-twins/F4-leaves": "F4 with w', x' leaves: S = {v, w, x, y}",
    "open-twins/F4": "F4 pattern: delete ux, uy, wy and keep S'",
    "open-twins/F5-n7": "F5 with x' of degree 2: S = {v, x', y}",
    "open-twins/F5": "F5 pattern: delete ux, uy, wy and keep S'",
    "open-twins/F6-leaves": "F6 with x', y', z' leaves: S = {u, x, y, z}",
    "open-twins/F6-split": "F6 pattern: delete zz' and take the union over components",
    "open-twins/F6-split-triangle": "F6 pattern, z' on a triangle: delete the triangle's far side and add z''",
    "open-twins/F6-detach": "F6 pattern, G - zz' has twins: detach z' from z'' and z'''",
    "open-twins/F6-detach-triangle": "F6 pattern, z'' on a triangle after detaching: delete z''z* and z''z'''",
    "closed-twins/deg2": "closed twins u v of degree 2 with common neighbour w: delete vw, keep S'",
    "closed-twins/deg3-pendant": "closed twins of degree 3, w' of degree 2, z a leaf: S = {w, v}",
    "closed-twins/deg3-short": "closed twins of degree 3, w' of degree 2: delete v and w', add v",
    "closed-twins/deg3-pendant-edge": "closed twins of degree 3, z a leaf of w: delete uw', w, z and add z",
    "closed-twins/deg3-split": "closed twins of degree 3: delete uw, uw', vw and keep S'",
    "closed-twins/deg3-support": "closed twins of degree 3, z a support: delete uw, vw', keep S' or swap w for v",
    "twin-free/triangle/deg2-cut": "triangle with a degree-2 vertex a: delete ab, keep S'",
    "twin-free/triangle/deg2-determined": "triangle with a degree-2 vertex, both cuts have twins: S = {b, c}",
    "twin-free/triangle/prism": "triangle whose outer neighbours form a triangle: S = {a, b, c}",
    "twin-free/triangle/cut": "triangle of degree-3 vertices, a'b' absent: delete ab, keep S'",
    "twin-free/triangle/cut-twin": "triangle of degree-3 vertices, a twin with c' after the cut: delete c, c'",
    "twin-free/c4/two-deg2": "4-cycle with adjacent degree-2 vertices a b: delete a, b, add a",
    "twin-free/c4/two-deg2-hexagon": "4-cycle with two degree-2 vertices on six vertices: S = {a, d, c'}",
    "twin-free/c4/two-deg2-pendant": "4-cycle with two degree-2 vertices on seven vertices: S = {b, d, e}",
    "twin-free/c4/two-deg2-reduce": "4-cycle with two degree-2 vertices, c twin after the cut: delete a b c d, add b d",
    "twin-free/c4/one-deg2-pendants": "4-cycle with one degree-2 vertex, b' and d' leaves: delete a d d', add d",
    "twin-free/c4/one-deg2-pendant": "4-cycle with one degree-2 vertex, b' a leaf: delete ab, cd, keep S'",
    "twin-free/c4/one-deg2-cut": "4-cycle with one degree-2 vertex: delete ab, bc, keep S' or swap c for c'",
    "twin-free/c4/one-deg2-cut-c": "4-cycle with one degree-2 vertex, c twin after the cut: delete c, d, add d",
    "twin-free/c4/one-deg2-cut-b-leaf": "b twin after the cut and b'c' present: delete b', b'', add b''",
    "twin-free/c4/one-deg2-cut-b": "b twin after the cut: delete bb', keep S'",
    "twin-free/c4/cube": "4-cycle whose outer neighbours form a 4-cycle (P2 x C4): fixed set of size 4",
    "twin-free/c4/cubic-ring": "cubic 4-cycle, b'c' and a'd' present, no supports: delete the 4-cycle, keep S'",
    "twin-free/c4/cubic-ring-support": "cubic 4-cycle, a' a support: delete a', a'', add a'",
    "twin-free/c4/cubic-cut": "cubic 4-cycle, a'b' and b'c' absent: delete ab, bc, keep S'",
    "twin-free/c4/cubic-cut-pendant": "cubic 4-cycle cut, b' a leaf: delete b, b', add b",
    "twin-free/c4/cubic-cut-leaf": "cubic 4-cycle cut, b' of degree 2 with leaf b'': delete b', b'', add b'",
    "twin-free/c4/cubic-cut-edge": "cubic 4-cycle cut, b' a support: delete bb', keep S'",
    "twin-free/c4-free": "twin-free, triangle-free and C4-free: exact solve (counted as fallback)",
    "fallback/unclassified": "no rule produced a verified set: exact solve (counted as fallback)",
}

FALLBACK_RULES = frozenset({"twin-free/c4-free", "fallback/unclassified"})


@dataclass(frozen=True)
class CaseStep:
    """One rule application, in the indices of the graph it was applied to.

    ``sub_witness`` is the union of the component sets of the reduced
    graph lifted back to this graph; ``witness`` is the patched result.
    """

    rule_id: str
    graph6: str
    removed_edges: Tuple[Edge, ...] = ()
    removed_vertices: Tuple[int, ...] = ()
    sub_witness: Tuple[int, ...] = ()
    patch_removed: Tuple[int, ...] = ()
    patch_added: Tuple[int, ...] = ()
    sub_sizes: Tuple[Tuple[int, int], ...] = ()
    witness: Tuple[int, ...] = ()
    patch_kind: str = "stated"
    depth: int = 0
    roles: Tuple[Tuple[str, int], ...] = ()

    @property
    def recursed(self) -> bool:
        return self.patch_kind in ("stated", "repair")

    def to_dict(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "graph6": self.graph6,
            "removed_edges": [list(e) for e in self.removed_edges],
            "removed_vertices": list(self.removed_vertices),
            "sub_witness": list(self.sub_witness),
            "patch_removed": list(self.patch_removed),
            "patch_added": list(self.patch_added),
            "sub_sizes": [list(p) for p in self.sub_sizes],
            "witness": list(self.witness),
            "patch_kind": self.patch_kind,
            "depth": self.depth,
            "roles": {name: v for name, v in self.roles},
        }


@dataclass(frozen=True)
class LdCertificate:
    witness: VertexSet
    trace: Tuple[CaseStep, ...]
    fallback_count: int

    def fallback_rules(self) -> List[str]:
        """Rule ids of the steps counted in ``fallback_count``, in trace order."""
        return [s.rule_id for s in self.trace if s.rule_id in FALLBACK_RULES or s.patch_kind == "repair"]

    def repair_rules(self) -> List[str]:
        return [s.rule_id for s in self.trace if s.patch_kind == "repair"]

    def rules_used(self) -> List[str]:
        return sorted({s.rule_id for s in self.trace})

    def to_dict(self) -> dict:
        return {
            "witness": list(self.witness),
            "size": len(self.witness),
            "fallback_count": self.fallback_count,
            "fallback_rules": self.fallback_rules(),
            "repairs": self.repair_rules(),
            "trace": [s.to_dict() for s in self.trace],
        }


# ---- normalisation lemmas --------------------------------------------


def _require_ld_connected(g: Graph, s: VertexSet) -> None:
    if g.n < 3:
        raise HypothesisViolated("order", f"normalisation needs n >= 3, got {g.n}")
    if not g.is_connected():
        raise HypothesisViolated("disconnected", "normalisation needs a connected graph")
    verdict = verify_ld(g, s)
    if not verdict.is_valid:
        raise HypothesisViolated("ld-set", f"input set is not locating-dominating: {verdict}",
                                 verdict.vertices)


def _supports_in(g: Graph, s: VertexSet) -> VertexSet:
    leaves, supports = leaves_and_supports(g)
    for sp in supports:
        if sp in s:
            continue
        leaf = min(v for v in g.adj[sp] if v in leaves)
        s = s.without_vertex(leaf).with_vertex(sp)
    return s


def normalize_supports_in(g: Graph, s: VertexSet) -> VertexSet:
    """Swap leaves for their supports until every support is in the set.

    For a support ``sp`` missing from S, all its leaves are in S; the set
    (S - {leaf}) + {sp} is again locating-dominating and the same size.

    Raises:
        HypothesisViolated: g disconnected, n < 3, or s not an LD-set.
    """
    if not isinstance(s, VertexSet):
        s = VertexSet.of(g.n, s)
    _require_ld_connected(g, s)
    out = _supports_in(g, s)
    if not verify_ld(g, out).is_valid:
        raise RuntimeError(f"support normalisation broke the LD property on {to_graph6(g)!r}")
    return out


def normalize_leaves_out(g: Graph, s: VertexSet) -> VertexSet:
    """Bring every support in, then push every leaf out.

    A leaf u in S with support s0 is dropped when S - {u} stays
    locating-dominating, otherwise swapped for the unique non-leaf v with
    I(v) = {s0}.

    Raises:
        HypothesisViolated: as normalize_supports_in, or g has open twins
            of degree 1.
    """
    if not isinstance(s, VertexSet):
        s = VertexSet.of(g.n, s)
    _require_ld_connected(g, s)
    deg1 = [(u, v) for u, v, k in twin_report(g).open_pairs if k == 1]
    if deg1:
        raise HypothesisViolated("open-twins-deg1", f"open twins of degree 1: {deg1[0]}", deg1[0])
    s = _supports_in(g, s)
    leaves, _ = leaves_and_supports(g)
    while True:
        in_s = [u for u in s if u in leaves]
        if not in_s:
            break
        u = in_s[0]
        s0 = g.adj[u][0]
        dropped = s.without_vertex(u)
        if verify_ld(g, dropped).is_valid:
            s = dropped
            continue
        target = VertexSet.of(g.n, [s0])
        partner = [
            v for v in range(g.n)
            if v not in s and v not in leaves and g.closed_neighbors(v) & s == target
        ]
        if len(partner) != 1:
            raise RuntimeError(f"leaf normalisation found {len(partner)} partners for leaf {u}")
        s = dropped.with_vertex(partner[0])
    if not verify_ld(g, s).is_valid:
        raise RuntimeError(f"leaf normalisation broke the LD property on {to_graph6(g)!r}")
    return s


# ---- hypotheses --------------------------------------------------------


def check_hypotheses(g: Graph) -> None:
    """Raise HypothesisViolated unless ``g`` is in the constructive class."""
    if g.n < 2:
        raise HypothesisViolated("order", f"need at least 2 vertices, got {g.n}")
    if not g.is_connected():
        comps = g.components()
        raise HypothesisViolated(
            "disconnected",
            f"graph has {len(comps)} components",
            tuple(min(c) for c in comps),
        )
    if not g.is_subcubic():
        v = max(range(g.n), key=lambda t: len(g.adj[t]))
        raise HypothesisViolated("subcubic", f"vertex {v} has degree {len(g.adj[v])}", (v,))
    name = _forbidden_name(g)
    if name is not None:
        raise HypothesisViolated("forbidden-graph", f"graph is {name}", tuple(range(g.n)))
    for u, v, k in twin_report(g).open_pairs:
        if k in (1, 2):
            raise HypothesisViolated(
                f"open-twins-deg{k}", f"vertices {u} and {v} are open twins of degree {k}", (u, v)
            )


def _admissible(g: Graph) -> bool:
    try:
        check_hypotheses(g)
    except HypothesisViolated:
        return False
    return True


# ---- reductions ------------------------------------------------------

_KEEP: Tuple[FrozenSet[int], FrozenSet[int]] = (frozenset(), frozenset())


def _patch(drop: Iterable[int] = (), add: Iterable[int] = ()) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    return (frozenset(drop), frozenset(add))


@dataclass(frozen=True)
class _Reduction:
    rule_id: str
    remove_edges: Tuple[Edge, ...] = ()
    remove_vertices: Tuple[int, ...] = ()
    patches: Tuple[Tuple[FrozenSet[int], FrozenSet[int]], ...] = (_KEEP,)
    prefer: FrozenSet[int] = frozenset()
    determined: Optional[Tuple[int, ...]] = None
    roles: Tuple[Tuple[str, int], ...] = ()

    def touched(self, g: Graph) -> set:
        out = set(self.remove_vertices)
        for e in self.remove_edges:
            out.update(e)
        for drop, add in self.patches:
            out |= drop | add
        return out


def _red(rule_id: str, edges: Sequence[Edge] = (), vertices: Sequence[int] = (),
         patches: Sequence = (_KEEP,), prefer: Iterable[int] = (), **roles: int) -> _Reduction:
    return _Reduction(
        rule_id,
        remove_edges=tuple(edges),
        remove_vertices=tuple(vertices),
        patches=tuple(patches),
        prefer=frozenset(prefer),
        roles=tuple(sorted(roles.items())),
    )


def _det(rule_id: str, members: Iterable[int], **roles: int) -> _Reduction:
    return _Reduction(rule_id, determined=tuple(sorted(set(members))), roles=tuple(sorted(roles.items())))


@dataclass(frozen=True)
class _Outcome:
    witness: VertexSet
    steps: Tuple[CaseStep, ...]
    fallbacks: int


class _Planner:
    """Turns a graph into the ordered list of candidate reductions."""

    def __init__(self, g: Graph):
        self.g = g
        self.leaves, self.supports = leaves_and_supports(g)

    def deg(self, v: int) -> int:
        return len(self.g.adj[v])

    def edge(self, a: int, b: int) -> bool:
        return b in self.g.adj[a]

    def outside(self, v: int, *inside: int) -> List[int]:
        return [w for w in self.g.adj[v] if w not in inside]

    def leaf_of(self, v: int, *exclude: int) -> Optional[int]:
        for w in self.g.adj[v]:
            if w not in exclude and w in self.leaves:
                return w
        return None

    def plan(self) -> Tuple[str, List[_Reduction]]:
        report = twin_report(self.g)
        anchors = [(u, v) for u, v, k in report.open_pairs if k == 3]
        if anchors:
            out: List[_Reduction] = []
            for u, v in anchors:
                out.extend(self.open_twins(u, v))
            return "fallback/unclassified", out
        if report.closed_pairs:
            return "fallback/unclassified", self.closed_twins(report.closed_pairs)
        tris = triangles(self.g)
        if tris:
            return "fallback/unclassified", self.triangle(tris)
        cycles = four_cycles(self.g)
        if cycles:
            return "fallback/unclassified", self.four_cycle(cycles)
        return "twin-free/c4-free", []

    # ---- open twins of degree 3 ----

    def open_twins(self, u: int, v: int) -> List[_Reduction]:
        g = self.g
        common = list(g.adj[u])
        deg2 = [t for t in common if self.deg(t) == 2]
        if len(deg2) > 1:
            return []
        out: List[_Reduction] = []
        pairs = ((u, v), (v, u))
        if deg2:
            x = deg2[0]
            y, z = [t for t in common if t != x]
            yo = self.outside(y, u, v)[0]
            zo = self.outside(z, u, v)[0]
            if yo == z:
                for p, q in pairs:
                    for a, b in ((y, z), (z, y)):
                        out.append(_det("open-twins/F3'", (q, b), u=p, v=q, x=x, y=a, z=b))
                return out
            if yo == zo:
                w = yo
                if self.deg(w) == 2:
                    for p, q in pairs:
                        for a, b in ((y, z), (z, y)):
                            out.append(_det("open-twins/F1-w'", (p, b, w), u=p, v=q, w=w, x=x, y=a, z=b))
                    return out
                for p, q in pairs:
                    out.append(_red("open-twins/F1", edges=[(p, x)],
                                    patches=[_KEEP, _patch([p], [w])], u=p, v=q, w=w, x=x, y=y, z=z))
                return out
            if self.deg(yo) == 1 and self.deg(zo) == 1:
                for p, q in pairs:
                    out.append(_det("open-twins/F2-leaves", (q, y, z), u=p, v=q, x=x, y=y, z=z))
            for p, q in pairs:
                out.append(_red("open-twins/F2", edges=[(p, x)],
                                patches=[_KEEP, _patch([p], [z]), _patch([p], [y])],
                                u=p, v=q, x=x, y=y, z=z))
            return out

        outs = {t: self.outside(t, u, v)[0] for t in common}
        for x in common:
            y, z = [t for t in common if t != x]
            if self.edge(y, z):
                return self.pattern_f3(u, v, x, y, z, outs[x])
        for x in common:
            y, z = [t for t in common if t != x]
            if outs[y] == outs[z]:
                w = outs[y]
                if self.deg(w) == 2 or outs[x] == w:
                    return []
                return self.pattern_f45(u, v, w, x, y, z, outs[x])
        return self.pattern_f6(u, v, common, outs)

    def pattern_f3(self, u, v, x, y, z, xo) -> List[_Reduction]:
        g = self.g
        out: List[_Reduction] = []
        pairs = ((u, v), (v, u))
        if g.m <= 10:
            rest = [t for t in range(g.n) if t not in (u, v, x, y, z)]
            for p, q in pairs:
                for a, b in ((y, z), (z, y)):
                    if len(rest) == 1:
                        out.append(_det("open-twins/F3-n6", (xo, q, b), u=p, v=q, x=x, y=a, z=b))
                    elif len(rest) == 2:
                        out.append(_det("open-twins/F3-n7", (xo, q, b), u=p, v=q, x=x, y=a, z=b))
                    elif len(rest) == 3:
                        for x2 in self.outside(xo, x):
                            x3 = [t for t in rest if t not in (xo, x2)]
                            if x3 and not self.edge(xo, x3[0]):
                                out.append(_det("open-twins/F3-n8", (xo, x2, q, b),
                                                u=p, v=q, x=x, y=a, z=b))
        for p, q in pairs:
            for a, b in ((y, z), (z, y)):
                out.append(_red("open-twins/F3", edges=[(p, x), (p, b), (a, b)],
                                u=p, v=q, x=x, y=a, z=b))
        return out

    def pattern_f45(self, u, v, w, x, y, z, xo) -> List[_Reduction]:
        out: List[_Reduction] = []
        wo = self.outside(w, y, z)[0]
        pairs = ((u, v), (v, u))
        if xo != wo:
            rule, small = "open-twins/F4", self.deg(wo) == 1 and self.deg(xo) == 1
        else:
            rule, small = "open-twins/F5", self.deg(xo) == 2
        for p, q in pairs:
            for a, b in ((y, z), (z, y)):
                if small and rule == "open-twins/F4":
                    out.append(_det("open-twins/F4-leaves", (q, w, x, a), u=p, v=q, w=w, x=x, y=a, z=b))
                elif small:
                    out.append(_det("open-twins/F5-n7", (q, xo, a), u=p, v=q, w=w, x=x, y=a, z=b))
        for p, q in pairs:
            for a, b in ((y, z), (z, y)):
                out.append(_red(rule, edges=[(p, x), (p, a), (w, a)], u=p, v=q, w=w, x=x, y=a, z=b))
        return out

    def pattern_f6(self, u, v, common, outs) -> List[_Reduction]:
        g = self.g
        out: List[_Reduction] = []
        heavy = [t for t in common if self.deg(outs[t]) >= 2]
        if not heavy:
            for p in (u, v):
                out.append(_det("open-twins/F6-leaves", (p, *common), u=p))
            return out
        for z in heavy:
            zo = outs[z]
            rest = self.outside(zo, z)
            cut = g.remove_edges([(z, zo)])
            bad = [(a, b) for a, b, k in twin_report(cut).open_pairs if k in (1, 2)]
            if not bad:
                out.append(_red("open-twins/F6-split", edges=[(z, zo)], z=z))
                if (len(rest) == 2 and self.edge(rest[0], rest[1])
                        and self.deg(rest[0]) == 2 and self.deg(rest[1]) == 2):
                    for a, b in (rest, rest[::-1]):
                        out.append(_red("open-twins/F6-split-triangle", vertices=[a, b],
                                        patches=[_patch(add=[a])], z=z))
                continue
            out.append(_red("open-twins/F6-detach", edges=[(zo, t) for t in rest], prefer=[z], z=z))
            star = [b if a == zo else a for a, b in bad if zo in (a, b)]
            if len(rest) == 2 and star:
                zs = star[0]
                for a, b in (rest, rest[::-1]):
                    if (self.edge(a, b) and self.edge(a, zs) and self.edge(b, zs)
                            and self.deg(zs) == 2):
                        out.append(_red("open-twins/F6-detach-triangle",
                                        edges=[(a, zs), (a, b)], z=z))
        return out

    # ---- closed twins ----

    def closed_twins(self, pairs) -> List[_Reduction]:
        out: List[_Reduction] = []
        for u, v, k in pairs:
            roles = ((u, v), (v, u))
            if k == 2:
                w = self.outside(u, v)[0]
                for p, q in roles:
                    out.append(_red("closed-twins/deg2", edges=[(q, w)], u=p, v=q, w=w))
                continue
            ws = self.outside(u, v)
            if len(ws) != 2 or self.edge(ws[0], ws[1]):
                continue
            for w, w2 in (ws, ws[::-1]):
                zs = self.outside(w, u, v)
                if not zs:
                    continue
                z = zs[0]
                if self.deg(w2) == 2:
                    if self.deg(z) == 1:
                        for p, q in roles:
                            out.append(_det("closed-twins/deg3-pendant", (w, q), u=p, v=q, w=w, z=z))
                    else:
                        for p, q in roles:
                            out.append(_red("closed-twins/deg3-short", vertices=[q, w2],
                                            patches=[_patch(add=[q])], u=p, v=q, w=w, z=z))
                    continue
                if self.deg(w) == 2:
                    continue
                z2s = self.outside(w2, u, v)
                if not z2s or z2s[0] == z:
                    continue
                for p, q in roles:
                    if self.deg(z) == 1:
                        out.append(_red("closed-twins/deg3-pendant-edge", edges=[(p, w2)],
                                        vertices=[w, z], patches=[_patch(add=[z])],
                                        u=p, v=q, w=w, z=z))
                    elif z in self.supports:
                        out.append(_red("closed-twins/deg3-support", edges=[(p, w), (q, w2)],
                                        patches=[_KEEP, _patch([w], [q])], u=p, v=q, w=w, z=z))
                    else:
                        out.append(_red("closed-twins/deg3-split", edges=[(p, w), (p, w2), (q, w)],
                                        u=p, v=q, w=w, z=z))
        return out

    # ---- twin-free with triangles ----

    def triangle(self, tris) -> List[_Reduction]:
        g = self.g
        out: List[_Reduction] = []
        for tri in tris:
            deg2 = [t for t in tri if self.deg(t) == 2]
            if deg2:
                a = deg2[0]
                b, c = [t for t in tri if t != a]
                cuts = 0
                for bb, cc in ((b, c), (c, b)):
                    if twin_report(g.remove_edges([(a, bb)])).is_twin_free:
                        cuts += 1
                        out.append(_red("twin-free/triangle/deg2-cut", edges=[(a, bb)],
                                        a=a, b=bb, c=cc))
                if not cuts:
                    out.append(_det("twin-free/triangle/deg2-determined", (b, c), a=a, b=b, c=c))
                continue
            outs = {t: self.outside(t, *tri)[0] for t in tri}
            if all(self.edge(outs[p], outs[q]) for p, q in itertools.combinations(tri, 2)):
                out.append(_det("twin-free/triangle/prism", tri))
                continue
            for a, b, c in itertools.permutations(tri):
                ao, bo, co = outs[a], outs[b], outs[c]
                if self.edge(ao, bo):
                    continue
                if twin_report(g.remove_edges([(a, b)])).is_twin_free:
                    out.append(_red("twin-free/triangle/cut", edges=[(a, b)], a=a, b=b, c=c))
                elif self.deg(co) == 2 and self.edge(ao, co):
                    out.append(_red("twin-free/triangle/cut-twin", vertices=[c, co],
                                    patches=[_patch(add=[co]), _patch(add=[c])], a=a, b=b, c=c))
        return out

    # ---- twin-free, triangle-free, with a 4-cycle ----

    @staticmethod
    def _dihedral(cyc):
        a, b, c, d = cyc
        rots = [(a, b, c, d), (b, c, d, a), (c, d, a, b), (d, a, b, c)]
        return rots + [(r[0], r[3], r[2], r[1]) for r in rots]

    def four_cycle(self, cycles) -> List[_Reduction]:
        two: List[_Reduction] = []
        one: List[_Reduction] = []
        none: List[_Reduction] = []
        for cyc in cycles:
            degs = [self.deg(t) for t in cyc]
            for a, b, c, d in self._dihedral(cyc):
                if degs.count(2) == 2 and self.deg(a) == 2 and self.deg(b) == 2:
                    two.extend(self.c4_two(a, b, c, d))
                elif degs.count(2) == 1 and self.deg(a) == 2:
                    one.extend(self.c4_one(a, b, c, d))
                elif degs.count(2) == 0 and degs.count(3) == 4:
                    none.extend(self.c4_none(a, b, c, d))
        return two + one + none

    def _partner(self, report, mapping: VertexMapping, old: int) -> Optional[int]:
        new = mapping.new_index(old)
        inverse = mapping.inverse()
        for p, q, _ in report.open_pairs + report.closed_pairs:
            if p == new:
                return inverse[q]
            if q == new:
                return inverse[p]
        return None

    def c4_two(self, a, b, c, d) -> List[_Reduction]:
        g = self.g
        rest, mapping = g.remove_vertices([a, b])
        report = twin_report(rest)
        roles = dict(a=a, b=b, c=c, d=d)
        if report.is_twin_free:
            return [_red("twin-free/c4/two-deg2", vertices=[a, b],
                         patches=[_patch(add=[a]), _patch(add=[b])], **roles)]
        ct = self._partner(report, mapping, c)
        dt = self._partner(report, mapping, d)
        if ct is not None and dt is not None:
            return [_det("twin-free/c4/two-deg2-hexagon", (a, d, ct), **roles)]
        if ct is None:
            return []
        es = self.outside(c, b, d)
        if not es:
            return []
        e = es[0]
        fs = self.outside(e, c, ct)
        if not fs:
            return []
        f = fs[0]
        if self.deg(f) == 1:
            return [_det("twin-free/c4/two-deg2-pendant", (b, d, e), **roles)]
        return [_red("twin-free/c4/two-deg2-reduce", vertices=[a, b, c, d],
                     patches=[_patch(add=[b, d])], **roles)]

    def c4_one(self, a, b, c, d) -> List[_Reduction]:
        g = self.g
        bo = self.outside(b, a, c)[0]
        co = self.outside(c, b, d)[0]
        do = self.outside(d, a, c)[0]
        roles = dict(a=a, b=b, c=c, d=d)
        b_leaf, d_leaf = bo in self.leaves, do in self.leaves
        if b_leaf and d_leaf:
            return [_red("twin-free/c4/one-deg2-pendants", vertices=[a, d, do],
                         patches=[_patch(add=[d])], **roles)]
        if b_leaf:
            return [_red("twin-free/c4/one-deg2-pendant", edges=[(a, b), (c, d)], **roles)]
        if d_leaf:
            return []
        cut = g.remove_edges([(a, b), (b, c)])
        report = twin_report(cut)
        if report.is_twin_free:
            return [_red("twin-free/c4/one-deg2-cut", edges=[(a, b), (b, c)],
                         patches=[_KEEP, _patch([c], [co])], **roles)]
        out: List[_Reduction] = []
        identity = VertexMapping.identity(g.n)
        if self._partner(report, identity, c) is not None:
            out.append(_red("twin-free/c4/one-deg2-cut-c", vertices=[c, d],
                            patches=[_patch(add=[d])], **roles))
        if self._partner(report, identity, b) is not None:
            b2 = self.leaf_of(bo, b)
            if b2 is not None and self.edge(bo, co):
                out.append(_red("twin-free/c4/one-deg2-cut-b-leaf", vertices=[bo, b2],
                                patches=[_patch(add=[b2])], **roles))
            elif b2 is not None:
                out.append(_red("twin-free/c4/one-deg2-cut-b", edges=[(b, bo)], prefer=[bo], **roles))
        return out

    def c4_none(self, a, b, c, d) -> List[_Reduction]:
        g = self.g
        ao = self.outside(a, b, d)[0]
        bo = self.outside(b, a, c)[0]
        co = self.outside(c, b, d)[0]
        do = self.outside(d, a, c)[0]
        roles = dict(a=a, b=b, c=c, d=d)
        e = self.edge
        if e(ao, bo) and e(bo, co) and e(co, do) and e(do, ao):
            return [_det("twin-free/c4/cube", (a, c, bo, do), **roles)]
        out: List[_Reduction] = []
        if not e(ao, bo) and e(bo, co) and e(ao, do):
            if not any(t in self.supports for t in (ao, bo, co, do)):
                out.append(_red("twin-free/c4/cubic-ring", edges=[(a, b), (b, c), (c, d), (d, a)], **roles))
            elif ao in self.supports:
                a2 = self.leaf_of(ao)
                out.append(_red("twin-free/c4/cubic-ring-support", vertices=[ao, a2],
                                patches=[_patch(add=[ao])], **roles))
        if not e(ao, bo) and not e(bo, co):
            cut = g.remove_edges([(a, b), (b, c)])
            if twin_report(cut).is_twin_free:
                out.append(_red("twin-free/c4/cubic-cut", edges=[(a, b), (b, c)], **roles))
            elif self.deg(bo) == 1:
                out.append(_red("twin-free/c4/cubic-cut-pendant", vertices=[b, bo],
                                patches=[_patch(add=[b])], **roles))
            else:
                b2 = self.leaf_of(bo, b)
                if b2 is not None:
                    if self.deg(bo) == 2:
                        out.append(_red("twin-free/c4/cubic-cut-leaf", vertices=[bo, b2],
                                        patches=[_patch(add=[bo])], **roles))
                    out.append(_red("twin-free/c4/cubic-cut-edge", edges=[(b, bo)], prefer=[bo], **roles))
        return out


# ---- engine ------------------------------------------------------------


class _Engine:
    """Recursive solver producing verified sets and their traces."""

    REPAIR_MAX_DROP = 2
    REPAIR_MAX_ADD = 2

    def __init__(self):
        self._cache: Dict[bytes, _Outcome] = {}

    @staticmethod
    def _accept(g: Graph, s: VertexSet) -> bool:
        return len(s) <= g.n // 2 and verify_ld(g, s).is_valid

    def _exact(self, g: Graph, rule_id: str, depth: int, fallbacks: int) -> _Outcome:
        result = ld_number_exact(g)
        if result.value > g.n // 2:
            logger.warning("Exact value %d exceeds n/2 on %s", result.value, to_graph6(g))
        step = CaseStep(
            rule_id=rule_id,
            graph6=to_graph6(g).decode("ascii"),
            witness=result.witness.members(),
            patch_kind="exact" if rule_id == "small/exact" else "fallback",
            depth=depth,
        )
        return _Outcome(result.witness, (step,), fallbacks)

    def solve(self, g: Graph, depth: int = 0) -> _Outcome:
        key = to_graph6(g)
        cached = self._cache.get(key)
        if cached is not None:
            return self._rebase(cached, depth)
        outcome = self._solve(g, depth)
        self._cache[key] = outcome
        return outcome

    @staticmethod
    def _rebase(outcome: _Outcome, depth: int) -> _Outcome:
        shift = depth - outcome.steps[0].depth
        if not shift:
            return outcome
        steps = tuple(
            replace(s, depth=s.depth + shift) for s in outcome.steps
        )
        return _Outcome(outcome.witness, steps, outcome.fallbacks)

    def _solve(self, g: Graph, depth: int) -> _Outcome:
        if g.m <= 6 or g.n <= 4:
            return self._exact(g, "small/exact", depth, 0)

        stage_fallback, reductions = _Planner(g).plan()
        logger.debug("depth %d: %d candidate reductions on %s", depth, len(reductions), to_graph6(g))
        first = None
        for red in reductions:
            if red.determined is not None:
                s = VertexSet.of(g.n, red.determined)
                if self._accept(g, s):
                    step = CaseStep(
                        rule_id=red.rule_id,
                        graph6=to_graph6(g).decode("ascii"),
                        witness=s.members(),
                        patch_kind="determined",
                        depth=depth,
                        roles=red.roles,
                    )
                    return _Outcome(s, (step,), 0)
                logger.debug("determined set for %s rejected", red.rule_id)
                continue
            sub = self._reduce(g, red, depth)
            if sub is None:
                continue
            base, sizes, child_steps, child_fallbacks = sub
            for drop, add in red.patches:
                cand = (base - VertexSet.of(g.n, drop)) | VertexSet.of(g.n, add)
                if self._accept(g, cand):
                    return self._finish(g, red, base, cand, sizes, child_steps,
                                        child_fallbacks, depth, "stated")
            if first is None:
                first = (red, sub)

        if first is not None:
            red, (base, sizes, child_steps, child_fallbacks) = first
            repaired = self._repair(g, red, base)
            if repaired is not None:
                logger.warning("Rule %s: no stated patch verified, local repair used on %s",
                               red.rule_id, to_graph6(g))
                return self._finish(g, red, base, repaired, sizes, child_steps,
                                    child_fallbacks + 1, depth, "repair")

        if stage_fallback == "fallback/unclassified":
            logger.warning("No reduction applied on %s; solving exactly", to_graph6(g))
        return self._exact(g, stage_fallback, depth, 1)

    def _finish(self, g, red, base, result, sizes, child_steps, child_fallbacks, depth, kind) -> _Outcome:
        step = CaseStep(
            rule_id=red.rule_id,
            graph6=to_graph6(g).decode("ascii"),
            removed_edges=red.remove_edges,
            removed_vertices=red.remove_vertices,
            sub_witness=base.members(),
            patch_removed=(base - result).members(),
            patch_added=(result - base).members(),
            sub_sizes=tuple(sizes),
            witness=result.members(),
            patch_kind=kind,
            depth=depth,
            roles=red.roles,
        )
        return _Outcome(result, (step,) + tuple(child_steps), child_fallbacks)

    def _reduce(self, g: Graph, red: _Reduction, depth: int):
        """Solve every component of the reduced graph, lifted back to ``g``.

        Returns None when some component is outside the input class.
        """
        try:
            h = g.remove_edges(red.remove_edges)
        except ValueError:
            return None
        h, mapping = h.remove_vertices(red.remove_vertices)
        outer = mapping.inverse()
        members: List[int] = []
        sizes: List[Tuple[int, int]] = []
        steps: List[CaseStep] = []
        fallbacks = 0
        for comp in h.components():
            sub, cmap = h.induced(comp)
            inner = cmap.inverse()
            lift = [outer[inner[i]] for i in range(sub.n)]
            if sub.n == 1:
                return None
            if sub.n == 2:
                pick = 1 if lift[1] in red.prefer and lift[0] not in red.prefer else 0
                chosen = [pick]
                steps.append(CaseStep(
                    rule_id="small/exact",
                    graph6=to_graph6(sub).decode("ascii"),
                    witness=(pick,),
                    patch_kind="exact",
                    depth=depth + 1,
                ))
            elif _admissible(sub):
                outcome = self.solve(sub, depth + 1)
                local = normalize_leaves_out(sub, outcome.witness)
                if len(local) > sub.n // 2:
                    return None
                chosen = local.members()
                steps.extend(outcome.steps)
                fallbacks += outcome.fallbacks
            else:
                return None
            sizes.append((sub.n, len(chosen)))
            members.extend(lift[i] for i in chosen)
        return VertexSet.of(g.n, members), sizes, steps, fallbacks

    def _repair(self, g: Graph, red: _Reduction, base: VertexSet) -> Optional[VertexSet]:
        touched = red.touched(g)
        region = set(touched)
        for t in touched:
            region.update(g.adj[t])
        inside = sorted(v for v in region if v in base)
        outside = sorted(v for v in region if v not in base)
        slack = g.n // 2 - len(base)
        for cost in range(1, self.REPAIR_MAX_DROP + self.REPAIR_MAX_ADD + 1):
            for k_drop in range(0, min(cost, self.REPAIR_MAX_DROP) + 1):
                k_add = cost - k_drop
                if k_add > self.REPAIR_MAX_ADD or k_add - k_drop > slack:
                    continue
                for drop in itertools.combinations(inside, k_drop):
                    trimmed = base - VertexSet.of(g.n, drop)
                    for add in itertools.combinations(outside, k_add):
                        cand = trimmed | VertexSet.of(g.n, add)
                        if self._accept(g, cand):
                            return cand
        return None


# ---- public operations -------------------------------------------------


def construct_half_ld(g: Graph) -> LdCertificate:
    """Build a verified LD-set of size at most floor(n/2).

    Raises:
        HypothesisViolated: g is disconnected, not subcubic, has fewer than
            two vertices, has open twins of degree 1 or 2, or is K3, K4 or
            K3,3. ``hypothesis`` and ``witness`` name the problem.

    Examples:
        >>> from core.graph import path_graph
        >>> len(construct_half_ld(path_graph(4)).witness)
        2
    """
    check_hypotheses(g)
    outcome = _Engine().solve(g)
    if not _Engine._accept(g, outcome.witness):
        raise RuntimeError(f"constructed set failed verification on {to_graph6(g)!r}")
    return LdCertificate(outcome.witness, outcome.steps, outcome.fallbacks)


def construct_for_cubic(g: Graph) -> LdCertificate:
    """Cubic wrapper: connected cubic graphs other than K4 and K3,3."""
    if not g.is_cubic():
        bad = next(v for v in range(g.n) if len(g.adj[v]) != 3) if g.n else 0
        raise HypothesisViolated("cubic", "graph is not 3-regular", (bad,))
    return construct_half_ld(g)


def construct_per_component(g: Graph) -> LdCertificate:
    """Apply construct_half_ld to each component and merge the results.

    Raises:
        HypothesisViolated: for the first failing component; its message
            names the component by its smallest vertex.
    """
    engine = _Engine()
    members: List[int] = []
    steps: List[CaseStep] = []
    fallbacks = 0
    for comp in g.components():
        sub, mapping = g.induced(comp)
        try:
            check_hypotheses(sub)
        except HypothesisViolated as exc:
            raise HypothesisViolated(
                exc.hypothesis,
                f"component containing vertex {min(comp)}: {exc}",
                tuple(mapping.inverse()[i] for i in exc.witness if i < sub.n),
            ) from None
        outcome = engine.solve(sub)
        inv = mapping.inverse()
        members.extend(inv[v] for v in outcome.witness)
        steps.extend(outcome.steps)
        fallbacks += outcome.fallbacks
    witness = VertexSet.of(g.n, members)
    if not _Engine._accept(g, witness):
        raise RuntimeError(f"merged set failed verification on {to_graph6(g)!r}")
    return LdCertificate(witness, tuple(steps), fallbacks)


def replay_certificate(g: Graph, cert: LdCertificate) -> bool:
    """Re-apply every recorded step and check it reproduces its witness.

    Raises:
        ValueError: a step does not replay; the message names the step.
    """
    if not verify_ld(g, cert.witness).is_valid or len(cert.witness) > g.n // 2:
        raise ValueError("certificate witness does not verify on the input graph")
    roots = [s for s in cert.trace if s.depth == 0]
    if len(roots) == 1 and roots[0].graph6.encode("ascii") == to_graph6(g):
        if roots[0].witness != cert.witness.members():
            raise ValueError("root step witness differs from the certificate witness")
    for index, step in enumerate(cert.trace):
        if step.rule_id not in RULES:
            raise ValueError(f"step {index}: unknown rule {step.rule_id!r}")
        h = parse_graph6(step.graph6)
        result = VertexSet.of(h.n, step.witness)
        if not verify_ld(h, result).is_valid:
            raise ValueError(f"step {index} ({step.rule_id}): witness is not locating-dominating")
        if step.rule_id != "small/exact" and len(result) > h.n // 2:
            raise ValueError(f"step {index} ({step.rule_id}): witness larger than n/2")
        if not step.recursed:
            continue
        reduced, mapping = h.remove_edges(step.removed_edges).remove_vertices(step.removed_vertices)
        base = VertexSet.of(h.n, step.sub_witness)
        if not verify_ld(reduced, mapping.push_forward(base)).is_valid:
            raise ValueError(f"step {index} ({step.rule_id}): sub-witness fails on the reduced graph")
        patched = (base - VertexSet.of(h.n, step.patch_removed)) | VertexSet.of(h.n, step.patch_added)
        if patched != result:
            raise ValueError(f"step {index} ({step.rule_id}): patch does not reproduce the witness")
    return True
