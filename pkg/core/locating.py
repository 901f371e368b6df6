"""
Locating Domination - verification, exact solvers and lower bounds

Definitions (for a graph G and S ⊆ V(G)):

    I(S; v) = N[v] ∩ S                       the "code" of v
    S is locating-dominating (LD)  iff  every v ∉ S has a non-empty code
                                        and codes of vertices ∉ S differ
    S is locating-total-dominating (LTD) iff S is LD and every vertex
                                        (members included) has a neighbour in S

Exact Search:

    Phase 1  branch-and-bound for the optimum value
             order: degree-descending, branch "in S" before "not in S"
    Phase 2  feasibility search at the optimum in index order, "in S" first;
             the first set found is the lexicographically smallest optimum

    A vertex is *settled* once every vertex of N[v] has been decided; at
    that point its code is final and is checked for emptiness and for
    collisions with the codes of earlier settled vertices ∉ S.

    Bounds: ceil(undominated / (Δ+1)) more picks are needed (Δ for total
    domination), and globally |S| >= ceil(2n / (Δ+3)), the counting
    argument behind ceil(n/3) for subcubic graphs.
    A known feasible set (upper_hint) seeds phase 1, so only strictly
    smaller sets are searched.

Parallelism:
    With threads > 1 phase 1 is split on the first decisions and farmed out
    to a process pool. The optimum is unique and phase 2 always runs in the
    caller, so results do not depend on the schedule.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.config import Settings
from core.errors import BadParameter, BudgetExceeded, IndexOutOfRange, IsolatedVertex, NotSubcubic
from core.graph import Graph, VertexSet

logger = logging.getLogger(__name__)

NAIVE_MAX_ORDER = Settings().naive_max_order


@dataclass(frozen=True)
class LdVerdict:
    """
    Outcome of an LD/LTD check.

    kind is one of ``"valid"``, ``"undominated"`` (vertices = (v,)) or
    ``"unseparated"`` (vertices = (u, v), u < v). For LTD checks an
    ``"undominated"`` verdict may also mean v has no neighbour in S.
    """

    kind: str
    vertices: Tuple[int, ...] = ()

    VALID = "valid"
    UNDOMINATED = "undominated"
    UNSEPARATED = "unseparated"

    @classmethod
    def valid(cls) -> "LdVerdict":
        return cls(cls.VALID)

    @classmethod
    def undominated(cls, v: int) -> "LdVerdict":
        return cls(cls.UNDOMINATED, (v,))

    @classmethod
    def unseparated(cls, u: int, v: int) -> "LdVerdict":
        return cls(cls.UNSEPARATED, (min(u, v), max(u, v)))

    @property
    def is_valid(self) -> bool:
        return self.kind == self.VALID

    def to_dict(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices)}

    def __str__(self) -> str:
        if self.is_valid:
            return "Valid"
        if self.kind == self.UNDOMINATED:
            return f"Undominated({self.vertices[0]})"
        return f"Unseparated({self.vertices[0]},{self.vertices[1]})"


@dataclass(frozen=True)
class SolveResult:
    value: int
    witness: VertexSet
    explored: int = 0
    lower_bound: int = 0

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "witness": list(self.witness),
            "explored": self.explored,
            "lower_bound": self.lower_bound,
        }


def _closed_masks(g: Graph) -> List[int]:
    out = []
    for v, nbrs in enumerate(g.adj):
        mask = 1 << v
        for w in nbrs:
            mask |= 1 << w
        out.append(mask)
    return out


def _open_masks(g: Graph) -> List[int]:
    return [m & ~(1 << v) for v, m in enumerate(_closed_masks(g))]


def _as_set(g: Graph, s) -> VertexSet:
    if isinstance(s, VertexSet):
        if s.universe != g.n:
            raise ValueError(f"VertexSet universe {s.universe} does not match n={g.n}")
        return s
    return VertexSet.of(g.n, s)


def iset(g: Graph, s: VertexSet, v: int) -> VertexSet:
    """Return I(S; v) = N[v] ∩ S."""
    if not 0 <= v < g.n:
        raise IndexOutOfRange(v, g.n)
    return g.closed_neighbors(v) & _as_set(g, s)


def _first_collision(codes: Dict[int, List[int]]) -> Optional[Tuple[int, int]]:
    best = None
    for members in codes.values():
        if len(members) > 1:
            pair = (members[0], members[1])
            if best is None or pair < best:
                best = pair
    return best


def verify_ld(g: Graph, s) -> LdVerdict:
    """Check whether ``s`` is locating-dominating in ``g``.

    The smallest undominated vertex is reported first; otherwise the
    lexicographically smallest unseparated pair.

    Examples:
        >>> from core.graph import path_graph
        >>> str(verify_ld(path_graph(4), [0, 2]))
        'Valid'
    """
    smask = _as_set(g, s).mask
    cm = _closed_masks(g)
    codes: Dict[int, List[int]] = {}
    for v in range(g.n):
        if (smask >> v) & 1:
            continue
        code = cm[v] & smask
        if not code:
            return LdVerdict.undominated(v)
        codes.setdefault(code, []).append(v)
    pair = _first_collision(codes)
    if pair is not None:
        return LdVerdict.unseparated(*pair)
    return LdVerdict.valid()


def verify_ltd(g: Graph, s) -> LdVerdict:
    """LD check plus total domination (every vertex has a neighbour in S)."""
    sset = _as_set(g, s)
    verdict = verify_ld(g, sset)
    if verdict.kind == LdVerdict.UNDOMINATED:
        return verdict
    om = _open_masks(g)
    for v in range(g.n):
        if not om[v] & sset.mask:
            return LdVerdict.undominated(v)
    return verdict


def verify_ld_naive(g: Graph, s) -> LdVerdict:
    """Definitional LD check via iset over all vertex pairs.

    Slow; kept as an independent code path for cross-checking verify_ld.
    """
    sset = _as_set(g, s)
    outside = [v for v in range(g.n) if v not in sset]
    codes = {v: iset(g, sset, v) for v in outside}
    for v in outside:
        if len(codes[v]) == 0:
            return LdVerdict.undominated(v)
    for u, v in itertools.combinations(outside, 2):
        if codes[u] == codes[v]:
            return LdVerdict.unseparated(u, v)
    return LdVerdict.valid()


def is_dominating(g: Graph, s) -> bool:
    smask = _as_set(g, s).mask
    return all(m & smask for m in _closed_masks(g))


def is_total_dominating(g: Graph, s) -> bool:
    smask = _as_set(g, s).mask
    return all(m & smask for m in _open_masks(g))


def information_lower_bound(g: Graph) -> int:
    """ceil(2n / (Δ+3)), valid for every graph with at least one vertex."""
    if g.n == 0:
        return 0
    return max(1, math.ceil(2 * g.n / (g.max_degree() + 3)))


def subcubic_lower_bound(g: Graph) -> int:
    """ceil(n/3) for subcubic graphs.

    Raises:
        NotSubcubic: the maximum degree exceeds 3.
    """
    if not g.is_subcubic():
        raise NotSubcubic(g.max_degree())
    return -(-g.n // 3)


class _Search:
    """Depth-first LD/LTD search over a fixed vertex order."""

    def __init__(
        self,
        g: Graph,
        order: Sequence[int],
        total: bool,
        node_limit: Optional[int],
        deadline: Optional[float],
    ):
        self.g = g
        self.n = g.n
        self.order = list(order)
        self.total = total
        self.node_limit = node_limit
        self.deadline = deadline
        self.cm = _closed_masks(g)
        self.om = _open_masks(g)
        self.full = (1 << g.n) - 1
        delta = g.max_degree()
        self.cover = delta + 1
        self.open_cover = max(delta, 1)

        pos = [0] * g.n
        for i, v in enumerate(self.order):
            pos[v] = i
        self.settles: List[List[int]] = [[] for _ in range(g.n)]
        self.open_settles: List[List[int]] = [[] for _ in range(g.n)]
        for v in range(g.n):
            self.settles[max(pos[w] for w in (v, *g.adj[v]))].append(v)
            if total and g.adj[v]:
                self.open_settles[max(pos[w] for w in g.adj[v])].append(v)

        self.codes: Dict[int, int] = {}
        self.nodes = 0
        self.limit = g.n
        self.best_size: Optional[int] = None
        self.best_mask: Optional[int] = None
        self.stop_at_first = False
        self.floor = information_lower_bound(g)

    def _tick(self) -> None:
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _OutOfBudget()
        if self.deadline is not None and self.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget()

    def _needed(self, dom: int, odom: int, size: int) -> int:
        need = -(-(self.full & ~dom).bit_count() // self.cover)
        if self.total:
            need = max(need, -(-(self.full & ~odom).bit_count() // self.open_cover))
        # n - |S| <= (Δ+1)|S|/2 holds for the finished set
        return max(need, self.floor - size)

    def seed(self, best: VertexSet) -> None:
        """Start from a known feasible set; only strictly smaller ones are searched."""
        self.best_size = len(best)
        self.best_mask = best.mask
        self.limit = len(best) - 1

    def _settle(self, i: int, smask: int) -> Optional[List[int]]:
        added: List[int] = []
        for v in self.settles[i]:
            if (smask >> v) & 1:
                continue
            code = self.cm[v] & smask
            if not code or code in self.codes:
                for c in added:
                    del self.codes[c]
                return None
            self.codes[code] = v
            added.append(code)
        if self.total:
            for v in self.open_settles[i]:
                if not self.om[v] & smask:
                    for c in added:
                        del self.codes[c]
                    return None
        return added

    def run(self, forced: Sequence[bool] = ()) -> None:
        self._dfs(0, 0, 0, 0, 0, forced)

    def _dfs(self, i: int, smask: int, dom: int, odom: int, size: int, forced) -> bool:
        self._tick()
        if size + self._needed(dom, odom, size) > self.limit:
            return False
        if i == self.n:
            self.best_size = size
            self.best_mask = smask
            self.limit = size if self.stop_at_first else size - 1
            return True
        w = self.order[i]
        choices = (forced[i],) if i < len(forced) else (True, False)
        found = False
        for take in choices:
            if take:
                if size + 1 > self.limit:
                    continue
                s2, d2, o2, z2 = smask | (1 << w), dom | self.cm[w], odom | self.om[w], size + 1
            else:
                s2, d2, o2, z2 = smask, dom, odom, size
            added = self._settle(i, s2)
            if added is None:
                continue
            hit = self._dfs(i + 1, s2, d2, o2, z2, forced)
            for c in added:
                del self.codes[c]
            if hit:
                found = True
                if self.stop_at_first:
                    return True
        return found


class _OutOfBudget(Exception):
    pass


def _degree_order(g: Graph) -> List[int]:
    return sorted(range(g.n), key=lambda v: (-len(g.adj[v]), v))


def _phase_one_prefix(args) -> Tuple[Optional[int], Optional[int], int, bool]:
    g, total, forced, node_limit, deadline, hint = args
    search = _Search(g, _degree_order(g), total, node_limit, deadline)
    if hint is not None:
        search.seed(hint)
    try:
        search.run(forced)
    except _OutOfBudget:
        return search.best_size, search.best_mask, search.nodes, False
    return search.best_size, search.best_mask, search.nodes, True


def _members(g: Graph, mask: Optional[int]) -> Optional[Tuple[int, ...]]:
    return VertexSet(g.n, mask).members() if mask is not None else None


def _solve(
    g: Graph,
    total: bool,
    node_budget: Optional[int],
    time_budget: Optional[float],
    threads: int,
    upper_hint=None,
) -> SolveResult:
    if g.n == 0:
        raise BadParameter("exact solvers need at least one vertex")
    hint: Optional[VertexSet] = None
    if upper_hint is not None:
        hint = _as_set(g, upper_hint)
        verdict = verify_ltd(g, hint) if total else verify_ld(g, hint)
        if not verdict.is_valid:
            raise BadParameter(f"upper hint is not {'an LTD' if total else 'an LD'}-set: {verdict}")
    lower = information_lower_bound(g)
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    explored = 0

    if threads > 1 and g.n > 8:
        depth = min(g.n, max(1, math.ceil(math.log2(threads * 4))))
        prefixes = list(itertools.product((True, False), repeat=depth))
        jobs = [(g, total, p, node_budget, deadline, hint) for p in prefixes]
        logger.debug("Splitting phase 1 into %d prefixes over %d workers", len(jobs), threads)
        best_size: Optional[int] = len(hint) if hint is not None else None
        best_mask: Optional[int] = hint.mask if hint is not None else None
        complete = True
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for size, mask, nodes, done in pool.map(_phase_one_prefix, jobs):
                explored += nodes
                complete = complete and done
                if size is not None and (best_size is None or size < best_size):
                    best_size, best_mask = size, mask
        if not complete or best_size is None:
            raise BudgetExceeded(
                upper_bound=best_size if best_size is not None else g.n,
                lower_bound=lower,
                best_witness=_members(g, best_mask),
                explored=explored,
            )
        value = best_size
    else:
        search = _Search(g, _degree_order(g), total, node_budget, deadline)
        if hint is not None:
            search.seed(hint)
        try:
            search.run()
        except _OutOfBudget:
            raise BudgetExceeded(
                upper_bound=search.best_size if search.best_size is not None else g.n,
                lower_bound=lower,
                best_witness=_members(g, search.best_mask),
                explored=search.nodes,
            ) from None
        explored += search.nodes
        if search.best_size is None:
            raise BadParameter("graph admits no feasible set")
        value = search.best_size
        best_mask = search.best_mask

    remaining = None if node_budget is None else max(node_budget - explored, 1)
    lexi = _Search(g, range(g.n), total, remaining, deadline)
    lexi.limit = value
    lexi.stop_at_first = True
    try:
        lexi.run()
    except _OutOfBudget:
        raise BudgetExceeded(
            upper_bound=value,
            lower_bound=value,
            best_witness=_members(g, best_mask),
            explored=explored + lexi.nodes,
        ) from None
    explored += lexi.nodes
    witness = VertexSet(g.n, lexi.best_mask)
    k = len(witness)
    assert 2 * (g.n - k) <= (g.max_degree() + 1) * k, f"witness of size {k} is too small for n={g.n}"
    logger.debug("Exact %s number %d after %d nodes", "LTD" if total else "LD", value, explored)
    return SolveResult(value=value, witness=witness, explored=explored, lower_bound=lower)


def ld_number_exact(
    g: Graph,
    node_budget: Optional[int] = None,
    time_budget: Optional[float] = None,
    threads: int = 1,
    upper_hint=None,
) -> SolveResult:
    """Minimum LD-set with the lexicographically smallest optimal witness.

    Args:
        g: Any graph with n >= 1; isolated vertices are forced into S.
        node_budget: Maximum search nodes across both phases.
        time_budget: Wall-clock limit in seconds.
        threads: Worker processes for phase 1.
        upper_hint: A known LD-set. Phase 1 then only looks for smaller sets,
            and the hint is reported as the best witness if the budget runs out.

    Raises:
        BudgetExceeded: a budget ran out; carries upper and lower bounds.
        BadParameter: ``upper_hint`` is not an LD-set.

    Examples:
        >>> from core.graph import path_graph
        >>> r = ld_number_exact(path_graph(4))
        >>> r.value, list(r.witness)
        (2, [0, 2])
    """
    return _solve(g, False, node_budget, time_budget, threads, upper_hint)


def ltd_number_exact(
    g: Graph,
    node_budget: Optional[int] = None,
    time_budget: Optional[float] = None,
    threads: int = 1,
    upper_hint=None,
) -> SolveResult:
    """Minimum LTD-set; same determinism contract as ld_number_exact.

    Raises:
        IsolatedVertex: some vertex has no neighbours.
        BudgetExceeded: a budget ran out.
    """
    for v in range(g.n):
        if not g.adj[v]:
            raise IsolatedVertex(v)
    return _solve(g, True, node_budget, time_budget, threads, upper_hint)


def _naive(g: Graph, check) -> SolveResult:
    if g.n > NAIVE_MAX_ORDER:
        raise BadParameter(f"naive enumeration is limited to n <= {NAIVE_MAX_ORDER}, got {g.n}")
    explored = 0
    for size in range(g.n + 1):
        for combo in itertools.combinations(range(g.n), size):
            explored += 1
            s = VertexSet.of(g.n, combo)
            if check(g, s).is_valid:
                return SolveResult(value=size, witness=s, explored=explored, lower_bound=size)
    raise BadParameter("graph admits no feasible set")


def naive_ld_number(g: Graph) -> SolveResult:
    """Subset enumeration in size-then-lexicographic order (test oracle)."""
    return _naive(g, verify_ld)


def naive_ltd_number(g: Graph) -> SolveResult:
    for v in range(g.n):
        if not g.adj[v]:
            raise IsolatedVertex(v)
    return _naive(g, verify_ltd)
