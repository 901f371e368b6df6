"""Exception hierarchy for locdom.

Every domain failure is a ``ValueError`` subclass carrying a readable
message, so callers that only care about "bad input" can catch
``ValueError`` while the CLI maps the named kinds to exit codes.

    LocDomError (ValueError)
        ├── IndexOutOfRange
        ├── LoopEdge
        ├── EdgeNotPresent
        ├── Graph6Error
        │     ├── MalformedHeader
        │     ├── TruncatedBody
        │     ├── NonZeroPadding
        │     └── ByteOutOfRange
        ├── EdgeListError
        ├── BudgetExceeded
        ├── IsolatedVertex
        ├── NotSubcubic
        ├── HypothesisViolated
        ├── BadParameter
        └── OrderTooLarge
"""

from __future__ import annotations

from typing import Optional, Tuple


class LocDomError(ValueError):
    """Base class for all locdom errors."""


class IndexOutOfRange(LocDomError):
    """A vertex index falls outside ``[0, n)``."""

    def __init__(self, index: int, n: int):
        super().__init__(f"Vertex index {index} out of range for graph on {n} vertices")
        self.index = index
        self.n = n


class LoopEdge(LocDomError):
    def __init__(self, vertex: int):
        super().__init__(f"Loop edge ({vertex},{vertex}) is not allowed in a simple graph")
        self.vertex = vertex


class EdgeNotPresent(LocDomError):
    def __init__(self, u: int, v: int):
        super().__init__(f"Edge ({u},{v}) is not present")
        self.edge = (u, v)


class Graph6Error(LocDomError):
    """Any failure while decoding a graph6 record."""


class MalformedHeader(Graph6Error):
    pass


class TruncatedBody(Graph6Error):
    pass


class NonZeroPadding(Graph6Error):
    pass


class ByteOutOfRange(Graph6Error):
    def __init__(self, position: int, value: int):
        super().__init__(
            f"graph6 byte {value} at position {position} is outside the printable range 63..126"
        )
        self.position = position
        self.value = value


class EdgeListError(LocDomError):
    """Malformed edge-list text; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class BudgetExceeded(LocDomError):
    """The exact search ran out of nodes or time.

    Attributes:
        upper_bound: Size of the best set found so far (``n`` if none).
        lower_bound: Proven lower bound on the optimum.
        best_witness: Sorted members of the best set found, if any.
        explored: Search nodes visited before giving up.
    """

    def __init__(
        self,
        upper_bound: int,
        lower_bound: int,
        best_witness: Optional[Tuple[int, ...]] = None,
        explored: int = 0,
    ):
        super().__init__(
            f"Search budget exceeded after {explored} nodes "
            f"(optimum between {lower_bound} and {upper_bound})"
        )
        self.upper_bound = upper_bound
        self.lower_bound = lower_bound
        self.best_witness = best_witness
        self.explored = explored


class IsolatedVertex(LocDomError):
    def __init__(self, vertex: int):
        super().__init__(f"Vertex {vertex} is isolated; no total dominating set exists")
        self.vertex = vertex


class NotSubcubic(LocDomError):
    def __init__(self, max_degree: int):
        super().__init__(f"Graph is not subcubic (maximum degree {max_degree})")
        self.max_degree = max_degree


class HypothesisViolated(LocDomError):
    """An input does not meet a theorem's hypotheses.

    Attributes:
        hypothesis: Short name of the failed hypothesis, e.g. ``"open-twins-deg1"``,
            ``"forbidden-graph"``, ``"disconnected"``.
        witness: Vertices naming the offending structure (a twin pair, the
            forbidden graph's name is carried in the message).
    """

    def __init__(self, hypothesis: str, message: str, witness: Tuple = ()):
        super().__init__(message)
        self.hypothesis = hypothesis
        self.witness = tuple(witness)


class BadParameter(LocDomError):
    pass


class OrderTooLarge(LocDomError):
    def __init__(self, n: int, limit: int, what: str):
        super().__init__(f"{what} supports at most {limit} vertices, got {n}")
        self.n = n
        self.limit = limit
