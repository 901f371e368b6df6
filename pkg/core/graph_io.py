"""
Graph I/O - graph6, edge-list and DOT codecs plus atomic file writes

Formats:

    graph6 (read/write, bit-exact):
        N(n) size field, then the upper triangle x(0,1), x(0,2), x(1,2),
        x(0,3), ... packed big-endian into 6-bit groups, each stored +63.
            n <= 62            -> one byte n+63
            n <= 258047        -> 126, then 3 bytes (18 bits)
            n <= 68719476735   -> 126, 126, then 6 bytes (36 bits)
        An optional ">>graph6<<" header is accepted and stripped.

    edge list (read/write):
        # comment lines and trailing comments are ignored
        n 5            <- optional vertex count
        0 1            <- one edge per line

    DOT (write only):
        graph G { 0; 1; 0 -- 1; }   witness vertices are filled grey

Persistence:
    write_text_atomic() writes to "<path>.tmp" and os.replace()s it over
    the destination, so readers never observe a half-written file.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Union

from core.errors import (
    ByteOutOfRange,
    EdgeListError,
    Graph6Error,
    MalformedHeader,
    NonZeroPadding,
    TruncatedBody,
)
from core.graph import Graph, VertexSet

logger = logging.getLogger(__name__)

GRAPH6_HEADER = b">>graph6<<"
_MAX_GRAPH6_ORDER = (1 << 36) - 1

BytesLike = Union[bytes, bytearray, str]


def _as_bytes(text: BytesLike) -> bytes:
    if isinstance(text, str):
        try:
            return text.encode("ascii")
        except UnicodeEncodeError as exc:
            raise ByteOutOfRange(exc.start, ord(text[exc.start])) from None
    return bytes(text)


def _decode_size(data: bytes) -> tuple:
    """Return (n, body offset)."""
    if not data:
        raise MalformedHeader("empty graph6 record")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise MalformedHeader("graph6 size field truncated (expected 8 bytes)")
        groups, offset = data[2:8], 8
    else:
        if len(data) < 4:
            raise MalformedHeader("graph6 size field truncated (expected 4 bytes)")
        groups, offset = data[1:4], 4
    n = 0
    for b in groups:
        n = (n << 6) | (b - 63)
    return n, offset


def parse_graph6(text: BytesLike) -> Graph:
    """Decode one graph6 record.

    Raises:
        ByteOutOfRange: a byte is outside 63..126.
        MalformedHeader: the size field is missing or truncated.
        TruncatedBody: fewer body bytes than n requires.
        NonZeroPadding: unused low bits of the last byte are set.
        Graph6Error: trailing bytes after the body.

    Examples:
        >>> parse_graph6("C~").edge_count
        6
    """
    data = _as_bytes(text).strip()
    if data.startswith(GRAPH6_HEADER):
        data = data[len(GRAPH6_HEADER):]
    for pos, b in enumerate(data):
        if not 63 <= b <= 126:
            raise ByteOutOfRange(pos, b)
    n, offset = _decode_size(data)
    bits = n * (n - 1) // 2
    need = (bits + 5) // 6
    body = data[offset:]
    if len(body) < need:
        raise TruncatedBody(f"graph6 body has {len(body)} bytes, n={n} needs {need}")
    if len(body) > need:
        raise Graph6Error(f"graph6 record has {len(body) - need} trailing bytes")

    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    if bits % 6:
        pad = (body[-1] - 63) & ((1 << (6 - bits % 6)) - 1)
        if pad:
            raise NonZeroPadding(f"graph6 padding bits are {pad:#b}, expected zero")
    return Graph.from_edges(n, edges)


def to_graph6(g: Graph) -> bytes:
    """Encode ``g`` as a graph6 record without header or newline."""
    n = g.n
    if n > _MAX_GRAPH6_ORDER:
        raise ValueError(f"graph6 cannot encode n={n}")
    if n <= 62:
        out = bytearray([n + 63])
    elif n <= 258047:
        out = bytearray([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    else:
        out = bytearray([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])

    acc = 0
    width = 0
    for j in range(1, n):
        nbrs = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (1 if i in nbrs else 0)
            width += 1
            if width == 6:
                out.append(acc + 63)
                acc = 0
                width = 0
    if width:
        out.append((acc << (6 - width)) + 63)
    return bytes(out)


def read_graph6_stream(lines: Iterable[BytesLike]) -> Iterator[Graph]:
    """Yield one graph per non-blank line, skipping ``#`` comments."""
    for raw in lines:
        line = _as_bytes(raw).strip()
        if not line or line.startswith(b"#"):
            continue
        yield parse_graph6(line)


def parse_edge_list(text: str) -> Graph:
    """Parse edge-list text.

    Without an ``n <N>`` line the order is one more than the largest index
    mentioned (0 for an empty file).

    Raises:
        EdgeListError: a line is not ``n <N>`` or ``<u> <v>``.
        IndexOutOfRange, LoopEdge: from graph construction.
    """
    n: Optional[int] = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit():
                raise EdgeListError(lineno, f"expected 'n <count>', got {raw.strip()!r}")
            if n is not None:
                raise EdgeListError(lineno, "vertex count given twice")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise EdgeListError(lineno, f"expected '<u> <v>', got {raw.strip()!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(lineno, f"non-integer vertex in {raw.strip()!r}") from None
        if u < 0 or v < 0:
            raise EdgeListError(lineno, "negative vertex index")
        edges.append((u, v))
    if n is None:
        n = max((max(e) for e in edges), default=-1) + 1
    return Graph.from_edges(n, edges)


def to_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def to_dot(
    g: Graph,
    witness: Optional[VertexSet] = None,
    labels: Optional[Dict[int, str]] = None,
) -> str:
    """Render ``g`` as an undirected DOT graph.

    Vertices in ``witness`` get ``style=filled, fillcolor=gray``; ``labels``
    overrides the default index labels.
    """
    lines = ["graph G {"]
    for v in range(g.n):
        label = labels.get(v, str(v)) if labels else str(v)
        attrs = [f'label="{label}"']
        if witness is not None and v in witness:
            attrs.append("style=filled")
            attrs.append("fillcolor=gray")
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def sniff_format(path: Union[str, Path], text: str) -> str:
    """Guess 'graph6' or 'edges' from the suffix, then the content."""
    suffix = Path(path).suffix.lower()
    if suffix in (".g6", ".graph6"):
        return "graph6"
    if suffix in (".edges", ".txt", ".el"):
        return "edges"
    body = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if len(body) == 1 and (
        body[0].startswith(">>graph6<<") or " " not in body[0]
    ):
        return "graph6"
    return "edges"


def read_graph_file(path: Union[str, Path]) -> Graph:
    """Load a single graph from a graph6 or edge-list file."""
    text = Path(path).read_text(encoding="ascii", errors="strict")
    fmt = sniff_format(path, text)
    logger.debug("Reading %s as %s", path, fmt)
    if fmt == "graph6":
        graphs = list(read_graph6_stream(text.splitlines()))
        if len(graphs) != 1:
            raise Graph6Error(f"{path}: expected one graph6 record, found {len(graphs)}")
        return graphs[0]
    return parse_edge_list(text)


def format_graph(g: Graph, fmt: str, witness: Optional[VertexSet] = None,
                 labels: Optional[Dict[int, str]] = None) -> str:
    """Serialise ``g`` as 'graph6', 'edges' or 'dot'."""
    if fmt == "graph6":
        return to_graph6(g).decode("ascii") + "\n"
    if fmt == "edges":
        return to_edge_list(g)
    if fmt == "dot":
        return to_dot(g, witness=witness, labels=labels)
    raise ValueError(f"Unknown graph format {fmt!r}")


def format_for_path(path: Union[str, Path]) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".g6", ".graph6"):
        return "graph6"
    if suffix in (".dot", ".gv"):
        return "dot"
    return "edges"


def write_text_atomic(path: Union[str, Path], text: str) -> None:
    """Write ``text`` to ``path`` via a temp file and ``os.replace``."""
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    temp_file = target.with_name(target.name + ".tmp")
    try:
        with open(temp_file, "w", encoding="utf-8") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(temp_file, target)
    finally:
        if temp_file.exists():
            temp_file.unlink()


def write_graph6_lines(graphs: Iterable[Graph]) -> List[str]:
    return [to_graph6(g).decode("ascii") for g in graphs]
