"""
Unit tests for the graph6, edge-list and DOT codecs
"""
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import networkx as nx
import pytest

from core.enumeration import EnumFilter, enumerate_graphs
from core.errors import (
    ByteOutOfRange,
    EdgeListError,
    Graph6Error,
    MalformedHeader,
    NonZeroPadding,
    TruncatedBody,
)
from core.graph import Graph, VertexSet, complete_graph, cycle_graph, from_networkx, path_graph
from core.graph_io import (
    format_graph,
    parse_edge_list,
    parse_graph6,
    read_graph6_stream,
    read_graph_file,
    sniff_format,
    to_dot,
    to_edge_list,
    to_graph6,
    write_text_atomic,
)


def test_parse_small_records():
    """Test well-known graph6 records"""
    assert parse_graph6("C~") == complete_graph(4)
    assert parse_graph6("A_") == Graph.from_edges(2, [(0, 1)])
    assert parse_graph6("A?") == Graph.empty(2)
    assert parse_graph6("?") == Graph.empty(0)
    assert parse_graph6("Ch") == path_graph(4)
    assert parse_graph6(b">>graph6<<C~\n") == complete_graph(4)


def test_encode_known_records():
    """Test encoding matches the reference strings"""
    assert to_graph6(complete_graph(4)) == b"C~"
    assert to_graph6(path_graph(4)) == b"Ch"
    assert to_graph6(Graph.empty(0)) == b"?"


def test_parse_errors():
    """Test each malformed-record error"""
    with pytest.raises(MalformedHeader):
        parse_graph6("")
    with pytest.raises(TruncatedBody):
        parse_graph6("C")
    with pytest.raises(NonZeroPadding):
        parse_graph6("A`")
    with pytest.raises(ByteOutOfRange):
        parse_graph6(b"C\x7f")
    with pytest.raises(Graph6Error):
        parse_graph6("C~~")


def test_long_size_field():
    """Test the 4-byte size field used from n = 63"""
    g = cycle_graph(70)
    code = to_graph6(g)
    assert code[0] == 126
    assert parse_graph6(code) == g


def test_matches_networkx_on_atlas():
    """Test encoding agrees with networkx on every atlas graph"""
    for h in nx.graph_atlas_g()[1:]:
        g = from_networkx(h)
        assert to_graph6(g) + b"\n" == nx.to_graph6_bytes(h, header=False)
        assert parse_graph6(to_graph6(g)) == g


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_roundtrip_on_enumerated_cubic(n):
    """Test graph6 encoding of every cubic graph of order n"""
    for g in enumerate_graphs(EnumFilter(n, regular=3)):
        code = to_graph6(g)
        assert parse_graph6(code) == g
        h = nx.from_graph6_bytes(code)
        assert sorted(tuple(sorted(e)) for e in h.edges()) == list(g.edges())


def test_read_stream_skips_blanks_and_comments():
    """Test stream reading"""
    graphs = list(read_graph6_stream([b"# header\n", b"C~\n", b"\n", b"Ch\n"]))
    assert graphs == [complete_graph(4), path_graph(4)]


def test_edge_list_roundtrip():
    """Test edge-list parsing with comments and an explicit order"""
    text = "# a path\nn 5\n0 1\n1 2  # middle\n2 3\n"
    g = parse_edge_list(text)
    assert g.n == 5 and g.edge_count == 3
    assert parse_edge_list(to_edge_list(g)) == g


def test_edge_list_infers_order():
    """Test the order defaults to the largest index plus one"""
    assert parse_edge_list("0 1\n1 4\n").n == 5
    assert parse_edge_list("").n == 0


def test_edge_list_errors():
    """Test malformed edge-list lines name their line number"""
    with pytest.raises(EdgeListError) as exc:
        parse_edge_list("0 1\n1 x\n")
    assert exc.value.line == 2
    with pytest.raises(EdgeListError):
        parse_edge_list("0 1 2\n")
    with pytest.raises(EdgeListError):
        parse_edge_list("n 3\nn 4\n")


def test_dot_marks_witness():
    """Test DOT output fills witness vertices and uses labels"""
    text = to_dot(path_graph(3), VertexSet.of(3, [1]), {0: "a"})
    assert 'label="a"' in text
    assert "1 [label=\"1\", style=filled, fillcolor=gray]" in text
    assert "0 -- 1;" in text


def test_sniff_format():
    """Test format detection by suffix and content"""
    assert sniff_format("x.g6", "") == "graph6"
    assert sniff_format("x.edges", "") == "edges"
    assert sniff_format("x", "C~\n") == "graph6"
    assert sniff_format("x", "0 1\n1 2\n") == "edges"


def test_file_roundtrip(tmp_path):
    """Test atomic writes and reading back both formats"""
    g = cycle_graph(6)
    for name, fmt in (("c6.g6", "graph6"), ("c6.edges", "edges")):
        path = tmp_path / name
        write_text_atomic(path, format_graph(g, fmt))
        assert read_graph_file(path) == g
        assert not (tmp_path / (name + ".tmp")).exists()


def test_write_creates_parent(tmp_path):
    """Test missing parent directories are created"""
    path = tmp_path / "nested" / "out.txt"
    write_text_atomic(path, "hello\n")
    assert path.read_text() == "hello\n"
