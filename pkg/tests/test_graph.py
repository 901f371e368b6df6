"""
Unit tests for graph values, vertex sets and index mappings
"""
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import networkx as nx
import pytest

from core.errors import EdgeNotPresent, IndexOutOfRange, LoopEdge
from core.graph import (
    Graph,
    VertexMapping,
    VertexSet,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    from_networkx,
    path_graph,
    prism_graph,
    star_graph,
    to_networkx,
)


@pytest.fixture
def p4():
    """Path 0-1-2-3"""
    return path_graph(4)


def test_from_edges_drops_duplicates():
    """Test duplicate pairs collapse to one edge"""
    g = Graph.from_edges(3, [(0, 1), (1, 0), (0, 1), (1, 2)])
    assert g.edge_count == 2
    assert g.adj == ((1,), (0, 2), (1,))
    g.validate()


def test_from_edges_rejects_bad_input():
    """Test out-of-range endpoints and loops"""
    with pytest.raises(IndexOutOfRange):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(LoopEdge):
        Graph.from_edges(3, [(1, 1)])


def test_degrees_and_predicates(p4):
    """Test degree queries and the subcubic/cubic predicates"""
    assert p4.degrees() == (1, 2, 2, 1)
    assert p4.max_degree() == 2
    assert p4.is_connected()
    assert p4.is_subcubic()
    assert not p4.is_cubic()
    assert complete_graph(4).is_cubic()
    assert not star_graph(4).is_subcubic()
    assert prism_graph().is_cubic()


def test_neighbourhoods(p4):
    """Test open and closed neighbourhoods"""
    assert p4.open_neighbors(1).members() == (0, 2)
    assert p4.closed_neighbors(1).members() == (0, 1, 2)
    assert p4.has_edge(2, 3) and not p4.has_edge(0, 3)


def test_remove_edges(p4):
    """Test edge deletion keeps the vertex set"""
    g = p4.remove_edges([(1, 2)])
    assert g.n == 4 and g.edge_count == 2
    assert not g.is_connected()
    assert p4.edge_count == 3


def test_remove_missing_edge_fails(p4):
    """Test deleting a non-edge or the same edge twice"""
    with pytest.raises(EdgeNotPresent):
        p4.remove_edges([(0, 2)])
    with pytest.raises(EdgeNotPresent):
        p4.remove_edges([(0, 1), (1, 0)])


def test_remove_vertices_mapping():
    """Test vertex deletion compacts indices and the mapping lifts sets back"""
    g = cycle_graph(5)
    h, mapping = g.remove_vertices([1, 3])
    assert h.n == 3
    assert mapping.forward == (0, None, 1, None, 2)
    assert mapping.inverse() == (0, 2, 4)
    assert list(h.edges()) == [(0, 2)]
    lifted = mapping.patch_back(VertexSet.of(3, [0, 2]))
    assert lifted.members() == (0, 4)
    assert mapping.push_forward(VertexSet.of(5, [1, 2, 4])).members() == (1, 2)


def test_mapping_compose():
    """Test composing two deletions equals one combined deletion"""
    g = path_graph(6)
    h1, m1 = g.remove_vertices([0])
    h2, m2 = h1.remove_vertices([2])
    combined = m1.compose(m2)
    h3, m3 = g.remove_vertices([0, 3])
    assert h2 == h3
    assert combined == m3
    assert VertexMapping.identity(4).inverse() == (0, 1, 2, 3)


def test_components_ordered():
    """Test components come back ordered by their smallest vertex"""
    g = Graph.from_edges(6, [(4, 5), (0, 2), (1, 3)])
    comps = [c.members() for c in g.components()]
    assert comps == [(0, 2), (1, 3), (4, 5)]


def test_induced_subgraph():
    """Test induced subgraphs relabel in order"""
    sub, mapping = prism_graph().induced([0, 1, 2])
    assert sub == complete_graph(3)
    assert mapping.inverse() == (0, 1, 2)


def test_vertex_set_algebra():
    """Test set operations and ordering on VertexSet"""
    a = VertexSet.of(6, [0, 2, 4])
    b = VertexSet.of(6, [2, 3])
    assert (a | b).members() == (0, 2, 3, 4)
    assert (a & b).members() == (2,)
    assert (a - b).members() == (0, 4)
    assert len(a) == 3 and 2 in a and 3 not in a
    assert a.with_vertex(5).without_vertex(0).members() == (2, 4, 5)
    assert VertexSet.of(6, [2]).issubset(a)
    assert VertexSet.of(6, [0, 1]) < VertexSet.of(6, [0, 2])
    with pytest.raises(IndexOutOfRange):
        VertexSet.of(3, [3])
    with pytest.raises(TypeError):
        a | {1}


def test_equality_and_hash():
    """Test structural equality"""
    assert path_graph(3) == Graph.from_edges(3, [(1, 2), (0, 1)])
    assert len({path_graph(3), Graph.from_edges(3, [(2, 1), (1, 0)])}) == 1


def test_networkx_roundtrip():
    """Test conversion to networkx and back"""
    g = complete_bipartite(3, 3)
    h = to_networkx(g)
    assert nx.is_isomorphic(h, nx.complete_bipartite_graph(3, 3))
    assert from_networkx(h) == g
