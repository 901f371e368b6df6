"""
Unit tests for twin detection, short cycles and pattern embeddings
"""
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import networkx as nx
import pytest

from core.enumeration import EnumFilter, enumerate_graphs
from core.errors import BadParameter, HypothesisViolated
from core.families import FamilySpec, generate
from core.graph import (
    Graph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    from_networkx,
    path_graph,
    prism_graph,
    star_graph,
)
from core.twins import (
    F3_PRIME,
    F_GRAPHS,
    FEmbedding,
    check_f_embedding,
    check_structure_lemmas,
    classify_hypotheses,
    closed_twins_of_degree,
    find_f_embedding,
    four_cycles,
    has_four_cycle,
    is_open_twin_free,
    is_twin_free,
    leaves_and_supports,
    open_twins_of_degree,
    triangles,
    twin_report,
)


@pytest.fixture
def petersen():
    """The Petersen graph: cubic, twin-free, girth five"""
    return from_networkx(nx.petersen_graph())


@pytest.fixture
def tight_cubic10():
    """Cubic graph on ten vertices with both kinds of twins"""
    return generate(FamilySpec.parse("TightCubic10")).graph


def test_path_is_twin_free():
    """Test P4 has no twins and two leaves"""
    report = twin_report(path_graph(4))
    assert report.is_twin_free
    leaves, supports = leaves_and_supports(path_graph(4))
    assert leaves.members() == (0, 3)
    assert supports.members() == (1, 2)


def test_star_leaves_are_open_twins():
    """Test the leaves of K_{1,3} pair up as open twins of degree 1"""
    report = twin_report(star_graph(3))
    assert report.open_pairs == ((1, 2, 1), (1, 3, 1), (2, 3, 1))
    assert report.closed_pairs == ()
    assert open_twins_of_degree(star_graph(3), 1) == [(1, 2), (1, 3), (2, 3)]


def test_cycle_and_triangle():
    """Test open twins in C4 and closed twins in K3"""
    assert twin_report(cycle_graph(4)).open_pairs == ((0, 2, 2), (1, 3, 2))
    report = twin_report(complete_graph(3))
    assert report.open_pairs == ()
    assert report.closed_pairs == ((0, 1, 2), (0, 2, 2), (1, 2, 2))
    assert not is_open_twin_free(cycle_graph(4))
    assert is_open_twin_free(complete_graph(3))
    assert not is_twin_free(complete_graph(3))


def test_tight_cubic10_twins(tight_cubic10):
    """Test the ten-vertex cubic graph has degree-3 twins of both kinds"""
    report = twin_report(tight_cubic10)
    assert report.open_pairs == ((0, 2, 3), (1, 9, 3))
    assert report.closed_pairs == ((5, 6, 3),)
    assert closed_twins_of_degree(tight_cubic10, 3) == [(5, 6)]


def test_triangles_and_four_cycles():
    """Test cycle listings in canonical form"""
    assert len(triangles(complete_graph(4))) == 4
    assert triangles(prism_graph()) == [(0, 1, 2), (3, 4, 5)]
    assert four_cycles(cycle_graph(4)) == [(0, 1, 2, 3)]
    assert len(four_cycles(complete_graph(4))) == 3
    assert not has_four_cycle(cycle_graph(5))
    assert len(four_cycles(complete_bipartite(3, 3))) == 9


def test_structure_lemmas_hold(petersen):
    """Test the structure checks pass on twin-free graphs"""
    assert check_structure_lemmas(petersen).passed
    assert check_structure_lemmas(prism_graph()).passed
    assert check_structure_lemmas(cycle_graph(6)).passed


def test_structure_lemmas_need_twin_free():
    """Test graphs with twins are rejected"""
    with pytest.raises(HypothesisViolated) as exc:
        check_structure_lemmas(complete_graph(4))
    assert exc.value.hypothesis == "twin-free"
    with pytest.raises(HypothesisViolated) as exc:
        check_structure_lemmas(star_graph(4))
    assert exc.value.hypothesis == "subcubic"


def test_structure_lemmas_on_atlas(atlas_subcubic):
    """Test every twin-free subcubic atlas graph passes"""
    for g in atlas_subcubic:
        if is_twin_free(g):
            assert check_structure_lemmas(g).passed, g


@pytest.mark.parametrize("n", [4, 5, 6, 7] + [pytest.param(n, marks=pytest.mark.slow) for n in (8, 9, 10)])
def test_structure_lemmas_on_enumerated(n):
    """Test every connected twin-free subcubic graph of order n passes"""
    graphs = list(enumerate_graphs(EnumFilter(n, twin_free=True)))
    assert graphs
    for g in graphs:
        assert check_structure_lemmas(g).passed, g


def test_classify_hypotheses(petersen, tight_cubic10):
    """Test the constructive class names"""
    paw = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
    assert classify_hypotheses(petersen) == "twin-free"
    assert classify_hypotheses(prism_graph()) == "twin-free"
    assert classify_hypotheses(paw) == "open-twin-free"
    assert classify_hypotheses(tight_cubic10) == "no-open-twins-deg12"
    assert classify_hypotheses(cycle_graph(4)) == "outside"
    assert classify_hypotheses(complete_graph(4)) == "outside"
    assert classify_hypotheses(complete_bipartite(3, 3)) == "outside"
    assert classify_hypotheses(Graph.empty(1)) == "outside"


def test_pattern_sizes():
    """Test the pattern graphs have the expected orders and sizes"""
    expected = {0: (5, 6), 1: (7, 9), 2: (7, 8), 3: (6, 8), 4: (8, 10), 5: (7, 10), 6: (8, 9)}
    for i, (n, m) in expected.items():
        g = F_GRAPHS[i].graph()
        assert (g.n, g.m) == (n, m)
        assert g.is_subcubic()
    assert F3_PRIME.graph().m == 7


def test_pattern_embeds_into_itself():
    """Test F6 embeds into its own graph by the identity"""
    pattern = F_GRAPHS[6]
    emb = find_f_embedding(pattern.graph(), 6)
    assert emb is not None
    assert emb.as_dict() == {label: i for i, label in enumerate(pattern.labels)}
    assert check_f_embedding(pattern.graph(), emb)


def test_embedding_check_rejects_extra_edges():
    """Test U vertices may not have neighbours outside the image"""
    g = F_GRAPHS[0].graph().add_edges([(2, 3)])
    emb = FEmbedding(0, tuple((a, i) for i, a in enumerate(F_GRAPHS[0].labels)), frozenset({"u", "v"}))
    assert check_f_embedding(g, emb)
    assert not check_f_embedding(g, emb, frozenset({"u", "v", "x"}))


def test_f0_embeds_exactly_at_degree3_open_twins(atlas_subcubic):
    """Test F0 finds an embedding iff degree-3 open twins exist"""
    for g in atlas_subcubic:
        emb = find_f_embedding(g, 0)
        assert (emb is not None) == bool(open_twins_of_degree(g, 3)), g
        if emb is not None:
            assert check_f_embedding(g, emb)


def test_embedding_index_range():
    """Test the pattern index is validated"""
    with pytest.raises(BadParameter):
        find_f_embedding(path_graph(3), 7)
