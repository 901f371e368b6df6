"""
Unit tests for the n/2 construction, normalisation and certificate replay
"""
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from dataclasses import replace

import networkx as nx
import pytest

import core.construct as construct_module
from core.construct import (
    FALLBACK_RULES,
    RULES,
    check_hypotheses,
    construct_for_cubic,
    construct_half_ld,
    construct_per_component,
    normalize_leaves_out,
    normalize_supports_in,
    replay_certificate,
)
from core.enumeration import EnumFilter, enumerate_graphs
from core.errors import HypothesisViolated
from core.families import FamilySpec, generate
from core.graph import (
    Graph,
    VertexSet,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    from_networkx,
    path_graph,
    prism_graph,
    star_graph,
)
from core.locating import ld_number_exact, verify_ld
from core.twins import classify_hypotheses, leaves_and_supports


def assert_sound(g, cert):
    """The certificate verifies, stays within n/2 and replays"""
    assert verify_ld(g, cert.witness).is_valid
    assert len(cert.witness) <= g.n // 2
    assert set(cert.rules_used()) <= set(RULES)
    assert replay_certificate(g, cert)


def test_small_graph_is_solved_exactly():
    """Test P4 goes straight to the base case"""
    cert = construct_half_ld(path_graph(4))
    assert cert.witness.members() == (0, 2)
    assert cert.trace[0].rule_id == "small/exact"
    assert cert.fallback_count == 0
    assert_sound(path_graph(4), cert)


def test_f3_prime_uses_stated_set():
    """Test the F3' configuration returns a two-vertex set"""
    inst = generate(FamilySpec.parse("F3Prime"))
    cert = construct_half_ld(inst.graph)
    assert len(cert.witness) == 2
    assert cert.trace[0].rule_id == "open-twins/F3'"
    assert cert.trace[0].patch_kind == "determined"
    assert_sound(inst.graph, cert)


@pytest.mark.parametrize("kind", ["Prism", "TightCubic10", "P2BoxC4"])
def test_named_graphs(kind):
    """Test sets for reference graphs stay within n/2"""
    g = generate(FamilySpec.parse(kind)).graph
    assert_sound(g, construct_half_ld(g))


def test_petersen_counts_fallback():
    """Test a twin-free graph without short cycles is solved exactly and counted"""
    g = from_networkx(nx.petersen_graph())
    cert = construct_half_ld(g)
    assert cert.fallback_count == 1
    assert cert.fallback_rules() == ["twin-free/c4-free"]
    assert len(cert.witness) == 4
    assert_sound(g, cert)


def test_unpatched_rules_are_counted(monkeypatch):
    """Test repairs and exact solves both count when no stated patch verifies"""
    plan = construct_module._Planner.plan

    def without_patches(self):
        stage, reductions = plan(self)
        return stage, [replace(r, patches=()) for r in reductions if r.determined is None]

    monkeypatch.setattr(construct_module._Planner, "plan", without_patches)
    g = prism_graph()
    cert = construct_half_ld(g)
    repairs = [s for s in cert.trace if s.patch_kind == "repair"]
    exact = [s for s in cert.trace if s.patch_kind == "fallback"]
    assert cert.fallback_count == len(repairs) + len(exact) >= 1
    assert cert.repair_rules() == [s.rule_id for s in repairs]
    assert len(cert.fallback_rules()) == cert.fallback_count
    assert_sound(g, cert)


def test_certificate_dict():
    """Test the serialised certificate carries its trace"""
    d = construct_half_ld(prism_graph()).to_dict()
    assert d["size"] == len(d["witness"])
    assert d["trace"][0]["depth"] == 0
    assert set(FALLBACK_RULES) >= set(d["fallback_rules"])


@pytest.mark.parametrize(
    "g, hypothesis",
    [
        (complete_bipartite(3, 3), "forbidden-graph"),
        (complete_graph(4), "forbidden-graph"),
        (complete_graph(3), "forbidden-graph"),
        (star_graph(3), "open-twins-deg1"),
        (cycle_graph(4), "open-twins-deg2"),
        (star_graph(4), "subcubic"),
        (Graph.empty(1), "order"),
        (Graph.from_edges(4, [(0, 1), (2, 3)]), "disconnected"),
    ],
)
def test_hypothesis_failures(g, hypothesis):
    """Test inputs outside the class are rejected with a named hypothesis"""
    with pytest.raises(HypothesisViolated) as exc:
        construct_half_ld(g)
    assert exc.value.hypothesis == hypothesis


def test_hypothesis_witnesses():
    """Test the offending structure is named"""
    with pytest.raises(HypothesisViolated) as exc:
        check_hypotheses(cycle_graph(4))
    assert exc.value.witness == (0, 2)
    with pytest.raises(HypothesisViolated) as exc:
        check_hypotheses(Graph.from_edges(4, [(0, 1), (2, 3)]))
    assert exc.value.witness == (0, 2)
    with pytest.raises(HypothesisViolated) as exc:
        check_hypotheses(complete_bipartite(3, 3))
    assert "K3,3" in str(exc.value)


def test_cubic_wrapper():
    """Test the cubic entry point rejects non-cubic input"""
    with pytest.raises(HypothesisViolated) as exc:
        construct_for_cubic(path_graph(4))
    assert exc.value.hypothesis == "cubic"
    with pytest.raises(HypothesisViolated) as exc:
        construct_for_cubic(complete_graph(4))
    assert exc.value.hypothesis == "forbidden-graph"
    assert_sound(prism_graph(), construct_for_cubic(prism_graph()))


def test_per_component():
    """Test disjoint components are solved independently"""
    g = Graph.from_edges(10, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 4)])
    cert = construct_per_component(g)
    assert verify_ld(g, cert.witness).is_valid
    assert len(cert.witness) <= 5
    with pytest.raises(HypothesisViolated) as exc:
        construct_per_component(Graph.from_edges(6, [(0, 1), (2, 3), (2, 4), (2, 5)]))
    assert exc.value.hypothesis == "open-twins-deg1"
    assert "vertex 2" in str(exc.value)


def test_normalize_supports_in():
    """Test leaves are swapped for their supports"""
    g = path_graph(4)
    assert normalize_supports_in(g, VertexSet.of(4, [0, 2])).members() == (1, 2)
    assert normalize_leaves_out(g, VertexSet.of(4, [0, 1, 2])).members() == (1, 2)


def test_normalize_rejects_bad_input():
    """Test the normalisation preconditions"""
    with pytest.raises(HypothesisViolated) as exc:
        normalize_supports_in(path_graph(4), VertexSet.of(4, [0]))
    assert exc.value.hypothesis == "ld-set"
    with pytest.raises(HypothesisViolated) as exc:
        normalize_supports_in(path_graph(2), VertexSet.of(2, [0]))
    assert exc.value.hypothesis == "order"
    with pytest.raises(HypothesisViolated) as exc:
        normalize_leaves_out(star_graph(3), VertexSet.of(4, [0, 1, 2]))
    assert exc.value.hypothesis == "open-twins-deg1"


ORDERS = [3, 4, 5, 6, 7] + [pytest.param(n, marks=pytest.mark.slow) for n in (8, 9, 10)]


@pytest.mark.parametrize("n", ORDERS)
def test_normalize_on_enumerated_ld_sets(n):
    """Test normalisation keeps the LD property and never grows the set"""
    for g in enumerate_graphs(EnumFilter(n, hypothesis_class=True)):
        leaves, supports = leaves_and_supports(g)
        everything = VertexSet.of(n, range(n))
        for s in (ld_number_exact(g).witness, construct_half_ld(g).witness, everything):
            for out in (normalize_leaves_out(g, s), normalize_supports_in(g, s)):
                assert verify_ld(g, out).is_valid, g
                assert len(out) <= len(s)
                assert supports.issubset(out)
            assert not (leaves & normalize_leaves_out(g, s))


def test_replay_detects_tampering():
    """Test an edited trace no longer replays"""
    g = generate(FamilySpec.parse("TightCubic10")).graph
    cert = construct_half_ld(g)
    assert replay_certificate(g, cert)
    renamed = replace(cert, trace=(replace(cert.trace[0], rule_id="made-up"),) + cert.trace[1:])
    with pytest.raises(ValueError):
        replay_certificate(g, renamed)
    shrunk = replace(cert, witness=VertexSet.of(g.n, list(cert.witness)[:1]))
    with pytest.raises(ValueError):
        replay_certificate(g, shrunk)


def test_construct_on_atlas(atlas_subcubic):
    """Test every atlas graph in the input class gets a sound certificate"""
    seen = 0
    for g in atlas_subcubic:
        if classify_hypotheses(g) == "outside":
            continue
        assert_sound(g, construct_half_ld(g))
        seen += 1
    assert seen >= 10


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7] + [pytest.param(n, marks=pytest.mark.slow) for n in (8, 9, 10)])
def test_construct_exhaustive(n):
    """Test every connected subcubic graph of order n in the input class"""
    for g in enumerate_graphs(EnumFilter(n, hypothesis_class=True)):
        cert = construct_half_ld(g)
        assert_sound(g, cert)
        assert ld_number_exact(g).value <= len(cert.witness) <= n // 2
        assert set(cert.fallback_rules()) <= {"twin-free/c4-free"}, g
        assert cert.repair_rules() == []
        assert cert.fallback_count == len(cert.fallback_rules())
